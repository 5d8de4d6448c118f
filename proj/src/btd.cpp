#include "dsrecon/btd.hpp"

#include <cmath>

#include "dsrecon/errors.hpp"

namespace dsr {

BlockTriDiag BlockTriDiag::identity(int M, int T) {
  BlockTriDiag A(M, T);
  for (auto& S : A.diag) S = Eigen::MatrixXd::Identity(M, M);
  return A;
}

void BlockTriDiag::symmetrize() {
  for (auto& S : diag) S = 0.5 * (S + S.transpose()).eval();
}

void BlockTriDiag::add_to_diagonal(double tau) {
  for (auto& S : diag) S.diagonal().array() += tau;
}

Eigen::MatrixXd BlockTriDiag::dense() const {
  Eigen::MatrixXd D = Eigen::MatrixXd::Zero(size(), size());
  for (int t = 0; t < T; ++t) D.block(t * M, t * M, M, M) = diag[t];
  for (int t = 0; t + 1 < T; ++t) {
    D.block((t + 1) * M, t * M, M, M) = sub[t];
    D.block(t * M, (t + 1) * M, M, M) = sub[t].transpose();
  }
  return D;
}

Eigen::VectorXd BlockTriDiag::matvec(const Eigen::VectorXd& x) const {
  require(x.size() == size(), "btd matvec: vector length mismatch");
  Eigen::VectorXd y(size());
  for (int t = 0; t < T; ++t) {
    y.segment(t * M, M) = diag[t] * x.segment(t * M, M);
    if (t > 0) y.segment(t * M, M) += sub[t - 1] * x.segment((t - 1) * M, M);
    if (t + 1 < T)
      y.segment(t * M, M) += sub[t].transpose() * x.segment((t + 1) * M, M);
  }
  return y;
}

namespace {

Eigen::MatrixXd chol_block(const Eigen::MatrixXd& S) {
  Eigen::LLT<Eigen::MatrixXd> llt(S);
  if (llt.info() != Eigen::Success)
    throw NotPositiveDefinite("block Cholesky pivot failed");
  return llt.matrixL();
}

}  // namespace

BtdCholesky btd_cholesky(const BlockTriDiag& A) {
  BtdCholesky L;
  L.M = A.M;
  L.T = A.T;
  L.diag.resize(A.T);
  L.sub.resize(A.T > 0 ? A.T - 1 : 0);

  // D_1 D_1^T = S_1;  E_t = K_t D_t^{-T};  D_{t+1} D_{t+1}^T = S_{t+1} - E_t E_t^T
  Eigen::MatrixXd schur = A.diag[0];
  L.diag[0] = chol_block(schur);
  for (int t = 0; t + 1 < A.T; ++t) {
    L.sub[t] = L.diag[t]
                   .triangularView<Eigen::Lower>()
                   .solve(A.sub[t].transpose())
                   .transpose();
    schur.noalias() = A.diag[t + 1] - L.sub[t] * L.sub[t].transpose();
    L.diag[t + 1] = chol_block(schur);
  }
  return L;
}

Eigen::VectorXd BtdCholesky::solve_lower(const Eigen::VectorXd& b) const {
  require(b.size() == size(), "btd solve: vector length mismatch");
  Eigen::VectorXd y(size());
  for (int t = 0; t < T; ++t) {
    Eigen::VectorXd r = b.segment(t * M, M);
    if (t > 0) r.noalias() -= sub[t - 1] * y.segment((t - 1) * M, M);
    y.segment(t * M, M) = diag[t].triangularView<Eigen::Lower>().solve(r);
  }
  return y;
}

Eigen::VectorXd BtdCholesky::solve_upper(const Eigen::VectorXd& b) const {
  require(b.size() == size(), "btd solve: vector length mismatch");
  Eigen::VectorXd x(size());
  for (int t = T - 1; t >= 0; --t) {
    Eigen::VectorXd r = b.segment(t * M, M);
    if (t + 1 < T) r.noalias() -= sub[t].transpose() * x.segment((t + 1) * M, M);
    x.segment(t * M, M) =
        diag[t].transpose().triangularView<Eigen::Upper>().solve(r);
  }
  return x;
}

Eigen::VectorXd BtdCholesky::solve(const Eigen::VectorXd& b) const {
  return solve_upper(solve_lower(b));
}

double BtdCholesky::logdet() const {
  double acc = 0.0;
  for (const auto& D : diag)
    acc += D.diagonal().array().log().sum();
  return 2.0 * acc;
}

Eigen::MatrixXd BtdCholesky::dense() const {
  Eigen::MatrixXd D = Eigen::MatrixXd::Zero(size(), size());
  for (int t = 0; t < T; ++t) D.block(t * M, t * M, M, M) = diag[t];
  for (int t = 0; t + 1 < T; ++t) D.block((t + 1) * M, t * M, M, M) = sub[t];
  return D;
}

Eigen::VectorXd btd_solve(const BlockTriDiag& A, const Eigen::VectorXd& b) {
  require(b.size() == A.size(), "btd_solve: rhs length != M*T");
  return btd_cholesky(A).solve(b);
}

double btd_logdet(const BlockTriDiag& A) { return btd_cholesky(A).logdet(); }

BtdMarginals btd_marginals(const BtdCholesky& L) {
  const int M = L.M, T = L.T;
  BtdMarginals out;
  out.diag.resize(T);
  out.super.resize(T > 0 ? T - 1 : 0);

  // Takahashi-style backward recursion on the Schur complements
  // P_t = D_t D_t^T:
  //   Sigma_{T,T}  = P_T^{-1}
  //   U_t          = P_t^{-1} K_t^T = D_t^{-T} E_t^T
  //   Sigma_{t,t+1} = -U_t Sigma_{t+1,t+1}
  //   Sigma_{t,t}   = P_t^{-1} + U_t Sigma_{t+1,t+1} U_t^T
  auto pinv = [&](int t) {
    Eigen::MatrixXd Di = L.diag[t]
                             .triangularView<Eigen::Lower>()
                             .solve(Eigen::MatrixXd::Identity(M, M));
    return (Di.transpose() * Di).eval();
  };

  out.diag[T - 1] = pinv(T - 1);
  for (int t = T - 2; t >= 0; --t) {
    Eigen::MatrixXd U = L.diag[t]
                            .transpose()
                            .triangularView<Eigen::Upper>()
                            .solve(L.sub[t].transpose());
    out.super[t] = -U * out.diag[t + 1];
    out.diag[t] = pinv(t) + U * out.diag[t + 1] * U.transpose();
    out.diag[t] = 0.5 * (out.diag[t] + out.diag[t].transpose()).eval();
  }
  return out;
}

BtdMarginals btd_marginals(const BlockTriDiag& A) {
  return btd_marginals(btd_cholesky(A));
}

}  // namespace dsr
