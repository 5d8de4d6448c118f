#pragma once

#include <Eigen/Dense>
#include <vector>

namespace dsr {

/*
 * Symmetric block-tridiagonal matrix over T diagonal blocks of size M:
 *
 *   | S_1   K_1^T            |
 *   | K_1   S_2   K_2^T      |
 *   |       K_2   S_3   ...  |
 *   |             ...        |
 *
 * sub[t] holds the block at position (t+1, t); the super-diagonal is its
 * transpose. Diagonal blocks are symmetrized on finalize() to absorb
 * floating-point asymmetry.
 */
struct BlockTriDiag {
  int M = 0;
  int T = 0;
  std::vector<Eigen::MatrixXd> diag;  // T blocks, each M x M
  std::vector<Eigen::MatrixXd> sub;   // T-1 blocks, each M x M

  BlockTriDiag() = default;
  BlockTriDiag(int M_, int T_)
      : M(M_), T(T_),
        diag(T_, Eigen::MatrixXd::Zero(M_, M_)),
        sub(T_ > 0 ? T_ - 1 : 0, Eigen::MatrixXd::Zero(M_, M_)) {}

  static BlockTriDiag identity(int M, int T);

  // (S_t + S_t^T)/2 on every diagonal block.
  void symmetrize();

  // Shift the whole diagonal by tau (Levenberg-style damping).
  void add_to_diagonal(double tau);

  int size() const { return M * T; }

  // Dense materialization, for tests and small-instance oracles only.
  Eigen::MatrixXd dense() const;

  // y = A x in O(T M^2).
  Eigen::VectorXd matvec(const Eigen::VectorXd& x) const;
};

/*
 * Lower block-bidiagonal Cholesky factor L with L L^T = A. diag[t] is the
 * (lower-triangular) Cholesky factor of the t-th Schur complement, sub[t]
 * the factor block at (t+1, t).
 */
struct BtdCholesky {
  int M = 0;
  int T = 0;
  std::vector<Eigen::MatrixXd> diag;
  std::vector<Eigen::MatrixXd> sub;

  int size() const { return M * T; }

  Eigen::VectorXd solve_lower(const Eigen::VectorXd& b) const;  // L y = b
  Eigen::VectorXd solve_upper(const Eigen::VectorXd& b) const;  // L^T x = b
  Eigen::VectorXd solve(const Eigen::VectorXd& b) const;        // A x = b
  double logdet() const;  // log det(A)
  Eigen::MatrixXd dense() const;
};

struct BtdMarginals {
  std::vector<Eigen::MatrixXd> diag;   // T blocks: (A^-1)_{t,t}
  std::vector<Eigen::MatrixXd> super;  // T-1 blocks: (A^-1)_{t,t+1}
};

// Throws NotPositiveDefinite if a block pivot fails.
BtdCholesky btd_cholesky(const BlockTriDiag& A);

// x with A x = b; throws DimensionMismatch if b.size() != M*T.
Eigen::VectorXd btd_solve(const BlockTriDiag& A, const Eigen::VectorXd& b);

double btd_logdet(const BlockTriDiag& A);

// Diagonal and first super-diagonal blocks of A^-1 without forming it.
BtdMarginals btd_marginals(const BlockTriDiag& A);
BtdMarginals btd_marginals(const BtdCholesky& chol);

}  // namespace dsr
