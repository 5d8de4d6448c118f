#pragma once

#include <stdexcept>
#include <string>

namespace dsr {

// Base class for all typed failures raised by this library.
struct Error : std::runtime_error {
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

#define DSR_DEFINE_ERROR(Name)                                  \
  struct Name : Error {                                         \
    explicit Name(const std::string& msg = #Name) : Error(msg) {} \
  }

DSR_DEFINE_ERROR(DimensionMismatch);
DSR_DEFINE_ERROR(NotPositiveDefinite);
DSR_DEFINE_ERROR(Diverged);
DSR_DEFINE_ERROR(NotOneHot);
DSR_DEFINE_ERROR(NonPositiveObservation);
DSR_DEFINE_ERROR(NegativeCount);
DSR_DEFINE_ERROR(SingularNormalEquations);
DSR_DEFINE_ERROR(SingularHessian);
DSR_DEFINE_ERROR(ZeroVariance);
DSR_DEFINE_ERROR(UnknownBenchmark);
DSR_DEFINE_ERROR(EmptyTrajectory);
DSR_DEFINE_ERROR(TooShort);
DSR_DEFINE_ERROR(HorizonTooLong);
DSR_DEFINE_ERROR(LengthMismatch);
DSR_DEFINE_ERROR(MissingDecoder);
DSR_DEFINE_ERROR(IncompatibleCheckpoint);
DSR_DEFINE_ERROR(AllRestartsDiverged);
DSR_DEFINE_ERROR(UnsupportedPrimitive);
DSR_DEFINE_ERROR(IoError);
DSR_DEFINE_ERROR(UnknownMetric);

#undef DSR_DEFINE_ERROR

inline void require(bool cond, const std::string& msg) {
  if (!cond) throw DimensionMismatch(msg);
}

}  // namespace dsr
