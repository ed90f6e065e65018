#pragma once

#include <stdexcept>
#include <string>

namespace rsc {

/// Base class for every error raised by the library. `code()` is a stable,
/// machine-readable identifier used by the CLI error object.
class Error : public std::runtime_error {
 public:
  Error(std::string code, const std::string& message)
      : std::runtime_error(message), code_(std::move(code)) {}

  const std::string& code() const noexcept { return code_; }

 private:
  std::string code_;
};

#define RSC_DEFINE_ERROR(Name)                                      \
  class Name : public Error {                                       \
   public:                                                          \
    explicit Name(const std::string& message) : Error(#Name, message) {} \
  };

RSC_DEFINE_ERROR(InvalidArgument)
RSC_DEFINE_ERROR(InvalidTuple)
RSC_DEFINE_ERROR(UnknownRelation)
RSC_DEFINE_ERROR(NotASubset)
RSC_DEFINE_ERROR(FrameMismatch)
RSC_DEFINE_ERROR(NotInClass)
RSC_DEFINE_ERROR(SizeLimit)
RSC_DEFINE_ERROR(InvalidGroup)
RSC_DEFINE_ERROR(InvalidAction)
RSC_DEFINE_ERROR(NotFree)
RSC_DEFINE_ERROR(VertexClash)
RSC_DEFINE_ERROR(PreconditionFailed)
RSC_DEFINE_ERROR(DegenerateCell)
RSC_DEFINE_ERROR(ConfigError)
RSC_DEFINE_ERROR(IoError)

#undef RSC_DEFINE_ERROR

/// Raised when a witness search exhausts its candidate budget. Carries the
/// per-candidate success probability and the resulting failure bound
/// (1 - p)^candidates so callers can judge how surprising the failure is.
class WitnessNotFound : public Error {
 public:
  WitnessNotFound(const std::string& message, double success_probability,
                  std::size_t candidates, double failure_bound)
      : Error("WitnessNotFound", message),
        success_probability_(success_probability),
        candidates_(candidates),
        failure_bound_(failure_bound) {}

  double success_probability() const noexcept { return success_probability_; }
  std::size_t candidates() const noexcept { return candidates_; }
  double failure_bound() const noexcept { return failure_bound_; }

 private:
  double success_probability_;
  std::size_t candidates_;
  double failure_bound_;
};

}  // namespace rsc
