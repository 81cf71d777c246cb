#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace kgeom {

/// Base class of all engine errors. `code()` is a stable, machine-parsable
/// identifier; `what()` carries the human-readable detail.
class Error : public std::runtime_error {
 public:
  Error(std::string code, const std::string& msg)
      : std::runtime_error(code + ": " + msg), code_(std::move(code)) {}

  const std::string& code() const noexcept { return code_; }

 private:
  std::string code_;
};

#define KGEOM_ERROR_TYPE(Name, code_literal)            \
  class Name : public Error {                           \
   public:                                              \
    explicit Name(const std::string& msg)               \
        : Error(code_literal, msg) {}                   \
  }

KGEOM_ERROR_TYPE(DomainError, "domain-error");
KGEOM_ERROR_TYPE(OrderError, "order-error");
KGEOM_ERROR_TYPE(NotPositiveDefinite, "not-positive-definite");
KGEOM_ERROR_TYPE(ZeroDirection, "zero-direction");
KGEOM_ERROR_TYPE(DegeneratePlane, "degenerate-plane");
KGEOM_ERROR_TYPE(ProfileInadmissible, "profile-inadmissible");
KGEOM_ERROR_TYPE(WeightNotPositive, "weight-not-positive");
KGEOM_ERROR_TYPE(OutsideDisc, "outside-disc");
KGEOM_ERROR_TYPE(OutOfRange, "out-of-range");
KGEOM_ERROR_TYPE(NotNegativelyPinched, "not-negatively-pinched");
KGEOM_ERROR_TYPE(DeltaTooSmall, "delta-too-small");
KGEOM_ERROR_TYPE(UnknownModel, "unknown-model");
KGEOM_ERROR_TYPE(BadParams, "bad-params");
KGEOM_ERROR_TYPE(ParseError, "parse-error");
KGEOM_ERROR_TYPE(ConfigError, "config-error");

#undef KGEOM_ERROR_TYPE

}  // namespace kgeom
