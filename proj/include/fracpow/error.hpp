#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace fracpow {

enum class ErrorCode {
  Domain,
  OutOfRange,
  NonConvergence,
  EmptyLevel,
  NoAdmissibleIndex,
  DegenerateCertificate,
  PrecisionExhausted,
  Unsupported,
  Config,
};

std::string_view to_string(ErrorCode code);

/// Base of every error raised by the library. The code is stable and is what
/// the CLI prints in its machine-readable error line.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

#define FRACPOW_DEFINE_ERROR(Name, Code)                                      \
  class Name : public Error {                                                 \
   public:                                                                    \
    explicit Name(const std::string& what) : Error(ErrorCode::Code, what) {} \
  };

FRACPOW_DEFINE_ERROR(DomainError, Domain)
FRACPOW_DEFINE_ERROR(OutOfRange, OutOfRange)
// The requested width is not reachable at the current precision; the caller
// owns the precision schedule and is expected to retry with more bits.
FRACPOW_DEFINE_ERROR(NonConvergence, NonConvergence)
FRACPOW_DEFINE_ERROR(EmptyLevel, EmptyLevel)
FRACPOW_DEFINE_ERROR(NoAdmissibleIndex, NoAdmissibleIndex)
FRACPOW_DEFINE_ERROR(DegenerateCertificate, DegenerateCertificate)
FRACPOW_DEFINE_ERROR(PrecisionExhausted, PrecisionExhausted)
FRACPOW_DEFINE_ERROR(Unsupported, Unsupported)
FRACPOW_DEFINE_ERROR(ConfigError, Config)

#undef FRACPOW_DEFINE_ERROR

}  // namespace fracpow
