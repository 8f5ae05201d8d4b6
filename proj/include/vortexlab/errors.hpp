#pragma once

#include <stdexcept>
#include <string>

namespace vortexlab {

/// Failure kinds surfaced by the library. Each maps 1:1 onto a documented
/// error condition of some operation.
enum class errc {
  empty_system,
  domain_violation,
  coincident_vortices,
  coincident_rings,
  invalid_state,
  non_positive_base,
  singular_denominator,
  zero_nu,
  singular_point,
  wrong_arity,
  mixed_signs,
  beyond_collapse,
  schema_error,
  validation_error,
  io_error,
  unknown_subcommand,
};

inline const char* errc_name(errc c) noexcept {
  switch (c) {
    case errc::empty_system: return "EmptySystem";
    case errc::domain_violation: return "DomainViolation";
    case errc::coincident_vortices: return "CoincidentVortices";
    case errc::coincident_rings: return "CoincidentRings";
    case errc::invalid_state: return "InvalidState";
    case errc::non_positive_base: return "NonPositiveBase";
    case errc::singular_denominator: return "SingularDenominator";
    case errc::zero_nu: return "ZeroNu";
    case errc::singular_point: return "SingularPoint";
    case errc::wrong_arity: return "WrongArity";
    case errc::mixed_signs: return "MixedSigns";
    case errc::beyond_collapse: return "BeyondCollapse";
    case errc::schema_error: return "SchemaError";
    case errc::validation_error: return "ValidationError";
    case errc::io_error: return "IoError";
    case errc::unknown_subcommand: return "UnknownSubcommand";
  }
  return "UnknownError";
}

class error : public std::runtime_error {
 public:
  error(errc code, const std::string& what)
      : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}

  errc code() const noexcept { return code_; }

 private:
  errc code_;
};

[[noreturn]] inline void fail(errc code, const std::string& what) {
  throw error(code, what);
}

}  // namespace vortexlab
