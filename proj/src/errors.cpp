#include "tcheb/errors.hpp"

namespace tcheb {

const char* to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::Domain: return "domain_error";
    case ErrorCode::Evaluation: return "evaluation_error";
    case ErrorCode::Infeasible: return "infeasible";
    case ErrorCode::Convergence: return "no_convergence";
    case ErrorCode::Singularity: return "singular_jacobian";
    case ErrorCode::Configuration: return "configuration_error";
    case ErrorCode::Precondition: return "precondition_failed";
    case ErrorCode::Degeneracy: return "degenerate_information";
    case ErrorCode::Internal: return "internal_error";
    case ErrorCode::Io: return "io_error";
    case ErrorCode::Schema: return "schema_error";
  }
  return "unknown";
}

}  // namespace tcheb
