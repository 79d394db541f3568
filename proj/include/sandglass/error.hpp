#pragma once

#include <stdexcept>
#include <string>

namespace sandglass {

// Failure categories used across the toolkit. Numeric routines throw these
// instead of returning sentinels; sweep drivers catch them and record a
// per-row failure code so a batch run never dies on an infeasible design.
enum class ErrorCode {
    Domain,            // input outside the admissible parameter domain (e.g. W <= 0)
    DegenerateSpec,    // structurally degenerate design (collapsed waist circle, ...)
    EmptySet,          // no real realization exists
    Overlap,           // development would overlap itself (b, d or f not positive)
    NoSolution,        // root finding found nothing in the search range
    VerificationFailed,// a root exists but downstream validation rejected it
    NoPathConvergence, // saddle search did not converge
    SaddleNotShaky,    // converged stationary point fails the singularity check
    SingularSystem,    // linear system for the flex is singular
    ZeroFlex,          // flex is identically zero, cannot normalize
    EmptyTable,        // argmax over a table with no valid rows
    NonClosedMesh,     // volume requested for a mesh that is not closed
    DegenerateFace,    // zero-area face where a normal is required
    Usage,             // malformed CLI/config input
};

class Error : public std::runtime_error {
  public:
    Error(ErrorCode code, const std::string &what)
        : std::runtime_error(what), m_code(code) {}
    ErrorCode code() const { return m_code; }

  private:
    ErrorCode m_code;
};

inline const char *error_code_name(ErrorCode c) {
    switch (c) {
    case ErrorCode::Domain:             return "DOMAIN";
    case ErrorCode::DegenerateSpec:     return "DEGENERATE_SPEC";
    case ErrorCode::EmptySet:           return "EMPTY_SET";
    case ErrorCode::Overlap:            return "OVERLAP";
    case ErrorCode::NoSolution:         return "NO_SOLUTION";
    case ErrorCode::VerificationFailed: return "VERIFICATION_FAILED";
    case ErrorCode::NoPathConvergence:  return "NO_PATH_CONVERGENCE";
    case ErrorCode::SaddleNotShaky:     return "SADDLE_NOT_SHAKY";
    case ErrorCode::SingularSystem:     return "SINGULAR_SYSTEM";
    case ErrorCode::ZeroFlex:           return "ZERO_FLEX";
    case ErrorCode::EmptyTable:         return "EMPTY_TABLE";
    case ErrorCode::NonClosedMesh:      return "NON_CLOSED_MESH";
    case ErrorCode::DegenerateFace:     return "DEGENERATE_FACE";
    case ErrorCode::Usage:              return "USAGE";
    }
    return "UNKNOWN";
}

} // namespace sandglass
