#pragma once

#include <cmath>
#include <stdexcept>
#include <string>

namespace scatter1d {

enum class ErrorCode {
    InvalidPotential,          // malformed model data (overlapping layers, short grid, ...)
    ParseFailure,              // unreadable or malformed potential file
    PointwiseDeltaEvaluation,  // evaluate() on a delta model
    NonpositiveWavenumber,     // k <= 0 where k > 0 is required
    StepTooLarge,              // integrator step fails h * max(|k|, kappa_max) <= 0.5
    WavenumberMismatch,        // compose() of matrices at different k
    SingularTransferMatrix,    // det M == 0 (construction) or |det M| below guard (inversion)
    SpectralSingularity,       // |M22| <= zero guard: T diverges, amplitudes undefined
    ZeroTransmission,          // |T| <= zero guard: transmission phase tau undefined
    DegenerateD,               // |D| <= zero guard: k -> -k amplitude transform undefined
    BracketInvalid,            // refine_zero bracket degenerate or out of range
    NonsingularS,              // cpa_mode on |det S| above the acceptance threshold
    NotConverged,              // design_cpa failed after all restarts
    UsageError,                // bad operation arguments (unknown method, bad range, ...)
};

/// Library error carrying a machine-checkable code. `detail` holds the
/// magnitude that tripped a guard (|M22|, |D|, best achieved |D|, ...) where
/// "at" vs "near" a degeneracy matters to the caller; NaN otherwise.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what, double detail = std::nan(""))
        : std::runtime_error(what), code_(code), detail_(detail) {}

    ErrorCode code() const { return code_; }
    double detail() const { return detail_; }

private:
    ErrorCode code_;
    double detail_;
};

}  // namespace scatter1d
