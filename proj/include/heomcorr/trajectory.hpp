#pragma once

// Sampled reduced-state trajectories shared by the hierarchy and
// pseudomode solvers, plus the drift checks applied to every sample.

#include <string>
#include <vector>

#include "heomcorr/model.hpp"
#include "heomcorr/operators.hpp"

namespace heomcorr {

/// Raised when an integration leaves its drift bounds, a cutoff is too
/// small, or a truncation search fails; maps to the "numerical tolerance"
/// exit status.
class ToleranceAbort : public NumericalError {
public:
    explicit ToleranceAbort(const std::string& what, bool unstable = false)
        : NumericalError(what), unstable_(unstable) {}
    /// True when the integration blew up (step size too large) rather than
    /// drifting slightly out of bounds.
    bool unstable() const { return unstable_; }

private:
    bool unstable_;
};

struct DriftLimits {
    double trace = 1e-6;
    double hermiticity = 1e-8;
    double min_eigenvalue = -1e-6;
};

struct SampleDiagnostics {
    double trace_error = 0.0;
    double hermiticity_defect = 0.0;
    double min_eigenvalue = 0.0;
};

struct Trajectory {
    std::vector<double> times;
    std::vector<DensityMatrix> states;
    std::vector<SampleDiagnostics> diagnostics;
    /// Hierarchy runs only: largest deviation from the ADO adjoint symmetry.
    double max_conjugation_defect = 0.0;
};

SampleDiagnostics diagnose(const ComplexMatrix& rho);

/// Throws ToleranceAbort with `context` in the message when `rho` is
/// non-finite or violates `limits`.
SampleDiagnostics check_sample(const ComplexMatrix& rho, const DriftLimits& limits, double t,
                               const std::string& context);

}  // namespace heomcorr
