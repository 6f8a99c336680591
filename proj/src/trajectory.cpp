#include "heomcorr/trajectory.hpp"

#include <cmath>
#include <sstream>

namespace heomcorr {

SampleDiagnostics diagnose(const ComplexMatrix& rho) {
    SampleDiagnostics d;
    d.trace_error = std::abs(rho.trace() - 1.0);
    d.hermiticity_defect = hermiticity_defect(rho);
    ComplexMatrix sym(rho.rows(), rho.cols());
    for (std::size_t r = 0; r < rho.rows(); ++r)
        for (std::size_t c = 0; c < rho.cols(); ++c) sym(r, c) = 0.5 * (rho(r, c) + std::conj(rho(c, r)));
    d.min_eigenvalue = hermitian_eigenvalues(sym).front();
    return d;
}

SampleDiagnostics check_sample(const ComplexMatrix& rho, const DriftLimits& limits, double t,
                               const std::string& context) {
    for (const auto& z : rho.entries()) {
        if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) {
            std::ostringstream msg;
            msg << "integration diverged at t = " << t << " (" << context << "); reduce dt";
            throw ToleranceAbort(msg.str(), true);
        }
    }
    const SampleDiagnostics diag = diagnose(rho);
    if (diag.trace_error > limits.trace || diag.hermiticity_defect > limits.hermiticity ||
        diag.min_eigenvalue < limits.min_eigenvalue) {
        std::ostringstream msg;
        msg << "drift bound exceeded at t = " << t << ": trace error " << diag.trace_error << ", hermiticity defect "
            << diag.hermiticity_defect << ", min eigenvalue " << diag.min_eigenvalue << " (" << context
            << "); use a smaller dt or a larger truncation";
        throw ToleranceAbort(msg.str(), diag.trace_error > 1e-3 || max_abs(rho) > 10.0);
    }
    return diag;
}

}  // namespace heomcorr
