#pragma once

// Correlation measures for two-qubit states. Entropies are in nats.

#include <vector>

#include "heomcorr/model.hpp"
#include "heomcorr/operators.hpp"

namespace heomcorr::measures {

/// Raised when a state handed to a measure is not a density matrix within
/// the integration drift bounds (Hermiticity 1e-8, trace 1e-6, smallest
/// eigenvalue -1e-6).
class InvariantViolation : public NumericalError {
public:
    using NumericalError::NumericalError;
};

/// von Neumann entropy -sum p ln p of a density matrix of any dimension,
/// with 0 ln 0 = 0 and eigenvalues below 1e-10 treated as zero.
double entropy(const ComplexMatrix& rho);

/// S(rho_A) + S(rho_B) - S(rho).
double mutual_information(const DensityMatrix& rho);

/// Rank-1 projective measurement on qubit B along the Bloch direction
/// |n> = cos(theta/2)|1> + e^{i phi} sin(theta/2)|0>.
struct MeasurementProjector {
    double theta = 0.0;
    double phi = 0.0;

    /// |n><n| and I - |n><n| as 2x2 matrices.
    ComplexMatrix plus() const;
    ComplexMatrix minus() const;
};

struct ConditionalBranch {
    double probability;
    ComplexMatrix state;  // 4x4 post-measurement state (I x Pi) rho (I x Pi) / p
};

/// Post-measurement ensemble for outcomes (+, -). Outcomes with probability
/// below 1e-12 are omitted.
std::vector<ConditionalBranch> conditional_ensemble(const DensityMatrix& rho, const MeasurementProjector& m);

/// S(rho_A) - sum_k p_k S(rho_k) for one measurement.
double measured_information(const DensityMatrix& rho, const MeasurementProjector& m);

struct ClassicalCorrelation {
    double value = 0.0;  // nats
    MeasurementProjector optimum;
};

/// Maximizes measured_information over the Bloch sphere: a 64 x 64
/// (theta, phi) grid, then Nelder-Mead from the three best grid points.
ClassicalCorrelation classical_correlation(const DensityMatrix& rho);

struct DiscordResult {
    double discord = 0.0;
    double classical_correlation = 0.0;
    double mutual_information = 0.0;
    MeasurementProjector optimum;
};

/// Quantum discord with measurement on qubit B.
DiscordResult discord(const DensityMatrix& rho);

/// Wootters concurrence from the eigenvalues of sqrt(rho) rho~ sqrt(rho).
double concurrence(const DensityMatrix& rho);

/// Closed form for X states:
/// 2 max{0, |rho_23| - sqrt(rho_11 rho_44), |rho_14| - sqrt(rho_22 rho_33)}.
double concurrence_x_form(const DensityMatrix& rho);

inline constexpr double kLn2 = 0.69314718055994530942;

}  // namespace heomcorr::measures
