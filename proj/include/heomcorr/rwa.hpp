#pragma once

// Rotating-wave baselines: the closed-form X-state propagator for two
// independent Lorentzian baths, and the pseudomode master equation for a
// common bath.

#include <span>
#include <vector>

#include "heomcorr/model.hpp"
#include "heomcorr/trajectory.hpp"

namespace heomcorr::rwa {

struct PFunctionParams {
    double lambda;
    double gamma;

    /// R = sqrt(lambda gamma / 2 - gamma^2 / 4): real in the oscillating
    /// regime, imaginary in the monotone one.
    Complex r() const;
};

/// Single-qubit excited-state survival amplitude
/// e^{-gamma t / 2} [cos(R t) + (gamma / 2R) sin(R t)], real for all t.
double p_amplitude(double t, const PFunctionParams& params);

/// P_t = e^{-gamma t} [cos(R t) + (gamma / 2R) sin(R t)]^2.
double p_function(double t, const PFunctionParams& params);

/// n-th zero (n >= 1) of P_t, located by bisection on the amplitude sign
/// change. Throws std::domain_error when P_t has no zeros (R not real).
double p_function_zero(int n, const PFunctionParams& params);

/// Element map of an X state under two identical independent baths in the
/// interaction picture. Throws ConfigError if rho0 is not X-form.
DensityMatrix rwa_propagate_x(const DensityMatrix& rho0, double t, const PFunctionParams& params);

/// max{0, 2 alpha sqrt(1 - alpha^2) P_t}.
double rwa_concurrence_phi(double alpha, double t, const PFunctionParams& params);
/// max{0, 2 sqrt(1 - alpha^2) P_t [alpha - sqrt(1 - alpha^2)(1 - P_t)]}.
double rwa_concurrence_psi(double alpha, double t, const PFunctionParams& params);

/// Trajectory of rwa_propagate_x on a time grid.
Trajectory rwa_trajectory(const DensityMatrix& rho0, std::span<const double> t_grid, const PFunctionParams& params);

/// Orthonormal level basis used by the pseudomode model, as columns in the
/// |11>,|10>,|01>,|00> qubit basis: |0> = |00>, |+>, |->, |2> = |11>, with
/// |+-> = (|10> +- |01>) / sqrt(2).
ComplexMatrix level_basis();

inline constexpr int kDefaultPhotonCutoff = 32;

/// The top Fock level of the pseudomode became populated.
class FockCutoffExceeded : public ToleranceAbort {
public:
    using ToleranceAbort::ToleranceAbort;
};

struct PseudomodeOptions {
    int n_ph = kDefaultPhotonCutoff;  // Fock levels kept
    double dt = 0.01;
    double max_top_population = 1e-6;
    DriftLimits limits{1e-8, 1e-8, -1e-6};
};

/// Joint system + pseudomode density matrix, row-major over index
/// level * n_ph + photon number.
struct PseudomodeState {
    int n_ph;
    std::vector<Complex> rho;

    ComplexMatrix reduced_levels() const;  // 4x4 in the level basis
    double top_fock_population() const;
    Complex trace() const;
};

/// Common-bath RWA dynamics from
///   d rho/dt = -i[H_0 + omega_c a^dag a + V, rho] - gamma (a^dag a rho + rho a^dag a - 2 a rho a^dag),
///   V = sqrt(lambda gamma) (a |+><0| + a^dag |0><+| + a |2><+| + a^dag |+><2|),
/// with H_0 energies (-omega, 0, 0, omega) on (|0>, |+>, |->, |2>). The
/// pseudomode starts in vacuum; returns the reduced two-qubit state in the
/// qubit basis. Throws ToleranceAbort when the top Fock level population
/// exceeds options.max_top_population, and ConfigError when the qubits are
/// not degenerate.
Trajectory pseudomode_evolve(const DensityMatrix& rho0, const SystemSpec& sys, const BathSpec& bath,
                             std::span<const double> t_grid, PseudomodeOptions options = {});

/// pseudomode_evolve, doubling n_ph on cutoff violations up to max_n_ph.
Trajectory pseudomode_evolve_auto(const DensityMatrix& rho0, const SystemSpec& sys, const BathSpec& bath,
                                  std::span<const double> t_grid, PseudomodeOptions options = {},
                                  int max_n_ph = 256);

}  // namespace heomcorr::rwa
