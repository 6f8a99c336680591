#pragma once

// Physical problem description: two qubits, Lorentzian bosonic bath(s) at
// zero temperature, and the initial states used in the experiments.
// Frequencies are in units of the qubit splitting omega_0, times in 1/omega_0.

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "heomcorr/operators.hpp"

namespace heomcorr {

class ConfigError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

enum class Topology { Independent, Common };

std::string to_string(Topology t);
Topology topology_from_string(const std::string& s);

struct BathSpec {
    double lambda = 0.0;   // coupling strength
    double gamma = 1.0;    // spectral half-width
    double omega_c = 1.0;  // bath center frequency
    Topology topology = Topology::Independent;

    /// gamma = f * lambda, the figure parametrization.
    static BathSpec from_ratio(double lambda, double f, double omega_c, Topology topology);

    /// gamma / 2 > lambda.
    bool markovian() const { return gamma > 2.0 * lambda; }
    /// lambda * gamma / 2, the correlation amplitude C(0).
    double correlation_amplitude() const { return 0.5 * lambda * gamma; }
    void validate() const;
};

struct SystemSpec {
    double omega_a = 1.0;
    double omega_b = 1.0;
    void validate() const;
};

/// Two-qubit density matrix. Construction checks Hermiticity and unit trace
/// to 1e-10 and a minimum eigenvalue of at least -1e-8.
class DensityMatrix {
public:
    explicit DensityMatrix(ComplexMatrix m);

    /// Wrap without checks; used for integrator output that is validated
    /// separately against looser drift bounds.
    static DensityMatrix unchecked(ComplexMatrix m);

    const ComplexMatrix& matrix() const { return m_; }
    Complex operator()(std::size_t r, std::size_t c) const { return m_(r, c); }

private:
    DensityMatrix() = default;
    ComplexMatrix m_;
};

struct BellPhi { double alpha; };       // alpha|10> + sqrt(1-alpha^2)|01>
struct BellPsi { double alpha; };       // alpha|00> + sqrt(1-alpha^2)|11>
struct WernerPhi { double r; double alpha; };
struct WernerPsi { double r; double alpha; };
struct CustomState { ComplexMatrix rho; };

using InitialStateSpec = std::variant<BellPhi, BellPsi, WernerPhi, WernerPsi, CustomState>;

DensityMatrix build_initial(const InitialStateSpec& spec);

/// J(omega) = (1/2pi) lambda gamma^2 / ((omega - omega_c)^2 + gamma^2).
double spectral_density(double omega, const BathSpec& bath);

/// Zero-temperature correlation (lambda gamma / 2) exp(-(gamma + i omega_c) t).
Complex bath_correlation(double t, const BathSpec& bath);

/// (omega_A/2) sigma_z x I + (omega_B/2) I x sigma_z.
ComplexMatrix system_hamiltonian(const SystemSpec& sys);

/// Independent: [sigma_x x I, I x sigma_x]. Common: [sigma_x x I + I x sigma_x].
std::vector<ComplexMatrix> coupling_operators(Topology topology);

/// Basis kets as 4-vectors in the |11>,|10>,|01>,|00> ordering.
namespace ket {
inline constexpr std::size_t k11 = 0, k10 = 1, k01 = 2, k00 = 3;
}

/// True when every entry off the diagonal and anti-diagonal is below tol.
bool is_x_form(const ComplexMatrix& rho, double tol = 1e-10);

}  // namespace heomcorr
