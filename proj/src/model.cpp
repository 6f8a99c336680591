#include "heomcorr/model.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

namespace heomcorr {

std::string to_string(Topology t) { return t == Topology::Independent ? "independent" : "common"; }

Topology topology_from_string(const std::string& s) {
    if (s == "independent") return Topology::Independent;
    if (s == "common") return Topology::Common;
    throw ConfigError("topology must be \"independent\" or \"common\", got \"" + s + "\"");
}

BathSpec BathSpec::from_ratio(double lambda, double f, double omega_c, Topology topology) {
    return BathSpec{lambda, f * lambda, omega_c, topology};
}

void BathSpec::validate() const {
    if (!(lambda >= 0.0)) throw ConfigError("bath.lambda must be >= 0");
    if (!(gamma > 0.0)) throw ConfigError("bath.gamma must be > 0");
    if (!(omega_c > 0.0)) throw ConfigError("bath.omega_c must be > 0");
}

void SystemSpec::validate() const {
    if (!(omega_a > 0.0) || !(omega_b > 0.0)) throw ConfigError("system frequencies must be positive");
}

DensityMatrix::DensityMatrix(ComplexMatrix m) : m_(std::move(m)) {
    if (m_.rows() != 4 || m_.cols() != 4) throw DimensionError("DensityMatrix must be 4x4");
    const double herm = hermiticity_defect(m_);
    if (herm > 1e-10) {
        std::ostringstream msg;
        msg << "density matrix is not Hermitian (defect " << herm << ")";
        throw ConfigError(msg.str());
    }
    const Complex tr = m_.trace();
    if (std::abs(tr - 1.0) > 1e-10) {
        std::ostringstream msg;
        msg << "density matrix trace is " << tr.real() << ", expected 1";
        throw ConfigError(msg.str());
    }
    const double min_eig = hermitian_eigenvalues(m_).front();
    if (min_eig < -1e-8) {
        std::ostringstream msg;
        msg << "density matrix has negative eigenvalue " << min_eig;
        throw ConfigError(msg.str());
    }
}

DensityMatrix DensityMatrix::unchecked(ComplexMatrix m) {
    DensityMatrix d;
    d.m_ = std::move(m);
    return d;
}

namespace {

void check_unit(double v, const char* name) {
    if (!(v >= 0.0 && v <= 1.0)) {
        std::ostringstream msg;
        msg << "initial." << name << " must lie in [0,1], got " << v;
        throw ConfigError(msg.str());
    }
}

ComplexMatrix projector(std::size_t i, double ci, std::size_t j, double cj) {
    std::vector<Complex> psi(4, 0.0);
    psi[i] += ci;
    psi[j] += cj;
    ComplexMatrix out(4, 4);
    for (std::size_t r = 0; r < 4; ++r)
        for (std::size_t c = 0; c < 4; ++c) out(r, c) = psi[r] * std::conj(psi[c]);
    return out;
}

ComplexMatrix phi_projector(double alpha) {
    return projector(ket::k10, alpha, ket::k01, std::sqrt(1.0 - alpha * alpha));
}

ComplexMatrix psi_projector(double alpha) {
    return projector(ket::k00, alpha, ket::k11, std::sqrt(1.0 - alpha * alpha));
}

ComplexMatrix werner(const ComplexMatrix& pure, double r) {
    return r * pure + ((1.0 - r) / 4.0) * ComplexMatrix::identity(4);
}

}  // namespace

DensityMatrix build_initial(const InitialStateSpec& spec) {
    struct Visitor {
        DensityMatrix operator()(const BellPhi& s) const {
            check_unit(s.alpha, "alpha");
            return DensityMatrix(phi_projector(s.alpha));
        }
        DensityMatrix operator()(const BellPsi& s) const {
            check_unit(s.alpha, "alpha");
            return DensityMatrix(psi_projector(s.alpha));
        }
        DensityMatrix operator()(const WernerPhi& s) const {
            check_unit(s.alpha, "alpha");
            check_unit(s.r, "r");
            return DensityMatrix(werner(phi_projector(s.alpha), s.r));
        }
        DensityMatrix operator()(const WernerPsi& s) const {
            check_unit(s.alpha, "alpha");
            check_unit(s.r, "r");
            return DensityMatrix(werner(psi_projector(s.alpha), s.r));
        }
        DensityMatrix operator()(const CustomState& s) const {
            if (s.rho.rows() != 4 || s.rho.cols() != 4) throw ConfigError("custom initial state must be 4x4");
            return DensityMatrix(s.rho);
        }
    };
    return std::visit(Visitor{}, spec);
}

double spectral_density(double omega, const BathSpec& bath) {
    const double detuning = omega - bath.omega_c;
    return bath.lambda * bath.gamma * bath.gamma /
           (2.0 * std::numbers::pi * (detuning * detuning + bath.gamma * bath.gamma));
}

Complex bath_correlation(double t, const BathSpec& bath) {
    return bath.correlation_amplitude() * std::exp(-Complex{bath.gamma, bath.omega_c} * t);
}

ComplexMatrix system_hamiltonian(const SystemSpec& sys) {
    const auto id = pauli::identity2();
    const auto sz = pauli::z();
    return (0.5 * sys.omega_a) * kron(sz, id) + (0.5 * sys.omega_b) * kron(id, sz);
}

std::vector<ComplexMatrix> coupling_operators(Topology topology) {
    const auto id = pauli::identity2();
    const auto sx = pauli::x();
    auto qa = kron(sx, id);
    auto qb = kron(id, sx);
    if (topology == Topology::Independent) return {qa, qb};
    return {qa + qb};
}

bool is_x_form(const ComplexMatrix& rho, double tol) {
    if (rho.rows() != 4 || rho.cols() != 4) return false;
    for (std::size_t r = 0; r < 4; ++r)
        for (std::size_t c = 0; c < 4; ++c)
            if (r != c && r + c != 3 && std::abs(rho(r, c)) > tol) return false;
    return true;
}

}  // namespace heomcorr
