#include "heomcorr/measures.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <sstream>

#include "heomcorr/nelder_mead.hpp"

namespace heomcorr::measures {

namespace {

constexpr double kEigenFloor = 1e-10;
constexpr double kBranchFloor = 1e-12;

// Checks drift-level density invariants and returns the Hermitian part.
ComplexMatrix validated(const ComplexMatrix& rho) {
    if (!rho.is_square()) throw DimensionError("measures: state must be square");
    const double herm = hermiticity_defect(rho);
    if (herm > 1e-8) {
        std::ostringstream msg;
        msg << "measures: state is not Hermitian (defect " << herm << ")";
        throw InvariantViolation(msg.str());
    }
    const double trace_error = std::abs(rho.trace() - 1.0);
    if (trace_error > 1e-6) {
        std::ostringstream msg;
        msg << "measures: state trace deviates from 1 by " << trace_error;
        throw InvariantViolation(msg.str());
    }
    ComplexMatrix sym(rho.rows(), rho.cols());
    for (std::size_t r = 0; r < rho.rows(); ++r)
        for (std::size_t c = 0; c < rho.cols(); ++c) sym(r, c) = 0.5 * (rho(r, c) + std::conj(rho(c, r)));
    return sym;
}

double entropy_of_spectrum(const std::vector<double>& eigenvalues) {
    double s = 0.0;
    for (double p : eigenvalues)
        if (p > kEigenFloor) s -= p * std::log(p);
    return s;
}

// Entropy of a (possibly unnormalized) 2x2 Hermitian block divided by its trace.
double entropy_2x2(Complex a, Complex b, Complex d) {
    const double tr = a.real() + d.real();
    if (tr <= 0.0) return 0.0;
    const double mean = 0.5;
    const double radius = std::hypot(0.5 * (a.real() - d.real()), std::abs(b)) / tr;
    return entropy_of_spectrum({mean - radius, mean + radius});
}

double checked_entropy(const ComplexMatrix& sym) {
    const auto eig = hermitian_eigenvalues(sym);
    if (eig.front() < -1e-6) {
        std::ostringstream msg;
        msg << "measures: state has negative eigenvalue " << eig.front();
        throw InvariantViolation(msg.str());
    }
    return entropy_of_spectrum(eig);
}

// Unnormalized conditional state of A, Tr_B[(I x Pi) rho], for projector Pi.
std::array<Complex, 4> conditional_a(const ComplexMatrix& rho, const ComplexMatrix& pi) {
    std::array<Complex, 4> out{};
    for (std::size_t a = 0; a < 2; ++a)
        for (std::size_t ap = 0; ap < 2; ++ap) {
            Complex s{};
            for (std::size_t b = 0; b < 2; ++b)
                for (std::size_t c = 0; c < 2; ++c) s += pi(b, c) * rho(2 * a + c, 2 * ap + b);
            out[2 * a + ap] = s;
        }
    return out;
}

ComplexMatrix projector_for(double theta, double phi) {
    const Complex u = std::cos(0.5 * theta);
    const Complex v = std::polar(1.0, phi) * std::sin(0.5 * theta);
    return {{u * std::conj(u), u * std::conj(v)}, {v * std::conj(u), v * std::conj(v)}};
}

double conditional_entropy_sum(const ComplexMatrix& rho, double theta, double phi) {
    const ComplexMatrix plus = projector_for(theta, phi);
    const ComplexMatrix minus = ComplexMatrix::identity(2) - plus;
    double total = 0.0;
    for (const ComplexMatrix* pi : {&plus, &minus}) {
        const auto sigma = conditional_a(rho, *pi);
        const double p = sigma[0].real() + sigma[3].real();
        if (p < kBranchFloor) continue;
        total += p * entropy_2x2(sigma[0], sigma[1], sigma[3]);
    }
    return total;
}

}  // namespace

double entropy(const ComplexMatrix& rho) { return checked_entropy(validated(rho)); }

double mutual_information(const DensityMatrix& rho) {
    const ComplexMatrix sym = validated(rho.matrix());
    return checked_entropy(partial_trace(sym, Subsystem::A)) + checked_entropy(partial_trace(sym, Subsystem::B)) -
           checked_entropy(sym);
}

ComplexMatrix MeasurementProjector::plus() const { return projector_for(theta, phi); }
ComplexMatrix MeasurementProjector::minus() const { return ComplexMatrix::identity(2) - plus(); }

std::vector<ConditionalBranch> conditional_ensemble(const DensityMatrix& rho, const MeasurementProjector& m) {
    const ComplexMatrix sym = validated(rho.matrix());
    std::vector<ConditionalBranch> out;
    for (const ComplexMatrix& pi : {m.plus(), m.minus()}) {
        const ComplexMatrix lift = kron(ComplexMatrix::identity(2), pi);
        ComplexMatrix post = lift * sym * lift;
        const double p = post.trace().real();
        if (p < kBranchFloor) continue;
        post *= 1.0 / p;
        out.push_back({p, std::move(post)});
    }
    return out;
}

double measured_information(const DensityMatrix& rho, const MeasurementProjector& m) {
    const ComplexMatrix sym = validated(rho.matrix());
    return checked_entropy(partial_trace(sym, Subsystem::A)) - conditional_entropy_sum(sym, m.theta, m.phi);
}

ClassicalCorrelation classical_correlation(const DensityMatrix& rho) {
    const ComplexMatrix sym = validated(rho.matrix());
    const double s_a = checked_entropy(partial_trace(sym, Subsystem::A));

    constexpr int kGrid = 64;
    const double d_theta = std::numbers::pi / (kGrid - 1);
    const double d_phi = 2.0 * std::numbers::pi / kGrid;

    struct Candidate {
        double value;  // sum_k p_k S(rho_k), minimized
        double theta, phi;
    };
    std::vector<Candidate> grid;
    grid.reserve(kGrid * kGrid);
    for (int i = 0; i < kGrid; ++i)
        for (int j = 0; j < kGrid; ++j) {
            const double theta = d_theta * i, phi = d_phi * j;
            grid.push_back({conditional_entropy_sum(sym, theta, phi), theta, phi});
        }
    std::partial_sort(grid.begin(), grid.begin() + 3, grid.end(),
                      [](const Candidate& a, const Candidate& b) { return a.value < b.value; });

    Candidate best = grid.front();
    auto objective = [&](const std::vector<double>& x) { return conditional_entropy_sum(sym, x[0], x[1]); };
    for (int c = 0; c < 3; ++c) {
        const auto result = nelder_mead(objective, {grid[c].theta, grid[c].phi}, {d_theta, d_phi});
        if (result.value < best.value) best = {result.value, result.x[0], result.x[1]};
    }

    ClassicalCorrelation out;
    out.value = s_a - best.value;
    out.optimum = {best.theta, best.phi};
    return out;
}

DiscordResult discord(const DensityMatrix& rho) {
    DiscordResult out;
    out.mutual_information = mutual_information(rho);
    const auto cc = classical_correlation(rho);
    out.classical_correlation = cc.value;
    out.optimum = cc.optimum;
    out.discord = out.mutual_information - out.classical_correlation;
    return out;
}

double concurrence(const DensityMatrix& rho) {
    const ComplexMatrix sym = validated(rho.matrix());
    if (sym.rows() != 4) throw DimensionError("concurrence: expected a two-qubit state");

    const auto eig = hermitian_eig(sym);
    if (eig.eigenvalues.front() < -1e-6) {
        std::ostringstream msg;
        msg << "concurrence: state has negative eigenvalue " << eig.eigenvalues.front();
        throw InvariantViolation(msg.str());
    }
    // sqrt(rho) with drift-level negative eigenvalues clamped to zero.
    ComplexMatrix root(4, 4);
    for (std::size_t k = 0; k < 4; ++k) {
        const double lambda = eig.eigenvalues[k];
        if (lambda <= 0.0) continue;
        const double s = std::sqrt(lambda);
        for (std::size_t r = 0; r < 4; ++r)
            for (std::size_t c = 0; c < 4; ++c)
                root(r, c) += s * eig.eigenvectors(r, k) * std::conj(eig.eigenvectors(c, k));
    }

    const ComplexMatrix yy = kron(pauli::y(), pauli::y());
    const ComplexMatrix tilde = yy * sym.conj() * yy;
    ComplexMatrix m = root * tilde * root;
    ComplexMatrix msym(4, 4);
    for (std::size_t r = 0; r < 4; ++r)
        for (std::size_t c = 0; c < 4; ++c) msym(r, c) = 0.5 * (m(r, c) + std::conj(m(c, r)));

    auto mu = hermitian_eig(msym).eigenvalues;  // ascending
    std::array<double, 4> roots{};
    for (std::size_t k = 0; k < 4; ++k) roots[k] = std::sqrt(std::max(0.0, mu[3 - k]));
    return std::max(0.0, roots[0] - roots[1] - roots[2] - roots[3]);
}

double concurrence_x_form(const DensityMatrix& rho) {
    const ComplexMatrix& m = rho.matrix();
    auto diag = [&](std::size_t i) { return std::max(0.0, m(i, i).real()); };
    const double first = std::abs(m(1, 2)) - std::sqrt(diag(0) * diag(3));
    const double second = std::abs(m(0, 3)) - std::sqrt(diag(1) * diag(2));
    return 2.0 * std::max({0.0, first, second});
}

}  // namespace heomcorr::measures
