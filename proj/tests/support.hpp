#pragma once

// Random-state generators shared by the property tests.

#include <cmath>
#include <complex>
#include <random>

#include "heomcorr/model.hpp"
#include "heomcorr/operators.hpp"

namespace testsupport {

using heomcorr::Complex;
using heomcorr::ComplexMatrix;

class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    double uniform(double lo = 0.0, double hi = 1.0) { return std::uniform_real_distribution<double>(lo, hi)(engine_); }
    double normal() { return std::normal_distribution<double>(0.0, 1.0)(engine_); }
    Complex cnormal() { return {normal(), normal()}; }

private:
    std::mt19937_64 engine_;
};

// Ginibre construction: G G^dag / tr.
inline ComplexMatrix random_density(Rng& rng, std::size_t dim = 4) {
    ComplexMatrix g(dim, dim);
    for (std::size_t i = 0; i < dim; ++i)
        for (std::size_t j = 0; j < dim; ++j) g(i, j) = rng.cnormal();
    ComplexMatrix rho = g * g.adjoint();
    const Complex tr = rho.trace();
    rho *= 1.0 / tr.real();
    return rho;
}

inline ComplexMatrix random_pure(Rng& rng) {
    ComplexMatrix psi(4, 1);
    double norm = 0.0;
    for (std::size_t i = 0; i < 4; ++i) {
        psi(i, 0) = rng.cnormal();
        norm += std::norm(psi(i, 0));
    }
    psi *= 1.0 / std::sqrt(norm);
    return psi * psi.adjoint();
}

// Random X state: positive 2x2 blocks on {11,00} and {10,01}.
inline ComplexMatrix random_x_state(Rng& rng) {
    auto block = [&](double weight) {
        ComplexMatrix g(2, 2);
        for (std::size_t i = 0; i < 2; ++i)
            for (std::size_t j = 0; j < 2; ++j) g(i, j) = rng.cnormal();
        ComplexMatrix b = g * g.adjoint();
        b *= weight / b.trace().real();
        return b;
    };
    const double w = rng.uniform();
    const ComplexMatrix outer = block(w);      // |11>, |00>
    const ComplexMatrix inner = block(1 - w);  // |10>, |01>
    ComplexMatrix rho(4, 4);
    rho(0, 0) = outer(0, 0);
    rho(0, 3) = outer(0, 1);
    rho(3, 0) = outer(1, 0);
    rho(3, 3) = outer(1, 1);
    rho(1, 1) = inner(0, 0);
    rho(1, 2) = inner(0, 1);
    rho(2, 1) = inner(1, 0);
    rho(2, 2) = inner(1, 1);
    return rho;
}

// Random SU(2) element times a global phase.
inline ComplexMatrix random_unitary2(Rng& rng) {
    const double a = rng.uniform(0, 2 * M_PI), b = rng.uniform(0, 2 * M_PI), d = rng.uniform(0, 2 * M_PI);
    const double th = std::acos(1 - 2 * rng.uniform()) / 2;
    const Complex i{0, 1};
    const Complex phase = std::exp(i * d);
    ComplexMatrix u(2, 2);
    u(0, 0) = phase * std::exp(i * a) * std::cos(th);
    u(0, 1) = phase * std::exp(i * b) * std::sin(th);
    u(1, 0) = -phase * std::exp(-i * b) * std::sin(th);
    u(1, 1) = phase * std::exp(-i * a) * std::cos(th);
    return u;
}

inline double max_diff(const ComplexMatrix& a, const ComplexMatrix& b) { return heomcorr::max_abs(a - b); }

}  // namespace testsupport
