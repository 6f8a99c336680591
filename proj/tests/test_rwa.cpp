#include <algorithm>
#include <cmath>

#include "doctest.h"
#include "heomcorr/integrator.hpp"
#include "heomcorr/measures.hpp"
#include "heomcorr/rwa.hpp"
#include "support.hpp"

using namespace heomcorr;
using namespace heomcorr::rwa;
using testsupport::max_diff;

TEST_CASE("P function basics") {
    const PFunctionParams osc{2.0, 0.2};
    CHECK(p_function(0.0, osc) == doctest::Approx(1.0));
    CHECK(osc.r().imag() == 0.0);
    CHECK(osc.r().real() == doctest::Approx(std::sqrt(0.2 - 0.01)));
    const PFunctionParams mono{0.02, 0.1};
    CHECK(mono.r().real() == 0.0);
    CHECK(mono.r().imag() > 0.0);
}

TEST_CASE("P function at the critical point") {
    // gamma = 2 lambda: P_t = e^{-gamma t}(1 + gamma t / 2)^2
    const double lambda = 0.3, gamma = 0.6;
    for (double t : {0.0, 0.5, 3.0, 12.0}) {
        const double expected = std::exp(-gamma * t) * std::pow(1 + gamma * t / 2, 2);
        CHECK(p_function(t, {lambda, gamma}) == doctest::Approx(expected).epsilon(1e-12));
        // R = 1e-8 from the oscillating side
        const double near = gamma * gamma / (2 * gamma) + 2e-16 / gamma;
        CHECK(p_function(t, {near, gamma}) == doctest::Approx(expected).epsilon(1e-9));
    }
}

TEST_CASE("P function zeros") {
    const PFunctionParams p{2.0, 0.2};
    const double r = p.r().real();
    for (int n = 1; n <= 4; ++n) {
        const double tn = p_function_zero(n, p);
        CHECK(tn == doctest::Approx((n * M_PI - std::atan(2 * r / p.gamma)) / r).epsilon(1e-10));
        CHECK(p_function(tn, p) < 1e-20);
        CHECK(p_amplitude(tn - 1e-3, p) * p_amplitude(tn + 1e-3, p) < 0.0);
    }
    CHECK_THROWS_AS(p_function_zero(1, {0.02, 0.1}), std::domain_error);
    CHECK_THROWS_AS(p_function_zero(0, p), std::invalid_argument);
}

TEST_CASE("property: P function stays in [0,1] and is continuous at R = 0") {
    testsupport::Rng rng(21);
    for (int i = 0; i < 10000; ++i) {
        const double lambda = rng.uniform(0, 3), gamma = rng.uniform(1e-3, 10), t = rng.uniform(0, 50);
        const double v = p_function(t, {lambda, gamma});
        CHECK(v >= 0.0);
        CHECK(v <= 1.0 + 1e-12);
    }
    for (int i = 0; i < 100; ++i) {
        const double gamma = rng.uniform(0.01, 5), t = rng.uniform(0, 30);
        const double below = p_function(t, {gamma / 2 - 1e-6, gamma});
        const double above = p_function(t, {gamma / 2 + 1e-6, gamma});
        CHECK(std::abs(below - above) < 1e-4);
    }
}

TEST_CASE("X-state propagator") {
    const PFunctionParams p{0.5, 0.05};
    const auto phi = build_initial(BellPhi{1 / std::sqrt(2.0)});
    CHECK(max_diff(rwa_propagate_x(phi, 0.0, p).matrix(), phi.matrix()) < 1e-15);
    for (double t : {0.5, 3.0, 10.0}) {
        const auto out = rwa_propagate_x(phi, t, p);
        CHECK(out(1, 2).real() == doctest::Approx(p_function(t, p) / 2));
        CHECK(std::abs(out.matrix().trace() - Complex{1.0, 0.0}) < 1e-14);
        CHECK(measures::concurrence(out) ==
              doctest::Approx(rwa_concurrence_phi(1 / std::sqrt(2.0), t, p)).epsilon(1e-8));
    }
    testsupport::Rng rng(1);
    CHECK_THROWS_AS(rwa_propagate_x(DensityMatrix(testsupport::random_pure(rng)), 1.0, p), ConfigError);
}

TEST_CASE("property: X-state propagator preserves trace and positivity") {
    testsupport::Rng rng(22);
    for (int i = 0; i < 1000; ++i) {
        const DensityMatrix rho(testsupport::random_x_state(rng));
        const PFunctionParams p{rng.uniform(0, 2), rng.uniform(0.01, 5)};
        const auto out = rwa_propagate_x(rho, rng.uniform(0, 30), p);
        CHECK(std::abs(out.matrix().trace() - Complex{1.0, 0.0}) < 1e-12);
        CHECK(hermitian_eigenvalues(out.matrix()).front() >= -1e-12);
        CHECK(is_x_form(out.matrix()));
    }
}

TEST_CASE("RWA concurrence formulas") {
    const PFunctionParams p{1.0, 0.1};
    CHECK(rwa_concurrence_phi(1 / std::sqrt(2.0), 0.0, p) == doctest::Approx(1.0));
    // Psi clamps once alpha < sqrt(1 - alpha^2)(1 - P_t)
    const double alpha = 0.3, beta = std::sqrt(1 - alpha * alpha);
    bool clamped = false;
    for (double t = 0.0; t < 30.0; t += 0.1) {
        const double pt = p_function(t, p);
        const double c = rwa_concurrence_psi(alpha, t, p);
        if (alpha < beta * (1 - pt)) {
            CHECK(c == 0.0);
            clamped = true;
        } else {
            CHECK(c == doctest::Approx(2 * beta * pt * (alpha - beta * (1 - pt))));
        }
        const auto rho = rwa_propagate_x(build_initial(BellPsi{alpha}), t, p);
        CHECK(measures::concurrence(rho) == doctest::Approx(c).epsilon(1e-9));
    }
    CHECK(clamped);
}

TEST_CASE("level basis is orthonormal") {
    const ComplexMatrix w = level_basis();
    CHECK(max_diff(w.adjoint() * w, ComplexMatrix::identity(4)) < 1e-15);
}

namespace {

const SystemSpec kSys{1.0, 1.0};

BathSpec common_bath(double lambda, double gamma) { return {lambda, gamma, 1.0, Topology::Common}; }

}  // namespace

TEST_CASE("pseudomode: free evolution at zero coupling") {
    const auto grid = uniform_time_grid(5.0, 50);
    const auto rho0 = build_initial(BellPhi{1 / std::sqrt(2.0)});
    PseudomodeOptions opt;
    opt.n_ph = 4;
    const auto traj = pseudomode_evolve(rho0, kSys, common_bath(0.0, 0.1), grid, opt);
    for (const auto& s : traj.states) CHECK(measures::concurrence(s) == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("pseudomode: ground state is stationary") {
    ComplexMatrix g(4, 4);
    g(ket::k00, ket::k00) = 1.0;
    const auto grid = uniform_time_grid(10.0, 20);
    const auto traj = pseudomode_evolve(DensityMatrix(g), kSys, common_bath(0.5, 0.2), grid);
    for (const auto& s : traj.states) {
        CHECK(max_diff(s.matrix(), g) < 1e-12);
        CHECK(std::abs(measures::discord(s).discord) < 1e-9);
    }
}

TEST_CASE("pseudomode: antisymmetric population is conserved and drift stays bounded") {
    testsupport::Rng rng(23);
    const ComplexMatrix w = level_basis();
    for (int trial = 0; trial < 3; ++trial) {
        const DensityMatrix rho0(testsupport::random_density(rng));
        const auto grid = uniform_time_grid(10.0, 20);
        const auto traj = pseudomode_evolve(rho0, kSys, common_bath(0.5, 0.25), grid);
        const double minus0 = (w.adjoint() * rho0.matrix() * w)(2, 2).real();
        for (std::size_t i = 0; i < traj.states.size(); ++i) {
            const ComplexMatrix levels = w.adjoint() * traj.states[i].matrix() * w;
            CHECK(std::abs(levels(2, 2).real() - minus0) < 1e-10);
            CHECK(traj.diagnostics[i].trace_error < 1e-8);
            CHECK(traj.diagnostics[i].min_eigenvalue >= -1e-6);
        }
    }
}

TEST_CASE("pseudomode: cutoff violation aborts and auto mode recovers") {
    const auto grid = uniform_time_grid(2.0, 4);
    const auto rho0 = build_initial(BellPsi{1 / std::sqrt(3.0)});
    PseudomodeOptions opt;
    opt.n_ph = 2;
    CHECK_THROWS_AS(pseudomode_evolve(rho0, kSys, common_bath(2.0, 0.2), grid, opt), FockCutoffExceeded);
    const auto traj = pseudomode_evolve_auto(rho0, kSys, common_bath(2.0, 0.2), grid, opt);
    CHECK(traj.states.size() == grid.size());
}

TEST_CASE("pseudomode: rejects detuned qubits") {
    const auto grid = uniform_time_grid(1.0, 2);
    CHECK_THROWS_AS(pseudomode_evolve(build_initial(BellPhi{0.5}), {1.0, 1.2}, common_bath(0.1, 0.1), grid), ConfigError);
}
