#include "heomcorr/rwa.hpp"

#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "heomcorr/integrator.hpp"

namespace heomcorr::rwa {

Complex PFunctionParams::r() const { return std::sqrt(Complex{0.5 * lambda * gamma - 0.25 * gamma * gamma, 0.0}); }

double p_amplitude(double t, const PFunctionParams& params) {
    const Complex r = params.r();
    const double half = 0.5 * params.gamma;
    const Complex rt = r * t;
    // Both exponentials carry the e^{-gamma t / 2} envelope so the monotone
    // regime never forms cosh * e^{-gamma t}.
    const Complex i{0.0, 1.0};
    const Complex grow = std::exp(i * rt - half * t);
    const Complex decay = std::exp(-i * rt - half * t);
    const Complex cos_part = 0.5 * (grow + decay);
    Complex sinc_part;  // e^{-gamma t/2} sin(R t) / R
    if (std::abs(rt) < 1e-4) {
        sinc_part = std::exp(-half * t) * t * (1.0 - rt * rt / 6.0);
    } else {
        sinc_part = (grow - decay) / (2.0 * i * r);
    }
    return (cos_part + half * sinc_part).real();
}

double p_function(double t, const PFunctionParams& params) {
    const double c = p_amplitude(t, params);
    return c * c;
}

double p_function_zero(int n, const PFunctionParams& params) {
    if (n < 1) throw std::invalid_argument("p_function_zero: n must be >= 1");
    const Complex r = params.r();
    if (!(r.real() > 0.0) || r.imag() != 0.0) {
        throw std::domain_error("p_function_zero: P_t has no zeros outside the oscillating regime");
    }
    // Consecutive zeros are pi / R apart.
    const double step = std::numbers::pi / (32.0 * r.real());
    double lo = 0.0;
    double f_lo = p_amplitude(lo, params);
    int found = 0;
    for (long k = 1; k < 1000000; ++k) {
        const double hi = step * static_cast<double>(k);
        const double f_hi = p_amplitude(hi, params);
        if ((f_lo > 0.0) != (f_hi > 0.0)) {
            if (++found == n) {
                double a = lo, b = hi, fa = f_lo;
                for (int it = 0; it < 200 && b - a > 1e-15 * b; ++it) {
                    const double mid = 0.5 * (a + b);
                    const double fm = p_amplitude(mid, params);
                    if ((fm > 0.0) == (fa > 0.0)) {
                        a = mid;
                        fa = fm;
                    } else {
                        b = mid;
                    }
                }
                return 0.5 * (a + b);
            }
        }
        lo = hi;
        f_lo = f_hi;
    }
    throw std::domain_error("p_function_zero: zero not bracketed");
}

DensityMatrix rwa_propagate_x(const DensityMatrix& rho0, double t, const PFunctionParams& params) {
    if (!is_x_form(rho0.matrix())) throw ConfigError("rwa_propagate_x: initial state is not X-form");
    const double p = p_function(t, params);
    const auto& m = rho0.matrix();
    const double r11 = m(0, 0).real(), r22 = m(1, 1).real(), r33 = m(2, 2).real();

    ComplexMatrix out(4, 4);
    out(0, 0) = r11 * p * p;
    out(1, 1) = r22 * p + r11 * p * (1.0 - p);
    out(2, 2) = r33 * p + r11 * p * (1.0 - p);
    out(3, 3) = 1.0 - (out(0, 0) + out(1, 1) + out(2, 2)).real();
    out(0, 3) = m(0, 3) * p;
    out(3, 0) = m(3, 0) * p;
    out(1, 2) = m(1, 2) * p;
    out(2, 1) = m(2, 1) * p;
    return DensityMatrix::unchecked(std::move(out));
}

double rwa_concurrence_phi(double alpha, double t, const PFunctionParams& params) {
    const double p = p_function(t, params);
    return std::max(0.0, 2.0 * alpha * std::sqrt(1.0 - alpha * alpha) * p);
}

double rwa_concurrence_psi(double alpha, double t, const PFunctionParams& params) {
    const double p = p_function(t, params);
    const double beta = std::sqrt(1.0 - alpha * alpha);
    return std::max(0.0, 2.0 * beta * p * (alpha - beta * (1.0 - p)));
}

Trajectory rwa_trajectory(const DensityMatrix& rho0, std::span<const double> t_grid, const PFunctionParams& params) {
    Trajectory traj;
    for (double t : t_grid) {
        DensityMatrix rho = rwa_propagate_x(rho0, t, params);
        traj.diagnostics.push_back(diagnose(rho.matrix()));
        traj.times.push_back(t);
        traj.states.push_back(std::move(rho));
    }
    return traj;
}

ComplexMatrix level_basis() {
    const double s = 1.0 / std::sqrt(2.0);
    ComplexMatrix w(4, 4);
    w(ket::k00, 0) = 1.0;  // |0>
    w(ket::k10, 1) = s;    // |+>
    w(ket::k01, 1) = s;
    w(ket::k10, 2) = s;    // |->
    w(ket::k01, 2) = -s;
    w(ket::k11, 3) = 1.0;  // |2>
    return w;
}

ComplexMatrix PseudomodeState::reduced_levels() const {
    const std::size_t dim = 4 * static_cast<std::size_t>(n_ph);
    ComplexMatrix out(4, 4);
    for (std::size_t l = 0; l < 4; ++l)
        for (std::size_t lp = 0; lp < 4; ++lp)
            for (int n = 0; n < n_ph; ++n) out(l, lp) += rho[(l * n_ph + n) * dim + lp * n_ph + n];
    return out;
}

double PseudomodeState::top_fock_population() const {
    const std::size_t dim = 4 * static_cast<std::size_t>(n_ph);
    double p = 0.0;
    for (std::size_t l = 0; l < 4; ++l) {
        const std::size_t i = l * n_ph + (n_ph - 1);
        p += rho[i * dim + i].real();
    }
    return p;
}

Complex PseudomodeState::trace() const {
    const std::size_t dim = 4 * static_cast<std::size_t>(n_ph);
    Complex t{};
    for (std::size_t i = 0; i < dim; ++i) t += rho[i * dim + i];
    return t;
}

namespace {

struct Triplet {
    std::size_t row, col;
    Complex value;
};

// Lindblad generator of the joint system + pseudomode state, written as
// -i (H_eff rho - rho H_eff^dag) + 2 gamma a rho a^dag with
// H_eff = H - i gamma a^dag a.
class PseudomodeGenerator {
public:
    PseudomodeGenerator(double omega, const BathSpec& bath, int n_ph) : n_ph_(n_ph), dim_(4 * n_ph), gamma_(bath.gamma) {
        const double energies[4] = {-omega, 0.0, 0.0, omega};
        const double g = std::sqrt(bath.lambda * bath.gamma);
        auto idx = [n_ph](std::size_t level, int n) { return level * n_ph + static_cast<std::size_t>(n); };
        for (std::size_t l = 0; l < 4; ++l)
            for (int n = 0; n < n_ph; ++n)
                h_eff_.push_back({idx(l, n), idx(l, n), Complex{energies[l] + bath.omega_c * n, -bath.gamma * n}});
        if (g != 0.0) {
            constexpr std::size_t zero = 0, plus = 1, two = 3;
            for (int n = 1; n < n_ph; ++n) {
                const double amp = g * std::sqrt(static_cast<double>(n));
                // a |+><0| and a |2><+|: drop one photon, raise the level.
                h_eff_.push_back({idx(plus, n - 1), idx(zero, n), amp});
                h_eff_.push_back({idx(two, n - 1), idx(plus, n), amp});
                // Hermitian conjugates.
                h_eff_.push_back({idx(zero, n), idx(plus, n - 1), amp});
                h_eff_.push_back({idx(plus, n), idx(two, n - 1), amp});
            }
        }
    }

    void operator()(std::span<const Complex> rho, std::span<Complex> out) const {
        const std::size_t d = dim_;
        std::fill(out.begin(), out.end(), Complex{});
        const Complex minus_i{0.0, -1.0};
        for (const auto& e : h_eff_) {
            const Complex left = minus_i * e.value;
            const Complex right = minus_i * std::conj(e.value);
            // -i H_eff rho: row e.row gathers row e.col.
            const Complex* src_row = rho.data() + e.col * d;
            Complex* dst_row = out.data() + e.row * d;
            for (std::size_t j = 0; j < d; ++j) dst_row[j] += left * src_row[j];
            // +i rho H_eff^dag: column e.row gathers column e.col.
            for (std::size_t i = 0; i < d; ++i) out[i * d + e.row] -= right * rho[i * d + e.col];
        }
        // 2 gamma a rho a^dag
        const double two_gamma = 2.0 * gamma_;
        for (std::size_t l = 0; l < 4; ++l)
            for (int m = 0; m + 1 < n_ph_; ++m) {
                const std::size_t row = l * n_ph_ + m;
                const std::size_t src = row + 1;
                const double sm = std::sqrt(static_cast<double>(m + 1));
                for (std::size_t lp = 0; lp < 4; ++lp)
                    for (int mp = 0; mp + 1 < n_ph_; ++mp) {
                        const std::size_t col = lp * n_ph_ + mp;
                        out[row * d + col] +=
                            two_gamma * sm * std::sqrt(static_cast<double>(mp + 1)) * rho[src * d + col + 1];
                    }
            }
    }

private:
    int n_ph_;
    std::size_t dim_;
    double gamma_;
    std::vector<Triplet> h_eff_;
};

}  // namespace

Trajectory pseudomode_evolve(const DensityMatrix& rho0, const SystemSpec& sys, const BathSpec& bath,
                             std::span<const double> t_grid, PseudomodeOptions options) {
    sys.validate();
    bath.validate();
    if (std::abs(sys.omega_a - sys.omega_b) > 1e-12) {
        throw ConfigError("pseudomode solver requires identical qubit frequencies (omega_a == omega_b)");
    }
    if (options.n_ph < 2) throw ConfigError("pseudomode.n_ph must be >= 2");
    std::vector<std::size_t> steps;
    try {
        steps = steps_between_samples(t_grid, options.dt);
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }

    const ComplexMatrix w = level_basis();
    const ComplexMatrix w_dag = w.adjoint();
    const ComplexMatrix levels0 = w_dag * rho0.matrix() * w;

    const int n_ph = options.n_ph;
    const std::size_t dim = 4 * static_cast<std::size_t>(n_ph);
    PseudomodeState state{n_ph, std::vector<Complex>(dim * dim)};
    for (std::size_t l = 0; l < 4; ++l)
        for (std::size_t lp = 0; lp < 4; ++lp) state.rho[(l * n_ph) * dim + lp * n_ph] = levels0(l, lp);

    const PseudomodeGenerator generator(sys.omega_a, bath, n_ph);
    Rk4Stepper stepper(dim * dim);
    std::ostringstream context;
    context << "pseudomode n_ph " << n_ph << ", dt " << options.dt;

    Trajectory traj;
    for (std::size_t i = 0; i < t_grid.size(); ++i) {
        for (std::size_t n = 0; n < steps[i]; ++n) stepper.step(state.rho, options.dt, generator);
        const double top = state.top_fock_population();
        if (!(top <= options.max_top_population)) {
            std::ostringstream msg;
            msg << "pseudomode Fock cutoff too small: top-level population " << top << " at t = " << t_grid[i]
                << " with n_ph = " << n_ph << "; increase pseudomode.n_ph";
            throw FockCutoffExceeded(msg.str());
        }
        ComplexMatrix rho = w * state.reduced_levels() * w_dag;
        const SampleDiagnostics diag = check_sample(rho, options.limits, t_grid[i], context.str());
        traj.times.push_back(t_grid[i]);
        traj.states.push_back(DensityMatrix::unchecked(std::move(rho)));
        traj.diagnostics.push_back(diag);
    }
    return traj;
}

Trajectory pseudomode_evolve_auto(const DensityMatrix& rho0, const SystemSpec& sys, const BathSpec& bath,
                                  std::span<const double> t_grid, PseudomodeOptions options, int max_n_ph) {
    while (true) {
        try {
            return pseudomode_evolve(rho0, sys, bath, t_grid, options);
        } catch (const FockCutoffExceeded&) {
            if (2 * options.n_ph > max_n_ph) throw;
            options.n_ph *= 2;
        }
    }
}

}  // namespace heomcorr::rwa
