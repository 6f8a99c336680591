#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace heomcorr {

/// Classical fixed-step fourth-order Runge-Kutta on a flat complex vector.
/// `Rhs` is callable as rhs(std::span<const Complex> y, std::span<Complex> dy).
class Rk4Stepper {
public:
    explicit Rk4Stepper(std::size_t size) : k1_(size), k2_(size), k3_(size), k4_(size), tmp_(size) {}

    template <class Rhs>
    void step(std::vector<std::complex<double>>& y, double dt, Rhs&& rhs) {
        const std::size_t n = y.size();
        rhs(std::span<const std::complex<double>>(y), std::span<std::complex<double>>(k1_));
        for (std::size_t i = 0; i < n; ++i) tmp_[i] = y[i] + (0.5 * dt) * k1_[i];
        rhs(std::span<const std::complex<double>>(tmp_), std::span<std::complex<double>>(k2_));
        for (std::size_t i = 0; i < n; ++i) tmp_[i] = y[i] + (0.5 * dt) * k2_[i];
        rhs(std::span<const std::complex<double>>(tmp_), std::span<std::complex<double>>(k3_));
        for (std::size_t i = 0; i < n; ++i) tmp_[i] = y[i] + dt * k3_[i];
        rhs(std::span<const std::complex<double>>(tmp_), std::span<std::complex<double>>(k4_));
        const double w = dt / 6.0;
        for (std::size_t i = 0; i < n; ++i) y[i] += w * (k1_[i] + 2.0 * (k2_[i] + k3_[i]) + k4_[i]);
    }

private:
    std::vector<std::complex<double>> k1_, k2_, k3_, k4_, tmp_;
};

/// Number of dt steps between consecutive samples of `t_grid`; throws
/// std::invalid_argument unless the grid starts at 0, ascends strictly and
/// every spacing is an integer multiple of dt (to 1e-9 relative).
std::vector<std::size_t> steps_between_samples(std::span<const double> t_grid, double dt);

/// n_samples equal intervals over [0, t_max], n_samples + 1 points.
std::vector<double> uniform_time_grid(double t_max, std::size_t n_samples);

}  // namespace heomcorr
