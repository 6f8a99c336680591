#include "heomcorr/integrator.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace heomcorr {

std::vector<std::size_t> steps_between_samples(std::span<const double> t_grid, double dt) {
    if (!(dt > 0.0)) throw std::invalid_argument("time step must be positive");
    if (t_grid.empty() || t_grid.front() != 0.0) throw std::invalid_argument("time grid must start at t = 0");
    std::vector<std::size_t> steps;
    steps.reserve(t_grid.size());
    steps.push_back(0);
    for (std::size_t i = 1; i < t_grid.size(); ++i) {
        const double spacing = t_grid[i] - t_grid[i - 1];
        if (!(spacing > 0.0)) throw std::invalid_argument("time grid must be strictly ascending");
        const double ratio = spacing / dt;
        const double rounded = std::round(ratio);
        if (rounded < 1.0 || std::abs(ratio - rounded) > 1e-9 * std::max(1.0, ratio)) {
            std::ostringstream msg;
            msg << "time step " << dt << " does not divide the sample spacing " << spacing;
            throw std::invalid_argument(msg.str());
        }
        steps.push_back(static_cast<std::size_t>(rounded));
    }
    return steps;
}

std::vector<double> uniform_time_grid(double t_max, std::size_t n_samples) {
    if (!(t_max > 0.0) || n_samples == 0) throw std::invalid_argument("time grid needs t_max > 0 and n_samples >= 1");
    std::vector<double> grid(n_samples + 1);
    for (std::size_t i = 0; i <= n_samples; ++i) grid[i] = t_max * static_cast<double>(i) / static_cast<double>(n_samples);
    return grid;
}

}  // namespace heomcorr
