#include "heomcorr/nelder_mead.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace heomcorr {

NelderMeadResult nelder_mead(const std::function<double(const std::vector<double>&)>& f, std::vector<double> x0,
                             const std::vector<double>& step, NelderMeadOptions options) {
    const std::size_t n = x0.size();
    if (step.size() != n || n == 0) throw std::invalid_argument("nelder_mead: step size must match x0");

    std::vector<std::vector<double>> simplex(n + 1, x0);
    for (std::size_t i = 0; i < n; ++i) simplex[i + 1][i] += step[i];
    std::vector<double> values(n + 1);
    for (std::size_t i = 0; i <= n; ++i) values[i] = f(simplex[i]);

    std::vector<std::size_t> order(n + 1);
    auto sort_simplex = [&] {
        std::iota(order.begin(), order.end(), std::size_t{0});
        std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
        std::vector<std::vector<double>> s(n + 1);
        std::vector<double> v(n + 1);
        for (std::size_t i = 0; i <= n; ++i) {
            s[i] = std::move(simplex[order[i]]);
            v[i] = values[order[i]];
        }
        simplex = std::move(s);
        values = std::move(v);
    };

    auto along = [&](const std::vector<double>& centroid, double coeff) {
        std::vector<double> x(n);
        for (std::size_t i = 0; i < n; ++i) x[i] = centroid[i] + coeff * (simplex[n][i] - centroid[i]);
        return x;
    };

    int it = 0;
    bool converged = false;
    for (; it < options.max_iterations; ++it) {
        sort_simplex();
        if (values[n] - values[0] < options.spread_tolerance) {
            converged = true;
            break;
        }
        std::vector<double> centroid(n, 0.0);
        for (std::size_t v = 0; v < n; ++v)
            for (std::size_t i = 0; i < n; ++i) centroid[i] += simplex[v][i] / static_cast<double>(n);

        auto reflected = along(centroid, -1.0);
        const double fr = f(reflected);
        if (fr < values[0]) {
            auto expanded = along(centroid, -2.0);
            const double fe = f(expanded);
            if (fe < fr) {
                simplex[n] = std::move(expanded);
                values[n] = fe;
            } else {
                simplex[n] = std::move(reflected);
                values[n] = fr;
            }
            continue;
        }
        if (fr < values[n - 1]) {
            simplex[n] = std::move(reflected);
            values[n] = fr;
            continue;
        }
        // Outside contraction when the reflection beats the worst point,
        // inside contraction otherwise.
        const bool outside = fr < values[n];
        auto contracted = along(centroid, outside ? -0.5 : 0.5);
        const double fc = f(contracted);
        if (fc < (outside ? fr : values[n])) {
            simplex[n] = std::move(contracted);
            values[n] = fc;
            continue;
        }
        for (std::size_t v = 1; v <= n; ++v) {
            for (std::size_t i = 0; i < n; ++i) simplex[v][i] = simplex[0][i] + 0.5 * (simplex[v][i] - simplex[0][i]);
            values[v] = f(simplex[v]);
        }
    }
    sort_simplex();
    return {simplex[0], values[0], it, converged};
}

}  // namespace heomcorr
