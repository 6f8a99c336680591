#pragma once

#include <functional>
#include <vector>

namespace heomcorr {

struct NelderMeadOptions {
    double spread_tolerance = 1e-9;  // stop when max f - min f over the simplex falls below this
    int max_iterations = 2000;
};

struct NelderMeadResult {
    std::vector<double> x;
    double value;
    int iterations;
    bool converged;
};

/// Minimizes f starting from the axis-aligned simplex {x0, x0 + step_i e_i}.
/// Standard coefficients: reflection 1, expansion 2, contraction 1/2, shrink 1/2.
NelderMeadResult nelder_mead(const std::function<double(const std::vector<double>&)>& f, std::vector<double> x0,
                             const std::vector<double>& step, NelderMeadOptions options = {});

}  // namespace heomcorr
