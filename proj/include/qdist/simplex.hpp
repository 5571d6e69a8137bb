#pragma once

#include <functional>
#include <vector>

namespace qdist::opt {

struct NelderMeadOptions {
    std::size_t max_evals = 2000;
    double init_step = 0.3;
    double spread_tol = 1e-10;  // stop when the simplex value spread drops below this
};

struct NelderMeadResult {
    std::vector<double> x;
    double value = 0.0;
    std::size_t evals = 0;
};

// Derivative-free downhill simplex (reflection 1, expansion 2, contraction
// 0.5, shrink 0.5). Deterministic for a fixed starting point.
NelderMeadResult nelder_mead(const std::function<double(const std::vector<double>&)>& f,
                             std::vector<double> x0, const NelderMeadOptions& opts = {});

}  // namespace qdist::opt
