#include "qdist/simplex.hpp"

#include <algorithm>
#include <cmath>

namespace qdist::opt {

NelderMeadResult nelder_mead(const std::function<double(const std::vector<double>&)>& f,
                             std::vector<double> x0, const NelderMeadOptions& opts) {
    const std::size_t n = x0.size();
    std::vector<std::vector<double>> xs(n + 1, x0);
    std::vector<double> fs(n + 1);
    std::size_t evals = 0;
    const auto eval = [&](const std::vector<double>& x) {
        ++evals;
        return f(x);
    };
    fs[0] = eval(xs[0]);
    for (std::size_t i = 0; i < n; ++i) {
        xs[i + 1][i] += (x0[i] != 0.0 ? std::abs(x0[i]) * opts.init_step + opts.init_step : opts.init_step);
        fs[i + 1] = eval(xs[i + 1]);
    }
    std::vector<std::size_t> order(n + 1);
    const auto sort_simplex = [&] {
        for (std::size_t i = 0; i <= n; ++i) order[i] = i;
        std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return fs[a] < fs[b]; });
    };

    while (evals < opts.max_evals) {
        sort_simplex();
        const std::size_t best = order[0], worst = order[n], second = order[n - 1];
        if (std::abs(fs[worst] - fs[best]) < opts.spread_tol) break;

        std::vector<double> centroid(n, 0.0);
        for (std::size_t i = 0; i <= n; ++i) {
            if (i == worst) continue;
            for (std::size_t j = 0; j < n; ++j) centroid[j] += xs[i][j];
        }
        for (auto& c : centroid) c /= static_cast<double>(n);

        const auto blend = [&](double t) {
            std::vector<double> x(n);
            for (std::size_t j = 0; j < n; ++j) x[j] = centroid[j] + t * (centroid[j] - xs[worst][j]);
            return x;
        };

        auto xr = blend(1.0);
        const double fr = eval(xr);
        if (fr < fs[best]) {
            auto xe = blend(2.0);
            const double fe = eval(xe);
            if (fe < fr) {
                xs[worst] = std::move(xe);
                fs[worst] = fe;
            } else {
                xs[worst] = std::move(xr);
                fs[worst] = fr;
            }
        } else if (fr < fs[second]) {
            xs[worst] = std::move(xr);
            fs[worst] = fr;
        } else {
            const bool outside = fr < fs[worst];
            auto xc = blend(outside ? 0.5 : -0.5);
            const double fc = eval(xc);
            if (fc < std::min(fr, fs[worst])) {
                xs[worst] = std::move(xc);
                fs[worst] = fc;
            } else {  // shrink toward the best vertex
                for (std::size_t i = 0; i <= n; ++i) {
                    if (i == best) continue;
                    for (std::size_t j = 0; j < n; ++j) xs[i][j] = 0.5 * (xs[i][j] + xs[best][j]);
                    fs[i] = eval(xs[i]);
                }
            }
        }
    }
    sort_simplex();
    return NelderMeadResult{xs[order[0]], fs[order[0]], evals};
}

}  // namespace qdist::opt
