#include "rwt/optimize.hpp"

#include <boost/math/tools/minima.hpp>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <vector>

namespace rwt::opt {

namespace {

double finite_or_huge(double v) {
    return std::isfinite(v) ? v : std::numeric_limits<double>::max();
}

}  // namespace

Result brent(const std::function<double(double)>& f, double lo, double hi, int max_iterations) {
    std::uintmax_t iters = static_cast<std::uintmax_t>(max_iterations);
    auto g = [&f](double x) { return finite_or_huge(f(x)); };
    const auto [xmin, fmin] = boost::math::tools::brent_find_minima(
        g, lo, hi, std::numeric_limits<double>::digits / 2, iters);
    Result r;
    r.x = scalar_vector(xmin);
    r.value = fmin;
    r.iterations = static_cast<int>(iters);
    r.converged = iters < static_cast<std::uintmax_t>(max_iterations);
    return r;
}

Result nelder_mead(const std::function<double(const Vector&)>& f, const Vector& x0,
                   const Vector& step, double tol, int max_iterations) {
    const int n = static_cast<int>(x0.size());
    std::vector<Vector> simplex(static_cast<std::size_t>(n) + 1, x0);
    std::vector<double> values(simplex.size());
    for (int i = 0; i < n; ++i) {
        simplex[static_cast<std::size_t>(i) + 1](i) += step(i);
    }
    for (std::size_t i = 0; i < simplex.size(); ++i) {
        values[i] = finite_or_huge(f(simplex[i]));
    }
    std::vector<std::size_t> order(simplex.size());

    Result r;
    int it = 0;
    for (; it < max_iterations; ++it) {
        std::iota(order.begin(), order.end(), 0);
        std::sort(order.begin(), order.end(),
                  [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
        const std::size_t best = order.front();
        const std::size_t worst = order.back();
        const std::size_t second = order[order.size() - 2];

        double diameter = 0.0;
        for (std::size_t i = 0; i < simplex.size(); ++i) {
            diameter = std::max(diameter, (simplex[i] - simplex[best]).lpNorm<Eigen::Infinity>());
        }
        if (diameter < tol * (1.0 + simplex[best].lpNorm<Eigen::Infinity>())) {
            r.converged = true;
            break;
        }

        Vector centroid = Vector::Zero(n);
        for (std::size_t i = 0; i < simplex.size(); ++i) {
            if (i != worst) {
                centroid += simplex[i];
            }
        }
        centroid /= n;

        const Vector reflected = centroid + (centroid - simplex[worst]);
        const double fr = finite_or_huge(f(reflected));
        if (fr < values[best]) {
            const Vector expanded = centroid + 2.0 * (centroid - simplex[worst]);
            const double fe = finite_or_huge(f(expanded));
            if (fe < fr) {
                simplex[worst] = expanded;
                values[worst] = fe;
            } else {
                simplex[worst] = reflected;
                values[worst] = fr;
            }
            continue;
        }
        if (fr < values[second]) {
            simplex[worst] = reflected;
            values[worst] = fr;
            continue;
        }
        const bool outside = fr < values[worst];
        const Vector contracted = outside ? Vector(centroid + 0.5 * (reflected - centroid))
                                          : Vector(centroid + 0.5 * (simplex[worst] - centroid));
        const double fc = finite_or_huge(f(contracted));
        if (fc < std::min(fr, values[worst])) {
            simplex[worst] = contracted;
            values[worst] = fc;
            continue;
        }
        // Shrink towards the best vertex.
        for (std::size_t i = 0; i < simplex.size(); ++i) {
            if (i != best) {
                simplex[i] = simplex[best] + 0.5 * (simplex[i] - simplex[best]);
                values[i] = finite_or_huge(f(simplex[i]));
            }
        }
    }
    const auto best = static_cast<std::size_t>(
        std::min_element(values.begin(), values.end()) - values.begin());
    r.x = simplex[best];
    r.value = values[best];
    r.iterations = it;
    return r;
}

}  // namespace rwt::opt
