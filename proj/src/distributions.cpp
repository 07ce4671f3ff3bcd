#include "rwt/distributions.hpp"

#include "rwt/errors.hpp"

#include <boost/math/special_functions/erf.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include <cmath>
#include <numbers>
#include <string>

namespace rwt::dist {

namespace {

constexpr int kMaxTerms = 10000;
constexpr double kWeightTail = 1e-12;
constexpr double kTermTol = 1e-14;

void check_df(double df) {
    if (!(df > 0.0) || !std::isfinite(df)) {
        throw DomainError("degrees of freedom must be positive, got " + std::to_string(df));
    }
}

// Sum_v pois(v; λ) g(v), with the truncation rule shared by every mixture
// series here. Summation starts at v = 0 and walks upward; for the
// noncentralities we deal with (< a few thousand) that is accurate enough.
template <class G>
double poisson_mixture(double lambda, G&& g) {
    if (lambda == 0.0) {
        return g(0);
    }
    double sum = 0.0;
    double cumulative = 0.0;
    const double log_lambda = std::log(lambda);
    for (int v = 0; v < kMaxTerms; ++v) {
        const double w = std::exp(-lambda + v * log_lambda - std::lgamma(v + 1.0));
        const double term = w * g(v);
        sum += term;
        cumulative += w;
        if (v > lambda && cumulative >= 1.0 - kWeightTail && std::abs(term) < kTermTol) {
            break;
        }
    }
    return sum;
}

}  // namespace

double chisq_cdf(double x, double df) {
    check_df(df);
    if (x <= 0.0) {
        return 0.0;
    }
    if (std::isinf(x)) {
        return 1.0;
    }
    return boost::math::gamma_p(0.5 * df, 0.5 * x);
}

double chisq_sf(double x, double df) {
    check_df(df);
    if (x <= 0.0) {
        return 1.0;
    }
    if (std::isinf(x)) {
        return 0.0;
    }
    return boost::math::gamma_q(0.5 * df, 0.5 * x);
}

double chisq_pdf(double x, double df) {
    check_df(df);
    if (x < 0.0) {
        return 0.0;
    }
    if (x == 0.0) {
        if (df < 2.0) {
            return INFINITY;
        }
        return df == 2.0 ? 0.5 : 0.0;
    }
    return 0.5 * boost::math::gamma_p_derivative(0.5 * df, 0.5 * x);
}

double chisq_quantile(double alpha, double df) {
    check_df(df);
    if (!(alpha > 0.0 && alpha < 1.0)) {
        throw DomainError("chi-square quantile needs alpha in (0,1)");
    }
    return 2.0 * boost::math::gamma_q_inv(0.5 * df, alpha);
}

double noncentral_chisq_sf(double x, double df, double ncp) {
    check_df(df);
    if (!(ncp >= 0.0) || !std::isfinite(ncp)) {
        throw DomainError("noncentrality must be finite and non-negative");
    }
    if (x <= 0.0) {
        return 1.0;
    }
    const double v = poisson_mixture(0.5 * ncp, [&](int k) { return chisq_sf(x, df + 2.0 * k); });
    return std::min(1.0, std::max(0.0, v));
}

double std_normal_cdf(double z) {
    return 0.5 * std::erfc(-z / std::numbers::sqrt2);
}

double std_normal_sf(double z) {
    return 0.5 * std::erfc(z / std::numbers::sqrt2);
}

double std_normal_pdf(double z) {
    return std::exp(-0.5 * z * z) / std::sqrt(2.0 * std::numbers::pi);
}

double std_normal_quantile(double q) {
    if (!(q > 0.0 && q < 1.0)) {
        throw DomainError("normal quantile needs q in (0,1)");
    }
    return -std::numbers::sqrt2 * boost::math::erfc_inv(2.0 * q);
}

double kp_star(double s, double df, double alpha) {
    if (!(s >= 0.0)) {
        throw DomainError("K* needs a non-negative argument");
    }
    const double c = chisq_quantile(alpha, df);
    return poisson_mixture(0.5 * s, [&](int v) {
        return chisq_sf(c, df + 2.0 * v + 2.0) - chisq_sf(c, df + 2.0 * v);
    });
}

double poisson_pmf(int k, double lambda) {
    if (k < 0) {
        return 0.0;
    }
    if (lambda == 0.0) {
        return k == 0 ? 1.0 : 0.0;
    }
    return std::exp(-lambda + k * std::log(lambda) - std::lgamma(k + 1.0));
}

}  // namespace rwt::dist
