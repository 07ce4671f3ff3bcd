#include "rwt/robustness.hpp"

#include "rwt/distributions.hpp"
#include "rwt/errors.hpp"
#include "rwt/estimation.hpp"
#include "rwt/optimize.hpp"

#include <boost/math/tools/minima.hpp>

#include <algorithm>
#include <cmath>
#include <limits>

namespace rwt {

namespace {

// Everything about the null that does not depend on the contamination point.
struct NullContext {
    const ParametricFamily& family;
    const TestNull& null;
    double beta;
    Matrix jinv1;
    Vector xi1;
    Matrix jinv2;
    Vector xi2;
    Matrix psi1;
    Matrix psi2;
    Matrix cov;
    Matrix cov_inv;

    NullContext(const ParametricFamily& f, const TestNull& n, double b)
        : family(f), null(n), beta(b) {
        if (!(b >= 0.0) || !std::isfinite(b)) {
            throw DomainError("beta must be non-negative");
        }
        family.require_domain(null.theta10);
        family.require_domain(null.theta20);
        if (!(null.omega > 0.0 && null.omega < 1.0)) {
            throw DomainError("omega must lie in (0, 1)");
        }
        const Vector at_null = null.psi(null.theta10, null.theta20);
        if (at_null.lpNorm<Eigen::Infinity>() > 1e-8) {
            throw DomainError("supplied parameters do not satisfy the null restriction");
        }
        if (null.one_sided && null.psi.r() != 1) {
            throw DomainError("one-sided analysis needs a scalar restriction");
        }
        null.psi.check_rank(null.theta10, null.theta20);
        const DpdMoments m1 = family.moments(null.theta10, beta);
        const DpdMoments m2 = family.moments(null.theta20, beta);
        jinv1 = checked_inverse(m1.j, "J_beta");
        jinv2 = checked_inverse(m2.j, "J_beta");
        xi1 = m1.xi;
        xi2 = m2.xi;
        psi1 = null.psi.jacobian1(null.theta10, null.theta20);
        psi2 = null.psi.jacobian2(null.theta10, null.theta20);
        if (null.simple) {
            cov = sigma_beta(family, null.theta10, beta);
        } else {
            const double w = null.omega;
            cov = w * psi1.transpose() * sigma_beta(family, null.theta10, beta) * psi1 +
                  (1.0 - w) * psi2.transpose() * sigma_beta(family, null.theta20, beta) * psi2;
            cov = 0.5 * (cov + cov.transpose());
        }
        cov_inv = spd_inverse(cov, "null covariance");
    }

    Vector influence1(double x) const {
        const Vector& t = null.theta10;
        const double fb = beta == 0.0 ? 1.0 : std::exp(beta * family.log_density(t, x));
        return jinv1 * (family.score(t, x) * fb - xi1);
    }

    Vector influence2(double y) const {
        const Vector& t = null.theta20;
        const double fb = beta == 0.0 ? 1.0 : std::exp(beta * family.log_density(t, y));
        return jinv2 * (family.score(t, y) * fb - xi2);
    }

    // Ψ1ᵀIF(x), Ψ2ᵀIF(y) or their sum, optionally with the √ω, √(1−ω) drift weights.
    Vector direction(const ContaminationPattern& p, bool weighted) const {
        const double a = weighted ? std::sqrt(null.omega) : 1.0;
        const double b = weighted ? std::sqrt(1.0 - null.omega) : 1.0;
        Vector v = Vector::Zero(null.psi.r());
        if (p.which != Pattern::SecondSample) {
            v += a * psi1.transpose() * influence1(p.x);
        }
        if (p.which != Pattern::FirstSample) {
            v += b * psi2.transpose() * influence2(p.y);
        }
        return v;
    }

    Vector drift(const Vector& delta1, const Vector& delta2) const {
        return std::sqrt(null.omega) * psi1.transpose() * delta1 +
               std::sqrt(1.0 - null.omega) * psi2.transpose() * delta2;
    }

    double if_value(int order, const ContaminationPattern& p) const {
        const Vector v = direction(p, false);
        if (null.one_sided) {
            if (order != 1) {
                throw DomainError("one-sided tests are analysed through the first-order IF");
            }
            return v(0) / std::sqrt(cov(0, 0));
        }
        if (order == 1) {
            return 0.0;
        }
        if (order != 2) {
            throw DomainError("influence function order must be 1 or 2");
        }
        return 2.0 * v.dot(cov_inv * v);
    }

    double power(const Vector& w, double alpha) const {
        if (null.one_sided) {
            const double z = dist::std_normal_quantile(1.0 - alpha);
            return dist::std_normal_sf(z - w(0) / std::sqrt(cov(0, 0)));
        }
        const double df = null.psi.r();
        return dist::noncentral_chisq_sf(dist::chisq_quantile(alpha, df), df, w.dot(cov_inv * w));
    }
};

void check_alpha(double alpha) {
    if (!(alpha > 0.0 && alpha < 1.0)) {
        throw DomainError("alpha must lie in (0, 1)");
    }
}

struct Range {
    double lo;
    double hi;
    bool integer;
};

Range search_range(const ParametricFamily& family, const Vector& theta) {
    const double loc = family.location(theta);
    const double s = family.scale(theta);
    switch (family.support()) {
        case Support::Real:
            return {loc - 50.0 * s, loc + 50.0 * s, false};
        case Support::PositiveReal:
            return {0.0, std::max(loc, 0.0) + 50.0 * s, false};
        case Support::NonNegativeInteger:
            return {0.0, std::ceil(std::max(loc, 0.0) + 50.0 * s), true};
    }
    return {0.0, 0.0, false};
}

std::vector<double> grid_points(const Range& r, int points) {
    std::vector<double> g;
    if (r.integer) {
        for (double k = r.lo; k <= r.hi; k += 1.0) {
            g.push_back(k);
        }
        return g;
    }
    for (int i = 0; i < points; ++i) {
        g.push_back(r.lo + (r.hi - r.lo) * i / (points - 1));
    }
    return g;
}

}  // namespace

TestNull TestNull::simple_null(const ParametricFamily& family, const Vector& theta0,
                               double omega, bool one_sided) {
    TestNull n{HypothesisFunction::difference(family.dimension()), theta0, theta0, omega,
               one_sided, true};
    return n;
}

TestNull TestNull::composite(HypothesisFunction psi, const Vector& theta10,
                             const Vector& theta20, double omega, bool one_sided) {
    return TestNull{std::move(psi), theta10, theta20, omega, one_sided, false};
}

IfReport test_if(int order, const ParametricFamily& family, const TestNull& null, double beta,
                 const ContaminationPattern& pattern) {
    const NullContext ctx(family, null, beta);
    IfReport r;
    r.order = order;
    r.value = ctx.if_value(order, pattern);
    r.pattern = pattern;
    r.beta = beta;
    r.one_sided = null.one_sided;
    return r;
}

SensitivityReport gross_error_sensitivity(const ParametricFamily& family, const TestNull& null,
                                          double beta, Pattern which) {
    const NullContext ctx(family, null, beta);
    SensitivityReport out;
    if (beta == 0.0) {
        out.value = std::numeric_limits<double>::infinity();
        out.bounded = false;
        return out;
    }
    const int order = null.one_sided ? 1 : 2;
    auto value = [&](double x, double y) {
        return std::abs(ctx.if_value(order, {which, x, y}));
    };
    const Range rx = search_range(family, null.theta10);
    const Range ry = search_range(family, null.theta20);

    if (which != Pattern::Both) {
        const Range& r = which == Pattern::FirstSample ? rx : ry;
        const std::vector<double> g = grid_points(r, 10001);
        auto at = [&](double t) { return which == Pattern::FirstSample ? value(t, 0.0) : value(0.0, t); };
        std::size_t best = 0;
        double best_v = -1.0;
        for (std::size_t i = 0; i < g.size(); ++i) {
            const double v = at(g[i]);
            if (v > best_v) {
                best_v = v;
                best = i;
            }
        }
        double best_t = g[best];
        if (!r.integer) {
            const double a = g[best == 0 ? 0 : best - 1];
            const double b = g[std::min(best + 1, g.size() - 1)];
            const auto [t, neg] = boost::math::tools::brent_find_minima(
                [&](double t) { return -at(t); }, a, b, std::numeric_limits<double>::digits / 2);
            if (-neg > best_v) {
                best_v = -neg;
                best_t = t;
            }
        }
        out.value = best_v;
        (which == Pattern::FirstSample ? out.x : out.y) = best_t;
        return out;
    }

    const std::vector<double> gx = grid_points(rx, 100);
    const std::vector<double> gy = grid_points(ry, 100);
    double best_v = -1.0;
    for (double x : gx) {
        for (double y : gy) {
            const double v = value(x, y);
            if (v > best_v) {
                best_v = v;
                out.x = x;
                out.y = y;
            }
        }
    }
    if (!rx.integer) {
        Vector start(2);
        start << out.x, out.y;
        Vector step(2);
        step << (rx.hi - rx.lo) / 99.0, (ry.hi - ry.lo) / 99.0;
        const opt::Result r =
            opt::nelder_mead([&](const Vector& v) { return -value(v(0), v(1)); }, start, step, 1e-10, 2000);
        if (-r.value > best_v) {
            best_v = -r.value;
            out.x = r.x(0);
            out.y = r.x(1);
        }
    }
    out.value = best_v;
    return out;
}

double pif(const ParametricFamily& family, const TestNull& null, const Vector& delta1,
           const Vector& delta2, double beta, double alpha, const ContaminationPattern& pattern) {
    check_alpha(alpha);
    const NullContext ctx(family, null, beta);
    const Vector w = ctx.drift(delta1, delta2);
    const Vector v = ctx.direction(pattern, true);
    if (null.one_sided) {
        const double sd = std::sqrt(ctx.cov(0, 0));
        const double z = dist::std_normal_quantile(1.0 - alpha);
        return dist::std_normal_pdf(z - w(0) / sd) * v(0) / sd;
    }
    const double ncp = w.dot(ctx.cov_inv * w);
    return dist::kp_star(ncp, null.psi.r(), alpha) * w.dot(ctx.cov_inv * v);
}

double lif(const ParametricFamily& family, const TestNull& null, double beta, double alpha,
           const ContaminationPattern& pattern) {
    const Vector z1 = Vector::Zero(null.theta10.size());
    const Vector z2 = Vector::Zero(null.theta20.size());
    return pif(family, null, z1, z2, beta, alpha, pattern);
}

double contaminated_contiguous_power(const ParametricFamily& family, const TestNull& null,
                                     const Vector& delta1, const Vector& delta2, double beta,
                                     double alpha, double epsilon,
                                     const ContaminationPattern& pattern) {
    check_alpha(alpha);
    if (!std::isfinite(epsilon)) {
        throw DomainError("epsilon must be finite");
    }
    const NullContext ctx(family, null, beta);
    Vector d1 = delta1;
    Vector d2 = delta2;
    if (epsilon != 0.0) {
        if (pattern.which != Pattern::SecondSample) {
            d1 += epsilon * ctx.influence1(pattern.x);
        }
        if (pattern.which != Pattern::FirstSample) {
            d2 += epsilon * ctx.influence2(pattern.y);
        }
    }
    return ctx.power(ctx.drift(d1, d2), alpha);
}

double test_functional(const ParametricFamily& family, const TestNull& null, double beta,
                       const ContaminationPattern& pattern, double epsilon) {
    const NullContext ctx(family, null, beta);
    auto contaminated_fit = [&](const Vector& theta, bool hit, double point) {
        const quad::NodeSet g = discretize(family, theta);
        std::vector<double> x = g.nodes;
        std::vector<double> w = g.weights;
        if (hit && epsilon != 0.0) {
            for (double& v : w) {
                v *= 1.0 - epsilon;
            }
            x.push_back(point);
            w.push_back(epsilon);
        }
        return fit_mdpde_weighted(family, x, w, beta, theta).theta_hat;
    };
    const Vector u1 = contaminated_fit(null.theta10, pattern.which != Pattern::SecondSample, pattern.x);
    const Vector u2 = contaminated_fit(null.theta20, pattern.which != Pattern::FirstSample, pattern.y);
    const Vector v = null.psi(u1, u2);
    if (null.one_sided) {
        return v(0) / std::sqrt(ctx.cov(0, 0));
    }
    return v.dot(ctx.cov_inv * v);
}

}  // namespace rwt
