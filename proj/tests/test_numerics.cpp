#include "oracles.hpp"

#include "rwt/distributions.hpp"
#include "rwt/optimize.hpp"
#include "rwt/quadrature.hpp"

#include <doctest.h>

#include <cmath>

using namespace rwt;

namespace {
constexpr double kPi = 3.14159265358979323846;
}

TEST_SUITE("numerics") {

TEST_CASE("chi-square quantiles match tabulated critical values") {
    CHECK(dist::chisq_quantile(0.05, 1) == doctest::Approx(3.841458820694124).epsilon(1e-13));
    CHECK(dist::chisq_quantile(0.05, 2) == doctest::Approx(5.991464547107979).epsilon(1e-13));
    CHECK(dist::chisq_quantile(0.01, 3) == doctest::Approx(11.34486673014437).epsilon(1e-12));
    // df = 2 is exponential with mean 2
    CHECK(dist::chisq_sf(3.0, 2) == doctest::Approx(std::exp(-1.5)).epsilon(1e-14));
    CHECK(dist::chisq_cdf(3.0, 2) + dist::chisq_sf(3.0, 2) == doctest::Approx(1.0));
    CHECK(dist::chisq_pdf(3.0, 2) == doctest::Approx(0.5 * std::exp(-1.5)).epsilon(1e-14));
}

TEST_CASE("standard normal helpers") {
    CHECK(dist::std_normal_cdf(1.959963984540054) == doctest::Approx(0.975).epsilon(1e-14));
    CHECK(dist::std_normal_quantile(0.95) == doctest::Approx(1.6448536269514722).epsilon(1e-14));
    CHECK(dist::std_normal_quantile(1e-10) == doctest::Approx(-6.361340902404056).epsilon(1e-12));
    CHECK(dist::std_normal_sf(-0.3) == doctest::Approx(dist::std_normal_cdf(0.3)));
    CHECK(dist::std_normal_pdf(0.7) == doctest::Approx(oracle::std_normal_pdf(0.7)).epsilon(1e-15));
}

TEST_CASE("noncentral chi-square survival agrees with quadrature of the Bessel density") {
    for (double df : {1.0, 2.0, 5.0}) {
        for (double x : {0.5, 3.0, 12.0, 40.0}) {
            for (double ncp : {0.0, 0.5, 7.0, 30.0}) {
                const double want = oracle::noncentral_chisq_sf_by_quadrature(x, df, ncp);
                CHECK(dist::noncentral_chisq_sf(x, df, ncp) == doctest::Approx(want).epsilon(1e-9));
            }
        }
    }
    CHECK(dist::noncentral_chisq_sf(3.0, 1, 0.0) == doctest::Approx(dist::chisq_sf(3.0, 1)));
    CHECK(dist::noncentral_chisq_sf(0.0, 1, 4.0) == doctest::Approx(1.0));
    // large noncentrality still sums properly
    CHECK(dist::noncentral_chisq_sf(500.0, 2, 480.0) ==
          doctest::Approx(oracle::noncentral_chisq_sf_by_quadrature(500.0, 2, 480.0)).epsilon(1e-8));
}

TEST_CASE("kp_star is twice the noncentrality derivative of the power") {
    const double c = dist::chisq_quantile(0.05, 1);
    for (double s : {0.0, 0.4, 2.0, 9.0}) {
        const double h = 1e-5;
        const double lo = std::max(s - h, 0.0);
        const double deriv =
            (dist::noncentral_chisq_sf(c, 1, s + h) - dist::noncentral_chisq_sf(c, 1, lo)) /
            (s + h - lo);
        CHECK(dist::kp_star(s, 1, 0.05) == doctest::Approx(2.0 * deriv).epsilon(1e-6));
        CHECK(dist::kp_star(s, 1, 0.05) > 0.0);
    }
}

TEST_CASE("poisson pmf") {
    double total = 0.0;
    for (int k = 0; k < 60; ++k) {
        total += dist::poisson_pmf(k, 7.5);
    }
    CHECK(total == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(dist::poisson_pmf(3, 2.0) == doctest::Approx(8.0 / 6.0 * std::exp(-2.0)).epsilon(1e-14));
    CHECK(dist::poisson_pmf(0, 0.0) == 1.0);
}

TEST_CASE("adaptive quadrature on finite, infinite and singular integrands") {
    CHECK(quad::integrate([](double x) { return x * x; }, 0, 1).value ==
          doctest::Approx(1.0 / 3.0).epsilon(1e-14));
    const double inf = std::numeric_limits<double>::infinity();
    CHECK(quad::integrate([](double x) { return std::exp(-x * x); }, -inf, inf).value ==
          doctest::Approx(std::sqrt(kPi)).epsilon(1e-12));
    CHECK(quad::integrate([](double x) { return std::exp(-x); }, 0, inf).value ==
          doctest::Approx(1.0).epsilon(1e-12));
    const auto r = quad::integrate([](double x) { return 1.0 / std::sqrt(x); }, 0, 1);
    CHECK(r.value == doctest::Approx(2.0).epsilon(1e-9));
    CHECK(r.converged);
    CHECK(quad::integrate([](double x) { return std::sin(x); }, 0, kPi).value ==
          doctest::Approx(2.0).epsilon(1e-14));
}

TEST_CASE("composite rule integrates smooth functions") {
    const auto rule = quad::composite_rule(-2.0, 3.0, 10);
    double w = 0.0;
    double cube = 0.0;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
        w += rule.weights[i];
        cube += rule.weights[i] * std::pow(rule.nodes[i], 3);
    }
    CHECK(w == doctest::Approx(5.0).epsilon(1e-14));
    CHECK(cube == doctest::Approx((81.0 - 16.0) / 4.0).epsilon(1e-13));
}

TEST_CASE("brent and nelder-mead") {
    const auto b = opt::brent([](double x) { return (x - 2.0) * (x - 2.0) + 1.0; }, 0.0, 5.0);
    CHECK(b.x(0) == doctest::Approx(2.0).epsilon(1e-7));
    CHECK(b.value == doctest::Approx(1.0));
    Vector x0(2);
    x0 << -1.2, 1.0;
    Vector step = Vector::Constant(2, 0.5);
    const auto nm = opt::nelder_mead(
        [](const Vector& v) {
            return 100 * std::pow(v(1) - v(0) * v(0), 2) + std::pow(1 - v(0), 2);
        },
        x0, step, 1e-12, 5000);
    CHECK(nm.x(0) == doctest::Approx(1.0).epsilon(1e-5));
    CHECK(nm.x(1) == doctest::Approx(1.0).epsilon(1e-5));
}

}  // TEST_SUITE
