#include "oracles.hpp"

#include "rwt/distributions.hpp"
#include "rwt/errors.hpp"
#include "rwt/robustness.hpp"
#include "rwt/wald_tests.hpp"

#include <doctest.h>

#include <cmath>

using namespace rwt;

TEST_SUITE("robustness") {

TEST_CASE("second-order IF of the known-variance normal test") {
    NormalKnownSigma f(1.0);
    const auto null = TestNull::simple_null(f, scalar_vector(0.3));
    for (double beta : {0.0, 0.2, 0.8}) {
        for (double x : {-3.0, -0.5, 0.3, 1.0, 2.5}) {
            const auto r = test_if(2, f, null, beta, {Pattern::FirstSample, x, 0.0});
            CHECK(r.value == doctest::Approx(oracle::normal_if2(x, 0.3, beta)).epsilon(1e-10));
            // the same function of the contamination point in either sample
            CHECK(test_if(2, f, null, beta, {Pattern::SecondSample, 0.0, x}).value ==
                  doctest::Approx(r.value).epsilon(1e-12));
        }
    }
    // first order vanishes for the two-sided test
    CHECK(test_if(1, f, null, 0.5, {Pattern::FirstSample, 2.0, 0.0}).value == 0.0);
}

TEST_CASE("IF matches the finite-difference functional oracle") {
    NormalKnownSigma f(1.0);
    const auto null = TestNull::simple_null(f, scalar_vector(0.0));
    const double h = 1e-3;
    for (double beta : {0.0, 0.5}) {
        const ContaminationPattern p{Pattern::FirstSample, 1.5, 0.0};
        const double fd = (test_functional(f, null, beta, p, h) - 2 * test_functional(f, null, beta, p, 0.0) +
                           test_functional(f, null, beta, p, -h)) / (h * h);
        CHECK(fd == doctest::Approx(test_if(2, f, null, beta, p).value).epsilon(1e-4));
    }
    Exponential ex;
    const auto null2 = TestNull::simple_null(ex, scalar_vector(1.5), 0.4);
    const ContaminationPattern p{Pattern::SecondSample, 0.0, 4.0};
    const double fd = (test_functional(ex, null2, 0.3, p, h) - 2 * test_functional(ex, null2, 0.3, p, 0.0) +
                       test_functional(ex, null2, 0.3, p, -h)) / (h * h);
    CHECK(fd == doctest::Approx(test_if(2, ex, null2, 0.3, p).value).epsilon(1e-4));
}

TEST_CASE("both-sample contamination at equal points cancels") {
    NormalKnownSigma f(1.0);
    const auto null = TestNull::simple_null(f, scalar_vector(0.0), 0.3);
    for (double x : {-2.0, 0.0, 0.7, 5.0}) {
        CHECK(test_if(2, f, null, 0.4, {Pattern::Both, x, x}).value == 0.0);
    }
}

TEST_CASE("gross-error sensitivity") {
    NormalKnownSigma f(1.0);
    const auto null = TestNull::simple_null(f, scalar_vector(0.0));
    // sup of 2(1+2β)^{3/2} x² e^{−βx²} is at x² = 1/β
    for (double beta : {0.25, 0.5, 1.0}) {
        const auto s = gross_error_sensitivity(f, null, beta, Pattern::FirstSample);
        CHECK(s.bounded);
        CHECK(s.value == doctest::Approx(2 * std::pow(1 + 2 * beta, 1.5) / (beta * std::exp(1.0))).epsilon(1e-9));
        CHECK(std::abs(s.x) == doctest::Approx(1 / std::sqrt(beta)).epsilon(1e-4));
    }
    const auto mle = gross_error_sensitivity(f, null, 0.0, Pattern::FirstSample);
    CHECK_FALSE(mle.bounded);
    CHECK(std::isinf(mle.value));
    // for both samples the worst case puts the points on opposite sides
    const auto both = gross_error_sensitivity(f, null, 0.5, Pattern::Both);
    CHECK(both.value > gross_error_sensitivity(f, null, 0.5, Pattern::FirstSample).value);
    CHECK(both.x * both.y < 0);
}

TEST_CASE("power influence function is the derivative of contaminated power") {
    NormalKnownSigma f(1.0);
    const auto null = TestNull::simple_null(f, scalar_vector(0.0), 0.4);
    const Vector d1 = scalar_vector(1.2), d2 = scalar_vector(-0.8);
    for (auto which : {Pattern::FirstSample, Pattern::SecondSample, Pattern::Both}) {
        const ContaminationPattern p{which, 1.3, -0.7};
        const double h = 1e-4;
        const double fd = (contaminated_contiguous_power(f, null, d1, d2, 0.3, 0.05, h, p) -
                           contaminated_contiguous_power(f, null, d1, d2, 0.3, 0.05, -h, p)) / (2 * h);
        CHECK(pif(f, null, d1, d2, 0.3, 0.05, p) == doctest::Approx(fd).epsilon(1e-7));
    }
    CHECK(contaminated_contiguous_power(f, null, d1, d2, 0.3, 0.05, 0.0, {Pattern::FirstSample, 1.0, 0.0}) ==
          doctest::Approx(contiguous_power(f, scalar_vector(0.0), scalar_vector(0.0), d1, d2, 0.4, 0.3, 0.05)));
}

TEST_CASE("level influence") {
    NormalKnownSigma f(1.0);
    const auto two = TestNull::simple_null(f, scalar_vector(0.0));
    CHECK(lif(f, two, 0.3, 0.05, {Pattern::FirstSample, 2.0, 0.0}) == 0.0);
    const auto one = TestNull::simple_null(f, scalar_vector(0.0), 0.5, true);
    const double z = dist::std_normal_quantile(0.95);
    // β = 0: linear in x with slope √ω φ(z₁₋α)
    CHECK(lif(f, one, 0.0, 0.05, {Pattern::FirstSample, 3.0, 0.0}) ==
          doctest::Approx(3.0 * std::sqrt(0.5) * oracle::std_normal_pdf(z)).epsilon(1e-10));
    // bounded for β > 0
    CHECK(std::abs(lif(f, one, 0.5, 0.05, {Pattern::FirstSample, 50.0, 0.0})) < 1e-100);
}

TEST_CASE("composite null for the full normal model") {
    NormalFull f;
    Vector t(2);
    t << 1.0, 2.0;
    const auto null = TestNull::composite(HypothesisFunction::variance_ratio(1.0), t, t, 0.3);
    const ContaminationPattern p{Pattern::Both, 2.5, -1.0};
    const double h = 1e-3;
    for (double beta : {0.0, 0.3}) {
        const double fd = (test_functional(f, null, beta, p, h) - 2 * test_functional(f, null, beta, p, 0.0) +
                           test_functional(f, null, beta, p, -h)) / (h * h);
        CHECK(fd == doctest::Approx(test_if(2, f, null, beta, p).value).epsilon(1e-4));
    }
    CHECK_THROWS_AS(contaminated_contiguous_power(f, null, Vector::Zero(2), Vector::Zero(2), 0.3, 0.05,
                                                  std::nan(""), p),
                    DomainError);
}

}  // TEST_SUITE
