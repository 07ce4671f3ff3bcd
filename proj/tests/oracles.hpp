#pragma once

// Independent reference computations shared by the unit and acceptance tests.
// Nothing here calls into the library's own numerics.

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/special_functions/bessel.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include <cmath>
#include <numeric>
#include <string>
#include <vector>

namespace oracle {

// Noncentral chi-square density in its Bessel form.
inline double noncentral_chisq_pdf(double x, double df, double ncp) {
    if (x <= 0.0) {
        return 0.0;
    }
    if (ncp == 0.0) {
        return std::exp((df / 2 - 1) * std::log(x) - x / 2 - (df / 2) * std::log(2.0) -
                        std::lgamma(df / 2));
    }
    const double nu = df / 2 - 1;
    const double z = std::sqrt(ncp * x);
    // I_nu(z) e^{-z}; beyond z = 600 the Hankel expansion avoids overflow.
    double scaled = 0.0;
    if (z <= 600.0) {
        scaled = boost::math::cyl_bessel_i(nu, z) * std::exp(-z);
    } else {
        const double mu = 4 * nu * nu;
        double term = 1.0;
        double sum = 1.0;
        for (int k = 1; k <= 6; ++k) {
            term *= -(mu - (2.0 * k - 1) * (2.0 * k - 1)) / (k * 8.0 * z);
            sum += term;
        }
        scaled = sum / std::sqrt(2.0 * 3.14159265358979323846 * z);
    }
    return 0.5 * std::exp(-(x + ncp) / 2 + z) * std::pow(x / ncp, nu / 2) * scaled;
}

inline double noncentral_chisq_sf_by_quadrature(double x, double df, double ncp) {
    boost::math::quadrature::exp_sinh<double> integrator;
    double err = 0.0;
    const double v = integrator.integrate(
        [=](double t) { return noncentral_chisq_pdf(x + t, df, ncp); }, 0.0,
        std::numeric_limits<double>::infinity(), 1e-13, &err);
    return v;
}

inline double mean(const std::vector<double>& v) {
    return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

// Classical two-sample Wald statistic for equality of a scalar parameter,
// nm/(n+m) (θ̂₁ − θ̂₂)² I(θ̂₀) with θ̂₀ the pooled-sample MLE; MLEs in closed form.
inline double classical_wald(const std::string& family, const std::vector<double>& a,
                             const std::vector<double>& b, double sigma = 1.0) {
    const double n = static_cast<double>(a.size());
    const double m = static_cast<double>(b.size());
    const double t1 = mean(a);
    const double t2 = mean(b);
    const double t0 = (n * t1 + m * t2) / (n + m);
    double info = 0.0;
    if (family == "normal-known-sigma") {
        info = 1.0 / (sigma * sigma);
    } else if (family == "poisson") {
        info = 1.0 / t0;
    } else if (family == "exponential") {
        info = 1.0 / (t0 * t0);
    }
    return n * m / (n + m) * (t1 - t2) * (t1 - t2) * info;
}

inline double std_normal_cdf(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }
inline double std_normal_pdf(double z) {
    return std::exp(-0.5 * z * z) / std::sqrt(2.0 * 3.14159265358979323846);
}

// Closed-form second-order IF of the known-variance normal test at θ₁ = θ₂.
inline double normal_if2(double x, double theta, double beta, double sigma = 1.0) {
    const double d = x - theta;
    return 2.0 * std::pow(1.0 + 2.0 * beta, 1.5) * d * d *
           std::exp(-beta * d * d / (sigma * sigma)) / (sigma * sigma);
}

}  // namespace oracle
