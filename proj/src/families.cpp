#include "rwt/families.hpp"

#include "rwt/distributions.hpp"
#include "rwt/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <sstream>

namespace rwt {

namespace {

constexpr double kLog2Pi = 1.8378770664093454836;

quad::Options integration_options() {
    quad::Options o;
    o.abs_tol = 1e-10;
    o.rel_tol = 1e-12;
    o.max_subdivisions = 2000;
    return o;
}

double mean_of(const std::vector<double>& x) {
    return std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(x.size());
}

double median_of(std::vector<double> x) {
    const std::size_t n = x.size();
    std::nth_element(x.begin(), x.begin() + n / 2, x.end());
    const double hi = x[n / 2];
    if (n % 2 == 1) {
        return hi;
    }
    const double lo = *std::max_element(x.begin(), x.begin() + n / 2);
    return 0.5 * (lo + hi);
}

double mad_of(const std::vector<double>& x, double centre) {
    std::vector<double> dev(x.size());
    std::transform(x.begin(), x.end(), dev.begin(), [centre](double v) { return std::abs(v - centre); });
    return 1.482602218505602 * median_of(std::move(dev));
}

std::string describe(const Vector& theta) {
    std::ostringstream os;
    os << "(";
    for (Eigen::Index i = 0; i < theta.size(); ++i) {
        os << (i ? ", " : "") << theta(i);
    }
    os << ")";
    return os.str();
}

void require_nonempty(const std::vector<double>& x) {
    if (x.empty()) {
        throw DomainError("empty sample");
    }
}

}  // namespace

// ---------------------------------------------------------------- base class

double ParametricFamily::density(const Vector& theta, double x) const {
    return std::exp(log_density(theta, x));
}

bool ParametricFamily::in_support(double x) const {
    if (!std::isfinite(x)) {
        return false;
    }
    switch (support()) {
        case Support::Real:
            return true;
        case Support::PositiveReal:
            return x >= 0.0;
        case Support::NonNegativeInteger:
            return x >= 0.0 && x == std::floor(x);
    }
    return false;
}

void ParametricFamily::require_domain(const Vector& theta) const {
    if (theta.size() != dimension() || !theta.allFinite() || !in_domain(theta)) {
        throw DomainError(name() + ": parameter " + describe(theta) + " outside the domain");
    }
}

Vector ParametricFamily::score(const Vector& theta, double x) const {
    const int p = dimension();
    Vector out(p);
    for (int i = 0; i < p; ++i) {
        const double h = 1e-5 * (1.0 + std::abs(theta(i)));
        Vector up = theta;
        Vector dn = theta;
        up(i) += h;
        dn(i) -= h;
        out(i) = (log_density(up, x) - log_density(dn, x)) / (2.0 * h);
    }
    return out;
}

Matrix ParametricFamily::score_jacobian(const Vector& theta, double x) const {
    const int p = dimension();
    Matrix out(p, p);
    for (int j = 0; j < p; ++j) {
        const double h = 1e-4 * (1.0 + std::abs(theta(j)));
        Vector up = theta;
        Vector dn = theta;
        up(j) += h;
        dn(j) -= h;
        out.col(j) = (score(up, x) - score(dn, x)) / (2.0 * h);
    }
    return 0.5 * (out + out.transpose());
}

double ParametricFamily::integrate(const Vector& theta,
                                   const std::function<double(double)>& g) const {
    const double loc = location(theta);
    const double s = scale(theta);
    switch (support()) {
        case Support::Real: {
            auto h = [&](double t) {
                const double d = 1.0 - t;
                const double z = s * t / d;
                return (g(loc + z) + g(loc - z)) * s / (d * d);
            };
            return quad::integrate(h, 0.0, 1.0, integration_options()).value;
        }
        case Support::PositiveReal: {
            // Split at the location so a mode away from zero is not skipped.
            const double cut = std::max(loc, 0.0);
            double below = 0.0;
            if (cut > 0.0) {
                below = quad::integrate(g, 0.0, cut, integration_options()).value;
            }
            auto h = [&](double t) {
                const double d = 1.0 - t;
                return g(cut + s * t / d) * s / (d * d);
            };
            return below + quad::integrate(h, 0.0, 1.0, integration_options()).value;
        }
        case Support::NonNegativeInteger: {
            double sum = 0.0;
            for (long k = 0; k < 100000000L; ++k) {
                const double x = static_cast<double>(k);
                const double term = g(x);
                if (std::isfinite(term)) {
                    sum += term;
                }
                if (x > loc + 1.0 && log_density(theta, x) < -40.0) {
                    break;
                }
            }
            return sum;
        }
    }
    return 0.0;
}

double ParametricFamily::numeric_power_integral(const Vector& theta, double beta) const {
    return integrate(theta, [&](double x) { return std::exp((1.0 + beta) * log_density(theta, x)); });
}

Vector ParametricFamily::numeric_xi(const Vector& theta, double beta) const {
    const int p = dimension();
    Vector out(p);
    for (int i = 0; i < p; ++i) {
        out(i) = integrate(theta, [&](double x) {
            const double w = std::exp((1.0 + beta) * log_density(theta, x));
            return w == 0.0 ? 0.0 : score(theta, x)(i) * w;
        });
    }
    return out;
}

DpdMoments ParametricFamily::numeric_moments(const Vector& theta, double beta) const {
    const int p = dimension();
    DpdMoments m;
    m.power_integral = numeric_power_integral(theta, beta);
    m.xi = numeric_xi(theta, beta);
    m.j.resize(p, p);
    m.k.resize(p, p);
    for (int a = 0; a < p; ++a) {
        for (int b = a; b < p; ++b) {
            auto entry = [&](double power) {
                return integrate(theta, [&, power](double x) {
                    const double w = std::exp(power * log_density(theta, x));
                    if (w == 0.0) {
                        return 0.0;
                    }
                    const Vector u = score(theta, x);
                    return u(a) * u(b) * w;
                });
            };
            m.j(a, b) = m.j(b, a) = entry(1.0 + beta);
            m.k(a, b) = m.k(b, a) = entry(1.0 + 2.0 * beta);
        }
    }
    m.k -= m.xi * m.xi.transpose();
    return m;
}

double ParametricFamily::numeric_cross_power_integral(const Vector& theta1, const Vector& theta2,
                                                      double beta) const {
    return integrate(theta1, [&](double x) {
        return std::exp(beta * log_density(theta2, x) + log_density(theta1, x));
    });
}

double ParametricFamily::numeric_kl_divergence(const Vector& theta1, const Vector& theta2) const {
    return integrate(theta1, [&](double x) {
        const double l1 = log_density(theta1, x);
        const double f1 = std::exp(l1);
        return f1 == 0.0 ? 0.0 : f1 * (l1 - log_density(theta2, x));
    });
}

double ParametricFamily::power_integral(const Vector& theta, double beta) const {
    return numeric_power_integral(theta, beta);
}

Vector ParametricFamily::xi(const Vector& theta, double beta) const {
    return numeric_xi(theta, beta);
}

DpdMoments ParametricFamily::moments(const Vector& theta, double beta) const {
    return numeric_moments(theta, beta);
}

double ParametricFamily::cross_power_integral(const Vector& theta1, const Vector& theta2,
                                              double beta) const {
    return numeric_cross_power_integral(theta1, theta2, beta);
}

double ParametricFamily::kl_divergence(const Vector& theta1, const Vector& theta2) const {
    return numeric_kl_divergence(theta1, theta2);
}

Vector ParametricFamily::to_free(const Vector& theta) const {
    // Single positive parameter by default: log scale.
    return theta.array().log().matrix();
}

Vector ParametricFamily::from_free(const Vector& eta) const {
    return eta.array().exp().matrix();
}

void ParametricFamily::check_sample(const std::vector<double>& x) const {
    require_nonempty(x);
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (!in_support(x[i])) {
            std::ostringstream os;
            os << name() << ": observation " << i + 1 << " (" << x[i] << ") outside the support";
            throw DomainError(os.str());
        }
    }
}

std::pair<double, double> ParametricFamily::search_interval(const std::vector<double>& x) const {
    const Vector start = initial_estimate(x);
    const double s = scale(start);
    double lo = start(0) - 10.0 * s;
    if (!in_domain(scalar_vector(lo))) {
        lo = start(0) / 100.0;
    }
    return {lo, start(0) + 10.0 * s};
}

// ---------------------------------------------------------- known-σ normal

NormalKnownSigma::NormalKnownSigma(double sigma) : sigma_(sigma) {
    if (!(sigma > 0.0) || !std::isfinite(sigma)) {
        throw DomainError("normal-known-sigma: sigma must be positive");
    }
}

bool NormalKnownSigma::in_domain(const Vector& theta) const {
    return theta.size() == 1 && std::isfinite(theta(0));
}

double NormalKnownSigma::log_density(const Vector& theta, double x) const {
    const double z = (x - theta(0)) / sigma_;
    return -0.5 * kLog2Pi - std::log(sigma_) - 0.5 * z * z;
}

Vector NormalKnownSigma::score(const Vector& theta, double x) const {
    return scalar_vector((x - theta(0)) / (sigma_ * sigma_));
}

Matrix NormalKnownSigma::score_jacobian(const Vector&, double) const {
    return Matrix::Constant(1, 1, -1.0 / (sigma_ * sigma_));
}

double NormalKnownSigma::power_integral(const Vector&, double beta) const {
    return std::pow(2.0 * std::numbers::pi, -0.5 * beta) * std::pow(sigma_, -beta) /
           std::sqrt(1.0 + beta);
}

Vector NormalKnownSigma::xi(const Vector&, double) const { return Vector::Zero(1); }

DpdMoments NormalKnownSigma::moments(const Vector& theta, double beta) const {
    DpdMoments m;
    const double s2 = sigma_ * sigma_;
    m.power_integral = power_integral(theta, beta);
    m.xi = Vector::Zero(1);
    m.j = Matrix::Constant(1, 1, std::pow(2.0 * std::numbers::pi, -0.5 * beta) *
                                     std::pow(sigma_, -beta) / s2 * std::pow(1.0 + beta, -1.5));
    m.k = Matrix::Constant(1, 1, std::pow(2.0 * std::numbers::pi, -beta) *
                                     std::pow(sigma_, -2.0 * beta) / s2 *
                                     std::pow(1.0 + 2.0 * beta, -1.5));
    return m;
}

namespace {

// ∫ N(x; μ2, s2²)^β N(x; μ1, s1²) dx, β > 0.
double normal_cross(double mu1, double s1, double mu2, double s2, double beta) {
    if (beta == 0.0) {
        return 1.0;
    }
    const double v2 = s2 * s2;
    const double v = v2 / beta + s1 * s1;
    const double d = mu1 - mu2;
    return std::pow(2.0 * std::numbers::pi * v2, -0.5 * beta) * std::sqrt(v2 / beta / v) *
           std::exp(-0.5 * d * d / v);
}

double normal_kl(double mu1, double s1, double mu2, double s2) {
    const double d = mu1 - mu2;
    return std::log(s2 / s1) + (s1 * s1 + d * d) / (2.0 * s2 * s2) - 0.5;
}

}  // namespace

double NormalKnownSigma::cross_power_integral(const Vector& theta1, const Vector& theta2,
                                              double beta) const {
    return normal_cross(theta1(0), sigma_, theta2(0), sigma_, beta);
}

double NormalKnownSigma::kl_divergence(const Vector& theta1, const Vector& theta2) const {
    return normal_kl(theta1(0), sigma_, theta2(0), sigma_);
}

Vector NormalKnownSigma::initial_estimate(const std::vector<double>& x) const {
    require_nonempty(x);
    return scalar_vector(mean_of(x));
}

Vector NormalKnownSigma::robust_start(const std::vector<double>& x) const {
    require_nonempty(x);
    return scalar_vector(median_of(x));
}

std::pair<double, double> NormalKnownSigma::search_interval(const std::vector<double>& x) const {
    const auto [lo, hi] = std::minmax_element(x.begin(), x.end());
    return {*lo - sigma_, *hi + sigma_};
}

double NormalKnownSigma::draw(const Vector& theta, double u) const {
    return theta(0) + sigma_ * dist::std_normal_quantile(u);
}

// ------------------------------------------------------------- full normal

bool NormalFull::in_domain(const Vector& theta) const {
    return theta.size() == 2 && std::isfinite(theta(0)) && std::isfinite(theta(1)) && theta(1) > 0.0;
}

double NormalFull::log_density(const Vector& theta, double x) const {
    const double z = (x - theta(0)) / theta(1);
    return -0.5 * kLog2Pi - std::log(theta(1)) - 0.5 * z * z;
}

Vector NormalFull::score(const Vector& theta, double x) const {
    const double s = theta(1);
    const double t = x - theta(0);
    Vector u(2);
    u << t / (s * s), -1.0 / s + t * t / (s * s * s);
    return u;
}

Matrix NormalFull::score_jacobian(const Vector& theta, double x) const {
    const double s = theta(1);
    const double t = x - theta(0);
    const double s2 = s * s;
    Matrix h(2, 2);
    h << -1.0 / s2, -2.0 * t / (s2 * s), -2.0 * t / (s2 * s), 1.0 / s2 - 3.0 * t * t / (s2 * s2);
    return h;
}

double NormalFull::power_integral(const Vector& theta, double beta) const {
    return std::pow(2.0 * std::numbers::pi, -0.5 * beta) * std::pow(theta(1), -beta) /
           std::sqrt(1.0 + beta);
}

Vector NormalFull::xi(const Vector& theta, double beta) const {
    Vector out = Vector::Zero(2);
    out(1) = -power_integral(theta, beta) * beta / ((1.0 + beta) * theta(1));
    return out;
}

DpdMoments NormalFull::moments(const Vector& theta, double beta) const {
    const double s2 = theta(1) * theta(1);
    const double b1 = 1.0 + beta;
    const double b2 = 1.0 + 2.0 * beta;
    DpdMoments m;
    m.power_integral = power_integral(theta, beta);
    m.xi = xi(theta, beta);
    const double mm = m.power_integral;
    const double m2 = power_integral(theta, 2.0 * beta);
    m.j = Matrix::Zero(2, 2);
    m.j(0, 0) = mm / (s2 * b1);
    m.j(1, 1) = mm * (2.0 + beta * beta) / (s2 * b1 * b1);
    m.k = Matrix::Zero(2, 2);
    m.k(0, 0) = m2 / (s2 * b2);
    m.k(1, 1) = m2 * (2.0 + 4.0 * beta * beta) / (s2 * b2 * b2) - m.xi(1) * m.xi(1);
    return m;
}

double NormalFull::cross_power_integral(const Vector& theta1, const Vector& theta2,
                                        double beta) const {
    return normal_cross(theta1(0), theta1(1), theta2(0), theta2(1), beta);
}

double NormalFull::kl_divergence(const Vector& theta1, const Vector& theta2) const {
    return normal_kl(theta1(0), theta1(1), theta2(0), theta2(1));
}

Vector NormalFull::initial_estimate(const std::vector<double>& x) const {
    require_nonempty(x);
    const double mu = mean_of(x);
    double ss = 0.0;
    for (double v : x) {
        ss += (v - mu) * (v - mu);
    }
    Vector out(2);
    out << mu, std::sqrt(ss / static_cast<double>(x.size()));
    return out;
}

Vector NormalFull::robust_start(const std::vector<double>& x) const {
    require_nonempty(x);
    const double med = median_of(x);
    double mad = mad_of(x, med);
    if (!(mad > 0.0)) {
        mad = initial_estimate(x)(1);
    }
    Vector out(2);
    out << med, mad;
    return out;
}

double NormalFull::draw(const Vector& theta, double u) const {
    return theta(0) + theta(1) * dist::std_normal_quantile(u);
}

Vector NormalFull::to_free(const Vector& theta) const {
    Vector eta(2);
    eta << theta(0), std::log(theta(1));
    return eta;
}

Vector NormalFull::from_free(const Vector& eta) const {
    Vector theta(2);
    theta << eta(0), std::exp(eta(1));
    return theta;
}

void NormalFull::check_sample(const std::vector<double>& x) const {
    ParametricFamily::check_sample(x);
    if (x.size() < 2 || std::all_of(x.begin(), x.end(), [&](double v) { return v == x.front(); })) {
        throw BoundaryError("normal: sample has zero spread, the scale estimate sits on the boundary");
    }
}

// ----------------------------------------------------------------- Poisson

bool Poisson::in_domain(const Vector& theta) const {
    return theta.size() == 1 && std::isfinite(theta(0)) && theta(0) > 0.0;
}

double Poisson::log_density(const Vector& theta, double x) const {
    if (x < 0.0 || x != std::floor(x)) {
        return -INFINITY;
    }
    return x * std::log(theta(0)) - theta(0) - std::lgamma(x + 1.0);
}

Vector Poisson::score(const Vector& theta, double x) const {
    return scalar_vector(x / theta(0) - 1.0);
}

Matrix Poisson::score_jacobian(const Vector& theta, double x) const {
    return Matrix::Constant(1, 1, -x / (theta(0) * theta(0)));
}

double Poisson::kl_divergence(const Vector& theta1, const Vector& theta2) const {
    const double a = theta1(0);
    const double b = theta2(0);
    return a * std::log(a / b) - a + b;
}

Vector Poisson::initial_estimate(const std::vector<double>& x) const {
    require_nonempty(x);
    return scalar_vector(mean_of(x));
}

Vector Poisson::robust_start(const std::vector<double>& x) const {
    require_nonempty(x);
    return scalar_vector(std::max(median_of(x), 0.5));
}

std::pair<double, double> Poisson::search_interval(const std::vector<double>& x) const {
    const auto [lo, hi] = std::minmax_element(x.begin(), x.end());
    const double floor_value = 1e-3 * std::max(mean_of(x), 1e-3);
    return {std::max(0.5 * *lo, floor_value), 1.5 * *hi + 1.0};
}

double Poisson::scale(const Vector& theta) const { return std::sqrt(theta(0)); }

double Poisson::draw(const Vector& theta, double u) const {
    // Inversion by sequential search on the cdf.
    const double lambda = theta(0);
    double p = std::exp(-lambda);
    double cdf = p;
    int k = 0;
    if (p == 0.0) {
        // Large mean: start the search from the mode in log space.
        k = static_cast<int>(std::floor(lambda));
        cdf = 0.0;
        for (int j = 0; j <= k; ++j) {
            cdf += dist::poisson_pmf(j, lambda);
        }
        p = dist::poisson_pmf(k, lambda);
        while (cdf - p >= u && k > 0) {
            cdf -= p;
            --k;
            p = dist::poisson_pmf(k, lambda);
        }
    }
    while (cdf < u) {
        ++k;
        p *= lambda / k;
        cdf += p;
        if (p == 0.0 && k > lambda) {
            break;
        }
    }
    return static_cast<double>(k);
}

void Poisson::check_sample(const std::vector<double>& x) const {
    ParametricFamily::check_sample(x);
    if (std::all_of(x.begin(), x.end(), [](double v) { return v == 0.0; })) {
        throw BoundaryError("poisson: all counts are zero, the mean estimate sits on the boundary");
    }
}

// ------------------------------------------------------------- exponential

bool Exponential::in_domain(const Vector& theta) const {
    return theta.size() == 1 && std::isfinite(theta(0)) && theta(0) > 0.0;
}

double Exponential::log_density(const Vector& theta, double x) const {
    if (x < 0.0) {
        return -INFINITY;
    }
    return -std::log(theta(0)) - x / theta(0);
}

Vector Exponential::score(const Vector& theta, double x) const {
    const double t = theta(0);
    return scalar_vector(x / (t * t) - 1.0 / t);
}

Matrix Exponential::score_jacobian(const Vector& theta, double x) const {
    const double t = theta(0);
    return Matrix::Constant(1, 1, 1.0 / (t * t) - 2.0 * x / (t * t * t));
}

double Exponential::power_integral(const Vector& theta, double beta) const {
    return std::pow(theta(0), -beta) / (1.0 + beta);
}

Vector Exponential::xi(const Vector& theta, double beta) const {
    return scalar_vector(-power_integral(theta, beta) * beta / ((1.0 + beta) * theta(0)));
}

DpdMoments Exponential::moments(const Vector& theta, double beta) const {
    const double t2 = theta(0) * theta(0);
    const double b1 = 1.0 + beta;
    const double b2 = 1.0 + 2.0 * beta;
    DpdMoments m;
    m.power_integral = power_integral(theta, beta);
    m.xi = xi(theta, beta);
    const double m2 = power_integral(theta, 2.0 * beta);
    m.j = Matrix::Constant(1, 1, m.power_integral * (1.0 + beta * beta) / (t2 * b1 * b1));
    m.k = Matrix::Constant(1, 1, m2 * (1.0 + 4.0 * beta * beta) / (t2 * b2 * b2) -
                                     m.xi(0) * m.xi(0));
    return m;
}

double Exponential::cross_power_integral(const Vector& theta1, const Vector& theta2,
                                         double beta) const {
    const double a = theta1(0);
    const double b = theta2(0);
    return std::pow(b, -beta) / (beta * a / b + 1.0);
}

double Exponential::kl_divergence(const Vector& theta1, const Vector& theta2) const {
    const double a = theta1(0);
    const double b = theta2(0);
    return std::log(b / a) + a / b - 1.0;
}

Vector Exponential::initial_estimate(const std::vector<double>& x) const {
    require_nonempty(x);
    return scalar_vector(mean_of(x));
}

Vector Exponential::robust_start(const std::vector<double>& x) const {
    require_nonempty(x);
    const double med = median_of(x);
    return scalar_vector(med > 0.0 ? med / std::numbers::ln2 : mean_of(x));
}

std::pair<double, double> Exponential::search_interval(const std::vector<double>& x) const {
    const auto [lo, hi] = std::minmax_element(x.begin(), x.end());
    const double floor_value = 1e-3 * mean_of(x);
    return {std::max(0.5 * *lo, floor_value), 2.0 * *hi};
}

double Exponential::draw(const Vector& theta, double u) const {
    return -theta(0) * std::log(u);
}

void Exponential::check_sample(const std::vector<double>& x) const {
    ParametricFamily::check_sample(x);
    if (std::all_of(x.begin(), x.end(), [](double v) { return v == 0.0; })) {
        throw BoundaryError("exponential: all observations are zero, the mean estimate sits on the boundary");
    }
}

// ----------------------------------------------------------------- numeric

NumericFamily::NumericFamily(NumericFamilySpec spec) : spec_(std::move(spec)) {
    if (spec_.dimension < 1 || !spec_.log_density || !spec_.initial_estimate) {
        throw DomainError("numeric family needs a dimension, a log-density and a start");
    }
    if (spec_.positive.empty()) {
        spec_.positive.assign(static_cast<std::size_t>(spec_.dimension), false);
    }
}

bool NumericFamily::in_domain(const Vector& theta) const {
    if (theta.size() != spec_.dimension || !theta.allFinite()) {
        return false;
    }
    for (int i = 0; i < spec_.dimension; ++i) {
        if (spec_.positive[static_cast<std::size_t>(i)] && !(theta(i) > 0.0)) {
            return false;
        }
    }
    return spec_.in_domain ? spec_.in_domain(theta) : true;
}

double NumericFamily::log_density(const Vector& theta, double x) const {
    return spec_.log_density(theta, x);
}

Vector NumericFamily::initial_estimate(const std::vector<double>& x) const {
    return spec_.initial_estimate(x);
}

Vector NumericFamily::robust_start(const std::vector<double>& x) const {
    return spec_.robust_start ? spec_.robust_start(x) : spec_.initial_estimate(x);
}

double NumericFamily::location(const Vector& theta) const {
    return spec_.location ? spec_.location(theta) : 0.0;
}

double NumericFamily::scale(const Vector& theta) const {
    return spec_.scale ? spec_.scale(theta) : 1.0;
}

double NumericFamily::draw(const Vector& theta, double u) const {
    if (!spec_.draw) {
        throw DomainError(spec_.name + ": no sampler supplied");
    }
    return spec_.draw(theta, u);
}

Vector NumericFamily::to_free(const Vector& theta) const {
    Vector eta = theta;
    for (int i = 0; i < spec_.dimension; ++i) {
        if (spec_.positive[static_cast<std::size_t>(i)]) {
            eta(i) = std::log(theta(i));
        }
    }
    return eta;
}

Vector NumericFamily::from_free(const Vector& eta) const {
    Vector theta = eta;
    for (int i = 0; i < spec_.dimension; ++i) {
        if (spec_.positive[static_cast<std::size_t>(i)]) {
            theta(i) = std::exp(eta(i));
        }
    }
    return theta;
}

// ------------------------------------------------------------------ free

FamilyPtr make_family(const std::string& name, double sigma) {
    if (name == "normal-known-sigma") {
        return std::make_shared<NormalKnownSigma>(sigma);
    }
    if (name == "normal") {
        return std::make_shared<NormalFull>();
    }
    if (name == "poisson") {
        return std::make_shared<Poisson>();
    }
    if (name == "exponential") {
        return std::make_shared<Exponential>();
    }
    throw DomainError("unknown family '" + name + "'");
}

double dpd_divergence(const ParametricFamily& family, const Vector& theta1,
                      const Vector& theta2, double beta) {
    if (!(beta >= 0.0) || !std::isfinite(beta)) {
        throw DomainError("beta must be non-negative");
    }
    family.require_domain(theta1);
    family.require_domain(theta2);
    double d;
    if (beta == 0.0) {
        d = family.kl_divergence(theta1, theta2);
    } else {
        d = family.power_integral(theta2, beta) -
            (1.0 + 1.0 / beta) * family.cross_power_integral(theta1, theta2, beta) +
            family.power_integral(theta1, beta) / beta;
    }
    return std::max(d, 0.0);
}

Matrix sigma_beta(const ParametricFamily& family, const Vector& theta, double beta) {
    family.require_domain(theta);
    const DpdMoments m = family.moments(theta, beta);
    const Matrix jinv = checked_inverse(m.j, "J_beta");
    const Matrix s = jinv * m.k * jinv.transpose();
    return 0.5 * (s + s.transpose());
}

Vector mdpde_influence(const ParametricFamily& family, const Vector& theta, double beta,
                       double x) {
    family.require_domain(theta);
    const DpdMoments m = family.moments(theta, beta);
    const double fb = beta == 0.0 ? 1.0 : std::exp(beta * family.log_density(theta, x));
    return checked_inverse(m.j, "J_beta") * (family.score(theta, x) * fb - m.xi);
}

quad::NodeSet discretize(const ParametricFamily& family, const Vector& theta, int panels) {
    family.require_domain(theta);
    quad::NodeSet raw;
    const double loc = family.location(theta);
    const double s = family.scale(theta);
    switch (family.support()) {
        case Support::Real:
            raw = quad::composite_rule(loc - 20.0 * s, loc + 20.0 * s, panels);
            break;
        case Support::PositiveReal:
            raw = quad::composite_rule(0.0, std::max(loc, 0.0) + 60.0 * s, panels);
            break;
        case Support::NonNegativeInteger:
            for (long k = 0;; ++k) {
                const double x = static_cast<double>(k);
                raw.nodes.push_back(x);
                raw.weights.push_back(1.0);
                if (x > loc + 1.0 && family.log_density(theta, x) < -40.0) {
                    break;
                }
            }
            break;
    }
    quad::NodeSet out;
    double total = 0.0;
    for (std::size_t i = 0; i < raw.nodes.size(); ++i) {
        const double w = raw.weights[i] * family.density(theta, raw.nodes[i]);
        if (w > 0.0) {
            out.nodes.push_back(raw.nodes[i]);
            out.weights.push_back(w);
            total += w;
        }
    }
    for (double& w : out.weights) {
        w /= total;
    }
    return out;
}

}  // namespace rwt
