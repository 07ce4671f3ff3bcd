#pragma once

#include "rwt/linalg.hpp"
#include "rwt/quadrature.hpp"

#include <functional>
#include <memory>
#include <string>
#include <utility>
#include <vector>

namespace rwt {

enum class Support { Real, PositiveReal, NonNegativeInteger };

/// Model quantities entering the MDPDE asymptotics at a given (θ, β):
///   power_integral = ∫ f^{1+β},  xi = ∫ u f^{1+β},
///   j = ∫ u uᵀ f^{1+β},  k = ∫ u uᵀ f^{1+2β} − ξ ξᵀ.
struct DpdMoments {
    double power_integral = 0.0;
    Vector xi;
    Matrix j;
    Matrix k;
};

/// A parametric model f_θ for scalar observations.
///
/// Built-in families override the closed forms they know; everything else
/// falls back on quadrature over the support (or summation for counts).
class ParametricFamily {
public:
    virtual ~ParametricFamily() = default;

    virtual std::string name() const = 0;
    virtual int dimension() const = 0;
    virtual Support support() const = 0;
    virtual bool in_domain(const Vector& theta) const = 0;
    virtual double log_density(const Vector& theta, double x) const = 0;

    double density(const Vector& theta, double x) const;
    bool in_support(double x) const;

    /// ∂ log f / ∂θ. Default: central differences.
    virtual Vector score(const Vector& theta, double x) const;
    /// ∂ score / ∂θ (Hessian of the log-density). Default: differences of score().
    virtual Matrix score_jacobian(const Vector& theta, double x) const;

    virtual double power_integral(const Vector& theta, double beta) const;
    virtual Vector xi(const Vector& theta, double beta) const;
    virtual DpdMoments moments(const Vector& theta, double beta) const;
    /// ∫ f_{θ2}^β f_{θ1}.
    virtual double cross_power_integral(const Vector& theta1, const Vector& theta2,
                                        double beta) const;
    /// KL(f_{θ1} || f_{θ2}) = ∫ f_{θ1} log(f_{θ1}/f_{θ2}).
    virtual double kl_divergence(const Vector& theta1, const Vector& theta2) const;

    // Quadrature/summation versions; the built-in overrides are checked against these.
    double numeric_power_integral(const Vector& theta, double beta) const;
    Vector numeric_xi(const Vector& theta, double beta) const;
    DpdMoments numeric_moments(const Vector& theta, double beta) const;
    double numeric_cross_power_integral(const Vector& theta1, const Vector& theta2,
                                        double beta) const;
    double numeric_kl_divergence(const Vector& theta1, const Vector& theta2) const;

    /// ∫ g(x) f-support dx (or Σ_k g(k)), split around location/scale of f_θ.
    double integrate(const Vector& theta, const std::function<double(double)>& g) const;

    /// Closed-form MLE or moment estimate; the default start of every fit.
    virtual Vector initial_estimate(const std::vector<double>& x) const = 0;
    /// Outlier-resistant start (median / MAD based).
    virtual Vector robust_start(const std::vector<double>& x) const = 0;
    /// Rough centre and spread of f_θ on the observation scale.
    virtual double location(const Vector& theta) const = 0;
    virtual double scale(const Vector& theta) const = 0;
    /// Draw by transforming a uniform variate u in (0,1).
    virtual double draw(const Vector& theta, double u) const = 0;

    /// Map to/from an unconstrained coordinate system used by the optimizers.
    virtual Vector to_free(const Vector& theta) const;
    virtual Vector from_free(const Vector& eta) const;

    /// Throws DomainError/BoundaryError for samples the family cannot fit.
    virtual void check_sample(const std::vector<double>& x) const;

    /// Bracket [lo, hi] for the scalar parameter of a one-parameter family,
    /// wide enough to contain every local minimiser of the DPD objective.
    virtual std::pair<double, double> search_interval(const std::vector<double>& x) const;

    void require_domain(const Vector& theta) const;
};

using FamilyPtr = std::shared_ptr<const ParametricFamily>;

/// N(μ, σ²) with σ fixed; θ = μ.
class NormalKnownSigma final : public ParametricFamily {
public:
    explicit NormalKnownSigma(double sigma = 1.0);
    double sigma() const { return sigma_; }

    std::string name() const override { return "normal-known-sigma"; }
    int dimension() const override { return 1; }
    Support support() const override { return Support::Real; }
    bool in_domain(const Vector& theta) const override;
    double log_density(const Vector& theta, double x) const override;
    Vector score(const Vector& theta, double x) const override;
    Matrix score_jacobian(const Vector& theta, double x) const override;
    double power_integral(const Vector& theta, double beta) const override;
    Vector xi(const Vector& theta, double beta) const override;
    DpdMoments moments(const Vector& theta, double beta) const override;
    double cross_power_integral(const Vector& theta1, const Vector& theta2,
                                double beta) const override;
    double kl_divergence(const Vector& theta1, const Vector& theta2) const override;
    Vector initial_estimate(const std::vector<double>& x) const override;
    Vector robust_start(const std::vector<double>& x) const override;
    double location(const Vector& theta) const override { return theta(0); }
    double scale(const Vector&) const override { return sigma_; }
    double draw(const Vector& theta, double u) const override;
    Vector to_free(const Vector& theta) const override { return theta; }
    Vector from_free(const Vector& eta) const override { return eta; }
    std::pair<double, double> search_interval(const std::vector<double>& x) const override;

private:
    double sigma_;
};

/// N(μ, σ²) with θ = (μ, σ); σ (not σ²) is the second coordinate.
class NormalFull final : public ParametricFamily {
public:
    std::string name() const override { return "normal"; }
    int dimension() const override { return 2; }
    Support support() const override { return Support::Real; }
    bool in_domain(const Vector& theta) const override;
    double log_density(const Vector& theta, double x) const override;
    Vector score(const Vector& theta, double x) const override;
    Matrix score_jacobian(const Vector& theta, double x) const override;
    double power_integral(const Vector& theta, double beta) const override;
    Vector xi(const Vector& theta, double beta) const override;
    DpdMoments moments(const Vector& theta, double beta) const override;
    double cross_power_integral(const Vector& theta1, const Vector& theta2,
                                double beta) const override;
    double kl_divergence(const Vector& theta1, const Vector& theta2) const override;
    Vector initial_estimate(const std::vector<double>& x) const override;
    Vector robust_start(const std::vector<double>& x) const override;
    double location(const Vector& theta) const override { return theta(0); }
    double scale(const Vector& theta) const override { return theta(1); }
    double draw(const Vector& theta, double u) const override;
    Vector to_free(const Vector& theta) const override;
    Vector from_free(const Vector& eta) const override;
    void check_sample(const std::vector<double>& x) const override;
};

/// Poisson with mean θ. DPD integrals are truncated sums over the counts.
class Poisson final : public ParametricFamily {
public:
    std::string name() const override { return "poisson"; }
    int dimension() const override { return 1; }
    Support support() const override { return Support::NonNegativeInteger; }
    bool in_domain(const Vector& theta) const override;
    double log_density(const Vector& theta, double x) const override;
    Vector score(const Vector& theta, double x) const override;
    Matrix score_jacobian(const Vector& theta, double x) const override;
    double kl_divergence(const Vector& theta1, const Vector& theta2) const override;
    Vector initial_estimate(const std::vector<double>& x) const override;
    Vector robust_start(const std::vector<double>& x) const override;
    double location(const Vector& theta) const override { return theta(0); }
    double scale(const Vector& theta) const override;
    double draw(const Vector& theta, double u) const override;
    void check_sample(const std::vector<double>& x) const override;
    std::pair<double, double> search_interval(const std::vector<double>& x) const override;
};

/// Exponential with mean θ.
class Exponential final : public ParametricFamily {
public:
    std::string name() const override { return "exponential"; }
    int dimension() const override { return 1; }
    Support support() const override { return Support::PositiveReal; }
    bool in_domain(const Vector& theta) const override;
    double log_density(const Vector& theta, double x) const override;
    Vector score(const Vector& theta, double x) const override;
    Matrix score_jacobian(const Vector& theta, double x) const override;
    double power_integral(const Vector& theta, double beta) const override;
    Vector xi(const Vector& theta, double beta) const override;
    DpdMoments moments(const Vector& theta, double beta) const override;
    double cross_power_integral(const Vector& theta1, const Vector& theta2,
                                double beta) const override;
    double kl_divergence(const Vector& theta1, const Vector& theta2) const override;
    Vector initial_estimate(const std::vector<double>& x) const override;
    Vector robust_start(const std::vector<double>& x) const override;
    double location(const Vector& theta) const override { return theta(0); }
    double scale(const Vector& theta) const override { return theta(0); }
    double draw(const Vector& theta, double u) const override;
    void check_sample(const std::vector<double>& x) const override;
    std::pair<double, double> search_interval(const std::vector<double>& x) const override;
};

/// A user-supplied family: only the log-density and a few hints are needed,
/// every DPD quantity is computed numerically.
struct NumericFamilySpec {
    std::string name = "custom";
    int dimension = 1;
    Support support = Support::Real;
    std::function<bool(const Vector&)> in_domain;
    std::function<double(const Vector&, double)> log_density;
    std::function<Vector(const std::vector<double>&)> initial_estimate;
    std::function<Vector(const std::vector<double>&)> robust_start;
    std::function<double(const Vector&)> location;
    std::function<double(const Vector&)> scale;
    std::function<double(const Vector&, double)> draw;
    /// Coordinates that must stay positive (optimised on the log scale).
    std::vector<bool> positive;
};

class NumericFamily final : public ParametricFamily {
public:
    explicit NumericFamily(NumericFamilySpec spec);

    std::string name() const override { return spec_.name; }
    int dimension() const override { return spec_.dimension; }
    Support support() const override { return spec_.support; }
    bool in_domain(const Vector& theta) const override;
    double log_density(const Vector& theta, double x) const override;
    Vector initial_estimate(const std::vector<double>& x) const override;
    Vector robust_start(const std::vector<double>& x) const override;
    double location(const Vector& theta) const override;
    double scale(const Vector& theta) const override;
    double draw(const Vector& theta, double u) const override;
    Vector to_free(const Vector& theta) const override;
    Vector from_free(const Vector& eta) const override;

private:
    NumericFamilySpec spec_;
};

/// Look up a built-in by its CLI name. `sigma` is used by normal-known-sigma.
FamilyPtr make_family(const std::string& name, double sigma = 1.0);

/// d_β(f_{θ1}, f_{θ2}) = ∫ f2^{1+β} − (1 + 1/β) ∫ f2^β f1 + (1/β) ∫ f1^{1+β};
/// the Kullback–Leibler divergence at β = 0.
double dpd_divergence(const ParametricFamily& family, const Vector& theta1,
                      const Vector& theta2, double beta);

/// Σ_β(θ) = J⁻¹ K J⁻¹.
Matrix sigma_beta(const ParametricFamily& family, const Vector& theta, double beta);

/// J⁻¹ (u f^β − ξ) at x: influence function of the MDPDE functional.
Vector mdpde_influence(const ParametricFamily& family, const Vector& theta, double beta,
                       double x);

/// Probability-weighted nodes reproducing f_θ: quadrature nodes for
/// continuous families, the truncated lattice for counts. Weights sum to 1.
quad::NodeSet discretize(const ParametricFamily& family, const Vector& theta,
                         int panels = 400);

}  // namespace rwt
