#pragma once

#include "rwt/linalg.hpp"

#include <functional>
#include <string>
#include <vector>

namespace rwt {

/// A restriction ψ(θ1, θ2) = 0 in R^r. Jacobians are returned as p×r
/// matrices Ψ_i = ∂ψᵀ/∂θ_i; when no analytic form is given they come from
/// central differences with step 1e-6·(1+|θ_j|).
class HypothesisFunction {
public:
    using Fn = std::function<Vector(const Vector&, const Vector&)>;
    using JacobianFn = std::function<Matrix(const Vector&, const Vector&)>;

    HypothesisFunction(std::string name, int r, Fn psi, JacobianFn jacobian1 = {},
                       JacobianFn jacobian2 = {});

    const std::string& name() const { return name_; }
    int r() const { return r_; }

    Vector operator()(const Vector& theta1, const Vector& theta2) const;
    Matrix jacobian1(const Vector& theta1, const Vector& theta2) const;
    Matrix jacobian2(const Vector& theta1, const Vector& theta2) const;

    /// Throws DomainError unless both Jacobians have full column rank r.
    void check_rank(const Vector& theta1, const Vector& theta2) const;

    /// ψ = θ1 − θ2 (r = p).
    static HypothesisFunction difference(int p);
    /// ψ = sign·(θ1[i] − θ2[i]) for each listed coordinate.
    static HypothesisFunction coordinate_difference(int p, std::vector<int> coordinates,
                                                    double sign = 1.0);
    /// ψ = σ1²/σ2² − c0 on the (μ, σ) normal parametrisation.
    static HypothesisFunction variance_ratio(double c0);

private:
    std::string name_;
    int r_;
    Fn psi_;
    JacobianFn jacobian1_;
    JacobianFn jacobian2_;
};

}  // namespace rwt
