#pragma once

#include "rwt/estimation.hpp"
#include "rwt/hypothesis.hpp"

#include <optional>
#include <string>

namespace rwt {

enum class Reference { ChiSquare, StandardNormal };

struct TestResult {
    std::string test;
    double statistic = 0.0;
    Reference reference = Reference::ChiSquare;
    int df = 0;
    double p_value = 1.0;
    double alpha = 0.05;
    double critical_value = 0.0;
    bool reject = false;
    double beta = 0.0;
    /// m / (n + m), with sample 1 of size n and sample 2 of size m.
    double omega = 0.5;
    std::size_t n = 0;
    std::size_t m = 0;
    Vector psi_hat;
    Matrix covariance;
    MdpdeFit fit1;
    MdpdeFit fit2;
    std::optional<MdpdeFit> pooled;
};

/// T = (nm/(n+m)) (θ̂1 − θ̂2)ᵀ Σ_β(θ̂0)⁻¹ (θ̂1 − θ̂2), θ̂0 the pooled MDPDE; χ²_p.
TestResult simple_test(const ParametricFamily& family, const Sample& sample1,
                       const Sample& sample2, double beta, double alpha = 0.05,
                       const FitOptions& options = {});

/// T̃ = (nm/(n+m)) ψ̂ᵀ Σ̃⁻¹ ψ̂ with Σ̃ = ωΨ1ᵀΣ(θ̂1)Ψ1 + (1−ω)Ψ2ᵀΣ(θ̂2)Ψ2; χ²_r.
TestResult composite_test(const ParametricFamily& family, const Sample& sample1,
                          const Sample& sample2, const HypothesisFunction& psi, double beta,
                          double alpha = 0.05, const FitOptions& options = {});

/// Equality of the `tested` coordinates, the rest being nuisance parameters.
TestResult partial_homogeneity_test(const ParametricFamily& family, const Sample& sample1,
                                    const Sample& sample2, double beta, double alpha = 0.05,
                                    std::vector<int> tested = {0},
                                    const FitOptions& options = {});

/// sign(ψ̂)√T̃ against N(0,1), upper tail; H1: ψ > 0.
TestResult one_sided_test(const ParametricFamily& family, const Sample& sample1,
                          const Sample& sample2, const HypothesisFunction& psi, double beta,
                          double alpha = 0.05, const FitOptions& options = {});

enum class Theta3Rule { WeightedAverage, MixtureMdpde };

struct PowerOptions {
    /// Absent: the simple test (ψ = θ1 − θ2 with the pooled covariance).
    std::optional<HypothesisFunction> psi;
    bool one_sided = false;
    Theta3Rule theta3 = Theta3Rule::WeightedAverage;
};

/// Large-sample power at the fixed alternative (θ1, θ2) with sizes n, m.
double approx_power_fixed(const ParametricFamily& family, const Vector& theta1,
                          const Vector& theta2, double n, double m, double beta, double alpha,
                          const PowerOptions& options = {});

/// Limit of the pooled MDPDE when n/(n+m) of the data come from θ1.
Vector theta3(const ParametricFamily& family, const Vector& theta1, const Vector& theta2,
              double omega, double beta, Theta3Rule rule);

/// Asymptotic power at θ_i = θ_i0 + Δ_i/√(sample size). For the simple test
/// θ10 must equal θ20.
double contiguous_power(const ParametricFamily& family, const Vector& theta10,
                        const Vector& theta20, const Vector& delta1, const Vector& delta2,
                        double omega, double beta, double alpha,
                        const PowerOptions& options = {});

/// Smallest total N (n = (1−ω)N, m = ωN) reaching `target` power.
long sample_size_for_power(const ParametricFamily& family, const Vector& theta1,
                           const Vector& theta2, double target, double omega, double beta,
                           double alpha, const PowerOptions& options = {});

}  // namespace rwt
