#pragma once

#include "rwt/families.hpp"

#include <string>
#include <vector>

namespace rwt {

using Sample = std::vector<double>;

struct FitOptions {
    double tol = 1e-9;
    int max_iterations = 500;
    /// Report the empirical sandwich Ĵ⁻¹K̂Ĵ⁻¹ instead of the model Σ_β(θ̂).
    bool empirical_sigma = false;
};

struct MdpdeFit {
    Vector theta_hat;
    double beta = 0.0;
    double objective_value = 0.0;
    Matrix sigma_hat;
    Matrix j_hat;
    Matrix k_hat;
    bool converged = false;
    int iterations = 0;
    double gradient_norm = 0.0;
    std::size_t n = 0;
    std::vector<std::string> diagnostics;
};

/// H(θ) = M_{1+β}(θ) − (1 + 1/β) Σ w_i f_θ(x_i)^β, or −Σ w_i log f_θ(x_i) at β = 0.
/// Weights are taken as given (use 1/n for a plain sample).
double mdpde_objective(const ParametricFamily& family, const std::vector<double>& x,
                       const std::vector<double>& w, const Vector& theta, double beta);

/// ∇H / (1+β) = ξ_β(θ) − Σ w_i u_θ(x_i) f_θ(x_i)^β.
Vector mdpde_gradient(const ParametricFamily& family, const std::vector<double>& x,
                      const std::vector<double>& w, const Vector& theta, double beta);

/// ∇²H / (1+β) = ∂ξ/∂θ + Σ w_i (−∂u − β u uᵀ) f^β; this is also Ĵ.
Matrix mdpde_hessian(const ParametricFamily& family, const std::vector<double>& x,
                     const std::vector<double>& w, const Vector& theta, double beta);

MdpdeFit fit_mdpde(const ParametricFamily& family, const Sample& sample, double beta,
                   const FitOptions& options = {});

/// Fit to a weighted point set (e.g. a discretised model plus a point mass),
/// searching locally around `start`.
MdpdeFit fit_mdpde_weighted(const ParametricFamily& family, const std::vector<double>& x,
                            const std::vector<double>& w, double beta, const Vector& start,
                            const FitOptions& options = {});

MdpdeFit fit_pooled(const ParametricFamily& family, const Sample& sample1,
                    const Sample& sample2, double beta, const FitOptions& options = {});

struct EmpiricalJK {
    Matrix j_hat;
    Matrix k_hat;
    bool k_positive_semidefinite = true;
};

EmpiricalJK empirical_jk(const ParametricFamily& family, const Sample& sample,
                         const Vector& theta_hat, double beta);

/// Warwick–Jones estimate |θ̂_β − pilot|² + tr(Ĵ⁻¹K̂Ĵ⁻¹)/n.
double estimated_mse(const ParametricFamily& family, const Sample& sample, double beta,
                     const Vector& pilot);

struct BetaSelection {
    double beta = 0.0;
    std::vector<double> grid;
    /// Summed criterion per grid point (NaN where a fit failed).
    std::vector<double> criterion;
    /// Minimisers of each sample's own criterion, for diagnostics.
    double beta_sample1 = 0.0;
    double beta_sample2 = 0.0;
    std::vector<std::string> warnings;
};

std::vector<double> default_beta_grid();

/// Grid point minimising estimated_mse(sample1) + estimated_mse(sample2), with
/// each pilot the MDPDE at `pilot_beta`. Ties go to the smaller β.
BetaSelection select_beta(const ParametricFamily& family, const Sample& sample1,
                          const Sample& sample2, const std::vector<double>& grid,
                          double pilot_beta = 1.0);

}  // namespace rwt
