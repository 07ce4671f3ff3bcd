#include "rwt/estimation.hpp"

#include "rwt/errors.hpp"
#include "rwt/optimize.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace rwt {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void check_beta(double beta) {
    if (!(beta >= 0.0) || !std::isfinite(beta)) {
        throw DomainError("beta must be a finite non-negative number");
    }
}

double f_pow(const ParametricFamily& family, const Vector& theta, double x, double beta) {
    return beta == 0.0 ? 1.0 : std::exp(beta * family.log_density(theta, x));
}

struct Candidate {
    Vector theta;
    double value = kInf;
    int iterations = 0;
    bool converged = false;
};

// Newton iterations on the estimating equation, guarded by the objective.
Candidate newton_polish(const ParametricFamily& family, const std::vector<double>& x,
                        const std::vector<double>& w, double beta, Candidate c) {
    for (int it = 0; it < 50; ++it) {
        const Vector g = mdpde_gradient(family, x, w, c.theta, beta);
        const Matrix h = mdpde_hessian(family, x, w, c.theta, beta);
        Eigen::LLT<Matrix> llt(0.5 * (h + h.transpose()));
        if (llt.info() != Eigen::Success) {
            break;
        }
        const Vector d = llt.solve(g);
        if (!d.allFinite()) {
            break;
        }
        const double slack = 1e-12 * std::max(1.0, std::abs(c.value));
        double t = 1.0;
        bool accepted = false;
        for (int k = 0; k < 30; ++k, t *= 0.5) {
            const Vector trial = c.theta - t * d;
            if (!family.in_domain(trial)) {
                continue;
            }
            const double v = mdpde_objective(family, x, w, trial, beta);
            if (v <= c.value + slack) {
                c.theta = trial;
                c.value = std::min(v, c.value);
                accepted = true;
                break;
            }
        }
        ++c.iterations;
        if (!accepted) {
            break;
        }
        if ((t * d).lpNorm<Eigen::Infinity>() <= 1e-14 * (1.0 + c.theta.lpNorm<Eigen::Infinity>())) {
            break;
        }
    }
    c.value = mdpde_objective(family, x, w, c.theta, beta);
    return c;
}

Vector initial_step(const ParametricFamily& family, const Vector& theta) {
    const Vector eta = family.to_free(theta);
    const double s = family.scale(theta);
    Vector step(theta.size());
    for (Eigen::Index i = 0; i < theta.size(); ++i) {
        Vector moved = theta;
        moved(i) += 0.2 * s;
        step(i) = family.in_domain(moved) ? std::abs(family.to_free(moved)(i) - eta(i)) : 0.1;
        if (!(step(i) > 0.0)) {
            step(i) = 0.1;
        }
    }
    return step;
}

Candidate nelder_mead_from(const ParametricFamily& family, const std::vector<double>& x,
                           const std::vector<double>& w, double beta, const Vector& start,
                           const FitOptions& options) {
    auto f = [&](const Vector& eta) {
        const Vector theta = family.from_free(eta);
        if (!family.in_domain(theta)) {
            return kInf;
        }
        return mdpde_objective(family, x, w, theta, beta);
    };
    opt::Result r = opt::nelder_mead(f, family.to_free(start), initial_step(family, start),
                                     options.tol, options.max_iterations);
    // One restart from the reported optimum guards against simplex collapse.
    opt::Result again = opt::nelder_mead(f, r.x, 0.1 * initial_step(family, family.from_free(r.x)),
                                         options.tol, options.max_iterations);
    Candidate c;
    const opt::Result& best = again.value <= r.value ? again : r;
    c.theta = family.from_free(best.x);
    c.value = best.value;
    c.iterations = r.iterations + again.iterations;
    c.converged = best.converged;
    return c;
}

Candidate scalar_search(const ParametricFamily& family, const std::vector<double>& x,
                        const std::vector<double>& w, double beta,
                        const std::vector<Vector>& starts, const FitOptions& options) {
    auto [lo, hi] = family.search_interval(x);
    for (const Vector& s : starts) {
        lo = std::min(lo, s(0));
        hi = std::max(hi, s(0));
    }
    const double eta_lo = family.to_free(scalar_vector(lo))(0);
    const double eta_hi = family.to_free(scalar_vector(hi))(0);
    auto f = [&](double eta) {
        const Vector theta = family.from_free(scalar_vector(eta));
        if (!family.in_domain(theta)) {
            return kInf;
        }
        return mdpde_objective(family, x, w, theta, beta);
    };

    // Coarse scan first: the objective can be multimodal when outliers sit
    // far from the bulk, and Brent only finds the basin it is started in.
    constexpr int kGrid = 80;
    const double h = (eta_hi - eta_lo) / kGrid;
    std::vector<double> brackets;
    int best_i = 0;
    double best_v = kInf;
    for (int i = 0; i <= kGrid; ++i) {
        const double v = f(eta_lo + i * h);
        if (v < best_v) {
            best_v = v;
            best_i = i;
        }
    }
    brackets.push_back(eta_lo + best_i * h);
    for (const Vector& s : starts) {
        brackets.push_back(family.to_free(s)(0));
    }

    Candidate best;
    for (double centre : brackets) {
        const opt::Result r = opt::brent(f, centre - h, centre + h, options.max_iterations);
        if (r.value < best.value) {
            best.theta = family.from_free(r.x);
            best.value = r.value;
            best.iterations = r.iterations;
            best.converged = r.converged;
        }
    }
    return best;
}

MdpdeFit finish_fit(const ParametricFamily& family, const std::vector<double>& x,
                    const std::vector<double>& w, double beta, const Candidate& c,
                    const FitOptions& options, bool plain_sample) {
    MdpdeFit fit;
    fit.theta_hat = c.theta;
    fit.beta = beta;
    fit.objective_value = c.value;
    fit.iterations = c.iterations;
    fit.n = x.size();
    if (!c.theta.allFinite() || !family.in_domain(c.theta)) {
        throw ConvergenceError(family.name() + ": minimiser left the parameter domain");
    }
    const Vector g = mdpde_gradient(family, x, w, c.theta, beta);
    fit.gradient_norm = g.norm() * family.scale(c.theta);
    fit.converged = c.converged || fit.gradient_norm < 1e-8;
    if (!fit.converged) {
        if (fit.gradient_norm > 1e-4) {
            std::ostringstream os;
            os << family.name() << ": MDPDE did not converge (beta " << beta << ", gradient "
               << fit.gradient_norm << ")";
            throw ConvergenceError(os.str());
        }
        fit.diagnostics.push_back("optimizer stopped before tolerance; gradient small");
    }
    if (plain_sample) {
        const EmpiricalJK jk = empirical_jk(family, x, c.theta, beta);
        fit.j_hat = jk.j_hat;
        fit.k_hat = jk.k_hat;
        if (!jk.k_positive_semidefinite) {
            fit.diagnostics.push_back("empirical K is not positive semi-definite");
        }
    } else {
        fit.j_hat = mdpde_hessian(family, x, w, c.theta, beta);
        fit.k_hat = Matrix();
    }
    if (options.empirical_sigma && plain_sample) {
        const Matrix jinv = checked_inverse(fit.j_hat, "empirical J");
        fit.sigma_hat = jinv * fit.k_hat * jinv.transpose();
    } else {
        fit.sigma_hat = sigma_beta(family, c.theta, beta);
    }
    return fit;
}

}  // namespace

double mdpde_objective(const ParametricFamily& family, const std::vector<double>& x,
                       const std::vector<double>& w, const Vector& theta, double beta) {
    if (!family.in_domain(theta)) {
        return kInf;
    }
    if (beta == 0.0) {
        double s = 0.0;
        for (std::size_t i = 0; i < x.size(); ++i) {
            s -= w[i] * family.log_density(theta, x[i]);
        }
        return s;
    }
    double s = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        s += w[i] * std::exp(beta * family.log_density(theta, x[i]));
    }
    return family.power_integral(theta, beta) - (1.0 + 1.0 / beta) * s;
}

Vector mdpde_gradient(const ParametricFamily& family, const std::vector<double>& x,
                      const std::vector<double>& w, const Vector& theta, double beta) {
    Vector g = beta == 0.0 ? Vector(Vector::Zero(theta.size())) : family.xi(theta, beta);
    for (std::size_t i = 0; i < x.size(); ++i) {
        g -= w[i] * f_pow(family, theta, x[i], beta) * family.score(theta, x[i]);
    }
    return g;
}

Matrix mdpde_hessian(const ParametricFamily& family, const std::vector<double>& x,
                     const std::vector<double>& w, const Vector& theta, double beta) {
    const Eigen::Index p = theta.size();
    Matrix h = Matrix::Zero(p, p);
    if (beta != 0.0) {
        for (Eigen::Index j = 0; j < p; ++j) {
            const double step = 1e-5 * (1.0 + std::abs(theta(j)));
            Vector up = theta;
            Vector dn = theta;
            up(j) += step;
            dn(j) -= step;
            h.col(j) = (family.xi(up, beta) - family.xi(dn, beta)) / (2.0 * step);
        }
    }
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double fb = f_pow(family, theta, x[i], beta);
        if (fb == 0.0) {
            continue;
        }
        const Vector u = family.score(theta, x[i]);
        h -= w[i] * fb * (family.score_jacobian(theta, x[i]) + beta * u * u.transpose());
    }
    return 0.5 * (h + h.transpose());
}

MdpdeFit fit_mdpde(const ParametricFamily& family, const Sample& sample, double beta,
                   const FitOptions& options) {
    check_beta(beta);
    if (sample.size() < 2) {
        throw DomainError("a sample needs at least two observations");
    }
    family.check_sample(sample);
    const std::vector<double> w(sample.size(), 1.0 / static_cast<double>(sample.size()));

    std::vector<Vector> starts;
    for (const Vector& s : {family.initial_estimate(sample), family.robust_start(sample)}) {
        if (s.allFinite() && family.in_domain(s)) {
            starts.push_back(s);
        }
    }
    if (starts.empty()) {
        throw BoundaryError(family.name() + ": no admissible starting value for this sample");
    }

    Candidate best;
    if (family.dimension() == 1) {
        best = scalar_search(family, sample, w, beta, starts, options);
    } else {
        for (const Vector& s : starts) {
            Candidate c = nelder_mead_from(family, sample, w, beta, s, options);
            if (c.value < best.value) {
                best = c;
            }
        }
    }
    if (!std::isfinite(best.value)) {
        throw ConvergenceError(family.name() + ": objective is not finite at any start");
    }
    best = newton_polish(family, sample, w, beta, best);

    if (family.dimension() > 1) {
        const double s = family.scale(best.theta);
        double spread = 0.0;
        const auto [lo, hi] = std::minmax_element(sample.begin(), sample.end());
        spread = *hi - *lo;
        if (s < 1e-8 * std::max(spread, 1e-300)) {
            throw BoundaryError(family.name() + ": fitted scale collapsed to the boundary");
        }
    }
    return finish_fit(family, sample, w, beta, best, options, true);
}

MdpdeFit fit_mdpde_weighted(const ParametricFamily& family, const std::vector<double>& x,
                            const std::vector<double>& w, double beta, const Vector& start,
                            const FitOptions& options) {
    check_beta(beta);
    if (x.size() != w.size() || x.empty()) {
        throw DomainError("weighted fit needs matching, non-empty points and weights");
    }
    family.require_domain(start);
    Candidate c;
    c.theta = start;
    c.value = mdpde_objective(family, x, w, start, beta);
    c = newton_polish(family, x, w, beta, c);
    const double gnorm = mdpde_gradient(family, x, w, c.theta, beta).norm() * family.scale(c.theta);
    if (!(gnorm < 1e-10)) {
        Candidate nm = nelder_mead_from(family, x, w, beta, c.theta, options);
        nm = newton_polish(family, x, w, beta, nm);
        if (nm.value < c.value) {
            c = nm;
        }
    }
    c.converged = false;
    return finish_fit(family, x, w, beta, c, options, false);
}

MdpdeFit fit_pooled(const ParametricFamily& family, const Sample& sample1,
                    const Sample& sample2, double beta, const FitOptions& options) {
    Sample pooled = sample1;
    pooled.insert(pooled.end(), sample2.begin(), sample2.end());
    return fit_mdpde(family, pooled, beta, options);
}

EmpiricalJK empirical_jk(const ParametricFamily& family, const Sample& sample,
                         const Vector& theta_hat, double beta) {
    check_beta(beta);
    family.require_domain(theta_hat);
    if (sample.empty()) {
        throw DomainError("empty sample");
    }
    const double inv_n = 1.0 / static_cast<double>(sample.size());
    const std::vector<double> w(sample.size(), inv_n);
    EmpiricalJK out;
    out.j_hat = mdpde_hessian(family, sample, w, theta_hat, beta);

    const Eigen::Index p = theta_hat.size();
    Vector xi_hat = Vector::Zero(p);
    Matrix second = Matrix::Zero(p, p);
    for (double x : sample) {
        const Vector v = family.score(theta_hat, x) * f_pow(family, theta_hat, x, beta);
        xi_hat += inv_n * v;
        second += inv_n * v * v.transpose();
    }
    out.k_hat = second - xi_hat * xi_hat.transpose();
    out.k_hat = 0.5 * (out.k_hat + out.k_hat.transpose());
    Eigen::SelfAdjointEigenSolver<Matrix> eig(out.k_hat);
    out.k_positive_semidefinite =
        eig.eigenvalues().minCoeff() >= -1e-12 * std::max(1.0, eig.eigenvalues().cwiseAbs().maxCoeff());
    return out;
}

double estimated_mse(const ParametricFamily& family, const Sample& sample, double beta,
                     const Vector& pilot) {
    family.require_domain(pilot);
    const MdpdeFit fit = fit_mdpde(family, sample, beta);
    const Matrix jinv = checked_inverse(fit.j_hat, "empirical J");
    const double variance = (jinv * fit.k_hat * jinv.transpose()).trace() /
                            static_cast<double>(sample.size());
    const Vector bias = fit.theta_hat - pilot;
    return bias.squaredNorm() + variance;
}

std::vector<double> default_beta_grid() {
    std::vector<double> grid;
    for (int i = 0; i <= 20; ++i) {
        grid.push_back(i / 20.0);
    }
    return grid;
}

BetaSelection select_beta(const ParametricFamily& family, const Sample& sample1,
                          const Sample& sample2, const std::vector<double>& grid,
                          double pilot_beta) {
    if (grid.empty()) {
        throw DomainError("beta grid is empty");
    }
    for (double b : grid) {
        if (!(b >= 0.0 && b <= 1.0)) {
            throw DomainError("beta grid must lie in [0, 1]");
        }
    }
    const Vector pilot1 = fit_mdpde(family, sample1, pilot_beta).theta_hat;
    const Vector pilot2 = fit_mdpde(family, sample2, pilot_beta).theta_hat;

    BetaSelection sel;
    sel.grid = grid;
    sel.criterion.assign(grid.size(), std::numeric_limits<double>::quiet_NaN());
    double best = kInf;
    double best1 = kInf;
    double best2 = kInf;
    bool any = false;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double b = grid[i];
        double c1;
        double c2;
        try {
            c1 = estimated_mse(family, sample1, b, pilot1);
            c2 = estimated_mse(family, sample2, b, pilot2);
        } catch (const Error& e) {
            std::ostringstream os;
            os << "beta " << b << " skipped: " << e.what();
            sel.warnings.push_back(os.str());
            continue;
        }
        const double total = c1 + c2;
        sel.criterion[i] = total;
        any = true;
        auto better = [](double c, double b, double cur, double cur_b) {
            return c < cur || (c == cur && b < cur_b);
        };
        if (better(total, b, best, sel.beta)) {
            best = total;
            sel.beta = b;
        }
        if (better(c1, b, best1, sel.beta_sample1)) {
            best1 = c1;
            sel.beta_sample1 = b;
        }
        if (better(c2, b, best2, sel.beta_sample2)) {
            best2 = c2;
            sel.beta_sample2 = b;
        }
    }
    if (!any) {
        throw ConvergenceError("beta selection failed at every grid point");
    }
    return sel;
}

}  // namespace rwt
