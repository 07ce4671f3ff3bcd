#include "rwt/simulation.hpp"

#include "rwt/errors.hpp"
#include "rwt/wald_tests.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <functional>
#include <thread>

namespace rwt {

namespace {

void validate(const SimulationConfig& c, const ParametricFamily& family) {
    if (c.replicates < 1) {
        throw DomainError("replicates must be at least 1");
    }
    if (c.n < 2 || c.m < 2) {
        throw DomainError("both samples need at least two observations");
    }
    family.require_domain(c.theta1);
    family.require_domain(c.theta2);
    for (double e : c.epsilons) {
        if (!(e >= 0.0 && e < 1.0)) {
            throw DomainError("contamination proportion must lie in [0, 1)");
        }
        if (e > 0.0) {
            family.require_domain(c.theta_c);
        }
    }
    if (c.contaminate_sample != 1 && c.contaminate_sample != 2) {
        throw DomainError("contaminated sample must be 1 or 2");
    }
    if (!(c.alpha > 0.0 && c.alpha < 1.0)) {
        throw DomainError("alpha must lie in (0, 1)");
    }
}

Sample draw_sample(const ParametricFamily& family, const Vector& theta, int size, CounterRng& rng) {
    Sample s(static_cast<std::size_t>(size));
    for (double& v : s) {
        v = family.draw(theta, rng.uniform());
    }
    return s;
}

// Draws the pair for replicate k at contamination ε. Each (k, ε) uses a fresh
// stream of replicate k so the base samples coincide across ε levels.
std::pair<Sample, Sample> replicate_pair(const SimulationConfig& c, const ParametricFamily& family,
                                         std::size_t k, double epsilon) {
    CounterRng rng(c.seed, k);
    Sample s1 = draw_sample(family, c.theta1, c.n, rng);
    Sample s2 = draw_sample(family, c.theta2, c.m, rng);
    if (epsilon > 0.0) {
        Sample& target = c.contaminate_sample == 1 ? s1 : s2;
        target = contaminate(target, epsilon, family, c.theta_c, rng);
    }
    return {std::move(s1), std::move(s2)};
}

void parallel_for(std::size_t jobs, unsigned workers, const std::function<void(std::size_t)>& body) {
    if (workers <= 1) {
        for (std::size_t k = 0; k < jobs; ++k) {
            body(k);
        }
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned t = 0; t < workers; ++t) {
        pool.emplace_back([&] {
            for (std::size_t k = next++; k < jobs; k = next++) {
                body(k);
            }
        });
    }
    for (std::thread& th : pool) {
        th.join();
    }
}

int contaminated_count(double epsilon, int size) {
    return static_cast<int>(std::lround(epsilon * size));
}

}  // namespace

unsigned worker_count(unsigned requested, std::size_t jobs) {
    unsigned w = requested;
    if (w == 0) {
        if (const char* env = std::getenv("RTS_THREADS")) {
            const long v = std::strtol(env, nullptr, 10);
            if (v > 0) {
                w = static_cast<unsigned>(v);
            }
        }
    }
    if (w == 0) {
        w = std::max(1u, std::thread::hardware_concurrency());
    }
    return static_cast<unsigned>(std::min<std::size_t>(w, std::max<std::size_t>(jobs, 1)));
}

Sample contaminate(const Sample& sample, double epsilon, const ParametricFamily& family,
                   const Vector& theta_c, CounterRng& rng) {
    if (!(epsilon >= 0.0 && epsilon < 1.0)) {
        throw DomainError("contamination proportion must lie in [0, 1)");
    }
    Sample out = sample;
    const int k = contaminated_count(epsilon, static_cast<int>(sample.size()));
    if (k == 0) {
        return out;
    }
    // Partial Fisher–Yates: the first k entries of `idx` are the replaced positions.
    std::vector<std::size_t> idx(sample.size());
    for (std::size_t i = 0; i < idx.size(); ++i) {
        idx[i] = i;
    }
    for (int i = 0; i < k; ++i) {
        const std::size_t j = static_cast<std::size_t>(i) + rng.below(idx.size() - static_cast<std::size_t>(i));
        std::swap(idx[static_cast<std::size_t>(i)], idx[j]);
    }
    for (int i = 0; i < k; ++i) {
        out[idx[static_cast<std::size_t>(i)]] = family.draw(theta_c, rng.uniform());
    }
    return out;
}

SimulationReport run_study(const SimulationConfig& config) {
    const FamilyPtr family = make_family(config.family, config.sigma);
    validate(config, *family);
    if (config.betas.empty()) {
        throw DomainError("no beta values to study");
    }
    const std::size_t nb = config.betas.size();
    const std::size_t ne = config.epsilons.size();
    const std::size_t reps = static_cast<std::size_t>(config.replicates);
    // outcome: 1 reject, 0 accept, -1 failure; indexed [rep][eps][beta].
    std::vector<signed char> outcome(reps * ne * nb, -1);

    const HypothesisFunction one_sided_psi = HypothesisFunction::coordinate_difference(
        family->dimension(), {0}, config.direction >= 0.0 ? 1.0 : -1.0);

    parallel_for(reps, worker_count(config.threads, reps), [&](std::size_t k) {
        for (std::size_t e = 0; e < ne; ++e) {
            const auto [s1, s2] = replicate_pair(config, *family, k, config.epsilons[e]);
            for (std::size_t b = 0; b < nb; ++b) {
                const double beta = config.betas[b];
                signed char o = -1;
                try {
                    TestResult r;
                    switch (config.test) {
                        case TestKind::Simple:
                            r = simple_test(*family, s1, s2, beta, config.alpha);
                            break;
                        case TestKind::Partial:
                            r = partial_homogeneity_test(*family, s1, s2, beta, config.alpha);
                            break;
                        case TestKind::OneSided:
                            r = one_sided_test(*family, s1, s2, one_sided_psi, beta, config.alpha);
                            break;
                    }
                    o = r.reject ? 1 : 0;
                } catch (const Error&) {
                    o = -1;
                }
                outcome[(k * ne + e) * nb + b] = o;
            }
        }
    });

    SimulationReport report;
    report.config = config;
    const int target_size = config.contaminate_sample == 1 ? config.n : config.m;
    for (std::size_t b = 0; b < nb; ++b) {
        for (std::size_t e = 0; e < ne; ++e) {
            SimulationCell cell;
            cell.beta = config.betas[b];
            cell.epsilon = config.epsilons[e];
            cell.contaminated = contaminated_count(cell.epsilon, target_size);
            for (std::size_t k = 0; k < reps; ++k) {
                const signed char o = outcome[(k * ne + e) * nb + b];
                if (o < 0) {
                    ++cell.failures;
                } else {
                    ++cell.replicates;
                    cell.rejections += o;
                }
            }
            if (cell.replicates > 0) {
                cell.rate = static_cast<double>(cell.rejections) / cell.replicates;
                cell.mc_se = std::sqrt(cell.rate * (1.0 - cell.rate) / cell.replicates);
            }
            cell.flagged = cell.failures * 100 >= config.replicates;
            report.cells.push_back(cell);
        }
    }
    return report;
}

SimulationReport run_tuning_study(const SimulationConfig& config) {
    const FamilyPtr family = make_family(config.family, config.sigma);
    validate(config, *family);
    const std::vector<double> grid =
        config.tuning_grid.empty() ? default_beta_grid() : config.tuning_grid;
    const std::size_t ne = config.epsilons.size();
    const std::size_t reps = static_cast<std::size_t>(config.replicates);
    // Selected grid index per [rep][eps]; -1 marks a failed selection.
    std::vector<int> chosen(reps * ne, -1);

    parallel_for(reps, worker_count(config.threads, reps), [&](std::size_t k) {
        for (std::size_t e = 0; e < ne; ++e) {
            const auto [s1, s2] = replicate_pair(config, *family, k, config.epsilons[e]);
            try {
                const BetaSelection sel = select_beta(*family, s1, s2, grid);
                const auto it = std::find(grid.begin(), grid.end(), sel.beta);
                chosen[k * ne + e] = static_cast<int>(it - grid.begin());
            } catch (const Error&) {
                chosen[k * ne + e] = -1;
            }
        }
    });

    SimulationReport report;
    report.config = config;
    report.config.tuning_grid = grid;
    for (std::size_t e = 0; e < ne; ++e) {
        TuningHistogram h;
        h.epsilon = config.epsilons[e];
        h.grid = grid;
        h.counts.assign(grid.size(), 0);
        for (std::size_t k = 0; k < reps; ++k) {
            const int c = chosen[k * ne + e];
            if (c < 0) {
                ++h.failures;
            } else {
                ++h.counts[static_cast<std::size_t>(c)];
            }
        }
        const auto best = std::max_element(h.counts.begin(), h.counts.end());
        h.mode = grid[static_cast<std::size_t>(best - h.counts.begin())];
        report.histograms.push_back(h);
    }
    return report;
}

}  // namespace rwt
