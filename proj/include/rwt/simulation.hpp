#pragma once

#include "rwt/estimation.hpp"
#include "rwt/rng.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace rwt {

enum class TestKind { Simple, Partial, OneSided };

struct SimulationConfig {
    std::string family = "normal-known-sigma";
    double sigma = 1.0;
    TestKind test = TestKind::Simple;
    /// One-sided tests: +1 for H1: θ1 > θ2 on the first coordinate, −1 for θ2 > θ1.
    double direction = 1.0;
    Vector theta1 = Vector::Zero(1);
    Vector theta2 = Vector::Zero(1);
    int n = 50;
    int m = 50;
    int replicates = 1000;
    std::vector<double> betas{0.0, 0.1, 0.3, 0.5, 1.0};
    double alpha = 0.05;
    /// Contamination levels; every level is run on the same base samples.
    std::vector<double> epsilons{0.0};
    Vector theta_c = Vector::Zero(1);
    /// 1 or 2: which sample receives the contaminating draws.
    int contaminate_sample = 2;
    std::uint64_t seed = 1;
    /// β grid for the tuning study (default 0, 0.05, ..., 1).
    std::vector<double> tuning_grid;
    /// Worker cap; 0 means RTS_THREADS or the hardware concurrency.
    unsigned threads = 0;
};

struct SimulationCell {
    double beta = 0.0;
    double epsilon = 0.0;
    int contaminated = 0;  ///< round(ε·size) observations replaced
    int replicates = 0;    ///< replicates that produced a decision
    int rejections = 0;
    int failures = 0;
    double rate = 0.0;
    double mc_se = 0.0;
    bool flagged = false;  ///< failures reached 1% of the replicates
};

struct TuningHistogram {
    double epsilon = 0.0;
    std::vector<double> grid;
    std::vector<int> counts;
    int failures = 0;
    double mode = 0.0;
};

struct SimulationReport {
    SimulationConfig config;
    std::vector<SimulationCell> cells;
    std::vector<TuningHistogram> histograms;
};

/// Replaces round(ε·|sample|) randomly chosen observations with draws from
/// f_{θ_c}.
Sample contaminate(const Sample& sample, double epsilon, const ParametricFamily& family,
                   const Vector& theta_c, CounterRng& rng);

/// Empirical rejection rates per (β, ε) cell.
SimulationReport run_study(const SimulationConfig& config);

/// Histogram of the jointly selected β per contamination level.
SimulationReport run_tuning_study(const SimulationConfig& config);

/// Worker count: explicit request, else RTS_THREADS, else hardware concurrency.
unsigned worker_count(unsigned requested, std::size_t jobs);

}  // namespace rwt
