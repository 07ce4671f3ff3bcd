#include "rwt/errors.hpp"
#include "rwt/rng.hpp"
#include "rwt/simulation.hpp"

#include <doctest.h>

#include <cmath>
#include <set>

using namespace rwt;

TEST_SUITE("simulation") {

TEST_CASE("counter-based streams are reproducible and independent") {
    CounterRng a(42, 7), b(42, 7), c(42, 8), d(43, 7);
    bool differs_c = false, differs_d = false;
    for (int i = 0; i < 100; ++i) {
        const auto x = a.next_u64();
        CHECK(x == b.next_u64());
        differs_c |= x != c.next_u64();
        differs_d |= x != d.next_u64();
    }
    CHECK(differs_c);
    CHECK(differs_d);
    CHECK(a.counter() == 100);
}

TEST_CASE("uniform draws lie strictly inside the unit interval") {
    CounterRng r(1, 0);
    double sum = 0;
    for (int i = 0; i < 20000; ++i) {
        const double u = r.uniform();
        REQUIRE(u > 0.0);
        REQUIRE(u < 1.0);
        sum += u;
    }
    CHECK(sum / 20000 == doctest::Approx(0.5).epsilon(0.02));
    std::set<std::uint64_t> seen;
    for (int i = 0; i < 3000; ++i) {
        const auto k = r.below(6);
        CHECK(k < 6);
        seen.insert(k);
    }
    CHECK(seen.size() == 6);
}

TEST_CASE("contamination replaces round(eps * size) observations") {
    NormalKnownSigma f(1.0);
    const Sample clean(40, 0.0);
    CounterRng r(3, 1);
    const Sample dirty = contaminate(clean, 0.15, f, scalar_vector(100.0), r);
    REQUIRE(dirty.size() == clean.size());
    int moved = 0;
    for (double v : dirty) moved += v > 50.0;
    CHECK(moved == 6);
    CounterRng r2(3, 1);
    CHECK(contaminate(clean, 0.0, f, scalar_vector(100.0), r2) == clean);
}

TEST_CASE("study results do not depend on the thread count") {
    SimulationConfig c;
    c.replicates = 60;
    c.n = c.m = 20;
    c.betas = {0.0, 0.5};
    c.epsilons = {0.0, 0.1};
    c.theta_c = scalar_vector(3.0);
    c.seed = 99;
    c.threads = 1;
    const auto one = run_study(c);
    c.threads = 4;
    const auto four = run_study(c);
    REQUIRE(one.cells.size() == 4);
    for (std::size_t i = 0; i < one.cells.size(); ++i) {
        CHECK(one.cells[i].rejections == four.cells[i].rejections);
        CHECK(one.cells[i].replicates + one.cells[i].failures == 60);
        CHECK(one.cells[i].mc_se ==
              doctest::Approx(std::sqrt(one.cells[i].rate * (1 - one.cells[i].rate) / one.cells[i].replicates)));
    }
}

TEST_CASE("power cell far from the null rejects almost always") {
    SimulationConfig c;
    c.replicates = 100;
    c.theta2 = scalar_vector(1.0);
    c.betas = {0.0};
    c.seed = 5;
    const auto rep = run_study(c);
    CHECK(rep.cells[0].rate > 0.95);
}

TEST_CASE("tuning histogram") {
    SimulationConfig c;
    c.replicates = 1;
    c.n = c.m = 30;
    c.tuning_grid = {0.0, 0.5, 1.0};
    c.seed = 11;
    const auto rep = run_tuning_study(c);
    REQUIRE(rep.histograms.size() == 1);
    int total = 0;
    for (int k : rep.histograms[0].counts) total += k;
    CHECK(total + rep.histograms[0].failures == 1);
}

TEST_CASE("worker count honours explicit requests and job counts") {
    CHECK(worker_count(3, 100) == 3);
    CHECK(worker_count(8, 2) == 2);
    CHECK(worker_count(0, 100) >= 1);
}

TEST_CASE("invalid configurations are rejected") {
    SimulationConfig c;
    c.family = "gamma";
    CHECK_THROWS_AS(run_study(c), DomainError);
    SimulationConfig d;
    d.epsilons = {1.5};
    CHECK_THROWS_AS(run_study(d), DomainError);
}

}  // TEST_SUITE
