// Acceptance checks. `rwt_acceptance` runs every criterion and prints one
// PASS/FAIL line each; `rwt_acceptance 3 10b` runs a subset.

#include "oracles.hpp"

#include "rwt/cli.hpp"
#include "rwt/distributions.hpp"
#include "rwt/records.hpp"
#include "rwt/robustness.hpp"
#include "rwt/simulation.hpp"
#include "rwt/wald_tests.hpp"

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <functional>
#include <iostream>
#include <map>
#include <random>
#include <sstream>

using namespace rwt;

namespace {

struct Outcome {
    bool pass = true;
    std::string detail;
};

struct CliRun {
    int code;
    std::string out;
    std::string err;
};

CliRun cli(const std::vector<std::string>& args) {
    std::ostringstream out, err;
    const int code = run_cli(args, out, err);
    return {code, out.str(), err.str()};
}

Json cli_json(const std::vector<std::string>& args) {
    std::vector<std::string> a = args;
    a.push_back("--json");
    a.push_back("-");
    const CliRun r = cli(a);
    if (r.code != 0) {
        throw std::runtime_error("command failed (" + std::to_string(r.code) + "): " + r.err);
    }
    return Json::parse(r.out);
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string num(double v, int digits = 4) {
    std::ostringstream os;
    os.precision(digits);
    os << v;
    return os.str();
}

const std::vector<double> kTableBetas{0.0, 0.1, 0.3, 0.5, 0.7, 0.9, 1.0};

Outcome check_table(const std::string& flag, const std::vector<std::vector<double>>& printed) {
    const auto t0 = std::chrono::steady_clock::now();
    const Json j = cli_json({"power", flag});
    const double elapsed = seconds_since(t0);
    Outcome o;
    double worst = 0.0;
    int cells = 0;
    for (std::size_t r = 0; r < printed.size(); ++r) {
        for (std::size_t c = 0; c < kTableBetas.size(); ++c) {
            const double got = j["result"]["rows"][r]["power"][c].get<double>();
            const double err = std::abs(got - printed[r][c]);
            worst = std::max(worst, err);
            ++cells;
            if (err > 0.001 + 1e-12) {
                o.pass = false;
                o.detail += " cell(" + std::to_string(r) + "," + std::to_string(c) + ")=" + num(got, 6);
            }
        }
    }
    if (elapsed >= 1.0) {
        o.pass = false;
    }
    o.detail = std::to_string(cells) + " cells, max |diff| " + num(worst, 3) + ", " +
               num(elapsed * 1000, 3) + " ms" + o.detail;
    return o;
}

Outcome criterion_table1() {
    return check_table("--table1", {{0.050, 0.050, 0.050, 0.050, 0.050, 0.050, 0.050},
                                    {0.170, 0.169, 0.160, 0.150, 0.140, 0.131, 0.127},
                                    {0.516, 0.511, 0.484, 0.449, 0.413, 0.380, 0.364},
                                    {0.851, 0.847, 0.821, 0.784, 0.742, 0.698, 0.677},
                                    {0.999, 0.999, 0.998, 0.996, 0.992, 0.985, 0.981}});
}

Outcome criterion_table2() {
    return check_table("--table2", {{0.050, 0.050, 0.050, 0.050, 0.050, 0.050, 0.050},
                                    {0.260, 0.258, 0.247, 0.233, 0.219, 0.207, 0.201},
                                    {0.639, 0.634, 0.608, 0.574, 0.538, 0.503, 0.487},
                                    {0.912, 0.909, 0.891, 0.865, 0.833, 0.798, 0.780},
                                    {1.000, 1.000, 0.999, 0.998, 0.997, 0.994, 0.991}});
}

Outcome criterion_noncentral() {
    Outcome o;
    double worst = 0.0;
    for (double df : {1.0, 2.0}) {
        for (double x : {1.0, 2.0, 4.0, 8.0, 16.0}) {
            for (double ncp : {0.0, 1.0, 4.0, 9.0, 25.0}) {
                const double err = std::abs(dist::noncentral_chisq_sf(x, df, ncp) -
                                            oracle::noncentral_chisq_sf_by_quadrature(x, df, ncp));
                worst = std::max(worst, err);
            }
        }
    }
    o.pass = worst <= 1e-8;
    o.detail = "50 points, max |diff| " + num(worst, 3);
    return o;
}

Outcome criterion_classical_wald() {
    Outcome o;
    double worst = 0.0;
    std::mt19937_64 g(20240601);
    for (const std::string name : {"normal-known-sigma", "poisson", "exponential"}) {
        const FamilyPtr f = make_family(name, 1.0);
        for (int k = 0; k < 50; ++k) {
            std::uniform_int_distribution<int> size(10, 60);
            const std::size_t n = static_cast<std::size_t>(size(g));
            const std::size_t m = static_cast<std::size_t>(size(g));
            Sample a(n), b(m);
            if (name == "normal-known-sigma") {
                std::normal_distribution<double> d1(0.0, 1.0), d2(0.3, 1.0);
                for (auto& v : a) v = d1(g);
                for (auto& v : b) v = d2(g);
            } else if (name == "poisson") {
                std::poisson_distribution<int> d1(4.0), d2(5.0);
                for (auto& v : a) v = d1(g);
                for (auto& v : b) v = d2(g);
            } else {
                std::exponential_distribution<double> d1(1.0), d2(0.7);
                for (auto& v : a) v = d1(g);
                for (auto& v : b) v = d2(g);
            }
            const double got = simple_test(*f, a, b, 0.0).statistic;
            const double want = oracle::classical_wald(name, a, b);
            worst = std::max(worst, std::abs(got - want) / std::max(1.0, std::abs(want)));
        }
    }
    o.pass = worst <= 1e-8;
    o.detail = "150 datasets, max rel diff " + num(worst, 3);
    return o;
}

Outcome criterion_if_closed_form() {
    Outcome o;
    NormalKnownSigma f(1.0);
    const double theta = 0.0;
    const auto null = TestNull::simple_null(f, scalar_vector(theta));
    double worst_cf = 0.0;
    double worst_fd = 0.0;
    const double h = 1e-3;
    for (double beta : {0.0, 0.1, 0.5, 1.0}) {
        for (int i = 0; i <= 40; ++i) {
            const double x = -4.0 + 0.2 * i;
            const ContaminationPattern p{Pattern::FirstSample, x, 0.0};
            const double got = test_if(2, f, null, beta, p).value;
            worst_cf = std::max(worst_cf, std::abs(got - oracle::normal_if2(x, theta, beta)));
            const double fd = (test_functional(f, null, beta, p, h) -
                               2.0 * test_functional(f, null, beta, p, 0.0) +
                               test_functional(f, null, beta, p, -h)) / (h * h);
            worst_fd = std::max(worst_fd, std::abs(fd - got));
        }
    }
    o.pass = worst_cf <= 1e-8 && worst_fd <= 1e-4;
    o.detail = "164 points, closed form max |diff| " + num(worst_cf, 3) +
               ", functional oracle max |diff| " + num(worst_fd, 3);
    return o;
}

Outcome criterion_pif() {
    Outcome o;
    std::mt19937_64 g(77);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    double worst = 0.0;
    int count = 0;
    for (auto which : {Pattern::FirstSample, Pattern::SecondSample, Pattern::Both}) {
        for (int k = 0; k < 10; ++k) {
            const double sigma = 0.5 + 1.5 * u(g);
            NormalKnownSigma f(sigma);
            const double theta0 = -1.0 + 2.0 * u(g);
            const double omega = 0.2 + 0.6 * u(g);
            const bool one_sided = k % 2 == 1;
            const auto null = TestNull::simple_null(f, scalar_vector(theta0), omega, one_sided);
            const double beta = u(g);
            const Vector d1 = scalar_vector(-2.0 + 4.0 * u(g));
            const Vector d2 = scalar_vector(-2.0 + 4.0 * u(g));
            const ContaminationPattern p{which, theta0 + sigma * (-3.0 + 6.0 * u(g)),
                                         theta0 + sigma * (-3.0 + 6.0 * u(g))};
            const double h = 1e-4;
            const double fd = (contaminated_contiguous_power(f, null, d1, d2, beta, 0.05, h, p) -
                               contaminated_contiguous_power(f, null, d1, d2, beta, 0.05, -h, p)) /
                              (2.0 * h);
            worst = std::max(worst, std::abs(pif(f, null, d1, d2, beta, 0.05, p) - fd));
            ++count;
        }
    }
    o.pass = worst <= 1e-5;
    o.detail = std::to_string(count) + " configurations, max |diff| " + num(worst, 3);
    return o;
}

Outcome criterion_lif() {
    Outcome o;
    NormalKnownSigma f(1.0);
    bool two_sided_zero = true;
    bool both_zero = true;
    for (double beta : {0.0, 0.3, 1.0}) {
        const auto null = TestNull::simple_null(f, scalar_vector(0.0), 0.4);
        for (int i = 0; i <= 200; ++i) {
            const double x = -100.0 + i;
            for (auto which : {Pattern::FirstSample, Pattern::SecondSample, Pattern::Both}) {
                two_sided_zero &= lif(f, null, beta, 0.05, {which, x, -0.5 * x}) == 0.0;
            }
            both_zero &= test_if(2, f, null, beta, {Pattern::Both, x, x}).value == 0.0;
        }
    }
    // One-sided, β = 0: sup over [−L, L] grows like L times the slope.
    const double omega = 0.5;
    const auto one = TestNull::simple_null(f, scalar_vector(0.0), omega, true);
    auto sup = [&](double limit) {
        double s = 0.0;
        for (int i = 0; i <= 2000; ++i) {
            const double x = -limit + limit * i / 1000.0;
            s = std::max(s, lif(f, one, 0.0, 0.05, {Pattern::FirstSample, x, 0.0}));
        }
        return s;
    };
    const double expected = std::sqrt(omega) * oracle::std_normal_pdf(dist::std_normal_quantile(0.95));
    const double s25 = sup(25.0), s50 = sup(50.0), s100 = sup(100.0);
    const double slope = (s100 - s50) / 50.0;
    const double slope_lo = (s50 - s25) / 25.0;
    const bool linear = std::abs(slope - expected) <= 1e-6 && std::abs(slope_lo - expected) <= 1e-6;
    // and a bounded counterpart for β > 0
    double bounded = 0.0;
    for (int i = 0; i <= 2000; ++i) {
        bounded = std::max(bounded, std::abs(lif(f, one, 0.5, 0.05,
                                                 {Pattern::FirstSample, -100.0 + 0.1 * i, 0.0})));
    }
    o.pass = two_sided_zero && both_zero && linear;
    o.detail = std::string("two-sided LIF zero: ") + (two_sided_zero ? "yes" : "no") +
               ", IF2(x, x) zero: " + (both_zero ? "yes" : "no") + ", one-sided slope " +
               num(slope, 10) + " vs " + num(expected, 10) + ", sup at beta 0.5 " + num(bounded, 4);
    return o;
}

SimulationConfig size_study_config() {
    SimulationConfig c;
    c.family = "normal-known-sigma";
    c.n = c.m = 50;
    c.replicates = 1000;
    c.alpha = 0.05;
    c.betas = {0.0, 0.3, 0.5};
    c.epsilons = {0.0, 0.2};
    c.theta_c = scalar_vector(3.0);
    c.contaminate_sample = 2;
    c.seed = 2024;
    return c;
}

Outcome criterion_simulation() {
    Outcome o;
    const auto t0 = std::chrono::steady_clock::now();
    const SimulationReport rep = run_study(size_study_config());
    const double elapsed = seconds_since(t0);
    std::map<std::pair<double, double>, double> rate;
    for (const auto& c : rep.cells) {
        rate[{c.epsilon, c.beta}] = c.rate;
    }
    std::ostringstream d;
    d << "pure size";
    for (double b : {0.0, 0.3, 0.5}) {
        const double r = rate[{0.0, b}];
        o.pass &= r >= 0.03 && r <= 0.08;
        d << " b" << b << "=" << r;
    }
    const double s0 = rate[{0.2, 0.0}];
    const double s5 = rate[{0.2, 0.5}];
    o.pass &= s0 >= 3.0 * s5;
    o.pass &= elapsed < 300.0;
    d << "; 20% contamination size b0=" << s0 << " b0.5=" << s5 << "; " << num(elapsed, 3) << " s";
    o.detail = d.str();
    return o;
}

Outcome criterion_tuning() {
    Outcome o;
    SimulationConfig c;
    c.n = c.m = 50;
    c.replicates = 1000;
    c.epsilons = {0.0, 0.2};
    c.theta_c = scalar_vector(3.0);
    c.seed = 2024;
    c.tuning_grid = default_beta_grid();
    c.threads = 1;
    const auto t0 = std::chrono::steady_clock::now();
    const SimulationReport a = run_tuning_study(c);
    c.threads = 3;
    const SimulationReport b = run_tuning_study(c);
    const double elapsed = seconds_since(t0);
    const bool same = serialize(to_json(a)) == serialize(to_json(b));
    const double mode_pure = a.histograms.at(0).mode;
    const double mode_dirty = a.histograms.at(1).mode;
    o.pass = same && mode_pure == 0.0 && mode_dirty == 1.0;
    o.detail = "mode pure " + num(mode_pure) + ", mode at 20% " + num(mode_dirty) +
               ", identical across runs/threads: " + (same ? "yes" : "no") + ", " +
               num(elapsed, 3) + " s for two runs";
    return o;
}

std::vector<double> decision_betas() {
    return {0.0, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 1.0};
}

std::string beta_list() {
    std::string s;
    for (double b : decision_betas()) {
        s += (s.empty() ? "" : ",") + num(b);
    }
    return s;
}

Outcome compare_decisions(const Json& with, const Json& without) {
    Outcome o;
    const auto& t1 = with["result"]["tests"];
    const auto& t2 = without["result"]["tests"];
    std::ostringstream d;
    bool flip0 = false;
    bool stable = true;
    for (std::size_t i = 0; i < t1.size(); ++i) {
        const double b = t1[i]["beta"].get<double>();
        const bool r1 = t1[i]["reject"].get<bool>();
        const bool r2 = t2[i]["reject"].get<bool>();
        if (b == 0.0) {
            flip0 = r1 != r2;
        } else {
            stable &= r1 == r2;
        }
        d << " b" << b << ":p=" << num(t1[i]["p_value"].get<double>(), 3) << "/"
          << num(t2[i]["p_value"].get<double>(), 3);
    }
    o.pass = flip0 && stable;
    o.detail = std::string("beta 0 flips: ") + (flip0 ? "yes" : "no") + ", beta>=0.3 stable: " +
               (stable ? "yes" : "no") + "; p with/without outliers" + d.str();
    return o;
}

Outcome criterion_adverse_events() {
    const std::vector<std::string> base{"test", "--family", "poisson", "--test", "one-sided",
                                        "--direction", "s2", "--beta", beta_list(),
                                        "--data", "adverse-events"};
    std::vector<std::string> dropped = base;
    dropped.insert(dropped.end(), {"--drop-rows", "1,2"});
    return compare_decisions(cli_json(base), cli_json(dropped));
}

Outcome criterion_lifetimes() {
    const std::vector<std::string> base{"test", "--family", "exponential", "--test", "simple",
                                        "--beta", beta_list(), "--data", "lifetimes"};
    std::vector<std::string> outlier = base;
    outlier.insert(outlier.end(), {"--append-s2", "20"});
    return compare_decisions(cli_json(outlier), cli_json(base));
}

Outcome criterion_data_examples() {
    const Outcome a = criterion_adverse_events();
    const Outcome b = criterion_lifetimes();
    return {a.pass && b.pass, std::string("adverse-events ") + (a.pass ? "PASS" : "FAIL") +
                                  "; lifetimes " + (b.pass ? "PASS" : "FAIL")};
}

Outcome criterion_determinism() {
    Outcome o;
    const std::vector<std::vector<std::string>> commands{
        {"test", "--family", "exponential", "--beta", "auto", "--data", "lifetimes", "--append-s2", "20"},
        {"estimate", "--family", "poisson", "--beta", "0,0.5", "--data", "adverse-events"},
        {"power", "--table2"},
        {"robust-curve", "--curve", "pif", "--pattern", "both", "--grid", "-2:2:1", "--delta1", "1", "--beta", "0.3"},
        {"simulate", "--replicates", "150", "--seed", "31"},
        {"simulate", "--tuning", "--replicates", "40", "--seed", "31"}};
    int checked = 0;
    for (const auto& cmd : commands) {
        std::vector<std::string> a = cmd;
        a.insert(a.end(), {"--json", "-"});
        std::vector<std::string> alt = a;
        if (cmd.front() == "simulate") {
            alt.insert(alt.end(), {"--threads", "4"});
            a.insert(a.end(), {"--threads", "1"});
        }
        const CliRun r1 = cli(a);
        const CliRun r2 = cli(alt);
        const bool same = r1.code == 0 && r1.out == r2.out && serialize(Json::parse(r1.out)) == r1.out;
        if (!same) {
            o.pass = false;
            o.detail += " differs: " + cmd.front();
        }
        ++checked;
    }
    o.detail = std::to_string(checked) + " commands byte-identical across runs and thread counts" + o.detail;
    return o;
}

struct Criterion {
    std::string id;
    std::string title;
    std::function<Outcome()> run;
    bool in_default_run;
};

}  // namespace

int main(int argc, char** argv) {
    const std::vector<Criterion> criteria{
        {"1", "power --table1 reproduces the two-sided table", criterion_table1, true},
        {"2", "power --table2 reproduces the one-sided table", criterion_table2, true},
        {"3", "noncentral chi-square series vs quadrature", criterion_noncentral, true},
        {"4", "beta 0 equals the classical Wald statistic", criterion_classical_wald, true},
        {"5", "second-order IF closed form and functional oracle", criterion_if_closed_form, true},
        {"6", "PIF equals the derivative of contaminated power", criterion_pif, true},
        {"7", "LIF identities and one-sided growth", criterion_lif, true},
        {"8", "simulation size calibration", criterion_simulation, true},
        {"9", "tuning-selection histogram trend", criterion_tuning, true},
        {"10", "data-example decision stability", criterion_data_examples, true},
        {"10a", "decision stability: adverse-events", criterion_adverse_events, false},
        {"10b", "decision stability: lifetimes + outlier 20", criterion_lifetimes, false},
        {"11", "byte-identical JSON output", criterion_determinism, true}};

    std::vector<std::string> wanted(argv + 1, argv + argc);
    int failures = 0;
    int ran = 0;
    for (const auto& c : criteria) {
        const bool selected = wanted.empty()
                                  ? c.in_default_run
                                  : std::find(wanted.begin(), wanted.end(), c.id) != wanted.end();
        if (!selected) {
            continue;
        }
        ++ran;
        Outcome o;
        try {
            o = c.run();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        failures += o.pass ? 0 : 1;
        std::cout << (o.pass ? "PASS" : "FAIL") << " [" << c.id << "] " << c.title << " -- "
                  << o.detail << std::endl;
    }
    if (ran == 0) {
        std::cerr << "no matching criterion\n";
        return 2;
    }
    return failures == 0 ? 0 : 1;
}
