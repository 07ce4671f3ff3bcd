#include "rwt/cli.hpp"

#include "rwt/datasets.hpp"
#include "rwt/errors.hpp"
#include "rwt/records.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <limits>
#include <memory>
#include <sstream>

namespace rwt {

namespace {

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------- parsing

double parse_double(const std::string& s, const std::string& what) {
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(s, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used == 0 || used != s.size() || !std::isfinite(v)) {
        throw UsageError(what + ": '" + s + "' is not a finite number");
    }
    return v;
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> parts;
    std::string item;
    std::istringstream is(s);
    while (std::getline(is, item, sep)) {
        parts.push_back(item);
    }
    if (!s.empty() && s.back() == sep) {
        parts.emplace_back();
    }
    return parts;
}

std::vector<double> parse_list(const std::string& s, const std::string& what) {
    std::vector<double> out;
    for (const auto& p : split(s, ',')) {
        out.push_back(parse_double(p, what));
    }
    if (out.empty()) {
        throw UsageError(what + ": empty list");
    }
    return out;
}

std::vector<int> parse_rows(const std::string& s) {
    std::vector<int> rows;
    for (const auto& p : split(s, ',')) {
        const double v = parse_double(p, "--drop-rows");
        if (v != std::floor(v) || v < 1 || v > 1e9) {
            throw UsageError("--drop-rows: '" + p + "' is not a 1-based row index");
        }
        rows.push_back(static_cast<int>(v));
    }
    return rows;
}

// min:max:step, inclusive of max up to rounding.
std::vector<double> parse_grid(const std::string& s, const std::string& what) {
    const auto parts = split(s, ':');
    if (parts.size() != 3) {
        throw UsageError(what + ": expected min:max:step");
    }
    const double lo = parse_double(parts[0], what);
    const double hi = parse_double(parts[1], what);
    const double step = parse_double(parts[2], what);
    if (step <= 0.0 || hi < lo) {
        throw UsageError(what + ": need step > 0 and max >= min");
    }
    const double count = std::floor((hi - lo) / step + 1e-9) + 1.0;
    if (count > 1e7) {
        throw UsageError(what + ": too many grid points");
    }
    std::vector<double> g;
    for (long i = 0; i < static_cast<long>(count); ++i) {
        g.push_back(lo + static_cast<double>(i) * step);
    }
    return g;
}

void check_alpha(double alpha) {
    if (!(alpha > 0.0 && alpha < 1.0)) {
        throw UsageError("--alpha must lie in (0, 1)");
    }
}

void check_betas(const std::vector<double>& betas) {
    for (double b : betas) {
        if (b < 0.0) {
            throw UsageError("beta must be non-negative");
        }
    }
}

FamilyPtr family_from(const std::string& name, double sigma) {
    try {
        return make_family(name, sigma);
    } catch (const Error& e) {
        throw UsageError(e.what());
    }
}

Vector to_vector(const std::vector<double>& v) {
    Vector out(static_cast<Eigen::Index>(v.size()));
    for (std::size_t i = 0; i < v.size(); ++i) {
        out(static_cast<Eigen::Index>(i)) = v[i];
    }
    return out;
}

Vector parameter(const std::vector<double>& v, const ParametricFamily& family,
                 const std::string& what) {
    if (static_cast<int>(v.size()) != family.dimension()) {
        throw UsageError(what + " needs " + std::to_string(family.dimension()) + " value(s) for " +
                         family.name());
    }
    Vector t = to_vector(v);
    if (!family.in_domain(t)) {
        throw UsageError(what + " is outside the parameter space of " + family.name());
    }
    return t;
}

HypothesisFunction negated(const HypothesisFunction& h) {
    return HypothesisFunction(
        h.name(), h.r(), [h](const Vector& a, const Vector& b) { return Vector(-h(a, b)); },
        [h](const Vector& a, const Vector& b) { return Matrix(-h.jacobian1(a, b)); },
        [h](const Vector& a, const Vector& b) { return Matrix(-h.jacobian2(a, b)); });
}

HypothesisFunction psi_from(const std::string& spec, const ParametricFamily& family) {
    const int p = family.dimension();
    if (spec == "diff") {
        return HypothesisFunction::difference(p);
    }
    if (spec == "mean-diff") {
        return HypothesisFunction::coordinate_difference(p, {0});
    }
    if (spec.rfind("var-ratio:", 0) == 0) {
        if (family.name() != "normal") {
            throw UsageError("--psi var-ratio needs --family normal");
        }
        const double c0 = parse_double(spec.substr(10), "--psi var-ratio");
        if (c0 <= 0.0) {
            throw UsageError("--psi var-ratio needs a positive ratio");
        }
        return HypothesisFunction::variance_ratio(c0);
    }
    throw UsageError("--psi must be diff, mean-diff or var-ratio:C0");
}

// ---------------------------------------------------------------- output

std::string fixed(double v, int decimals) {
    if (!std::isfinite(v)) {
        return v > 0 ? "inf" : (v < 0 ? "-inf" : "nan");
    }
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", decimals, v);
    return buf;
}

std::string fixed(const Vector& v, int decimals) {
    std::string s;
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        s += (i ? ", " : "") + fixed(v(i), decimals);
    }
    return v.size() > 1 ? "(" + s + ")" : s;
}

std::string full(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string pad(const std::string& s, std::size_t width) {
    return s.size() >= width ? s + " " : s + std::string(width - s.size(), ' ');
}

void write_file(const std::string& path, const std::string& text, std::ostream& out) {
    if (path == "-") {
        out << text;
        return;
    }
    std::ofstream f(path, std::ios::binary);
    if (!f) {
        throw UsageError("cannot write '" + path + "'");
    }
    f << text;
}

std::string utc_now() {
    const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

// Options that do not change the result stay out of the record, so that
// e.g. thread counts cannot perturb otherwise identical output.
Json options_json(const CLI::App* sub) {
    Json j = Json::object();
    for (const CLI::Option* opt : sub->get_options()) {
        const std::string name = opt->get_single_name();
        if (opt->count() == 0 || name == "help" || name == "threads" || name == "json" ||
            name == "csv") {
            continue;
        }
        if (opt->get_expected_max() == 0) {
            j[name] = true;
            continue;
        }
        const auto& res = opt->results();
        j[name] = res.size() == 1 ? Json(res.front()) : Json(res);
    }
    return j;
}

struct OutputOptions {
    std::string json;
    std::string csv;
    bool timestamp = false;
};

void add_output_options(CLI::App* sub, OutputOptions& o, bool with_csv = true) {
    sub->add_option("--json", o.json, "Write the JSON run record to a path ('-' for stdout)");
    if (with_csv) {
        sub->add_option("--csv", o.csv, "Write a CSV table to a path ('-' for stdout)");
    }
    sub->add_flag("--timestamp", o.timestamp, "Stamp the record with the current UTC time");
}

// With the record on stdout the human table is dropped so stdout stays parseable.
std::ostream& human(const OutputOptions& o, std::ostream& out) {
    static std::ostream discard(nullptr);
    return o.json == "-" ? discard : out;
}

void emit_record(const std::string& command, const CLI::App* sub, const OutputOptions& o,
                 Json result, std::ostream& out) {
    if (o.json.empty()) {
        return;
    }
    RunRecord r;
    r.command = command;
    r.options = options_json(sub);
    r.result = std::move(result);
    if (o.timestamp) {
        r.timestamp = utc_now();
    }
    write_file(o.json, serialize(to_json(r)), out);
}

// ---------------------------------------------------------------- data

struct DataOptions {
    std::string data;
    std::string data2;
    std::string drop_rows;
    std::string drop_from = "both";
    std::vector<double> append1;
    std::vector<double> append2;
};

void add_data_options(CLI::App* sub, DataOptions& d) {
    sub->add_option("--data", d.data,
                    "Bundled dataset (adverse-events, platelet, lifetimes) or two-column CSV")
        ->required();
    sub->add_option("--data2", d.data2, "Second one-column CSV (then --data holds sample 1)");
    sub->add_option("--drop-rows", d.drop_rows, "Comma-separated 1-based rows to remove");
    sub->add_option("--drop-from", d.drop_from, "Sample the rows are dropped from")
        ->check(CLI::IsMember({"both", "s1", "s2"}));
    sub->add_option("--append-s1", d.append1, "Extra observations appended to sample 1");
    sub->add_option("--append-s2", d.append2, "Extra observations appended to sample 2");
}

TwoSampleDataset load_data(const DataOptions& d) {
    try {
        TwoSampleDataset ds = parse_dataset(d.data, d.data2);
        if (!d.drop_rows.empty()) {
            const RowTarget target = d.drop_from == "s1"   ? RowTarget::First
                                     : d.drop_from == "s2" ? RowTarget::Second
                                                           : RowTarget::Both;
            ds = drop_rows(ds, parse_rows(d.drop_rows), target);
        }
        for (double v : d.append1) {
            ds.sample1.push_back(v);
        }
        for (double v : d.append2) {
            ds.sample2.push_back(v);
        }
        return ds;
    } catch (const Error& e) {
        throw UsageError(e.what());
    }
}

void check_samples(const ParametricFamily& family, const TwoSampleDataset& ds) {
    for (const Sample* s : {&ds.sample1, &ds.sample2}) {
        for (double v : *s) {
            if (!family.in_support(v)) {
                throw UsageError("observation " + full(v) + " is outside the support of " +
                                 family.name());
            }
        }
    }
}

Json dataset_json(const TwoSampleDataset& ds) {
    Json j = to_json(ds);
    char buf[32];
    std::snprintf(buf, sizeof buf, "%016llx",
                  static_cast<unsigned long long>(dataset_checksum(ds)));
    j["checksum"] = buf;
    return j;
}

std::ostream& describe(std::ostream& out, const TwoSampleDataset& ds) {
    return out << "data: " << ds.source << " (" << ds.label1 << " n=" << ds.sample1.size()
               << ", " << ds.label2 << " m=" << ds.sample2.size() << ")\n";
}

// ---------------------------------------------------------------- test

struct TestOptions {
    std::string family = "normal-known-sigma";
    double sigma = 1.0;
    std::string test = "simple";
    std::string psi;
    std::string beta = "0";
    double alpha = 0.05;
    std::string direction = "s2";
    std::string grid;
    double pilot = 1.0;
    DataOptions data;
    OutputOptions output;
};

int cmd_test(const TestOptions& o, const CLI::App* sub, std::ostream& out) {
    std::ostream& h = human(o.output, out);
    check_alpha(o.alpha);
    const FamilyPtr family = family_from(o.family, o.sigma);
    const TwoSampleDataset ds = load_data(o.data);
    check_samples(*family, ds);

    if ((o.test == "simple" || o.test == "partial") && !o.psi.empty()) {
        throw UsageError("--psi only applies to composite and one-sided tests");
    }
    if (o.test == "partial" && family->dimension() < 2) {
        throw UsageError("the partial test needs a family with a nuisance parameter");
    }
    std::optional<HypothesisFunction> psi;
    if (o.test == "composite" || o.test == "one-sided") {
        psi = psi_from(o.psi.empty() ? "diff" : o.psi, *family);
        if (o.test == "one-sided") {
            if (psi->r() != 1) {
                throw UsageError("the one-sided test needs a scalar restriction; use --psi mean-diff");
            }
            if (o.direction == "s2") {
                psi = negated(*psi);
            }
        }
    }

    std::optional<BetaSelection> selection;
    std::vector<double> betas;
    if (o.beta == "auto") {
        const std::vector<double> grid =
            o.grid.empty() ? default_beta_grid() : parse_grid(o.grid, "--grid");
        check_betas(grid);
        selection = select_beta(*family, ds.sample1, ds.sample2, grid, o.pilot);
        betas = {selection->beta};
    } else {
        betas = parse_list(o.beta, "--beta");
        check_betas(betas);
    }

    std::vector<TestResult> results;
    for (double b : betas) {
        if (o.test == "simple") {
            results.push_back(simple_test(*family, ds.sample1, ds.sample2, b, o.alpha));
        } else if (o.test == "partial") {
            results.push_back(partial_homogeneity_test(*family, ds.sample1, ds.sample2, b, o.alpha));
        } else if (o.test == "composite") {
            results.push_back(composite_test(*family, ds.sample1, ds.sample2, *psi, b, o.alpha));
        } else {
            results.push_back(one_sided_test(*family, ds.sample1, ds.sample2, *psi, b, o.alpha));
        }
    }

    std::string hypothesis = o.test;
    if (o.test == "one-sided") {
        hypothesis += o.direction == "s2" ? " (H1: sample 2 larger)" : " (H1: sample 1 larger)";
    }
    h << "test: " << hypothesis << ", family: " << family->name() << ", alpha = " << o.alpha
        << "\n";
    describe(h, ds);
    if (selection) {
        h << "selected beta: " << fixed(selection->beta, 2) << " (per sample "
            << fixed(selection->beta_sample1, 2) << ", " << fixed(selection->beta_sample2, 2)
            << ")\n";
    }
    h << pad("beta", 7) << pad("theta1_hat", 20) << pad("theta2_hat", 20) << pad("statistic", 11)
        << pad("p-value", 9) << "decision\n";
    for (const auto& r : results) {
        h << pad(fixed(r.beta, 3), 7) << pad(fixed(r.fit1.theta_hat, 3), 20)
            << pad(fixed(r.fit2.theta_hat, 3), 20) << pad(fixed(r.statistic, 3), 11)
            << pad(fixed(r.p_value, 3), 9) << (r.reject ? "reject" : "accept") << "\n";
    }

    if (!o.output.csv.empty()) {
        std::ostringstream csv;
        csv << "beta,statistic,p_value,reject\n";
        for (const auto& r : results) {
            csv << full(r.beta) << ',' << full(r.statistic) << ',' << full(r.p_value) << ','
                << (r.reject ? 1 : 0) << '\n';
        }
        write_file(o.output.csv, csv.str(), out);
    }
    Json tests = Json::array();
    for (const auto& r : results) {
        tests.push_back(to_json(r));
    }
    emit_record("test", sub, o.output,
                Json{{"dataset", dataset_json(ds)},
                     {"selection", selection ? to_json(*selection) : Json(nullptr)},
                     {"tests", tests}},
                out);
    return kExitOk;
}

// ---------------------------------------------------------------- power

struct PowerCliOptions {
    bool table1 = false;
    bool table2 = false;
    bool one_sided = false;
    std::string family = "normal-known-sigma";
    double sigma = 1.0;
    std::vector<double> theta1, theta2, theta0, delta1, delta2;
    double n = 0.0;
    double m = 0.0;
    double omega = 0.5;
    double alpha = 0.05;
    double target = 0.0;
    std::string beta;
    OutputOptions output;
};

int cmd_power(const PowerCliOptions& o, const CLI::App* sub, std::ostream& out) {
    std::ostream& h = human(o.output, out);
    check_alpha(o.alpha);
    if (!(o.omega > 0.0 && o.omega < 1.0)) {
        throw UsageError("--omega must lie in (0, 1)");
    }
    std::vector<double> betas =
        o.beta.empty() ? std::vector<double>{0.0, 0.1, 0.3, 0.5, 0.7, 0.9, 1.0}
                       : parse_list(o.beta, "--beta");
    check_betas(betas);
    PowerOptions popts;
    popts.one_sided = o.one_sided || o.table2;

    Json result;
    std::ostringstream csv;
    csv.precision(17);
    if (o.table1 || o.table2) {
        if (o.table1 && o.table2) {
            throw UsageError("--table1 and --table2 are exclusive");
        }
        // Known-variance normal, equal allocation; the drift sits entirely in
        // sample 1 so that W equals the standardized shift.
        const NormalKnownSigma family(1.0);
        const double omega = 0.5;
        const std::vector<double> ws{0.0, 1.0, 2.0, 3.0, 5.0};
        h << (o.table1 ? "Asymptotic contiguous power, two-sided test"
                         : "Asymptotic contiguous power, one-sided test")
            << " (normal, known sigma = 1, omega = 0.5, alpha = " << o.alpha << ")\n";
        h << pad(o.table1 ? "W" : "d", 6);
        for (double b : betas) {
            h << pad("b=" + fixed(b, 1), 8);
        }
        h << "\n";
        csv << (o.table1 ? "W" : "d") << ",beta,power\n";
        Json rows = Json::array();
        for (double w : ws) {
            h << pad(fixed(w, 0), 6);
            Json powers = Json::array();
            for (double b : betas) {
                const double pw = contiguous_power(family, scalar_vector(0.0), scalar_vector(0.0),
                                                   scalar_vector(w / std::sqrt(omega)),
                                                   scalar_vector(0.0), omega, b, o.alpha, popts);
                h << pad(fixed(pw, 3), 8);
                powers.push_back(to_json(pw));
                csv << full(w) << ',' << full(b) << ',' << full(pw) << '\n';
            }
            h << "\n";
            rows.push_back(Json{{"W", w}, {"power", powers}});
        }
        result = Json{{"mode", o.table1 ? "table1" : "table2"}, {"one_sided", popts.one_sided},
                      {"alpha", o.alpha}, {"omega", omega}, {"betas", betas}, {"rows", rows}};
    } else {
        const FamilyPtr family = family_from(o.family, o.sigma);
        Json rows = Json::array();
        if (!o.delta1.empty() || !o.delta2.empty()) {
            const Vector t0 = parameter(o.theta0, *family, "--theta0");
            const Vector d1 = o.delta1.empty() ? Vector(Vector::Zero(family->dimension()))
                                               : to_vector(o.delta1);
            const Vector d2 = o.delta2.empty() ? Vector(Vector::Zero(family->dimension()))
                                               : to_vector(o.delta2);
            if (d1.size() != family->dimension() || d2.size() != family->dimension()) {
                throw UsageError("--delta1/--delta2 need one value per parameter");
            }
            h << "Contiguous power at theta0 = " << fixed(t0, 3) << "\n";
            h << pad("beta", 7) << "power\n";
            csv << "beta,power\n";
            for (double b : betas) {
                const double pw = contiguous_power(*family, t0, t0, d1, d2, o.omega, b, o.alpha, popts);
                h << pad(fixed(b, 3), 7) << fixed(pw, 3) << "\n";
                csv << full(b) << ',' << full(pw) << '\n';
                rows.push_back(Json{{"beta", b}, {"power", to_json(pw)}});
            }
            result = Json{{"mode", "contiguous"}, {"rows", rows}};
        } else {
            const Vector t1 = parameter(o.theta1, *family, "--theta1");
            const Vector t2 = parameter(o.theta2, *family, "--theta2");
            if (o.target > 0.0) {
                if (o.target >= 1.0) {
                    throw UsageError("--target must lie in (0, 1)");
                }
                h << "Total sample size for power " << o.target << " (omega = " << o.omega
                    << ")\n";
                h << pad("beta", 7) << "N\n";
                csv << "beta,N\n";
                for (double b : betas) {
                    const long nn = sample_size_for_power(*family, t1, t2, o.target, o.omega, b,
                                                          o.alpha, popts);
                    h << pad(fixed(b, 3), 7) << nn << "\n";
                    csv << full(b) << ',' << nn << '\n';
                    rows.push_back(Json{{"beta", b}, {"N", nn}});
                }
                result = Json{{"mode", "sample-size"}, {"target", o.target}, {"rows", rows}};
            } else {
                if (o.n <= 0.0 || o.m <= 0.0) {
                    throw UsageError("give --table1, --table2, --delta1/--delta2, --target, or --n and --m");
                }
                h << "Approximate power at fixed alternative, n = " << o.n << ", m = " << o.m
                    << "\n";
                h << pad("beta", 7) << "power\n";
                csv << "beta,power\n";
                for (double b : betas) {
                    const double pw =
                        approx_power_fixed(*family, t1, t2, o.n, o.m, b, o.alpha, popts);
                    h << pad(fixed(b, 3), 7) << fixed(pw, 3) << "\n";
                    csv << full(b) << ',' << full(pw) << '\n';
                    rows.push_back(Json{{"beta", b}, {"power", to_json(pw)}});
                }
                result = Json{{"mode", "fixed"}, {"rows", rows}};
            }
        }
    }
    if (!o.output.csv.empty()) {
        write_file(o.output.csv, csv.str(), out);
    }
    emit_record("power", sub, o.output, std::move(result), out);
    return kExitOk;
}

// ---------------------------------------------------------------- simulate

struct SimulateOptions {
    std::string config;
    int replicates = 0;
    std::uint64_t seed = 0;
    bool seed_set = false;
    unsigned threads = 0;
    bool tuning = false;
    OutputOptions output;
};

int cmd_simulate(const SimulateOptions& o, const CLI::App* sub, std::ostream& out) {
    std::ostream& h = human(o.output, out);
    SimulationConfig config;
    if (!o.config.empty()) {
        std::ifstream f(o.config);
        if (!f) {
            throw UsageError("cannot open config '" + o.config + "'");
        }
        try {
            config = simulation_config_from_json(Json::parse(f));
        } catch (const Json::parse_error& e) {
            throw UsageError(o.config + ": " + e.what());
        } catch (const Error& e) {
            throw UsageError(o.config + ": " + e.what());
        }
    }
    if (o.replicates > 0) {
        config.replicates = o.replicates;
    }
    if (sub->count("--seed") > 0) {
        config.seed = o.seed;
    }
    if (o.threads > 0) {
        config.threads = o.threads;
    }
    const FamilyPtr family = family_from(config.family, config.sigma);
    if (config.replicates < 1 || config.n < 2 || config.m < 2) {
        throw UsageError("need replicates >= 1 and sample sizes >= 2");
    }
    check_alpha(config.alpha);
    check_betas(config.betas);
    for (double e : config.epsilons) {
        if (!(e >= 0.0 && e < 1.0)) {
            throw UsageError("contamination proportions must lie in [0, 1)");
        }
    }
    parameter(std::vector<double>(config.theta1.data(), config.theta1.data() + config.theta1.size()),
              *family, "theta1");
    parameter(std::vector<double>(config.theta2.data(), config.theta2.data() + config.theta2.size()),
              *family, "theta2");

    SimulationReport report;
    if (o.tuning) {
        if (config.tuning_grid.empty()) {
            config.tuning_grid = default_beta_grid();
        }
        report = run_tuning_study(config);
    } else {
        report = run_study(config);
    }

    h << "simulation: " << config.family << ", n = " << config.n << ", m = " << config.m
        << ", R = " << config.replicates << ", seed = " << config.seed << "\n";
    if (!report.cells.empty()) {
        h << pad("beta", 7) << pad("eps", 7) << pad("rate", 8) << pad("mc_se", 8) << "failures\n";
        for (const auto& c : report.cells) {
            h << pad(fixed(c.beta, 3), 7) << pad(fixed(c.epsilon, 3), 7)
                << pad(fixed(c.rate, 3), 8) << pad(fixed(c.mc_se, 3), 8) << c.failures
                << (c.flagged ? " (flagged)" : "") << "\n";
        }
    }
    for (const auto& hist : report.histograms) {
        h << "eps = " << fixed(hist.epsilon, 3) << ": mode beta = " << fixed(hist.mode, 2)
          << ", failures = " << hist.failures << "\n  ";
        for (std::size_t i = 0; i < hist.grid.size(); ++i) {
            h << fixed(hist.grid[i], 2) << ":" << hist.counts[i]
              << (i + 1 < hist.grid.size() ? " " : "\n");
        }
    }
    if (!o.output.csv.empty()) {
        write_file(o.output.csv, simulation_csv(report), out);
    }
    emit_record("simulate", sub, o.output, to_json(report), out);
    return kExitOk;
}

// ---------------------------------------------------------------- estimate

struct EstimateOptions {
    std::string family = "normal-known-sigma";
    double sigma = 1.0;
    std::string beta = "0";
    DataOptions data;
    OutputOptions output;
};

int cmd_estimate(const EstimateOptions& o, const CLI::App* sub, std::ostream& out) {
    std::ostream& h = human(o.output, out);
    const FamilyPtr family = family_from(o.family, o.sigma);
    const TwoSampleDataset ds = load_data(o.data);
    check_samples(*family, ds);
    const std::vector<double> betas = parse_list(o.beta, "--beta");
    check_betas(betas);

    h << "MDPDE, family: " << family->name() << "\n";
    describe(h, ds);
    h << pad("beta", 7) << pad("theta1_hat", 20) << pad("se1", 20) << pad("theta2_hat", 20)
        << "se2\n";
    Json fits = Json::array();
    std::ostringstream csv;
    csv << "beta,sample,coordinate,estimate,se\n";
    for (double b : betas) {
        const MdpdeFit f1 = fit_mdpde(*family, ds.sample1, b);
        const MdpdeFit f2 = fit_mdpde(*family, ds.sample2, b);
        auto se = [](const MdpdeFit& f) {
            return Vector((f.sigma_hat.diagonal() / static_cast<double>(f.n)).cwiseSqrt());
        };
        h << pad(fixed(b, 3), 7) << pad(fixed(f1.theta_hat, 3), 20) << pad(fixed(se(f1), 3), 20)
            << pad(fixed(f2.theta_hat, 3), 20) << fixed(se(f2), 3) << "\n";
        int s = 1;
        for (const MdpdeFit* f : {&f1, &f2}) {
            const Vector e = se(*f);
            for (Eigen::Index i = 0; i < e.size(); ++i) {
                csv << full(b) << ',' << s << ',' << i << ',' << full(f->theta_hat(i)) << ','
                    << full(e(i)) << '\n';
            }
            ++s;
        }
        fits.push_back(Json{{"beta", b}, {"sample1", to_json(f1)}, {"sample2", to_json(f2)}});
    }
    if (!o.output.csv.empty()) {
        write_file(o.output.csv, csv.str(), out);
    }
    emit_record("estimate", sub, o.output, Json{{"dataset", dataset_json(ds)}, {"fits", fits}},
                out);
    return kExitOk;
}

// ---------------------------------------------------------------- select-beta

struct SelectOptions {
    std::string family = "normal-known-sigma";
    double sigma = 1.0;
    std::string grid;
    double pilot = 1.0;
    DataOptions data;
    OutputOptions output;
};

int cmd_select_beta(const SelectOptions& o, const CLI::App* sub, std::ostream& out) {
    std::ostream& h = human(o.output, out);
    const FamilyPtr family = family_from(o.family, o.sigma);
    const TwoSampleDataset ds = load_data(o.data);
    check_samples(*family, ds);
    const std::vector<double> grid = o.grid.empty() ? default_beta_grid() : parse_grid(o.grid, "--grid");
    check_betas(grid);
    check_betas({o.pilot});
    const BetaSelection sel = select_beta(*family, ds.sample1, ds.sample2, grid, o.pilot);

    h << "tuning selection, family: " << family->name() << ", pilot beta = " << o.pilot << "\n";
    describe(h, ds);
    h << pad("beta", 7) << "estimated MSE\n";
    std::ostringstream csv;
    csv << "beta,criterion\n";
    for (std::size_t i = 0; i < sel.grid.size(); ++i) {
        h << pad(fixed(sel.grid[i], 3), 7) << fixed(sel.criterion[i], 6)
            << (sel.grid[i] == sel.beta ? "  <-" : "") << "\n";
        csv << full(sel.grid[i]) << ',' << full(sel.criterion[i]) << '\n';
    }
    h << "selected beta: " << fixed(sel.beta, 2) << " (per sample " << fixed(sel.beta_sample1, 2)
        << ", " << fixed(sel.beta_sample2, 2) << ")\n";
    for (const auto& w : sel.warnings) {
        h << "warning: " << w << "\n";
    }
    if (!o.output.csv.empty()) {
        write_file(o.output.csv, csv.str(), out);
    }
    emit_record("select-beta", sub, o.output,
                Json{{"dataset", dataset_json(ds)}, {"selection", to_json(sel)}}, out);
    return kExitOk;
}

// ---------------------------------------------------------------- robust-curve

struct CurveOptions {
    std::string family = "normal-known-sigma";
    double sigma = 1.0;
    std::vector<double> theta0;
    std::string test = "simple";
    std::string psi = "diff";
    std::string direction = "s1";
    std::string curve = "if2";
    std::string pattern = "s1";
    std::string grid;
    double beta = 0.0;
    double alpha = 0.05;
    double omega = 0.5;
    std::vector<double> delta1, delta2;
    OutputOptions output;
};

int cmd_robust_curve(const CurveOptions& o, const CLI::App* sub, std::ostream& out) {
    check_alpha(o.alpha);
    check_betas({o.beta});
    if (!(o.omega > 0.0 && o.omega < 1.0)) {
        throw UsageError("--omega must lie in (0, 1)");
    }
    const FamilyPtr family = family_from(o.family, o.sigma);
    const Vector t0 = o.theta0.empty() && family->dimension() == 1
                          ? scalar_vector(family->name() == "normal-known-sigma" ? 0.0 : 1.0)
                          : parameter(o.theta0, *family, "--theta0");
    const bool one_sided = o.test == "one-sided";
    TestNull null = TestNull::simple_null(*family, t0, o.omega, one_sided);
    if (o.psi != "diff" || one_sided) {
        HypothesisFunction psi = psi_from(o.psi, *family);
        if (one_sided) {
            if (psi.r() != 1) {
                throw UsageError("the one-sided test needs a scalar restriction; use --psi mean-diff");
            }
            if (o.direction == "s2") {
                psi = negated(psi);
            }
        }
        null = TestNull::composite(psi, t0, t0, o.omega, one_sided);
    }
    const Pattern which = o.pattern == "s1"   ? Pattern::FirstSample
                          : o.pattern == "s2" ? Pattern::SecondSample
                                              : Pattern::Both;

    std::ostringstream csv;
    Json rows = Json::array();
    Json columns;
    if (o.curve == "ges") {
        const std::vector<double> betas =
            o.grid.empty() ? default_beta_grid() : parse_grid(o.grid, "--grid");
        check_betas(betas);
        columns = Json::array({"beta", "value"});
        csv << "beta,value\n";
        for (double b : betas) {
            const SensitivityReport s = gross_error_sensitivity(*family, null, b, which);
            const double v = s.bounded ? s.value : std::numeric_limits<double>::infinity();
            csv << full(b) << ',' << full(v) << '\n';
            rows.push_back(Json::array({b, to_json(v)}));
        }
    } else {
        if (o.grid.empty()) {
            throw UsageError("--grid min:max:step is required for this curve");
        }
        const std::vector<double> xs = parse_grid(o.grid, "--grid");
        const Vector d1 = o.delta1.empty() ? Vector(Vector::Zero(family->dimension())) : to_vector(o.delta1);
        const Vector d2 = o.delta2.empty() ? Vector(Vector::Zero(family->dimension())) : to_vector(o.delta2);
        if (d1.size() != family->dimension() || d2.size() != family->dimension()) {
            throw UsageError("--delta1/--delta2 need one value per parameter");
        }
        auto value = [&](double x, double y) {
            ContaminationPattern cp;
            cp.which = which;
            cp.x = which == Pattern::SecondSample ? 0.0 : x;
            cp.y = which == Pattern::SecondSample ? x : y;
            if (o.curve == "if2") {
                return test_if(one_sided ? 1 : 2, *family, null, o.beta, cp).value;
            }
            if (o.curve == "pif") {
                return pif(*family, null, d1, d2, o.beta, o.alpha, cp);
            }
            return lif(*family, null, o.beta, o.alpha, cp);
        };
        if (which == Pattern::Both) {
            columns = Json::array({"x", "y", "value"});
            csv << "x,y,value\n";
            for (double x : xs) {
                for (double y : xs) {
                    const double v = value(x, y);
                    csv << full(x) << ',' << full(y) << ',' << full(v) << '\n';
                    rows.push_back(Json::array({x, y, to_json(v)}));
                }
            }
        } else {
            columns = Json::array({"x", "value"});
            csv << "x,value\n";
            for (double x : xs) {
                const double v = value(x, 0.0);
                csv << full(x) << ',' << full(v) << '\n';
                rows.push_back(Json::array({x, to_json(v)}));
            }
        }
    }
    if (!o.output.csv.empty()) {
        write_file(o.output.csv, csv.str(), out);
    } else if (o.output.json != "-") {
        out << csv.str();
    }
    emit_record("robust-curve", sub, o.output,
                Json{{"curve", o.curve}, {"pattern", o.pattern}, {"columns", columns}, {"rows", rows}},
                out);
    return kExitOk;
}

void add_family_options(CLI::App* sub, std::string& family, double& sigma) {
    sub->add_option("--family", family, "Model family")
        ->check(CLI::IsMember({"normal-known-sigma", "normal", "poisson", "exponential"}))
        ->capture_default_str();
    sub->add_option("--sigma", sigma, "Known standard deviation for normal-known-sigma")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Robust Wald-type tests for two-sample problems based on minimum density power "
                 "divergence estimators"};
    app.name("rwt");
    app.require_subcommand(1);

    TestOptions topt;
    CLI::App* test = app.add_subcommand("test", "Run a two-sample Wald-type test on a dataset");
    add_family_options(test, topt.family, topt.sigma);
    test->add_option("--test", topt.test, "Hypothesis")
        ->check(CLI::IsMember({"simple", "partial", "one-sided", "composite"}))
        ->capture_default_str();
    test->add_option("--psi", topt.psi, "Restriction: diff, mean-diff or var-ratio:C0");
    test->add_option("--beta", topt.beta, "Tuning parameter, a comma list, or 'auto'")
        ->capture_default_str();
    test->add_option("--alpha", topt.alpha, "Significance level")->capture_default_str();
    test->add_option("--direction", topt.direction,
                     "One-sided alternative: which sample has the larger parameter")
        ->check(CLI::IsMember({"s1", "s2"}))
        ->capture_default_str();
    test->add_option("--grid", topt.grid, "Tuning grid for --beta auto, min:max:step");
    test->add_option("--pilot-beta", topt.pilot, "Pilot tuning parameter for --beta auto")
        ->capture_default_str();
    add_data_options(test, topt.data);
    add_output_options(test, topt.output);

    PowerCliOptions popt;
    CLI::App* power = app.add_subcommand("power", "Asymptotic power and sample-size calculations");
    power->add_flag("--table1", popt.table1, "Two-sided contiguous power preset table");
    power->add_flag("--table2", popt.table2, "One-sided contiguous power preset table");
    power->add_flag("--one-sided", popt.one_sided, "Use the one-sided test");
    add_family_options(power, popt.family, popt.sigma);
    power->add_option("--theta1", popt.theta1, "Sample-1 parameter (fixed alternative)");
    power->add_option("--theta2", popt.theta2, "Sample-2 parameter (fixed alternative)");
    power->add_option("--n", popt.n, "Sample-1 size (fixed alternative)");
    power->add_option("--m", popt.m, "Sample-2 size (fixed alternative)");
    power->add_option("--target", popt.target, "Target power: report the total sample size needed");
    power->add_option("--theta0", popt.theta0, "Common null parameter (contiguous alternative)");
    power->add_option("--delta1", popt.delta1, "Sample-1 drift (contiguous alternative)");
    power->add_option("--delta2", popt.delta2, "Sample-2 drift (contiguous alternative)");
    power->add_option("--omega", popt.omega, "Sample-size fraction m/(n+m)")->capture_default_str();
    power->add_option("--beta", popt.beta, "Comma list of tuning parameters");
    power->add_option("--alpha", popt.alpha, "Significance level")->capture_default_str();
    add_output_options(power, popt.output);

    SimulateOptions sopt;
    CLI::App* simulate = app.add_subcommand("simulate", "Monte Carlo size/power or tuning study");
    simulate->add_option("--config", sopt.config, "JSON study configuration");
    simulate->add_option("--replicates", sopt.replicates, "Override the replicate count");
    simulate->add_option("--seed", sopt.seed, "Override the seed");
    simulate->add_option("--threads", sopt.threads, "Worker threads (default: RTS_THREADS or all cores)");
    simulate->add_flag("--tuning", sopt.tuning, "Histogram of data-driven beta selections");
    add_output_options(simulate, sopt.output);

    EstimateOptions eopt;
    CLI::App* estimate = app.add_subcommand("estimate", "MDPDE fits for both samples");
    add_family_options(estimate, eopt.family, eopt.sigma);
    estimate->add_option("--beta", eopt.beta, "Comma list of tuning parameters")->capture_default_str();
    add_data_options(estimate, eopt.data);
    add_output_options(estimate, eopt.output);

    SelectOptions bopt;
    CLI::App* select = app.add_subcommand("select-beta", "Data-driven tuning parameter choice");
    add_family_options(select, bopt.family, bopt.sigma);
    select->add_option("--grid", bopt.grid, "Candidate grid min:max:step (default 0:1:0.05)");
    select->add_option("--pilot-beta", bopt.pilot, "Pilot tuning parameter")->capture_default_str();
    add_data_options(select, bopt.data);
    add_output_options(select, bopt.output);

    CurveOptions copt;
    CLI::App* curve = app.add_subcommand(
        "robust-curve", "Influence-function curves as x[,y],value CSV (stdout unless --csv)");
    add_family_options(curve, copt.family, copt.sigma);
    curve->add_option("--theta0", copt.theta0, "Null parameter (default 0 or 1 for p = 1)");
    curve->add_option("--test", copt.test, "Test whose functional is perturbed")
        ->check(CLI::IsMember({"simple", "one-sided"}))
        ->capture_default_str();
    curve->add_option("--psi", copt.psi, "Restriction: diff, mean-diff or var-ratio:C0")
        ->capture_default_str();
    curve->add_option("--direction", copt.direction, "One-sided alternative")
        ->check(CLI::IsMember({"s1", "s2"}))
        ->capture_default_str();
    curve->add_option("--curve", copt.curve,
                      "if2 (test IF; first order for one-sided), pif, lif, or ges (versus beta)")
        ->check(CLI::IsMember({"if2", "pif", "lif", "ges"}))
        ->capture_default_str();
    curve->add_option("--pattern", copt.pattern, "Contaminated sample")
        ->check(CLI::IsMember({"s1", "s2", "both"}))
        ->capture_default_str();
    curve->add_option("--grid", copt.grid, "Contamination points (beta values for ges), min:max:step");
    curve->add_option("--beta", copt.beta, "Tuning parameter")->capture_default_str();
    curve->add_option("--alpha", copt.alpha, "Significance level")->capture_default_str();
    curve->add_option("--omega", copt.omega, "Sample-size fraction m/(n+m)")->capture_default_str();
    curve->add_option("--delta1", copt.delta1, "Sample-1 drift for pif");
    curve->add_option("--delta2", copt.delta2, "Sample-2 drift for pif");
    add_output_options(curve, copt.output);

    std::vector<const char*> argv{"rwt"};
    for (const auto& a : args) {
        argv.push_back(a.c_str());
    }
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp& e) {
        app.exit(e, out, err);
        return kExitOk;
    } catch (const CLI::CallForAllHelp& e) {
        app.exit(e, out, err);
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        app.exit(e, out, err);
        return kExitUsage;
    }

    try {
        if (test->parsed()) return cmd_test(topt, test, out);
        if (power->parsed()) return cmd_power(popt, power, out);
        if (simulate->parsed()) return cmd_simulate(sopt, simulate, out);
        if (estimate->parsed()) return cmd_estimate(eopt, estimate, out);
        if (select->parsed()) return cmd_select_beta(bopt, select, out);
        if (curve->parsed()) return cmd_robust_curve(copt, curve, out);
    } catch (const UsageError& e) {
        err << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        err << "numeric failure: " << e.what() << "\n";
        return kExitNumeric;
    }
    return kExitUsage;
}

}  // namespace rwt
