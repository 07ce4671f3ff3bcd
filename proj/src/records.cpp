#include "rwt/records.hpp"

#include "rwt/errors.hpp"

#include <cmath>
#include <sstream>

namespace rwt {

std::string toolkit_version() { return "1.0.0"; }

Json to_json(double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); }

Json to_json(const Vector& v) {
    Json a = Json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        a.push_back(to_json(v(i)));
    }
    return a;
}

Json to_json(const Matrix& m) {
    Json rows = Json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        rows.push_back(to_json(Vector(m.row(i).transpose())));
    }
    return rows;
}

Json to_json(const MdpdeFit& fit) {
    return Json{{"theta_hat", to_json(fit.theta_hat)},
                {"beta", to_json(fit.beta)},
                {"objective_value", to_json(fit.objective_value)},
                {"sigma_hat", to_json(fit.sigma_hat)},
                {"j_hat", to_json(fit.j_hat)},
                {"k_hat", to_json(fit.k_hat)},
                {"converged", fit.converged},
                {"iterations", fit.iterations},
                {"gradient_norm", to_json(fit.gradient_norm)},
                {"n", fit.n},
                {"diagnostics", fit.diagnostics}};
}

Json to_json(const TestResult& r) {
    Json j{{"test", r.test},
           {"statistic", to_json(r.statistic)},
           {"reference", r.reference == Reference::ChiSquare ? "chi-square" : "standard-normal"},
           {"df", r.df},
           {"p_value", to_json(r.p_value)},
           {"alpha", to_json(r.alpha)},
           {"critical_value", to_json(r.critical_value)},
           {"reject", r.reject},
           {"beta", to_json(r.beta)},
           {"omega", to_json(r.omega)},
           {"n", r.n},
           {"m", r.m},
           {"psi_hat", to_json(r.psi_hat)},
           {"covariance", to_json(r.covariance)},
           {"fit1", to_json(r.fit1)},
           {"fit2", to_json(r.fit2)}};
    j["pooled"] = r.pooled ? to_json(*r.pooled) : Json(nullptr);
    return j;
}

Json to_json(const BetaSelection& s) {
    Json crit = Json::array();
    for (double c : s.criterion) {
        crit.push_back(to_json(c));
    }
    return Json{{"beta", to_json(s.beta)},
                {"grid", s.grid},
                {"criterion", crit},
                {"beta_sample1", to_json(s.beta_sample1)},
                {"beta_sample2", to_json(s.beta_sample2)},
                {"warnings", s.warnings}};
}

namespace {

const char* test_kind_name(TestKind k) {
    switch (k) {
        case TestKind::Simple: return "simple";
        case TestKind::Partial: return "partial";
        case TestKind::OneSided: return "one-sided";
    }
    return "simple";
}

TestKind test_kind_from(const std::string& s) {
    if (s == "simple") return TestKind::Simple;
    if (s == "partial") return TestKind::Partial;
    if (s == "one-sided") return TestKind::OneSided;
    throw DomainError("unknown simulation test '" + s + "'");
}

Vector vector_from(const Json& j) {
    if (j.is_number()) {
        return scalar_vector(j.get<double>());
    }
    const auto v = j.get<std::vector<double>>();
    Vector out(static_cast<Eigen::Index>(v.size()));
    for (std::size_t i = 0; i < v.size(); ++i) {
        out(static_cast<Eigen::Index>(i)) = v[i];
    }
    return out;
}

}  // namespace

Json to_json(const SimulationConfig& c) {
    return Json{{"family", c.family},
                {"sigma", to_json(c.sigma)},
                {"test", test_kind_name(c.test)},
                {"direction", to_json(c.direction)},
                {"theta1", to_json(c.theta1)},
                {"theta2", to_json(c.theta2)},
                {"n", c.n},
                {"m", c.m},
                {"replicates", c.replicates},
                {"betas", c.betas},
                {"alpha", to_json(c.alpha)},
                {"epsilons", c.epsilons},
                {"theta_c", to_json(c.theta_c)},
                {"contaminate_sample", c.contaminate_sample},
                {"seed", c.seed},
                {"tuning_grid", c.tuning_grid}};
}

SimulationConfig simulation_config_from_json(const Json& j) {
    if (!j.is_object()) {
        throw DomainError("simulation config must be a JSON object");
    }
    static const std::vector<std::string> known{
        "family", "sigma", "test", "direction", "theta1", "theta2", "n", "m", "replicates",
        "betas", "alpha", "epsilons", "theta_c", "contaminate_sample", "seed", "tuning_grid",
        "threads"};
    for (const auto& [key, _] : j.items()) {
        if (std::find(known.begin(), known.end(), key) == known.end()) {
            throw DomainError("unknown simulation config key '" + key + "'");
        }
    }
    SimulationConfig c;
    try {
        if (j.contains("family")) c.family = j["family"].get<std::string>();
        if (j.contains("sigma")) c.sigma = j["sigma"].get<double>();
        if (j.contains("test")) c.test = test_kind_from(j["test"].get<std::string>());
        if (j.contains("direction")) c.direction = j["direction"].get<double>();
        if (j.contains("theta1")) c.theta1 = vector_from(j["theta1"]);
        if (j.contains("theta2")) c.theta2 = vector_from(j["theta2"]);
        if (j.contains("n")) c.n = j["n"].get<int>();
        if (j.contains("m")) c.m = j["m"].get<int>();
        if (j.contains("replicates")) c.replicates = j["replicates"].get<int>();
        if (j.contains("betas")) c.betas = j["betas"].get<std::vector<double>>();
        if (j.contains("alpha")) c.alpha = j["alpha"].get<double>();
        if (j.contains("epsilons")) c.epsilons = j["epsilons"].get<std::vector<double>>();
        if (j.contains("theta_c")) c.theta_c = vector_from(j["theta_c"]);
        if (j.contains("contaminate_sample")) c.contaminate_sample = j["contaminate_sample"].get<int>();
        if (j.contains("seed")) c.seed = j["seed"].get<std::uint64_t>();
        if (j.contains("tuning_grid")) c.tuning_grid = j["tuning_grid"].get<std::vector<double>>();
        if (j.contains("threads")) c.threads = j["threads"].get<unsigned>();
    } catch (const nlohmann::json::exception& e) {
        throw DomainError(std::string("bad simulation config: ") + e.what());
    }
    return c;
}

Json to_json(const SimulationReport& report) {
    Json cells = Json::array();
    for (const auto& c : report.cells) {
        cells.push_back(Json{{"beta", to_json(c.beta)},
                             {"epsilon", to_json(c.epsilon)},
                             {"contaminated", c.contaminated},
                             {"replicates", c.replicates},
                             {"rejections", c.rejections},
                             {"failures", c.failures},
                             {"rate", to_json(c.rate)},
                             {"mc_se", to_json(c.mc_se)},
                             {"flagged", c.flagged}});
    }
    Json hist = Json::array();
    for (const auto& h : report.histograms) {
        hist.push_back(Json{{"epsilon", to_json(h.epsilon)},
                            {"grid", h.grid},
                            {"counts", h.counts},
                            {"failures", h.failures},
                            {"mode", to_json(h.mode)}});
    }
    return Json{{"config", to_json(report.config)}, {"cells", cells}, {"histograms", hist}};
}

Json to_json(const SensitivityReport& r) {
    return Json{{"value", to_json(r.value)}, {"bounded", r.bounded}, {"x", to_json(r.x)},
                {"y", to_json(r.y)}};
}

Json to_json(const TwoSampleDataset& d) {
    return Json{{"source", d.source},
                {"label1", d.label1},
                {"label2", d.label2},
                {"n", d.sample1.size()},
                {"m", d.sample2.size()}};
}

Json to_json(const RunRecord& r) {
    return Json{{"schema", kSchemaVersion},
                {"command", r.command},
                {"version", r.version},
                {"timestamp", r.timestamp ? Json(*r.timestamp) : Json(nullptr)},
                {"options", r.options},
                {"result", r.result}};
}

RunRecord record_from_json(const Json& j) {
    if (!j.is_object() || j.value("schema", 0) != kSchemaVersion) {
        throw DomainError("not a schema-1 run record");
    }
    RunRecord r;
    r.command = j.at("command").get<std::string>();
    r.version = j.at("version").get<std::string>();
    if (!j.at("timestamp").is_null()) {
        r.timestamp = j.at("timestamp").get<std::string>();
    }
    r.options = j.at("options");
    r.result = j.at("result");
    return r;
}

std::string serialize(const Json& j) { return j.dump(2) + "\n"; }

std::string simulation_csv(const SimulationReport& report) {
    std::ostringstream os;
    os.precision(17);
    if (!report.cells.empty()) {
        os << "beta,epsilon,replicates,rejections,failures,rate,mc_se\n";
        for (const auto& c : report.cells) {
            os << c.beta << ',' << c.epsilon << ',' << c.replicates << ',' << c.rejections << ','
               << c.failures << ',' << c.rate << ',' << c.mc_se << '\n';
        }
    }
    if (!report.histograms.empty()) {
        os << "epsilon,beta,count\n";
        for (const auto& h : report.histograms) {
            for (std::size_t i = 0; i < h.grid.size(); ++i) {
                os << h.epsilon << ',' << h.grid[i] << ',' << h.counts[i] << '\n';
            }
        }
    }
    return os.str();
}

}  // namespace rwt
