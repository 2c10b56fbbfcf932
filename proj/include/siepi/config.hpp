#pragma once

// Scenario configuration files (JSON).
//
//   {
//     "name": "cir_baseline",
//     "process": {"kind": "cir", "kappa": 2.0, "eta": 0.4, "sigma": 0.3},
//     "p0": 0.5,
//     "s0": 0.99,
//     "intervention": {"kind": "exponential", "alpha": 0.2},
//     "grid": {"t_end": 15.0, "dt": 0.005},
//     "n_paths": 50,
//     "base_seed": 1,
//     "outputs": {"trajectories": [0, 1], "final_size_samples": true, "risk_report": true,
//                 "hitting_cdf": {"x": 0.5}},
//     "chernoff": {"t": 1.0, "M": [0.3, 0.5], "curve_points": 200},
//     "transform": {"mode": "laplace", "t": 1.0, "lambda": [0.5, 1.0, 2.0]}
//   }
//
// Jacobi processes use {"kind": "jacobi", "theta", "mu", "sigma", "a"};
// tabulated interventions use {"kind": "table", "knots": [[t, v], ...]}.
// Unknown keys anywhere are rejected. Validation collects every problem,
// each prefixed with its key path.

#include <cstdint>
#include <fstream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "siepi/grid.hpp"
#include "siepi/intervention.hpp"
#include "siepi/processes.hpp"
#include "siepi/transforms.hpp"

namespace siepi {

class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(std::vector<std::string> issues)
        : std::runtime_error(join(issues)), issues_(std::move(issues)) {}

    const std::vector<std::string>& issues() const { return issues_; }

private:
    static std::string join(const std::vector<std::string>& issues) {
        std::string msg = "invalid configuration:";
        for (const auto& i : issues) msg += "\n  " + i;
        return msg;
    }
    std::vector<std::string> issues_;
};

struct OutputRequest {
    std::vector<std::size_t> trajectories;     // trajectory_<i>.csv: t,P,beta,H,S
    std::vector<std::size_t> intensity_paths;  // path_<i>.csv: t,P
    bool final_size_samples = false;           // final_size.csv: 1 - S_T per path
    bool final_intensity_samples = false;      // final_H.csv: H_T per path
    bool final_rate_samples = false;           // final_P.csv: P_T per path
    bool risk_report = true;                   // summary.json "final_size"
    std::optional<double> hitting_x;           // hitting_cdf.csv: t,cdf
};

struct ChernoffRequest {
    double t = 1.0;
    std::vector<double> M;
    std::size_t curve_points = 200;
};

struct TransformRequest {
    TransformMode mode = TransformMode::laplace;
    double t = 1.0;
    std::vector<double> lambda;
};

struct ScenarioConfig {
    std::string name = "scenario";
    ProcessParams process;
    double p0 = 0.0;
    double s0 = 0.0;
    InterventionSpec intervention = NoIntervention{};
    TimeGrid grid;
    std::size_t n_paths = 1;
    std::uint64_t base_seed = 0;
    unsigned workers = 0;
    OutputRequest outputs;
    std::optional<ChernoffRequest> chernoff;
    std::optional<TransformRequest> transform;
};

namespace detail {

using nlohmann::json;

// Collects validation issues while walking a JSON object.
class Reader {
public:
    void issue(const std::string& path, const std::string& what) { issues_.push_back(path + ": " + what); }
    const std::vector<std::string>& issues() const { return issues_; }

    void reject_unknown(const json& obj, const std::string& path, std::initializer_list<const char*> known) {
        for (const auto& [key, _] : obj.items()) {
            bool ok = false;
            for (const char* k : known) ok = ok || key == k;
            if (!ok) issue(join(path, key), "unknown key");
        }
    }

    std::optional<double> number(const json& obj, const std::string& path, const char* key, bool required = true) {
        const auto p = join(path, key);
        if (!obj.contains(key)) {
            if (required) issue(p, "missing");
            return std::nullopt;
        }
        const auto& v = obj.at(key);
        if (!v.is_number()) {
            issue(p, "must be a number");
            return std::nullopt;
        }
        const double d = v.get<double>();
        if (!std::isfinite(d)) {
            issue(p, "must be finite");
            return std::nullopt;
        }
        return d;
    }

    std::optional<std::uint64_t> count(const json& obj, const std::string& path, const char* key, bool required = true) {
        const auto p = join(path, key);
        if (!obj.contains(key)) {
            if (required) issue(p, "missing");
            return std::nullopt;
        }
        const auto& v = obj.at(key);
        if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<std::int64_t>() >= 0)) {
            issue(p, "must be a nonnegative integer");
            return std::nullopt;
        }
        return v.get<std::uint64_t>();
    }

    std::optional<bool> boolean(const json& obj, const std::string& path, const char* key) {
        if (!obj.contains(key)) return std::nullopt;
        const auto& v = obj.at(key);
        if (!v.is_boolean()) {
            issue(join(path, key), "must be true or false");
            return std::nullopt;
        }
        return v.get<bool>();
    }

    const json* object(const json& obj, const std::string& path, const char* key, bool required = true) {
        if (!obj.contains(key)) {
            if (required) issue(join(path, key), "missing");
            return nullptr;
        }
        const auto& v = obj.at(key);
        if (!v.is_object()) {
            issue(join(path, key), "must be an object");
            return nullptr;
        }
        return &v;
    }

    std::vector<double> numbers(const json& obj, const std::string& path, const char* key) {
        std::vector<double> out;
        const auto p = join(path, key);
        if (!obj.contains(key)) {
            issue(p, "missing");
            return out;
        }
        const auto& v = obj.at(key);
        if (!v.is_array()) {
            issue(p, "must be an array of numbers");
            return out;
        }
        for (std::size_t i = 0; i < v.size(); ++i) {
            if (!v[i].is_number()) {
                issue(p + "[" + std::to_string(i) + "]", "must be a number");
            } else {
                out.push_back(v[i].get<double>());
            }
        }
        return out;
    }

    std::vector<std::size_t> indices(const json& obj, const std::string& path, const char* key) {
        std::vector<std::size_t> out;
        if (!obj.contains(key)) return out;
        const auto& v = obj.at(key);
        const auto p = join(path, key);
        if (!v.is_array()) {
            issue(p, "must be an array of path indices");
            return out;
        }
        for (std::size_t i = 0; i < v.size(); ++i) {
            if (!v[i].is_number_unsigned()) {
                issue(p + "[" + std::to_string(i) + "]", "must be a nonnegative integer");
            } else {
                out.push_back(v[i].get<std::size_t>());
            }
        }
        return out;
    }

    static std::string join(const std::string& path, const std::string& key) {
        return path.empty() ? key : path + "." + key;
    }

    // Runs a constructor that reports through DomainError.
    template <class F>
    void guard(const std::string& path, F&& f) {
        try {
            f();
        } catch (const DomainError& e) {
            issue(path, e.what());
        }
    }

private:
    std::vector<std::string> issues_;
};

inline std::optional<ProcessParams> read_process(Reader& r, const json& root) {
    const json* obj = r.object(root, "", "process");
    if (!obj) return std::nullopt;
    const json& p = *obj;
    if (!p.contains("kind") || !p.at("kind").is_string()) {
        r.issue("process.kind", "must be \"jacobi\" or \"cir\"");
        return std::nullopt;
    }
    const auto kind = p.at("kind").get<std::string>();
    std::optional<ProcessParams> out;
    if (kind == "jacobi") {
        r.reject_unknown(p, "process", {"kind", "theta", "mu", "sigma", "a"});
        auto theta = r.number(p, "process", "theta");
        auto mu = r.number(p, "process", "mu");
        auto sigma = r.number(p, "process", "sigma");
        auto a = r.number(p, "process", "a");
        if (theta && mu && sigma && a) r.guard("process", [&] { out = validate_jacobi(*theta, *mu, *sigma, *a); });
    } else if (kind == "cir") {
        r.reject_unknown(p, "process", {"kind", "kappa", "eta", "sigma"});
        auto kappa = r.number(p, "process", "kappa");
        auto eta = r.number(p, "process", "eta");
        auto sigma = r.number(p, "process", "sigma");
        if (kappa && eta && sigma) r.guard("process", [&] { out = validate_cir(*kappa, *eta, *sigma); });
    } else {
        r.issue("process.kind", "must be \"jacobi\" or \"cir\", got \"" + kind + "\"");
    }
    return out;
}

inline std::optional<InterventionSpec> read_intervention(Reader& r, const json& root) {
    const json* obj = r.object(root, "", "intervention", false);
    if (!obj) return InterventionSpec{NoIntervention{}};
    const json& p = *obj;
    if (!p.contains("kind") || !p.at("kind").is_string()) {
        r.issue("intervention.kind", "must be \"constant\", \"exponential\" or \"table\"");
        return std::nullopt;
    }
    const auto kind = p.at("kind").get<std::string>();
    std::optional<InterventionSpec> out;
    if (kind == "constant") {
        r.reject_unknown(p, "intervention", {"kind"});
        out = NoIntervention{};
    } else if (kind == "exponential") {
        r.reject_unknown(p, "intervention", {"kind", "alpha"});
        if (auto alpha = r.number(p, "intervention", "alpha")) {
            r.guard("intervention.alpha", [&] { out = make_exponential_intervention(*alpha); });
        }
    } else if (kind == "table") {
        r.reject_unknown(p, "intervention", {"kind", "knots"});
        if (!p.contains("knots") || !p.at("knots").is_array()) {
            r.issue("intervention.knots", "must be an array of [time, value] pairs");
            return std::nullopt;
        }
        std::vector<std::pair<double, double>> knots;
        bool ok = true;
        const auto& arr = p.at("knots");
        for (std::size_t i = 0; i < arr.size(); ++i) {
            const auto& k = arr[i];
            if (!k.is_array() || k.size() != 2 || !k[0].is_number() || !k[1].is_number()) {
                r.issue("intervention.knots[" + std::to_string(i) + "]", "must be a [time, value] pair");
                ok = false;
                continue;
            }
            knots.emplace_back(k[0].get<double>(), k[1].get<double>());
        }
        if (ok) r.guard("intervention.knots", [&] { out = make_table_intervention(std::move(knots)); });
    } else {
        r.issue("intervention.kind", "must be \"constant\", \"exponential\" or \"table\", got \"" + kind + "\"");
    }
    return out;
}

inline OutputRequest read_outputs(Reader& r, const json& root) {
    OutputRequest out;
    const json* obj = r.object(root, "", "outputs", false);
    if (!obj) return out;
    const json& o = *obj;
    r.reject_unknown(o, "outputs",
                     {"trajectories", "intensity_paths", "final_size_samples", "final_intensity_samples",
                      "final_rate_samples", "risk_report", "hitting_cdf"});
    out.trajectories = r.indices(o, "outputs", "trajectories");
    out.intensity_paths = r.indices(o, "outputs", "intensity_paths");
    if (auto b = r.boolean(o, "outputs", "final_size_samples")) out.final_size_samples = *b;
    if (auto b = r.boolean(o, "outputs", "final_intensity_samples")) out.final_intensity_samples = *b;
    if (auto b = r.boolean(o, "outputs", "final_rate_samples")) out.final_rate_samples = *b;
    if (auto b = r.boolean(o, "outputs", "risk_report")) out.risk_report = *b;
    if (const json* h = r.object(o, "outputs", "hitting_cdf", false)) {
        r.reject_unknown(*h, "outputs.hitting_cdf", {"x"});
        out.hitting_x = r.number(*h, "outputs.hitting_cdf", "x");
    }
    return out;
}

inline std::optional<ChernoffRequest> read_chernoff(Reader& r, const json& root) {
    const json* obj = r.object(root, "", "chernoff", false);
    if (!obj) return std::nullopt;
    const json& c = *obj;
    r.reject_unknown(c, "chernoff", {"t", "M", "curve_points"});
    ChernoffRequest req;
    if (auto t = r.number(c, "chernoff", "t")) {
        if (*t <= 0.0) r.issue("chernoff.t", "must be > 0");
        req.t = *t;
    }
    req.M = r.numbers(c, "chernoff", "M");
    for (std::size_t i = 0; i < req.M.size(); ++i) {
        if (!(req.M[i] >= 0.0)) r.issue("chernoff.M[" + std::to_string(i) + "]", "must be >= 0");
    }
    if (auto n = r.count(c, "chernoff", "curve_points", false)) {
        if (*n < 2) r.issue("chernoff.curve_points", "must be >= 2");
        req.curve_points = *n;
    }
    return req;
}

inline std::optional<TransformRequest> read_transform(Reader& r, const json& root) {
    const json* obj = r.object(root, "", "transform", false);
    if (!obj) return std::nullopt;
    const json& c = *obj;
    r.reject_unknown(c, "transform", {"mode", "t", "lambda"});
    TransformRequest req;
    if (c.contains("mode")) {
        const auto& m = c.at("mode");
        if (m == "laplace") {
            req.mode = TransformMode::laplace;
        } else if (m == "mgf") {
            req.mode = TransformMode::mgf;
        } else {
            r.issue("transform.mode", "must be \"laplace\" or \"mgf\"");
        }
    }
    if (auto t = r.number(c, "transform", "t")) {
        if (*t < 0.0) r.issue("transform.t", "must be >= 0");
        req.t = *t;
    }
    req.lambda = r.numbers(c, "transform", "lambda");
    for (std::size_t i = 0; i < req.lambda.size(); ++i) {
        if (!(req.lambda[i] >= 0.0)) r.issue("transform.lambda[" + std::to_string(i) + "]", "must be >= 0");
    }
    return req;
}

}  // namespace detail

/// Parses and validates a scenario from JSON text. Throws ConfigError
/// listing every violated constraint, or on malformed JSON.
inline ScenarioConfig parse_config(const std::string& text) {
    using detail::json;
    json root;
    try {
        root = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError({std::string("parse error: ") + e.what()});
    }
    if (!root.is_object()) throw ConfigError({"top level must be a JSON object"});

    detail::Reader r;
    r.reject_unknown(root, "", {"name", "process", "p0", "s0", "intervention", "grid", "n_paths", "base_seed",
                                "workers", "outputs", "chernoff", "transform"});
    ScenarioConfig cfg;
    if (root.contains("name")) {
        if (root.at("name").is_string()) {
            cfg.name = root.at("name").get<std::string>();
        } else {
            r.issue("name", "must be a string");
        }
    }

    auto process = detail::read_process(r, root);
    auto p0 = r.number(root, "", "p0");
    auto s0 = r.number(root, "", "s0");
    if (process && p0) r.guard("p0", [&] { check_initial_state(*process, *p0); });
    if (s0 && !(*s0 > 0.0 && *s0 < 1.0)) r.issue("s0", "must lie in (0, 1)");

    auto intervention = detail::read_intervention(r, root);

    std::optional<TimeGrid> grid;
    if (const json* g = r.object(root, "", "grid")) {
        r.reject_unknown(*g, "grid", {"t_end", "dt"});
        auto t_end = r.number(*g, "grid", "t_end");
        auto dt = r.number(*g, "grid", "dt", false);
        if (t_end) r.guard("grid", [&] { grid = make_grid(*t_end, dt.value_or(kDefaultStep)); });
    }

    auto n_paths = r.count(root, "", "n_paths");
    if (n_paths && *n_paths < 1) r.issue("n_paths", "must be >= 1");
    auto seed = r.count(root, "", "base_seed", false);
    auto workers = r.count(root, "", "workers", false);

    cfg.outputs = detail::read_outputs(r, root);
    if (cfg.outputs.hitting_x && s0 && !(*cfg.outputs.hitting_x > 0.0 && *cfg.outputs.hitting_x < *s0)) {
        r.issue("outputs.hitting_cdf.x", "must lie in (0, s0)");
    }
    if (n_paths) {
        for (auto i : cfg.outputs.trajectories) {
            if (i >= *n_paths) r.issue("outputs.trajectories", "index " + std::to_string(i) + " >= n_paths");
        }
        for (auto i : cfg.outputs.intensity_paths) {
            if (i >= *n_paths) r.issue("outputs.intensity_paths", "index " + std::to_string(i) + " >= n_paths");
        }
    }
    cfg.chernoff = detail::read_chernoff(r, root);
    cfg.transform = detail::read_transform(r, root);

    if (!r.issues().empty()) throw ConfigError(r.issues());

    cfg.process = *process;
    cfg.p0 = *p0;
    cfg.s0 = *s0;
    cfg.intervention = *intervention;
    cfg.grid = *grid;
    cfg.n_paths = *n_paths;
    cfg.base_seed = seed.value_or(0);
    cfg.workers = static_cast<unsigned>(workers.value_or(0));
    return cfg;
}

inline ScenarioConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config file '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

}  // namespace siepi
