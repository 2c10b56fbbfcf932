#pragma once

#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "siepi/calibration.hpp"
#include "siepi/config.hpp"
#include "siepi/epidemic.hpp"
#include "siepi/report.hpp"
#include "siepi/risk.hpp"
#include "siepi/sde.hpp"
#include "siepi/transforms.hpp"

namespace siepi {

using ordered_json = nlohmann::ordered_json;

inline ordered_json to_json(const ProcessParams& params) {
    struct V {
        ordered_json operator()(const JacobiParams& p) const {
            return {{"kind", "jacobi"}, {"theta", p.theta}, {"mu", p.mu}, {"sigma", p.sigma}, {"a", p.a},
                    {"boundary_nonattainable", p.boundary_nonattainable}};
        }
        ordered_json operator()(const CIRParams& p) const {
            return {{"kind", "cir"}, {"kappa", p.kappa}, {"eta", p.eta}, {"sigma", p.sigma}, {"feller", p.feller}};
        }
    };
    return std::visit(V{}, params);
}

inline ordered_json to_json(const InterventionSpec& spec) {
    struct V {
        ordered_json operator()(const NoIntervention&) const { return {{"kind", "constant"}}; }
        ordered_json operator()(const ExponentialDecay& e) const { return {{"kind", "exponential"}, {"alpha", e.alpha}}; }
        ordered_json operator()(const TabulatedIntervention& t) const {
            ordered_json knots = ordered_json::array();
            for (const auto& [kt, kv] : t.knots) knots.push_back({kt, kv});
            return {{"kind", "table"}, {"knots", knots}};
        }
    };
    return std::visit(V{}, spec);
}

inline ordered_json to_json(const RiskReport& r) {
    return {{"n", r.n}, {"mean", r.mean}, {"variance", r.variance}, {"q95", r.q95}, {"max", r.max}};
}

inline ordered_json to_json(const CalibrationResult& c) {
    return {{"jacobi", to_json(ProcessParams{c.jacobi})},
            {"cir", to_json(ProcessParams{c.cir})},
            {"matched_mean", c.matched_mean},
            {"matched_variance", c.matched_variance}};
}

/// Per-path terminal quantities of an ensemble.
struct FinalState {
    double P = 0.0;           // P_T
    double H = 0.0;           // H_T
    double final_size = 0.0;  // 1 - S_T
};

/// Streams the scenario's ensemble and keeps only terminal values, in path
/// index order.
inline std::vector<FinalState> simulate_final_states(const ScenarioConfig& cfg) {
    const auto phi = intervention_on_grid(cfg.intervention, cfg.grid);
    return map_ensemble(
        cfg.process, cfg.p0, cfg.grid, cfg.base_seed, cfg.n_paths,
        [&](std::size_t, const IntensityPath& path) {
            const double H = final_intensity(path, phi);
            return FinalState{path.values.back(), H, 1.0 - susceptible_from_H(cfg.s0, H)};
        },
        cfg.workers);
}

struct ScenarioResult {
    ordered_json summary;
    std::vector<std::filesystem::path> files;
};

namespace detail {

inline std::ofstream open_out(const std::filesystem::path& p) {
    std::ofstream os(p, std::ios::binary);
    if (!os) throw std::runtime_error("cannot write '" + p.string() + "'");
    return os;
}

}  // namespace detail

/// Runs the scenario, writes the requested artifacts under `out_dir` and
/// summary.json. Every byte written is a function of `cfg` alone.
inline ScenarioResult run_scenario(const ScenarioConfig& cfg, const std::filesystem::path& out_dir) {
    namespace fs = std::filesystem;
    fs::create_directories(out_dir);
    ScenarioResult res;
    const auto& out = cfg.outputs;
    const auto phi = intervention_on_grid(cfg.intervention, cfg.grid);

    // single pass over the ensemble: terminal state plus first-hit index
    const std::size_t never = cfg.grid.size();
    struct PathSummary {
        FinalState fin;
        std::size_t hit = 0;
    };
    const auto summaries = map_ensemble(
        cfg.process, cfg.p0, cfg.grid, cfg.base_seed, cfg.n_paths,
        [&](std::size_t, const IntensityPath& path) {
            PathSummary s;
            s.hit = never;
            if (out.hitting_x) {
                const auto epi = epidemic_trajectory(path, phi, cfg.s0);
                for (std::size_t k = 0; k < epi.S.size(); ++k) {
                    if (epi.S[k] <= *out.hitting_x) {
                        s.hit = k;
                        break;
                    }
                }
                s.fin = {path.values.back(), epi.H.back(), 1.0 - epi.S.back()};
            } else {
                const double H = final_intensity(path, phi);
                s.fin = {path.values.back(), H, 1.0 - susceptible_from_H(cfg.s0, H)};
            }
            return s;
        },
        cfg.workers);

    std::vector<double> sizes, Hs, Ps;
    sizes.reserve(summaries.size());
    Hs.reserve(summaries.size());
    Ps.reserve(summaries.size());
    for (const auto& s : summaries) {
        sizes.push_back(s.fin.final_size);
        Hs.push_back(s.fin.H);
        Ps.push_back(s.fin.P);
    }

    auto emit_samples = [&](const char* file, const char* header, const std::vector<double>& xs) {
        const auto p = out_dir / file;
        auto os = detail::open_out(p);
        write_samples(os, header, xs);
        res.files.push_back(p);
    };
    if (out.final_size_samples) emit_samples("final_size.csv", "final_size", sizes);
    if (out.final_intensity_samples) emit_samples("final_H.csv", "H_T", Hs);
    if (out.final_rate_samples) emit_samples("final_P.csv", "P_T", Ps);

    for (auto i : out.trajectories) {
        const auto path = simulate_path(cfg.process, cfg.p0, cfg.grid, derive_path_seed(cfg.base_seed, i));
        const auto p = out_dir / ("trajectory_" + std::to_string(i) + ".csv");
        auto os = detail::open_out(p);
        write_trajectory_csv(os, epidemic_trajectory(path, phi, cfg.s0));
        res.files.push_back(p);
    }
    for (auto i : out.intensity_paths) {
        const auto path = simulate_path(cfg.process, cfg.p0, cfg.grid, derive_path_seed(cfg.base_seed, i));
        const auto p = out_dir / ("path_" + std::to_string(i) + ".csv");
        auto os = detail::open_out(p);
        write_intensity_csv(os, path);
        res.files.push_back(p);
    }

    ordered_json hitting;
    if (out.hitting_x) {
        std::vector<double> cdf(cfg.grid.size(), 0.0);
        for (const auto& s : summaries) {
            if (s.hit != never) cdf[s.hit] += 1.0;
        }
        double acc = 0.0;
        for (auto& c : cdf) {
            acc += c;
            c = acc / static_cast<double>(cfg.n_paths);
        }
        const auto p = out_dir / "hitting_cdf.csv";
        auto os = detail::open_out(p);
        os << "t,cdf\n";
        for (std::size_t k = 0; k < cdf.size(); ++k) {
            os << format_double(cfg.grid.time(k)) << ',' << format_double(cdf[k]) << '\n';
        }
        res.files.push_back(p);
        hitting = {{"x", *out.hitting_x}, {"M", threshold_M(cfg.s0, *out.hitting_x)}, {"P_tau_le_T", cdf.back()}};
    }

    ordered_json& s = res.summary;
    s["name"] = cfg.name;
    s["process"] = to_json(cfg.process);
    s["p0"] = cfg.p0;
    s["s0"] = cfg.s0;
    s["intervention"] = to_json(cfg.intervention);
    s["grid"] = {{"t_end", cfg.grid.t_end}, {"dt", cfg.grid.dt}, {"n_steps", cfg.grid.n_steps}};
    s["n_paths"] = cfg.n_paths;
    s["base_seed"] = cfg.base_seed;
    const auto mom = stationary_moments(cfg.process);
    s["stationary"] = {{"mean", mom.mean}, {"variance", mom.variance}};
    s["expected_H_T"] = expected_H(cfg.process, cfg.p0, cfg.intervention, cfg.grid.t_end);
    s["H_T"] = to_json(risk_report(Hs));
    if (out.risk_report) s["final_size"] = to_json(risk_report(sizes));
    if (out.hitting_x) s["hitting"] = hitting;
    ordered_json warnings = ordered_json::array();
    if (cfg.grid.step_adjusted) warnings.push_back("t_end is not a multiple of dt; step stretched to t_end / n_steps");
    if (const auto* c = std::get_if<CIRParams>(&cfg.process); c && !c->feller) {
        warnings.push_back("CIR parameters violate the Feller condition 2 kappa eta > sigma^2");
    }
    if (const auto* j = std::get_if<JacobiParams>(&cfg.process); j && !j->boundary_nonattainable) {
        warnings.push_back("Jacobi parameters allow the boundaries 0 and a to be reached");
    }
    s["warnings"] = warnings;
    ordered_json files = ordered_json::array();
    for (const auto& f : res.files) files.push_back(f.filename().string());
    s["files"] = files;

    const auto p = out_dir / "summary.json";
    auto os = detail::open_out(p);
    os << s.dump(2) << '\n';
    res.files.push_back(p);
    return res;
}

}  // namespace siepi
