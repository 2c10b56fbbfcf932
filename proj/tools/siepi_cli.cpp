#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "siepi/siepi.hpp"

namespace fs = std::filesystem;
using siepi::ordered_json;

namespace {

struct Common {
    std::string config;
    std::string out;
    std::optional<std::uint64_t> seed;
    std::optional<std::size_t> paths;
};

siepi::ScenarioConfig load(const Common& c) {
    auto cfg = siepi::load_config(c.config);
    if (c.seed) cfg.base_seed = *c.seed;
    if (c.paths) {
        if (*c.paths < 1) throw siepi::DomainError("--paths must be >= 1");
        cfg.n_paths = *c.paths;
        for (auto i : cfg.outputs.trajectories) {
            if (i >= cfg.n_paths) throw siepi::DomainError("--paths is smaller than a requested trajectory index");
        }
        for (auto i : cfg.outputs.intensity_paths) {
            if (i >= cfg.n_paths) throw siepi::DomainError("--paths is smaller than a requested path index");
        }
    }
    return cfg;
}

const siepi::CIRParams& require_cir(const siepi::ScenarioConfig& cfg, const char* what) {
    const auto* p = std::get_if<siepi::CIRParams>(&cfg.process);
    if (!p) throw siepi::UnsupportedModel(std::string(what) + " is only available for the CIR driver");
    return *p;
}

std::ofstream open_file(const fs::path& p) {
    std::ofstream os(p, std::ios::binary);
    if (!os) throw std::runtime_error("cannot write '" + p.string() + "'");
    return os;
}

void print_json(const ordered_json& j, const std::string& out_dir, const char* file) {
    if (!out_dir.empty()) {
        fs::create_directories(out_dir);
        auto os = open_file(fs::path(out_dir) / file);
        os << j.dump(2) << '\n';
    }
    std::cout << j.dump(2) << '\n';
}

void add_common(CLI::App* cmd, Common& c, bool need_config, bool ensemble) {
    auto* opt = cmd->add_option("--config", c.config, "Scenario config file (JSON)");
    if (need_config) opt->required()->check(CLI::ExistingFile);
    cmd->add_option("--out", c.out, "Output directory");
    if (ensemble) {
        cmd->add_option("--seed", c.seed, "Base seed (overrides the config)");
        cmd->add_option("--paths", c.paths, "Number of paths (overrides the config)");
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Stochastic SI epidemics driven by Jacobi / CIR transmission rates"};
    app.require_subcommand(1);

    Common sim;
    auto* simulate = app.add_subcommand("simulate", "Run a scenario: trajectories, samples, risk report");
    add_common(simulate, sim, true, true);

    Common tr;
    std::optional<std::string> tr_mode;
    std::optional<double> tr_t;
    std::vector<double> tr_lambda;
    auto* transform = app.add_subcommand("transform", "Laplace transform / MGF of H_t over a lambda grid (CIR)");
    add_common(transform, tr, true, false);
    transform->add_option("--mode", tr_mode, "laplace or mgf")->check(CLI::IsMember({"laplace", "mgf"}));
    transform->add_option("--t", tr_t, "Horizon");
    transform->add_option("--lambda", tr_lambda, "Transform arguments");

    Common ch;
    std::optional<double> ch_t;
    std::vector<double> ch_M;
    std::optional<std::size_t> ch_points;
    auto* chernoff = app.add_subcommand("chernoff", "Chernoff bound curves f(lambda) and optimal bounds (CIR)");
    add_common(chernoff, ch, true, false);
    chernoff->add_option("--t", ch_t, "Horizon");
    chernoff->add_option("--M", ch_M, "Thresholds M");
    chernoff->add_option("--points", ch_points, "Points per f(lambda) curve");

    Common cal;
    std::optional<double> theta, mu, sigma, a;
    auto* calibrate = app.add_subcommand("calibrate", "Match a CIR driver to a Jacobi driver's stationary moments");
    add_common(calibrate, cal, false, false);
    calibrate->add_option("--theta", theta);
    calibrate->add_option("--mu", mu);
    calibrate->add_option("--sigma", sigma);
    calibrate->add_option("--a", a);

    std::string rep_input, rep_out;
    auto* report = app.add_subcommand("report", "Recompute a risk report from a sample CSV");
    report->add_option("--input", rep_input, "Sample file, one value per line")->required()->check(CLI::ExistingFile);
    report->add_option("--out", rep_out, "Output directory");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*simulate) {
            const auto cfg = load(sim);
            if (cfg.grid.step_adjusted) {
                std::cerr << "warning: t_end is not a multiple of dt; using dt = " << siepi::format_double(cfg.grid.dt)
                          << '\n';
            }
            const auto res = siepi::run_scenario(cfg, sim.out.empty() ? fs::path("out") : fs::path(sim.out));
            std::cout << res.summary.dump(2) << '\n';
        } else if (*transform) {
            auto cfg = load(tr);
            const auto& p = require_cir(cfg, "transform");
            siepi::TransformRequest req = cfg.transform.value_or(siepi::TransformRequest{});
            if (tr_mode) req.mode = *tr_mode == "mgf" ? siepi::TransformMode::mgf : siepi::TransformMode::laplace;
            if (tr_t) req.t = *tr_t;
            if (!tr_lambda.empty()) req.lambda = tr_lambda;
            if (req.lambda.empty()) throw siepi::DomainError("transform: no lambda values given");
            const bool mgf = req.mode == siepi::TransformMode::mgf;

            std::ostringstream csv;
            csv << "lambda,value\n";
            for (double l : req.lambda) {
                const double v = mgf ? siepi::mgf_H(p, cfg.p0, l, req.t) : siepi::laplace_H(p, cfg.p0, l, req.t);
                csv << siepi::format_double(l) << ',' << siepi::format_double(v) << '\n';
            }
            if (!tr.out.empty()) {
                fs::create_directories(tr.out);
                auto os = open_file(fs::path(tr.out) / (mgf ? "transform_mgf.csv" : "transform_laplace.csv"));
                os << csv.str();
            }
            std::cout << csv.str();
        } else if (*chernoff) {
            auto cfg = load(ch);
            const auto& p = require_cir(cfg, "chernoff");
            siepi::ChernoffRequest req = cfg.chernoff.value_or(siepi::ChernoffRequest{});
            if (ch_t) req.t = *ch_t;
            if (!ch_M.empty()) req.M = ch_M;
            if (ch_points) req.curve_points = *ch_points;
            if (req.M.empty()) throw siepi::DomainError("chernoff: no thresholds M given");

            const fs::path out = ch.out.empty() ? fs::path("out") : fs::path(ch.out);
            fs::create_directories(out);
            std::ostringstream summary;
            summary << "M,lambda_star,bound,trivial,at_upper_limit\n";
            for (std::size_t i = 0; i < req.M.size(); ++i) {
                const auto r = siepi::chernoff_bound(p, cfg.p0, req.t, req.M[i]);
                summary << siepi::format_double(r.M) << ',' << siepi::format_double(r.lambda_star) << ','
                        << siepi::format_double(r.bound) << ',' << (r.trivial ? 1 : 0) << ','
                        << (r.at_upper_limit ? 1 : 0) << '\n';
                auto os = open_file(out / ("chernoff_curve_" + std::to_string(i) + ".csv"));
                os << "lambda,f\n";
                for (const auto& pt : siepi::chernoff_curve(p, cfg.p0, req.t, req.M[i], req.curve_points)) {
                    os << siepi::format_double(pt.lambda) << ',' << siepi::format_double(pt.f) << '\n';
                }
            }
            auto os = open_file(out / "chernoff_summary.csv");
            os << summary.str();
            std::cout << summary.str();
        } else if (*calibrate) {
            siepi::JacobiParams j;
            if (!cal.config.empty()) {
                const auto cfg = siepi::load_config(cal.config);
                const auto* jp = std::get_if<siepi::JacobiParams>(&cfg.process);
                if (!jp) throw siepi::UnsupportedModel("calibrate: config must describe a Jacobi process");
                j = *jp;
            } else {
                if (!theta || !mu || !sigma || !a) {
                    throw siepi::DomainError("calibrate: give --config or all of --theta --mu --sigma --a");
                }
                j = siepi::validate_jacobi(*theta, *mu, *sigma, *a);
            }
            print_json(siepi::to_json(siepi::match_cir_to_jacobi(j)), cal.out, "calibration.json");
        } else if (*report) {
            std::ifstream in(rep_input);
            const auto samples = siepi::read_samples(in);
            print_json(siepi::to_json(siepi::risk_report(samples)), rep_out, "risk_report.json");
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
