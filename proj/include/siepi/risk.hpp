#pragma once

// Hitting-time risk for the unmitigated CIR epidemic.
//
// tau(s0, x) <= t  <=>  H_t >= M(s0, x), so Chernoff gives
//   P(tau <= t) <= inf_{0 < lambda < lambda_c} f(lambda),
//   f(lambda) = exp(-lambda M + Lambda_t(lambda)),
// with Lambda_t the log-MGF of H_t. ln f is convex in lambda, so the
// minimiser is found by golden-section search on ln f.

#include <cmath>
#include <cstdint>
#include <variant>
#include <vector>

#include "siepi/epidemic.hpp"
#include "siepi/error.hpp"
#include "siepi/sde.hpp"
#include "siepi/transforms.hpp"

namespace siepi {

struct ChernoffResult {
    double lambda_star = 0.0;
    double bound = 1.0;
    double M = 0.0;
    double t = 0.0;
    /// M <= E[H_t]: the infimum is approached as lambda -> 0 and equals 1.
    bool trivial = false;
    /// The minimiser sits against the upper end lambda_c (1 - guard) of the
    /// search interval, i.e. Lambda_t' stays below M on the whole domain.
    bool at_upper_limit = false;
};

/// Cumulative pressure needed to push S from s0 down to x:
/// M = ln[s0 (1 - x) / (x (1 - s0))].
inline double threshold_M(double s0, double x) {
    detail::require(x > 0.0 && x <= s0 && s0 < 1.0, "threshold_M: need 0 < x <= s0 < 1");
    return std::log(s0) - std::log(x) + std::log1p(-x) - std::log1p(-s0);
}

/// ln f(lambda) = -lambda M + Lambda_t(lambda).
inline double log_chernoff_objective(const CIRParams& p, double p0, double t, double M, double lambda) {
    return -lambda * M + log_mgf(p, p0, lambda, t);
}

inline ChernoffResult chernoff_bound(const CIRParams& p, double p0, double t, double M) {
    detail::require(std::isfinite(M) && M >= 0.0, "chernoff_bound: M must be finite and >= 0");
    detail::require(std::isfinite(t) && t > 0.0, "chernoff_bound: t must be finite and > 0");
    check_initial_state(p, p0);

    ChernoffResult res;
    res.M = M;
    res.t = t;
    if (M <= expected_H(p, p0, NoIntervention{}, t)) {
        res.trivial = true;
        return res;
    }
    detail::require(p.sigma > 0.0, "chernoff_bound: sigma must be > 0 (H_t is deterministic otherwise)");

    const double lc = critical_lambda(p);
    const double lo0 = 1e-12 * lc;
    const double hi0 = lc * (1.0 - kCriticalGuard);
    auto G = [&](double l) { return log_chernoff_objective(p, p0, t, M, l); };

    // golden-section search; only interior points are evaluated
    const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double a = lo0;
    double b = hi0;
    double c = b - inv_phi * (b - a);
    double d = a + inv_phi * (b - a);
    double gc = G(c);
    double gd = G(d);
    while (b - a > 1e-10 * 0.5 * (a + b)) {
        if (gc <= gd) {
            b = d;
            d = c;
            gd = gc;
            c = b - inv_phi * (b - a);
            gc = G(c);
        } else {
            a = c;
            c = d;
            gc = gd;
            d = a + inv_phi * (b - a);
            gd = G(d);
        }
    }
    const double best = gc <= gd ? c : d;
    const double g_best = std::min(gc, gd);

    res.lambda_star = best;
    res.bound = std::min(std::exp(g_best), 1.0);
    res.at_upper_limit = hi0 - best <= 1e-9 * lc;
    return res;
}

/// Chernoff machinery exists only for the CIR driver.
inline ChernoffResult chernoff_bound(const ProcessParams& params, double p0, double t, double M) {
    const auto* cir = std::get_if<CIRParams>(&params);
    if (!cir) throw UnsupportedModel("chernoff_bound: no closed-form MGF for the Jacobi driver");
    return chernoff_bound(*cir, p0, t, M);
}

/// Optimal exponents and bounds over a strictly ascending grid of
/// thresholds, each above E[H_t].
inline std::vector<ChernoffResult> lambda_star_curve(const CIRParams& p, double p0, double t,
                                                     const std::vector<double>& M_grid) {
    const double mean = expected_H(p, p0, NoIntervention{}, t);
    std::vector<ChernoffResult> out;
    out.reserve(M_grid.size());
    for (std::size_t i = 0; i < M_grid.size(); ++i) {
        detail::require(M_grid[i] > mean, "lambda_star_curve: M_grid[" + std::to_string(i) +
                                              "] must exceed E[H_t] = " + std::to_string(mean));
        if (i > 0) {
            detail::require(M_grid[i] > M_grid[i - 1], "lambda_star_curve: M_grid must be strictly ascending");
        }
        out.push_back(chernoff_bound(p, p0, t, M_grid[i]));
    }
    return out;
}

struct ChernoffCurvePoint {
    double lambda = 0.0;
    double f = 0.0;
};

/// f(lambda) on n log-spaced points in [lambda_c * 1e-3, lambda_c (1 - 2 guard)].
inline std::vector<ChernoffCurvePoint> chernoff_curve(const CIRParams& p, double p0, double t, double M,
                                                      std::size_t n) {
    detail::require(n >= 2, "chernoff_curve: need at least 2 points");
    detail::require(p.sigma > 0.0, "chernoff_curve: sigma must be > 0");
    const double lc = critical_lambda(p);
    const double lo = std::log(1e-3 * lc);
    const double hi = std::log(lc * (1.0 - 2.0 * kCriticalGuard));
    std::vector<ChernoffCurvePoint> out(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double l = std::exp(lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1));
        out[i] = {l, std::exp(log_chernoff_objective(p, p0, t, M, l))};
    }
    return out;
}

/// Fraction of simulated paths with tau(s0, x) <= t_k, for every grid
/// time t_k. Nondecreasing in k.
inline std::vector<double> empirical_hitting_cdf(const ProcessParams& params, double p0,
                                                 const InterventionSpec& spec, double s0, double x,
                                                 const TimeGrid& grid, std::uint64_t base_seed,
                                                 std::size_t n_paths, unsigned workers = 0) {
    detail::require(s0 > 0.0 && s0 < 1.0, "empirical_hitting_cdf: s0 must lie in (0, 1)");
    detail::require(x > 0.0 && x < s0, "empirical_hitting_cdf: x must lie in (0, s0)");
    const auto phi = intervention_on_grid(spec, grid);
    const std::size_t never = grid.size();
    auto first_hit = map_ensemble(
        params, p0, grid, base_seed, n_paths,
        [&](std::size_t, const IntensityPath& path) {
            const auto epi = epidemic_trajectory(path, phi, s0);
            for (std::size_t k = 0; k < epi.S.size(); ++k) {
                if (epi.S[k] <= x) return k;
            }
            return never;
        },
        workers);
    std::vector<double> counts(grid.size(), 0.0);
    for (std::size_t k : first_hit) {
        if (k != never) counts[k] += 1.0;
    }
    double acc = 0.0;
    for (auto& c : counts) {
        acc += c;
        c = acc / static_cast<double>(n_paths);
    }
    return counts;
}

}  // namespace siepi
