#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <ostream>
#include <variant>
#include <vector>

#include "siepi/grid.hpp"
#include "siepi/io.hpp"
#include "siepi/parallel.hpp"
#include "siepi/processes.hpp"
#include "siepi/random.hpp"

namespace siepi {

struct IntensityPath {
    TimeGrid grid;
    std::vector<double> values;  // P at t_0..t_n
    std::uint64_t seed = 0;
};

namespace detail {

// One Euler-Maruyama step; the state is clamped to [0, a].
inline double euler_step(const JacobiParams& p, double x, double dt, double sqrt_dt, double z) {
    const double next = x + p.theta * (p.mu - x) * dt + p.sigma * std::sqrt(x * (p.a - x)) * sqrt_dt * z;
    return std::clamp(next, 0.0, p.a);
}

// Full truncation: coefficients see max(x, 0); the state is clamped at 0,
// so x >= 0 on entry for every step after the first.
inline double euler_step(const CIRParams& p, double x, double dt, double sqrt_dt, double z) {
    const double xp = std::max(x, 0.0);
    const double next = x + p.kappa * (p.eta - xp) * dt + p.sigma * std::sqrt(xp) * sqrt_dt * z;
    return std::max(next, 0.0);
}

template <class Params>
void fill_path(const Params& p, double p0, const TimeGrid& grid, std::uint64_t seed,
               std::vector<double>& values) {
    values.resize(grid.size());
    values[0] = p0;
    NormalStream normal(seed);
    const double dt = grid.dt;
    const double sqrt_dt = std::sqrt(dt);
    double x = p0;
    for (std::size_t k = 0; k < grid.n_steps; ++k) {
        x = euler_step(p, x, dt, sqrt_dt, normal());
        values[k + 1] = x;
    }
}

}  // namespace detail

/// Euler-Maruyama path of the intensity driver on `grid`, driven by the
/// normal stream seeded with `seed`. Pure function of its arguments.
inline IntensityPath simulate_path(const ProcessParams& params, double p0, const TimeGrid& grid,
                                   std::uint64_t seed) {
    check_initial_state(params, p0);
    IntensityPath path{grid, {}, seed};
    std::visit([&](const auto& p) { detail::fill_path(p, p0, grid, seed, path.values); }, params);
    return path;
}

/// Path i uses derive_path_seed(base_seed, i). Output order is by index.
inline std::vector<IntensityPath> simulate_ensemble(const ProcessParams& params, double p0,
                                                    const TimeGrid& grid, std::uint64_t base_seed,
                                                    std::size_t n_paths, unsigned workers = 0) {
    detail::require(n_paths >= 1, "simulate_ensemble: n_paths must be >= 1");
    check_initial_state(params, p0);
    return parallel_map(n_paths, workers, [&](std::size_t i) {
        return simulate_path(params, p0, grid, derive_path_seed(base_seed, i));
    });
}

/// Streaming variant: simulates path i and returns summary(i, path) without
/// keeping the paths alive. Used for large ensembles.
template <class Summary>
auto map_ensemble(const ProcessParams& params, double p0, const TimeGrid& grid,
                  std::uint64_t base_seed, std::size_t n_paths, Summary&& summary,
                  unsigned workers = 0) {
    detail::require(n_paths >= 1, "map_ensemble: n_paths must be >= 1");
    check_initial_state(params, p0);
    return parallel_map(n_paths, workers, [&](std::size_t i) {
        const IntensityPath path = simulate_path(params, p0, grid, derive_path_seed(base_seed, i));
        return summary(i, path);
    });
}

/// CSV with header `t,P`.
inline void write_intensity_csv(std::ostream& os, const IntensityPath& path) {
    os << "t,P\n";
    for (std::size_t k = 0; k < path.values.size(); ++k) {
        os << format_double(path.grid.time(k)) << ',' << format_double(path.values[k]) << '\n';
    }
}

}  // namespace siepi
