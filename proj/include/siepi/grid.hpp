#pragma once

#include <cmath>
#include <cstddef>

#include "siepi/error.hpp"

namespace siepi {

inline constexpr double kDefaultStep = 5e-3;

/// Uniform grid t_k = k * dt, k = 0..n_steps, with t_{n_steps} == t_end.
struct TimeGrid {
    double t_end = 0.0;
    double dt = 0.0;
    std::size_t n_steps = 0;
    /// Set when t_end / requested_dt was not an integer and the step was
    /// stretched to t_end / round(t_end / requested_dt).
    bool step_adjusted = false;

    double time(std::size_t k) const {
        return k == n_steps ? t_end : static_cast<double>(k) * dt;
    }
    std::size_t size() const { return n_steps + 1; }
};

inline TimeGrid make_grid(double t_end, double dt = kDefaultStep) {
    detail::require(std::isfinite(t_end) && t_end > 0.0, "grid: t_end must be finite and > 0");
    detail::require(std::isfinite(dt) && dt > 0.0, "grid: dt must be finite and > 0");
    const double ratio = t_end / dt;
    const auto n = static_cast<std::size_t>(std::llround(ratio));
    detail::require(n >= 1, "grid: t_end / dt rounds to zero steps");
    TimeGrid g;
    g.t_end = t_end;
    g.n_steps = n;
    g.dt = t_end / static_cast<double>(n);
    g.step_adjusted = std::abs(ratio - static_cast<double>(n)) > 1e-9 * ratio;
    return g;
}

}  // namespace siepi
