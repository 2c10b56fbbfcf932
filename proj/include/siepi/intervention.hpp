#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "siepi/error.hpp"

namespace siepi {

/// phi(t) = 1
struct NoIntervention {};

/// phi(t) = exp(-alpha t)
struct ExponentialDecay {
    double alpha = 0.0;
};

/// Piecewise-linear phi through (time, value) knots, constant before the
/// first and after the last knot. Build with make_table_intervention.
struct TabulatedIntervention {
    std::vector<std::pair<double, double>> knots;
};

using InterventionSpec = std::variant<NoIntervention, ExponentialDecay, TabulatedIntervention>;

inline ExponentialDecay make_exponential_intervention(double alpha) {
    detail::require(std::isfinite(alpha) && alpha > 0.0, "intervention: alpha must be finite and > 0");
    return ExponentialDecay{alpha};
}

inline TabulatedIntervention make_table_intervention(std::vector<std::pair<double, double>> knots) {
    detail::require(!knots.empty(), "intervention: table needs at least one knot");
    for (std::size_t i = 0; i < knots.size(); ++i) {
        const auto [t, v] = knots[i];
        detail::require(std::isfinite(t) && t >= 0.0,
                        "intervention: knot " + std::to_string(i) + " time must be finite and >= 0");
        detail::require(std::isfinite(v) && v >= 0.0,
                        "intervention: knot " + std::to_string(i) + " value must be finite and >= 0");
        if (i > 0) {
            detail::require(t > knots[i - 1].first,
                            "intervention: knot times must be strictly increasing (knot " +
                                std::to_string(i) + ")");
        }
    }
    return TabulatedIntervention{std::move(knots)};
}

inline double intervention_eval(const InterventionSpec& spec, double t) {
    detail::require(t >= 0.0, "intervention: t must be >= 0");
    struct Eval {
        double t;
        double operator()(const NoIntervention&) const { return 1.0; }
        double operator()(const ExponentialDecay& e) const { return std::exp(-e.alpha * t); }
        double operator()(const TabulatedIntervention& tab) const {
            const auto& k = tab.knots;
            if (t <= k.front().first) return k.front().second;
            if (t >= k.back().first) return k.back().second;
            auto hi = std::upper_bound(k.begin(), k.end(), t,
                                       [](double x, const auto& knot) { return x < knot.first; });
            auto lo = hi - 1;
            const double w = (t - lo->first) / (hi->first - lo->first);
            return lo->second + w * (hi->second - lo->second);
        }
    };
    return std::visit(Eval{t}, spec);
}

inline std::string kind_name(const InterventionSpec& spec) {
    switch (spec.index()) {
        case 0: return "constant";
        case 1: return "exponential";
        default: return "table";
    }
}

}  // namespace siepi
