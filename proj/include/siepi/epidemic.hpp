#pragma once

#include <cmath>
#include <optional>
#include <ostream>
#include <vector>

#include "siepi/error.hpp"
#include "siepi/intervention.hpp"
#include "siepi/io.hpp"
#include "siepi/sde.hpp"

namespace siepi {

/// SI epidemic along one intensity path. H is the cumulative transmission
/// intensity, S the susceptible fraction; all sequences share `grid`.
struct EpidemicPath {
    TimeGrid grid;
    double s0 = 0.0;
    std::vector<double> P;
    std::vector<double> beta;  // phi(t) * P
    std::vector<double> H;
    std::vector<double> S;
};

/// phi evaluated at every grid time.
inline std::vector<double> intervention_on_grid(const InterventionSpec& spec, const TimeGrid& grid) {
    std::vector<double> phi(grid.size());
    for (std::size_t k = 0; k < phi.size(); ++k) phi[k] = intervention_eval(spec, grid.time(k));
    return phi;
}

/// Trapezoidal cumulative integral of phi_k P_k on the path grid, with phi
/// pre-evaluated on that grid. H[0] = 0 and H is nondecreasing because the
/// integrand is nonnegative.
inline std::vector<double> integrated_intensity(const IntensityPath& path, const std::vector<double>& phi) {
    detail::require(phi.size() == path.values.size(), "integrated_intensity: phi/grid size mismatch");
    const double half_dt = 0.5 * path.grid.dt;
    std::vector<double> H(path.values.size(), 0.0);
    double prev = phi[0] * path.values[0];
    for (std::size_t k = 1; k < H.size(); ++k) {
        const double cur = phi[k] * path.values[k];
        H[k] = H[k - 1] + half_dt * (prev + cur);
        prev = cur;
    }
    return H;
}

inline std::vector<double> integrated_intensity(const IntensityPath& path, const InterventionSpec& spec) {
    return integrated_intensity(path, intervention_on_grid(spec, path.grid));
}

/// H at the end of the path; bitwise equal to integrated_intensity(...).back().
inline double final_intensity(const IntensityPath& path, const std::vector<double>& phi) {
    detail::require(phi.size() == path.values.size(), "final_intensity: phi/grid size mismatch");
    const double half_dt = 0.5 * path.grid.dt;
    double H = 0.0;
    double prev = phi[0] * path.values[0];
    for (std::size_t k = 1; k < phi.size(); ++k) {
        const double cur = phi[k] * path.values[k];
        H += half_dt * (prev + cur);
        prev = cur;
    }
    return H;
}

/// S = 1 / (1 + (1/s0 - 1) e^H), the exact SI solution given H.
inline double susceptible_from_H(double s0, double H) {
    detail::require(s0 > 0.0 && s0 < 1.0, "susceptible_from_H: s0 must lie in (0, 1)");
    detail::require(H >= 0.0, "susceptible_from_H: H must be >= 0");
    // exp overflows to +inf for H > ~709, which yields exactly 0.
    return 1.0 / (1.0 + (1.0 - s0) / s0 * std::exp(H));
}

inline EpidemicPath epidemic_trajectory(const IntensityPath& path, const std::vector<double>& phi, double s0) {
    detail::require(s0 > 0.0 && s0 < 1.0, "epidemic_trajectory: s0 must lie in (0, 1)");
    EpidemicPath e;
    e.grid = path.grid;
    e.s0 = s0;
    e.P = path.values;
    e.H = integrated_intensity(path, phi);
    e.beta.resize(e.P.size());
    e.S.resize(e.H.size());
    for (std::size_t k = 0; k < e.P.size(); ++k) {
        e.beta[k] = phi[k] * e.P[k];
        e.S[k] = susceptible_from_H(s0, e.H[k]);
    }
    return e;
}

inline EpidemicPath epidemic_trajectory(const IntensityPath& path, const InterventionSpec& spec, double s0) {
    return epidemic_trajectory(path, intervention_on_grid(spec, path.grid), s0);
}

/// First grid time with S <= x, or nullopt if S stays above x on the grid.
/// Resolution is one grid step and the estimate is biased late by up to dt.
inline std::optional<double> hitting_time(const EpidemicPath& epi, double x) {
    detail::require(x > 0.0 && x < epi.s0, "hitting_time: x must lie in (0, s0)");
    for (std::size_t k = 0; k < epi.S.size(); ++k) {
        if (epi.S[k] <= x) return epi.grid.time(k);
    }
    return std::nullopt;
}

/// CSV with header `t,P,beta,H,S`.
inline void write_trajectory_csv(std::ostream& os, const EpidemicPath& epi) {
    os << "t,P,beta,H,S\n";
    for (std::size_t k = 0; k < epi.H.size(); ++k) {
        os << format_double(epi.grid.time(k)) << ',' << format_double(epi.P[k]) << ','
           << format_double(epi.beta[k]) << ',' << format_double(epi.H[k]) << ','
           << format_double(epi.S[k]) << '\n';
    }
}

}  // namespace siepi
