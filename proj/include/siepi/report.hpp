#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

namespace siepi {

/// Summary of an ensemble of final epidemic sizes.
struct RiskReport {
    double mean = 0.0;
    double variance = 0.0;  // unbiased; 0 for a single sample
    double q95 = 0.0;       // nearest-rank: element ceil(0.95 n) of the ascending sort
    double max = 0.0;
    std::size_t n = 0;
};

/// 1-based nearest-rank index ceil(p n / 100) for integer percent p.
inline std::size_t nearest_rank(std::size_t n, std::size_t percent) {
    return std::max<std::size_t>(1, (percent * n + 99) / 100);
}

inline RiskReport risk_report(std::span<const double> samples) {
    if (samples.empty()) throw std::invalid_argument("risk_report: empty sample");
    std::vector<double> sorted(samples.begin(), samples.end());
    std::sort(sorted.begin(), sorted.end());

    RiskReport r;
    r.n = sorted.size();
    // two-pass mean / variance
    double sum = 0.0;
    for (double x : sorted) sum += x;
    r.mean = sum / static_cast<double>(r.n);
    if (r.n > 1) {
        double ss = 0.0;
        for (double x : sorted) ss += (x - r.mean) * (x - r.mean);
        r.variance = ss / static_cast<double>(r.n - 1);
    }
    r.q95 = sorted[nearest_rank(r.n, 95) - 1];
    r.max = sorted.back();
    return r;
}

/// Two-sample Kolmogorov-Smirnov statistic sup_x |F_a(x) - F_b(x)|.
inline double ks_distance(std::span<const double> a, std::span<const double> b) {
    if (a.empty() || b.empty()) throw std::invalid_argument("ks_distance: empty sample");
    std::vector<double> xa(a.begin(), a.end());
    std::vector<double> xb(b.begin(), b.end());
    std::sort(xa.begin(), xa.end());
    std::sort(xb.begin(), xb.end());
    const double na = static_cast<double>(xa.size());
    const double nb = static_cast<double>(xb.size());
    std::size_t i = 0, j = 0;
    double d = 0.0;
    while (i < xa.size() && j < xb.size()) {
        // step past every copy of the smaller value in both samples
        const double v = std::min(xa[i], xb[j]);
        while (i < xa.size() && xa[i] == v) ++i;
        while (j < xb.size() && xb[j] == v) ++j;
        d = std::max(d, std::abs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
    }
    return d;
}

}  // namespace siepi
