#include <gtest/gtest.h>

#include <algorithm>
#include <array>
#include <cstring>
#include <cmath>
#include <set>
#include <sstream>

#include "oracles.hpp"
#include "siepi/sde.hpp"

using namespace siepi;

TEST(Seeds, DerivationIsDeterministicAndSensitive) {
    const std::uint64_t s = 12345;
    EXPECT_EQ(derive_path_seed(s, 7), derive_path_seed(s, 7));
    EXPECT_NE(derive_path_seed(s, 0), derive_path_seed(s, 1));
    EXPECT_NE(derive_path_seed(s, 7), derive_path_seed(s + 1, 7));
    std::set<std::uint64_t> seen;
    for (std::uint64_t i = 0; i < 100000; ++i) seen.insert(derive_path_seed(s, i));
    EXPECT_EQ(seen.size(), 100000u);
}

TEST(Seeds, NormalStreamMoments) {
    NormalStream z(99);
    std::vector<double> xs(200000);
    for (auto& x : xs) x = z();
    const auto ms = oracle::mean_se(xs);
    EXPECT_NEAR(ms.mean, 0.0, 4.0 * ms.se);
    double v = 0.0;
    for (double x : xs) v += x * x;
    EXPECT_NEAR(v / xs.size(), 1.0, 0.01);
}

TEST(Grid, RoundsToNearestStep) {
    const auto g = make_grid(15.0, 5e-3);
    EXPECT_EQ(g.n_steps, 3000u);
    EXPECT_FALSE(g.step_adjusted);
    EXPECT_EQ(g.time(g.n_steps), 15.0);
    EXPECT_NEAR(g.time(1000), 5.0, 1e-12);

    const auto odd = make_grid(1.0, 0.3);
    EXPECT_EQ(odd.n_steps, 3u);
    EXPECT_TRUE(odd.step_adjusted);
    EXPECT_DOUBLE_EQ(odd.dt, 1.0 / 3.0);
    EXPECT_EQ(odd.time(3), 1.0);

    EXPECT_THROW(make_grid(0.0, 0.1), DomainError);
    EXPECT_THROW(make_grid(1.0, 0.0), DomainError);
    EXPECT_THROW(make_grid(0.01, 1.0), DomainError);
}

TEST(Sde, ZeroVolatilityJacobiFollowsMeanOde) {
    const ProcessParams p = validate_jacobi(2.0, 0.4, 0.0, 1.0);
    const auto path = simulate_path(p, 0.5, make_grid(1.0, 5e-3), 1);
    EXPECT_EQ(path.values.size(), 201u);
    EXPECT_EQ(path.values.front(), 0.5);
    EXPECT_NEAR(path.values.back(), 0.4135335283236613, 1e-3);
}

TEST(Sde, SameSeedSameBits) {
    const ProcessParams p = validate_cir(2.0, 0.4, 0.3);
    const auto g = make_grid(15.0);
    const auto a = simulate_path(p, 0.5, g, 42);
    const auto b = simulate_path(p, 0.5, g, 42);
    ASSERT_EQ(a.values.size(), b.values.size());
    EXPECT_EQ(0, std::memcmp(a.values.data(), b.values.data(), a.values.size() * sizeof(double)));
    const auto c = simulate_path(p, 0.5, g, 43);
    EXPECT_NE(a.values, c.values);
}

TEST(Sde, RejectsInitialStateOutsideStateSpace) {
    EXPECT_THROW(simulate_path(validate_jacobi(2.0, 0.4, 0.3, 1.0), 1.2, make_grid(1.0), 1), DomainError);
    EXPECT_THROW(simulate_path(validate_cir(2.0, 0.4, 0.3), -0.5, make_grid(1.0), 1), DomainError);
    EXPECT_THROW(simulate_ensemble(validate_cir(2.0, 0.4, 0.3), 0.5, make_grid(1.0), 1, 0), DomainError);
}

TEST(SdeProperty, PathsStayInStateSpace) {
    const auto g = make_grid(15.0);
    const ProcessParams cir = validate_cir(2.0, 0.4, 0.3);
    const ProcessParams rough_cir = validate_cir(1.0, 0.1, 1.0);  // Feller violated
    const ProcessParams jac = validate_jacobi(2.0, 0.4, 0.3, 1.0);
    const ProcessParams rough_jac = validate_jacobi(0.5, 0.3, 1.5, 0.5);  // boundary attainable
    for (const ProcessParams& p : {cir, rough_cir}) {
        for (const auto& path : simulate_ensemble(p, 0.5, g, 2024, 200)) {
            EXPECT_GE(*std::min_element(path.values.begin(), path.values.end()), 0.0);
        }
    }
    for (const ProcessParams& p : {jac, rough_jac}) {
        const double a = std::get<JacobiParams>(p).a;
        for (const auto& path : simulate_ensemble(p, 0.3, g, 2024, 200)) {
            const auto [lo, hi] = std::minmax_element(path.values.begin(), path.values.end());
            EXPECT_GE(*lo, 0.0);
            EXPECT_LE(*hi, a);
        }
    }
}

TEST(Sde, EnsembleIndependentOfWorkerCount) {
    const ProcessParams p = validate_jacobi(2.0, 0.4, 0.3, 1.0);
    const auto g = make_grid(2.0);
    const auto one = simulate_ensemble(p, 0.5, g, 77, 50, 1);
    const auto many = simulate_ensemble(p, 0.5, g, 77, 50, 4);
    ASSERT_EQ(one.size(), 50u);
    for (std::size_t i = 0; i < one.size(); ++i) {
        EXPECT_EQ(one[i].seed, derive_path_seed(77, i));
        EXPECT_EQ(one[i].values, many[i].values);
    }
}

TEST(Sde, IntensityCsvHeader) {
    const auto path = simulate_path(validate_cir(2.0, 0.4, 0.3), 0.5, make_grid(0.01, 5e-3), 3);
    std::ostringstream os;
    write_intensity_csv(os, path);
    const auto s = os.str();
    EXPECT_EQ(s.rfind("t,P\n0,0.5\n0.005,", 0), 0u);
    EXPECT_EQ(std::count(s.begin(), s.end(), '\n'), 4);
}

// Weak convergence: sample mean of P_t against the exact conditional mean.
TEST(SdeStatistics, SampleMeanMatchesExactMean) {
    const ProcessParams cir = validate_cir(2.0, 0.4, 0.3);
    const ProcessParams jac = validate_jacobi(2.0, 0.4, 0.3, 1.0);
    const auto g = make_grid(5.0);
    for (const ProcessParams& p : {cir, jac}) {
        const auto samples = map_ensemble(p, 0.5, g, 11, 10000, [&](std::size_t, const IntensityPath& path) {
            return std::array<double, 3>{path.values[100], path.values[200], path.values[1000]};
        });
        const double times[3] = {0.5, 1.0, 5.0};
        for (int j = 0; j < 3; ++j) {
            std::vector<double> xs;
            for (const auto& s : samples) xs.push_back(s[j]);
            const auto ms = oracle::mean_se(xs);
            EXPECT_NEAR(ms.mean, mean_at(p, 0.5, times[j]), 3.0 * ms.se) << kind_name(p) << " t=" << times[j];
        }
    }
}

TEST(SdeStatistics, StationaryVarianceAfterRelaxation) {
    const ProcessParams cir = validate_cir(2.0, 0.4, 0.3);
    const ProcessParams jac = validate_jacobi(2.0, 0.4, 0.3, 1.0);
    for (const ProcessParams& p : {cir, jac}) {
        const auto g = make_grid(10.0 / reversion_rate(p));
        const auto xs = map_ensemble(p, 0.5, g, 5, 100000,
                                     [](std::size_t, const IntensityPath& path) { return path.values.back(); });
        const auto ms = oracle::mean_se(xs);
        const double var = ms.se * ms.se * static_cast<double>(xs.size());
        const double target = stationary_moments(p).variance;
        EXPECT_NEAR(var / target, 1.0, 0.10) << kind_name(p);
    }
}
