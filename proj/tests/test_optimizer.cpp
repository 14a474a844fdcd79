#include <gtest/gtest.h>

#include <cmath>
#include <cstdlib>
#include <numbers>

#include "oamband/optimizer.hpp"

using namespace oamband;

TEST(Optimize, GeometricUnitCase) {
    const double tol = 1e-6;
    const auto r = optimize_gamma(std::numbers::pi / 4.0, Objective::geometric_combined, tol);
    EXPECT_TRUE(r.converged);
    EXPECT_FALSE(r.at_boundary);
    EXPECT_DOUBLE_EQ(r.gamma_opt_formula, 1.0);
    EXPECT_NEAR(r.gamma_star, 1.0, 0.05);
    EXPECT_LE(r.bracket_hi / r.bracket_lo, 1.0 + 2.0 * tol);
}

TEST(Optimize, GeometricMatchesFormula) {
    const auto r = optimize_gamma(0.001, Objective::geometric_combined, 1e-6);
    EXPECT_NEAR(r.gamma_star, 5.295, 0.05 * 5.295);
    EXPECT_NEAR(r.k_star, k_gen(0.001) / std::sqrt(2.0), 0.01 * k_gen(0.001));
}

TEST(Optimize, GoldenSectionAgreesWithDenseGrid) {
    for (double lr : {1e-5, 1e-3, 0.1, 2.0}) {
        const double tol = 1e-5;
        const auto r = optimize_gamma(lr, Objective::geometric_combined, tol);
        double best_g = 0.0, best_k = -1.0;
        const int n = 10000;
        // Dense grid on log gamma, narrowed to the neighbourhood of the optimum.
        const double lo = std::log(r.gamma_opt_formula / 2.0), hi = std::log(r.gamma_opt_formula * 2.0);
        for (int i = 0; i <= n; ++i) {
            const double g = std::exp(lo + (hi - lo) * i / n);
            const double k = k_combined(k_ip(g), k_ff(g, lr));
            if (k > best_k) best_k = k, best_g = g;
        }
        const double grid_step = std::exp((hi - lo) / n) - 1.0;
        EXPECT_NEAR(r.gamma_star, best_g, (tol + grid_step) * best_g) << "lr=" << lr;
        EXPECT_GE(r.k_star, best_k * (1.0 - 1e-9));
    }
}

TEST(Optimize, AnalyticObjective) {
    const auto r = optimize_gamma(0.001, Objective::analytic_schmidt, 1e-4);
    EXPECT_TRUE(r.converged);
    EXPECT_FALSE(r.at_boundary);
    EXPECT_NEAR(r.gamma_star, 5.295, 0.2 * 5.295);
    // Regression values from this implementation.
    EXPECT_NEAR(r.gamma_star, 5.32987, 2e-3);
    EXPECT_NEAR(r.k_star, 76.11207, 1e-4);
    // The peak Schmidt number is below the generation bandwidth, and above
    // half of it.
    EXPECT_LT(r.k_star, k_gen(0.001));
    EXPECT_GT(r.k_star, 0.5 * k_gen(0.001));
}

TEST(Optimize, BoundaryWarningAndErrors) {
    OptimizeOptions opts;
    opts.gamma_lo = 0.1;
    opts.gamma_hi = 2.0;
    const auto r = optimize_gamma(0.001, Objective::geometric_combined, 1e-5, opts);
    EXPECT_TRUE(r.at_boundary);
    EXPECT_FALSE(r.warning.empty());
    EXPECT_THROW(optimize_gamma(0.0, Objective::geometric_combined, 1e-4), ValidationError);
    EXPECT_THROW(optimize_gamma(0.1, Objective::geometric_combined, 0.0), ValidationError);
}

TEST(Sweep, GridEndpointsAreExact) {
    for (auto [lo, hi, ppd] : {std::tuple{1e-4, 1.0, 10}, std::tuple{3e-5, 0.7, 7}, std::tuple{0.1, 0.2, 1}}) {
        const auto g = log_grid(lo, hi, ppd);
        EXPECT_EQ(g.front(), lo);
        EXPECT_EQ(g.back(), hi);
        EXPECT_GE(static_cast<double>(g.size() - 1), std::log10(hi / lo) * ppd - 1e-9);
        for (std::size_t i = 1; i < g.size(); ++i) EXPECT_GT(g[i], g[i - 1]);
    }
    const auto s = sweep_l_r({3.0}, 1e-4, 1.0, 10, {false, true});
    EXPECT_EQ(s.points.front().l_r, 1e-4);
    EXPECT_EQ(s.points.back().l_r, 1.0);
    EXPECT_EQ(s.points.size(), 41u);
    const auto t = sweep_gamma({0.001}, 1.0, 12.0, 45, {false, true});
    EXPECT_EQ(t.points.front().gamma, 1.0);
    EXPECT_EQ(t.points.back().gamma, 12.0);
}

TEST(Sweep, LengthSweepShape) {
    const auto s = sweep_l_r({3.0, 5.0, 7.0}, 1e-4, 1.0, 10, {});
    EXPECT_TRUE(sweep_is_ordered(s));
    EXPECT_EQ(s.curve_keys(), (std::vector<double>{3.0, 5.0, 7.0}));
    EXPECT_EQ(s.generated_by, GeneratedBy::both);
    for (const auto& p : s.points) {
        const auto& r = p.report;
        ASSERT_TRUE(r.schmidt_k && r.k_geometric);
        EXPECT_GT(r.k_gen, *r.k_geometric);
        EXPECT_GT(r.k_gen, *r.schmidt_k);
        EXPECT_LT(std::abs(*r.schmidt_k - *r.k_geometric) / *r.schmidt_k, 0.25) << p.gamma << " " << p.l_r;
    }
}

TEST(Sweep, SinglePoint) {
    const auto s = sweep_l_r({2.0}, 0.001, 0.001 * (1.0 + 1e-12), 1, {});
    ASSERT_GE(s.points.size(), 1u);
    EXPECT_NEAR(*s.points.front().report.schmidt_k, 17.0, 1.7);
}

TEST(Sweep, GammaSweepOrderedByLength) {
    const auto s = sweep_gamma({0.001, 0.002, 0.003}, 1.0, 12.0, 45, {});
    EXPECT_TRUE(sweep_is_ordered(s));
    const auto keys = s.curve_keys();
    ASSERT_EQ(keys.size(), 3u);
    EXPECT_EQ(s.metadata.front().second, "1.5,4");
    for (std::size_t c = 1; c < keys.size(); ++c) {
        const auto upper = s.curve(keys[c - 1]);
        const auto lower = s.curve(keys[c]);
        for (std::size_t i = 0; i < upper.size(); ++i) {
            EXPECT_GT(*upper[i].report.schmidt_k, *lower[i].report.schmidt_k);
            EXPECT_GT(*upper[i].report.k_geometric, *lower[i].report.k_geometric);
        }
    }
}

TEST(Sweep, DeterministicAcrossThreadCounts) {
    auto run = [] { return sweep_gamma({0.001, 0.003}, 1.0, 8.0, 15, {}); };
    setenv("OAMBAND_THREADS", "1", 1);
    const auto a = run();
    setenv("OAMBAND_THREADS", "4", 1);
    const auto b = run();
    unsetenv("OAMBAND_THREADS");
    ASSERT_EQ(a.points.size(), b.points.size());
    for (std::size_t i = 0; i < a.points.size(); ++i) {
        EXPECT_EQ(a.points[i].l_r, b.points[i].l_r);
        EXPECT_EQ(a.points[i].gamma, b.points[i].gamma);
        EXPECT_EQ(*a.points[i].report.schmidt_k, *b.points[i].report.schmidt_k);
        EXPECT_EQ(*a.points[i].report.fwhm, *b.points[i].report.fwhm);
        EXPECT_EQ(*a.points[i].report.k_geometric, *b.points[i].report.k_geometric);
    }
}

TEST(Sweep, RejectsBadRanges) {
    EXPECT_THROW(sweep_l_r({3.0}, 0.0, 1.0, 10, {}), ValidationError);
    EXPECT_THROW(sweep_l_r({3.0}, 1.0, 0.1, 10, {}), ValidationError);
    EXPECT_THROW(sweep_l_r({3.0}, 0.1, 1.0, 0, {}), ValidationError);
    EXPECT_THROW(sweep_l_r({-3.0}, 0.1, 1.0, 10, {}), ValidationError);
    EXPECT_THROW(sweep_gamma({0.001}, 1.0, 12.0, 1, {}), ValidationError);
    EXPECT_THROW(sweep_gamma({0.001}, 1.0, 12.0, 10, {false, false}), ValidationError);
}
