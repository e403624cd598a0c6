#include <gtest/gtest.h>

#include <cmath>
#include <stdexcept>

#include "polybm/levy.hpp"

using namespace polybm;

namespace {

DensePath parabola_path(double w, double eta, std::size_t m) {
    DensePath p;
    p.grid = uniform_grid(m);
    const IncrementPair pair{w, eta, 1.0};
    for (double u : p.grid) p.values.push_back(parabola_eval(0.0, pair, u));
    return p;
}

}  // namespace

TEST(CondMeanSqIntegral, Examples) {
    EXPECT_DOUBLE_EQ(cond_mean_sq_integral({0.0, 0.0, 1.0}), 1.0 / 15);
    EXPECT_DOUBLE_EQ(cond_mean_sq_integral({1.0, 0.0, 1.0}), 0.4);
    EXPECT_NEAR(cond_mean_sq_integral({0.7, -0.1, 1.0}), 0.172, 1e-15);
    EXPECT_NEAR(cond_mean_sq_integral({-1.2, 0.3, 1.0}), 0.29466666666666666, 1e-15);
    EXPECT_THROW(cond_mean_sq_integral({0.0, 0.0, 0.0}), std::invalid_argument);
}

TEST(CondMeanL, Examples) {
    EXPECT_DOUBLE_EQ(cond_mean_L({5.0, 0.0, 1.0}), 1.0 / 30);
    EXPECT_DOUBLE_EQ(cond_mean_L({0.0, 1.0, 1.0}), 19.0 / 30);
    EXPECT_THROW(cond_mean_L({0.0, 1.0, -1.0}), std::invalid_argument);
}

TEST(CondVarL, Examples) {
    EXPECT_DOUBLE_EQ(cond_var_L({0.0, 0.0, 1.0}), 11.0 / 25200);
    EXPECT_DOUBLE_EQ(cond_var_L({1.0, 0.0, 1.0}), 11.0 / 25200 + 1.0 / 720);
    const double w = 0.4, a = -0.7;
    EXPECT_NEAR(cond_var_L({w, a, 2.0}), 16 * (11.0 / 25200) + 8 * (w * w / 720 + a * a / 700), 1e-15);
    EXPECT_THROW(cond_var_L({0.0, 0.0, 0.0}), std::invalid_argument);
}

TEST(CondVarL, MinimumAtZeroAreas) {
    RandomStream rng(1, 0);
    for (int i = 0; i < 100; ++i) {
        const double h = 0.1 + std::abs(rng.normal());
        const IncrementPair p{rng.normal(), rng.normal(), h};
        const CondLevyEstimate est = cond_levy(p);
        EXPECT_GE(est.variance, 11.0 / 25200 * h * h * h * h);
        EXPECT_EQ(est.mean, cond_mean_L(p));
    }
}

TEST(CondVarL, MatchesIntegralOfWFormulation) {
    RandomStream rng(2, 0);
    for (int i = 0; i < 100; ++i) {
        const double w = rng.normal(), a = rng.normal();
        EXPECT_NEAR(4 * cond_var_L({w, a, 1.0}), 11.0 / 6300 + w * w / 180 + a * a / 175, 1e-14);
    }
}

TEST(CondMeanSqIntegral, UnconditionalMean) {
    RandomStream rng(3, 0);
    const int n = 1000000;
    double s = 0, ss = 0;
    for (int i = 0; i < n; ++i) {
        const double v = cond_mean_sq_integral(sample_pair(1.0, rng));
        s += v;
        ss += v * v;
    }
    const double mean = s / n;
    const double se = std::sqrt((ss / n - mean * mean) / n);
    EXPECT_NEAR(mean, 0.5, 3 * se);
}

// Expanding int W^2 through the integrals: int W^2 = 2 i_wwt, so
// E[int W^2 | W, H] = 2 E[i_wwt | W, H] with E[L | W, H] substituted.
TEST(CondMeanL, ConsistentWithSquareIntegral) {
    RandomStream rng(4, 0);
    for (int i = 0; i < 100; ++i) {
        const double h = 0.2 + std::abs(rng.normal());
        const IncrementPair p{rng.normal(std::sqrt(h)), rng.normal(std::sqrt(h / 12)), h};
        const double via_l = 2 * cond_mean_L(p) + h * p.w * p.w / 3 + h * p.w * p.h_area;
        EXPECT_NEAR(via_l, cond_mean_sq_integral(p), 1e-14);
    }
}

TEST(TripleIntegrals, Examples) {
    const TripleIntegrals t = triple_integrals_from_whl(1.0, 0.0, 0.0, 1.0);
    EXPECT_DOUBLE_EQ(t.i_wt, 0.5);
    EXPECT_DOUBLE_EQ(t.i_wwt, 1.0 / 6);
    EXPECT_THROW(triple_integrals_from_whl(1.0, 0.0, 0.0, 0.0), std::invalid_argument);
}

TEST(TripleIntegrals, AlgebraicIdentities) {
    RandomStream rng(5, 0);
    for (int i = 0; i < 1000; ++i) {
        const double h = 0.01 + std::abs(rng.normal());
        const double w = rng.normal(), a = rng.normal(), l = rng.normal();
        const TripleIntegrals t = triple_integrals_from_whl(w, a, l, h);
        const double scale = std::max({1.0, h * w * w, std::abs(l)});
        EXPECT_NEAR(t.i_wwt + t.i_wtw + t.i_tww, h * w * w / 2, 1e-14 * scale);
        EXPECT_NEAR(t.i_wwt - 2 * t.i_wtw + t.i_tww, 6 * l, 1e-14 * scale);
        EXPECT_NEAR(t.i_wt + t.i_tw, h * w, 1e-14 * std::max(1.0, std::abs(h * w)));
    }
}

TEST(DiscreteLevyAreas, StraightLine) {
    DensePath p;
    p.grid = uniform_grid(1000);
    p.values = p.grid;
    const LevyAreas a = discrete_levy_areas(p);
    EXPECT_NEAR(a.w, 1.0, 1e-15);
    EXPECT_NEAR(a.h_area, 0.0, 1e-12);
    EXPECT_NEAR(a.l_area, 0.0, 1e-12);
}

TEST(DiscreteLevyAreas, ParabolaRecoversItsAreas) {
    const LevyAreas a = discrete_levy_areas(parabola_path(0.0, 1.0, 10000));
    EXPECT_NEAR(a.h_area, 1.0, 1e-3);
    for (double w : {-0.8, 0.0, 1.3}) {
        for (double eta : {-0.5, 0.2, 1.0}) {
            const LevyAreas b = discrete_levy_areas(parabola_path(w, eta, 10000));
            EXPECT_NEAR(b.w, w, 1e-14);
            EXPECT_NEAR(b.h_area, eta, 1e-3);
            EXPECT_NEAR(b.l_area, 0.6 * eta * eta, 1e-3);
        }
    }
}

TEST(DiscreteLevyAreas, RejectsCoarseOrUnevenGrids) {
    DensePath p;
    p.grid = uniform_grid(999);
    p.values.assign(1000, 0.0);
    EXPECT_THROW(discrete_levy_areas(p), std::invalid_argument);
    p.grid = uniform_grid(1000);
    p.grid[500] += 1e-4;
    p.values.assign(1001, 0.0);
    EXPECT_THROW(discrete_levy_areas(p), std::invalid_argument);
}

// Integrals of a random-walk path through (W, H, L) agree with their direct
// discretisations; discretisation error only.
TEST(DiscreteLevyAreas, PathwiseIdentitiesOnRandomPaths) {
    RandomStream rng(6, 0);
    for (int trial = 0; trial < 10; ++trial) {
        const DensePath path = sample_brownian_path(20000, rng);
        const TripleIntegrals direct = discrete_triple_integrals(path);
        const LevyAreas a = discrete_levy_areas(path);
        const TripleIntegrals via = triple_integrals_from_whl(a.w, a.h_area, a.l_area, 1.0);
        EXPECT_NEAR(via.i_wt, direct.i_wt, 1e-12);
        EXPECT_NEAR(via.i_tw, direct.i_tw, 1e-3);
        const double scale = std::max({std::abs(direct.i_wwt), std::abs(direct.i_wtw), std::abs(direct.i_tww), 0.1});
        EXPECT_NEAR(via.i_wwt, direct.i_wwt, 0.02 * scale);
        EXPECT_NEAR(via.i_wtw, direct.i_wtw, 0.02 * scale);
        EXPECT_NEAR(via.i_tww, direct.i_tww, 0.02 * scale);
    }
}
