#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "menger/appendix.hpp"
#include "menger/builtin_sets.hpp"
#include "menger/claims.hpp"
#include "menger/curvature.hpp"
#include "menger/energy.hpp"

using namespace menger;

namespace {

constexpr double kPi = std::numbers::pi;

QuadratureConfig cfg() { return QuadratureConfig{}; }

// sup over a dense grid of z in X of kappa(x, y, z)
double kappa_i_grid(const SegmentSet<2>& X, const Point2& x, const Point2& y, int per_segment) {
    double best = 0.0;
    for (const auto& g : X.segments())
        for (int k = 0; k <= per_segment; ++k) best = std::max(best, kappa(x, y, g.at(g.length * k / per_segment)));
    return best;
}

SegmentSet<2> tilted_polyline() {
    return make_segment_set<2>({{{-1.1, 2.53}, {-0.2, 2.28}}, {{-0.2, 2.28}, {-0.45, 1.36}}, {{-0.45, 1.36}, {0.17, 0.77}}});
}

SegmentSet<2> dilate(const SegmentSet<2>& X, double lam) {
    std::vector<std::pair<Point2, Point2>> s;
    for (const auto& g : X.segments()) s.emplace_back(lam * g.p, lam * g.q);
    return make_segment_set<2>(s);
}

}  // namespace

TEST(IntermediateCurvature, EFlatPairs) {
    const auto E = set_E();
    for (double t : {0.1, 0.3, 0.8})
        for (double u : {0.05, 0.5, 0.9}) {
            if (t == u) continue;
            const Point2 x{-t, 0}, y{-u, 0};
            const double k = kappa_i_at(E, x, y);
            EXPECT_LE(k, 2.0 / (t + u) * (1 + 1e-12));
            EXPECT_NEAR(k, kappa_i_grid(E, x, y, 20000), 1e-3 * k);
        }
}

TEST(IntermediateCurvature, ClosedFormMatchesSampledSearch) {
    std::mt19937_64 rng(9);
    const auto X = tilted_polyline();
    std::uniform_real_distribution<double> U(0.0, 1.0);
    for (int n = 0; n < 300; ++n) {
        const auto& a = X[rng() % X.size()];
        const auto& b = X[rng() % X.size()];
        const Point2 x = a.at(a.length * U(rng)), y = b.at(b.length * U(rng));
        if (coincident(x, y)) continue;
        const double fast = kappa_i_at(X, x, y), slow = kappa_i_at_sampled(X, x, y);
        EXPECT_NEAR(fast, slow, 1e-8 * std::max(1.0, fast));
    }
}

TEST(IntermediateCurvature, SingleSegmentVanishes) {
    const auto S = set_segment();
    EXPECT_EQ(kappa_i_at(S, Point2{0.2, 0}, Point2{0.7, 0}), 0.0);
}

TEST(GlobalCurvature, EArms) {
    const auto E = set_E();
    for (double t : {0.05, 0.25, 0.5, 1.0}) {
        EXPECT_NEAR(kappa_G_at(E, Point2{t, 0}), 2.0 / t, 1e-9 * 2.0 / t);
        EXPECT_NEAR(kappa_G_at(E, Point2{0, t}), 2.0 / t, 1e-9 * 2.0 / t);
    }
    EXPECT_EQ(kappa_G_at(E, Point2{0, 0}), kInf);
    EXPECT_NEAR(kappa_G_bruteforce(E, Point2{0.5, 0}, 600), 4.0, 0.05);
}

TEST(GlobalCurvature, TiltedPolylineMatchesBruteForce) {
    const auto X = tilted_polyline();
    const auto& g = X[0];
    for (int k = 0; k < 6; ++k) {
        const Point2 x = g.at(g.length * (k + 0.5) / 6);
        const double G = kappa_G_at(X, x), brute = kappa_G_bruteforce(X, x, 400);
        EXPECT_GE(G, brute * (1 - 1e-12));
        EXPECT_LE(G, brute * 1.02);
    }
}

TEST(GlobalCurvature, ParallelSegments) {
    // two parallel unit segments at distance d; the oracle maximizes over a fine grid of pairs
    const double d = 0.3;
    const auto X = make_segment_set<2>({{{0, 0}, {1, 0}}, {{0, d}, {1, d}}});
    const Point2 x{0.5, 0};
    const double G = kappa_G_at(X, x);
    EXPECT_GE(G, kappa_G_bruteforce(X, x, 500) * (1 - 1e-12));
    EXPECT_LE(G, kappa_G_bruteforce(X, x, 500) * 1.01);
    EXPECT_EQ(kappa_G_at(set_segment(), Point2{0.3, 0}), 0.0);
}

TEST(Thickness, Examples) {
    const auto tE = thickness(set_E());
    EXPECT_EQ(tE.value, 0.0);
    EXPECT_TRUE(tE.corner_witness);
    EXPECT_LE(tE.witness_radius, QuadratureConfig{}.abs_tol);
    EXPECT_EQ(thickness(set_segment()).value, kInf);
    EXPECT_NEAR(discrete_thickness(polygon_vertices(64)), 1.0, 1e-12);
}

TEST(Thickness, CornerTriplesShrinkLinearly) {
    for (double t : {1e-1, 1e-2, 1e-3, 1e-4})
        EXPECT_LE(circumradius_points(Point2{t, 0}, Point2{0, t}, Point2{t / 2, 0}), t);
}

TEST(EnergyU, EExactValue) {
    for (double p : {0.25, 0.5, 0.75}) {
        const auto e = energy_U(set_E(), EnergyParams{1.0, p}, cfg());
        const double exact = 3.0 * std::pow(2.0, p) / (1.0 - p);
        EXPECT_TRUE(e.converged);
        EXPECT_FALSE(e.diverged);
        EXPECT_NEAR(e.value, exact, std::max(e.error_bound, 1e-4 * exact));
        EXPECT_LE(e.value, 6.0 / (1.0 - p));
    }
}

TEST(EnergyI, EWithinBound) {
    for (double p : {1.25, 1.5, 1.75}) {
        const auto e = energy_I(set_E(), EnergyParams{1.0, p}, cfg());
        EXPECT_TRUE(e.converged);
        EXPECT_LE(e.rel_error(), 0.02);
        EXPECT_LE(e.value, closed_form_bound(ClosedFormBound::I_of_E, BoundArgs{.p = p}));
    }
}

TEST(EnergyM, EMatchesOneDimensionalOracle) {
    const auto e = energy_M(set_E(), EnergyParams{1.0, 2.0}, cfg());
    const double oracle = 18.0 * claims_detail::F_E1E1E2_oracle();
    EXPECT_NEAR(oracle, 96.0533459, 1e-6);
    EXPECT_NEAR(e.value, oracle, e.error_bound + 1e-9);
    EXPECT_LE(e.rel_error(), 0.05);
    const auto F = functional_F_p(set_E_part(1), set_E_part(1), set_E_part(2), 2.0, cfg());
    EXPECT_NEAR(F.value, oracle / 18.0, F.error_bound + 1e-9);
}

TEST(Energies, SingleSegmentVanishes) {
    for (auto fam : {EnergyFamily::U, EnergyFamily::I, EnergyFamily::M}) {
        const auto e = energy(set_segment(), fam, EnergyParams{1.0, 2.0}, cfg());
        EXPECT_EQ(e.value, 0.0);
        EXPECT_EQ(e.error_bound, 0.0);
    }
}

TEST(Energies, ScaleCovariance) {
    // dilation by lam multiplies an energy with d integrations by lam^(d - p)
    const auto X = tilted_polyline();
    const double lam = 2.0;
    const auto Y = dilate(X, lam);
    struct Case {
        EnergyFamily fam;
        double p;
        int d;
    };
    for (const Case c : {Case{EnergyFamily::U, 0.5, 1}, Case{EnergyFamily::I, 1.0, 2}, Case{EnergyFamily::M, 1.5, 3}}) {
        const auto a = energy(X, c.fam, EnergyParams{1.0, c.p}, cfg());
        const auto b = energy(Y, c.fam, EnergyParams{1.0, c.p}, cfg());
        const double f = std::pow(lam, c.d - c.p);
        EXPECT_NEAR(b.value, f * a.value, b.error_bound + f * a.error_bound + 1e-12) << to_string(c.fam);
    }
}

TEST(Energies, MonteCarloAgrees) {
    QuadratureConfig c = cfg();
    c.mc_samples = 400000;
    for (auto fam : {EnergyFamily::I, EnergyFamily::M}) {
        const auto q = energy(tilted_polyline(), fam, EnergyParams{1.0, 1.0}, c);
        const auto m = energy_monte_carlo(tilted_polyline(), fam, EnergyParams{1.0, 1.0}, c);
        EXPECT_EQ(m.method, EnergyMethod::MonteCarlo);
        EXPECT_NEAR(m.value, q.value, m.error_bound + q.error_bound) << to_string(fam);
    }
}

TEST(Energies, Deterministic) {
    QuadratureConfig c = cfg();
    c.mc_samples = 20000;
    const auto a = energy_M(set_E(), EnergyParams{1.0, 2.0}, c);
    const auto b = energy_M(set_E(), EnergyParams{1.0, 2.0}, c);
    EXPECT_EQ(a.value, b.value);
    EXPECT_EQ(a.error_bound, b.error_bound);
    const auto m1 = energy_monte_carlo(set_E(), EnergyFamily::M, EnergyParams{1.0, 2.0}, c);
    const auto m2 = energy_monte_carlo(set_E(), EnergyFamily::M, EnergyParams{1.0, 2.0}, c);
    EXPECT_EQ(m1.value, m2.value);
}

TEST(Energies, PointwiseChain) {
    // kappa(x, y, z) <= kappa_i(x, y) <= kappa_G(x) for points of X
    const auto X = tilted_polyline();
    std::mt19937_64 rng(21);
    std::uniform_real_distribution<double> U(0.02, 0.98);
    for (int n = 0; n < 100; ++n) {
        const auto& a = X[rng() % 3];
        const auto& b = X[rng() % 3];
        const auto& c = X[rng() % 3];
        const Point2 x = a.at(a.length * U(rng)), y = b.at(b.length * U(rng)), z = c.at(c.length * U(rng));
        if (coincident(x, y)) continue;
        const double ki = kappa_i_at(X, x, y);
        EXPECT_LE(kappa(x, y, z), ki * (1 + 1e-12) + 1e-12);
        EXPECT_LE(ki, kappa_G_at(X, x) * (1 + 1e-9));
    }
}

TEST(EnergyOnBall, MonotoneInRadius) {
    const std::vector<double> radii{1.0, 0.5, 0.25, 0.125};
    const auto seq = energy_on_ball(set_E(), EnergyFamily::M, EnergyParams{1.0, 2.0}, cfg(), Point2{0, 0}, radii);
    for (std::size_t k = 1; k < seq.size(); ++k) EXPECT_LE(seq[k].value, seq[k - 1].value + seq[k - 1].error_bound);
    const auto zero = energy_on_ball(set_segment(), EnergyFamily::M, EnergyParams{1.0, 2.0}, cfg(), Point2{0.5, 0}, radii);
    for (const auto& e : zero) EXPECT_EQ(e.value, 0.0);
    EXPECT_THROW(energy_on_ball(set_E(), EnergyFamily::M, EnergyParams{1.0, 2.0}, cfg(), Point2{0, 0}, {0.5, 1.0}),
                 std::invalid_argument);
}

TEST(EnergyOnBall, PlateauAtThresholdAndDecayBelow) {
    std::vector<double> radii;
    for (int k = 1; k <= 10; ++k) radii.push_back(std::ldexp(1.0, -k));
    const auto crit = energy_on_ball(set_E(), EnergyFamily::M, EnergyParams{1.0, 3.0}, cfg(), Point2{0, 0}, radii);
    EXPECT_TRUE(ball_sequence_plateau(crit, 6, 0.5));
    EXPECT_TRUE(crit.back().diverged);
    const auto sub = energy_on_ball(set_E(), EnergyFamily::M, EnergyParams{1.0, 2.0}, cfg(), Point2{0, 0}, radii);
    EXPECT_FALSE(ball_sequence_plateau(sub, 6, 0.5));
    // M_2 of a corner scales like r^(3 - 2)
    EXPECT_NEAR(sub.front().value / sub.back().value, 512.0, 1e-6 * 512.0 + 1.0);
}

TEST(Params, Validation) {
    EXPECT_THROW(energy_U(set_E(), EnergyParams{1.0, -1.0}, cfg()), std::invalid_argument);
    QuadratureConfig bad = cfg();
    bad.rel_tol = -1.0;
    EXPECT_THROW(energy_U(set_E(), EnergyParams{1.0, 0.5}, bad), std::invalid_argument);
}
