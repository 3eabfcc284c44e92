#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "menger/builtin_sets.hpp"
#include "menger/density.hpp"

using namespace menger;

namespace {

constexpr double kPi = std::numbers::pi;
const Point2 kOrigin{0, 0};

RadiusLadder ladder(double r0 = 0.5) { return RadiusLadder::geometric_ladder(r0); }

double angle_of(const TangentReport& rep, std::size_t d) { return rep.profile.angles[d]; }

}  // namespace

TEST(Ladder, Validation) {
    EXPECT_EQ(ladder().size(), 16u);
    EXPECT_THROW(RadiusLadder::geometric_ladder(0.5, 0.5, 4), std::invalid_argument);
    EXPECT_THROW(RadiusLadder::geometric_ladder(0.5, 1.5, 16), std::invalid_argument);
    const auto F = set_F_ladder(4);
    for (std::size_t i = 1; i < F.size(); ++i) EXPECT_TRUE(F.radii[i] < F.radii[i - 1]);
}

TEST(Profile, EConstantRatio) {
    const auto P = density_profile(set_E(), kOrigin, 1.0, ladder(), TangentThresholds{});
    for (double m : P.measure_ratio) EXPECT_DOUBLE_EQ(m, 1.5);
    const auto b = lower_upper_density(P);
    EXPECT_DOUBLE_EQ(b.lower, 1.5);
    EXPECT_DOUBLE_EQ(b.upper, 1.5);
    const auto Q = density_profile(set_E_part(2), kOrigin, 1.0, ladder(), TangentThresholds{});
    for (double m : Q.measure_ratio) EXPECT_DOUBLE_EQ(m, 0.5);
}

TEST(Profile, PartitionAtEveryRadius) {
    for (const auto& X : {set_E(), set_S(14), set_L()}) {
        const auto P = density_profile(X, kOrigin, 1.0, ladder(), TangentThresholds{});
        for (std::size_t i = 0; i < P.radii(); ++i)
            for (std::size_t d = 0; d < P.dirs(); ++d)
                for (std::size_t e = 0; e < P.eps_count(); ++e)
                    EXPECT_NEAR(P.in(i, d, e) + P.out(i, d, e), P.measure_ratio[i], 1e-12);
    }
}

TEST(Profile, ScaleCovariance) {
    const double lam = 3.0;
    const auto X = set_S(14);
    std::vector<std::pair<Point2, Point2>> s;
    for (const auto& g : X.segments()) s.emplace_back(lam * g.p, lam * g.q);
    const auto Y = make_segment_set<2>(s);
    const Point2 x{0.0, 0.0};
    const auto P = density_profile(X, x, 1.0, ladder(), TangentThresholds{});
    const auto Q = density_profile(Y, lam * x, 1.0, RadiusLadder::geometric_ladder(0.5 * lam), TangentThresholds{});
    for (std::size_t i = 0; i < P.measure_ratio.size(); ++i) EXPECT_NEAR(P.measure_ratio[i], Q.measure_ratio[i], 1e-13);
    for (std::size_t k = 0; k < P.out_ratio.size(); ++k) EXPECT_NEAR(P.out_ratio[k], Q.out_ratio[k], 1e-13);
}

TEST(Profile, EOutRatioAtLeastHalf) {
    TangentThresholds th;
    th.dir_grid = 64;
    th.eps_list = {kPi / 64, kPi / 32, kPi / 16};
    const auto P = density_profile(set_E(), kOrigin, 1.0, ladder(), th);
    for (std::size_t i = 0; i < P.radii(); ++i)
        for (std::size_t d = 0; d < P.dirs(); ++d) EXPECT_GE(P.out(i, d, 0), 0.5 - 1e-12);
}

TEST(Profile, FInConeAtLeastQuarter) {
    const auto R = RadialSet<2>::from_blocks(set_F(4).scaled_blocks());
    const auto P = density_profile(R, 1.0, set_F_ladder(4), TangentThresholds{});
    // at r = a_m with m even (axis 1) the e1 cone holds at least a quarter
    for (std::size_t i = 0; i < P.radii(); ++i) {
        const auto& r = P.ladder.radii[i];
        for (int m : {2, 4})
            if (r.exp2() == DyadicLadder::a(m).exp2() && r.mantissa() == 1.0) {
                for (std::size_t e = 0; e < P.eps_count(); ++e) EXPECT_GE(P.in(i, 0, e), 0.25);
            }
    }
}

TEST(Tangent, SStrong) {
    const auto rep = detect_strong_tangent(set_S(), kOrigin, 1.0, ladder());
    EXPECT_EQ(rep.verdict, TangentVerdict::Strong);
    ASSERT_TRUE(rep.direction.has_value());
    EXPECT_EQ(angle_of(rep, *rep.direction), 0.0);
}

TEST(Tangent, SegmentStrongAtInteriorPoint) {
    const auto rep = detect_strong_tangent(set_segment(), Point2{0.5, 0}, 1.0, ladder(0.25));
    EXPECT_EQ(rep.verdict, TangentVerdict::Strong);
    EXPECT_EQ(angle_of(rep, *rep.direction), 0.0);
    const auto diag = make_segment_set<2>({{{0, 0}, {1, 1}}});
    const auto d = detect_strong_tangent(diag, Point2{0.5, 0.5}, 1.0, ladder(0.25));
    EXPECT_EQ(d.verdict, TangentVerdict::Strong);
    EXPECT_NEAR(angle_of(d, *d.direction), kPi / 4, 1e-12);
}

TEST(Tangent, ENone) {
    const TangentThresholds th;
    const auto rep = detect_strong_tangent(set_E(), kOrigin, 1.0, ladder(), th);
    EXPECT_EQ(rep.verdict, TangentVerdict::None);
    EXPECT_GE(rep.min_witness_density(), 0.2);
    EXPECT_GE(rep.witness_separation, th.eps_min());
    EXPECT_NEAR(angle_of(rep, rep.witness[0]), 0.0, 1e-12);
    EXPECT_NEAR(angle_of(rep, rep.witness[1]), kPi / 2, 1e-12);
    EXPECT_EQ(detect_weak_tangent(set_E(), kOrigin, 1.0, ladder(), th).verdict, TangentVerdict::None);
}

TEST(Tangent, LShapeNone) {
    const auto L = rotate_union(set_segment(), kOrigin, RotationPlane<2>{Point2{1, 0}, Point2{0, 1}}, kPi / 2);
    EXPECT_EQ(detect_weak_tangent(L, kOrigin, 1.0, ladder()).verdict, TangentVerdict::None);
    EXPECT_EQ(detect_strong_tangent(set_L(), kOrigin, 1.0, ladder()).verdict, TangentVerdict::None);
}

TEST(Tangent, FWeakWithAlternatingDirections) {
    const auto R = RadialSet<2>::from_blocks(set_F(4).scaled_blocks());
    const auto P = density_profile(R, 1.0, set_F_ladder(4), TangentThresholds{});
    const auto rep = detect_strong_tangent(P, TangentThresholds{}.delta);
    EXPECT_EQ(rep.verdict, TangentVerdict::Weak);
    bool saw1 = false, saw2 = false;
    for (std::size_t i = 0; i < P.radii(); ++i) {
        const int want = set_F_tangent_axis(P.ladder.radii[i]);
        const double a = angle_of(rep, rep.direction_map[i]);
        if (want == 1) {
            EXPECT_EQ(a, 0.0);
            saw1 = true;
        } else {
            EXPECT_EQ(want, 2);
            EXPECT_NEAR(a, kPi / 2, 1e-12);
            saw2 = true;
        }
    }
    EXPECT_TRUE(saw1 && saw2);
}

TEST(Tangent, StrongImpliesWeakWithConstantMap) {
    for (const auto& X : {set_S(), set_segment()}) {
        const Point2 x = X.size() == 1 ? Point2{0.5, 0} : kOrigin;
        const auto L = ladder(X.size() == 1 ? 0.25 : 0.5);
        const auto s = detect_strong_tangent(X, x, 1.0, L);
        ASSERT_EQ(s.verdict, TangentVerdict::Strong);
        const auto w = detect_weak_tangent(X, x, 1.0, L);
        EXPECT_EQ(w.verdict, TangentVerdict::Weak);
        for (auto d : w.direction_map) EXPECT_EQ(d, *s.direction);
    }
}

TEST(Tangent, GridRefinementKeepsStrong) {
    for (int G : {32, 64, 128}) {
        TangentThresholds th;
        th.dir_grid = G;
        EXPECT_EQ(detect_strong_tangent(set_S(), kOrigin, 1.0, ladder(), th).verdict, TangentVerdict::Strong) << G;
    }
}

TEST(Annulus, ECones) {
    const Cone<2> A(kOrigin, Point2{1, 0}, kPi / 8), B(kOrigin, Point2{0, 1}, kPi / 8);
    const auto d = annulus_diagnostic(set_E(), kOrigin, 1.0, ladder(), 0.5, A, B);
    for (const auto& row : d.rows) {
        const double r = row.r.to_double();
        // the e1 double cone holds both horizontal arms, the e2 cone the stem
        EXPECT_NEAR(row.measure_a, r, 1e-15);
        EXPECT_NEAR(row.measure_b, 0.5 * r, 1e-15);
    }
    EXPECT_NEAR(d.c, 0.5, 1e-15);
    const auto thin = annulus_diagnostic(set_E(), kOrigin, 1.0, ladder(), 0.9, A, B);
    EXPECT_NEAR(thin.c, 0.1, 1e-12);
}

TEST(Annulus, OffAxisConeIsEmpty) {
    const Point2 x{0.5, 0};
    const Cone<2> A(x, Point2{1, 0}, 0.1), B(x, Point2{0, 1}, 0.1);
    const auto d = annulus_diagnostic(set_segment(), x, 1.0, ladder(0.25), 0.5, A, B);
    for (const auto& row : d.rows) EXPECT_EQ(row.measure_b, 0.0);
    EXPECT_THROW(annulus_diagnostic(set_segment(), x, 1.0, ladder(0.25), 0.5, Cone<2>(kOrigin, Point2{1, 0}, 0.1), B),
                 std::invalid_argument);
}

TEST(Output, JsonAndCsv) {
    const auto rep = detect_strong_tangent(set_E(), kOrigin, 1.0, ladder());
    const auto j = to_json(rep);
    EXPECT_EQ(j["verdict"], "none");
    EXPECT_EQ(j["witness_cones"].size(), 2u);
    const std::string csv = tangent_csv(rep);
    EXPECT_EQ(csv.rfind("r_exp2,r_mantissa,ratio,best_direction_angle,out_ratio\n", 0), 0u);
    EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 17);
}
