#include <gtest/gtest.h>

#include <array>
#include <cmath>
#include <numbers>
#include <random>

#include "menger/geometry.hpp"
#include "menger/scaled_real.hpp"

using namespace menger;

namespace {

constexpr double kPi = std::numbers::pi;

// Circle through three points by intersecting two perpendicular bisectors.
double bisector_circumradius(const Point2& a, const Point2& b, const Point2& c) {
    const double a1 = b[0] - a[0], b1 = b[1] - a[1];
    const double c1 = 0.5 * (a1 * (a[0] + b[0]) + b1 * (a[1] + b[1]));
    const double a2 = c[0] - a[0], b2 = c[1] - a[1];
    const double c2 = 0.5 * (a2 * (a[0] + c[0]) + b2 * (a[1] + c[1]));
    const double det = a1 * b2 - a2 * b1;
    const Point2 o{(c1 * b2 - c2 * b1) / det, (a1 * c2 - a2 * c1) / det};
    return distance(o, a);
}

template <std::size_t N>
std::array<Point<N>, 3> random_wellshaped(std::mt19937_64& rng, double min_angle) {
    std::uniform_real_distribution<double> U(-1.0, 1.0);
    for (;;) {
        std::array<Point<N>, 3> t;
        for (auto& p : t)
            for (std::size_t i = 0; i < N; ++i) p[i] = U(rng);
        if (classify(t[0], t[1], t[2]) != DegeneracyClass::NonDegenerate) continue;
        const double m = std::min({angle_at(t[0], t[1], t[2]), angle_at(t[1], t[2], t[0]), angle_at(t[2], t[0], t[1])});
        if (m >= min_angle) return t;
    }
}

}  // namespace

TEST(Circumradius, SideForm) {
    EXPECT_NEAR(circumradius_from_sides({1.0, 1.0, std::sqrt(2.0)}), std::sqrt(2.0) / 2, 1e-15);
    EXPECT_NEAR(circumradius_from_sides({1.0, 1.0, 1.0}), 1.0 / std::sqrt(3.0), 1e-15);
    EXPECT_EQ(circumradius_from_sides({1.0, 1.0, 2.0}), kInf);
    EXPECT_EQ(circumradius_from_sides({1.0, 1.0, 3.0}), kInf);
}

TEST(Circumradius, PointForm) {
    EXPECT_NEAR(circumradius_points(Point2{0, 0}, Point2{1, 0}, Point2{0, 1}), std::sqrt(2.0) / 2, 1e-15);
    EXPECT_EQ(circumradius_points(Point2{0, 0}, Point2{1, 0}, Point2{2, 0}), kInf);
    EXPECT_NEAR(circumradius_points(Point2{0, 0}, Point2{2, 0}, Point2{1, 1}), 1.0, 1e-15);
    EXPECT_EQ(circumradius_points(Point2{0, 0}, Point2{1, 0}, Point2{1, 0}), kInf);
}

TEST(Circumradius, MatchesBisectorConstruction) {
    std::mt19937_64 rng(7);
    for (int n = 0; n < 2000; ++n) {
        const auto t = random_wellshaped<2>(rng, 0.05);
        const double ref = bisector_circumradius(t[0], t[1], t[2]);
        EXPECT_NEAR(circumradius_points(t[0], t[1], t[2]) / ref, 1.0, 1e-11);
    }
}

TEST(Circumradius, ThreeFormsAgree) {
    std::mt19937_64 rng(11);
    auto check = [](const auto& t) {
        const double r1 = circumradius_from_sides(sides_of(t[0], t[1], t[2]));
        const double r2 = circumradius_points(t[0], t[1], t[2]);
        const double r3 = circumradius_angle_form(t[0], t[1], t[2]);
        EXPECT_LE(std::abs(r1 - r2) / r2, 1e-12);
        EXPECT_LE(std::abs(r3 - r2) / r2, 1e-12);
    };
    for (int n = 0; n < 10000; ++n) check(random_wellshaped<2>(rng, 0.02));
    for (int n = 0; n < 10000; ++n) check(random_wellshaped<3>(rng, 0.02));
}

TEST(Curvature, Examples) {
    EXPECT_EQ(kappa(Point2{0, 0}, Point2{1, 0}, Point2{2, 0}), 0.0);
    EXPECT_EQ(kappa(Point2{0, 0}, Point2{1, 0}, Point2{1, 0}), 0.0);
    EXPECT_NEAR(kappa(Point2{0, 0}, Point2{2, 0}, Point2{1, 1}), 1.0, 1e-15);
}

TEST(Curvature, PermutationSymmetry) {
    std::mt19937_64 rng(3);
    for (int n = 0; n < 1000; ++n) {
        const auto t = random_wellshaped<3>(rng, 0.01);
        const double k = kappa(t[0], t[1], t[2]);
        for (const auto& q : {std::array{0, 2, 1}, std::array{1, 0, 2}, std::array{1, 2, 0}, std::array{2, 0, 1},
                              std::array{2, 1, 0}})
            EXPECT_NEAR(kappa(t[q[0]], t[q[1]], t[q[2]]), k, 1e-12 * k);
    }
}

TEST(Curvature, IsometryInvariance) {
    std::mt19937_64 rng(5);
    std::normal_distribution<double> G;
    for (int n = 0; n < 500; ++n) {
        // random orthogonal matrix by Gram-Schmidt
        std::array<Point3, 3> Q;
        for (std::size_t i = 0; i < 3; ++i) {
            Point3 v{G(rng), G(rng), G(rng)};
            for (std::size_t j = 0; j < i; ++j) v = v - dot(v, Q[j]) * Q[j];
            Q[i] = normalized(v);
        }
        const Point3 shift{G(rng), G(rng), G(rng)};
        auto move = [&](const Point3& x) {
            Point3 y{};
            for (std::size_t i = 0; i < 3; ++i) y[i] = dot(Q[i], x) + shift[i];
            return y;
        };
        const auto t = random_wellshaped<3>(rng, 0.01);
        const double k = kappa(t[0], t[1], t[2]);
        EXPECT_NEAR(kappa(move(t[0]), move(t[1]), move(t[2])), k, 1e-12 * std::max(1.0, k));
    }
}

TEST(Curvature, ScalesInversely) {
    const Point2 x{0.3, -0.2}, y{1.1, 0.4}, z{-0.5, 0.9};
    for (double lam : {1e-6, 0.5, 3.0, 1e6})
        EXPECT_NEAR(kappa(lam * x, lam * y, lam * z) * lam, kappa(x, y, z), 1e-13);
}

TEST(Curvature, TangentCircleLimit) {
    // circle tangent to e1 at the origin through (0, 2) has radius 1
    EXPECT_NEAR(kappa_tangent(Point2{0, 0}, Point2{1, 0}, Point2{0, 2}), 1.0, 1e-15);
    const Point2 x{0, 0}, e{1, 0}, z{0.7, 0.9};
    const double limit = kappa_tangent(x, e, z);
    EXPECT_NEAR(kappa_on_line(x, Point2{1e-7, 0}, e, z), limit, 1e-6 * limit);
    EXPECT_NEAR(kappa_on_line(x, Point2{0.4, 0}, e, z), kappa(x, Point2{0.4, 0}, z), 1e-13);
}

TEST(Lines, DistanceExamples) {
    EXPECT_NEAR(dist_point_to_line(Point2{0, 0}, Point2{1, 0}, Point2{0, 1}), 1.0 / std::sqrt(2.0), 1e-15);
    EXPECT_EQ(dist_point_to_line(Point2{0, 0}, Point2{1, 0}, Point2{2, 0}), 0.0);
    EXPECT_NEAR(dist_point_to_line(Point2{0, 3}, Point2{0, 0}, Point2{1, 0}), 3.0, 1e-15);
}

TEST(Angles, Examples) {
    EXPECT_NEAR(angle_at(Point2{0, 0}, Point2{1, 0}, Point2{0, 1}), kPi / 2, 1e-15);
    EXPECT_NEAR(angle_at(Point2{0, 0}, Point2{1, 0}, Point2{-1, 0}), kPi, 1e-15);
    EXPECT_NEAR(angle_at(Point2{0, 0}, Point2{1, 0}, Point2{1, 1}), kPi / 4, 1e-15);
}

TEST(Angles, AccurateForTinyAngles) {
    for (double a : {1e-3, 1e-8, 1e-12}) {
        const Point2 u{1, 0}, v{std::cos(a), std::sin(a)};
        EXPECT_NEAR(angle_between_units(u, v) / a, 1.0, 1e-12);
    }
}

TEST(LineDistance, Examples) {
    auto [l1, r1] = dist_line_origin_lower_bound(Point2{1, 0}, Point2{0, 1});
    EXPECT_NEAR(l1, 1.0 / std::sqrt(2.0), 1e-15);
    EXPECT_NEAR(r1, 0.5, 1e-15);
    auto [l2, r2] = dist_line_origin_lower_bound(Point2{1, 0}, Point2{0, 2});
    EXPECT_NEAR(l2, 2.0 / std::sqrt(5.0), 1e-15);
    EXPECT_NEAR(r2, 0.5, 1e-15);
    const double d = 1e-3;
    auto [l3, r3] = dist_line_origin_lower_bound(Point2{1, 0}, Point2{-1, d});
    EXPECT_NEAR(l3, d / 2, 1e-9);
    EXPECT_GE(l3, r3 - 1e-12);
}

TEST(LineDistance, RandomPairs) {
    std::mt19937_64 rng(13);
    std::uniform_real_distribution<double> U(-2.0, 2.0);
    for (int n = 0; n < 100000; ++n) {
        const Point3 x{U(rng), U(rng), U(rng)}, y{U(rng), U(rng), U(rng)};
        const auto [lhs, rhs] = dist_line_origin_lower_bound(x, y);
        ASSERT_GE(lhs, rhs - 1e-12);
    }
}

TEST(ScaledRealTest, DyadicRoundTrip) {
    for (std::int64_t k : {std::int64_t{0}, std::int64_t{1}, std::int64_t{-1}, std::int64_t{1000}, std::int64_t{-1000000},
                           std::int64_t{1000000}}) {
        const auto v = ScaledReal::pow2(k);
        EXPECT_EQ(v.exp2(), k);
        EXPECT_EQ(v.mantissa(), 1.0);
        const auto w = ScaledReal::from_parts(v.mantissa(), v.exp2());
        EXPECT_EQ(w.exp2(), k);
        EXPECT_EQ(w.mantissa(), 1.0);
    }
    EXPECT_EQ(ScaledReal::from_double(0.375).to_double(), 0.375);
    EXPECT_EQ(ScaledReal::from_double(0.375).exp2(), -2);
}

TEST(ScaledRealTest, Associativity) {
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> M(1.0, 2.0);
    std::uniform_int_distribution<std::int64_t> E(-400000, 400000);
    for (int n = 0; n < 1000; ++n) {
        const auto a = ScaledReal::from_parts(M(rng), E(rng));
        const auto b = ScaledReal::from_parts(M(rng), E(rng));
        const auto c = ScaledReal::from_parts(M(rng), E(rng));
        const auto l = (a * b) * c, r = a * (b * c);
        EXPECT_EQ(l.exp2(), r.exp2());
        EXPECT_NEAR(l.mantissa(), r.mantissa(), 4e-16 * l.mantissa());
    }
}

TEST(ScaledRealTest, ArithmeticFarBelowUnderflow) {
    const auto a = ScaledReal::pow2(-16384);
    const auto b = ScaledReal::pow2(-16385);
    EXPECT_EQ((a - b).exp2(), -16385);
    EXPECT_EQ((a + b).mantissa(), 1.5);
    EXPECT_EQ((a / b).to_double(), 2.0);
    EXPECT_TRUE(b < a);
    EXPECT_DOUBLE_EQ(a.log2(), -16384.0);
    EXPECT_EQ(a.to_double(), 0.0);
}
