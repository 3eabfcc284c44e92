#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "menger/appendix.hpp"
#include "menger/bounds.hpp"

using namespace menger;

namespace {

constexpr double kPi = std::numbers::pi;

std::vector<double> log_grid(int n) {
    std::vector<double> g;
    for (int i = 0; i < n; ++i) g.push_back(std::pow(10.0, -3.0 + 4.0 * i / (n - 1)));
    return g;
}

// composite Simpson on a geometric mesh; a second, unrelated quadrature
double simpson_geometric(const auto& f, double lo_exp, int panels) {
    double s = 0.0;
    for (int k = 0; k < panels; ++k) {
        const double a = std::pow(10.0, lo_exp * (1.0 - double(k) / panels));
        const double b = std::pow(10.0, lo_exp * (1.0 - double(k + 1) / panels));
        const int m = 64;
        const double h = (b - a) / m;
        double t = f(a) + f(b);
        for (int i = 1; i < m; ++i) t += (i % 2 ? 4.0 : 2.0) * f(a + i * h);
        s += t * h / 3.0;
    }
    return s;
}

}  // namespace

TEST(IntegralII, Examples) {
    EXPECT_NEAR(integral_II_closed_form(1, 1), kPi / 8 - 0.25, 1e-15);
    EXPECT_NEAR(integral_II_closed_form(0.25, 1), 0.5 * (std::atan(2.0) / 0.5 - 1.0 / 1.25), 1e-15);
    EXPECT_LT(integral_II_closed_form(1e6, 1e6), 1e-12);
    EXPECT_THROW(integral_II_closed_form(0, 1), std::invalid_argument);
}

TEST(IntegralII, ClosedFormAgainstQuadratures) {
    for (double z : log_grid(10))
        for (double y : log_grid(10)) {
            const auto c = integral_II_check(z, y);
            EXPECT_LE(c.abs_err, 1e-10);
            const double simpson = simpson_geometric([&](double x) { return integral_II_integrand(x, z, y); }, -9.0, 90);
            EXPECT_NEAR(simpson, c.closed_form, 1e-7 * std::max(1.0, c.closed_form));
        }
}

TEST(IntegralII, DerivativeIdentity) {
    const double h = 1e-5;
    for (double z : log_grid(6))
        for (double y : log_grid(6))
            for (double x : {0.05, 0.2, 0.5, 0.9}) {
                auto cd = [&](double k) {
                    return (integral_II_antiderivative(x + k, z, y) - integral_II_antiderivative(x - k, z, y)) / (2 * k);
                };
                const double d = (4 * cd(h / 2) - cd(h)) / 3;  // Richardson step removes the h^2 term
                const double f = 1.0 / std::pow(x + z * y / x, 2.0);
                EXPECT_NEAR(d, f, 1e-8 * std::max(1.0, f));
            }
    EXPECT_EQ(integral_II_antiderivative(0.0, 0.3, 0.7), 0.0);
}

TEST(IntegralI, Examples) {
    const auto a = integral_I_bound(1, 1, 2);
    EXPECT_NEAR(a.bound, kPi / 4, 1e-15);
    EXPECT_LE(a.integral, a.bound);
    // p = 2, z = y = 1: int x^2 / (x^2 + 1)^2 = (pi/4 - 1/2) / 2
    EXPECT_NEAR(a.integral, 0.5 * (kPi / 4 - 0.5), 1e-13);
    // z = y = s: int x^2 / (x^2 + s^2)^2 = (atan(1/s)/s - 1/(1 + s^2)) / 2, nearly sharp for small s
    const auto b = integral_I_bound(0.01, 0.01, 2);
    EXPECT_NEAR(b.bound, kPi / 4 * 1e2, 1e-10);
    EXPECT_NEAR(b.integral, 0.5 * (std::atan(100.0) * 100.0 - 1.0 / 1.0001), 1e-9);
    EXPECT_LE(b.integral, b.bound);
    const auto c = integral_I_bound(1, 1, 3);
    EXPECT_LE(c.integral, kPi / 8);
    EXPECT_THROW(integral_I_bound(1, 1, 1.5), std::domain_error);
    EXPECT_GT(integral_I(1, 1, 1.5), 0.0);
}

TEST(IntegralI, BoundOnGrid) {
    for (double p : {2.0, 2.5, 3.0})
        for (double z : log_grid(10))
            for (double y : log_grid(10)) {
                const auto r = integral_I_bound(z, y, p);
                EXPECT_GE(r.bound - r.integral, -1e-12);
            }
}

TEST(IntegralI, AmGmStepPointwise) {
    for (double p : {2.0, 2.5, 3.0})
        for (double z : log_grid(8))
            for (double y : log_grid(8))
                for (double x : {1e-3, 0.01, 0.1, 0.5, 1.0}) {
                    const double lhs = std::pow(x, p) / std::pow((x * x + y * y) * (x * x + z * z), p / 2);
                    const double rhs = std::pow(x, p) / std::pow(x * x + y * z, p);
                    EXPECT_LE(lhs, rhs * (1 + 1e-14));
                }
}

TEST(Bounds, ClosedForms) {
    EXPECT_DOUBLE_EQ(closed_form_bound(ClosedFormBound::U_of_E, {.p = 0.5}), 12.0);
    EXPECT_DOUBLE_EQ(closed_form_bound(ClosedFormBound::U_of_E, {.p = 0.25}), 8.0);
    EXPECT_DOUBLE_EQ(closed_form_bound(ClosedFormBound::U_of_E, {.p = 0.75}), 24.0);
    EXPECT_NEAR(closed_form_bound(ClosedFormBound::M_of_E, {.p = 2.0}), 72 * kPi, 1e-12);
    EXPECT_NEAR(closed_form_bound(ClosedFormBound::F_of_E1E1E2, {.p = 2.0}), 4 * kPi, 1e-13);
    const double p = 1.5;
    EXPECT_NEAR(closed_form_bound(ClosedFormBound::I_of_E, {.p = p}),
                9 * std::pow(2.0, 1.5 * p + 1) * (std::pow(2.0, 1 - p) - 1) / ((1 - p) * (2 - p)), 1e-12);
    EXPECT_NEAR(closed_form_bound(ClosedFormBound::I_of_E, {.p = p}), 100.313, 1e-3);
    EXPECT_THROW(closed_form_bound(ClosedFormBound::U_of_E, {.p = 1.0}), std::domain_error);
    EXPECT_THROW(closed_form_bound(ClosedFormBound::M_of_E, {.p = 3.0}), std::domain_error);
    EXPECT_THROW(closed_form_bound(ClosedFormBound::I_of_E, {.p = 2.5}), std::domain_error);
}

TEST(Bounds, HolderAndChain) {
    const double h = closed_form_bound(ClosedFormBound::holder,
                                       {.p = 1.0, .measure = 3.0, .q = 2.0, .energy_q = 96.0, .integrations = 3});
    EXPECT_NEAR(h, std::pow(3.0, 1.5) * std::sqrt(96.0), 1e-12);
    EXPECT_EQ(closed_form_bound(ClosedFormBound::chain, {.p = 0.5, .measure = 3.0, .thickness = 0.0}), kInf);
    EXPECT_NEAR(closed_form_bound(ClosedFormBound::chain, {.p = 2.0, .measure = 2.0, .thickness = 0.5}), 32.0, 1e-12);
}

TEST(Bounds, NamesRoundTrip) {
    for (auto b : {ClosedFormBound::U_of_E, ClosedFormBound::I_of_E, ClosedFormBound::M_of_E,
                   ClosedFormBound::F_of_E1E1E2, ClosedFormBound::holder, ClosedFormBound::chain})
        EXPECT_EQ(parse_closed_form_bound(to_string(b)), b);
    EXPECT_EQ(to_string(ClosedFormBound::M_of_E), "M_E");
    EXPECT_THROW(parse_closed_form_bound("nope"), std::invalid_argument);
}

TEST(FSeries, ExactChecks) {
    for (double p : {3.0, 3.5, 4.0, 6.0}) {
        const auto r = set_F_series_bounds(4, p);
        EXPECT_TRUE(r.all_ok) << p;
        for (const auto& s : r.separation) EXPECT_TRUE(s.ok);
        for (const auto& q : r.quotients) {
            EXPECT_TRUE(q.index_inequality);
            EXPECT_TRUE(q.power_inequality);
            // independent recomputation of -m^m m^3 + q k^k k^3
            auto e = [](int n) {
                std::int64_t v = 1;
                for (int i = 0; i < n; ++i) v *= n;
                return v * n * n * n;
            };
            EXPECT_EQ(q.exponent, -e(q.m) + q.q * e(q.k));
            EXPECT_LE(q.exponent, -3 * q.m);
        }
        ASSERT_EQ(r.same_block.size(), 2u);
        for (const auto& s : r.same_block) {
            EXPECT_TRUE(s.ok);
            EXPECT_TRUE(s.maximizer_in_block);
            EXPECT_TRUE(s.candidates_bracket);
        }
    }
}

TEST(FSeries, QuotientExample) {
    // q = 2, k = 2, m = 3: -27 * 27 + 2 * 4 * 8 = -665 <= -9
    const auto r = set_F_series_bounds(4, 3.0);
    bool found = false;
    for (const auto& q : r.quotients)
        if (q.q == 2 && q.k == 2 && q.m == 3) {
            EXPECT_EQ(q.exponent, -665);
            found = true;
        }
    EXPECT_TRUE(found);
    EXPECT_THROW(set_F_series_bounds(4, 2.5), std::invalid_argument);
    EXPECT_THROW(set_F_series_bounds(9, 3.0), std::invalid_argument);
}
