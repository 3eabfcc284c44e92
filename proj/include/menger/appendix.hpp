#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>
#include <queue>
#include <utility>
#include <stdexcept>
#include <vector>

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

// One-dimensional integrals with closed forms or closed-form bounds. The
// quadrature here is globally adaptive Gauss-Kronrod and shares no code with the
// tensor-product cubature of the energy module, so each can check the other.

namespace menger {

struct IntegralCheck {
    double closed_form = 0.0;
    double quadrature = 0.0;
    double abs_err = 0.0;
};

namespace detail {

// Kronrod 21-point value and |K21 - G10| on [a, b].
template <class F>
std::pair<double, double> gk21(const F& f, double a, double b) {
    using boost::math::quadrature::gauss;
    using boost::math::quadrature::gauss_kronrod;
    const double c = 0.5 * (a + b), h = 0.5 * (b - a);
    auto rule = [&](const auto& x, const auto& w, bool has_zero) {
        double s = has_zero ? w[0] * f(c) : 0.0;
        for (std::size_t i = has_zero ? 1 : 0; i < x.size(); ++i) s += w[i] * (f(c - h * x[i]) + f(c + h * x[i]));
        return s * h;
    };
    const double k = rule(gauss_kronrod<double, 21>::abscissa(), gauss_kronrod<double, 21>::weights(), true);
    const double g = rule(gauss<double, 10>::abscissa(), gauss<double, 10>::weights(), false);
    return {k, std::abs(k - g)};
}

// Globally adaptive G-K 21 over [0, 1] seeded with the given breakpoints;
// bisects the worst interval until the summed error estimate is below
// abs_tol or max_intervals is reached.
template <class F>
double gk_integrate_01(const F& f, std::vector<double> breaks, double abs_tol = 1e-13, std::size_t max_intervals = 4000) {
    breaks.push_back(0.0);
    breaks.push_back(1.0);
    std::sort(breaks.begin(), breaks.end());
    breaks.erase(std::unique(breaks.begin(), breaks.end()), breaks.end());
    struct Piece {
        double a, b, value, error;
        bool operator<(const Piece& o) const { return error < o.error; }
    };
    std::priority_queue<Piece> heap;
    double err = 0.0;
    for (std::size_t k = 0; k + 1 < breaks.size(); ++k) {
        const double a = breaks[k], b = breaks[k + 1];
        if (!(a >= 0.0 && b <= 1.0 && b > a)) continue;
        auto [v, e] = gk21(f, a, b);
        heap.push({a, b, v, e});
        err += e;
    }
    while (err > abs_tol && heap.size() < max_intervals) {
        const Piece w = heap.top();
        heap.pop();
        const double m = 0.5 * (w.a + w.b);
        auto [v1, e1] = gk21(f, w.a, m);
        auto [v2, e2] = gk21(f, m, w.b);
        heap.push({w.a, m, v1, e1});
        heap.push({m, w.b, v2, e2});
        err += e1 + e2 - w.error;
    }
    std::vector<double> values;
    while (!heap.empty()) {
        values.push_back(heap.top().value);
        heap.pop();
    }
    std::sort(values.begin(), values.end());
    double total = 0.0;
    for (double v : values) total += v;
    return total;
}

// Breakpoints at the scales c * 2^k inside (0, 1).
inline std::vector<double> geometric_breaks(std::initializer_list<double> scales) {
    std::vector<double> b;
    for (double c : scales) {
        for (int k = -3; k <= 3; ++k) {
            const double t = std::ldexp(c, k);
            if (t > 0.0 && t < 1.0) b.push_back(t);
        }
    }
    return b;
}

inline void require_positive(double z, double y) {
    if (!(z > 0.0 && y > 0.0) || !std::isfinite(z) || !std::isfinite(y))
        throw std::invalid_argument("z and y must be positive and finite");
}

}  // namespace detail

// (1/2) (arctan(1/sqrt(zy)) / sqrt(zy) - 1/(1 + zy)) = int_0^1 dx / (x + zy/x)^2.
inline double integral_II_closed_form(double z, double y) {
    detail::require_positive(z, y);
    const double s = std::sqrt(z * y);
    return 0.5 * (std::atan(1.0 / s) / s - 1.0 / (1.0 + z * y));
}

// Antiderivative (1/2) (arctan(x/s)/s - x/(x^2 + s^2)), s = sqrt(zy), vanishing at 0.
inline double integral_II_antiderivative(double x, double z, double y) {
    detail::require_positive(z, y);
    const double s = std::sqrt(z * y);
    return 0.5 * (std::atan(x / s) / s - x / (x * x + z * y));
}

inline double integral_II_integrand(double x, double z, double y) {
    const double d = x * x + z * y;
    return x * x / (d * d);
}

inline double integral_II_quadrature(double z, double y) {
    detail::require_positive(z, y);
    const double s = std::sqrt(z * y);
    return detail::gk_integrate_01([&](double x) { return integral_II_integrand(x, z, y); },
                                   detail::geometric_breaks({s}));
}

inline IntegralCheck integral_II_check(double z, double y) {
    IntegralCheck c;
    c.closed_form = integral_II_closed_form(z, y);
    c.quadrature = integral_II_quadrature(z, y);
    c.abs_err = std::abs(c.closed_form - c.quadrature);
    return c;
}

inline double integral_I_integrand(double x, double z, double y, double p) {
    if (x == 0.0) return 0.0;
    return std::pow(x, p) / (std::pow(x * x + y * y, 0.5 * p) * std::pow(x * x + z * z, 0.5 * p));
}

// int_0^1 x^p / ((x^2 + y^2)^(p/2) (x^2 + z^2)^(p/2)) dx for any p > 0.
inline double integral_I(double z, double y, double p) {
    detail::require_positive(z, y);
    if (!(p > 0.0)) throw std::invalid_argument("integral_I: p must be positive");
    return detail::gk_integrate_01([&](double x) { return integral_I_integrand(x, z, y, p); },
                                   detail::geometric_breaks({std::min(z, y), std::sqrt(z * y), std::max(z, y)}));
}

struct IntegralBound {
    double integral = 0.0;
    double bound = 0.0;
};

// The integral above together with its bound pi / 2^p (zy)^(-(p-1)/2), valid for p >= 2.
inline IntegralBound integral_I_bound(double z, double y, double p) {
    if (!(p >= 2.0)) throw std::domain_error("integral_I_bound: the bound needs p >= 2");
    IntegralBound r;
    r.integral = integral_I(z, y, p);
    r.bound = std::numbers::pi / std::pow(2.0, p) * std::pow(z * y, -(p - 1.0) / 2.0);
    return r;
}

}  // namespace menger
