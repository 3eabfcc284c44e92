#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <utility>

namespace menger {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

// Point (or vector) in R^N.
template <std::size_t N>
struct Point {
    static_assert(N >= 2, "points live in R^n with n >= 2");
    std::array<double, N> c{};

    constexpr double& operator[](std::size_t i) { return c[i]; }
    constexpr double operator[](std::size_t i) const { return c[i]; }

    friend constexpr Point operator+(Point a, const Point& b) {
        for (std::size_t i = 0; i < N; ++i) a.c[i] += b.c[i];
        return a;
    }
    friend constexpr Point operator-(Point a, const Point& b) {
        for (std::size_t i = 0; i < N; ++i) a.c[i] -= b.c[i];
        return a;
    }
    friend constexpr Point operator*(double s, Point a) {
        for (auto& v : a.c) v *= s;
        return a;
    }
    friend constexpr Point operator-(Point a) {
        for (auto& v : a.c) v = -v;
        return a;
    }
    friend constexpr bool operator==(const Point&, const Point&) = default;
    friend constexpr auto operator<=>(const Point& a, const Point& b) { return a.c <=> b.c; }
};

using Point2 = Point<2>;
using Point3 = Point<3>;

template <std::size_t N>
constexpr double dot(const Point<N>& a, const Point<N>& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < N; ++i) s += a[i] * b[i];
    return s;
}

template <std::size_t N>
double norm(const Point<N>& a) {
    if constexpr (N == 2) {
        return std::hypot(a[0], a[1]);
    } else if constexpr (N == 3) {
        return std::hypot(a[0], a[1], a[2]);
    } else {
        return std::sqrt(dot(a, a));
    }
}

template <std::size_t N>
double distance(const Point<N>& a, const Point<N>& b) {
    return norm(a - b);
}

template <std::size_t N>
Point<N> normalized(const Point<N>& a) {
    const double n = norm(a);
    if (n == 0.0) throw std::invalid_argument("normalized: zero vector");
    return (1.0 / n) * a;
}

template <std::size_t N>
bool all_finite(const Point<N>& a) {
    return std::all_of(a.c.begin(), a.c.end(), [](double v) { return std::isfinite(v); });
}

template <std::size_t N>
double max_abs_coord(const Point<N>& a) {
    double m = 0.0;
    for (double v : a.c) m = std::max(m, std::abs(v));
    return m;
}

// |u ^ v|, the area of the parallelogram spanned by u and v, via the
// Lagrange identity summed over coordinate planes (no cancellation of
// |u|^2|v|^2 - (u.v)^2).
template <std::size_t N>
double wedge_norm(const Point<N>& u, const Point<N>& v) {
    if constexpr (N == 2) {
        return std::abs(u[0] * v[1] - u[1] * v[0]);
    } else {
        double s = 0.0;
        for (std::size_t i = 0; i < N; ++i) {
            for (std::size_t j = i + 1; j < N; ++j) {
                const double w = u[i] * v[j] - u[j] * v[i];
                s += w * w;
            }
        }
        return std::sqrt(s);
    }
}

// Pairwise distances of a point triple: a = d(x,y), b = d(y,z), c = d(z,x).
struct TriangleSides {
    double a = 0.0;
    double b = 0.0;
    double c = 0.0;
};

template <std::size_t N>
TriangleSides sides_of(const Point<N>& x, const Point<N>& y, const Point<N>& z) {
    return {distance(x, y), distance(y, z), distance(z, x)};
}

enum class DegeneracyClass { NonDegenerate, Collinear, Coincident };

// Tolerances for classifying point triples.
struct Tolerances {
    // Relative coincidence scale: |p - q| <= coincide_rel * (1 + max |coord|).
    double coincide_rel = 1e-14;
    // Collinear when 16 A^2 / (max side)^4 <= area_rel.
    double area_rel = 1e-24;
};

inline constexpr Tolerances kDefaultTolerances{};

template <std::size_t N>
double coincidence_tolerance(const Point<N>& x, const Point<N>& y, const Point<N>& z,
                             const Tolerances& tol = kDefaultTolerances) {
    const double m = std::max({max_abs_coord(x), max_abs_coord(y), max_abs_coord(z)});
    return tol.coincide_rel * (1.0 + m);
}

template <std::size_t N>
bool coincident(const Point<N>& p, const Point<N>& q, const Tolerances& tol = kDefaultTolerances) {
    const double m = std::max(max_abs_coord(p), max_abs_coord(q));
    return distance(p, q) <= tol.coincide_rel * (1.0 + m);
}

// Heron radicand (a+b+c)(a+b-c)(a-b+c)(-a+b+c) evaluated in the
// cancellation-free sorted order.
inline double heron_radicand(TriangleSides s) {
    std::array<double, 3> v{s.a, s.b, s.c};
    std::sort(v.begin(), v.end(), std::greater<>());
    const double a = v[0], b = v[1], c = v[2];
    return (a + (b + c)) * (c - (a - b)) * (c + (a - b)) * (a + (b - c));
}

// Circumradius from the three side lengths; +inf for degenerate triangles.
inline double circumradius_from_sides(TriangleSides s, const Tolerances& tol = kDefaultTolerances) {
    if (std::isnan(s.a) || std::isnan(s.b) || std::isnan(s.c)) {
        throw std::invalid_argument("circumradius_from_sides: NaN side");
    }
    if (s.a < 0 || s.b < 0 || s.c < 0) {
        throw std::invalid_argument("circumradius_from_sides: negative side");
    }
    const double longest = std::max({s.a, s.b, s.c});
    if (longest == 0.0) return kInf;
    const double rad = heron_radicand(s);
    const double l2 = longest * longest;
    if (rad <= tol.area_rel * l2 * l2) return kInf;
    return s.a * s.b * s.c / std::sqrt(rad);
}

template <std::size_t N>
DegeneracyClass classify(const Point<N>& x, const Point<N>& y, const Point<N>& z,
                         const Tolerances& tol = kDefaultTolerances) {
    const double eps = coincidence_tolerance(x, y, z, tol);
    const double a = distance(x, y), b = distance(y, z), c = distance(z, x);
    if (a <= eps || b <= eps || c <= eps) return DegeneracyClass::Coincident;
    const double longest = std::max({a, b, c});
    // 16 A^2 = (2 * |u ^ v|)^2 with u, v the two edges at the vertex opposite the longest side
    double area2;
    if (longest == a) {
        area2 = wedge_norm(x - z, y - z);
    } else if (longest == b) {
        area2 = wedge_norm(y - x, z - x);
    } else {
        area2 = wedge_norm(x - y, z - y);
    }
    const double rad = 4.0 * area2 * area2;
    const double l2 = longest * longest;
    if (rad <= tol.area_rel * l2 * l2) return DegeneracyClass::Collinear;
    return DegeneracyClass::NonDegenerate;
}

// Distance from z to the infinite line through x and y.
template <std::size_t N>
double dist_point_to_line(const Point<N>& z, const Point<N>& x, const Point<N>& y) {
    const Point<N> d = y - x;
    const double len = norm(d);
    if (coincident(x, y)) throw std::invalid_argument("dist_point_to_line: x and y coincide");
    return wedge_norm(d, z - x) / len;
}

// Distance from z to the line through x with unit direction e.
template <std::size_t N>
double dist_point_to_line_dir(const Point<N>& z, const Point<N>& x, const Point<N>& e) {
    return wedge_norm(e, z - x);
}

// Angle between unit vectors, 2 atan2(|a - b|, |a + b|).
template <std::size_t N>
double angle_between_units(const Point<N>& ua, const Point<N>& ub) {
    return 2.0 * std::atan2(norm(ua - ub), norm(ua + ub));
}

// The angle at v of the triangle (a, v, b), in [0, pi].
template <std::size_t N>
double angle_at(const Point<N>& v, const Point<N>& a, const Point<N>& b) {
    if (coincident(a, v) || coincident(b, v)) {
        throw std::invalid_argument("angle_at: coincident apex");
    }
    return angle_between_units(normalized(a - v), normalized(b - v));
}

namespace detail {

// Circumradius by the point form |x-z||y-z| / (2 dist(z, L_{x,y})), with z
// chosen opposite the longest side. Assumes a non-degenerate triple.
template <std::size_t N>
double circumradius_point_form(const Point<N>& x, const Point<N>& y, const Point<N>& z) {
    const double a = distance(x, y), b = distance(y, z), c = distance(z, x);
    if (a >= b && a >= c) {
        return c * b / (2.0 * wedge_norm(y - x, z - x) / a);
    }
    if (b >= a && b >= c) {
        return a * c / (2.0 * wedge_norm(z - y, x - y) / b);
    }
    return a * b / (2.0 * wedge_norm(x - z, y - z) / c);
}

}  // namespace detail

// Circumradius of three points; +inf on collinear or coincident triples.
template <std::size_t N>
double circumradius_points(const Point<N>& x, const Point<N>& y, const Point<N>& z,
                           const Tolerances& tol = kDefaultTolerances) {
    if (classify(x, y, z, tol) != DegeneracyClass::NonDegenerate) return kInf;
    return detail::circumradius_point_form(x, y, z);
}

// Circumradius via |x - y| / (2 |sin angle(x, z, y)|).
template <std::size_t N>
double circumradius_angle_form(const Point<N>& x, const Point<N>& y, const Point<N>& z) {
    if (classify(x, y, z) != DegeneracyClass::NonDegenerate) return kInf;
    return distance(x, y) / (2.0 * std::abs(std::sin(angle_at(z, x, y))));
}

// Menger curvature 1/r; zero on collinear and coincident triples.
template <std::size_t N>
double kappa(const Point<N>& x, const Point<N>& y, const Point<N>& z,
             const Tolerances& tol = kDefaultTolerances) {
    if (classify(x, y, z, tol) != DegeneracyClass::NonDegenerate) return 0.0;
    return 1.0 / detail::circumradius_point_form(x, y, z);
}

// Unclassified curvature 2 |u ^ v| / (|u| |v| |u - v|), u = y - x, v = z - x.
// Returns 0 when any side vanishes. Hot-path variant for quadrature.
template <std::size_t N>
double kappa_fast(const Point<N>& x, const Point<N>& y, const Point<N>& z) {
    const Point<N> u = y - x;
    const Point<N> v = z - x;
    const Point<N> w = z - y;
    const double a = norm(u), c = norm(v), b = norm(w);
    const double den = a * b * c;
    if (den == 0.0) return 0.0;
    // wedge taken at the vertex opposite the longest side
    double area2;
    if (a >= b && a >= c) {
        area2 = wedge_norm(x - z, y - z);
    } else if (b >= a && b >= c) {
        area2 = wedge_norm(u, v);
    } else {
        area2 = wedge_norm(x - y, z - y);
    }
    return 2.0 * area2 / den;
}

// Curvature of the circle through z that is tangent at x to the line with
// unit direction e: 2 dist(z, x + R e) / |z - x|^2. Limit of kappa(x, y, z)
// as y -> x along e.
template <std::size_t N>
double kappa_tangent(const Point<N>& x, const Point<N>& e, const Point<N>& z) {
    const Point<N> w = z - x;
    const double d2 = dot(w, w);
    if (d2 == 0.0) return 0.0;
    return 2.0 * wedge_norm(e, w) / d2;
}

// Curvature of a triple whose first two points lie on the line through x with
// unit direction e: 2 dist(z, line) / (|x - z| |y - z|). Continuous through x = y.
template <std::size_t N>
double kappa_on_line(const Point<N>& x, const Point<N>& y, const Point<N>& e, const Point<N>& z) {
    const double den = distance(x, z) * distance(y, z);
    if (den == 0.0) return 0.0;
    return 2.0 * wedge_norm(e, z - x) / den;
}

// Pair (dist(L_{x,y}, 0), sin(eps)/2 * min(|x|, |y|)) with eps the angle at
// the origin; the first never falls below the second.
template <std::size_t N>
std::pair<double, double> dist_line_origin_lower_bound(const Point<N>& x, const Point<N>& y) {
    const Point<N> o{};
    const double eps = angle_at(o, x, y);
    if (!(eps > 0.0 && eps < std::numbers::pi)) {
        throw std::invalid_argument("dist_line_origin_lower_bound: angle outside (0, pi)");
    }
    const double lhs = dist_point_to_line(o, x, y);
    const double rhs = std::sin(eps) / 2.0 * std::min(norm(x), norm(y));
    return {lhs, rhs};
}

}  // namespace menger
