#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <stdexcept>
#include <vector>

#include "geometry.hpp"
#include "quadrature.hpp"
#include "segment_set.hpp"

namespace menger {

namespace detail {

inline constexpr double kGolden = 0.6180339887498949;

// Maximizes f on [a, b] by golden-section search; returns (argmax, max).
template <class F>
std::pair<double, double> golden_max(const F& f, double a, double b, double rel_tol = 1e-12, int max_iter = 200) {
    double c = b - kGolden * (b - a);
    double d = a + kGolden * (b - a);
    double fc = f(c), fd = f(d);
    for (int it = 0; it < max_iter && (b - a) > rel_tol * (std::abs(a) + std::abs(b) + 1e-300); ++it) {
        if (fc >= fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - kGolden * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + kGolden * (b - a);
            fd = f(d);
        }
    }
    return fc >= fd ? std::make_pair(c, fc) : std::make_pair(d, fd);
}

// Arclength sample nodes on [0, len]: a uniform grid plus geometric runs
// toward each anchor, sorted and deduplicated.
inline std::vector<double> graded_nodes(double len, const std::vector<double>& anchors, int uniform = 32,
                                        int geometric = 48) {
    std::vector<double> s;
    for (int i = 0; i <= uniform; ++i) s.push_back(len * i / uniform);
    for (double a : anchors) {
        if (!(a >= 0.0 && a <= len)) continue;
        s.push_back(a);
        double step = len;
        for (int j = 0; j < geometric; ++j) {
            step *= 0.5;
            if (a - step > 0.0) s.push_back(a - step);
            if (a + step < len) s.push_back(a + step);
        }
    }
    std::sort(s.begin(), s.end());
    s.erase(std::unique(s.begin(), s.end()), s.end());
    return s;
}

// Sample-then-refine maximization of f over [0, len]: evaluates the graded
// nodes, then golden-section refines the brackets around the two best nodes.
template <class F>
double sampled_max(const F& f, double len, const std::vector<double>& anchors, int uniform = 32, int geometric = 48) {
    const auto s = graded_nodes(len, anchors, uniform, geometric);
    std::vector<double> v(s.size());
    for (std::size_t i = 0; i < s.size(); ++i) v[i] = f(s[i]);
    std::vector<std::size_t> order(s.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::partial_sort(order.begin(), order.begin() + std::min<std::size_t>(2, order.size()), order.end(),
                      [&](std::size_t a, std::size_t b) { return v[a] > v[b] || (v[a] == v[b] && a < b); });
    double best = v[order[0]];
    for (std::size_t r = 0; r < std::min<std::size_t>(2, order.size()); ++r) {
        const std::size_t i = order[r];
        const double lo = i > 0 ? s[i - 1] : s[i];
        const double hi = i + 1 < s.size() ? s[i + 1] : s[i];
        if (hi > lo) best = std::max(best, golden_max(f, lo, hi).second);
    }
    return best;
}

// Fixed pair (x, y) whose circle curvature with a third point is maximized.
// When `line` is set, x and y are known to lie on the line through x with
// that unit direction, and x == y is allowed (tangent-circle limit).
template <std::size_t N>
struct PairProbe {
    Point<N> x;
    Point<N> y;
    std::optional<Point<N>> line;

    // Curvature of (x, y, z) with z on a segment of direction d, using the
    // continuous extension when z approaches x or y.
    double eval(const Point<N>& z, const Point<N>& d) const {
        const bool zx = coincident(z, x), zy = coincident(z, y);
        if (zx && zy) return 0.0;
        if (zx) return kappa_tangent(x, d, y);
        if (zy) return kappa_tangent(y, d, x);
        if (line) return kappa_on_line(x, y, *line, z);
        return kappa_fast(x, y, z);
    }
};

// sup over z in g of the curvature of (x, y, z), by sampling and golden-section
// refinement. General but slower; used for non-coplanar configurations and as
// an independent check of the closed-form candidate search.
template <std::size_t N>
double segment_sup_sampled(const PairProbe<N>& pr, const Segment<N>& g) {
    auto f = [&](double s) { return pr.eval(g.at(s), g.dir); };
    std::vector<double> anchors{0.0, g.length, project_param(g, pr.x), project_param(g, pr.y)};
    return sampled_max(f, g.length, anchors);
}

// sup over z in g of the curvature of (x, y, z).
//
// Along a line the curvature of the circle through x, y, z is stationary only
// where that circle is tangent to the line or where it is the smallest circle
// through x and y (diameter xy). For a line coplanar with x and y both kinds
// of point have closed forms: the tangency points sit at distance
// sqrt(|Mx| |My|) from the intersection M of the two lines (the midpoint
// projection when parallel). The supremum is the largest value over these
// candidates and the segment endpoints. Skew configurations fall back to
// segment_sup_sampled.
template <std::size_t N>
double segment_sup(const PairProbe<N>& pr, const Segment<N>& g) {
    const Point<N>& x = pr.x;
    const Point<N>& y = pr.y;
    std::array<double, 10> cand{};
    std::size_t nc = 0;
    auto add = [&](double s) {
        if (s >= 0.0 && s <= g.length && nc < cand.size()) cand[nc++] = s;
    };
    add(0.0);
    add(g.length);
    add(project_param(g, x));
    add(project_param(g, y));

    Point<N> e;
    double sy = 0.0;
    if (pr.line) {
        e = *pr.line;
        sy = dot(y - x, e);
    } else {
        const double dxy = distance(x, y);
        if (dxy == 0.0) return 0.0;
        e = (1.0 / dxy) * (y - x);
        sy = dxy;
    }
    const Point<N> w0 = g.p - x;
    const double b = dot(g.dir, e);
    const double den = 1.0 - b * b;
    const double scale = 1.0 + max_abs_coord(x) + max_abs_coord(g.p) + g.length;
    // g on the line through x and y: every triple is collinear
    if (den <= 1e-12 && dist_point_to_line_dir(x, g.p, g.dir) <= 1e-12 * scale) return 0.0;
    if (den > 1e-20) {
        const double dw = dot(g.dir, w0), ew = dot(e, w0);
        const double sM = (b * ew - dw) / den;
        const double tM = (ew - b * dw) / den;
        const Point<N> gap = (g.p + sM * g.dir) - (x + tM * e);
        if (norm(gap) > 1e-10 * scale) return segment_sup_sampled(pr, g);
        const double r = std::sqrt(std::abs(tM) * std::abs(tM - sy));
        add(sM - r);
        add(sM + r);
    } else {
        add(project_param(g, x + (0.5 * sy) * e));
    }
    if (sy != 0.0) {
        const Point<N> m = x + (0.5 * sy) * e;
        const double R = 0.5 * std::abs(sy);
        const double h = dist_point_to_line_dir(m, g.p, g.dir);
        if (h < R) {
            const double sm = project_param(g, m);
            const double w = std::sqrt((R - h) * (R + h));
            add(sm - w);
            add(sm + w);
        }
    }
    double best = 0.0;
    for (std::size_t i = 0; i < nc; ++i) best = std::max(best, pr.eval(g.at(cand[i]), g.dir));
    return best;
}

template <std::size_t N>
double kappa_i_probe(const SegmentSet<N>& X, const PairProbe<N>& pr) {
    double best = 0.0;
    for (const auto& g : X.segments()) best = std::max(best, segment_sup(pr, g));
    return best;
}

}  // namespace detail

// Intermediate curvature: sup over z in X of kappa(x, y, z).
template <std::size_t N>
double kappa_i_at(const SegmentSet<N>& X, const Point<N>& x, const Point<N>& y) {
    if (coincident(x, y)) throw std::invalid_argument("kappa_i_at: x and y coincide");
    return detail::kappa_i_probe(X, detail::PairProbe<N>{x, y, std::nullopt});
}

// kappa_i for x, y on a common line with unit direction e; continuous through x == y.
template <std::size_t N>
double kappa_i_on_line(const SegmentSet<N>& X, const Point<N>& x, const Point<N>& y, const Point<N>& e) {
    return detail::kappa_i_probe(X, detail::PairProbe<N>{x, y, e});
}

// kappa_i computed with the sampling search only.
template <std::size_t N>
double kappa_i_at_sampled(const SegmentSet<N>& X, const Point<N>& x, const Point<N>& y) {
    if (coincident(x, y)) throw std::invalid_argument("kappa_i_at_sampled: x and y coincide");
    const detail::PairProbe<N> pr{x, y, std::nullopt};
    double best = 0.0;
    for (const auto& g : X.segments()) best = std::max(best, detail::segment_sup_sampled(pr, g));
    return best;
}

namespace detail {

// Limit of kappa(x, y, z) as y, z approach the common endpoint P of two
// segments with outward directions da, db: 2 sin(phi) / |x - P| where phi is
// the largest angle between x - P and a chord direction s da - u db.
template <std::size_t N>
double vertex_limit(const Point<N>& x, const Point<N>& P, const Point<N>& da, const Point<N>& db) {
    const double r = distance(x, P);
    if (r == 0.0) return kInf;
    const Point<N> v = (1.0 / r) * (x - P);
    const double ca = dot(v, da), cb = -dot(v, db);
    double sinmax;
    if ((ca >= 0.0) != (cb >= 0.0) || ca == 0.0 || cb == 0.0) {
        sinmax = 1.0;
    } else {
        const double c = std::min(std::abs(ca), std::abs(cb));
        sinmax = std::sqrt(std::max(0.0, 1.0 - c * c));
    }
    return 2.0 * sinmax / r;
}

// Outward unit direction of segment i at its vertex v.
template <std::size_t N>
Point<N> outward(const SegmentSet<N>& X, std::size_t i, int v) {
    return X.vertex(i, 0) == v ? X[i].dir : -X[i].dir;
}

}  // namespace detail

// Global curvature: sup over y, z in X of kappa(x, y, z).
//
// For each segment carrying y, the function y -> sup_z kappa is sampled on a
// graded grid and refined by golden-section search, with the inner supremum
// from the closed-form candidate search. Limits in which y and z merge at a
// junction are added explicitly. Returns +inf at a junction.
template <std::size_t N>
double kappa_G_at(const SegmentSet<N>& X, const Point<N>& x) {
    double best = 0.0;
    for (int v = 0; v < static_cast<int>(X.vertex_count()); ++v) {
        if (!X.is_junction(v)) continue;
        const Point<N>& P = X.vertex_point(v);
        if (coincident(x, P)) return kInf;
        for (std::size_t i = 0; i < X.size(); ++i) {
            if (X.vertex(i, 0) != v && X.vertex(i, 1) != v) continue;
            for (std::size_t j = 0; j < X.size(); ++j) {
                if (j == i || (X.vertex(j, 0) != v && X.vertex(j, 1) != v)) continue;
                best = std::max(best, detail::vertex_limit(x, P, detail::outward(X, i, v), detail::outward(X, j, v)));
            }
        }
    }
    for (const auto& sg : X.segments()) {
        const double off = dist_point_to_line_dir(x, sg.p, sg.dir);
        const bool on_line = off <= 1e-14 * (1.0 + max_abs_coord(x) + sg.length);
        auto g = [&](double s) {
            const Point<N> y = sg.at(s);
            if (on_line) return detail::kappa_i_probe(X, detail::PairProbe<N>{x, y, sg.dir});
            if (coincident(x, y)) return 0.0;
            return detail::kappa_i_probe(X, detail::PairProbe<N>{x, y, std::nullopt});
        };
        std::vector<double> anchors{0.0, sg.length, detail::project_param(sg, x)};
        best = std::max(best, detail::sampled_max(g, sg.length, anchors, 32, 40));
    }
    return best;
}

// Brute-force kappa_G over a uniform grid of pairs; a slow independent check.
template <std::size_t N>
double kappa_G_bruteforce(const SegmentSet<N>& X, const Point<N>& x, int per_segment) {
    std::vector<Point<N>> pts;
    for (const auto& g : X.segments()) {
        for (int k = 0; k < per_segment; ++k) pts.push_back(g.at(g.length * (k + 0.5) / per_segment));
    }
    double best = 0.0;
    for (std::size_t i = 0; i < pts.size(); ++i) {
        for (std::size_t j = i + 1; j < pts.size(); ++j) best = std::max(best, kappa(x, pts[i], pts[j]));
    }
    return best;
}

// Thickness (infimum of circumradii over triples of X), with a witness
// triple when the infimum is driven to zero at a corner.
template <std::size_t N>
struct ThicknessResult {
    double value = kInf;
    bool corner_witness = false;
    std::array<Point<N>, 3> witness{};
    double witness_radius = kInf;
};

template <std::size_t N>
ThicknessResult<N> thickness(const SegmentSet<N>& X, const QuadratureConfig& cfg = {}) {
    ThicknessResult<N> out;
    // a junction of two non-collinear segments carries triples of radius -> 0
    for (int v = 0; v < static_cast<int>(X.vertex_count()); ++v) {
        if (!X.is_junction(v)) continue;
        for (std::size_t i = 0; i < X.size(); ++i) {
            if (X.vertex(i, 0) != v && X.vertex(i, 1) != v) continue;
            for (std::size_t j = i + 1; j < X.size(); ++j) {
                if (X.vertex(j, 0) != v && X.vertex(j, 1) != v) continue;
                if (X.collinear(i, j)) continue;
                const Point<N>& P = X.vertex_point(v);
                const Point<N> da = detail::outward(X, i, v), db = detail::outward(X, j, v);
                double t = 0.5 * std::min(X[i].length, X[j].length);
                std::array<Point<N>, 3> tri{};
                double r = kInf;
                for (int it = 0; it < 2000; ++it) {
                    tri = {P + t * da, P + (0.5 * t) * da, P + t * db};
                    r = circumradius_points(tri[0], tri[1], tri[2]);
                    if (r <= cfg.abs_tol) break;
                    t *= 0.5;
                }
                out.value = 0.0;
                out.corner_witness = true;
                out.witness = tri;
                out.witness_radius = r;
                return out;
            }
        }
    }
    double best = 0.0;
    for (const auto& g : X.segments()) {
        auto f = [&](double s) { return kappa_G_at(X, g.at(s)); };
        best = std::max(best, detail::sampled_max(f, g.length, {0.0, g.length}, 16, 12));
    }
    out.value = best > 0.0 ? 1.0 / best : kInf;
    return out;
}

// Minimum circumradius over all triples of the given points.
template <std::size_t N>
double discrete_thickness(const std::vector<Point<N>>& pts) {
    double best = kInf;
    for (std::size_t i = 0; i < pts.size(); ++i) {
        for (std::size_t j = i + 1; j < pts.size(); ++j) {
            for (std::size_t k = j + 1; k < pts.size(); ++k) {
                best = std::min(best, circumradius_points(pts[i], pts[j], pts[k]));
            }
        }
    }
    return best;
}

}  // namespace menger
