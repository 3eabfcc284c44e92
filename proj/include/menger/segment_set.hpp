#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "geometry.hpp"
#include "scaled_real.hpp"

namespace menger {

// Closed segment [p, q] with p lexicographically smaller than q.
template <std::size_t N>
struct Segment {
    Point<N> p;
    Point<N> q;
    double length = 0.0;
    Point<N> dir;  // unit vector from p to q

    Segment() = default;
    Segment(const Point<N>& a, const Point<N>& b) {
        if (!all_finite(a) || !all_finite(b)) throw std::invalid_argument("Segment: non-finite endpoint");
        if (coincident(a, b)) throw std::invalid_argument("Segment: zero-length segment");
        if (b < a) {
            p = b;
            q = a;
        } else {
            p = a;
            q = b;
        }
        length = distance(p, q);
        dir = (1.0 / length) * (q - p);
    }

    Point<N> at(double s) const { return p + s * dir; }  // arclength parameter
    Point<N> at_unit(double t) const { return p + (t * length) * dir; }

    friend bool operator==(const Segment& a, const Segment& b) { return a.p == b.p && a.q == b.q; }
    friend bool operator<(const Segment& a, const Segment& b) {
        if (a.p != b.p) return a.p < b.p;
        return a.q < b.q;
    }
};

// Exact dyadic block {a on `axis`, a in [2^exp2_lo, 2^exp2_hi]} used for the
// scale-separated blocks of the set F. `axis` is 1-based.
struct ScaledBlock {
    int axis = 1;
    std::int64_t exp2_lo = 0;
    std::int64_t exp2_hi = 0;

    ScaledReal lo() const { return ScaledReal::pow2(exp2_lo); }
    ScaledReal hi() const { return ScaledReal::pow2(exp2_hi); }
    ScaledReal measure() const { return hi() - lo(); }
    friend bool operator==(const ScaledBlock&, const ScaledBlock&) = default;
};

// Open double cone {z : angle(z - apex, +-direction) < half_angle}.
template <std::size_t N>
struct Cone {
    Point<N> apex;
    Point<N> direction;
    double half_angle = 0.0;

    Cone(const Point<N>& a, const Point<N>& d, double eps) : apex(a), direction(normalized(d)), half_angle(eps) {
        if (!(eps > 0.0 && eps < std::numbers::pi)) throw std::invalid_argument("Cone: half angle outside (0, pi)");
    }

    bool contains(const Point<N>& z) const {
        if (coincident(z, apex)) return false;
        const double a = angle_at(apex, z, apex + direction);
        return a < half_angle || std::numbers::pi - a < half_angle;
    }
};

// Closed arclength interval [lo, hi] on a segment.
struct Interval {
    double lo = 0.0;
    double hi = 0.0;
    double length() const { return hi > lo ? hi - lo : 0.0; }
    bool empty() const { return !(hi > lo); }
};

// Finite union of segments with pairwise overlaps of zero length.
template <std::size_t N>
class SegmentSet {
public:
    SegmentSet() = default;

    const std::vector<Segment<N>>& segments() const { return segs_; }
    std::size_t size() const { return segs_.size(); }
    const Segment<N>& operator[](std::size_t i) const { return segs_[i]; }
    bool empty() const { return segs_.empty(); }
    static constexpr std::size_t dimension() { return N; }

    const std::vector<ScaledBlock>& scaled_blocks() const { return blocks_; }
    void set_scaled_blocks(std::vector<ScaledBlock> b) { blocks_ = std::move(b); }

    double total_measure() const {
        double s = 0.0;
        for (const auto& g : segs_) s += g.length;
        return s;
    }

    // Vertex id of endpoint p (end = 0) or q (end = 1) of segment i.
    int vertex(std::size_t i, int end) const { return end == 0 ? vp_[i] : vq_[i]; }
    const Point<N>& vertex_point(int v) const { return verts_[static_cast<std::size_t>(v)]; }
    std::size_t vertex_count() const { return verts_.size(); }
    // Number of segments having the vertex as an endpoint.
    int vertex_degree(int v) const { return degree_[static_cast<std::size_t>(v)]; }
    // True when at least two segments end at the vertex.
    bool is_junction(int v) const { return vertex_degree(v) >= 2; }

    // Whether segments i and j lie on a common line.
    bool collinear(std::size_t i, std::size_t j) const {
        if (i == j) return true;
        return collinear_segments(segs_[i], segs_[j]);
    }

    static bool collinear_segments(const Segment<N>& a, const Segment<N>& b) {
        if (wedge_norm(a.dir, b.dir) > 1e-12) return false;
        const double tol = 1e-14 * (1.0 + std::max(max_abs_coord(a.p), max_abs_coord(b.p)) + a.length + b.length);
        return dist_point_to_line_dir(b.p, a.p, a.dir) <= tol && dist_point_to_line_dir(b.q, a.p, a.dir) <= tol;
    }

    template <std::size_t M>
    friend SegmentSet<M> make_segment_set_from(std::vector<Segment<M>> raw);

private:
    std::vector<Segment<N>> segs_;
    std::vector<ScaledBlock> blocks_;
    std::vector<Point<N>> verts_;
    std::vector<int> vp_, vq_, degree_;

    void index_vertices() {
        verts_.clear();
        vp_.assign(segs_.size(), -1);
        vq_.assign(segs_.size(), -1);
        auto find_or_add = [&](const Point<N>& x) {
            for (std::size_t v = 0; v < verts_.size(); ++v) {
                if (coincident(verts_[v], x)) return static_cast<int>(v);
            }
            verts_.push_back(x);
            return static_cast<int>(verts_.size() - 1);
        };
        for (std::size_t i = 0; i < segs_.size(); ++i) {
            vp_[i] = find_or_add(segs_[i].p);
            vq_[i] = find_or_add(segs_[i].q);
        }
        degree_.assign(verts_.size(), 0);
        for (std::size_t i = 0; i < segs_.size(); ++i) {
            ++degree_[static_cast<std::size_t>(vp_[i])];
            ++degree_[static_cast<std::size_t>(vq_[i])];
        }
    }
};

namespace detail {

template <std::size_t N>
double point_scale(const Point<N>& a) {
    return 1.0 + max_abs_coord(a);
}

// Arclength parameter of x projected on the line of g.
template <std::size_t N>
double project_param(const Segment<N>& g, const Point<N>& x) {
    return dot(x - g.p, g.dir);
}

// Merges collinear segments whose parameter intervals overlap or abut.
template <std::size_t N>
std::vector<Segment<N>> merge_collinear(std::vector<Segment<N>> segs) {
    bool changed = true;
    while (changed) {
        changed = false;
        for (std::size_t i = 0; i < segs.size() && !changed; ++i) {
            for (std::size_t j = i + 1; j < segs.size() && !changed; ++j) {
                const auto& a = segs[i];
                const auto& b = segs[j];
                if (!SegmentSet<N>::collinear_segments(a, b)) continue;
                const double tb0 = project_param(a, b.p);
                const double tb1 = project_param(a, b.q);
                const double lo = std::min(tb0, tb1), hi = std::max(tb0, tb1);
                const double tol = 1e-14 * (point_scale(a.p) + point_scale(a.q) + a.length);
                if (hi < -tol || lo > a.length + tol) continue;
                // union of the two parameter intervals; keep original endpoint coordinates
                Point<N> first = tb0 < 0.0 || tb1 < 0.0 ? (tb0 < tb1 ? b.p : b.q) : a.p;
                Point<N> last = tb0 > a.length || tb1 > a.length ? (tb0 > tb1 ? b.p : b.q) : a.q;
                segs[i] = Segment<N>(first, last);
                segs.erase(segs.begin() + static_cast<std::ptrdiff_t>(j));
                changed = true;
            }
        }
    }
    return segs;
}

// Interior arclength parameters at which `g` must be split: endpoints of other
// segments lying on g and transversal crossings.
template <std::size_t N>
std::vector<std::pair<double, Point<N>>> split_points(const Segment<N>& g, const std::vector<Segment<N>>& all) {
    std::vector<std::pair<double, Point<N>>> out;
    const double tol = 1e-14 * (g.length + point_scale(g.p));
    auto consider = [&](const Point<N>& x) {
        const double t = project_param(g, x);
        if (t <= tol || t >= g.length - tol) return;
        if (dist_point_to_line_dir(x, g.p, g.dir) > tol) return;
        out.emplace_back(t, x);
    };
    for (const auto& h : all) {
        if (h == g) continue;
        consider(h.p);
        consider(h.q);
        if (SegmentSet<N>::collinear_segments(g, h)) continue;
        // closest points of the two carrier lines
        const Point<N> w0 = g.p - h.p;
        const double b = dot(g.dir, h.dir);
        const double den = 1.0 - b * b;
        if (den <= 1e-24) continue;
        const double d = dot(g.dir, w0), e = dot(h.dir, w0);
        const double sg = (b * e - d) / den;
        const double sh = (e - b * d) / den;
        const double htol = 1e-14 * (h.length + point_scale(h.p));
        if (sg <= tol || sg >= g.length - tol || sh <= htol || sh >= h.length - htol) continue;
        const Point<N> xg = g.at(sg), xh = h.at(sh);
        if (distance(xg, xh) > std::max(tol, htol)) continue;
        out.emplace_back(sg, xg);
    }
    std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
    return out;
}

}  // namespace detail

template <std::size_t N>
SegmentSet<N> make_segment_set_from(std::vector<Segment<N>> raw) {
    auto merged = detail::merge_collinear(std::move(raw));
    // crossing points are computed once on each participant; reuse the value
    // found on the lexicographically first segment so both halves share it
    std::vector<Segment<N>> pieces;
    for (const auto& g : merged) {
        auto cuts = detail::split_points(g, merged);
        Point<N> start = g.p;
        for (const auto& [t, x] : cuts) {
            if (coincident(start, x)) continue;
            pieces.emplace_back(start, x);
            start = x;
        }
        if (!coincident(start, g.q)) pieces.emplace_back(start, g.q);
    }
    std::sort(pieces.begin(), pieces.end());
    SegmentSet<N> out;
    out.segs_ = std::move(pieces);
    out.index_vertices();
    return out;
}

// Builds a normalized set from endpoint pairs: collinear overlaps are merged,
// segments are split at junctions and crossings, and the result is sorted.
template <std::size_t N>
SegmentSet<N> make_segment_set(const std::vector<std::pair<Point<N>, Point<N>>>& pairs) {
    std::vector<Segment<N>> raw;
    raw.reserve(pairs.size());
    for (const auto& [a, b] : pairs) raw.emplace_back(a, b);
    return make_segment_set_from(std::move(raw));
}

// Arclength interval of g inside the closed ball B_r(x).
template <std::size_t N>
Interval ball_interval(const Segment<N>& g, const Point<N>& x, double r) {
    const double t0 = detail::project_param(g, x);
    const double h = dist_point_to_line_dir(x, g.p, g.dir);
    if (h > r) return {0.0, 0.0};
    const double w = std::sqrt((r - h) * (r + h));
    return {std::max(0.0, t0 - w), std::min(g.length, t0 + w)};
}

template <std::size_t N>
double measure_in_ball(const SegmentSet<N>& X, const Point<N>& x, double r) {
    if (!(r > 0.0)) throw std::invalid_argument("measure_in_ball: r must be positive");
    double s = 0.0;
    for (const auto& g : X.segments()) s += ball_interval(g, x, r).length();
    return s;
}

// Length in the closed-outer, open-inner annulus.
template <std::size_t N>
double measure_in_annulus(const SegmentSet<N>& X, const Point<N>& x, double r_in, double r_out) {
    if (!(r_in >= 0.0 && r_in < r_out)) throw std::invalid_argument("measure_in_annulus: need 0 <= r_in < r_out");
    double s = 0.0;
    for (const auto& g : X.segments()) {
        const double outer = ball_interval(g, x, r_out).length();
        const double inner = r_in > 0.0 ? ball_interval(g, x, r_in).length() : 0.0;
        s += outer - inner;
    }
    return s;
}

namespace detail {

// Splits [I.lo, I.hi] on g into lengths (inside cone, outside cone).
template <std::size_t N>
std::pair<double, double> cone_split(const Segment<N>& g, Interval I, const Cone<N>& c) {
    if (I.empty()) return {0.0, 0.0};
    const Point<N> w0 = g.p - c.apex;
    const double ce = std::cos(c.half_angle);
    const double c2 = ce * ce;
    const double al = dot(w0, c.direction), be = dot(g.dir, c.direction);
    // g(s) = (v.e)^2 - cos^2 |v|^2, v = w0 + s dir; inside the cone iff g(s) > 0
    const double A = be * be - c2;
    const double B = 2.0 * (al * be - c2 * dot(w0, g.dir));
    const double C = al * al - c2 * dot(w0, w0);
    std::vector<double> cuts{I.lo};
    // the foot of the apex is a cut so no midpoint test lands on the apex
    const double foot = -dot(w0, g.dir);
    if (foot > I.lo && foot < I.hi) cuts.push_back(foot);
    const double scale = std::max({std::abs(A), std::abs(B), std::abs(C)});
    if (std::abs(A) > 1e-15 * scale) {
        const double disc = B * B - 4.0 * A * C;
        if (disc > 0.0) {
            const double sq = std::sqrt(disc);
            const double qq = -0.5 * (B + std::copysign(sq, B));
            double r1 = qq / A;
            double r2 = qq != 0.0 ? C / qq : r1;
            if (r1 > r2) std::swap(r1, r2);
            for (double r : {r1, r2}) {
                if (r > I.lo && r < I.hi) cuts.push_back(r);
            }
        }
    } else if (std::abs(B) > 0.0) {
        const double r = -C / B;
        if (r > I.lo && r < I.hi) cuts.push_back(r);
    }
    cuts.push_back(I.hi);
    std::sort(cuts.begin(), cuts.end());
    double in = 0.0, out = 0.0;
    for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
        const double len = cuts[k + 1] - cuts[k];
        if (len <= 0.0) continue;
        if (c.contains(g.at(0.5 * (cuts[k] + cuts[k + 1])))) {
            in += len;
        } else {
            out += len;
        }
    }
    return {in, out};
}

}  // namespace detail

// Lengths of X inside the closed ball B_r(apex), split into (inside cone, outside cone).
template <std::size_t N>
std::pair<double, double> measure_cone_split(const SegmentSet<N>& X, const Cone<N>& c, double r) {
    if (!(r > 0.0)) throw std::invalid_argument("measure_cone_split: r must be positive");
    double in = 0.0, out = 0.0;
    for (const auto& g : X.segments()) {
        auto [a, b] = detail::cone_split(g, ball_interval(g, c.apex, r), c);
        in += a;
        out += b;
    }
    return {in, out};
}

template <std::size_t N>
double measure_in_cone_complement(const SegmentSet<N>& X, const Cone<N>& c, double r) {
    return measure_cone_split(X, c, r).second;
}

template <std::size_t N>
double measure_in_cone(const SegmentSet<N>& X, const Cone<N>& c, double r) {
    return measure_cone_split(X, c, r).first;
}

// Length of X inside the closed-outer, open-inner annulus and the open cone.
template <std::size_t N>
double measure_in_cone_annulus(const SegmentSet<N>& X, const Cone<N>& c, double r_in, double r_out) {
    double s = 0.0;
    for (const auto& g : X.segments()) {
        const Interval outer = ball_interval(g, c.apex, r_out);
        if (outer.empty()) continue;
        if (r_in <= 0.0) {
            s += detail::cone_split(g, outer, c).first;
            continue;
        }
        const Interval inner = ball_interval(g, c.apex, r_in);
        if (inner.empty()) {
            s += detail::cone_split(g, outer, c).first;
        } else {
            s += detail::cone_split(g, Interval{outer.lo, inner.lo}, c).first;
            s += detail::cone_split(g, Interval{inner.hi, outer.hi}, c).first;
        }
    }
    return s;
}

// Arclength-uniform point for u in [0, 1), walking segments in canonical order.
template <std::size_t N>
Point<N> sample_point(const SegmentSet<N>& X, double u) {
    if (X.empty()) throw std::invalid_argument("sample_point: empty set");
    if (!(u >= 0.0 && u < 1.0)) throw std::invalid_argument("sample_point: u outside [0, 1)");
    double s = u * X.total_measure();
    for (const auto& g : X.segments()) {
        if (s < g.length) return g.at(s);
        s -= g.length;
    }
    return X.segments().back().q;
}

// X intersected with the closed ball, as a normalized set. Pieces shorter than
// the coincidence tolerance are dropped.
template <std::size_t N>
SegmentSet<N> clip_to_ball(const SegmentSet<N>& X, const Point<N>& x, double r) {
    std::vector<Segment<N>> pieces;
    for (const auto& g : X.segments()) {
        const Interval I = ball_interval(g, x, r);
        if (I.empty()) continue;
        const Point<N> a = I.lo <= 0.0 ? g.p : g.at(I.lo);
        const Point<N> b = I.hi >= g.length ? g.q : g.at(I.hi);
        if (coincident(a, b)) continue;
        pieces.emplace_back(a, b);
    }
    return make_segment_set_from(std::move(pieces));
}

// Sub-set consisting of the listed segments of X.
template <std::size_t N>
SegmentSet<N> subset(const SegmentSet<N>& X, const std::vector<std::size_t>& idx) {
    std::vector<Segment<N>> pieces;
    for (std::size_t i : idx) pieces.push_back(X[i]);
    return make_segment_set_from(std::move(pieces));
}

// Orthonormal pair spanning a coordinate plane for a planar rotation.
template <std::size_t N>
struct RotationPlane {
    Point<N> u;
    Point<N> v;
};

template <std::size_t N>
Point<N> rotate_point(const Point<N>& y, const Point<N>& x, const RotationPlane<N>& pl, double angle) {
    const Point<N> w = y - x;
    const double a = dot(w, pl.u), b = dot(w, pl.v);
    const double c = std::cos(angle), s = std::sin(angle);
    // the component orthogonal to the plane is fixed
    const Point<N> rest = w - a * pl.u - b * pl.v;
    return x + rest + (c * a - s * b) * pl.u + (s * a + c * b) * pl.v;
}

// base union its image under the rotation about x by `angle` in the plane.
template <std::size_t N>
SegmentSet<N> rotate_union(const SegmentSet<N>& base, const Point<N>& x, const RotationPlane<N>& pl, double angle) {
    if (std::abs(norm(pl.u) - 1.0) > 1e-12 || std::abs(norm(pl.v) - 1.0) > 1e-12 || std::abs(dot(pl.u, pl.v)) > 1e-12) {
        throw std::invalid_argument("rotate_union: plane vectors are not orthonormal");
    }
    if (!(angle > 0.0 && angle < std::numbers::pi)) throw std::invalid_argument("rotate_union: angle outside (0, pi)");
    std::vector<Segment<N>> pieces(base.segments().begin(), base.segments().end());
    for (const auto& g : base.segments()) {
        pieces.emplace_back(rotate_point(g.p, x, pl, angle), rotate_point(g.q, x, pl, angle));
    }
    auto out = make_segment_set_from(std::move(pieces));
    out.set_scaled_blocks(base.scaled_blocks());
    return out;
}

template <std::size_t N>
Point<N> unit_vector(std::size_t axis) {
    Point<N> e{};
    e[axis] = 1.0;
    return e;
}

}  // namespace menger
