#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numbers>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "builtin_sets.hpp"
#include "geometry.hpp"
#include "scaled_real.hpp"
#include "segment_set.hpp"

namespace menger {

// Decreasing radii r_0 > r_1 > ... kept as ScaledReal so ladders can reach
// the set-F scales. `ratio` is r_{k+1}/r_k for geometric ladders and the
// largest consecutive ratio otherwise.
struct RadiusLadder {
    std::vector<ScaledReal> radii;
    double ratio = 0.5;
    bool geometric = true;

    static constexpr std::size_t kMinLength = 8;

    static RadiusLadder geometric_ladder(const ScaledReal& r0, double ratio = 0.5, int length = 16) {
        if (!(ratio > 0.0 && ratio < 1.0)) throw std::invalid_argument("RadiusLadder: ratio outside (0, 1)");
        if (length < static_cast<int>(kMinLength)) throw std::invalid_argument("RadiusLadder: length below 8");
        if (r0.is_zero()) throw std::invalid_argument("RadiusLadder: r0 must be positive");
        RadiusLadder L;
        L.ratio = ratio;
        const ScaledReal q = ScaledReal::from_double(ratio);
        ScaledReal r = r0;
        for (int k = 0; k < length; ++k) {
            L.radii.push_back(r);
            r = r * q;
        }
        return L;
    }

    static RadiusLadder geometric_ladder(double r0, double ratio = 0.5, int length = 16) {
        if (!(r0 > 0.0) || !std::isfinite(r0)) throw std::invalid_argument("RadiusLadder: r0 must be positive");
        return geometric_ladder(ScaledReal::from_double(r0), ratio, length);
    }

    static RadiusLadder from_radii(std::vector<ScaledReal> radii) {
        RadiusLadder L;
        L.radii = std::move(radii);
        L.geometric = false;
        L.ratio = 0.0;
        for (std::size_t k = 0; k + 1 < L.radii.size(); ++k) {
            L.ratio = std::max(L.ratio, (L.radii[k + 1] / L.radii[k]).to_double());
        }
        L.validate();
        return L;
    }

    void validate() const {
        if (radii.size() < kMinLength) throw std::invalid_argument("RadiusLadder: length below 8");
        for (std::size_t k = 0; k < radii.size(); ++k) {
            if (radii[k].is_zero()) throw std::invalid_argument("RadiusLadder: radii must be positive");
            if (k > 0 && !(radii[k] < radii[k - 1])) throw std::invalid_argument("RadiusLadder: radii must decrease");
        }
        if (!(ratio > 0.0 && ratio < 1.0)) throw std::invalid_argument("RadiusLadder: ratio outside (0, 1)");
    }

    std::size_t size() const { return radii.size(); }
    // First index of the tail half used for liminf / limsup proxies.
    std::size_t tail_begin() const { return radii.size() / 2; }
};

// Radii sampling both direction regimes of the truncated F: 3/8 and 5/16,
// then 2a_m, a_m, 3a_m/4, 5a_m/8 for m = 2..n_max.
inline RadiusLadder set_F_ladder(int n_max = 4) {
    if (n_max < 3 || n_max > DyadicLadder::kMaxIndex) throw std::invalid_argument("set_F_ladder: n_max outside 3..8");
    std::vector<ScaledReal> r{ScaledReal::from_double(0.375), ScaledReal::from_double(0.3125)};
    for (int m = 2; m <= n_max; ++m) {
        const ScaledReal a = DyadicLadder::a(m);
        for (double f : {2.0, 1.0, 0.75, 0.625}) r.push_back(a * ScaledReal::from_double(f));
    }
    return RadiusLadder::from_radii(std::move(r));
}

// Axis (1 or 2) of the approximate tangent of F at 0 for radius r:
// e_1 on [a_{2n}/2, a_{2n-1}/2] and e_2 on (a_{2n+1}/2, a_{2n}/2), with a_0 = 1.
// Returns 0 below a_{kMaxIndex}/2.
inline int set_F_tangent_axis(const ScaledReal& r) {
    const ScaledReal half = ScaledReal::pow2(-1);
    for (int m = 1; m <= DyadicLadder::kMaxIndex; ++m) {
        const ScaledReal lo = DyadicLadder::a(m) * half;
        const ScaledReal hi = DyadicLadder::a(m - 1) * half;
        const bool inside = m % 2 == 0 ? (r >= lo && r <= hi) : (r > lo && r < hi);
        if (inside) return m % 2 == 0 ? 1 : 2;
        if (m == 1 && r >= hi) return 2;
    }
    return 0;
}

// Union of radial pieces {t u : t in [lo, hi]} from a common apex, with
// exact ScaledReal extents. Realizes the set F at 0 below double range.
template <std::size_t N>
struct RadialSet {
    struct Piece {
        Point<N> dir;
        ScaledReal lo, hi;
    };
    std::vector<Piece> pieces;

    static RadialSet from_blocks(const std::vector<ScaledBlock>& blocks) {
        RadialSet R;
        for (const auto& b : blocks) {
            if (b.axis < 1 || static_cast<std::size_t>(b.axis) > N) throw std::invalid_argument("RadialSet: axis out of range");
            Point<N> u{};
            u[static_cast<std::size_t>(b.axis - 1)] = 1.0;
            R.pieces.push_back({u, b.lo(), b.hi()});
        }
        return R;
    }
};

// Density queries at a fixed apex.
template <std::size_t N>
class SegmentSource {
public:
    SegmentSource(const SegmentSet<N>& X, const Point<N>& x) : X_(X), x_(x) {}

    ScaledReal ball(const ScaledReal& r) const { return nonneg(measure_in_ball(X_, x_, r.to_double())); }

    std::pair<ScaledReal, ScaledReal> split(const Point<N>& dir, double eps, const ScaledReal& r) const {
        const double rd = r.to_double();
        if (!(rd > 0.0)) return {};
        auto [in, out] = measure_cone_split(X_, Cone<N>(x_, dir, eps), rd);
        return {nonneg(in), nonneg(out)};
    }

    ScaledReal cone_annulus(const Point<N>& dir, double eps, const ScaledReal& r_in, const ScaledReal& r_out) const {
        return nonneg(measure_in_cone_annulus(X_, Cone<N>(x_, dir, eps), r_in.to_double(), r_out.to_double()));
    }

private:
    static ScaledReal nonneg(double v) { return ScaledReal::from_double(std::max(0.0, v)); }
    const SegmentSet<N>& X_;
    Point<N> x_;
};

template <std::size_t N>
class RadialSource {
public:
    explicit RadialSource(const RadialSet<N>& R) : R_(R) {}

    ScaledReal ball(const ScaledReal& r) const {
        ScaledReal s;
        for (const auto& p : R_.pieces) s += clipped(p, ScaledReal{}, r);
        return s;
    }

    std::pair<ScaledReal, ScaledReal> split(const Point<N>& dir, double eps, const ScaledReal& r) const {
        ScaledReal in, out;
        const Point<N> u = normalized(dir);
        for (const auto& p : R_.pieces) {
            const ScaledReal m = clipped(p, ScaledReal{}, r);
            (inside(p.dir, u, eps) ? in : out) += m;
        }
        return {in, out};
    }

    ScaledReal cone_annulus(const Point<N>& dir, double eps, const ScaledReal& r_in, const ScaledReal& r_out) const {
        ScaledReal s;
        const Point<N> u = normalized(dir);
        for (const auto& p : R_.pieces) {
            if (inside(p.dir, u, eps)) s += clipped(p, r_in, r_out);
        }
        return s;
    }

private:
    static bool inside(const Point<N>& piece_dir, const Point<N>& u, double eps) {
        const double a = angle_between_units(piece_dir, u);
        return a < eps || std::numbers::pi - a < eps;
    }
    // Length of the piece inside (lo_r, hi_r].
    static ScaledReal clipped(const typename RadialSet<N>::Piece& p, const ScaledReal& lo_r, const ScaledReal& hi_r) {
        const ScaledReal a = p.lo >= lo_r ? p.lo : lo_r;
        const ScaledReal b = p.hi <= hi_r ? p.hi : hi_r;
        return b > a ? b - a : ScaledReal{};
    }
    const RadialSet<N>& R_;
};

// Deterministic direction grids on the projective sphere: angles k pi / G in
// the plane, a Fibonacci spiral on the hemisphere around e_1 in space.
template <std::size_t N>
std::vector<Point<N>> direction_grid(int G) {
    if (G < 16) throw std::invalid_argument("direction_grid: need at least 16 directions");
    std::vector<Point<N>> dirs;
    if constexpr (N == 2) {
        for (int k = 0; k < G; ++k) {
            const double t = std::numbers::pi * k / G;
            dirs.push_back(Point<N>{std::cos(t), std::sin(t)});
        }
    } else if constexpr (N == 3) {
        const double golden = std::numbers::pi * (3.0 - std::sqrt(5.0));
        for (int k = 0; k < G; ++k) {
            const double z = 1.0 - (k + 0.5) / G;
            const double rho = std::sqrt(1.0 - z * z);
            const double phi = golden * k;
            dirs.push_back(Point<N>{z, rho * std::cos(phi), rho * std::sin(phi)});
        }
    } else {
        throw std::invalid_argument("direction_grid: only dimensions 2 and 3 are supported");
    }
    return dirs;
}

// Angle reported for a direction: polar angle in [0, pi) in the plane,
// angle to e_1 in space.
template <std::size_t N>
double direction_angle(const Point<N>& u) {
    if constexpr (N == 2) {
        double t = std::atan2(u[1], u[0]);
        if (t < 0.0) t += std::numbers::pi;
        if (t >= std::numbers::pi) t -= std::numbers::pi;
        return t;
    } else {
        return std::acos(std::clamp(u[0], -1.0, 1.0));
    }
}

struct TangentThresholds {
    int dir_grid = 32;
    std::vector<double> eps_list{std::numbers::pi / 16, std::numbers::pi / 8, std::numbers::pi / 4};
    double delta = 0.05;

    double eps_min() const { return *std::min_element(eps_list.begin(), eps_list.end()); }
    // Narrow cone used only to break ties between directions whose wider
    // cones capture the same pieces.
    double sharp_eps() const { return eps_min() / 8.0; }

    void validate() const {
        if (dir_grid < 16) throw std::invalid_argument("dir_grid must be at least 16");
        if (eps_list.empty()) throw std::invalid_argument("eps_list must not be empty");
        for (double e : eps_list)
            if (!(e > 0.0 && e < std::numbers::pi / 2)) throw std::invalid_argument("eps outside (0, pi/2)");
        if (!(delta >= 0.0)) throw std::invalid_argument("delta must be nonnegative");
    }
};

// Density ratios mu / (2r)^alpha per radius, and per radius, direction and
// opening angle for the cone and its complement.
struct DensityProfile {
    std::size_t dimension = 2;
    double alpha = 1.0;
    RadiusLadder ladder;
    std::vector<std::vector<double>> directions;
    std::vector<double> angles;
    std::vector<double> eps_list;
    double sharp_eps = 0.0;
    std::vector<double> measure_ratio;
    std::vector<double> in_ratio, out_ratio;  // [radius][direction][eps]
    std::vector<double> sharp_out_ratio;      // [radius][direction]

    std::size_t radii() const { return ladder.size(); }
    std::size_t dirs() const { return directions.size(); }
    std::size_t eps_count() const { return eps_list.size(); }
    std::size_t at(std::size_t r, std::size_t d, std::size_t e) const { return (r * dirs() + d) * eps_count() + e; }
    double in(std::size_t r, std::size_t d, std::size_t e) const { return in_ratio[at(r, d, e)]; }
    double out(std::size_t r, std::size_t d, std::size_t e) const { return out_ratio[at(r, d, e)]; }
    double sharp_out(std::size_t r, std::size_t d) const { return sharp_out_ratio[r * dirs() + d]; }

    // max over eps of the out-of-cone ratio.
    double score(std::size_t r, std::size_t d) const {
        double s = 0.0;
        for (std::size_t e = 0; e < eps_count(); ++e) s = std::max(s, out(r, d, e));
        return s;
    }

    // Direction with the smallest score; ties go to the smaller sharp-cone
    // out ratio, then to the lower grid index.
    std::size_t best_direction(std::size_t r) const {
        std::size_t best = 0;
        for (std::size_t d = 1; d < dirs(); ++d) {
            const double s = score(r, d), sb = score(r, best);
            if (s < sb || (s == sb && sharp_out(r, d) < sharp_out(r, best))) best = d;
        }
        return best;
    }
};

namespace detail {

inline double ratio_of(const ScaledReal& m, const ScaledReal& r, double alpha) {
    if (m.is_zero()) return 0.0;
    return (m / (r * ScaledReal::pow2(1)).pow(alpha)).to_double();
}

template <std::size_t N, class Source>
DensityProfile build_profile(const Source& src, double alpha, const RadiusLadder& ladder, const TangentThresholds& th) {
    ladder.validate();
    th.validate();
    if (!(alpha > 0.0)) throw std::invalid_argument("density_profile: alpha must be positive");
    DensityProfile P;
    P.dimension = N;
    P.alpha = alpha;
    P.ladder = ladder;
    P.eps_list = th.eps_list;
    P.sharp_eps = th.sharp_eps();
    const auto grid = direction_grid<N>(th.dir_grid);
    for (const auto& u : grid) {
        P.directions.emplace_back(u.c.begin(), u.c.end());
        P.angles.push_back(direction_angle(u));
    }
    const std::size_t R = ladder.size(), D = grid.size(), E = th.eps_list.size();
    P.in_ratio.resize(R * D * E);
    P.out_ratio.resize(R * D * E);
    P.sharp_out_ratio.resize(R * D);
    for (std::size_t i = 0; i < R; ++i) {
        const ScaledReal& r = ladder.radii[i];
        P.measure_ratio.push_back(ratio_of(src.ball(r), r, alpha));
        for (std::size_t d = 0; d < D; ++d) {
            for (std::size_t e = 0; e < E; ++e) {
                auto [in, out] = src.split(grid[d], th.eps_list[e], r);
                P.in_ratio[P.at(i, d, e)] = ratio_of(in, r, alpha);
                P.out_ratio[P.at(i, d, e)] = ratio_of(out, r, alpha);
            }
            P.sharp_out_ratio[i * D + d] = ratio_of(src.split(grid[d], P.sharp_eps, r).second, r, alpha);
        }
    }
    return P;
}

}  // namespace detail

template <std::size_t N>
DensityProfile density_profile(const SegmentSet<N>& X, const Point<N>& x, double alpha, const RadiusLadder& ladder,
                               const TangentThresholds& th = {}) {
    return detail::build_profile<N>(SegmentSource<N>(X, x), alpha, ladder, th);
}

template <std::size_t N>
DensityProfile density_profile(const RadialSet<N>& R, double alpha, const RadiusLadder& ladder,
                               const TangentThresholds& th = {}) {
    return detail::build_profile<N>(RadialSource<N>(R), alpha, ladder, th);
}

struct DensityBounds {
    double lower = 0.0;
    double upper = 0.0;
    std::size_t tail_begin = 0;
    std::size_t tail_end = 0;
};

// min and max of the measure ratio over the tail half of the ladder.
inline DensityBounds lower_upper_density(const DensityProfile& P) {
    if (P.radii() < RadiusLadder::kMinLength) throw std::invalid_argument("lower_upper_density: ladder too short");
    DensityBounds b;
    b.tail_begin = P.ladder.tail_begin();
    b.tail_end = P.radii();
    b.lower = std::numeric_limits<double>::infinity();
    b.upper = 0.0;
    for (std::size_t i = b.tail_begin; i < b.tail_end; ++i) {
        b.lower = std::min(b.lower, P.measure_ratio[i]);
        b.upper = std::max(b.upper, P.measure_ratio[i]);
    }
    return b;
}

enum class TangentVerdict { Strong, Weak, None };

inline std::string to_string(TangentVerdict v) {
    switch (v) {
        case TangentVerdict::Strong: return "strong";
        case TangentVerdict::Weak: return "weak";
        case TangentVerdict::None: return "none";
    }
    return "?";
}

struct TangentReport {
    TangentVerdict verdict = TangentVerdict::None;
    double delta = 0.0;
    std::size_t tail_begin = 0;
    // Strong: the fixed direction.
    std::optional<std::size_t> direction;
    // Per radius over the whole ladder: the direction used and its score.
    std::vector<std::size_t> direction_map;
    std::vector<double> score;
    // Strong / Weak: max over tail radii of the out ratio of the chosen
    // direction, per eps.
    std::vector<double> max_out_per_eps;
    // None: two directions at least 2 eps_min apart and their in-cone ratios
    // (at eps_min) over the tail radii.
    std::array<std::size_t, 2> witness{0, 0};
    std::array<std::vector<double>, 2> witness_density;
    std::array<double, 2> witness_score{0.0, 0.0};
    double witness_separation = 0.0;
    DensityProfile profile;

    double min_witness_density() const {
        double m = std::numeric_limits<double>::infinity();
        for (const auto& w : witness_density)
            for (double v : w) m = std::min(m, v);
        return m;
    }
};

namespace detail {

inline double max_tail_score(const DensityProfile& P, std::size_t d) {
    double s = 0.0;
    for (std::size_t i = P.ladder.tail_begin(); i < P.radii(); ++i) s = std::max(s, P.score(i, d));
    return s;
}

inline double max_tail_sharp(const DensityProfile& P, std::size_t d) {
    double s = 0.0;
    for (std::size_t i = P.ladder.tail_begin(); i < P.radii(); ++i) s = std::max(s, P.sharp_out(i, d));
    return s;
}

// Grid direction with score <= delta at every tail radius, preferring the
// smallest worst-case score, then the smallest worst-case sharp score.
inline std::optional<std::size_t> fixed_direction(const DensityProfile& P, double delta) {
    std::optional<std::size_t> best;
    for (std::size_t d = 0; d < P.dirs(); ++d) {
        const double s = max_tail_score(P, d);
        if (s > delta) continue;
        if (!best) {
            best = d;
            continue;
        }
        const double sb = max_tail_score(P, *best);
        if (s < sb || (s == sb && max_tail_sharp(P, d) < max_tail_sharp(P, *best))) best = d;
    }
    return best;
}

inline void fill_constant(TangentReport& rep, std::size_t d) {
    const auto& P = rep.profile;
    rep.direction_map.assign(P.radii(), d);
    rep.score.clear();
    for (std::size_t i = 0; i < P.radii(); ++i) rep.score.push_back(P.score(i, d));
    rep.max_out_per_eps.assign(P.eps_count(), 0.0);
    for (std::size_t i = P.ladder.tail_begin(); i < P.radii(); ++i)
        for (std::size_t e = 0; e < P.eps_count(); ++e) rep.max_out_per_eps[e] = std::max(rep.max_out_per_eps[e], P.out(i, d, e));
}

inline double projective_angle(const std::vector<double>& a, const std::vector<double>& b) {
    double c = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) c += a[k] * b[k];
    const double t = std::acos(std::clamp(std::abs(c), 0.0, 1.0));
    return t;
}

inline TangentReport classify_weak(DensityProfile P, double delta) {
    TangentReport rep;
    rep.delta = delta;
    rep.tail_begin = P.ladder.tail_begin();
    rep.profile = std::move(P);
    const auto& Q = rep.profile;

    if (auto d = fixed_direction(Q, delta)) {
        rep.verdict = TangentVerdict::Weak;
        fill_constant(rep, *d);
        return rep;
    }

    bool weak = true;
    for (std::size_t i = 0; i < Q.radii(); ++i) {
        const std::size_t d = Q.best_direction(i);
        rep.direction_map.push_back(d);
        rep.score.push_back(Q.score(i, d));
        if (i >= rep.tail_begin && Q.score(i, d) > delta) weak = false;
    }
    if (weak) {
        rep.verdict = TangentVerdict::Weak;
        rep.max_out_per_eps.assign(Q.eps_count(), 0.0);
        for (std::size_t i = rep.tail_begin; i < Q.radii(); ++i)
            for (std::size_t e = 0; e < Q.eps_count(); ++e)
                rep.max_out_per_eps[e] = std::max(rep.max_out_per_eps[e], Q.out(i, rep.direction_map[i], e));
        return rep;
    }

    // None: the direction with the smallest worst-case score, and the densest
    // cone well separated from it.
    rep.verdict = TangentVerdict::None;
    std::size_t e_min = 0;
    for (std::size_t e = 1; e < Q.eps_count(); ++e)
        if (Q.eps_list[e] < Q.eps_list[e_min]) e_min = e;
    const double eps0 = Q.eps_list[e_min];
    auto tail_min_in = [&](std::size_t d) {
        double m = std::numeric_limits<double>::infinity();
        for (std::size_t i = rep.tail_begin; i < Q.radii(); ++i) m = std::min(m, Q.in(i, d, e_min));
        return m;
    };
    std::size_t w1 = 0;
    for (std::size_t d = 1; d < Q.dirs(); ++d) {
        const double s = max_tail_score(Q, d), sb = max_tail_score(Q, w1);
        if (s < sb || (s == sb && max_tail_sharp(Q, d) < max_tail_sharp(Q, w1))) w1 = d;
    }
    auto tail_min_sharp_in = [&](std::size_t d) {
        double m = std::numeric_limits<double>::infinity();
        for (std::size_t i = rep.tail_begin; i < Q.radii(); ++i) m = std::min(m, Q.measure_ratio[i] - Q.sharp_out(i, d));
        return m;
    };
    std::optional<std::size_t> w2;
    for (std::size_t d = 0; d < Q.dirs(); ++d) {
        if (projective_angle(Q.directions[d], Q.directions[w1]) < 2.0 * eps0) continue;
        if (!w2) {
            w2 = d;
            continue;
        }
        const double m = tail_min_in(d), mb = tail_min_in(*w2);
        if (m > mb || (m == mb && tail_min_sharp_in(d) > tail_min_sharp_in(*w2))) w2 = d;
    }
    rep.witness = {w1, w2.value_or(w1)};
    rep.witness_separation = projective_angle(Q.directions[rep.witness[0]], Q.directions[rep.witness[1]]);
    for (int k = 0; k < 2; ++k) {
        const std::size_t d = rep.witness[static_cast<std::size_t>(k)];
        rep.witness_score[static_cast<std::size_t>(k)] = max_tail_score(Q, d);
        for (std::size_t i = rep.tail_begin; i < Q.radii(); ++i)
            rep.witness_density[static_cast<std::size_t>(k)].push_back(Q.in(i, d, e_min));
    }
    return rep;
}

}  // namespace detail

// Weak approximate tangent: for every tail radius some grid direction has
// out ratio <= delta at every eps. A constant map is reported whenever one
// direction works for the whole tail.
inline TangentReport detect_weak_tangent(const DensityProfile& P, double delta) {
    return detail::classify_weak(P, delta);
}

// Strong approximate tangent: one grid direction with out ratio <= delta at
// every eps and every tail radius. Falls back to weak detection otherwise.
inline TangentReport detect_strong_tangent(const DensityProfile& P, double delta) {
    if (auto d = detail::fixed_direction(P, delta)) {
        TangentReport rep;
        rep.verdict = TangentVerdict::Strong;
        rep.delta = delta;
        rep.tail_begin = P.ladder.tail_begin();
        rep.direction = *d;
        rep.profile = P;
        detail::fill_constant(rep, *d);
        return rep;
    }
    return detail::classify_weak(P, delta);
}

template <std::size_t N>
TangentReport detect_strong_tangent(const SegmentSet<N>& X, const Point<N>& x, double alpha, const RadiusLadder& ladder,
                                    const TangentThresholds& th = {}) {
    return detect_strong_tangent(density_profile(X, x, alpha, ladder, th), th.delta);
}

template <std::size_t N>
TangentReport detect_weak_tangent(const SegmentSet<N>& X, const Point<N>& x, double alpha, const RadiusLadder& ladder,
                                  const TangentThresholds& th = {}) {
    return detect_weak_tangent(density_profile(X, x, alpha, ladder, th), th.delta);
}

struct AnnulusRow {
    ScaledReal r;
    double measure_a = 0.0;
    double measure_b = 0.0;
};

struct AnnulusDiagnostic {
    double q0 = 0.0;
    std::vector<AnnulusRow> rows;
    // Largest c with c r^alpha <= min(measure_a, measure_b) at every radius.
    double c = 0.0;
};

namespace detail {

template <std::size_t N, class Source>
AnnulusDiagnostic annulus_rows(const Source& src, double alpha, const RadiusLadder& ladder, double q0,
                               const Cone<N>& A, const Cone<N>& B) {
    if (!(q0 > 0.0 && q0 < 1.0)) throw std::invalid_argument("annulus_diagnostic: q0 outside (0, 1)");
    ladder.validate();
    AnnulusDiagnostic out;
    out.q0 = q0;
    out.c = std::numeric_limits<double>::infinity();
    const ScaledReal q = ScaledReal::from_double(q0);
    for (const auto& r : ladder.radii) {
        AnnulusRow row;
        row.r = r;
        const ScaledReal ma = src.cone_annulus(A.direction, A.half_angle, r * q, r);
        const ScaledReal mb = src.cone_annulus(B.direction, B.half_angle, r * q, r);
        row.measure_a = ma.to_double();
        row.measure_b = mb.to_double();
        const ScaledReal lo = ma <= mb ? ma : mb;
        out.c = std::min(out.c, lo.is_zero() ? 0.0 : (lo / r.pow(alpha)).to_double());
        out.rows.push_back(row);
    }
    return out;
}

}  // namespace detail

// Lengths of X in B_r(x) \ B_{q0 r}(x) inside each of two cones with apex x.
template <std::size_t N>
AnnulusDiagnostic annulus_diagnostic(const SegmentSet<N>& X, const Point<N>& x, double alpha, const RadiusLadder& ladder,
                                     double q0, const Cone<N>& A, const Cone<N>& B) {
    if (!(A.apex == x) || !(B.apex == x)) throw std::invalid_argument("annulus_diagnostic: cone apex must be x");
    return detail::annulus_rows(SegmentSource<N>(X, x), alpha, ladder, q0, A, B);
}

template <std::size_t N>
AnnulusDiagnostic annulus_diagnostic(const RadialSet<N>& R, double alpha, const RadiusLadder& ladder, double q0,
                                     const Cone<N>& A, const Cone<N>& B) {
    return detail::annulus_rows(RadialSource<N>(R), alpha, ladder, q0, A, B);
}

// ---- serialization ----

inline nlohmann::json to_json(const ScaledReal& v) {
    return nlohmann::json{{"mantissa", v.mantissa()}, {"exp2", v.exp2()}, {"value", v.to_double()}};
}

inline nlohmann::json to_json(const DensityProfile& P) {
    using nlohmann::json;
    json radii = json::array();
    for (const auto& r : P.ladder.radii) radii.push_back(to_json(r));
    const auto b = lower_upper_density(P);
    return json{{"dimension", P.dimension},
                {"alpha", P.alpha},
                {"ladder", {{"radii", radii}, {"ratio", P.ladder.ratio}, {"geometric", P.ladder.geometric}}},
                {"directions", P.directions},
                {"direction_angles", P.angles},
                {"eps_list", P.eps_list},
                {"sharp_eps", P.sharp_eps},
                {"measure_ratio", P.measure_ratio},
                {"theta_lower", b.lower},
                {"theta_upper", b.upper},
                {"tail_window", {b.tail_begin, b.tail_end}}};
}

inline nlohmann::json to_json(const TangentReport& rep) {
    using nlohmann::json;
    const auto& P = rep.profile;
    json j{{"verdict", to_string(rep.verdict)},
           {"delta", rep.delta},
           {"eps_list", P.eps_list},
           {"dir_grid", P.dirs()},
           {"tail_begin", rep.tail_begin},
           {"profile", to_json(P)}};
    json map = json::array();
    for (std::size_t i = 0; i < rep.direction_map.size(); ++i) {
        const std::size_t d = rep.direction_map[i];
        map.push_back({{"r", to_json(P.ladder.radii[i])},
                       {"direction", P.directions[d]},
                       {"angle", P.angles[d]},
                       {"out_ratio", rep.score[i]}});
    }
    j["direction_map"] = map;
    if (rep.direction) {
        j["direction"] = P.directions[*rep.direction];
        j["direction_angle"] = P.angles[*rep.direction];
    }
    if (rep.verdict == TangentVerdict::None) {
        json w = json::array();
        for (std::size_t k = 0; k < 2; ++k) {
            w.push_back({{"direction", P.directions[rep.witness[k]]},
                         {"angle", P.angles[rep.witness[k]]},
                         {"max_out_ratio", rep.witness_score[k]},
                         {"in_ratio_eps_min", rep.witness_density[k]}});
        }
        j["witness_cones"] = w;
        j["witness_separation"] = rep.witness_separation;
    } else {
        j["max_out_ratio_per_eps"] = rep.max_out_per_eps;
    }
    return j;
}

// One row per radius: r_exp2, r_mantissa, ratio, best_direction_angle, out_ratio.
inline std::string profile_csv(const DensityProfile& P) {
    std::ostringstream os;
    os.precision(17);
    os << "r_exp2,r_mantissa,ratio,best_direction_angle,out_ratio\n";
    for (std::size_t i = 0; i < P.radii(); ++i) {
        const std::size_t d = P.best_direction(i);
        os << P.ladder.radii[i].exp2() << ',' << P.ladder.radii[i].mantissa() << ',' << P.measure_ratio[i] << ','
           << P.angles[d] << ',' << P.score(i, d) << '\n';
    }
    return os.str();
}

// Same columns, with the direction actually chosen by the report.
inline std::string tangent_csv(const TangentReport& rep) {
    const auto& P = rep.profile;
    std::ostringstream os;
    os.precision(17);
    os << "r_exp2,r_mantissa,ratio,best_direction_angle,out_ratio\n";
    for (std::size_t i = 0; i < P.radii(); ++i) {
        const std::size_t d = rep.direction_map[i];
        os << P.ladder.radii[i].exp2() << ',' << P.ladder.radii[i].mantissa() << ',' << P.measure_ratio[i] << ','
           << P.angles[d] << ',' << rep.score[i] << '\n';
    }
    return os.str();
}

}  // namespace menger
