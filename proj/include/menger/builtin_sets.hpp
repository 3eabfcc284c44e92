#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

#include "scaled_real.hpp"
#include "segment_set.hpp"

namespace menger {

// The T-shape ([-1,1] x {0}) u ({0} x [0,1]); after normalization its
// segments are E1 = [-1,0] x {0}, E2 = {0} x [0,1], E3 = [0,1] x {0}.
inline SegmentSet<2> set_E() {
    return make_segment_set<2>({{{-1.0, 0.0}, {1.0, 0.0}}, {{0.0, 0.0}, {0.0, 1.0}}});
}

// Component k (1-based: 1 = left arm, 2 = stem, 3 = right arm) of set_E().
inline SegmentSet<2> set_E_part(int k) {
    const auto E = set_E();
    if (k < 1 || k > 3) throw std::invalid_argument("set_E_part: index outside 1..3");
    return subset(E, {static_cast<std::size_t>(k - 1)});
}

// Exponents e_n = n^n n^3 and scales a_n = 2^(-e_n) of the set F.
struct DyadicLadder {
    static constexpr int kMaxIndex = 8;

    // e_n for 0 <= n <= 8 (e_0 = 0, i.e. a_0 = 1).
    static std::int64_t exponent(int n) {
        if (n < 0 || n > kMaxIndex) throw std::out_of_range("DyadicLadder: index outside 0..8");
        if (n == 0) return 0;
        std::int64_t nn = 1;
        for (int i = 0; i < n; ++i) nn *= n;
        return nn * n * n * n;
    }

    static ScaledReal a(int n) { return ScaledReal::pow2(-exponent(n)); }

    // 1-based axis of block B_n: axis 1 for even n, axis 2 for odd n.
    static int axis(int n) { return n % 2 == 0 ? 1 : 2; }

    // Block B_n = [a_n / 2, a_n] on its axis.
    static ScaledBlock block(int n) {
        if (n < 1) throw std::out_of_range("DyadicLadder: block index must be >= 1");
        const std::int64_t e = exponent(n);
        return ScaledBlock{axis(n), -e - 1, -e};
    }
};

// Truncated F with blocks B_1..B_{n_max}, all kept exactly as scaled blocks.
// Blocks long enough to clear the coincidence tolerance of doubles (B_1 and
// B_2) also appear as ordinary segments.
inline SegmentSet<2> set_F(int n_max = 4) {
    if (n_max < 1 || n_max > DyadicLadder::kMaxIndex) throw std::invalid_argument("set_F: n_max outside 1..8");
    std::vector<std::pair<Point2, Point2>> segs;
    std::vector<ScaledBlock> blocks;
    for (int n = 1; n <= n_max; ++n) {
        const ScaledBlock b = DyadicLadder::block(n);
        blocks.push_back(b);
        if (b.exp2_lo < -40) continue;
        const double lo = b.lo().to_double(), hi = b.hi().to_double();
        Point2 p{}, q{};
        p[static_cast<std::size_t>(b.axis - 1)] = lo;
        q[static_cast<std::size_t>(b.axis - 1)] = hi;
        segs.emplace_back(p, q);
    }
    auto X = make_segment_set<2>(segs);
    X.set_scaled_blocks(std::move(blocks));
    return X;
}

// Flat unit segment plus a chordal polyline of the parabola y = x^2 on [0, 1].
// Knots are 2^-k for k = 0..resolution, each dyadic band split into
// `band_pieces` equal chords.
inline SegmentSet<2> set_S(int resolution = 20, int band_pieces = 8) {
    if (resolution < 2 || resolution > 22) throw std::invalid_argument("set_S: resolution outside 2..22");
    std::vector<double> knots{0.0};
    for (int k = resolution; k >= 1; --k) {
        const double lo = std::ldexp(1.0, -k), hi = std::ldexp(1.0, -k + 1);
        for (int j = 0; j < band_pieces; ++j) knots.push_back(lo + (hi - lo) * j / band_pieces);
    }
    knots.push_back(1.0);
    std::vector<std::pair<Point2, Point2>> segs{{{0.0, 0.0}, {1.0, 0.0}}};
    for (std::size_t i = 0; i + 1 < knots.size(); ++i) {
        const double a = knots[i], b = knots[i + 1];
        segs.push_back({{a, a * a}, {b, b * b}});
    }
    return make_segment_set<2>(segs);
}

// Unit segments along both positive axes meeting at the origin.
inline SegmentSet<2> set_L() {
    return make_segment_set<2>({{{0.0, 0.0}, {1.0, 0.0}}, {{0.0, 0.0}, {0.0, 1.0}}});
}

// Vertices of the regular k-gon inscribed in the unit circle, vertex 0 at (1, 0).
inline std::vector<Point2> polygon_vertices(int k) {
    if (k < 3) throw std::invalid_argument("polygon: need at least 3 vertices");
    std::vector<Point2> v;
    for (int i = 0; i < k; ++i) {
        const double t = 2.0 * std::numbers::pi * i / k;
        v.push_back({std::cos(t), std::sin(t)});
    }
    return v;
}

// Closed polyline through polygon_vertices(k).
inline SegmentSet<2> set_polygon(int k) {
    const auto v = polygon_vertices(k);
    std::vector<std::pair<Point2, Point2>> segs;
    for (int i = 0; i < k; ++i) segs.emplace_back(v[static_cast<std::size_t>(i)], v[static_cast<std::size_t>((i + 1) % k)]);
    return make_segment_set<2>(segs);
}

// The unit segment [0, 1] x {0}.
inline SegmentSet<2> set_segment() {
    return make_segment_set<2>({{{0.0, 0.0}, {1.0, 0.0}}});
}

// Resolves a registry name: "E", "F[:n_max]", "S[:resolution]", "L",
// "polygon:<k>", "segment" / "builtin:segment". Throws on unknown names.
inline SegmentSet<2> builtin_set(const std::string& spec) {
    std::string name = spec;
    if (name.rfind("builtin:", 0) == 0) name = name.substr(8);
    const auto colon = name.find(':');
    const std::string head = name.substr(0, colon);
    const std::string arg = colon == std::string::npos ? "" : name.substr(colon + 1);
    auto int_arg = [&](int dflt) {
        if (arg.empty()) return dflt;
        std::size_t used = 0;
        const int v = std::stoi(arg, &used);
        if (used != arg.size()) throw std::invalid_argument("builtin_set: bad integer argument in '" + spec + "'");
        return v;
    };
    if (head == "E" && arg.empty()) return set_E();
    if (head == "F") return set_F(int_arg(4));
    if (head == "S") return set_S(int_arg(20));
    if ((head == "L" || head == "L-shape") && arg.empty()) return set_L();
    if (head == "polygon") {
        if (arg.empty()) throw std::invalid_argument("builtin_set: polygon needs a vertex count");
        return set_polygon(int_arg(0));
    }
    if (head == "segment" && arg.empty()) return set_segment();
    throw std::invalid_argument("builtin_set: unknown set '" + spec + "'");
}

inline bool is_builtin_name(const std::string& spec) {
    try {
        (void)builtin_set(spec);
        return true;
    } catch (const std::exception&) {
        return false;
    }
}

}  // namespace menger
