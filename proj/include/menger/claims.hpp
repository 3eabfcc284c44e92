#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <map>
#include <numbers>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "appendix.hpp"
#include "bounds.hpp"
#include "builtin_sets.hpp"
#include "curvature.hpp"
#include "density.hpp"
#include "energy.hpp"
#include "geometry.hpp"
#include "json_io.hpp"
#include "version.hpp"

namespace menger {

enum class Budget { Low, Default, High };

inline std::string to_string(Budget b) {
    switch (b) {
        case Budget::Low: return "low";
        case Budget::Default: return "default";
        case Budget::High: return "high";
    }
    return "?";
}

inline Budget parse_budget(const std::string& s) {
    if (s == "low") return Budget::Low;
    if (s == "default") return Budget::Default;
    if (s == "high") return Budget::High;
    throw std::invalid_argument("unknown budget '" + s + "' (expected low, default or high)");
}

// Quadrature settings per budget. `low` also doubles every relative-error
// threshold of the energy claims.
inline QuadratureConfig budget_config(Budget b) {
    QuadratureConfig c;
    switch (b) {
        case Budget::Low:
            c.base_order = 6;
            c.max_depth = 10;
            c.rel_tol = 1e-2;
            break;
        case Budget::Default:
            break;
        case Budget::High:
            c.base_order = 10;
            c.max_depth = 20;
            c.rel_tol = 1e-4;
            break;
    }
    return c;
}

inline double budget_tolerance_scale(Budget b) { return b == Budget::Low ? 2.0 : 1.0; }

struct VerifyOptions {
    Budget budget = Budget::Default;
    QuadratureConfig cfg = budget_config(Budget::Default);
    std::uint64_t seed = 1;
    std::vector<std::string> only;  // claim ids or groups (the part before '/')
};

// One verified statement. `reference_kind` says where the reference value
// comes from: a closed-form bound, an independently derived oracle, an exact
// exponent-arithmetic check, or a structural property.
struct ClaimRecord {
    std::string id{};
    int criterion = 0;
    std::string reference_kind{};
    std::string reference_label{};
    double reference = std::numeric_limits<double>::quiet_NaN();
    double value = std::numeric_limits<double>::quiet_NaN();
    double error_bound = 0.0;
    bool pass = false;
    double runtime_s = 0.0;
    std::string note{};
    nlohmann::json details = nlohmann::json::object();
};

struct VerifyReport {
    VerifyOptions options;
    std::vector<ClaimRecord> claims;

    bool all_pass() const {
        return std::all_of(claims.begin(), claims.end(), [](const ClaimRecord& c) { return c.pass; });
    }
    std::vector<std::string> failing() const {
        std::vector<std::string> ids;
        for (const auto& c : claims)
            if (!c.pass) ids.push_back(c.id);
        return ids;
    }
};

inline nlohmann::json to_json(const EnergyEstimate& e) {
    return {{"value", e.value},
            {"error_bound", e.error_bound},
            {"method", to_string(e.method)},
            {"converged", e.converged},
            {"diverged", e.diverged},
            {"evaluations", e.evaluations},
            {"witness_scale", e.witness_scale}};
}

namespace claims_detail {

// Memo of energies shared between claims of one run.
class Context {
public:
    explicit Context(const VerifyOptions& o) : opt(o) {}

    const VerifyOptions& opt;

    const EnergyEstimate& energy_E(EnergyFamily fam, double p) {
        std::ostringstream key;
        key << to_string(fam) << ':' << p;
        auto it = cache_.find(key.str());
        if (it != cache_.end()) return it->second;
        return cache_[key.str()] = energy(set_E(), fam, EnergyParams{1.0, p}, opt.cfg);
    }

    const EnergyEstimate& F_E(int i, int j, int k, double p) {
        std::ostringstream key;
        key << "F:" << i << j << k << ':' << p;
        auto it = cache_.find(key.str());
        if (it != cache_.end()) return it->second;
        return cache_[key.str()] = functional_F_p(set_E_part(i), set_E_part(j), set_E_part(k), p, opt.cfg);
    }

private:
    std::map<std::string, EnergyEstimate> cache_;
};

inline nlohmann::json estimate_json(const EnergyEstimate& e) { return to_json(e); }

inline bool usable(const EnergyEstimate& e) { return e.converged && !e.diverged && std::isfinite(e.value); }

// ---- criterion 1 ----

template <std::size_t N>
double circumradius_worst(std::mt19937_64& rng, int count) {
    std::uniform_real_distribution<double> U(-1.0, 1.0);
    double worst = 0.0;
    for (int n = 0; n < count;) {
        Point<N> x, y, z;
        for (std::size_t i = 0; i < N; ++i) {
            x[i] = U(rng);
            y[i] = U(rng);
            z[i] = U(rng);
        }
        if (classify(x, y, z) != DegeneracyClass::NonDegenerate) continue;
        // needle triangles make the side-length form ill-conditioned
        const double m = std::min({angle_at(x, y, z), angle_at(y, z, x), angle_at(z, x, y)});
        if (m < 0.02) continue;
        ++n;
        const double r1 = circumradius_from_sides(sides_of(x, y, z));
        const double r2 = circumradius_points(x, y, z);
        const double r3 = circumradius_angle_form(x, y, z);
        worst = std::max({worst, std::abs(r1 - r2) / r2, std::abs(r3 - r2) / r2, std::abs(r1 - r3) / r3});
    }
    return worst;
}

inline ClaimRecord circumradius_forms(Context& ctx) {
    std::mt19937_64 rng(ctx.opt.seed);
    ClaimRecord c{.id = "circumradius_forms", .criterion = 1, .reference_kind = "derived_oracle",
                  .reference_label = "relative agreement of side, point and angle forms"};
    const double w2 = circumradius_worst<2>(rng, 10000);
    const double w3 = circumradius_worst<3>(rng, 10000);
    c.reference = 1e-12;
    c.value = std::max(w2, w3);
    c.pass = c.value <= c.reference;
    c.details = {{"worst_2d", w2}, {"worst_3d", w3}, {"min_angle", 0.02}};
    return c;
}

// ---- criterion 2 ----

inline std::vector<double> log_grid() {
    std::vector<double> g;
    for (int i = 0; i < 10; ++i) g.push_back(std::pow(10.0, -3.0 + 4.0 * i / 9.0));
    return g;
}

inline ClaimRecord integral_II(Context&) {
    ClaimRecord c{.id = "integral_II_closed_form", .criterion = 2, .reference_kind = "derived_oracle",
                  .reference_label = "|closed form - quadrature| on a 10x10 log grid"};
    double worst = 0.0;
    for (double z : log_grid())
        for (double y : log_grid()) worst = std::max(worst, integral_II_check(z, y).abs_err);
    c.reference = 1e-10;
    c.value = worst;
    c.pass = worst <= 1e-10;
    return c;
}

inline ClaimRecord integral_I(Context&) {
    ClaimRecord c{.id = "integral_I_bound", .criterion = 2, .reference_kind = "closed_form_bound",
                  .reference_label = "pi / 2^p (zy)^(-(p-1)/2), p in {2, 2.5, 3}"};
    double slack = kInf, rel_slack = kInf;
    for (double p : {2.0, 2.5, 3.0})
        for (double z : log_grid())
            for (double y : log_grid()) {
                const auto b = integral_I_bound(z, y, p);
                slack = std::min(slack, b.bound - b.integral);
                rel_slack = std::min(rel_slack, (b.bound - b.integral) / b.bound);
            }
    c.reference = 0.0;
    c.value = slack;
    c.pass = slack >= -1e-12;
    c.details = {{"min_relative_slack", rel_slack}};
    return c;
}

// ---- criterion 3 ----

inline ClaimRecord line_distance_bound(Context& ctx) {
    ClaimRecord c{.id = "line_distance_bound", .criterion = 3, .reference_kind = "closed_form_bound",
                  .reference_label = "dist(L_xy, 0) - sin(eps)/2 min(|x|, |y|)"};
    std::mt19937_64 rng(ctx.opt.seed + 3);
    std::uniform_real_distribution<double> U(-1.0, 1.0);
    double worst = kInf;
    int done = 0;
    while (done < 100000) {
        const Point2 x{U(rng), U(rng)}, y{U(rng), U(rng)};
        const double eps = angle_at(Point2{}, x, y);
        if (!(eps > 0.0 && eps < std::numbers::pi)) continue;
        const auto [lhs, rhs] = dist_line_origin_lower_bound(x, y);
        worst = std::min(worst, lhs - rhs);
        ++done;
    }
    c.reference = 0.0;
    c.value = worst;
    c.pass = worst >= -1e-12;
    c.details = {{"pairs", done}};
    return c;
}

// ---- criteria 4-6 ----

inline std::string p_tag(double p) {
    std::ostringstream os;
    os << "p=" << p;
    return os.str();
}

inline ClaimRecord energy_bound(Context& ctx, EnergyFamily fam, ClosedFormBound bound, double p, int criterion,
                                double rel_limit) {
    const std::string name = to_string(bound);
    ClaimRecord c{.id = name + "_bound/" + p_tag(p), .criterion = criterion, .reference_kind = "closed_form_bound"};
    const auto& e = ctx.energy_E(fam, p);
    c.reference = closed_form_bound(bound, BoundArgs{.p = p});
    c.reference_label = name + "(" + p_tag(p) + ")";
    c.value = e.value;
    c.error_bound = e.error_bound;
    const double lim = rel_limit * budget_tolerance_scale(ctx.opt.budget);
    c.pass = usable(e) && e.value <= c.reference && e.rel_error() <= lim;
    c.details = estimate_json(e);
    c.details["rel_error_limit"] = lim;
    return c;
}

inline ClaimRecord M_E_bound(Context& ctx) {
    auto c = energy_bound(ctx, EnergyFamily::M, ClosedFormBound::M_of_E, 2.0, 6, 0.05);
    c.id = "M_E_bound";
    return c;
}

inline ClaimRecord F_E1E1E2_bound(Context& ctx) {
    ClaimRecord c{.id = "F_E1E1E2_bound", .criterion = 6, .reference_kind = "closed_form_bound",
                  .reference_label = "4 pi"};
    const auto& F = ctx.F_E(1, 1, 2, 2.0);
    c.reference = closed_form_bound(ClosedFormBound::F_of_E1E1E2, BoundArgs{.p = 2.0});
    c.value = F.value;
    c.error_bound = F.error_bound;
    c.pass = usable(F) && F.value <= c.reference;
    c.details = estimate_json(F);
    return c;
}

inline ClaimRecord M_E_decomposition(Context& ctx) {
    ClaimRecord c{.id = "M_E_decomposition", .criterion = 6, .reference_kind = "property",
                  .reference_label = "18 F_2(E1, E1, E2)"};
    const auto& M = ctx.energy_E(EnergyFamily::M, 2.0);
    const auto& F = ctx.F_E(1, 1, 2, 2.0);
    c.reference = 18.0 * F.value;
    c.value = M.value;
    c.error_bound = M.error_bound + 18.0 * F.error_bound;
    c.pass = usable(M) && usable(F) && std::abs(M.value - c.reference) <= c.error_bound;
    return c;
}

// 4 int_0^1 arctan(1/x)^2 dx, the value of F_2(E1, E1, E2) after integrating
// the two free variables in closed form.
inline double F_E1E1E2_oracle() {
    return 4.0 * detail::gk_integrate_01(
                     [](double x) {
                         const double a = x > 0.0 ? std::atan(1.0 / x) : std::numbers::pi / 2;
                         return a * a;
                     },
                     {}, 1e-14);
}

inline ClaimRecord F_E1E1E2_oracle_claim(Context& ctx) {
    ClaimRecord c{.id = "F_E1E1E2_oracle", .criterion = 6, .reference_kind = "derived_oracle",
                  .reference_label = "4 int_0^1 arctan(1/x)^2 dx"};
    const auto& F = ctx.F_E(1, 1, 2, 2.0);
    c.reference = F_E1E1E2_oracle();
    c.value = F.value;
    c.error_bound = F.error_bound;
    c.pass = usable(F) && std::abs(F.value - c.reference) <= F.error_bound + 1e-9;
    return c;
}

// ---- criterion 7 ----

inline ClaimRecord divergence(Context& ctx, EnergyFamily fam, double p, bool plateau) {
    ClaimRecord c{.id = "divergence/" + to_string(fam) + "_" + p_tag(p) + (plateau ? "_plateau" : "_decay"),
                  .criterion = 7, .reference_kind = "property"};
    std::vector<double> radii;
    for (int k = 1; k <= 10; ++k) radii.push_back(std::ldexp(1.0, -k));
    const auto seq = energy_on_ball(set_E(), fam, EnergyParams{1.0, p}, ctx.opt.cfg, Point2{}, radii);
    nlohmann::json vals = nlohmann::json::array();
    for (const auto& e : seq) vals.push_back(e.value);
    c.details = {{"values", vals}};
    if (plateau) {
        double lo = kInf, hi = 0.0;
        for (std::size_t k = 4; k < seq.size(); ++k) {
            lo = std::min(lo, seq[k].value);
            hi = std::max(hi, seq[k].value);
        }
        c.reference_label = "min/max over k = 5..10";
        c.reference = 0.5;
        c.value = hi > 0.0 ? lo / hi : 0.0;
        c.pass = c.value >= 0.5;
    } else {
        c.reference_label = "value(k=1) / value(k=10)";
        c.reference = 10.0;
        c.value = seq.back().value > 0.0 ? seq.front().value / seq.back().value : kInf;
        c.pass = c.value >= 10.0 && std::all_of(seq.begin(), seq.end(), usable);
    }
    return c;
}

// ---- criterion 8 ----

inline ClaimRecord F_series(Context&, const std::string& part) {
    ClaimRecord c{.id = "F_series/" + part, .criterion = 8, .reference_kind = "exact"};
    const auto rep = set_F_series_bounds(4, 3.0);
    if (part == "separation") {
        double m = kInf;
        bool ok = true;
        for (const auto& s : rep.separation) {
            m = std::min(m, s.dist.log2() - s.bound.log2());
            ok = ok && s.ok;
        }
        c.reference_label = "min log2(dist(B_k, B_l) / (a_min/4))";
        c.reference = 0.0;
        c.value = m;
        c.pass = ok;
    } else if (part == "quotients") {
        std::int64_t worst = std::numeric_limits<std::int64_t>::min();
        bool ok = true;
        for (const auto& q : rep.quotients) {
            worst = std::max(worst, q.exponent + 3 * q.m);
            ok = ok && q.ok;
        }
        c.reference_label = "max (-m^m m^3 + q k^k k^3 + 3m)";
        c.reference = 0.0;
        c.value = static_cast<double>(worst);
        c.pass = ok && !rep.quotients.empty();
        c.details = {{"pairs", rep.quotients.size()}};
    } else if (part == "same_block") {
        double m = -kInf;
        bool ok = true;
        for (const auto& s : rep.same_block) {
            m = std::max(m, s.kappa_max.log2() - s.bound.log2());
            ok = ok && s.ok;
        }
        c.reference_label = "max log2(kappa_i / (8 / a_{n-1})), n = 2, 3";
        c.reference = 0.0;
        c.value = m;
        c.pass = ok && rep.same_block.size() == 2;
    } else if (part == "step3") {
        c.reference_label = "log2(4 8^(p-1) (a_ceil(q)^-p + 1)), p = 3";
        c.reference = rep.step3_bound.log2();
        c.value = rep.step3_partial.log2();
        c.pass = rep.step3_ok;
    } else {
        c.reference_label = "log2(C_p + 2 8^p), p = 3";
        c.reference = rep.step4_bound.log2();
        c.value = rep.step4_partial.log2();
        c.pass = rep.step4_ok;
    }
    return c;
}

// ---- criterion 9 ----

inline ClaimRecord tangent_claim(Context&, const std::string& which) {
    ClaimRecord c{.id = "tangent/" + which, .criterion = 9, .reference_kind = "property"};
    const TangentThresholds th;
    const Point2 o{};
    TangentReport rep;
    if (which == "S_strong") {
        rep = detect_strong_tangent(set_S(), o, 1.0, RadiusLadder::geometric_ladder(0.5), th);
    } else if (which == "E_none") {
        rep = detect_strong_tangent(set_E(), o, 1.0, RadiusLadder::geometric_ladder(0.5), th);
    } else if (which == "L_none") {
        rep = detect_strong_tangent(set_L(), o, 1.0, RadiusLadder::geometric_ladder(0.5), th);
    } else if (which == "segment_strong") {
        rep = detect_strong_tangent(set_segment(), Point2{0.5, 0.0}, 1.0, RadiusLadder::geometric_ladder(0.25), th);
    } else {
        const auto R = RadialSet<2>::from_blocks(set_F(4).scaled_blocks());
        rep = detect_strong_tangent(density_profile(R, 1.0, set_F_ladder(4), th), th.delta);
    }
    const auto& P = rep.profile;
    c.details = {{"verdict", to_string(rep.verdict)}};
    if (which == "S_strong" || which == "segment_strong") {
        c.reference_label = "strong, direction e1, out ratio <= delta";
        c.reference = th.delta;
        c.value = *std::max_element(rep.max_out_per_eps.begin(), rep.max_out_per_eps.end());
        c.pass = rep.verdict == TangentVerdict::Strong && rep.direction && P.angles[*rep.direction] == 0.0;
    } else if (which == "E_none" || which == "L_none") {
        c.reference_label = "none, witness cone density >= 0.2";
        c.reference = 0.2;
        c.value = rep.min_witness_density();
        c.details["witness_angles"] = {P.angles[rep.witness[0]], P.angles[rep.witness[1]]};
        c.details["witness_separation"] = rep.witness_separation;
        c.pass = rep.verdict == TangentVerdict::None && c.value >= 0.2 && rep.witness_separation >= th.eps_min();
    } else {
        c.reference_label = "weak, direction map e1/e2 by radius regime";
        c.reference = th.delta;
        bool match = true;
        double worst = 0.0;
        nlohmann::json map = nlohmann::json::array();
        for (std::size_t i = 0; i < P.radii(); ++i) {
            const int want = set_F_tangent_axis(P.ladder.radii[i]);
            const double angle = P.angles[rep.direction_map[i]];
            const int got = angle == 0.0 ? 1 : std::abs(angle - std::numbers::pi / 2) < 1e-12 ? 2 : 0;
            match = match && want == got;
            worst = std::max(worst, rep.score[i]);
            map.push_back({{"r_exp2", P.ladder.radii[i].exp2()}, {"expected_axis", want}, {"detected_axis", got}});
        }
        c.value = worst;
        c.details["direction_map"] = map;
        c.pass = rep.verdict == TangentVerdict::Weak && match && worst <= th.delta;
    }
    return c;
}

// ---- criterion 10 ----

// Random polyline v0 v1 v2 v3 with sides in [0.5, 1], turning angles of
// magnitude in [0.5, 2.5], and first and last sides at distance >= 0.1.
inline SegmentSet<2> random_polyline(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> U(0.0, 1.0);
    auto seg_dist = [](const Point2& a, const Point2& b, const Point2& c, const Point2& d) {
        auto cross = [](const Point2& u, const Point2& v) { return u[0] * v[1] - u[1] * v[0]; };
        const double d1 = cross(b - a, c - a), d2 = cross(b - a, d - a);
        const double d3 = cross(d - c, a - c), d4 = cross(d - c, b - c);
        if (((d1 > 0) != (d2 > 0)) && ((d3 > 0) != (d4 > 0))) return 0.0;
        auto pt = [](const Point2& p, const Point2& s, const Point2& t) {
            const Point2 e = t - s;
            const double u = std::clamp(dot(p - s, e) / dot(e, e), 0.0, 1.0);
            return distance(p, s + u * e);
        };
        return std::min({pt(a, c, d), pt(b, c, d), pt(c, a, b), pt(d, a, b)});
    };
    for (;;) {
        std::array<Point2, 4> v;
        v[0] = Point2{U(rng), U(rng)};
        double heading = 2.0 * std::numbers::pi * U(rng);
        for (std::size_t k = 1; k < 4; ++k) {
            if (k > 1) heading += (U(rng) < 0.5 ? -1.0 : 1.0) * (0.5 + 2.0 * U(rng));
            const double len = 0.5 + 0.5 * U(rng);
            v[k] = v[k - 1] + len * Point2{std::cos(heading), std::sin(heading)};
        }
        if (seg_dist(v[0], v[1], v[2], v[3]) < 0.1) continue;
        return make_segment_set<2>({{v[0], v[1]}, {v[1], v[2]}, {v[2], v[3]}});
    }
}

struct ChainCheck {
    bool ok = true;
    double worst_margin = kInf;  // min over links of (rhs + eps - lhs)
};

// M <= H I <= H^2 U <= H^3 / Delta^p, each link up to the summed error bounds.
inline ChainCheck chain_check(const SegmentSet<2>& X, double p, const QuadratureConfig& cfg) {
    const double H = X.total_measure();
    const auto U = energy_U(X, EnergyParams{1.0, p}, cfg);
    const auto I = energy_I(X, EnergyParams{1.0, p}, cfg);
    const auto M = energy_M(X, EnergyParams{1.0, p}, cfg);
    const double delta = thickness(X, cfg).value;
    ChainCheck r;
    auto link = [&](double lhs, double lhs_err, double rhs, double rhs_err) {
        const double margin = rhs + rhs_err + lhs_err - lhs;
        r.worst_margin = std::min(r.worst_margin, margin);
        r.ok = r.ok && margin >= 0.0;
    };
    r.ok = usable(U) && usable(I) && usable(M);
    link(M.value, M.error_bound, H * I.value, H * I.error_bound);
    link(H * I.value, H * I.error_bound, H * H * U.value, H * H * U.error_bound);
    const double top = closed_form_bound(ClosedFormBound::chain, BoundArgs{.p = p, .measure = H, .thickness = delta});
    if (std::isfinite(top)) link(H * H * U.value, H * H * U.error_bound, top, 0.0);
    return r;
}

struct HolderCase {
    EnergyFamily fam;
    double p, q;
};

// E_p <= H^(d (1 - p/q)) E_q^(p/q), with the error of E_q propagated to first order.
inline ChainCheck holder_check(const SegmentSet<2>& X, const std::vector<HolderCase>& cases, const QuadratureConfig& cfg) {
    const double H = X.total_measure();
    ChainCheck r;
    for (const auto& hc : cases) {
        const auto Ep = energy(X, hc.fam, EnergyParams{1.0, hc.p}, cfg);
        const auto Eq = energy(X, hc.fam, EnergyParams{1.0, hc.q}, cfg);
        const int d = hc.fam == EnergyFamily::U ? 1 : hc.fam == EnergyFamily::I ? 2 : 3;
        const double rhs = closed_form_bound(ClosedFormBound::holder,
                                             BoundArgs{.p = hc.p, .measure = H, .q = hc.q, .energy_q = Eq.value, .integrations = d});
        const double rhs_err = Eq.value > 0.0 ? rhs * (hc.p / hc.q) * Eq.error_bound / Eq.value : 0.0;
        const double margin = rhs + rhs_err + Ep.error_bound - Ep.value;
        r.worst_margin = std::min(r.worst_margin, margin);
        r.ok = r.ok && usable(Ep) && usable(Eq) && margin >= 0.0;
    }
    return r;
}

inline ClaimRecord inequality_chain_E(Context& ctx) {
    ClaimRecord c{.id = "inequality/chain_E", .criterion = 10, .reference_kind = "property",
                  .reference_label = "min margin of M <= H I <= H^2 U <= H^3/Delta^p, p = 0.5"};
    const auto r = chain_check(set_E(), 0.5, ctx.opt.cfg);
    c.reference = 0.0;
    c.value = r.worst_margin;
    c.pass = r.ok;
    return c;
}

inline std::vector<HolderCase> holder_cases_E() {
    return {{EnergyFamily::M, 1.0, 2.0}, {EnergyFamily::M, 2.0, 2.5},  {EnergyFamily::U, 0.25, 0.5},
            {EnergyFamily::U, 0.5, 0.75}, {EnergyFamily::I, 1.25, 1.5}, {EnergyFamily::I, 1.5, 1.75}};
}

inline ClaimRecord inequality_holder_E(Context& ctx) {
    ClaimRecord c{.id = "inequality/holder_E", .criterion = 10, .reference_kind = "property",
                  .reference_label = "min margin of E_p <= H^(d(1-p/q)) E_q^(p/q)"};
    const auto r = holder_check(set_E(), holder_cases_E(), ctx.opt.cfg);
    c.reference = 0.0;
    c.value = r.worst_margin;
    c.pass = r.ok;
    return c;
}

inline ClaimRecord inequality_polylines(Context& ctx, bool chain) {
    ClaimRecord c{.id = chain ? "inequality/chain_polylines" : "inequality/holder_polylines", .criterion = 10,
                  .reference_kind = "property",
                  .reference_label = chain ? "min margin of the chain on 5 random polylines, p = 0.5"
                                           : "min margin of the Hoelder comparison on 5 random polylines"};
    std::mt19937_64 rng(ctx.opt.seed + 10);
    c.reference = 0.0;
    c.value = kInf;
    c.pass = true;
    nlohmann::json sets = nlohmann::json::array();
    const std::vector<HolderCase> cases{
        {EnergyFamily::M, 1.0, 2.0}, {EnergyFamily::U, 0.25, 0.5}, {EnergyFamily::I, 1.0, 1.5}};
    for (int n = 0; n < 5; ++n) {
        const auto X = random_polyline(rng);
        const auto r = chain ? chain_check(X, 0.5, ctx.opt.cfg) : holder_check(X, cases, ctx.opt.cfg);
        c.value = std::min(c.value, r.worst_margin);
        c.pass = c.pass && r.ok;
        sets.push_back(to_json(X));
    }
    c.details = {{"sets", sets}};
    return c;
}

inline ClaimRecord inequality_permutation(Context& ctx) {
    ClaimRecord c{.id = "inequality/permutation", .criterion = 10, .reference_kind = "property",
                  .reference_label = "max deviation over the 6 orders of F_2(E1, E1, E2)"};
    const std::array<std::array<int, 3>, 6> perms{{{1, 1, 2}, {1, 2, 1}, {2, 1, 1}, {1, 1, 2}, {1, 2, 1}, {2, 1, 1}}};
    // (E1, E1, E2) has only three distinct orders; the remaining three repeat them
    const auto& base = ctx.F_E(1, 1, 2, 2.0);
    double worst = 0.0, excess = -kInf;
    bool ok = usable(base);
    for (const auto& pm : perms) {
        const auto& F = ctx.F_E(pm[0], pm[1], pm[2], 2.0);
        const double dev = std::abs(F.value - base.value);
        worst = std::max(worst, dev);
        excess = std::max(excess, dev - (F.error_bound + base.error_bound));
        ok = ok && usable(F) && dev <= F.error_bound + base.error_bound;
    }
    c.reference = 0.0;
    c.value = worst;
    c.error_bound = 2.0 * base.error_bound;
    c.pass = ok;
    c.details = {{"max_excess_over_combined_error", excess}};
    return c;
}

inline ClaimRecord inequality_decomposition(Context& ctx) {
    ClaimRecord c{.id = "inequality/decomposition", .criterion = 10, .reference_kind = "property",
                  .reference_label = "M_2(E) vs sum of F_2 over the 27 ordered block triples"};
    const auto& M = ctx.energy_E(EnergyFamily::M, 2.0);
    std::vector<double> values;
    double err = 0.0;
    bool vanish_ok = true, all_ok = usable(M);
    for (int i = 1; i <= 3; ++i)
        for (int j = 1; j <= 3; ++j)
            for (int k = 1; k <= 3; ++k) {
                const auto& F = ctx.F_E(i, j, k, 2.0);
                values.push_back(F.value);
                err += F.error_bound;
                all_ok = all_ok && usable(F);
                const bool single = i == j && j == k;
                const bool flat = i != 2 && j != 2 && k != 2;
                if ((single || flat) && !(F.value < ctx.opt.cfg.abs_tol)) vanish_ok = false;
            }
    std::sort(values.begin(), values.end());
    double sum = 0.0;
    for (double v : values) sum += v;
    c.reference = M.value;
    c.value = sum;
    c.error_bound = err + M.error_bound;
    c.pass = all_ok && vanish_ok && std::abs(sum - M.value) <= c.error_bound;
    c.details = {{"vanishing_pattern", vanish_ok}};
    return c;
}

struct ClaimSpec {
    std::string id;
    std::function<ClaimRecord(Context&)> run;
};

inline std::vector<ClaimSpec> all_claims() {
    std::vector<ClaimSpec> v;
    v.push_back({"circumradius_forms", circumradius_forms});
    v.push_back({"integral_II_closed_form", integral_II});
    v.push_back({"integral_I_bound", integral_I});
    v.push_back({"line_distance_bound", line_distance_bound});
    for (double p : {0.25, 0.5, 0.75})
        v.push_back({"U_E_bound/" + p_tag(p), [p](Context& c) {
                         return energy_bound(c, EnergyFamily::U, ClosedFormBound::U_of_E, p, 4, 0.01);
                     }});
    for (double p : {1.25, 1.5, 1.75})
        v.push_back({"I_E_bound/" + p_tag(p), [p](Context& c) {
                         return energy_bound(c, EnergyFamily::I, ClosedFormBound::I_of_E, p, 5, 0.02);
                     }});
    v.push_back({"M_E_bound", M_E_bound});
    v.push_back({"F_E1E1E2_bound", F_E1E1E2_bound});
    v.push_back({"F_E1E1E2_oracle", F_E1E1E2_oracle_claim});
    v.push_back({"M_E_decomposition", M_E_decomposition});
    const std::vector<std::tuple<EnergyFamily, double, bool>> div{
        {EnergyFamily::M, 3.0, true}, {EnergyFamily::M, 2.0, false}, {EnergyFamily::I, 2.0, true},
        {EnergyFamily::I, 1.5, false}, {EnergyFamily::U, 1.0, true}, {EnergyFamily::U, 0.5, false}};
    for (const auto& [fam, p, plateau] : div) {
        v.push_back({"divergence/" + to_string(fam) + "_" + p_tag(p) + (plateau ? "_plateau" : "_decay"),
                     [fam, p, plateau](Context& c) { return divergence(c, fam, p, plateau); }});
    }
    for (const char* part : {"separation", "quotients", "same_block", "step3", "step4"}) {
        const std::string s = part;
        v.push_back({"F_series/" + s, [s](Context& c) { return F_series(c, s); }});
    }
    for (const char* which : {"S_strong", "E_none", "L_none", "F_weak", "segment_strong"}) {
        const std::string s = which;
        v.push_back({"tangent/" + s, [s](Context& c) { return tangent_claim(c, s); }});
    }
    v.push_back({"inequality/chain_E", inequality_chain_E});
    v.push_back({"inequality/holder_E", inequality_holder_E});
    v.push_back({"inequality/chain_polylines", [](Context& c) { return inequality_polylines(c, true); }});
    v.push_back({"inequality/holder_polylines", [](Context& c) { return inequality_polylines(c, false); }});
    v.push_back({"inequality/permutation", inequality_permutation});
    v.push_back({"inequality/decomposition", inequality_decomposition});
    return v;
}

inline bool selected(const std::string& id, const std::vector<std::string>& only) {
    if (only.empty()) return true;
    const std::string group = id.substr(0, id.find('/'));
    return std::any_of(only.begin(), only.end(), [&](const std::string& s) { return s == id || s == group; });
}

}  // namespace claims_detail

inline std::vector<std::string> claim_ids() {
    std::vector<std::string> ids;
    for (const auto& s : claims_detail::all_claims()) ids.push_back(s.id);
    return ids;
}

// Runs the selected claims in a fixed order; records are sorted by id.
inline VerifyReport run_verify(const VerifyOptions& opt) {
    opt.cfg.validate();
    const auto specs = claims_detail::all_claims();
    for (const auto& want : opt.only) {
        const bool known = std::any_of(specs.begin(), specs.end(), [&](const claims_detail::ClaimSpec& s) {
            return claims_detail::selected(s.id, {want});
        });
        if (!known) throw std::invalid_argument("unknown claim id '" + want + "'");
    }
    VerifyReport rep;
    rep.options = opt;
    claims_detail::Context ctx(rep.options);
    for (const auto& s : specs) {
        if (!claims_detail::selected(s.id, opt.only)) continue;
        const auto t0 = std::chrono::steady_clock::now();
        ClaimRecord r;
        try {
            r = s.run(ctx);
        } catch (const std::exception& e) {
            r.id = s.id;
            r.pass = false;
            r.note = std::string("exception: ") + e.what();
        }
        r.id = s.id;
        r.runtime_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        rep.claims.push_back(std::move(r));
    }
    std::sort(rep.claims.begin(), rep.claims.end(), [](const ClaimRecord& a, const ClaimRecord& b) { return a.id < b.id; });
    return rep;
}

inline nlohmann::json to_json(const QuadratureConfig& c) {
    return {{"base_order", c.base_order},   {"max_depth", c.max_depth},
            {"rel_tol", c.rel_tol},         {"abs_tol", c.abs_tol},
            {"singularity_grading", c.singularity_grading}, {"g_div", c.g_div},
            {"max_evals", c.max_evals},     {"mc_samples", c.mc_samples},
            {"seed", c.seed}};
}

inline nlohmann::json to_json(const ClaimRecord& c) {
    return {{"id", c.id},
            {"criterion", c.criterion},
            {"reference_kind", c.reference_kind},
            {"reference_label", c.reference_label},
            {"reference", c.reference},
            {"value", c.value},
            {"error_bound", c.error_bound},
            {"pass", c.pass},
            {"runtime_s", c.runtime_s},
            {"note", c.note},
            {"details", c.details}};
}

inline nlohmann::json to_json(const VerifyReport& r) {
    nlohmann::json claims = nlohmann::json::array();
    for (const auto& c : r.claims) claims.push_back(to_json(c));
    return {{"tool", "menger"},
            {"version", kVersion},
            {"config", {{"budget", to_string(r.options.budget)}, {"seed", r.options.seed}, {"quadrature", to_json(r.options.cfg)},
                        {"only", r.options.only}}},
            {"claims", claims},
            {"all_pass", r.all_pass()},
            {"failing", r.failing()}};
}

inline std::string claims_csv(const VerifyReport& r) {
    std::ostringstream os;
    os.precision(17);
    os << "id,criterion,reference_kind,reference,value,error_bound,pass,runtime_s\n";
    for (const auto& c : r.claims) {
        os << c.id << ',' << c.criterion << ',' << c.reference_kind << ',' << c.reference << ',' << c.value << ','
           << c.error_bound << ',' << (c.pass ? "pass" : "fail") << ',' << c.runtime_s << '\n';
    }
    return os.str();
}

}  // namespace menger
