#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

#include "builtin_sets.hpp"
#include "geometry.hpp"
#include "scaled_real.hpp"

namespace menger {

// M_E is taken by <cmath>, hence the "_of_" spelling.
enum class ClosedFormBound { U_of_E, I_of_E, M_of_E, F_of_E1E1E2, holder, chain };

inline std::string to_string(ClosedFormBound b) {
    switch (b) {
        case ClosedFormBound::U_of_E: return "U_E";
        case ClosedFormBound::I_of_E: return "I_E";
        case ClosedFormBound::M_of_E: return "M_E";
        case ClosedFormBound::F_of_E1E1E2: return "F_E1E1E2";
        case ClosedFormBound::holder: return "holder";
        case ClosedFormBound::chain: return "chain";
    }
    return "?";
}

// Arguments of the closed-form bounds. `p` is used by every bound; the
// others only where noted.
struct BoundArgs {
    double p = 0.0;
    double measure = 0.0;     // holder, chain: total length of the set
    double thickness = 0.0;   // chain
    double q = 0.0;           // holder: exponent with known energy, q > p
    double energy_q = 0.0;    // holder: energy at exponent q
    int integrations = 3;     // holder: 1 for U, 2 for I, 3 for M
};

inline ClosedFormBound parse_closed_form_bound(const std::string& s) {
    for (ClosedFormBound b : {ClosedFormBound::U_of_E, ClosedFormBound::I_of_E, ClosedFormBound::M_of_E, ClosedFormBound::F_of_E1E1E2,
                         ClosedFormBound::holder, ClosedFormBound::chain})
        if (to_string(b) == s) return b;
    throw std::invalid_argument("unknown bound: " + s);
}

// Closed-form upper bounds for the set E and the generic inequalities.
//  U_E:      6 / (1 - p),                                         p in (0, 1)
//  I_E:      9 2^(3p/2 + 1) (2^(1-p) - 1) / ((1 - p)(2 - p)),    p in (1, 2)
//  M_E:      72 pi / (3 - p)^2,                                   p in [2, 3)
//  F_E1E1E2: 4 pi / (3 - p)^2,                                    p in [2, 3)
//  holder:   H^(d (1 - p/q)) E_q^(p/q),                           0 < p < q
//  chain:    H^3 / Delta^p,                                       p > 0
inline double closed_form_bound(ClosedFormBound name, const BoundArgs& a) {
    const double p = a.p;
    auto window = [&](bool ok) {
        if (!ok) throw std::domain_error("closed_form_bound " + to_string(name) + ": p outside its validity window");
    };
    switch (name) {
        case ClosedFormBound::U_of_E:
            window(p > 0.0 && p < 1.0);
            return 6.0 / (1.0 - p);
        case ClosedFormBound::I_of_E:
            window(p > 1.0 && p < 2.0);
            return 9.0 * std::pow(2.0, 1.5 * p + 1.0) * (std::pow(2.0, 1.0 - p) - 1.0) / ((1.0 - p) * (2.0 - p));
        case ClosedFormBound::M_of_E:
            window(p >= 2.0 && p < 3.0);
            return 72.0 * std::numbers::pi / ((3.0 - p) * (3.0 - p));
        case ClosedFormBound::F_of_E1E1E2:
            window(p >= 2.0 && p < 3.0);
            return 4.0 * std::numbers::pi / ((3.0 - p) * (3.0 - p));
        case ClosedFormBound::holder:
            window(p > 0.0 && a.q > p);
            if (a.integrations < 1 || a.integrations > 3) throw std::domain_error("closed_form_bound holder: integrations outside 1..3");
            return std::pow(a.measure, a.integrations * (1.0 - p / a.q)) * std::pow(a.energy_q, p / a.q);
        case ClosedFormBound::chain:
            window(p > 0.0);
            if (a.thickness <= 0.0) return kInf;
            return std::pow(a.measure, 3.0) / std::pow(a.thickness, p);
    }
    throw std::domain_error("closed_form_bound: unknown bound");
}

// Exact checks of the term bounds behind finiteness of I_p on the set F.
struct FSeriesReport {
    struct Separation {
        int k = 0, l = 0;
        ScaledReal dist;    // dist(B_k, B_l)
        ScaledReal bound;   // a_min(k,l) / 4
        bool ok = false;
    };
    struct Quotient {
        int q = 0, k = 0, m = 0;
        std::int64_t exponent = 0;          // -m^m m^3 + q k^k k^3
        bool index_inequality = false;      // -m^3 + k^3 <= -3m
        bool power_inequality = false;      // q k^k <= m^m
        bool ok = false;                    // exponent <= -3m
    };
    struct SameBlock {
        int n = 0;
        int samples = 0;
        ScaledReal kappa_max;        // largest 2 max{f(a_{n+1}), f(a_{n-1}/2)} over the sample grid
        ScaledReal bound;            // 8 / a_{n-1}
        bool maximizer_in_block = false;  // sqrt(eta zeta) in A_n for every sample
        bool candidates_bracket = false;  // a_{n+1} < sqrt(eta zeta) < a_{n-1}/2 by the sign of f'
        bool ok = false;
    };

    int n_max = 0;
    double p = 0.0;
    std::vector<Separation> separation;
    std::vector<Quotient> quotients;
    std::vector<SameBlock> same_block;
    ScaledReal step3_partial, step3_bound;
    ScaledReal step4_partial, step4_bound;
    bool step3_ok = false, step4_ok = false;
    bool all_ok = false;
};

namespace detail {

inline std::int64_t ipow(std::int64_t b, int e) {
    std::int64_t r = 1;
    for (int i = 0; i < e; ++i) r *= b;
    return r;
}

// f(xi) = xi / (sqrt(xi^2 + eta^2) sqrt(xi^2 + zeta^2)).
inline ScaledReal f_same_block(const ScaledReal& xi, const ScaledReal& eta, const ScaledReal& zeta) {
    return xi / ((xi * xi + eta * eta).sqrt() * (xi * xi + zeta * zeta).sqrt());
}

}  // namespace detail

// Verifies, in exact exponent arithmetic, the block separation, the index and
// quotient inequalities, the same-block bound on kappa_i, and the finiteness
// of the two series for F truncated at n_max.
inline FSeriesReport set_F_series_bounds(int n_max, double p) {
    if (n_max < 1 || n_max > DyadicLadder::kMaxIndex) throw std::invalid_argument("set_F_series_bounds: n_max outside 1..8");
    if (!(p >= 3.0)) throw std::invalid_argument("set_F_series_bounds: p must be >= 3");
    if (std::ceil(p) + 1 > DyadicLadder::kMaxIndex) throw std::invalid_argument("set_F_series_bounds: p too large");
    FSeriesReport rep;
    rep.n_max = n_max;
    rep.p = p;
    auto a = [](int n) { return DyadicLadder::a(n); };
    const ScaledReal half = ScaledReal::pow2(-1), quarter = ScaledReal::pow2(-2);
    bool ok = true;

    for (int k = 1; k <= n_max; ++k) {
        for (int l = k + 1; l <= n_max; ++l) {
            FSeriesReport::Separation s;
            s.k = k;
            s.l = l;
            if (DyadicLadder::axis(k) != DyadicLadder::axis(l)) {
                // nearest points are the inner endpoints on the two axes
                const ScaledReal u = a(k) * half, v = a(l) * half;
                s.dist = (u * u + v * v).sqrt();
            } else {
                s.dist = a(k) * half - a(l);
            }
            s.bound = a(k) * quarter;
            s.ok = s.dist >= s.bound;
            ok = ok && s.ok;
            rep.separation.push_back(s);
        }
    }

    for (int q : {2, 3}) {
        for (int k = q; k <= n_max; ++k) {
            for (int m = k + 1; m <= n_max; ++m) {
                FSeriesReport::Quotient c;
                c.q = q;
                c.k = k;
                c.m = m;
                const std::int64_t em = DyadicLadder::exponent(m), ek = DyadicLadder::exponent(k);
                c.exponent = -em + q * ek;
                c.index_inequality = -detail::ipow(m, 3) + detail::ipow(k, 3) <= -3 * m;
                c.power_inequality = q * detail::ipow(k, k) <= detail::ipow(m, m);
                const ScaledReal ratio = a(m) / a(k).pow(static_cast<std::int64_t>(q));
                c.ok = c.exponent <= -3 * m && ratio <= ScaledReal::pow2(-3 * m) && c.index_inequality &&
                       c.power_inequality;
                ok = ok && c.ok;
                rep.quotients.push_back(c);
            }
        }
    }

    // same-block bound for every block with both neighbours present
    for (int n = 2; n + 1 <= n_max; ++n) {
        FSeriesReport::SameBlock sb;
        sb.n = n;
        sb.bound = ScaledReal::pow2(3) / a(n - 1);
        sb.maximizer_in_block = true;
        sb.candidates_bracket = true;
        const ScaledReal lo = a(n) * half;
        const ScaledReal xi_lo = a(n + 1), xi_hi = a(n - 1) * half;
        const int grid = 9;
        for (int i = 0; i < grid; ++i) {
            for (int j = 0; j < grid; ++j) {
                // eta, zeta = a_n/2 (1 + i/(grid-1)), exact up to mantissa rounding
                const ScaledReal eta = lo * ScaledReal::from_double(1.0 + static_cast<double>(i) / (grid - 1));
                const ScaledReal zeta = lo * ScaledReal::from_double(1.0 + static_cast<double>(j) / (grid - 1));
                const ScaledReal star = (eta * zeta).sqrt();
                sb.maximizer_in_block = sb.maximizer_in_block && star >= lo && star <= a(n);
                // f' has the sign of eta^2 zeta^2 - xi^4
                const ScaledReal ez2 = (eta * zeta) * (eta * zeta);
                sb.candidates_bracket = sb.candidates_bracket && xi_lo.pow(static_cast<std::int64_t>(4)) < ez2 &&
                                        xi_hi.pow(static_cast<std::int64_t>(4)) > ez2;
                const ScaledReal f1 = detail::f_same_block(xi_lo, eta, zeta);
                const ScaledReal f2 = detail::f_same_block(xi_hi, eta, zeta);
                const ScaledReal k = ScaledReal::pow2(1) * (f1 >= f2 ? f1 : f2);
                if (k > sb.kappa_max) sb.kappa_max = k;
                ++sb.samples;
            }
        }
        sb.ok = sb.maximizer_in_block && sb.candidates_bracket && sb.kappa_max <= sb.bound;
        ok = ok && sb.ok;
        rep.same_block.push_back(sb);
    }

    // Step 3: sum over k != m of (8 / max(a_k, a_m))^p a_k a_m / 4
    const ScaledReal eight_p = ScaledReal::pow2(3).pow(p);
    ScaledReal s3;
    for (int k = 1; k <= n_max; ++k) {
        for (int m = 1; m <= n_max; ++m) {
            if (k == m) continue;
            const ScaledReal big = a(k) >= a(m) ? a(k) : a(m);
            s3 += eight_p / big.pow(p) * a(k) * a(m) * quarter;
        }
    }
    const double q = p - 1.0;
    const int cq = static_cast<int>(std::ceil(q));
    rep.step3_partial = s3;
    rep.step3_bound = ScaledReal::from_double(4.0) * (eight_p / ScaledReal::pow2(3)) *
                      (ScaledReal::pow2(0) / a(cq).pow(p) + ScaledReal::pow2(0));
    rep.step3_ok = s3 <= rep.step3_bound;

    // Step 4: 8^p / 64 + sum_{n >= 2} 8^p a_n^2 / (4 a_{n-1}^p)
    ScaledReal s4 = eight_p / ScaledReal::pow2(6);
    for (int n = 2; n <= n_max; ++n) s4 += eight_p * a(n) * a(n) * quarter / a(n - 1).pow(p);
    ScaledReal cp = eight_p / ScaledReal::pow2(6);
    const int cp_top = static_cast<int>(std::ceil(p)) + 1;
    for (int n = 2; n <= cp_top; ++n) cp += eight_p * a(n) / a(n - 1).pow(p);
    rep.step4_partial = s4;
    rep.step4_bound = cp + ScaledReal::pow2(1) * eight_p;
    rep.step4_ok = s4 <= rep.step4_bound;

    rep.all_ok = ok && rep.step3_ok && rep.step4_ok;
    return rep;
}

}  // namespace menger
