#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "curvature.hpp"
#include "parallel.hpp"
#include "quadrature.hpp"
#include "segment_set.hpp"

namespace menger {

struct EnergyParams {
    double alpha = 1.0;
    double p = 1.0;

    void validate_numeric() const {
        if (!(p > 0.0)) throw std::invalid_argument("energy: p must be positive");
        if (!(alpha > 0.0)) throw std::invalid_argument("energy: alpha must be positive");
        if (alpha != 1.0) throw std::invalid_argument("energy: numeric estimation requires alpha = 1");
    }
};

enum class EnergyFamily { U, I, M };
enum class EnergyMethod { AdaptiveQuadrature, MonteCarlo };

inline std::string to_string(EnergyFamily f) {
    switch (f) {
        case EnergyFamily::U: return "U";
        case EnergyFamily::I: return "I";
        case EnergyFamily::M: return "M";
    }
    return "?";
}

inline EnergyFamily parse_family(const std::string& s) {
    if (s == "U") return EnergyFamily::U;
    if (s == "I") return EnergyFamily::I;
    if (s == "M") return EnergyFamily::M;
    throw std::invalid_argument("unknown energy family '" + s + "' (expected U, I or M)");
}

inline std::string to_string(EnergyMethod m) {
    return m == EnergyMethod::AdaptiveQuadrature ? "AdaptiveQuadrature" : "MonteCarlo";
}

// An energy value with its error bound. When `diverged` is set the value is a
// lower bound (partial sum up to `witness_scale`), not a converged estimate.
struct EnergyEstimate {
    double value = 0.0;
    double error_bound = 0.0;
    EnergyMethod method = EnergyMethod::AdaptiveQuadrature;
    std::int64_t evaluations = 0;
    bool diverged = false;
    bool converged = true;
    double witness_scale = 0.0;

    double rel_error() const { return value > 0.0 ? error_bound / value : (error_bound > 0.0 ? kInf : 0.0); }

    EnergyEstimate& operator+=(const EnergyEstimate& o) {
        value += o.value;
        error_bound += o.error_bound;
        evaluations += o.evaluations;
        diverged = diverged || o.diverged;
        converged = converged && o.converged;
        if (o.diverged && (witness_scale == 0.0 || o.witness_scale < witness_scale)) witness_scale = o.witness_scale;
        return *this;
    }
};

namespace detail {

template <std::size_t N>
Point<N> seg_point(const Segment<N>& g, double t) {
    // measure from the nearer endpoint to keep distances to it accurate
    return t <= 0.5 ? g.p + (t * g.length) * g.dir : g.q - ((1.0 - t) * g.length) * g.dir;
}

inline EnergyEstimate from_corner(const CornerIntegral& c, double weight) {
    EnergyEstimate e;
    e.value = weight * c.value;
    e.error_bound = weight * c.error;
    e.evaluations = c.evals;
    e.diverged = c.diverged;
    e.converged = c.converged;
    e.witness_scale = c.diverged ? c.witness_scale : 0.0;
    return e;
}

template <std::size_t N>
EnergyEstimate sum_in_order(const std::vector<EnergyEstimate>& parts) {
    EnergyEstimate total;
    std::vector<double> v, e;
    for (const auto& p : parts) {
        v.push_back(p.value);
        e.push_back(p.error_bound);
        total.evaluations += p.evaluations;
        total.diverged = total.diverged || p.diverged;
        total.converged = total.converged && p.converged;
        if (p.diverged && (total.witness_scale == 0.0 || p.witness_scale < total.witness_scale)) {
            total.witness_scale = p.witness_scale;
        }
    }
    total.value = stable_sum(v);
    total.error_bound = stable_sum(e);
    return total;
}

// Curvature of (x, y, z) with x on a, y on b, z on c. A pair of points known
// to share a line uses the line formula so coincidences inside the pair are
// handled by continuity.
template <std::size_t N>
struct TripleKernel {
    int line_pair = -1;  // 0: (x,y), 1: (y,z), 2: (x,z); -1: none
    Point<N> e;

    TripleKernel(const Segment<N>& a, const Segment<N>& b, const Segment<N>& c) {
        if (a == b || SegmentSet<N>::collinear_segments(a, b)) {
            line_pair = 0;
            e = a.dir;
        } else if (b == c || SegmentSet<N>::collinear_segments(b, c)) {
            line_pair = 1;
            e = b.dir;
        } else if (a == c || SegmentSet<N>::collinear_segments(a, c)) {
            line_pair = 2;
            e = a.dir;
        }
    }

    double operator()(const Point<N>& x, const Point<N>& y, const Point<N>& z) const {
        switch (line_pair) {
            case 0: return kappa_on_line(x, y, e, z);
            case 1: return kappa_on_line(y, z, e, x);
            case 2: return kappa_on_line(x, z, e, y);
            default: return kappa_fast(x, y, z);
        }
    }
};

template <std::size_t N>
bool all_collinear(const Segment<N>& a, const Segment<N>& b, const Segment<N>& c) {
    auto col = [](const Segment<N>& u, const Segment<N>& v) { return u == v || SegmentSet<N>::collinear_segments(u, v); };
    return col(a, b) && col(b, c) && col(a, c);
}

template <std::size_t N>
const Point<N>& endpoint(const Segment<N>& g, int end) {
    return end == 0 ? g.p : g.q;
}

// Triple integral of kappa^p over a x b x c (arclength measure).
template <std::size_t N>
CornerIntegral triple_integral(const Segment<N>& a, const Segment<N>& b, const Segment<N>& c, double p,
                               const QuadratureConfig& cfg) {
    if (all_collinear(a, b, c)) return {};
    const TripleKernel<N> K(a, b, c);
    const double jac = a.length * b.length * c.length;
    auto f = [&](const std::array<double, 3>& t) {
        const double k = K(seg_point(a, t[0]), seg_point(b, t[1]), seg_point(c, t[2]));
        return k > 0.0 ? std::pow(k, p) * jac : 0.0;
    };
    std::array<bool, 8> sing{};
    for (std::size_t m = 0; m < 8; ++m) {
        const auto& P = endpoint(a, static_cast<int>(m & 1U));
        const auto& Q = endpoint(b, static_cast<int>((m >> 1) & 1U));
        const auto& R = endpoint(c, static_cast<int>((m >> 2) & 1U));
        sing[m] = coincident(P, Q) && coincident(Q, R);
    }
    return graded_corner_integral<3>(f, sing, cfg);
}

}  // namespace detail

// U_p(X): integral of kappa_G^p over X.
template <std::size_t N>
EnergyEstimate energy_U(const SegmentSet<N>& X, const EnergyParams& params, const QuadratureConfig& cfg) {
    params.validate_numeric();
    cfg.validate();
    const double p = params.p;
    auto parts = parallel_map<EnergyEstimate>(X.size(), [&](std::size_t i) {
        const auto& g = X[i];
        auto f = [&](const std::array<double, 1>& t) {
            const double k = kappa_G_at(X, detail::seg_point(g, t[0]));
            return k > 0.0 ? std::pow(k, p) * g.length : 0.0;
        };
        std::array<bool, 2> sing{X.is_junction(X.vertex(i, 0)), X.is_junction(X.vertex(i, 1))};
        return detail::from_corner(graded_corner_integral<1>(f, sing, cfg), 1.0);
    });
    return detail::sum_in_order<N>(parts);
}

// I_p(X): double integral of kappa_i^p over X x X.
template <std::size_t N>
EnergyEstimate energy_I(const SegmentSet<N>& X, const EnergyParams& params, const QuadratureConfig& cfg) {
    params.validate_numeric();
    cfg.validate();
    const double p = params.p;
    std::vector<std::pair<std::size_t, std::size_t>> pairs;
    for (std::size_t i = 0; i < X.size(); ++i) {
        for (std::size_t j = i; j < X.size(); ++j) pairs.emplace_back(i, j);
    }
    auto parts = parallel_map<EnergyEstimate>(pairs.size(), [&](std::size_t n) {
        const auto [i, j] = pairs[n];
        const auto& a = X[i];
        const auto& b = X[j];
        const bool same_line = X.collinear(i, j);
        const double jac = a.length * b.length;
        auto f = [&](const std::array<double, 2>& t) {
            const Point<N> x = detail::seg_point(a, t[0]);
            const Point<N> y = detail::seg_point(b, t[1]);
            double k;
            if (same_line) {
                k = kappa_i_on_line(X, x, y, a.dir);
            } else {
                if (coincident(x, y)) return 0.0;
                k = detail::kappa_i_probe(X, detail::PairProbe<N>{x, y, std::nullopt});
            }
            return k > 0.0 ? std::pow(k, p) * jac : 0.0;
        };
        std::array<bool, 4> sing{};
        for (std::size_t m = 0; m < 4; ++m) {
            const int va = X.vertex(i, static_cast<int>(m & 1U));
            const int vb = X.vertex(j, static_cast<int>((m >> 1) & 1U));
            sing[m] = va == vb && X.is_junction(va);
        }
        return detail::from_corner(graded_corner_integral<2>(f, sing, cfg), i == j ? 1.0 : 2.0);
    });
    return detail::sum_in_order<N>(parts);
}

// M_p(X): triple integral of kappa^p over X^3. Uses the symmetry of kappa to
// integrate each multiset of segments once; triples on a single line vanish
// identically and are skipped.
template <std::size_t N>
EnergyEstimate energy_M(const SegmentSet<N>& X, const EnergyParams& params, const QuadratureConfig& cfg) {
    params.validate_numeric();
    cfg.validate();
    struct Job {
        std::size_t i, j, k;
        double mult;
    };
    std::vector<Job> jobs;
    for (std::size_t i = 0; i < X.size(); ++i) {
        for (std::size_t j = i; j < X.size(); ++j) {
            for (std::size_t k = j; k < X.size(); ++k) {
                if (detail::all_collinear(X[i], X[j], X[k])) continue;
                const double mult = (i == j && j == k) ? 1.0 : (i == j || j == k) ? 3.0 : 6.0;
                jobs.push_back({i, j, k, mult});
            }
        }
    }
    auto parts = parallel_map<EnergyEstimate>(jobs.size(), [&](std::size_t n) {
        const Job& jb = jobs[n];
        return detail::from_corner(detail::triple_integral(X[jb.i], X[jb.j], X[jb.k], params.p, cfg), jb.mult);
    });
    return detail::sum_in_order<N>(parts);
}

// F_p(A, B, C): triple integral of kappa^p over A x B x C.
template <std::size_t N>
EnergyEstimate functional_F_p(const SegmentSet<N>& A, const SegmentSet<N>& B, const SegmentSet<N>& C, double p,
                              const QuadratureConfig& cfg) {
    EnergyParams{1.0, p}.validate_numeric();
    cfg.validate();
    struct Job {
        std::size_t i, j, k;
    };
    std::vector<Job> jobs;
    for (std::size_t i = 0; i < A.size(); ++i) {
        for (std::size_t j = 0; j < B.size(); ++j) {
            for (std::size_t k = 0; k < C.size(); ++k) jobs.push_back({i, j, k});
        }
    }
    auto parts = parallel_map<EnergyEstimate>(jobs.size(), [&](std::size_t n) {
        const Job& jb = jobs[n];
        return detail::from_corner(detail::triple_integral(A[jb.i], B[jb.j], C[jb.k], p, cfg), 1.0);
    });
    return detail::sum_in_order<N>(parts);
}

template <std::size_t N>
EnergyEstimate energy(const SegmentSet<N>& X, EnergyFamily fam, const EnergyParams& params,
                      const QuadratureConfig& cfg) {
    switch (fam) {
        case EnergyFamily::U: return energy_U(X, params, cfg);
        case EnergyFamily::I: return energy_I(X, params, cfg);
        case EnergyFamily::M: return energy_M(X, params, cfg);
    }
    throw std::invalid_argument("energy: unknown family");
}

// Energies of X restricted to the closed balls B_r(x) for decreasing radii.
template <std::size_t N>
std::vector<EnergyEstimate> energy_on_ball(const SegmentSet<N>& X, EnergyFamily fam, const EnergyParams& params,
                                           const QuadratureConfig& cfg, const Point<N>& x,
                                           const std::vector<double>& radii) {
    for (std::size_t k = 0; k < radii.size(); ++k) {
        if (!(radii[k] > 0.0)) throw std::invalid_argument("energy_on_ball: radii must be positive");
        if (k > 0 && !(radii[k] < radii[k - 1])) throw std::invalid_argument("energy_on_ball: radii must decrease");
    }
    std::vector<EnergyEstimate> out;
    for (double r : radii) {
        const auto Xr = clip_to_ball(X, x, r);
        out.push_back(Xr.empty() ? EnergyEstimate{} : energy(Xr, fam, params, cfg));
    }
    return out;
}

// Non-decay test on a decreasing-radius sequence of restricted energies:
// min/max over the last `window` values at least `ratio`.
inline bool ball_sequence_plateau(const std::vector<EnergyEstimate>& seq, std::size_t window = 4, double ratio = 0.5) {
    if (seq.size() < window || window == 0) return false;
    double lo = kInf, hi = 0.0;
    for (std::size_t k = seq.size() - window; k < seq.size(); ++k) {
        lo = std::min(lo, seq[k].value);
        hi = std::max(hi, seq[k].value);
    }
    return hi > 0.0 && lo / hi >= ratio;
}

// Monte Carlo estimate with arclength-uniform samples from a seeded
// mt19937_64; error bound is three standard errors.
template <std::size_t N>
EnergyEstimate energy_monte_carlo(const SegmentSet<N>& X, EnergyFamily fam, const EnergyParams& params,
                                  const QuadratureConfig& cfg) {
    params.validate_numeric();
    cfg.validate();
    EnergyEstimate e;
    e.method = EnergyMethod::MonteCarlo;
    if (X.empty()) return e;
    const double H = X.total_measure();
    std::mt19937_64 rng(cfg.seed);
    auto u01 = [&rng] { return static_cast<double>(rng() >> 11) * 0x1.0p-53; };
    const int dim = fam == EnergyFamily::U ? 1 : fam == EnergyFamily::I ? 2 : 3;
    double mean = 0.0, m2 = 0.0;
    for (std::int64_t n = 1; n <= cfg.mc_samples; ++n) {
        const Point<N> x = sample_point(X, u01());
        double k = 0.0;
        if (fam == EnergyFamily::U) {
            k = kappa_G_at(X, x);
        } else if (fam == EnergyFamily::I) {
            const Point<N> y = sample_point(X, u01());
            k = coincident(x, y) ? 0.0 : kappa_i_at(X, x, y);
        } else {
            const Point<N> y = sample_point(X, u01());
            const Point<N> z = sample_point(X, u01());
            k = kappa(x, y, z);
        }
        const double v = k > 0.0 ? std::pow(k, params.p) : 0.0;
        const double d = v - mean;
        mean += d / static_cast<double>(n);
        m2 += d * (v - mean);
    }
    const double scale = std::pow(H, dim);
    const double n = static_cast<double>(cfg.mc_samples);
    const double sd = n > 1 ? std::sqrt(m2 / (n - 1.0)) : 0.0;
    e.value = scale * mean;
    e.error_bound = 3.0 * scale * sd / std::sqrt(n);
    e.evaluations = cfg.mc_samples;
    return e;
}

}  // namespace menger
