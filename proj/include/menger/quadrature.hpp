#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <queue>
#include <span>
#include <stdexcept>
#include <vector>

#include <boost/math/quadrature/gauss.hpp>

namespace menger {

// Settings shared by the quadrature-based estimators.
struct QuadratureConfig {
    int base_order = 8;                  // Gauss nodes per axis
    int max_depth = 14;                  // corner layers
    double rel_tol = 1e-3;
    double abs_tol = 1e-12;
    double singularity_grading = 0.5;    // corner layer ratio
    double g_div = 1.05;                 // layer growth marking divergence
    std::int64_t max_evals = 40'000'000; // per adaptive region
    std::int64_t mc_samples = 200'000;
    std::uint64_t seed = 1;

    void validate() const {
        if (base_order < 2 || base_order > 16) throw std::invalid_argument("QuadratureConfig: base_order outside 2..16");
        if (max_depth < 3) throw std::invalid_argument("QuadratureConfig: max_depth must be >= 3");
        if (!(rel_tol >= 1e-12)) throw std::invalid_argument("QuadratureConfig: rel_tol must be >= 1e-12");
        if (!(abs_tol > 0.0)) throw std::invalid_argument("QuadratureConfig: abs_tol must be positive");
        if (!(singularity_grading > 0.0 && singularity_grading < 1.0)) {
            throw std::invalid_argument("QuadratureConfig: singularity_grading outside (0, 1)");
        }
        if (!(g_div > 1.0)) throw std::invalid_argument("QuadratureConfig: g_div must exceed 1");
        if (max_evals <= 0 || mc_samples <= 0) throw std::invalid_argument("QuadratureConfig: budgets must be positive");
    }
};

// Gauss-Legendre nodes and weights on [0, 1].
struct GaussRule {
    std::vector<double> x;
    std::vector<double> w;
};

namespace detail {

template <unsigned Order>
GaussRule make_rule() {
    using G = boost::math::quadrature::gauss<double, Order>;
    const auto& a = G::abscissa();
    const auto& wt = G::weights();
    GaussRule r;
    // boost stores the nonnegative half of the symmetric rule on [-1, 1]
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double xi = a[i], wi = wt[i];
        if (xi == 0.0) {
            r.x.push_back(0.5);
            r.w.push_back(0.5 * wi);
        } else {
            r.x.push_back(0.5 * (1.0 - xi));
            r.w.push_back(0.5 * wi);
            r.x.push_back(0.5 * (1.0 + xi));
            r.w.push_back(0.5 * wi);
        }
    }
    return r;
}

}  // namespace detail

inline const GaussRule& gauss_rule(int order) {
    static const std::array<GaussRule, 17> rules = [] {
        std::array<GaussRule, 17> r{};
        r[1] = GaussRule{{0.5}, {1.0}};
        r[2] = detail::make_rule<2>();
        r[3] = detail::make_rule<3>();
        r[4] = detail::make_rule<4>();
        r[5] = detail::make_rule<5>();
        r[6] = detail::make_rule<6>();
        r[7] = detail::make_rule<7>();
        r[8] = detail::make_rule<8>();
        r[9] = detail::make_rule<9>();
        r[10] = detail::make_rule<10>();
        r[11] = detail::make_rule<11>();
        r[12] = detail::make_rule<12>();
        r[13] = detail::make_rule<13>();
        r[14] = detail::make_rule<14>();
        r[15] = detail::make_rule<15>();
        r[16] = detail::make_rule<16>();
        return r;
    }();
    if (order < 1 || order > 16) throw std::invalid_argument("gauss_rule: order outside 1..16");
    return rules[static_cast<std::size_t>(order)];
}

template <std::size_t D>
struct Box {
    std::array<double, D> lo{};
    std::array<double, D> hi{};

    double volume() const {
        double v = 1.0;
        for (std::size_t i = 0; i < D; ++i) v *= hi[i] - lo[i];
        return v;
    }
    friend bool operator<(const Box& a, const Box& b) {
        if (a.lo != b.lo) return a.lo < b.lo;
        return a.hi < b.hi;
    }
};

struct CubatureResult {
    double value = 0.0;
    double error = 0.0;
    std::int64_t evals = 0;
    bool budget_exhausted = false;
};

// Neumaier-compensated sum in the given order.
inline double stable_sum(std::span<const double> v) {
    double s = 0.0, c = 0.0;
    for (double x : v) {
        const double t = s + x;
        c += std::abs(s) >= std::abs(x) ? (s - t) + x : (x - t) + s;
        s = t;
    }
    return s + c;
}

namespace detail {

template <std::size_t D, class F>
double tensor_rule(const F& f, const Box<D>& b, const GaussRule& r) {
    const std::size_t n = r.x.size();
    std::array<std::size_t, D> idx{};
    std::array<double, D> pt{};
    std::array<double, D> h{};
    for (std::size_t i = 0; i < D; ++i) h[i] = b.hi[i] - b.lo[i];
    double sum = 0.0;
    while (true) {
        double w = 1.0;
        for (std::size_t i = 0; i < D; ++i) {
            pt[i] = b.lo[i] + h[i] * r.x[idx[i]];
            w *= r.w[idx[i]];
        }
        sum += w * f(pt);
        std::size_t k = 0;
        while (k < D && ++idx[k] == n) idx[k++] = 0;
        if (k == D) break;
    }
    return sum * b.volume();
}

template <std::size_t D>
struct Cell {
    Box<D> box;
    double value = 0.0;
    double error = 0.0;
    int depth = 0;
};

template <std::size_t D>
struct CellLess {
    bool operator()(const Cell<D>& a, const Cell<D>& b) const {
        if (a.error != b.error) return a.error < b.error;
        return b.box < a.box;
    }
};

}  // namespace detail

// Globally adaptive tensor Gauss-Legendre cubature over a list of boxes.
// Each cell is estimated with the order-n rule; its error is the difference
// to the order-n/2 rule. The worst cell is bisected along every axis until the
// summed error meets max(abs_tol, rel_tol |value|) or the budget runs out.
// The result is summed over cells in canonical box order.
template <std::size_t D, class F>
CubatureResult adaptive_cubature(const F& f, const std::vector<Box<D>>& init, int order, double rel_tol,
                                 double abs_tol, std::int64_t max_evals, int max_cell_depth = 40) {
    const GaussRule& hi_rule = gauss_rule(order);
    const GaussRule& lo_rule = gauss_rule(std::max(1, order / 2));
    std::int64_t per_cell = 1, per_cell_lo = 1;
    for (std::size_t i = 0; i < D; ++i) {
        per_cell *= static_cast<std::int64_t>(hi_rule.x.size());
        per_cell_lo *= static_cast<std::int64_t>(lo_rule.x.size());
    }
    per_cell += per_cell_lo;

    CubatureResult res;
    auto make_cell = [&](const Box<D>& b, int depth) {
        detail::Cell<D> c;
        c.box = b;
        c.depth = depth;
        c.value = detail::tensor_rule(f, b, hi_rule);
        c.error = std::abs(c.value - detail::tensor_rule(f, b, lo_rule));
        res.evals += per_cell;
        return c;
    };

    std::priority_queue<detail::Cell<D>, std::vector<detail::Cell<D>>, detail::CellLess<D>> heap;
    std::vector<detail::Cell<D>> frozen;
    double total = 0.0, err = 0.0;
    for (const auto& b : init) {
        auto c = make_cell(b, 0);
        total += c.value;
        err += c.error;
        heap.push(c);
    }
    while (!heap.empty()) {
        if (err <= std::max(abs_tol, rel_tol * std::abs(total))) break;
        if (res.evals + (static_cast<std::int64_t>(1) << D) * per_cell > max_evals) {
            res.budget_exhausted = true;
            break;
        }
        auto c = heap.top();
        heap.pop();
        if (c.depth >= max_cell_depth) {
            frozen.push_back(c);
            continue;
        }
        total -= c.value;
        err -= c.error;
        for (std::size_t m = 0; m < (static_cast<std::size_t>(1) << D); ++m) {
            Box<D> b;
            for (std::size_t i = 0; i < D; ++i) {
                const double mid = 0.5 * (c.box.lo[i] + c.box.hi[i]);
                if ((m >> i) & 1U) {
                    b.lo[i] = mid;
                    b.hi[i] = c.box.hi[i];
                } else {
                    b.lo[i] = c.box.lo[i];
                    b.hi[i] = mid;
                }
            }
            auto child = make_cell(b, c.depth + 1);
            total += child.value;
            err += child.error;
            heap.push(child);
        }
    }
    std::vector<detail::Cell<D>> cells = std::move(frozen);
    while (!heap.empty()) {
        cells.push_back(heap.top());
        heap.pop();
    }
    std::sort(cells.begin(), cells.end(), [](const auto& a, const auto& b) { return a.box < b.box; });
    std::vector<double> vals, errs;
    vals.reserve(cells.size());
    errs.reserve(cells.size());
    for (const auto& c : cells) {
        vals.push_back(c.value);
        errs.push_back(c.error);
    }
    res.value = stable_sum(vals);
    res.error = stable_sum(errs);
    return res;
}

// Result of an integral over [0,1]^D whose integrand may blow up at some
// corners of the cube.
struct CornerIntegral {
    double value = 0.0;
    double error = 0.0;
    std::int64_t evals = 0;
    bool diverged = false;
    bool converged = true;
    double witness_scale = 0.0;        // side of the innermost layer used
    std::vector<double> layer_sums;    // summed over singular corners, per layer
    double layer_ratio = 0.0;          // last observed ratio L_k / L_{k-1}
};

// Integral of f over [0,1]^D. `singular` flags, for each corner (bit i set
// means coordinate i equals 1), whether f may be unbounded there.
//
// The cube is split into 2^D half-cubes. Regular half-cubes are integrated
// adaptively. A singular half-cube is peeled into geometric layers of ratio
// q = cfg.singularity_grading around its corner; with layer sums L_k and
// rho_k = L_k / L_{k-1} the remainder beyond layer K is extrapolated as
// L_K rho_K / (1 - rho_K). Three successive rho_k >= 1 / g_div mark the
// integral as divergent; the returned value is then the partial sum, a lower
// bound.
template <std::size_t D, class F>
CornerIntegral graded_corner_integral(const F& f, const std::array<bool, (1U << D)>& singular,
                                      const QuadratureConfig& cfg) {
    constexpr std::size_t kCorners = static_cast<std::size_t>(1) << D;
    CornerIntegral out;
    const double q = cfg.singularity_grading;

    auto corner_box = [&](std::size_t c, const std::array<double, D>& lo, const std::array<double, D>& hi) {
        Box<D> b;
        for (std::size_t i = 0; i < D; ++i) {
            if ((c >> i) & 1U) {
                b.lo[i] = 1.0 - hi[i];
                b.hi[i] = 1.0 - lo[i];
            } else {
                b.lo[i] = lo[i];
                b.hi[i] = hi[i];
            }
        }
        return b;
    };

    std::vector<Box<D>> regular;
    std::vector<std::size_t> sing;
    for (std::size_t c = 0; c < kCorners; ++c) {
        std::array<double, D> lo{}, hi{};
        hi.fill(0.5);
        if (singular[c]) {
            sing.push_back(c);
        } else {
            regular.push_back(corner_box(c, lo, hi));
        }
    }

    double reg_val = 0.0, reg_err = 0.0;
    if (!regular.empty()) {
        auto r = adaptive_cubature<D>(f, regular, cfg.base_order, cfg.rel_tol * 0.25, cfg.abs_tol, cfg.max_evals);
        reg_val = r.value;
        reg_err = r.error;
        out.evals += r.evals;
        if (r.budget_exhausted) out.converged = false;
    }
    if (sing.empty()) {
        out.value = reg_val;
        out.error = reg_err;
        return out;
    }

    // shell k covers local coordinates [0, h_k]^D \ [0, q h_k]^D with h_0 = 1/2
    const double layer_tol = cfg.rel_tol * 0.1;
    std::vector<double> L, Lerr;
    double h = 0.5;
    double partial = 0.0, partial_err = 0.0;
    double predicted_prev = 0.0;
    bool have_prev_prediction = false;
    int growth_run = 0;
    double tail = 0.0, tail_err = 0.0;
    bool done = false;

    for (int k = 0; k < cfg.max_depth && !done; ++k) {
        std::vector<Box<D>> shell;
        const double inner = q * h;
        for (std::size_t c : sing) {
            // split [0,h]^D along each axis at `inner`; skip the innermost box
            for (std::size_t m = 1; m < kCorners; ++m) {
                std::array<double, D> lo{}, hi{};
                for (std::size_t i = 0; i < D; ++i) {
                    if ((m >> i) & 1U) {
                        lo[i] = inner;
                        hi[i] = h;
                    } else {
                        lo[i] = 0.0;
                        hi[i] = inner;
                    }
                }
                shell.push_back(corner_box(c, lo, hi));
            }
        }
        const double abs_floor = cfg.abs_tol * std::pow(q, static_cast<double>(k));
        auto r = adaptive_cubature<D>(f, shell, cfg.base_order, layer_tol, abs_floor, cfg.max_evals);
        out.evals += r.evals;
        if (r.budget_exhausted) out.converged = false;
        L.push_back(r.value);
        Lerr.push_back(r.error);
        partial += r.value;
        partial_err += r.error;
        out.witness_scale = inner;
        h = inner;

        if (k == 0) continue;
        const double prev = L[static_cast<std::size_t>(k - 1)];
        if (r.value <= cfg.abs_tol * 1e-3 && prev <= cfg.abs_tol * 1e-3) {
            tail = 0.0;
            tail_err = 0.0;
            done = true;
            break;
        }
        const double rho = prev > 0.0 ? r.value / prev : (r.value > 0.0 ? std::numeric_limits<double>::infinity() : 0.0);
        out.layer_ratio = rho;
        growth_run = rho >= 1.0 / cfg.g_div ? growth_run + 1 : 0;
        if (growth_run >= 3) {
            out.diverged = true;
            tail = 0.0;
            tail_err = 0.0;
            done = true;
            break;
        }
        if (rho >= 1.0) continue;
        const double t = r.value * rho / (1.0 - rho);
        // relative uncertainty of rho from the two layer error bounds
        const double rel_l = r.value > 0.0 ? r.error / r.value : 0.0;
        const double rel_p = prev > 0.0 ? Lerr[static_cast<std::size_t>(k - 1)] / prev : 0.0;
        const double rho_rel = rel_l + rel_p;
        tail = t;
        tail_err = t * (rel_l + rho_rel / (1.0 - rho));
        const double predicted = partial + t;
        if (have_prev_prediction && k >= 2) {
            const double drift = std::abs(predicted - predicted_prev);
            tail_err += drift;
            const double total = reg_val + predicted;
            if (drift <= 0.25 * cfg.rel_tol * std::abs(total) || t <= 0.01 * cfg.rel_tol * std::abs(total)) {
                done = true;
            }
        }
        predicted_prev = predicted;
        have_prev_prediction = true;
    }
    if (!done) out.converged = false;
    out.layer_sums = L;
    out.value = reg_val + partial + tail;
    out.error = reg_err + partial_err + tail_err;
    return out;
}

}  // namespace menger
