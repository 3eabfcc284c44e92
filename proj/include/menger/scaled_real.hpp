#pragma once

#include <cmath>
#include <compare>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>

namespace menger {

// Positive (or zero) real stored as mantissa * 2^exp2 with mantissa in [1,2).
//
// Used wherever values such as 2^(-n^n n^3) fall far outside the range of a
// double. The exponent is an exact 64-bit integer; every operation rounds
// only the mantissa.
class ScaledReal {
public:
    // Addends more than this many binary orders below the dominant term are
    // dropped by add/sub.
    static constexpr std::int64_t kDropOrders = 80;

    constexpr ScaledReal() = default;

    static ScaledReal from_double(double v) {
        if (!std::isfinite(v) || v < 0.0) {
            throw std::invalid_argument("ScaledReal: value must be finite and nonnegative");
        }
        if (v == 0.0) return {};
        int e = 0;
        double m = std::frexp(v, &e);  // m in [0.5, 1)
        return ScaledReal(m * 2.0, static_cast<std::int64_t>(e) - 1);
    }

    // Exact power of two.
    static constexpr ScaledReal pow2(std::int64_t k) { return ScaledReal(1.0, k); }

    // Builds from an arbitrary (mantissa, exponent) pair, renormalizing.
    static ScaledReal from_parts(double mantissa, std::int64_t exp2) {
        ScaledReal r = from_double(mantissa);
        if (r.is_zero()) return r;
        r.exp2_ += exp2;
        return r;
    }

    constexpr double mantissa() const { return mantissa_; }
    constexpr std::int64_t exp2() const { return exp2_; }
    constexpr bool is_zero() const { return mantissa_ == 0.0; }

    // Nearest double; underflows to 0 and overflows to +inf.
    double to_double() const {
        if (is_zero()) return 0.0;
        if (exp2_ > 1100) return std::numeric_limits<double>::infinity();
        if (exp2_ < -1200) return 0.0;
        return std::ldexp(mantissa_, static_cast<int>(exp2_));
    }

    // log2 of the value; -inf for zero.
    double log2() const {
        if (is_zero()) return -std::numeric_limits<double>::infinity();
        return static_cast<double>(exp2_) + std::log2(mantissa_);
    }

    friend ScaledReal operator*(const ScaledReal& a, const ScaledReal& b) {
        if (a.is_zero() || b.is_zero()) return {};
        return normalized(a.mantissa_ * b.mantissa_, a.exp2_ + b.exp2_);
    }

    friend ScaledReal operator/(const ScaledReal& a, const ScaledReal& b) {
        if (b.is_zero()) throw std::domain_error("ScaledReal: division by zero");
        if (a.is_zero()) return {};
        return normalized(a.mantissa_ / b.mantissa_, a.exp2_ - b.exp2_);
    }

    friend ScaledReal operator+(const ScaledReal& a, const ScaledReal& b) {
        if (a.is_zero()) return b;
        if (b.is_zero()) return a;
        const ScaledReal& big = (a.exp2_ >= b.exp2_) ? a : b;
        const ScaledReal& small = (a.exp2_ >= b.exp2_) ? b : a;
        const std::int64_t gap = big.exp2_ - small.exp2_;
        if (gap > kDropOrders) return big;
        const double m = big.mantissa_ + std::ldexp(small.mantissa_, -static_cast<int>(gap));
        return normalized(m, big.exp2_);
    }

    // a - b for a >= b. Throws when the result would be negative.
    friend ScaledReal operator-(const ScaledReal& a, const ScaledReal& b) {
        if (b.is_zero()) return a;
        if (a < b) throw std::domain_error("ScaledReal: negative difference");
        const std::int64_t gap = a.exp2_ - b.exp2_;
        if (gap > kDropOrders) return a;
        const double m = a.mantissa_ - std::ldexp(b.mantissa_, -static_cast<int>(gap));
        if (m <= 0.0) return {};
        return normalized(m, a.exp2_);
    }

    ScaledReal& operator*=(const ScaledReal& o) { return *this = *this * o; }
    ScaledReal& operator+=(const ScaledReal& o) { return *this = *this + o; }

    friend bool operator==(const ScaledReal& a, const ScaledReal& b) {
        return a.mantissa_ == b.mantissa_ && a.exp2_ == b.exp2_;
    }

    friend std::partial_ordering operator<=>(const ScaledReal& a, const ScaledReal& b) {
        if (a.is_zero() || b.is_zero()) return a.mantissa_ <=> b.mantissa_;
        if (a.exp2_ != b.exp2_) return a.exp2_ <=> b.exp2_;
        return a.mantissa_ <=> b.mantissa_;
    }

    // Integer power by repeated squaring; the exponent stays exact.
    ScaledReal pow(std::int64_t k) const {
        if (k < 0) return ScaledReal(1.0, 0) / pow(-k);
        ScaledReal result(1.0, 0);
        ScaledReal base = *this;
        while (k > 0) {
            if (k & 1) result = result * base;
            base = base * base;
            k >>= 1;
        }
        return result;
    }

    // Real power. Integer exponents go through the exact path.
    ScaledReal pow(double q) const {
        if (q == std::floor(q) && std::abs(q) < 9.0e15) return pow(static_cast<std::int64_t>(q));
        if (is_zero()) {
            if (q > 0) return {};
            throw std::domain_error("ScaledReal: zero to a non-positive power");
        }
        // value^q = 2^(q*exp2) * mantissa^q; split q*exp2 into integer and fraction.
        const double t = q * static_cast<double>(exp2_);
        const double ti = std::floor(t);
        const double frac = t - ti;
        const double m = std::exp2(frac) * std::pow(mantissa_, q);
        return from_parts(m, static_cast<std::int64_t>(ti));
    }

    ScaledReal sqrt() const {
        if (is_zero()) return {};
        // keep the exponent even so the halving is exact
        double m = mantissa_;
        std::int64_t e = exp2_;
        if (e % 2 != 0) {
            m *= 2.0;
            e -= 1;
        }
        return normalized(std::sqrt(m), e / 2);
    }

    std::string to_string() const {
        return std::to_string(mantissa_) + "*2^" + std::to_string(exp2_);
    }

private:
    constexpr ScaledReal(double m, std::int64_t e) : mantissa_(m), exp2_(e) {}

    static ScaledReal normalized(double m, std::int64_t e) {
        if (m == 0.0) return {};
        int shift = 0;
        double mm = std::frexp(m, &shift);
        return ScaledReal(mm * 2.0, e + shift - 1);
    }

    double mantissa_ = 0.0;
    std::int64_t exp2_ = 0;
};

}  // namespace menger
