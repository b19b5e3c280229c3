#pragma once

#include <cassert>
#include <cmath>
#include <limits>
#include <ostream>
#include <vector>

#include "imc/errors.hpp"

namespace imc {

/// A value in R ∪ {+inf}. The infinity is an explicit tag, not a floating
/// sentinel, and -inf is unrepresentable by construction. Arithmetic follows
/// 0 * inf = 0, c * inf = inf for c > 0, and r + inf = inf.
class ExtValue {
public:
    constexpr ExtValue() = default;

    ExtValue(double v) : v_(v) {  // NOLINT: implicit by design
        if (std::isnan(v) || std::isinf(v))
            throw Error("ExtValue: finite constructor requires a finite double");
    }

    static constexpr ExtValue infinity() {
        ExtValue x;
        x.inf_ = true;
        x.v_ = 0.0;
        return x;
    }

    constexpr bool is_infinite() const { return inf_; }
    constexpr bool is_finite() const { return !inf_; }

    /// The finite payload; must not be called on the infinite value.
    constexpr double finite() const {
        assert(!inf_);
        return v_;
    }

    /// Finite payload or +inf as a plain double (for printing / stats).
    constexpr double as_double() const {
        return inf_ ? std::numeric_limits<double>::infinity() : v_;
    }

    friend ExtValue operator+(ExtValue a, ExtValue b) {
        if (a.inf_ || b.inf_) return infinity();
        return ExtValue(a.v_ + b.v_);
    }
    ExtValue& operator+=(ExtValue o) { return *this = *this + o; }

    friend constexpr bool operator==(ExtValue a, ExtValue b) {
        if (a.inf_ || b.inf_) return a.inf_ == b.inf_;
        return a.v_ == b.v_;
    }
    friend constexpr bool operator!=(ExtValue a, ExtValue b) { return !(a == b); }
    friend constexpr bool operator<(ExtValue a, ExtValue b) {
        if (a.inf_) return false;
        if (b.inf_) return true;
        return a.v_ < b.v_;
    }
    friend constexpr bool operator>(ExtValue a, ExtValue b) { return b < a; }
    friend constexpr bool operator<=(ExtValue a, ExtValue b) { return !(b < a); }
    friend constexpr bool operator>=(ExtValue a, ExtValue b) { return !(a < b); }

    friend std::ostream& operator<<(std::ostream& os, ExtValue x) {
        if (x.inf_) return os << "inf";
        return os << x.v_;
    }

private:
    double v_ = 0.0;
    bool inf_ = false;
};

/// c * x with the convention 0 * inf = 0. Requires c >= 0.
inline ExtValue scale(double c, ExtValue x) {
    assert(c >= 0.0);
    if (x.is_infinite()) return c > 0.0 ? ExtValue::infinity() : ExtValue(0.0);
    return ExtValue(c * x.finite());
}

using ExtVector = std::vector<ExtValue>;

inline ExtValue ext_min(ExtValue a, ExtValue b) { return b < a ? b : a; }
inline ExtValue ext_max(ExtValue a, ExtValue b) { return a < b ? b : a; }

/// <row, f> under extended arithmetic: +inf exactly when some strictly
/// positive weight meets an infinite coordinate. Summation runs in index
/// order so callers sharing this routine get bit-identical results.
inline ExtValue ext_dot(const std::vector<double>& weights, const ExtVector& f) {
    if (weights.size() != f.size())
        throw DimensionMismatchError("ext_dot: weight/function size mismatch");
    double acc = 0.0;
    for (std::size_t i = 0; i < weights.size(); ++i) {
        if (f[i].is_infinite()) {
            if (weights[i] > 0.0) return ExtValue::infinity();
        } else {
            acc += weights[i] * f[i].finite();
        }
    }
    return ExtValue(acc);
}

/// Maximum |a - b| over states where both are finite; infinite entries must
/// match in pattern and contribute zero (callers verify patterns separately).
inline double finite_max_diff(const ExtVector& a, const ExtVector& b) {
    assert(a.size() == b.size());
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i].is_finite() && b[i].is_finite())
            m = std::max(m, std::abs(a[i].finite() - b[i].finite()));
    }
    return m;
}

inline ExtVector to_ext(const std::vector<double>& v) {
    ExtVector out;
    out.reserve(v.size());
    for (double x : v) out.emplace_back(x);
    return out;
}

}  // namespace imc
