#pragma once

#include <cmath>
#include <limits>
#include <stdexcept>

namespace gaussbal {

/// Extended real: a finite double or one of the two infinities.
/// The tag is carried by the IEEE value itself; NaN is never stored.
/// Arithmetic rules: (+inf) + finite = +inf, (-inf) + finite = -inf,
/// and mixing the two infinities throws instead of producing NaN.
class ExtReal {
public:
    ExtReal() : v_(0.0) {}
    ExtReal(double v) : v_(v) {
        if (std::isnan(v)) throw std::invalid_argument("ExtReal: NaN");
    }

    static ExtReal pos_inf() { return ExtReal(std::numeric_limits<double>::infinity()); }
    static ExtReal neg_inf() { return ExtReal(-std::numeric_limits<double>::infinity()); }

    bool is_finite() const { return std::isfinite(v_); }
    bool is_pos_inf() const { return std::isinf(v_) && v_ > 0; }
    bool is_neg_inf() const { return std::isinf(v_) && v_ < 0; }

    /// Raw value; +-inf for the infinite tags.
    double value() const { return v_; }

    ExtReal operator+(double r) const {
        if (!std::isfinite(r)) throw std::invalid_argument("ExtReal: shift must be finite");
        if (!is_finite()) return *this;
        return ExtReal(v_ + r);
    }
    ExtReal operator-(double r) const { return *this + (-r); }
    ExtReal operator-() const { return ExtReal(-v_); }

    friend bool operator==(ExtReal a, ExtReal b) { return a.v_ == b.v_; }
    friend bool operator!=(ExtReal a, ExtReal b) { return a.v_ != b.v_; }
    friend bool operator<(ExtReal a, ExtReal b) { return a.v_ < b.v_; }
    friend bool operator<=(ExtReal a, ExtReal b) { return a.v_ <= b.v_; }
    friend bool operator>(ExtReal a, ExtReal b) { return a.v_ > b.v_; }
    friend bool operator>=(ExtReal a, ExtReal b) { return a.v_ >= b.v_; }

private:
    double v_;
};

/// |a - b| treating equal infinities as distance 0, opposite ones as +inf.
inline double ext_abs_diff(ExtReal a, ExtReal b) {
    if (a == b) return 0.0;
    if (!a.is_finite() || !b.is_finite()) return std::numeric_limits<double>::infinity();
    return std::abs(a.value() - b.value());
}

} // namespace gaussbal
