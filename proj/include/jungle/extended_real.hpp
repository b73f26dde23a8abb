#pragma once

#include <cmath>
#include <compare>
#include <stdexcept>
#include <string>

namespace jungle {

// Extended real line {-inf} U R U {+inf} with total order.
// Stability indices live here; IEEE infinities are never mixed into the
// arithmetic, so no NaN can appear downstream.
class ExtendedReal {
public:
    enum class Kind { NegInf, Finite, PosInf };

    constexpr ExtendedReal() : kind_(Kind::Finite), value_(0.0) {}
    constexpr ExtendedReal(double v) : kind_(Kind::Finite), value_(v) {
        if (!std::isfinite(v)) throw std::invalid_argument("ExtendedReal: non-finite double");
    }

    static constexpr ExtendedReal pos_inf() { return ExtendedReal(Kind::PosInf); }
    static constexpr ExtendedReal neg_inf() { return ExtendedReal(Kind::NegInf); }

    constexpr bool is_finite() const { return kind_ == Kind::Finite; }
    constexpr bool is_pos_inf() const { return kind_ == Kind::PosInf; }
    constexpr bool is_neg_inf() const { return kind_ == Kind::NegInf; }

    constexpr double value() const {
        if (!is_finite()) throw std::logic_error("ExtendedReal: value() on infinity");
        return value_;
    }

    constexpr ExtendedReal operator-() const {
        switch (kind_) {
            case Kind::PosInf: return neg_inf();
            case Kind::NegInf: return pos_inf();
            default: return ExtendedReal(-value_);
        }
    }

    // Defined except for opposite infinities.
    friend constexpr ExtendedReal operator-(const ExtendedReal& a, const ExtendedReal& b) {
        if (a.is_pos_inf() && b.is_pos_inf())
            throw std::domain_error("ExtendedReal: +inf - +inf undefined");
        if (a.is_neg_inf() && b.is_neg_inf())
            throw std::domain_error("ExtendedReal: -inf - -inf undefined");
        if (a.is_pos_inf() || b.is_neg_inf()) return pos_inf();
        if (a.is_neg_inf() || b.is_pos_inf()) return neg_inf();
        return ExtendedReal(a.value_ - b.value_);
    }

    friend constexpr bool operator==(const ExtendedReal& a, const ExtendedReal& b) {
        if (a.kind_ != b.kind_) return false;
        return a.kind_ != Kind::Finite || a.value_ == b.value_;
    }

    friend constexpr bool operator<(const ExtendedReal& a, const ExtendedReal& b) {
        if (a.kind_ == b.kind_)
            return a.kind_ == Kind::Finite && a.value_ < b.value_;
        return rank(a.kind_) < rank(b.kind_);
    }
    friend constexpr bool operator>(const ExtendedReal& a, const ExtendedReal& b) { return b < a; }
    friend constexpr bool operator<=(const ExtendedReal& a, const ExtendedReal& b) { return !(b < a); }
    friend constexpr bool operator>=(const ExtendedReal& a, const ExtendedReal& b) { return !(a < b); }

    friend constexpr ExtendedReal min(const ExtendedReal& a, const ExtendedReal& b) {
        return a < b ? a : b;
    }

    // "+inf" / "-inf" / shortest decimal, matching the report wire format.
    std::string str() const;

private:
    constexpr explicit ExtendedReal(Kind k) : kind_(k), value_(0.0) {}
    static constexpr int rank(Kind k) {
        return k == Kind::NegInf ? 0 : (k == Kind::Finite ? 1 : 2);
    }

    Kind kind_;
    double value_;
};

}  // namespace jungle

#include <charconv>

inline std::string jungle::ExtendedReal::str() const {
    if (is_pos_inf()) return "+inf";
    if (is_neg_inf()) return "-inf";
    char buf[32];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value_);
    return std::string(buf, ptr);
}
