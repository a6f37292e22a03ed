#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <compare>
#include <string>

#include "sarkisov/errors.hpp"

namespace sarkisov {

using Int = boost::multiprecision::cpp_int;
using BigRational = boost::multiprecision::cpp_rational;

/// Exact rational number with an optional +infinity sentinel. All engine
/// quantities (thresholds, degrees, intersection ratios) are values of this
/// type; there is no floating point anywhere. Finite values are kept in
/// lowest terms with positive denominator by the backing cpp_rational.
class Rat {
public:
    Rat() : v_(0), inf_(false) {}
    Rat(long n) : v_(n), inf_(false) {}
    Rat(const Int& n) : v_(n), inf_(false) {}
    Rat(const Int& num, const Int& den) : inf_(false) {
        if (den == 0) fail(ErrorKind::InvalidInput, "rational with zero denominator");
        v_ = den < 0 ? BigRational(-num, -den) : BigRational(num, den);
    }
    explicit Rat(BigRational v) : v_(std::move(v)), inf_(false) {}

    static Rat infinity() {
        Rat r;
        r.inf_ = true;
        return r;
    }

    /// Parses "p", "p/q" or "inf". Throws InvalidInput on malformed text.
    static Rat parse(const std::string& text);

    bool is_infinite() const { return inf_; }
    bool is_zero() const { return !inf_ && v_ == 0; }
    bool is_positive() const { return inf_ || v_ > 0; }
    bool is_negative() const { return !inf_ && v_ < 0; }

    Int numerator() const {
        require_finite("numerator");
        return boost::multiprecision::numerator(v_);
    }
    Int denominator() const {
        require_finite("denominator");
        return boost::multiprecision::denominator(v_);
    }
    const BigRational& value() const {
        require_finite("value");
        return v_;
    }

    Rat operator-() const {
        if (inf_) fail(ErrorKind::InvalidInput, "negation of +infinity");
        return Rat(BigRational(-v_));
    }

    friend Rat operator+(const Rat& a, const Rat& b) {
        if (a.inf_ || b.inf_) return infinity();
        return Rat(BigRational(a.v_ + b.v_));
    }
    friend Rat operator-(const Rat& a, const Rat& b) {
        if (b.inf_) fail(ErrorKind::InvalidInput, "subtraction of +infinity");
        if (a.inf_) return infinity();
        return Rat(BigRational(a.v_ - b.v_));
    }
    friend Rat operator*(const Rat& a, const Rat& b) {
        if (a.inf_ || b.inf_) {
            const Rat& fin = a.inf_ ? b : a;
            if (fin.inf_ || fin.is_positive()) return infinity();
            fail(ErrorKind::InvalidInput, "+infinity times nonpositive value");
        }
        return Rat(BigRational(a.v_ * b.v_));
    }
    friend Rat operator/(const Rat& a, const Rat& b) {
        if (b.inf_) fail(ErrorKind::InvalidInput, "division by +infinity");
        if (b.v_ == 0) fail(ErrorKind::InvalidInput, "division by zero");
        if (a.inf_) {
            if (b.v_ > 0) return infinity();
            fail(ErrorKind::InvalidInput, "+infinity divided by negative value");
        }
        return Rat(BigRational(a.v_ / b.v_));
    }

    Rat& operator+=(const Rat& o) { return *this = *this + o; }
    Rat& operator-=(const Rat& o) { return *this = *this - o; }
    Rat& operator*=(const Rat& o) { return *this = *this * o; }

    friend bool operator==(const Rat& a, const Rat& b) {
        if (a.inf_ || b.inf_) return a.inf_ == b.inf_;
        return a.v_ == b.v_;
    }
    friend bool operator!=(const Rat& a, const Rat& b) { return !(a == b); }
    friend bool operator<(const Rat& a, const Rat& b) {
        if (a.inf_) return false;
        if (b.inf_) return true;
        return a.v_ < b.v_;
    }
    friend bool operator>(const Rat& a, const Rat& b) { return b < a; }
    friend bool operator<=(const Rat& a, const Rat& b) { return !(b < a); }
    friend bool operator>=(const Rat& a, const Rat& b) { return !(a < b); }

    /// Canonical text form: "p", "p/q" or "inf"; bit-exact round trip.
    std::string str() const;

private:
    void require_finite(const char* op) const {
        if (inf_) fail(ErrorKind::InvalidInput, std::string(op) + " of +infinity");
    }

    BigRational v_;
    bool inf_;
};

inline Rat min(const Rat& a, const Rat& b) { return a < b ? a : b; }
inline Rat max(const Rat& a, const Rat& b) { return a < b ? b : a; }

} // namespace sarkisov
