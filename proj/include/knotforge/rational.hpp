#pragma once

#include <cstdint>
#include <numeric>
#include <ostream>
#include <string>

#include "knotforge/errors.hpp"

namespace knotforge {

namespace detail {

inline int64_t checked_add(int64_t a, int64_t b) {
    int64_t r;
    if (__builtin_add_overflow(a, b, &r)) throw arithmetic_error("integer overflow in addition");
    return r;
}

inline int64_t checked_sub(int64_t a, int64_t b) {
    int64_t r;
    if (__builtin_sub_overflow(a, b, &r)) throw arithmetic_error("integer overflow in subtraction");
    return r;
}

inline int64_t checked_mul(int64_t a, int64_t b) {
    int64_t r;
    if (__builtin_mul_overflow(a, b, &r)) throw arithmetic_error("integer overflow in multiplication");
    return r;
}

} // namespace detail

// Exact rational over checked 64-bit integers, always stored reduced with
// positive denominator.
class Rational {
public:
    Rational() : num_(0), den_(1) {}
    Rational(int64_t n) : num_(n), den_(1) {}
    Rational(int64_t n, int64_t d) : num_(n), den_(d) { normalize(); }

    int64_t num() const { return num_; }
    int64_t den() const { return den_; }

    bool is_zero() const { return num_ == 0; }
    bool is_integer() const { return den_ == 1; }
    int sign() const { return num_ > 0 ? 1 : (num_ < 0 ? -1 : 0); }

    Rational operator-() const {
        Rational r;
        r.num_ = detail::checked_sub(0, num_);
        r.den_ = den_;
        return r;
    }

    Rational& operator+=(const Rational& o) {
        // a/b + c/d with g = gcd(b, d) to limit growth.
        int64_t g = std::gcd(den_, o.den_);
        int64_t b1 = den_ / g;
        int64_t d1 = o.den_ / g;
        int64_t n = detail::checked_add(detail::checked_mul(num_, d1), detail::checked_mul(o.num_, b1));
        int64_t d = detail::checked_mul(detail::checked_mul(b1, g), d1);
        num_ = n;
        den_ = d;
        normalize();
        return *this;
    }
    Rational& operator-=(const Rational& o) { return *this += -o; }
    Rational& operator*=(const Rational& o) {
        int64_t g1 = std::gcd(std::llabs(num_), o.den_);
        int64_t g2 = std::gcd(o.num_ == INT64_MIN ? o.num_ : std::llabs(o.num_), den_);
        num_ = detail::checked_mul(num_ / g1, o.num_ / g2);
        den_ = detail::checked_mul(den_ / g2, o.den_ / g1);
        normalize();
        return *this;
    }
    Rational& operator/=(const Rational& o) {
        if (o.num_ == 0) throw arithmetic_error("division by zero rational");
        Rational inv;
        inv.num_ = o.den_;
        inv.den_ = o.num_;
        if (inv.den_ < 0) {
            inv.num_ = detail::checked_sub(0, inv.num_);
            inv.den_ = detail::checked_sub(0, inv.den_);
        }
        return *this *= inv;
    }

    friend Rational operator+(Rational a, const Rational& b) { return a += b; }
    friend Rational operator-(Rational a, const Rational& b) { return a -= b; }
    friend Rational operator*(Rational a, const Rational& b) { return a *= b; }
    friend Rational operator/(Rational a, const Rational& b) { return a /= b; }

    friend bool operator==(const Rational& a, const Rational& b) {
        return a.num_ == b.num_ && a.den_ == b.den_;
    }
    friend bool operator!=(const Rational& a, const Rational& b) { return !(a == b); }
    friend bool operator<(const Rational& a, const Rational& b) {
        // Exact comparison via 128-bit cross-multiplication.
        return static_cast<__int128>(a.num_) * b.den_ < static_cast<__int128>(b.num_) * a.den_;
    }
    friend bool operator>(const Rational& a, const Rational& b) { return b < a; }
    friend bool operator<=(const Rational& a, const Rational& b) { return !(b < a); }
    friend bool operator>=(const Rational& a, const Rational& b) { return !(a < b); }

    // Serialized as "num/den" (canonical, reduced) or "num" when integral.
    std::string str() const {
        if (den_ == 1) return std::to_string(num_);
        return std::to_string(num_) + "/" + std::to_string(den_);
    }

    // Parses "n", "n/d", with optional sign; throws ingestion_error on junk.
    static Rational parse(const std::string& s);

    friend std::ostream& operator<<(std::ostream& os, const Rational& r) { return os << r.str(); }

private:
    void normalize() {
        if (den_ == 0) throw arithmetic_error("zero denominator");
        if (den_ < 0) {
            num_ = detail::checked_sub(0, num_);
            den_ = detail::checked_sub(0, den_);
        }
        if (num_ == 0) {
            den_ = 1;
            return;
        }
        int64_t g = std::gcd(num_ == INT64_MIN ? num_ : std::llabs(num_), den_);
        num_ /= g;
        den_ /= g;
    }

    int64_t num_;
    int64_t den_;
};

inline Rational Rational::parse(const std::string& s) {
    if (s.empty()) throw ingestion_error("empty rational literal");
    size_t slash = s.find('/');
    auto parse_int = [](const std::string& part) -> int64_t {
        if (part.empty()) throw ingestion_error("empty integer part in rational literal");
        size_t pos = 0;
        int64_t v = 0;
        try {
            v = std::stoll(part, &pos);
        } catch (const std::exception&) {
            throw ingestion_error("unparseable rational literal: " + part);
        }
        if (pos != part.size()) throw ingestion_error("trailing junk in rational literal: " + part);
        return v;
    };
    if (slash == std::string::npos) return Rational(parse_int(s));
    return Rational(parse_int(s.substr(0, slash)), parse_int(s.substr(slash + 1)));
}

} // namespace knotforge
