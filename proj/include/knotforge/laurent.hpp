#pragma once

#include <map>
#include <ostream>
#include <string>
#include <vector>

#include "knotforge/rational.hpp"

namespace knotforge {

// Laurent polynomial over the rationals in one variable t: map exponent ->
// coefficient, zero coefficients never stored.
class LaurentPoly {
public:
    LaurentPoly() = default;
    LaurentPoly(const Rational& c) {
        if (!c.is_zero()) coeffs_[0] = c;
    }
    LaurentPoly(int64_t c) : LaurentPoly(Rational(c)) {}

    static LaurentPoly monomial(const Rational& c, int e) {
        LaurentPoly p;
        if (!c.is_zero()) p.coeffs_[e] = c;
        return p;
    }
    static LaurentPoly t_power(int e) { return monomial(Rational(1), e); }

    const std::map<int, Rational>& coeffs() const { return coeffs_; }
    bool is_zero() const { return coeffs_.empty(); }
    bool is_one() const {
        return coeffs_.size() == 1 && coeffs_.begin()->first == 0 && coeffs_.begin()->second == Rational(1);
    }
    // True when the polynomial is c*t^e for a single term.
    bool is_monomial() const { return coeffs_.size() == 1; }

    int lowest_exponent() const {
        if (is_zero()) throw argument_error("lowest_exponent of zero polynomial");
        return coeffs_.begin()->first;
    }
    int highest_exponent() const {
        if (is_zero()) throw argument_error("highest_exponent of zero polynomial");
        return coeffs_.rbegin()->first;
    }
    Rational coeff(int e) const {
        auto it = coeffs_.find(e);
        return it == coeffs_.end() ? Rational(0) : it->second;
    }

    void add_term(int e, const Rational& c) {
        if (c.is_zero()) return;
        auto it = coeffs_.find(e);
        if (it == coeffs_.end()) {
            coeffs_[e] = c;
        } else {
            it->second += c;
            if (it->second.is_zero()) coeffs_.erase(it);
        }
    }

    LaurentPoly operator-() const {
        LaurentPoly r;
        for (auto& [e, c] : coeffs_) r.coeffs_[e] = -c;
        return r;
    }
    LaurentPoly& operator+=(const LaurentPoly& o) {
        for (auto& [e, c] : o.coeffs_) add_term(e, c);
        return *this;
    }
    LaurentPoly& operator-=(const LaurentPoly& o) {
        for (auto& [e, c] : o.coeffs_) add_term(e, -c);
        return *this;
    }
    friend LaurentPoly operator+(LaurentPoly a, const LaurentPoly& b) { return a += b; }
    friend LaurentPoly operator-(LaurentPoly a, const LaurentPoly& b) { return a -= b; }
    friend LaurentPoly operator*(const LaurentPoly& a, const LaurentPoly& b) {
        LaurentPoly r;
        for (auto& [ea, ca] : a.coeffs_)
            for (auto& [eb, cb] : b.coeffs_) r.add_term(ea + eb, ca * cb);
        return r;
    }
    LaurentPoly& operator*=(const LaurentPoly& o) { return *this = *this * o; }

    LaurentPoly scaled(const Rational& c) const {
        LaurentPoly r;
        if (c.is_zero()) return r;
        for (auto& [e, cc] : coeffs_) r.coeffs_[e] = cc * c;
        return r;
    }
    LaurentPoly shifted(int k) const {
        LaurentPoly r;
        for (auto& [e, c] : coeffs_) r.coeffs_[e + k] = c;
        return r;
    }
    // t -> t^{-1} substitution (the coloring involution for edge reversal).
    LaurentPoly bar() const {
        LaurentPoly r;
        for (auto& [e, c] : coeffs_) r.coeffs_[-e] = c;
        return r;
    }

    Rational evaluate(const Rational& x) const {
        // Only valid for x != 0 when negative exponents present.
        Rational acc(0);
        for (auto& [e, c] : coeffs_) {
            Rational p(1);
            int n = e < 0 ? -e : e;
            for (int i = 0; i < n; ++i) p *= x;
            if (e < 0) p = Rational(1) / p;
            acc += c * p;
        }
        return acc;
    }

    friend bool operator==(const LaurentPoly& a, const LaurentPoly& b) { return a.coeffs_ == b.coeffs_; }
    friend bool operator!=(const LaurentPoly& a, const LaurentPoly& b) { return !(a == b); }
    friend bool operator<(const LaurentPoly& a, const LaurentPoly& b) {
        return std::lexicographical_compare(
            a.coeffs_.begin(), a.coeffs_.end(), b.coeffs_.begin(), b.coeffs_.end(),
            [](const auto& x, const auto& y) {
                if (x.first != y.first) return x.first < y.first;
                return x.second < y.second;
            });
    }

    std::string str() const {
        if (is_zero()) return "0";
        std::string out;
        bool first = true;
        for (auto& [e, c] : coeffs_) {
            std::string term;
            Rational ac = c.sign() < 0 ? -c : c;
            if (e == 0) {
                term = ac.str();
            } else {
                if (!(ac == Rational(1))) term = ac.str() + "*";
                term += "t";
                if (e != 1) term += "^" + std::to_string(e);
            }
            if (first) {
                out = (c.sign() < 0 ? "-" : "") + term;
                first = false;
            } else {
                out += (c.sign() < 0 ? " - " : " + ") + term;
            }
        }
        return out;
    }

    friend std::ostream& operator<<(std::ostream& os, const LaurentPoly& p) { return os << p.str(); }

private:
    std::map<int, Rational> coeffs_;
};

namespace detail {

// Polynomial long division in Q[t] on nonnegative-exponent polynomials.
// Returns {quotient, remainder}.
inline std::pair<LaurentPoly, LaurentPoly> poly_divmod(const LaurentPoly& a, const LaurentPoly& b) {
    if (b.is_zero()) throw arithmetic_error("polynomial division by zero");
    LaurentPoly rem = a;
    LaurentPoly quo;
    int db = b.highest_exponent();
    Rational lb = b.coeff(db);
    while (!rem.is_zero() && rem.highest_exponent() >= db) {
        int e = rem.highest_exponent() - db;
        Rational c = rem.coeff(rem.highest_exponent()) / lb;
        LaurentPoly m = LaurentPoly::monomial(c, e);
        quo += m;
        rem -= m * b;
    }
    return {quo, rem};
}

// Monic gcd in Q[t] of nonnegative-exponent polynomials.
inline LaurentPoly poly_gcd(LaurentPoly a, LaurentPoly b) {
    while (!b.is_zero()) {
        auto [q, r] = poly_divmod(a, b);
        (void)q;
        a = b;
        b = r;
    }
    if (a.is_zero()) return a;
    return a.scaled(Rational(1) / a.coeff(a.highest_exponent()));
}

} // namespace detail

// Exact divisibility test for Laurent polynomials up to units c*t^k.
inline bool divides(const LaurentPoly& d, const LaurentPoly& a) {
    if (a.is_zero()) return true;
    if (d.is_zero()) return false;
    LaurentPoly dn = d.shifted(-d.lowest_exponent());
    LaurentPoly an = a.shifted(-a.lowest_exponent());
    auto [q, r] = detail::poly_divmod(an, dn);
    (void)q;
    return r.is_zero();
}

// Element of the fraction field Q(t), stored canonically: numerator and
// denominator coprime in Q[t], denominator with lowest exponent 0 and its
// lowest coefficient equal to +1.
class RationalFn {
public:
    RationalFn() : num_(LaurentPoly(0)), den_(LaurentPoly(1)) {}
    RationalFn(const LaurentPoly& n) : num_(n), den_(LaurentPoly(1)) {}
    RationalFn(const Rational& c) : num_(LaurentPoly(c)), den_(LaurentPoly(1)) {}
    RationalFn(int64_t c) : num_(LaurentPoly(c)), den_(LaurentPoly(1)) {}
    RationalFn(const LaurentPoly& n, const LaurentPoly& d) : num_(n), den_(d) { normalize(); }

    const LaurentPoly& num() const { return num_; }
    const LaurentPoly& den() const { return den_; }
    bool is_zero() const { return num_.is_zero(); }
    bool is_polynomial() const { return den_.is_one(); }

    RationalFn operator-() const { return RationalFn(-num_, den_); }
    friend RationalFn operator+(const RationalFn& a, const RationalFn& b) {
        return RationalFn(a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_);
    }
    friend RationalFn operator-(const RationalFn& a, const RationalFn& b) { return a + (-b); }
    friend RationalFn operator*(const RationalFn& a, const RationalFn& b) {
        return RationalFn(a.num_ * b.num_, a.den_ * b.den_);
    }
    friend RationalFn operator/(const RationalFn& a, const RationalFn& b) {
        if (b.is_zero()) throw arithmetic_error("division by zero rational function");
        return RationalFn(a.num_ * b.den_, a.den_ * b.num_);
    }
    RationalFn& operator+=(const RationalFn& o) { return *this = *this + o; }
    RationalFn& operator-=(const RationalFn& o) { return *this = *this - o; }
    RationalFn& operator*=(const RationalFn& o) { return *this = *this * o; }

    friend bool operator==(const RationalFn& a, const RationalFn& b) {
        return a.num_ == b.num_ && a.den_ == b.den_;
    }
    friend bool operator!=(const RationalFn& a, const RationalFn& b) { return !(a == b); }

    // Formal power/Laurent series coefficients of num/den up to exponent
    // `order` inclusive. Requires den(0) != 0, true of the canonical form.
    std::vector<std::pair<int, Rational>> series(int order) const {
        std::vector<std::pair<int, Rational>> out;
        if (num_.is_zero()) return out;
        int lo = num_.lowest_exponent();
        if (lo > order) return out;
        // den has lowest exponent 0 with nonzero constant term.
        Rational d0 = den_.coeff(0);
        std::map<int, Rational> acc; // series coefficients found so far
        for (int e = lo; e <= order; ++e) {
            // c_e = (num_e - sum_{k>0} den_k * c_{e-k}) / den_0
            Rational v = num_.coeff(e);
            for (auto& [k, dk] : den_.coeffs()) {
                if (k == 0) continue;
                auto it = acc.find(e - k);
                if (it != acc.end()) v -= dk * it->second;
            }
            v = v / d0;
            acc[e] = v;
            if (!v.is_zero()) out.push_back({e, v});
        }
        return out;
    }

    std::string str() const {
        if (is_polynomial()) return num_.str();
        return "(" + num_.str() + ") / (" + den_.str() + ")";
    }

private:
    void normalize() {
        if (den_.is_zero()) throw arithmetic_error("zero denominator in rational function");
        if (num_.is_zero()) {
            den_ = LaurentPoly(1);
            return;
        }
        // Shift both into Q[t].
        int sn = num_.lowest_exponent();
        int sd = den_.lowest_exponent();
        LaurentPoly n = num_.shifted(-sn);
        LaurentPoly d = den_.shifted(-sd);
        LaurentPoly g = detail::poly_gcd(n, d);
        if (!g.is_zero() && !(g.is_one())) {
            n = detail::poly_divmod(n, g).first;
            d = detail::poly_divmod(d, g).first;
        }
        // Restore the exponent offset on the numerator; keep den lowest exp 0.
        int off = sn - sd;
        d = d.shifted(-d.lowest_exponent());
        Rational lead = d.coeff(0);
        // n currently has lowest exponent 0; restore the net offset sn - sd.
        num_ = n.shifted(off - n.lowest_exponent()).scaled(Rational(1) / lead);
        den_ = d.scaled(Rational(1) / lead);
    }

    LaurentPoly num_;
    LaurentPoly den_;
};

} // namespace knotforge
