#pragma once

#include <map>
#include <string>
#include <vector>

#include "knotforge/diagram.hpp"
#include "knotforge/rational.hpp"

namespace knotforge {

// Formal rational combination of canonical diagram classes. Insertion
// canonicalizes: the AS/orientation-reversal sign multiplies the coefficient,
// a degenerate class (sign 0) contributes nothing.
class DiagramVector {
public:
    DiagramVector() = default;

    void add(const Diagram& d, const Rational& c) {
        if (c == Rational(0)) return;
        CanonicalForm cf = canonicalize(d);
        if (cf.sign == 0) return;
        add_canonical(cf.diagram, cf.sign > 0 ? c : -c);
    }

    // Trusts the caller that d is already a canonical representative.
    void add_canonical(const Diagram& d, const Rational& c) {
        if (c == Rational(0)) return;
        auto it = terms_.find(d);
        if (it == terms_.end()) {
            terms_.emplace(d, c);
        } else {
            it->second = it->second + c;
            if (it->second == Rational(0)) terms_.erase(it);
        }
    }

    DiagramVector& operator+=(const DiagramVector& o) {
        for (auto& [d, c] : o.terms_) add_canonical(d, c);
        return *this;
    }
    DiagramVector& operator-=(const DiagramVector& o) {
        for (auto& [d, c] : o.terms_) add_canonical(d, -c);
        return *this;
    }
    friend DiagramVector operator+(DiagramVector a, const DiagramVector& b) { return a += b; }
    friend DiagramVector operator-(DiagramVector a, const DiagramVector& b) { return a -= b; }
    DiagramVector scaled(const Rational& c) const {
        DiagramVector out;
        if (c == Rational(0)) return out;
        for (auto& [d, k] : terms_) out.terms_.emplace(d, k * c);
        return out;
    }

    bool empty() const { return terms_.empty(); }
    size_t size() const { return terms_.size(); }
    const std::map<Diagram, Rational>& terms() const { return terms_; }

    Rational coeff(const Diagram& canonical) const {
        auto it = terms_.find(canonical);
        return it == terms_.end() ? Rational(0) : it->second;
    }

    int max_abs_exponent() const {
        int m = 0;
        for (auto& [d, c] : terms_) m = std::max(m, d.max_abs_exponent());
        return m;
    }

    bool within_window(int K) const {
        for (auto& [d, c] : terms_)
            if (!d.within_window(K)) return false;
        return true;
    }

    friend bool operator==(const DiagramVector& a, const DiagramVector& b) {
        return a.terms_ == b.terms_;
    }
    friend bool operator!=(const DiagramVector& a, const DiagramVector& b) { return !(a == b); }

    std::string brief() const {
        if (terms_.empty()) return "0";
        std::string s;
        for (auto& [d, c] : terms_) {
            if (!s.empty()) s += " + ";
            s += c.str() + "*" + d.brief();
        }
        return s;
    }

private:
    std::map<Diagram, Rational> terms_;
};

} // namespace knotforge
