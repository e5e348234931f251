#pragma once

#include <string>
#include <vector>

#include "knotforge/diagram.hpp"
#include "knotforge/diagram_vector.hpp"
#include "knotforge/laurent.hpp"
#include "knotforge/quotient.hpp"

namespace knotforge {

// Degree-1 chord diagram: t^{-p} on the Wilson arc u0 -> u1, t^{p} on the arc
// back, t^{q} on the chord. Any Holonomy-equivalent placement is acceptable;
// this one satisfies W(Theta(p,q)) = t^{p+q} and fires FI exactly on the
// class of Theta(0,0).
inline Diagram theta(int p, int q) {
    Edge chord;
    chord.tail = 0;
    chord.head = 1;
    chord.color = ExpVec{q};
    return make_diagram(2, 0, 1, {chord}, {ExpVec{-p}, ExpVec{p}});
}

// Degree-1 diagram with a self-loop of color t^p at the trivalent vertex.
inline Diagram omega(int p) {
    Edge conn;
    conn.tail = 0;
    conn.head = 1;
    conn.color = ExpVec{0};
    Edge loop;
    loop.tail = 1;
    loop.head = 1;
    loop.color = ExpVec{p};
    return make_diagram(1, 1, 1, {conn, loop}, {ExpVec{0}});
}

// Element of ℚ[t]/ℚ: representative with nonnegative exponents and zero
// constant term.
class PolyModConstants {
public:
    PolyModConstants() = default;
    explicit PolyModConstants(const LaurentPoly& f) {
        if (!f.is_zero() && f.lowest_exponent() < 0)
            throw argument_error("PolyModConstants: negative exponents");
        rep_ = f;
        rep_.add_term(0, -f.coeff(0));
    }
    const LaurentPoly& representative() const { return rep_; }
    bool is_zero() const { return rep_.is_zero(); }
    friend bool operator==(const PolyModConstants& a, const PolyModConstants& b) {
        return a.rep_ == b.rep_;
    }
    friend bool operator!=(const PolyModConstants& a, const PolyModConstants& b) {
        return !(a == b);
    }
    std::string str() const { return rep_.str(); }

private:
    LaurentPoly rep_;
};

// W on a degree-1 nullhomotopic monomial vector: a chord class maps to
// t^{|s|} mod ℚ where s is the total color around the small loop (chord plus
// the Wilson path back); exponent folding is the Orientation-reversal
// identification. Self-loop (Omega) classes map to 0.
inline PolyModConstants W(const DiagramVector& v) {
    LaurentPoly acc;
    for (auto& [d, c] : v.terms()) {
        if (d.degree() != 1) throw argument_error("W: degree-1 vectors only");
        if (!d.is_nh()) throw argument_error("W: vector is not nullhomotopic");
        if (d.q == 1) continue; // Omega shape
        int chord = -1;
        for (int e = d.q; e < (int)d.edges.size(); ++e) chord = e;
        const Edge& ch = d.edges[chord];
        // Color around the loop: chord tail -> head, then Wilson edges from
        // the head forward to the tail.
        int s = ch.color[0];
        for (int j = ch.head; j != ch.tail; j = (j + 1) % d.q) s += d.edges[j].color[0];
        if (s == 0) continue;
        acc.add_term(std::abs(s), c);
    }
    return PolyModConstants(acc);
}

inline PolyModConstants W_of(const Diagram& d) {
    DiagramVector v;
    v.add(d, Rational(1));
    return W(v);
}

// L: ℚ[t]/ℚ -> 𝒜₁, t^p -> Theta(0,p).
inline DiagramVector L(const PolyModConstants& f) {
    DiagramVector out;
    const LaurentPoly& rep = f.representative();
    if (rep.is_zero()) return out;
    for (auto& [e, c] : rep.coeffs()) {
        if (e == 0) continue;
        out.add(theta(0, e), c);
    }
    return out;
}

inline DiagramVector L(const LaurentPoly& f) { return L(PolyModConstants(f)); }

struct IsomorphismCheck {
    std::string name;
    bool pass = false;
    std::string detail;
};

struct IsomorphismReport {
    int max_exponent = 0;
    int window_K = 0;
    std::vector<IsomorphismCheck> checks;
    int theta_rank = 0;
    bool pass = false;
};

namespace detail {

// Rank of a family of reduced vectors over the quotient basis.
inline int rank_of(const std::vector<DiagramVector>& vecs) {
    // Dense over the union of supports.
    std::vector<Diagram> support;
    std::map<Diagram, int> index;
    for (auto& v : vecs)
        for (auto& [d, c] : v.terms())
            if (!index.count(d)) {
                index.emplace(d, (int)support.size());
                support.push_back(d);
            }
    std::vector<std::vector<Rational>> m;
    for (auto& v : vecs) {
        std::vector<Rational> row(support.size(), Rational(0));
        for (auto& [d, c] : v.terms()) row[index[d]] = c;
        m.push_back(std::move(row));
    }
    int rank = 0;
    size_t cols = support.size();
    for (size_t col = 0; col < cols && rank < (int)m.size(); ++col) {
        int sel = -1;
        for (int r = rank; r < (int)m.size(); ++r)
            if (m[r][col] != Rational(0)) { sel = r; break; }
        if (sel < 0) continue;
        std::swap(m[rank], m[sel]);
        for (int r = 0; r < (int)m.size(); ++r) {
            if (r == rank || m[r][col] == Rational(0)) continue;
            Rational f = m[r][col] / m[rank][col];
            for (size_t cc = col; cc < cols; ++cc) m[r][cc] = m[r][cc] - f * m[rank][cc];
        }
        ++rank;
    }
    return rank;
}

} // namespace detail

// Machine check of the degree-1 isomorphism with Q[t]/Q, computed end to end
// through the windowed quotient: (i) L∘W identity on Theta classes, (ii) W∘L
// identity on monomials, (iii) linear independence of the reduced
// Theta(0,1..K).
inline IsomorphismReport verify_isomorphism(int K, int threads = 1,
                                            const RelationOptions& opts = {}) {
    if (K < 1) throw argument_error("verify_isomorphism: K must be >= 1");
    IsomorphismReport rep;
    rep.max_exponent = K;
    rep.window_K = K + 2;
    Window w{1, K + 2, true, opts};
    QuotientSpace qs = build_quotient(w, threads);

    IsomorphismCheck c1{"L_after_W_identity", true, ""};
    for (int p = -K / 2; p <= K / 2 && c1.pass; ++p)
        for (int q = -K / 2; q <= K / 2; ++q) {
            DiagramVector lhs = L(W_of(theta(p, q)));
            DiagramVector diff;
            diff.add(theta(p, q), Rational(-1));
            lhs += diff;
            if (!qs.reduce(lhs).empty()) {
                c1.pass = false;
                c1.detail = "failed at p=" + std::to_string(p) + " q=" + std::to_string(q);
                break;
            }
        }
    rep.checks.push_back(c1);

    IsomorphismCheck c2{"W_after_L_identity", true, ""};
    for (int p = 1; p <= K; ++p) {
        DiagramVector lp = qs.reduce(L(PolyModConstants(LaurentPoly::monomial(Rational(1), p))));
        PolyModConstants back = W(lp);
        if (back != PolyModConstants(LaurentPoly::monomial(Rational(1), p))) {
            c2.pass = false;
            c2.detail = "failed at p=" + std::to_string(p);
            break;
        }
    }
    rep.checks.push_back(c2);

    IsomorphismCheck c3{"theta_rank_full", true, ""};
    std::vector<DiagramVector> reduced;
    for (int p = 1; p <= K; ++p) reduced.push_back(qs.reduce(theta(0, p)));
    rep.theta_rank = detail::rank_of(reduced);
    if (rep.theta_rank != K) {
        c3.pass = false;
        c3.detail = "rank " + std::to_string(rep.theta_rank) + " expected " + std::to_string(K);
    }
    rep.checks.push_back(c3);

    rep.pass = c1.pass && c2.pass && c3.pass;
    return rep;
}

} // namespace knotforge
