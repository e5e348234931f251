#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "knotforge/diagram.hpp"
#include "knotforge/diagram_vector.hpp"
#include "knotforge/quotient.hpp"
#include "knotforge/theta.hpp"

namespace knotforge {

struct Clasper {
    std::string name;
    std::vector<std::string> atoms; // surgery-symbol contribution, usually {name}
    bool strict = true;
    int degree = 1;
    std::string homology; // formal datum for M-null leaves / colorings

    static Clasper make(const std::string& name, bool strict = true, int degree = 1) {
        Clasper c;
        c.name = name;
        c.atoms = {name};
        c.strict = strict;
        c.degree = degree;
        return c;
    }
};

// Formal ℚ-combination of surgery symbols K^{G_I}; a symbol is the set of
// applied atomic clasper names (empty set = the base knot).
using SymbolCombination = std::map<std::set<std::string>, Rational>;

inline std::string symbol_string(const std::set<std::string>& atoms, const std::string& base = "K") {
    if (atoms.empty()) return base;
    std::string out = base + "^{";
    bool first = true;
    for (auto& a : atoms) {
        if (!first) out += " ";
        out += a;
        first = false;
    }
    return out + "}";
}

namespace detail {

inline void add_symbol(SymbolCombination& acc, const std::set<std::string>& sym, const Rational& c) {
    auto it = acc.find(sym);
    if (it == acc.end()) {
        if (!c.is_zero()) acc.emplace(sym, c);
    } else {
        it->second += c;
        if (it->second.is_zero()) acc.erase(it);
    }
}

// [base; G_1..G_k] = sum over I of (-1)^{k-|I|} base^{G_I}; k = 0 gives the
// bare base symbol.
inline SymbolCombination expand_symbols(const std::set<std::string>& base,
                                        const std::vector<Clasper>& claspers) {
    SymbolCombination out;
    size_t k = claspers.size();
    for (size_t mask = 0; mask < (size_t(1) << k); ++mask) {
        std::set<std::string> sym = base;
        int taken = 0;
        for (size_t i = 0; i < k; ++i)
            if (mask & (size_t(1) << i)) {
                ++taken;
                for (auto& a : claspers[i].atoms) sym.insert(a);
            }
        Rational coeff(((int)(k - taken)) % 2 == 0 ? 1 : -1);
        add_symbol(out, sym, coeff);
    }
    return out;
}

} // namespace detail

struct ForestScheme {
    std::string base = "K";
    std::vector<Clasper> claspers;
    SymbolCombination expansion;

    int total_degree() const {
        int n = 0;
        for (auto& c : claspers) n += c.degree;
        return n;
    }
};

inline ForestScheme expand_forest_scheme(const std::vector<Clasper>& claspers,
                                         const std::string& base = "K") {
    if (claspers.empty()) throw argument_error("expand_forest_scheme: needs k >= 1 claspers");
    int mnull = 0;
    std::set<std::string> names;
    for (auto& c : claspers) {
        if (!c.strict) ++mnull;
        if (c.degree < 1) throw argument_error("clasper degree must be >= 1");
        if (!names.insert(c.name).second)
            throw argument_error("duplicate clasper name: " + c.name);
    }
    if (mnull > 1) throw constraint_error("at most one M-null clasper is allowed");
    ForestScheme s;
    s.base = base;
    s.claspers = claspers;
    s.expansion = detail::expand_symbols({}, claspers);
    return s;
}

struct SchemeIdentityRow {
    int k = 0;
    bool identity2 = false;
    bool identity3 = false;
};

struct SchemeIdentityReport {
    int max_k = 0;
    std::vector<SchemeIdentityRow> rows;
    bool pass = false;
};

// Telescoping identities of the bracket calculus, as formal equalities of
// symbol combinations. Identity (3) rewrites the composite surgery
// K^{(S∪T)G_I} as the union {S,T} ∪ G_I of atomic symbols.
inline SchemeIdentityReport check_scheme_identities(int max_k) {
    if (max_k < 1 || max_k > 6)
        throw argument_error("check_scheme_identities: maxK must lie in 1..6");
    SchemeIdentityReport rep;
    rep.max_k = max_k;
    rep.pass = true;
    for (int k = 1; k <= max_k; ++k) {
        std::vector<Clasper> gs;
        for (int i = 1; i <= k; ++i) gs.push_back(Clasper::make("G" + std::to_string(i)));
        SchemeIdentityRow row;
        row.k = k;

        // (2): [K; G1..Gk] = [K^{G1}; G2..Gk] - [K; G2..Gk]
        std::vector<Clasper> tail(gs.begin() + 1, gs.end());
        SymbolCombination lhs2 = detail::expand_symbols({}, gs);
        SymbolCombination rhs2 = detail::expand_symbols({gs[0].name}, tail);
        for (auto& [sym, c] : detail::expand_symbols({}, tail)) detail::add_symbol(rhs2, sym, -c);
        row.identity2 = (lhs2 == rhs2);

        // (3): [K; (S∪T), G2..Gk] = [K; S, G2..Gk] + [K^S; T, G2..Gk]
        Clasper st;
        st.name = "(S|T)";
        st.atoms = {"S", "T"};
        std::vector<Clasper> with_st = {st};
        std::vector<Clasper> with_s = {Clasper::make("S")};
        std::vector<Clasper> with_t = {Clasper::make("T")};
        with_st.insert(with_st.end(), tail.begin(), tail.end());
        with_s.insert(with_s.end(), tail.begin(), tail.end());
        with_t.insert(with_t.end(), tail.begin(), tail.end());
        SymbolCombination lhs3 = detail::expand_symbols({}, with_st);
        SymbolCombination rhs3 = detail::expand_symbols({}, with_s);
        for (auto& [sym, c] : detail::expand_symbols({"S"}, with_t)) detail::add_symbol(rhs3, sym, c);
        row.identity3 = (lhs3 == rhs3);

        rep.pass = rep.pass && row.identity2 && row.identity3;
        rep.rows.push_back(row);
    }
    return rep;
}

struct SurgeryPresentation {
    Diagram source;
    ForestScheme scheme;
};

// One strict tree clasper per component of the non-Wilson part; degree is
// half the component's vertex count.
inline SurgeryPresentation psi(const Diagram& d) {
    if (!d.is_nh()) throw argument_error("psi: diagram is not nullhomologous on the Wilson loop");
    int n = d.vertex_count();
    std::vector<int> parent(n);
    for (int i = 0; i < n; ++i) parent[i] = i;
    std::function<int(int)> find = [&](int v) {
        while (parent[v] != v) v = parent[v] = parent[parent[v]];
        return v;
    };
    for (int e = d.q; e < (int)d.edges.size(); ++e)
        parent[find(d.edges[e].tail)] = find(d.edges[e].head);
    std::map<int, std::vector<int>> comps; // root -> vertices, keyed by min member
    for (int v = 0; v < n; ++v) comps[find(v)].push_back(v);
    std::map<int, std::vector<int>> ordered;
    for (auto& [root, verts] : comps) ordered[*std::min_element(verts.begin(), verts.end())] = verts;

    std::vector<Clasper> claspers;
    int idx = 0;
    for (auto& [mn, verts] : ordered) {
        (void)mn;
        Clasper c = Clasper::make("G" + std::to_string(++idx));
        c.degree = (int)verts.size() / 2;
        std::set<int> vs(verts.begin(), verts.end());
        std::string hom;
        for (int e = d.q; e < (int)d.edges.size(); ++e) {
            if (!vs.count(d.edges[e].tail)) continue;
            if (!hom.empty()) hom += ",";
            hom += edge_kind_name(d.edges[e].kind);
            for (size_t r = 0; r < d.edges[e].color.size(); ++r)
                hom += (r ? "|" : ":") + std::to_string(d.edges[e].color[r]);
        }
        c.homology = hom;
        claspers.push_back(c);
    }
    SurgeryPresentation p;
    p.source = d;
    p.scheme = expand_forest_scheme(claspers);
    return p;
}

namespace detail {

struct AdmissibleRotation {
    int r = 0;
    std::vector<int> chord_image; // local chord index -> local chord index
    std::vector<int> chord_flip;  // 1 when the stored direction reverses
};

// Rotations of the Wilson cycle preserving the chord diagram with colors
// compared modulo Holonomy (orientation reversal negates a chord color).
inline std::vector<AdmissibleRotation> admissible_rotations(const Diagram& d) {
    int q = d.q;
    int nch = (int)d.edges.size() - q;
    std::vector<ExpVec> base_colors;
    for (auto& e : d.edges) base_colors.push_back(e.color);
    auto base_inv = holonomy_invariant(d, base_colors);
    std::vector<AdmissibleRotation> out;
    for (int r = 0; r < q; ++r) {
        AdmissibleRotation a;
        a.r = r;
        a.chord_image.assign(nch, -1);
        a.chord_flip.assign(nch, 0);
        std::vector<ExpVec> colors(d.edges.size());
        for (int j = 0; j < q; ++j) colors[(j + r) % q] = d.edges[j].color;
        bool ok = true;
        for (int c = 0; c < nch && ok; ++c) {
            int ta = (d.edges[q + c].tail + r) % q;
            int he = (d.edges[q + c].head + r) % q;
            int image = -1, flip = 0;
            for (int c2 = 0; c2 < nch; ++c2) {
                if (d.edges[q + c2].tail == ta && d.edges[q + c2].head == he) {
                    image = c2;
                    flip = 0;
                    break;
                }
                if (d.edges[q + c2].tail == he && d.edges[q + c2].head == ta) {
                    image = c2;
                    flip = 1;
                    break;
                }
            }
            if (image < 0) {
                ok = false;
                break;
            }
            a.chord_image[c] = image;
            a.chord_flip[c] = flip;
            colors[q + image] = flip ? neg(d.edges[q + c].color) : d.edges[q + c].color;
        }
        if (!ok) continue;
        if (holonomy_invariant(d, colors) == base_inv) out.push_back(a);
    }
    return out;
}

inline int64_t factorial(int n) {
    int64_t f = 1;
    for (int i = 2; i <= n; ++i) f *= i;
    return f;
}

} // namespace detail

// Orbit count of (vertex labels, edge labels, chord orientations) under the
// admissible rotation symmetries: 2^n (2n)! (3n)! / |Aut|, verified against
// the orbit-stabilizer prediction.
inline int64_t labeling_orbit_count(const Diagram& input) {
    CanonicalForm cf = canonicalize(input);
    const Diagram& d = cf.diagram;
    if (d.t != 0) throw argument_error("labeling_orbit_count: chord diagrams only (reduce first)");
    int n = d.degree();
    if (n < 1) throw argument_error("labeling_orbit_count: empty diagram");
    if (n > 2) throw resource_error("labeling_orbit_count: degree > 2 enumeration is not practical");
    int q = d.q;                       // 2n
    int ne = (int)d.edges.size();      // 3n
    int nch = ne - q;                  // n

    auto rots = detail::admissible_rotations(d);
    int64_t aut = automorphism_group_order(d);
    if ((int64_t)rots.size() != aut)
        throw consistency_error("labeling_orbit_count: symmetry set disagrees with automorphism count");

    std::vector<int> vperm(q), eperm(ne);
    std::iota(vperm.begin(), vperm.end(), 0);
    std::set<std::vector<int>> orbits;
    do {
        std::iota(eperm.begin(), eperm.end(), 0);
        do {
            for (int mask = 0; mask < (1 << nch); ++mask) {
                std::vector<int> best;
                for (auto& a : rots) {
                    std::vector<int> key(q + ne + nch);
                    for (int v = 0; v < q; ++v) key[(v + a.r) % q] = vperm[v];
                    for (int j = 0; j < q; ++j) key[q + (j + a.r) % q] = eperm[j];
                    for (int c = 0; c < nch; ++c) {
                        key[q + q + a.chord_image[c]] = eperm[q + c];
                        key[q + ne + a.chord_image[c]] = ((mask >> c) & 1) ^ a.chord_flip[c];
                    }
                    if (best.empty() || key < best) best = std::move(key);
                }
                orbits.insert(std::move(best));
            }
        } while (std::next_permutation(eperm.begin(), eperm.end()));
    } while (std::next_permutation(vperm.begin(), vperm.end()));

    int64_t count = (int64_t)orbits.size();
    int64_t total = (int64_t(1) << n) * detail::factorial(2 * n) * detail::factorial(3 * n);
    if (count * aut != total)
        throw consistency_error("labeling_orbit_count: orbit-stabilizer mismatch");
    return count;
}

// Z_n of the surgery presentation of a chord diagram: the labeling count
// times |Aut| over (2n)!(3n)! must collapse to exactly 2^n.
inline DiagramVector Z_of_surgery(const Diagram& d, int n, const QuotientSpace& qs) {
    if (n < 1 || n > 2) throw argument_error("Z_of_surgery: n must be 1 or 2");
    if (d.degree() != n) throw argument_error("Z_of_surgery: diagram degree differs from n");
    if (!d.is_nh()) throw argument_error("Z_of_surgery: diagram is not nullhomologous");
    psi(d); // structural check of the presentation
    int64_t count = labeling_orbit_count(d);
    int64_t aut = automorphism_group_order(d);
    Rational scalar = Rational(count) * Rational(aut) /
                      Rational(detail::factorial(2 * n) * detail::factorial(3 * n));
    if (!(scalar == Rational(int64_t(1) << n)))
        throw consistency_error("Z_of_surgery: scalar differs from 2^n");
    return qs.reduce(d).scaled(scalar);
}

inline DiagramVector Z_of_surgery(const Diagram& d, int n, int threads = 1) {
    int K = std::max(2, d.max_abs_exponent());
    Window w{n, K, true, RelationOptions{}};
    QuotientSpace qs = build_quotient(w, threads);
    return Z_of_surgery(d, n, qs);
}

// Fixed scenario: Wh(K) minus the unknot contribution gives 2[Θ(0,1)],
// checked nonzero through W.
inline DiagramVector whitehead_example(int threads = 1) {
    Window w{1, 2, true, RelationOptions{}};
    QuotientSpace qs = build_quotient(w, threads);
    DiagramVector z = Z_of_surgery(theta(0, 1), 1, qs);
    DiagramVector z_unknot; // Z_1(O) = 0
    DiagramVector out = z + z_unknot;
    PolyModConstants wval = W(out);
    LaurentPoly expect = LaurentPoly::monomial(Rational(2), 1);
    if (wval != PolyModConstants(expect) || wval.is_zero())
        throw consistency_error("whitehead_example: class is not 2*Theta(0,1)");
    return out;
}

// Push a rank-r coloring to rank 1 along an integer projection.
inline Diagram kappa_star(const Diagram& d, const std::vector<int>& projection) {
    if ((int)projection.size() != d.rank)
        throw argument_error("kappa_star: projection length differs from color rank");
    Diagram out = d;
    out.rank = 1;
    for (auto& e : out.edges) {
        long long s = 0;
        for (size_t i = 0; i < projection.size(); ++i)
            s += (long long)projection[i] * e.color[i];
        if (s > INT32_MAX || s < INT32_MIN) throw arithmetic_error("kappa_star: exponent overflow");
        e.color = ExpVec{(int)s};
    }
    out.set_key({});
    out.validate();
    return out;
}

struct OccupiedRegionRow {
    int strict_count = 0;
    int mnull_count = 0;
    int demand = 0; // univalent vertices needed: 2 per strict clasper, 1 per M-null
    bool vanishes = false;
};

struct OccupiedRegionReport {
    int n = 0;
    int k = 0;
    int supply = 0; // univalent vertices available, 2n
    int min_demand = 0;
    bool all_vanish = false;
    std::vector<OccupiedRegionRow> rows;
};

// Strand-occupation arithmetic: a bracket [K; G_1..G_k] contributes nothing
// in degree n once every admissible strict/M-null split demands more
// univalent vertices than 2n supplies.
inline OccupiedRegionReport occupied_region(int n, int k) {
    if (n < 1 || k < 1) throw argument_error("occupied_region: n and k must be >= 1");
    OccupiedRegionReport rep;
    rep.n = n;
    rep.k = k;
    rep.supply = 2 * n;
    rep.min_demand = 0;
    rep.all_vanish = true;
    for (int mnull = 0; mnull <= std::min(1, k); ++mnull) {
        OccupiedRegionRow row;
        row.mnull_count = mnull;
        row.strict_count = k - mnull;
        row.demand = 2 * row.strict_count + row.mnull_count;
        row.vanishes = row.demand > rep.supply;
        if (rep.rows.empty() || row.demand < rep.min_demand) rep.min_demand = row.demand;
        rep.all_vanish = rep.all_vanish && row.vanishes;
        rep.rows.push_back(row);
    }
    return rep;
}

} // namespace knotforge
