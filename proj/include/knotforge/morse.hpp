#pragma once

#include <algorithm>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "knotforge/diagram.hpp"
#include "knotforge/laurent.hpp"
#include "knotforge/rational.hpp"
#include "knotforge/trace.hpp"

namespace knotforge {

struct CriticalLocus {
    std::string id;
    int index = 0;  // Morse index in {0,1,2}
    int period = 1; // base-circle revolutions before the locus closes up
    int sign = 1;
};

struct OneOneEvent {
    std::string from;
    std::string to;
    Rational base_angle = Rational(0); // in [0,1)
    int sign = 1;
};

namespace detail {

// Exact determinant of a square RationalFn matrix by Gaussian elimination.
inline RationalFn det_rationalfn(std::vector<std::vector<RationalFn>> m) {
    size_t n = m.size();
    RationalFn det(LaurentPoly(1));
    for (size_t col = 0; col < n; ++col) {
        size_t piv = col;
        while (piv < n && m[piv][col].is_zero()) ++piv;
        if (piv == n) return RationalFn();
        if (piv != col) {
            std::swap(m[piv], m[col]);
            det = det * RationalFn(Rational(-1));
        }
        det = det * m[col][col];
        for (size_t r = col + 1; r < n; ++r) {
            if (m[r][col].is_zero()) continue;
            RationalFn f = m[r][col] / m[col][col];
            for (size_t c = col; c < n; ++c) m[r][c] = m[r][c] - f * m[col][c];
        }
    }
    return det;
}

inline Rational det_rational(std::vector<std::vector<Rational>> m) {
    size_t n = m.size();
    Rational det(1);
    for (size_t col = 0; col < n; ++col) {
        size_t piv = col;
        while (piv < n && m[piv][col].is_zero()) ++piv;
        if (piv == n) return Rational(0);
        if (piv != col) {
            std::swap(m[piv], m[col]);
            det = -det;
        }
        det *= m[col][col];
        for (size_t r = col + 1; r < n; ++r) {
            if (m[r][col].is_zero()) continue;
            Rational f = m[r][col] / m[col][col];
            for (size_t c = col; c < n; ++c) m[r][c] -= f * m[col][c];
        }
    }
    return det;
}

// Crossings of the reference fiber angle phi0 while descending from angle a
// to angle b. Spans lie in (0,1] revolutions; a full revolution (a == b)
// crosses once.
inline int angle_drop(const Rational& a, const Rational& b, const Rational& phi0) {
    if (a == b) return 1;
    if (b < a) return (b < phi0 && phi0 < a) ? 1 : 0;
    return ((phi0 < a) ? 1 : 0) + ((b < phi0) ? 1 : 0);
}

} // namespace detail

struct FiberwiseMorseData {
    int fiber_genus = 0;
    std::vector<CriticalLocus> critical_loci;
    std::vector<OneOneEvent> one_one_events;
    std::vector<std::vector<long long>> monodromy;
    Rational base_fiber_angle = Rational(0);

    const CriticalLocus* locus(const std::string& id) const {
        for (auto& l : critical_loci)
            if (l.id == id) return &l;
        return nullptr;
    }

    void validate() const;
};

struct TransferEdge {
    int from = 0; // event index
    int to = 0;
    int sign = 1; // sign of the target event
    int drop = 0;

    LaurentPoly weight() const { return LaurentPoly::monomial(Rational(sign), drop); }
};

struct TransferGraph {
    int nodes = 0; // one per 1/1-event
    std::vector<TransferEdge> edges;
    std::vector<std::vector<int>> cycles; // disjoint simple cycles, canonical rotation

    int cycle_sign(const std::vector<int>& cyc, const FiberwiseMorseData& m) const {
        int s = 1;
        for (int e : cyc) s *= m.one_one_events[e].sign;
        return s;
    }
    int cycle_drop(const std::vector<int>& cyc) const {
        std::map<std::pair<int, int>, int> dropmap;
        for (auto& e : edges) dropmap[{e.from, e.to}] = e.drop;
        int total = 0;
        for (size_t i = 0; i < cyc.size(); ++i)
            total += dropmap.at({cyc[i], cyc[(i + 1) % cyc.size()]});
        return total;
    }
};

inline std::string event_name(int i) { return "ev" + std::to_string(i); }

inline TransferGraph build_transfer_graph(const FiberwiseMorseData& m) {
    TransferGraph g;
    int n = (int)m.one_one_events.size();
    g.nodes = n;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            if (m.one_one_events[i].to != m.one_one_events[j].from) continue;
            TransferEdge e;
            e.from = i;
            e.to = j;
            e.sign = m.one_one_events[j].sign;
            e.drop = detail::angle_drop(m.one_one_events[i].base_angle,
                                        m.one_one_events[j].base_angle, m.base_fiber_angle);
            g.edges.push_back(e);
        }
    // Transitive closure; reach[i][i] marks nodes on directed cycles.
    std::vector<std::vector<bool>> reach(n, std::vector<bool>(n, false));
    for (auto& e : g.edges) reach[e.from][e.to] = true;
    for (int k = 0; k < n; ++k)
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                if (reach[i][k] && reach[k][j]) reach[i][j] = true;
    auto same_scc = [&](int i, int j) { return i == j || (reach[i][j] && reach[j][i]); };
    std::vector<int> next(n, -1);
    for (int i = 0; i < n; ++i) {
        if (!reach[i][i]) continue;
        int count = 0;
        for (auto& e : g.edges)
            if (e.from == i && same_scc(i, e.to)) {
                next[i] = e.to;
                ++count;
            }
        if (count != 1)
            throw ingestion_error("transfer graph has branching cycles (non-simple SCC)");
    }
    std::vector<bool> seen(n, false);
    for (int i = 0; i < n; ++i) {
        if (!reach[i][i] || seen[i]) continue;
        std::vector<int> cyc;
        for (int v = i; !seen[v]; v = next[v]) {
            seen[v] = true;
            cyc.push_back(v);
        }
        auto best = std::min_element(cyc.begin(), cyc.end());
        std::rotate(cyc.begin(), best, cyc.end());
        g.cycles.push_back(cyc);
    }
    std::sort(g.cycles.begin(), g.cycles.end());
    for (auto& cyc : g.cycles)
        if (g.cycle_drop(cyc) < 1)
            throw ingestion_error("transfer cycle with nonpositive period");
    return g;
}

inline void FiberwiseMorseData::validate() const {
    if (fiber_genus < 0) throw ingestion_error("negative fiber genus");
    std::set<std::string> ids;
    long long counts[3] = {0, 0, 0};
    for (auto& l : critical_loci) {
        if (l.id.empty()) throw ingestion_error("critical locus with empty id");
        if (!ids.insert(l.id).second) throw ingestion_error("duplicate locus id: " + l.id);
        if (l.index < 0 || l.index > 2) throw ingestion_error("locus index outside {0,1,2}");
        if (l.period < 1) throw ingestion_error("locus period must be positive");
        if (l.sign != 1 && l.sign != -1) throw ingestion_error("locus sign outside {-1,+1}");
        counts[l.index] += l.period;
    }
    if (counts[0] - counts[1] + counts[2] != 2 - 2 * (long long)fiber_genus)
        throw ingestion_error("per-fiber critical counts violate the Euler characteristic");
    if (base_fiber_angle < Rational(0) || !(base_fiber_angle < Rational(1)))
        throw ingestion_error("base fiber angle outside [0,1)");
    std::set<Rational> angles;
    for (auto& e : one_one_events) {
        const CriticalLocus* a = locus(e.from);
        const CriticalLocus* b = locus(e.to);
        if (!a || !b) throw ingestion_error("1/1-event references unknown locus");
        if (a->index != 1 || b->index != 1)
            throw ingestion_error("1/1-event between non-index-1 loci");
        if (a->period != 1 || b->period != 1)
            throw ingestion_error("1/1-event between loci of period > 1");
        if (e.sign != 1 && e.sign != -1) throw ingestion_error("event sign outside {-1,+1}");
        if (e.base_angle < Rational(0) || !(e.base_angle < Rational(1)))
            throw ingestion_error("event angle outside [0,1)");
        if (e.base_angle == base_fiber_angle)
            throw ingestion_error("event angle coincides with the base fiber angle");
        if (!angles.insert(e.base_angle).second)
            throw ingestion_error("coincident event angles");
    }
    size_t n = 2 * (size_t)fiber_genus;
    if (monodromy.size() != n) throw ingestion_error("monodromy must be 2g x 2g");
    std::vector<std::vector<Rational>> mm;
    for (auto& row : monodromy) {
        if (row.size() != n) throw ingestion_error("monodromy must be 2g x 2g");
        std::vector<Rational> r;
        for (long long v : row) r.push_back(Rational(v));
        mm.push_back(std::move(r));
    }
    Rational d = detail::det_rational(mm);
    if (!(d == Rational(1)) && !(d == Rational(-1)))
        throw ingestion_error("monodromy not invertible over the integers");
    build_transfer_graph(*this); // throws on non-simple cycle structure
}

inline LaurentPoly alexander_polynomial(const FiberwiseMorseData& m) {
    size_t n = 2 * (size_t)m.fiber_genus;
    if (m.monodromy.size() != n) throw ingestion_error("monodromy must be 2g x 2g");
    std::vector<std::vector<RationalFn>> a(n, std::vector<RationalFn>(n));
    for (size_t i = 0; i < n; ++i) {
        if (m.monodromy[i].size() != n) throw ingestion_error("monodromy must be 2g x 2g");
        for (size_t j = 0; j < n; ++j) {
            LaurentPoly e = LaurentPoly(Rational(-m.monodromy[i][j]));
            if (i == j) e += LaurentPoly::t_power(1);
            a[i][j] = RationalFn(e);
        }
    }
    RationalFn d = detail::det_rationalfn(a);
    if (!d.is_polynomial()) throw invariant_violation("characteristic polynomial not polynomial");
    LaurentPoly p = d.num();
    if (p.is_zero() || p.coeff(0).is_zero())
        throw invariant_violation("singular monodromy: Alexander polynomial degenerates");
    p = p.shifted(-p.lowest_exponent());
    if (p.coeff(p.lowest_exponent()).sign() < 0) p = p.scaled(Rational(-1));
    return p;
}

struct IrreducibleOrbit {
    std::string id;
    int sign = 1;
    int period = 1;
    int index = 0;

    RationalFn iterate_series() const {
        LaurentPoly w = LaurentPoly::monomial(Rational(sign), period);
        return RationalFn(w, LaurentPoly(1) - w);
    }
};

inline std::vector<IrreducibleOrbit> irreducible_orbits(const FiberwiseMorseData& m) {
    std::vector<IrreducibleOrbit> out;
    for (auto& l : m.critical_loci) out.push_back({l.id, l.sign, l.period, l.index});
    TransferGraph g = build_transfer_graph(m);
    for (auto& cyc : g.cycles) {
        std::string id = "cycle(";
        for (size_t i = 0; i < cyc.size(); ++i) {
            if (i) id += ",";
            id += event_name(cyc[i]);
        }
        id += ")";
        out.push_back({id, g.cycle_sign(cyc, m), g.cycle_drop(cyc), 1});
    }
    return out;
}

struct ClosedALPath {
    std::string orbit_id; // irreducible factor
    int multiplicity = 1;
    int period = 1;
    int sign = 1;
    int index = 0;
};

inline std::vector<ClosedALPath> enumerate_closed_orbits(const FiberwiseMorseData& m, int max_period) {
    if (max_period < 1) throw argument_error("enumerate_closed_orbits: maxPeriod must be >= 1");
    std::vector<ClosedALPath> out;
    for (auto& o : irreducible_orbits(m))
        for (int k = 1; k * o.period <= max_period; ++k)
            out.push_back({o.id, k, k * o.period, (k % 2 == 0) ? 1 : o.sign, o.index});
    return out;
}

struct ClosedOrbitSeries {
    std::vector<IrreducibleOrbit> orbits;
    RationalFn boundary_series;
    RationalFn self_loop_series;
};

inline ClosedOrbitSeries closed_orbit_series(const FiberwiseMorseData& m, int check_order = 10) {
    ClosedOrbitSeries out;
    out.orbits = irreducible_orbits(m);
    for (auto& o : out.orbits) {
        RationalFn s = o.iterate_series();
        out.self_loop_series += s;
        out.boundary_series += (o.index == 1) ? -s : s;
    }
    // Characteristic-polynomial consistency: det(I - A(t)) factors over the
    // disjoint simple cycles.
    TransferGraph g = build_transfer_graph(m);
    size_t n = (size_t)g.nodes;
    std::vector<std::vector<RationalFn>> ia(n, std::vector<RationalFn>(n));
    for (size_t i = 0; i < n; ++i)
        for (size_t j = 0; j < n; ++j) ia[i][j] = RationalFn(i == j ? LaurentPoly(1) : LaurentPoly(0));
    for (auto& e : g.edges) ia[e.from][e.to] = ia[e.from][e.to] - RationalFn(e.weight());
    RationalFn lhs = detail::det_rationalfn(ia);
    RationalFn rhs(LaurentPoly(1));
    for (auto& cyc : g.cycles) {
        LaurentPoly w = LaurentPoly::monomial(Rational(g.cycle_sign(cyc, m)), g.cycle_drop(cyc));
        rhs *= RationalFn(LaurentPoly(1) - w);
    }
    if (lhs != rhs)
        throw consistency_error("transfer graph determinant disagrees with cycle decomposition");
    // Series coefficients must reproduce the enumeration counts.
    if (check_order >= 1) {
        std::map<int, Rational> self_counts, bd_counts;
        for (auto& p : enumerate_closed_orbits(m, check_order)) {
            self_counts[p.period] += Rational(p.sign);
            bd_counts[p.period] += Rational((p.index == 1) ? -p.sign : p.sign);
        }
        auto check = [&](const RationalFn& s, const std::map<int, Rational>& counts, const char* what) {
            std::map<int, Rational> coeffs;
            for (auto& [e, c] : s.series(check_order)) coeffs[e] = c;
            for (int e = 0; e <= check_order; ++e) {
                Rational a = coeffs.count(e) ? coeffs[e] : Rational(0);
                auto it = counts.find(e);
                Rational b = it == counts.end() ? Rational(0) : it->second;
                if (!(a == b))
                    throw consistency_error(std::string(what) + " disagrees with orbit enumeration at t^" +
                                            std::to_string(e));
            }
        };
        check(out.self_loop_series, self_counts, "self-loop series");
        check(out.boundary_series, bd_counts, "boundary series");
        for (auto& o : out.orbits) {
            std::map<int, Rational> expected;
            for (int k = 1; k * o.period <= check_order; ++k)
                expected[k * o.period] = Rational((k % 2 == 0) ? 1 : o.sign);
            check(o.iterate_series(), expected, "iterate series");
        }
    }
    return out;
}

struct DenominatorReport {
    LaurentPoly delta;
    LaurentPoly bound; // (1-t)^2 * delta
    RationalFn self_loop_series;
    RationalFn product;
    bool is_laurent = false;
};

inline DenominatorReport check_denominator(const FiberwiseMorseData& m) {
    DenominatorReport rep;
    rep.delta = alexander_polynomial(m);
    LaurentPoly one_minus_t = LaurentPoly(1) - LaurentPoly::t_power(1);
    rep.bound = one_minus_t * one_minus_t * rep.delta;
    rep.self_loop_series = closed_orbit_series(m).self_loop_series;
    rep.product = RationalFn(rep.bound) * rep.self_loop_series;
    rep.is_laurent = rep.product.is_polynomial();
    return rep;
}

struct AssembledF {
    std::map<int, RationalFn> edge_series;
    LaurentPoly delta;
    TracedClass traced;
};

// Product-form F over a diagram shape: one series per non-Wilson edge, each
// denominator must divide (1-t)^2 * delta up to units; then substitute all
// formal variables to the single t via trace.
inline AssembledF assemble_F(const Diagram& shape, const std::map<int, RationalFn>& edge_series,
                             const LaurentPoly& delta) {
    AssembledF out;
    out.delta = delta;
    LaurentPoly one_minus_t = LaurentPoly(1) - LaurentPoly::t_power(1);
    LaurentPoly bound = one_minus_t * one_minus_t * delta;
    for (int e = shape.q; e < (int)shape.edges.size(); ++e) {
        auto it = edge_series.find(e);
        if (it == edge_series.end())
            throw argument_error("assemble_F: missing series for non-Wilson edge " + std::to_string(e));
        if (!divides(it->second.den(), bound))
            throw invariant_violation("assemble_F: edge denominator violates the (1-t)^2*Delta bound");
        out.edge_series.emplace(e, it->second);
    }
    out.traced = trace(shape, out.edge_series);
    return out;
}

inline AssembledF assemble_F(const Diagram& shape, const std::map<int, RationalFn>& pairing_series,
                             const FiberwiseMorseData& m) {
    LaurentPoly delta = alexander_polynomial(m);
    RationalFn self_loop = closed_orbit_series(m).self_loop_series;
    std::map<int, RationalFn> series;
    for (int e = shape.q; e < (int)shape.edges.size(); ++e) {
        if (shape.edges[e].kind == EdgeKind::Rho) {
            series.emplace(e, self_loop);
        } else {
            auto it = pairing_series.find(e);
            if (it == pairing_series.end())
                throw argument_error("assemble_F: missing pairing series for edge " + std::to_string(e));
            series.emplace(e, it->second);
        }
    }
    return assemble_F(shape, series, delta);
}

} // namespace knotforge
