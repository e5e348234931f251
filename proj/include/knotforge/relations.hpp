#pragma once

#include <optional>
#include <string>
#include <vector>

#include "knotforge/diagram.hpp"
#include "knotforge/diagram_vector.hpp"

namespace knotforge {

struct RelationOptions {
    // 'A': I - H + X presentation; 'B': symmetric Jacobi presentation. Both
    // span the same ideal; the canonical vectors coincide.
    char ihx_sign_convention = 'B';
    // Swap which resolution of an STU site is taken with positive sign.
    bool stu_first_resolution_positive = true;
};

struct RelationInstance {
    std::string kind;
    std::string site;
    std::vector<std::pair<Rational, Diagram>> raw; // as generated, before canonical collapse
    DiagramVector vec;                             // canonical combination
};

// --- elementary moves -------------------------------------------------------

inline Diagram as_flip(const Diagram& d, int trivalent_index) {
    Diagram out = d;
    std::swap(out.orientations[trivalent_index][1], out.orientations[trivalent_index][2]);
    out.set_key({});
    return out;
}

inline Diagram or_flip(const Diagram& d, int edge_index) {
    if (edge_index < d.q) throw argument_error("or_flip: Wilson edges are not reversible");
    Diagram out = d;
    Edge& e = out.edges[edge_index];
    std::swap(e.tail, e.head);
    e.color = neg(e.color);
    for (auto& cyc : out.orientations)
        for (auto& h : cyc)
            if (h.edge == edge_index) h.end = 1 - h.end;
    out.set_key({});
    return out;
}

// Holonomy move at a vertex, one lattice step in grading component r:
// every half-edge ending at v gains t_r on its head side, loses on its tail.
inline Diagram holonomy_shift(const Diagram& d, int vertex, int r = 0) {
    Diagram out = d;
    for (auto& e : out.edges) {
        if (e.head == vertex) e.color[r] += 1;
        if (e.tail == vertex) e.color[r] -= 1;
    }
    out.set_key({});
    return out;
}

// --- sites ------------------------------------------------------------------

namespace detail {

// Cyclic order at trivalent vertex w rotated so the half-edge on `edge` comes
// first; requires that half-edge to be present exactly once.
inline std::array<HalfEdge, 3> rotate_to_front(const Diagram& d, int w, int edge) {
    const auto& cyc = d.orientations[w - d.q];
    for (int k = 0; k < 3; ++k)
        if (cyc[k].edge == edge)
            return {cyc[k], cyc[(k + 1) % 3], cyc[(k + 2) % 3]};
    throw structural_error("half-edge not found in cyclic order");
}

struct Rebuilder {
    // Accumulates a diagram with explicit control of orientations; edges are
    // emitted internal-first with an index map published for orientation
    // transport.
    int rank, q, t;
    std::vector<ExpVec> wcolors;
    std::vector<Edge> internal;
    std::vector<int> emap; // old edge index -> new internal edge position (offset applied later)

    Diagram finish(const Diagram& src, const std::vector<int>& vmap, int dropped_trivalent,
                   const std::vector<std::array<HalfEdge, 3>>& extra_orients = {}) const {
        Diagram d;
        d.rank = rank;
        d.q = q;
        d.t = t;
        for (int j = 0; j < q; ++j) {
            Edge e;
            e.tail = j;
            e.head = (j + 1) % q;
            e.kind = EdgeKind::W;
            e.color = wcolors[j];
            d.edges.push_back(e);
        }
        for (auto e : internal) {
            e.kind = (e.tail == e.head) ? EdgeKind::Rho : EdgeKind::I;
            d.edges.push_back(e);
        }
        d.orientations.resize(t);
        // Transport orientations of surviving trivalent vertices.
        for (int w = src.q; w < src.q + src.t; ++w) {
            if (w == dropped_trivalent) continue;
            int nw = vmap[w];
            std::array<HalfEdge, 3> cyc;
            for (int k = 0; k < 3; ++k) {
                const HalfEdge& h = src.orientations[w - src.q][k];
                cyc[k] = HalfEdge{q + emap[h.edge], h.end};
            }
            d.orientations[nw - q] = cyc;
        }
        for (auto& cyc : extra_orients) {
            // extra_orients give fully formed entries keyed by their first
            // half-edge's vertex.
            int v = d.half_edge_vertex(cyc[0]);
            d.orientations[v - q] = cyc;
        }
        d.validate();
        return d;
    }
};

} // namespace detail

// An STU site: non-Wilson edge joining a univalent vertex to a trivalent one,
// with trivial color.
inline bool is_stu_site(const Diagram& d, int e) {
    if (e < d.q) return false;
    const Edge& ed = d.edges[e];
    if (ed.kind != EdgeKind::I || !is_zero(ed.color)) return false;
    bool tu = d.is_univalent(ed.tail), hu = d.is_univalent(ed.head);
    return tu != hu;
}

// Resolutions of an STU site: the trivalent vertex is erased and its two
// remaining half-edges attach to the Wilson cycle at two new consecutive
// points replacing the old attachment. First resolution: the half-edge
// following the site edge in cyclic order lands first along the Wilson
// orientation.
inline std::pair<Diagram, Diagram> stu_resolutions(const Diagram& d, int e) {
    if (!is_stu_site(d, e)) throw argument_error("not an STU site");
    const Edge& ed = d.edges[e];
    int u = d.is_univalent(ed.tail) ? ed.tail : ed.head;
    int w = d.is_univalent(ed.tail) ? ed.head : ed.tail;
    auto cyc = detail::rotate_to_front(d, w, e);
    HalfEdge a = cyc[1], b = cyc[2];

    auto build = [&](HalfEdge first, HalfEdge second) {
        detail::Rebuilder rb;
        rb.rank = d.rank;
        rb.q = d.q + 1;
        rb.t = d.t - 1;
        // Vertex relabeling: univalent > u shift by one; trivalent except w
        // compact to q+1 .. ; new univalent u' = u+1.
        std::vector<int> vmap(d.vertex_count(), -1);
        for (int v = 0; v < d.q; ++v) vmap[v] = (v <= u) ? v : v + 1;
        int next = rb.q;
        for (int v = d.q; v < d.q + d.t; ++v)
            if (v != w) vmap[v] = next++;
        int uprime = u + 1;

        rb.wcolors.resize(rb.q);
        for (int j = 0; j < u; ++j) rb.wcolors[j] = d.edges[j].color;
        rb.wcolors[u] = zero_color(d.rank);
        for (int j = u; j < d.q; ++j) rb.wcolors[j + 1] = d.edges[j].color;

        rb.emap.assign(d.edges.size(), -1);
        for (int f = d.q; f < (int)d.edges.size(); ++f) {
            if (f == e) continue;
            Edge ne = d.edges[f];
            // endpoint relabel, with w-ends rerouted to the attachments
            auto place = [&](int end_vertex, int end) -> int {
                if (end_vertex != w) return vmap[end_vertex];
                HalfEdge h{f, end};
                if (h == first) return u;
                if (h == second) return uprime;
                throw structural_error("dangling half-edge at removed vertex");
            };
            int nt = place(ne.tail, 0);
            int nh = place(ne.head, 1);
            ne.tail = nt;
            ne.head = nh;
            rb.emap[f] = (int)rb.internal.size();
            rb.internal.push_back(ne);
        }
        return rb.finish(d, vmap, w);
    };
    return {build(a, b), build(b, a)};
}

// An IHX site: trivially colored edge between two distinct trivalent vertices.
inline bool is_ihx_site(const Diagram& d, int e) {
    if (e < d.q) return false;
    const Edge& ed = d.edges[e];
    if (ed.kind != EdgeKind::I || !is_zero(ed.color)) return false;
    return !d.is_univalent(ed.tail) && !d.is_univalent(ed.head) && ed.tail != ed.head;
}

// The two reattachments of an IHX site under the symmetric Jacobi rotation:
// with (e, A, B) cyclic at one end and (e, C, D) at the other, returns the
// diagrams for pairings (B,C | A,D) and (C,A | B,D).
inline std::pair<Diagram, Diagram> ihx_rotations(const Diagram& d, int e) {
    if (!is_ihx_site(d, e)) throw argument_error("not an IHX site");
    const Edge& ed = d.edges[e];
    int w1 = ed.tail, w2 = ed.head;
    auto cyc1 = detail::rotate_to_front(d, w1, e);
    auto cyc2 = detail::rotate_to_front(d, w2, e);
    HalfEdge he1 = cyc1[0], A = cyc1[1], B = cyc1[2];
    HalfEdge he2 = cyc2[0], C = cyc2[1], D = cyc2[2];

    auto build = [&](HalfEdge p, HalfEdge qq, HalfEdge r, HalfEdge s) {
        // w1 carries (e, p, qq); w2 carries (e, r, s).
        Diagram out = d;
        auto assign = [&](HalfEdge h, int vertex) {
            Edge& f = out.edges[h.edge];
            if (h.end == 0) f.tail = vertex;
            else f.head = vertex;
        };
        for (auto h : {p, qq}) assign(h, w1);
        for (auto h : {r, s}) assign(h, w2);
        for (auto& f : out.edges)
            if (f.kind != EdgeKind::W) f.kind = (f.tail == f.head) ? EdgeKind::Rho : EdgeKind::I;
        out.orientations[w1 - d.q] = {he1, p, qq};
        out.orientations[w2 - d.q] = {he2, r, s};
        out.set_key({});
        out.validate();
        return out;
    };
    return {build(B, C, A, D), build(C, A, B, D)};
}

// FI fires at a chord joining Wilson-adjacent univalent vertices when the
// small loop (chord followed by the spanned Wilson edge reversed) has trivial
// holonomy.
inline bool fi_fires(const Diagram& d, int e) {
    if (e < d.q || d.q < 2) return false;
    const Edge& ed = d.edges[e];
    if (ed.kind != EdgeKind::I) return false;
    if (!d.is_univalent(ed.tail) || !d.is_univalent(ed.head)) return false;
    // Wilson edge j joins j and j+1; the chord must span exactly one.
    for (int j = 0; j < d.q; ++j) {
        int a = j, b = (j + 1) % d.q;
        bool fwd = (ed.tail == a && ed.head == b);
        bool rev = (ed.tail == b && ed.head == a);
        if (!fwd && !rev) continue;
        bool trivial = true;
        for (int r = 0; r < d.rank; ++r) {
            int chord = fwd ? ed.color[r] : -ed.color[r];
            if (chord - d.edges[j].color[r] != 0) trivial = false;
        }
        if (trivial) return true;
    }
    return false;
}

// --- instance generation ----------------------------------------------------

namespace detail {

inline RelationInstance make_instance(std::string kind, std::string site,
                                      std::vector<std::pair<Rational, Diagram>> raw) {
    RelationInstance ri;
    ri.kind = std::move(kind);
    ri.site = std::move(site);
    for (auto& [c, d] : raw) ri.vec.add(d, c);
    ri.raw = std::move(raw);
    return ri;
}

} // namespace detail

// All relation instances whose every term stays inside the exponent window
// [-K, K], generated over the given diagrams (expected: all canonical window
// diagrams of one degree).
inline std::vector<RelationInstance> generate_relations(const std::vector<Diagram>& diagrams,
                                                        int K,
                                                        const RelationOptions& opts = {}) {
    std::vector<RelationInstance> out;
    for (const Diagram& d : diagrams) {
        std::string base = d.brief();
        // AS at every trivalent vertex.
        for (int i = 0; i < d.t; ++i)
            out.push_back(detail::make_instance(
                "AS", base + " @v" + std::to_string(d.q + i),
                {{Rational(1), d}, {Rational(1), as_flip(d, i)}}));
        // OR at every non-Wilson edge.
        for (int e = d.q; e < (int)d.edges.size(); ++e)
            out.push_back(detail::make_instance("OR", base + " @e" + std::to_string(e),
                                                {{Rational(1), d}, {Rational(-1), or_flip(d, e)}}));
        // Holonomy at every vertex and grading component, window permitting.
        for (int v = 0; v < d.vertex_count(); ++v)
            for (int r = 0; r < d.rank; ++r) {
                Diagram s = holonomy_shift(d, v, r);
                if (!s.within_window(K)) continue;
                out.push_back(detail::make_instance(
                    "HOL", base + " @v" + std::to_string(v) + ",g" + std::to_string(r),
                    {{Rational(1), d}, {Rational(-1), s}}));
            }
        // STU.
        for (int e = d.q; e < (int)d.edges.size(); ++e) {
            if (!is_stu_site(d, e)) continue;
            auto [t1, t2] = stu_resolutions(d, e);
            Rational st = opts.stu_first_resolution_positive ? Rational(1) : Rational(-1);
            out.push_back(detail::make_instance(
                "STU", base + " @e" + std::to_string(e),
                {{Rational(1), d}, {-st, t1}, {st, t2}}));
        }
        // IHX.
        for (int e = d.q; e < (int)d.edges.size(); ++e) {
            if (!is_ihx_site(d, e)) continue;
            auto [r1, r2] = ihx_rotations(d, e);
            std::vector<std::pair<Rational, Diagram>> raw;
            if (opts.ihx_sign_convention == 'B') {
                raw = {{Rational(1), d}, {Rational(1), r1}, {Rational(1), r2}};
            } else {
                // I - H + X over pairings (A,C|B,D), (A,D|B,C): r2 flipped by
                // one AS at the first vertex, r1 with the roles of its ends
                // exchanged, which is the same diagram.
                raw = {{Rational(1), d},
                       {Rational(-1), as_flip(r2, d.edges[e].tail - d.q)},
                       {Rational(1), r1}};
            }
            out.push_back(detail::make_instance("IHX", base + " @e" + std::to_string(e), raw));
        }
        // FI.
        for (int e = d.q; e < (int)d.edges.size(); ++e)
            if (fi_fires(d, e))
                out.push_back(detail::make_instance("FI", base + " @e" + std::to_string(e),
                                                    {{Rational(1), d}}));
    }
    return out;
}

} // namespace knotforge
