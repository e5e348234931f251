#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <functional>
#include <map>
#include <numeric>
#include <optional>
#include <set>
#include <string>
#include <tuple>
#include <vector>

#include "knotforge/errors.hpp"

namespace knotforge {

// Multigraded monomial color: one integer exponent per H1 generator.
using ExpVec = std::vector<int>;

inline ExpVec zero_color(int rank) { return ExpVec(rank, 0); }
inline ExpVec neg(const ExpVec& c) {
    ExpVec r(c.size());
    for (size_t i = 0; i < c.size(); ++i) r[i] = -c[i];
    return r;
}
inline bool is_zero(const ExpVec& c) {
    return std::all_of(c.begin(), c.end(), [](int x) { return x == 0; });
}

enum class EdgeKind : int { W = 0, I = 1, Rho = 2 };

inline const char* edge_kind_name(EdgeKind k) {
    switch (k) {
        case EdgeKind::W: return "W";
        case EdgeKind::I: return "I";
        case EdgeKind::Rho: return "rho";
    }
    return "?";
}

struct Edge {
    int tail = 0;
    int head = 0;
    EdgeKind kind = EdgeKind::I;
    ExpVec color;
};

// A half-edge is one end of an edge; end 0 sits at the tail, end 1 at the head.
struct HalfEdge {
    int edge = -1;
    int end = 0;
    friend bool operator==(const HalfEdge& a, const HalfEdge& b) {
        return a.edge == b.edge && a.end == b.end;
    }
};

// Vertex-oriented, edge-oriented trivalent graph with a distinguished oriented
// Wilson cycle through all univalent vertices.
//
// Conventions baked into the representation:
//   - vertices 0..q-1 are the univalent (Wilson) vertices in Wilson-cycle
//     order; vertices q..q+t-1 are trivalent;
//   - edges 0..q-1 are the Wilson edges, edge j running j -> (j+1) mod q;
//   - non-Wilson edges follow, in canonical sorted order for canonical forms;
//   - orientations[v-q] lists the three half-edges at trivalent vertex v in
//     cyclic order; canonical forms keep these in the reference state (sorted
//     half-edge ids) with the AS sign tracked separately.
class Diagram {
public:
    int rank = 1;
    int q = 0; // univalent vertex count
    int t = 0; // trivalent vertex count
    std::vector<Edge> edges;
    std::vector<std::array<HalfEdge, 3>> orientations;

    int vertex_count() const { return q + t; }
    int degree() const { return (q + t) / 2; }
    bool is_univalent(int v) const { return v < q; }

    int half_edge_id(const HalfEdge& h) const { return 2 * h.edge + h.end; }
    int half_edge_vertex(const HalfEdge& h) const {
        return h.end == 0 ? edges[h.edge].tail : edges[h.edge].head;
    }

    std::vector<HalfEdge> incident_half_edges(int v) const {
        std::vector<HalfEdge> out;
        for (int e = 0; e < (int)edges.size(); ++e) {
            if (edges[e].tail == v) out.push_back({e, 0});
            if (edges[e].head == v) out.push_back({e, 1});
        }
        return out;
    }

    // Structural validation; throws structural_error with a diagnosis.
    void validate() const;

    // Sum over edges and grading components of |exponent|; the truncation
    // weight used for pivot ordering.
    int64_t weight() const {
        int64_t w = 0;
        for (auto& e : edges)
            for (int x : e.color) w += std::abs((int64_t)x);
        return w;
    }

    int max_abs_exponent() const {
        int m = 0;
        for (auto& e : edges)
            for (int x : e.color) m = std::max(m, std::abs(x));
        return m;
    }

    bool within_window(int K) const { return max_abs_exponent() <= K; }

    // Product of Wilson-edge colors is trivial.
    bool is_nh() const {
        ExpVec s = zero_color(rank);
        for (int j = 0; j < q; ++j)
            for (int r = 0; r < rank; ++r) s[r] += edges[j].color[r];
        return is_zero(s);
    }

    // Canonical-form cache; filled by canonicalize() on the returned diagram.
    const std::vector<int64_t>& key() const {
        if (key_.empty()) key_ = encode_reference();
        return key_;
    }
    void set_key(std::vector<int64_t> k) const { key_ = std::move(k); }

    friend bool operator==(const Diagram& a, const Diagram& b) { return a.key() == b.key(); }
    friend bool operator!=(const Diagram& a, const Diagram& b) { return !(a == b); }
    friend bool operator<(const Diagram& a, const Diagram& b) { return a.key() < b.key(); }

    std::string brief() const;

private:
    // Encoding of the diagram exactly as stored (no relabeling search); only
    // meaningful on canonical representatives.
    std::vector<int64_t> encode_reference() const;

    mutable std::vector<int64_t> key_;
};

struct CanonicalForm {
    Diagram diagram;
    // +1 / -1: class equals sign * canonical diagram modulo AS and
    // orientation reversal; 0: the class is forced to zero by a symmetry.
    int sign = 1;
};

inline void Diagram::validate() const {
    if (rank < 1) throw structural_error("rank must be >= 1");
    if (q < 1) throw structural_error("diagram needs at least one Wilson vertex");
    if ((q + t) % 2 != 0) throw structural_error("odd vertex count");
    if ((int)edges.size() != q + (3 * (q + t) / 2 - q))
        throw structural_error("edge count must be 3n for degree n");
    std::vector<int> valence(q + t, 0);
    for (int e = 0; e < (int)edges.size(); ++e) {
        const Edge& ed = edges[e];
        if (ed.tail < 0 || ed.tail >= q + t || ed.head < 0 || ed.head >= q + t)
            throw structural_error("edge endpoint out of range");
        if ((int)ed.color.size() != rank) throw structural_error("color rank mismatch");
        if (e < q) {
            if (ed.kind != EdgeKind::W) throw structural_error("edges 0..q-1 must be Wilson edges");
            if (ed.tail != e || ed.head != (e + 1) % q)
                throw structural_error("Wilson edge endpoints out of cycle order");
        } else {
            if (ed.kind == EdgeKind::W) throw structural_error("non-Wilson slot holds a Wilson edge");
            if (ed.kind == EdgeKind::Rho && ed.tail != ed.head)
                throw structural_error("rho edge must be a self-loop");
            if (ed.kind == EdgeKind::I && ed.tail == ed.head)
                throw structural_error("self-loop must have kind rho");
        }
        valence[ed.tail]++;
        valence[ed.head]++;
    }
    for (int v = 0; v < q + t; ++v) {
        // Univalent vertices carry two Wilson half-edges plus one internal
        // one, so every vertex sees exactly three half-edges.
        if (valence[v] != 3)
            throw structural_error("vertex " + std::to_string(v) + " has valence " +
                                   std::to_string(valence[v]));
    }
    if ((int)orientations.size() != t) throw structural_error("orientation table size mismatch");
    for (int i = 0; i < t; ++i) {
        auto inc = incident_half_edges(q + i);
        if (inc.size() != 3) throw structural_error("trivalent vertex without 3 half-edges");
        std::set<int> want, got;
        for (auto& h : inc) want.insert(half_edge_id(h));
        for (auto& h : orientations[i]) {
            if (h.edge < 0 || h.edge >= (int)edges.size())
                throw structural_error("orientation references missing edge");
            if (half_edge_vertex(h) != q + i)
                throw structural_error("orientation references foreign half-edge");
            got.insert(half_edge_id(h));
        }
        if (want != got) throw structural_error("orientation is not the incident half-edge set");
    }
    // Connectivity: Wilson cycle joins the univalent vertices; every trivalent
    // vertex must be reachable through non-Wilson edges.
    std::vector<int> parent(q + t);
    std::iota(parent.begin(), parent.end(), 0);
    std::function<int(int)> find = [&](int x) { return parent[x] == x ? x : parent[x] = find(parent[x]); };
    auto unite = [&](int a, int b) { parent[find(a)] = find(b); };
    for (int j = 1; j < q; ++j) unite(0, j);
    for (int e = q; e < (int)edges.size(); ++e) unite(edges[e].tail, edges[e].head);
    for (int v = 0; v < q + t; ++v)
        if (find(v) != find(0)) throw structural_error("diagram is not connected");
}

inline std::vector<int64_t> Diagram::encode_reference() const {
    std::vector<int64_t> out;
    out.push_back(q);
    out.push_back(t);
    out.push_back(rank);
    for (int j = 0; j < q; ++j)
        for (int r = 0; r < rank; ++r) out.push_back(edges[j].color[r]);
    for (int e = q; e < (int)edges.size(); ++e) {
        out.push_back(edges[e].tail);
        out.push_back(edges[e].head);
        out.push_back((int)edges[e].kind);
        for (int r = 0; r < rank; ++r) out.push_back(edges[e].color[r]);
    }
    return out;
}

inline std::string Diagram::brief() const {
    std::string s = "deg" + std::to_string(degree()) + "[q=" + std::to_string(q) + "]";
    bool wilson_colored = false;
    for (int e = 0; e < q; ++e)
        for (int r = 0; r < rank; ++r)
            if (edges[e].color[r] != 0) wilson_colored = true;
    if (wilson_colored) {
        s += " W(";
        for (int e = 0; e < q; ++e) {
            if (e) s += " ";
            for (int r = 0; r < rank; ++r) s += (r ? "," : "") + std::to_string(edges[e].color[r]);
        }
        s += ")";
    }
    for (int e = q; e < (int)edges.size(); ++e) {
        s += " " + std::string(edge_kind_name(edges[e].kind)) + "(" + std::to_string(edges[e].tail) +
             "->" + std::to_string(edges[e].head) + ";";
        for (int r = 0; r < rank; ++r) s += (r ? "," : "") + std::to_string(edges[e].color[r]);
        s += ")";
    }
    return s;
}

namespace detail {

// One relabeling pass: rotate the Wilson cycle by rot, permute trivalent
// vertices by perm (perm[i] = new index of old trivalent vertex q+i), fold
// each non-Wilson edge to its preferred orientation state, and produce
// (encoding, AS sign, ambiguity flag).
struct EncodedCandidate {
    std::vector<int64_t> encoding;
    int sign = 1;
    bool ambiguous = false;
};

inline EncodedCandidate encode_candidate(const Diagram& d, int rot, const std::vector<int>& perm) {
    const int q = d.q, t = d.t, rank = d.rank;
    auto map_vertex = [&](int v) {
        if (v < q) return (v - rot + q) % q;
        return q + perm[v - q];
    };

    struct FoldedEdge {
        std::vector<int64_t> tuple; // tail, head, kind, color...
        int orig = 0;
        bool flipped = false;
        bool ambiguous = false;
    };
    std::vector<FoldedEdge> folded;
    folded.reserve(d.edges.size() - q);
    for (int e = q; e < (int)d.edges.size(); ++e) {
        const Edge& ed = d.edges[e];
        int a = map_vertex(ed.tail), b = map_vertex(ed.head);
        std::vector<int64_t> fwd = {a, b, (int)ed.kind};
        for (int r = 0; r < rank; ++r) fwd.push_back(ed.color[r]);
        std::vector<int64_t> rev = {b, a, (int)ed.kind};
        for (int r = 0; r < rank; ++r) rev.push_back(-ed.color[r]);
        FoldedEdge f;
        f.orig = e;
        if (rev < fwd) {
            f.tuple = std::move(rev);
            f.flipped = true;
        } else {
            f.ambiguous = (rev == fwd); // palindromic self-loop
            f.tuple = std::move(fwd);
        }
        folded.push_back(std::move(f));
    }
    std::stable_sort(folded.begin(), folded.end(),
                     [](const FoldedEdge& x, const FoldedEdge& y) { return x.tuple < y.tuple; });

    // Half-edge id translation: original (edge, end) -> new id.
    // Wilson edge j maps to slot (j - rot + q) % q, never flipped.
    std::vector<std::array<int, 2>> new_id(d.edges.size());
    for (int j = 0; j < q; ++j) {
        int slot = (j - rot + q) % q;
        new_id[j] = {2 * slot + 0, 2 * slot + 1};
    }
    for (int m = 0; m < (int)folded.size(); ++m) {
        int slot = q + m;
        int e = folded[m].orig;
        if (folded[m].flipped)
            new_id[e] = {2 * slot + 1, 2 * slot + 0};
        else
            new_id[e] = {2 * slot + 0, 2 * slot + 1};
    }

    // AS parity: each trivalent vertex's transported cyclic order against the
    // sorted reference order of its new half-edge ids.
    int sign = 1;
    bool ambiguous = false;
    for (auto& f : folded) ambiguous = ambiguous || f.ambiguous;
    for (int i = 0; i < t; ++i) {
        const auto& cyc = d.orientations[i];
        std::array<int, 3> ids;
        for (int k = 0; k < 3; ++k) ids[k] = new_id[cyc[k].edge][cyc[k].end];
        // parity +1 iff (ids) is an even rotation of its sorted order
        std::array<int, 3> s = ids;
        std::sort(s.begin(), s.end());
        bool even = (ids == std::array<int, 3>{s[0], s[1], s[2]}) ||
                    (ids == std::array<int, 3>{s[1], s[2], s[0]}) ||
                    (ids == std::array<int, 3>{s[2], s[0], s[1]});
        if (!even) sign = -sign;
    }

    EncodedCandidate out;
    out.sign = sign;
    out.ambiguous = ambiguous;
    out.encoding.push_back(q);
    out.encoding.push_back(t);
    out.encoding.push_back(rank);
    for (int j = 0; j < q; ++j) {
        int orig = (j + rot) % q; // Wilson slot j holds original arc j+rot
        for (int r = 0; r < rank; ++r) out.encoding.push_back(d.edges[orig].color[r]);
    }
    for (auto& f : folded)
        out.encoding.insert(out.encoding.end(), f.tuple.begin(), f.tuple.end());
    return out;
}

inline Diagram decode_encoding(const std::vector<int64_t>& enc) {
    Diagram d;
    size_t pos = 0;
    d.q = (int)enc[pos++];
    d.t = (int)enc[pos++];
    d.rank = (int)enc[pos++];
    for (int j = 0; j < d.q; ++j) {
        Edge e;
        e.tail = j;
        e.head = (j + 1) % d.q;
        e.kind = EdgeKind::W;
        e.color.resize(d.rank);
        for (int r = 0; r < d.rank; ++r) e.color[r] = (int)enc[pos++];
        d.edges.push_back(std::move(e));
    }
    while (pos < enc.size()) {
        Edge e;
        e.tail = (int)enc[pos++];
        e.head = (int)enc[pos++];
        e.kind = (EdgeKind)enc[pos++];
        e.color.resize(d.rank);
        for (int r = 0; r < d.rank; ++r) e.color[r] = (int)enc[pos++];
        d.edges.push_back(std::move(e));
    }
    // Reference orientations: sorted incident half-edge ids.
    d.orientations.resize(d.t);
    for (int i = 0; i < d.t; ++i) {
        auto inc = d.incident_half_edges(d.q + i);
        std::sort(inc.begin(), inc.end(), [&](const HalfEdge& a, const HalfEdge& b) {
            return d.half_edge_id(a) < d.half_edge_id(b);
        });
        std::copy(inc.begin(), inc.end(), d.orientations[i].begin());
    }
    return d;
}

} // namespace detail

// Lexicographically minimal labeled representative over Wilson rotations,
// trivalent relabelings and per-edge orientation folds; AS sign accumulated,
// 0 when the minimum is reached with both signs (class is 2-torsion, hence 0).
inline CanonicalForm canonicalize(const Diagram& d) {
    std::vector<int> perm(d.t);
    std::iota(perm.begin(), perm.end(), 0);
    std::optional<detail::EncodedCandidate> best;
    bool sign_conflict = false;
    std::vector<int> p = perm;
    for (int rot = 0; rot < std::max(1, d.q); ++rot) {
        std::sort(p.begin(), p.end());
        do {
            auto cand = detail::encode_candidate(d, rot, p);
            if (!best || cand.encoding < best->encoding) {
                best = cand;
                sign_conflict = false;
            } else if (cand.encoding == best->encoding) {
                if (cand.sign != best->sign) sign_conflict = true;
                best->ambiguous = best->ambiguous || cand.ambiguous;
            }
        } while (std::next_permutation(p.begin(), p.end()));
    }
    CanonicalForm out;
    out.diagram = detail::decode_encoding(best->encoding);
    out.diagram.set_key(best->encoding);
    out.sign = (sign_conflict || best->ambiguous) ? 0 : best->sign;
    return out;
}

// Order of the automorphism group: Wilson-rotation x trivalent-permutation x
// parallel-edge block assignments, preserving edge kinds, edge orientations up
// to the orientation-reversal color involution, and the coloring up to
// Holonomy. Vertex orientations are ignored (AS parity).
int64_t automorphism_group_order(const Diagram& d);

// Invariant of the coloring modulo Holonomy: pairings with a deterministic
// fundamental cycle basis (per grading component).
std::vector<int64_t> holonomy_invariant(const Diagram& d, const std::vector<ExpVec>& colors);

namespace detail {

// Spanning-tree data on the full graph (Wilson + internal edges).
struct TreeData {
    std::vector<int> parent_edge;   // edge index into diagram, -1 at root
    std::vector<int> parent_vertex; // -1 at root
    std::vector<int> order;         // BFS order
};

inline TreeData spanning_tree(const Diagram& d) {
    int n = d.vertex_count();
    TreeData td;
    td.parent_edge.assign(n, -1);
    td.parent_vertex.assign(n, -1);
    std::vector<bool> seen(n, false);
    std::vector<int> queue = {0};
    seen[0] = true;
    for (size_t h = 0; h < queue.size(); ++h) {
        int v = queue[h];
        td.order.push_back(v);
        for (int e = 0; e < (int)d.edges.size(); ++e) {
            for (int endv : {d.edges[e].tail, d.edges[e].head}) {
                int other = (endv == d.edges[e].tail) ? d.edges[e].head : d.edges[e].tail;
                if (endv != v) continue;
                if (!seen[other]) {
                    seen[other] = true;
                    td.parent_edge[other] = e;
                    td.parent_vertex[other] = v;
                    queue.push_back(other);
                }
            }
        }
    }
    return td;
}

} // namespace detail

inline std::vector<int64_t> holonomy_invariant(const Diagram& d, const std::vector<ExpVec>& colors) {
    // Potential phi at each vertex per grading component, chosen so tree edges
    // read color = phi(head) - phi(tail); the invariant is the mismatch on
    // each non-tree edge, listed in edge order.
    auto td = detail::spanning_tree(d);
    int n = d.vertex_count();
    std::vector<ExpVec> phi(n, zero_color(d.rank));
    std::vector<bool> have(n, false);
    have[0] = true;
    for (int v : td.order) {
        if (td.parent_edge[v] < 0) continue;
        int e = td.parent_edge[v];
        const Edge& ed = d.edges[e];
        int pv = td.parent_vertex[v];
        for (int r = 0; r < d.rank; ++r) {
            if (ed.head == v && ed.tail == pv)
                phi[v][r] = phi[pv][r] + colors[e][r];
            else
                phi[v][r] = phi[pv][r] - colors[e][r];
        }
        have[v] = true;
    }
    std::vector<int64_t> inv;
    std::vector<bool> is_tree(d.edges.size(), false);
    for (int v = 0; v < n; ++v)
        if (td.parent_edge[v] >= 0) is_tree[td.parent_edge[v]] = true;
    for (int e = 0; e < (int)d.edges.size(); ++e) {
        if (is_tree[e]) continue;
        const Edge& ed = d.edges[e];
        for (int r = 0; r < d.rank; ++r)
            inv.push_back(colors[e][r] - (phi[ed.head][r] - phi[ed.tail][r]));
    }
    return inv;
}

inline int64_t automorphism_group_order(const Diagram& d) {
    CanonicalForm cf = canonicalize(d);
    const Diagram& c = cf.diagram;
    const int q = c.q, t = c.t;

    std::vector<ExpVec> base_colors;
    for (auto& e : c.edges) base_colors.push_back(e.color);
    auto base_inv = holonomy_invariant(c, base_colors);

    // Group non-Wilson edges by (unordered endpoints, kind) to enumerate
    // assignments between parallel edges.
    auto block_key = [&](const Edge& e) {
        return std::tuple<int, int, int>(std::min(e.tail, e.head), std::max(e.tail, e.head),
                                         (int)e.kind);
    };

    int64_t count = 0;
    std::vector<int> perm(t);
    std::iota(perm.begin(), perm.end(), 0);
    for (int rot = 0; rot < std::max(1, q); ++rot) {
        std::sort(perm.begin(), perm.end());
        do {
            auto map_vertex = [&](int v) {
                if (v < q) return (v - rot + q) % q;
                return q + perm[v - q];
            };
            // Map each non-Wilson edge; collect candidate target edges.
            std::map<std::tuple<int, int, int>, std::vector<int>> targets;
            for (int e = q; e < (int)c.edges.size(); ++e) targets[block_key(c.edges[e])].push_back(e);
            std::map<std::tuple<int, int, int>, std::vector<int>> sources;
            bool feasible = true;
            for (int e = q; e < (int)c.edges.size() && feasible; ++e) {
                Edge m = c.edges[e];
                m.tail = map_vertex(m.tail);
                m.head = map_vertex(m.head);
                auto k = block_key(m);
                if (!targets.count(k)) feasible = false;
                else sources[k].push_back(e);
            }
            if (!feasible) continue;
            for (auto& [k, v] : targets)
                if (!sources.count(k) || sources[k].size() != v.size()) { feasible = false; break; }
            if (!feasible) continue;

            // Enumerate bijections inside each block (blocks have size <= 2
            // for valence reasons, but handle generally).
            std::vector<std::pair<std::vector<int>, std::vector<int>>> blocks;
            for (auto& [k, v] : targets) blocks.push_back({sources[k], v});
            std::function<void(size_t, std::vector<int>&)> rec = [&](size_t bi, std::vector<int>& emap) {
                if (bi == blocks.size()) {
                    // emap: per non-Wilson edge (offset by q), its image edge.
                    // Build transported colors in target coordinates.
                    std::vector<ExpVec> mapped(c.edges.size(), zero_color(c.rank));
                    for (int j = 0; j < q; ++j) {
                        int slot = (j - rot + q) % q;
                        mapped[slot] = c.edges[j].color;
                    }
                    for (int e = q; e < (int)c.edges.size(); ++e) {
                        int f = emap[e - q];
                        int mt = map_vertex(c.edges[e].tail);
                        const Edge& tf = c.edges[f];
                        bool same_dir;
                        if (tf.tail == tf.head) {
                            same_dir = true; // self-loop: either state, try both below
                        } else {
                            same_dir = (tf.tail == mt);
                        }
                        mapped[f] = same_dir ? c.edges[e].color : neg(c.edges[e].color);
                    }
                    if (holonomy_invariant(c, mapped) == base_inv) {
                        ++count;
                        return;
                    }
                    // Self-loops admit the reversed identification too; retry
                    // with each subset of self-loop reversals that changes
                    // the invariant test. (Cheap: loops are rare and the
                    // reversal negates that loop's color only.)
                    std::vector<int> loops;
                    for (int e = q; e < (int)c.edges.size(); ++e)
                        if (c.edges[e].tail == c.edges[e].head && !is_zero(c.edges[e].color))
                            loops.push_back(emap[e - q]);
                    std::sort(loops.begin(), loops.end());
                    loops.erase(std::unique(loops.begin(), loops.end()), loops.end());
                    int L = (int)loops.size();
                    for (int mask = 1; mask < (1 << L); ++mask) {
                        auto mm = mapped;
                        for (int b = 0; b < L; ++b)
                            if (mask & (1 << b)) mm[loops[b]] = neg(mm[loops[b]]);
                        if (holonomy_invariant(c, mm) == base_inv) {
                            ++count;
                            return;
                        }
                    }
                    return;
                }
                auto& [src, dst] = blocks[bi];
                std::vector<int> d2 = dst;
                std::sort(d2.begin(), d2.end());
                do {
                    for (size_t i = 0; i < src.size(); ++i) emap[src[i] - q] = d2[i];
                    rec(bi + 1, emap);
                } while (std::next_permutation(d2.begin(), d2.end()));
            };
            std::vector<int> emap(c.edges.size() - q, -1);
            rec(0, emap);
        } while (std::next_permutation(perm.begin(), perm.end()));
    }
    return count;
}

// ---------------------------------------------------------------------------
// Construction helpers and enumeration.

// Builds a diagram from the vertex split (q, t), non-Wilson edge list and
// Wilson colors; orientations default to the reference state.
inline Diagram make_diagram(int q, int t, int rank, const std::vector<Edge>& internal,
                            const std::vector<ExpVec>& wilson_colors) {
    Diagram d;
    d.rank = rank;
    d.q = q;
    d.t = t;
    for (int j = 0; j < q; ++j) {
        Edge e;
        e.tail = j;
        e.head = (j + 1) % q;
        e.kind = EdgeKind::W;
        e.color = wilson_colors.empty() ? zero_color(rank) : wilson_colors[j];
        d.edges.push_back(e);
    }
    for (auto e : internal) {
        if (e.color.empty()) e.color = zero_color(rank);
        e.kind = (e.tail == e.head) ? EdgeKind::Rho : EdgeKind::I;
        d.edges.push_back(e);
    }
    d.orientations.resize(t);
    for (int i = 0; i < t; ++i) {
        auto inc = d.incident_half_edges(q + i);
        if (inc.size() != 3)
            throw structural_error("trivalent vertex " + std::to_string(q + i) + " has valence " +
                                   std::to_string(inc.size()));
        std::sort(inc.begin(), inc.end(), [&](const HalfEdge& a, const HalfEdge& b) {
            return d.half_edge_id(a) < d.half_edge_id(b);
        });
        std::copy(inc.begin(), inc.end(), d.orientations[i].begin());
    }
    d.validate();
    return d;
}

// All isomorphism classes of uncolored shapes of the given degree.
std::vector<Diagram> enumerate_shapes(int degree);

// All isomorphism classes of monomial diagrams of the given degree with every
// exponent in [-K, K] (rank 1). nh_only restricts to trivial total Wilson
// color. The count is guarded by `cap` (resource_error beyond it).
std::vector<Diagram> enumerate_diagrams(int degree, int K, bool nh_only = false,
                                        int64_t cap = 50000000);

namespace detail {

inline void shape_matchings(int q, int t, std::vector<std::pair<int, int>>& stubs_of,
                            std::vector<std::pair<int, int>>& pairs, std::vector<bool>& used,
                            std::vector<int>& vertex_touched, std::vector<Diagram>& out,
                            std::set<std::vector<int64_t>>& seen) {
    // stubs_of: flat list of (vertex, stub slot). Pair the first free stub
    // with every admissible later stub; untouched trivalent vertices are
    // interchangeable, so only the first untouched one is tried.
    int first = -1;
    for (int i = 0; i < (int)stubs_of.size(); ++i)
        if (!used[i]) { first = i; break; }
    if (first < 0) {
        // Assemble and canonicalize.
        std::vector<Edge> internal;
        for (auto& [a, b] : pairs) {
            Edge e;
            e.tail = stubs_of[a].first;
            e.head = stubs_of[b].first;
            internal.push_back(e);
        }
        Diagram d;
        try {
            d = make_diagram(q, t, 1, internal, {});
        } catch (const structural_error&) {
            return; // disconnected or otherwise invalid
        }
        auto cf = canonicalize(d);
        if (seen.insert(cf.diagram.key()).second) out.push_back(cf.diagram);
        return;
    }
    used[first] = true;
    vertex_touched[stubs_of[first].first]++;
    bool skipped_untouched_trivalent = false;
    for (int j = first + 1; j < (int)stubs_of.size(); ++j) {
        if (used[j]) continue;
        int v = stubs_of[j].first;
        bool untouched_trivalent = (v >= q) && vertex_touched[v] == 0;
        if (untouched_trivalent) {
            if (skipped_untouched_trivalent) continue;
            skipped_untouched_trivalent = true; // only the first untouched one
        }
        used[j] = true;
        vertex_touched[v]++;
        pairs.push_back({first, j});
        shape_matchings(q, t, stubs_of, pairs, used, vertex_touched, out, seen);
        pairs.pop_back();
        vertex_touched[v]--;
        used[j] = false;
    }
    vertex_touched[stubs_of[first].first]--;
    used[first] = false;
}

} // namespace detail

inline std::vector<Diagram> enumerate_shapes(int degree) {
    if (degree <= 0) throw argument_error("degree must be positive");
    if (degree > 3) throw argument_error("degree > 3 unsupported (practical bound)");
    std::vector<Diagram> out;
    std::set<std::vector<int64_t>> seen;
    for (int q = 1; q <= 2 * degree; ++q) {
        int t = 2 * degree - q;
        std::vector<std::pair<int, int>> stubs;
        for (int u = 0; u < q; ++u) stubs.push_back({u, 0});
        for (int w = 0; w < t; ++w)
            for (int s = 0; s < 3; ++s) stubs.push_back({q + w, s});
        std::vector<bool> used(stubs.size(), false);
        std::vector<int> touched(q + t, 0);
        std::vector<std::pair<int, int>> pairs;
        detail::shape_matchings(q, t, stubs, pairs, used, touched, out, seen);
    }
    std::sort(out.begin(), out.end());
    return out;
}

inline std::vector<Diagram> enumerate_diagrams(int degree, int K, bool nh_only, int64_t cap) {
    if (degree <= 0) throw argument_error("degree must be positive");
    if (degree > 3) throw argument_error("degree > 3 unsupported (practical bound)");
    if (K < 0) throw argument_error("window bound K must be >= 0");
    auto shapes = enumerate_shapes(degree);
    int E = 3 * degree;
    int64_t per_shape = 1;
    for (int i = 0; i < E; ++i) {
        per_shape *= (2 * (int64_t)K + 1);
        if (per_shape > cap) throw resource_error("coloring enumeration exceeds resource cap");
    }
    if (per_shape * (int64_t)shapes.size() > cap)
        throw resource_error("coloring enumeration exceeds resource cap");

    std::set<std::vector<int64_t>> seen;
    std::vector<Diagram> out;
    for (auto& shape : shapes) {
        std::vector<int> exps(E, -K);
        while (true) {
            // Apply exponents; Wilson edges first.
            bool nh_ok = true;
            if (nh_only) {
                int s = 0;
                for (int j = 0; j < shape.q; ++j) s += exps[j];
                nh_ok = (s == 0);
            }
            if (nh_ok) {
                Diagram d = shape;
                for (int e = 0; e < E; ++e) d.edges[e].color = ExpVec{exps[e]};
                d.set_key({});
                auto cf = canonicalize(d);
                // Sign 0 means the class is already zero (an automorphism
                // reverses it); such diagrams are not classes and would
                // otherwise sit in the span untouched by any relation.
                if (cf.sign != 0 && seen.insert(cf.diagram.key()).second)
                    out.push_back(cf.diagram);
            }
            int i = E - 1;
            while (i >= 0 && exps[i] == K) exps[i--] = -K;
            if (i < 0) break;
            exps[i]++;
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

// Every cycle has trivial total color (colors are a coboundary).
inline bool nullhomotopic(const Diagram& d) {
    std::vector<ExpVec> colors;
    for (auto& e : d.edges) colors.push_back(e.color);
    auto inv = holonomy_invariant(d, colors);
    return std::all_of(inv.begin(), inv.end(), [](int64_t x) { return x == 0; });
}

// Splice the Wilson loops at the chosen arcs (Wilson edge indices). Without
// explicit arcs the first summand must be nullhomotopic (the sum is then
// arc-independent); otherwise the choice matters and is required.
inline Diagram connected_sum(const Diagram& g1, const Diagram& g2, std::optional<int> arc1 = {},
                             std::optional<int> arc2 = {}) {
    if (g1.rank != g2.rank) throw argument_error("connected_sum: rank mismatch");
    if (!arc1.has_value() || !arc2.has_value()) {
        if (!nullhomotopic(g1))
            throw ambiguity_error(
                "connected_sum: first summand is not nullhomotopic; explicit arcs required");
    }
    int a1 = arc1.value_or(0), a2 = arc2.value_or(0);
    if (a1 < 0 || a1 >= g1.q || a2 < 0 || a2 >= g2.q)
        throw argument_error("connected_sum: arc selector out of range");
    const int q1 = g1.q, q2 = g2.q;
    Diagram d;
    d.rank = g1.rank;
    d.q = q1 + q2;
    d.t = g1.t + g2.t;
    // New univalent order: g1's cycle starting after arc a1, then g2's cycle
    // starting after arc a2.
    std::vector<int> map1(g1.vertex_count()), map2(g2.vertex_count());
    for (int i = 0; i < q1; ++i) map1[(a1 + 1 + i) % q1] = i;
    for (int i = 0; i < q2; ++i) map2[(a2 + 1 + i) % q2] = q1 + i;
    for (int w = 0; w < g1.t; ++w) map1[q1 + w] = d.q + w;
    for (int w = 0; w < g2.t; ++w) map2[q2 + w] = d.q + g1.t + w;

    // Wilson edges of the sum, in new cycle order. Arc j of g1 (j != a1) runs
    // between consecutive new labels; the bridges inherit the cut arcs'
    // colors.
    std::vector<ExpVec> wcolors(d.q);
    for (int i = 0; i < q1 - 1; ++i) wcolors[i] = g1.edges[(a1 + 1 + i) % q1].color;
    wcolors[q1 - 1] = g1.edges[a1].color;
    for (int i = 0; i < q2 - 1; ++i) wcolors[q1 + i] = g2.edges[(a2 + 1 + i) % q2].color;
    wcolors[d.q - 1] = g2.edges[a2].color;

    for (int j = 0; j < d.q; ++j) {
        Edge e;
        e.tail = j;
        e.head = (j + 1) % d.q;
        e.kind = EdgeKind::W;
        e.color = wcolors[j];
        d.edges.push_back(e);
    }
    // Internal edges keep their stored direction; record the edge index map
    // so vertex orientations transport intact (they only touch internal
    // edges, Wilson edges having univalent endpoints).
    std::vector<int> emap1(g1.edges.size(), -1), emap2(g2.edges.size(), -1);
    auto add_internal = [&](const Diagram& g, const std::vector<int>& map, std::vector<int>& emap) {
        for (int e = g.q; e < (int)g.edges.size(); ++e) {
            Edge ne = g.edges[e];
            ne.tail = map[ne.tail];
            ne.head = map[ne.head];
            emap[e] = (int)d.edges.size();
            d.edges.push_back(ne);
        }
    };
    add_internal(g1, map1, emap1);
    add_internal(g2, map2, emap2);
    d.orientations.resize(d.t);
    for (int w = 0; w < g1.t; ++w)
        d.orientations[w] = {HalfEdge{emap1[g1.orientations[w][0].edge], g1.orientations[w][0].end},
                             HalfEdge{emap1[g1.orientations[w][1].edge], g1.orientations[w][1].end},
                             HalfEdge{emap1[g1.orientations[w][2].edge], g1.orientations[w][2].end}};
    for (int w = 0; w < g2.t; ++w)
        d.orientations[g1.t + w] = {
            HalfEdge{emap2[g2.orientations[w][0].edge], g2.orientations[w][0].end},
            HalfEdge{emap2[g2.orientations[w][1].edge], g2.orientations[w][1].end},
            HalfEdge{emap2[g2.orientations[w][2].edge], g2.orientations[w][2].end}};
    d.validate();
    return d;
}

} // namespace knotforge
