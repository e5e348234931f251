#pragma once

#include <algorithm>
#include <cstdlib>
#include <map>
#include <string>
#include <vector>

#include "knotforge/diagram.hpp"
#include "knotforge/diagram_vector.hpp"
#include "knotforge/parallel.hpp"
#include "knotforge/relations.hpp"

namespace knotforge {

struct Window {
    int degree = 1;
    int K = 1;
    bool nh_only = false;
    RelationOptions opts;
};

inline int64_t resource_cap() {
    if (const char* s = std::getenv("KNOTFORGE_RESOURCE_CAP")) {
        char* end = nullptr;
        long long v = std::strtoll(s, &end, 10);
        if (end && *end == '\0' && v > 0) return (int64_t)v;
    }
    return 50000000;
}

// Exact quotient of the window's free ℚ-module by the generated relations.
// Columns are the canonical window diagrams in pivot-preference order
// (heaviest truncation weight first, then encoding); the reduced matrix sends
// any window vector to its unique normal form supported on non-pivot columns.
class QuotientSpace {
public:
    Window window;
    std::vector<Diagram> columns;                                // pivot-preference order
    std::vector<std::vector<std::pair<int, Rational>>> rows;     // RREF, sparse, col-sorted
    std::vector<int> pivot_row_of_col;                           // -1 for basis columns
    std::vector<Diagram> basis;                                  // non-pivot columns
    int64_t relation_count = 0;

    int dimension() const { return (int)basis.size(); }

    int column_of(const Diagram& canonical) const {
        auto it = col_index_.find(canonical);
        return it == col_index_.end() ? -1 : it->second;
    }

    // Normal form of a window vector; window-error when any diagram (after
    // canonicalization) falls outside the window.
    DiagramVector reduce(const DiagramVector& v) const {
        std::map<int, Rational> coords;
        for (auto& [d, c] : v.terms()) {
            if (d.degree() != window.degree)
                throw window_error("reduce: diagram degree " + std::to_string(d.degree()) +
                                   " does not match window degree " +
                                   std::to_string(window.degree));
            int col = column_of(d);
            if (col < 0)
                throw window_error("reduce: diagram outside window (enlarge K): " + d.brief());
            coords[col] = coords.count(col) ? coords[col] + c : c;
        }
        // One pass suffices: RREF rows touch their pivot and basis columns only.
        DiagramVector out;
        for (auto& [col, c] : coords) {
            if (c == Rational(0)) continue;
            int r = pivot_row_of_col[col];
            if (r < 0) {
                out.add_canonical(columns[col], c);
                continue;
            }
            for (auto& [rc, rcoef] : rows[r]) {
                if (rc == col) continue; // pivot entry, coefficient 1
                int rr = pivot_row_of_col[rc];
                (void)rr; // basis column by RREF shape
                out.add_canonical(columns[rc], -(c * rcoef));
            }
        }
        return out;
    }

    DiagramVector reduce(const Diagram& d) const {
        DiagramVector v;
        v.add(d, Rational(1));
        return reduce(v);
    }

private:
    friend QuotientSpace build_quotient(const Window&, int, const std::vector<RelationInstance>*);
    std::map<Diagram, int> col_index_;
};

// Builds the windowed quotient. Relation generation fans out across threads
// per source diagram; the assembled matrix, hence the RREF, is independent of
// the thread count. `injected` replaces generated relations (tests only).
inline QuotientSpace build_quotient(const Window& w, int threads = 1,
                                    const std::vector<RelationInstance>* injected = nullptr) {
    const int64_t cap = resource_cap();
    QuotientSpace qs;
    qs.window = w;
    qs.columns = enumerate_diagrams(w.degree, w.K, w.nh_only, cap);
    // Pivot preference: heaviest first, then encoding order; elimination
    // therefore leaves minimal-weight representatives in the basis.
    std::sort(qs.columns.begin(), qs.columns.end(), [](const Diagram& a, const Diagram& b) {
        int64_t wa = a.weight(), wb = b.weight();
        if (wa != wb) return wa > wb;
        return a.key() < b.key();
    });
    const int ncols = (int)qs.columns.size();
    if ((int64_t)ncols * 8 > cap) throw resource_error("window too large: column count");
    for (int i = 0; i < ncols; ++i) qs.col_index_.emplace(qs.columns[i], i);

    std::vector<RelationInstance> relations;
    if (injected) {
        relations = *injected;
    } else {
        auto chunks = parallel_map<std::vector<RelationInstance>>(
            (int64_t)ncols, resolve_threads(threads), [&](int64_t i) {
                return generate_relations({qs.columns[(size_t)i]}, w.K, w.opts);
            });
        for (auto& ch : chunks)
            for (auto& r : ch) relations.push_back(std::move(r));
    }
    qs.relation_count = (int64_t)relations.size();
    if ((int64_t)relations.size() * 4 > cap)
        throw resource_error("window too large: relation count");

    // Sparse rows in column coordinates.
    std::vector<std::vector<std::pair<int, Rational>>> raw_rows;
    for (auto& r : relations) {
        std::vector<std::pair<int, Rational>> row;
        for (auto& [d, c] : r.vec.terms()) {
            int col = qs.column_of(d);
            if (col < 0)
                throw consistency_error("relation term escaped the window: " + d.brief());
            row.push_back({col, c});
        }
        if (row.empty()) continue;
        std::sort(row.begin(), row.end(),
                  [](auto& a, auto& b) { return a.first < b.first; });
        raw_rows.push_back(std::move(row));
    }
    std::sort(raw_rows.begin(), raw_rows.end());
    raw_rows.erase(std::unique(raw_rows.begin(), raw_rows.end()), raw_rows.end());

    // Gaussian elimination to RREF with exact rationals.
    qs.pivot_row_of_col.assign(ncols, -1);
    for (auto& raw : raw_rows) {
        std::map<int, Rational> acc(raw.begin(), raw.end());
        while (!acc.empty()) {
            int lead = acc.begin()->first;
            int pr = qs.pivot_row_of_col[lead];
            if (pr < 0) break;
            Rational f = acc.begin()->second;
            for (auto& [col, coef] : qs.rows[pr]) {
                auto it = acc.find(col);
                Rational nv = (it == acc.end() ? Rational(0) : it->second) - f * coef;
                if (nv == Rational(0)) {
                    if (it != acc.end()) acc.erase(it);
                } else {
                    acc[col] = nv;
                }
            }
        }
        if (acc.empty()) continue;
        Rational lead = acc.begin()->second;
        std::vector<std::pair<int, Rational>> row;
        for (auto& [col, coef] : acc) row.push_back({col, coef / lead});
        qs.pivot_row_of_col[row.front().first] = (int)qs.rows.size();
        qs.rows.push_back(std::move(row));
    }
    // Back-substitution: clear pivot columns from other rows.
    for (int r = 0; r < (int)qs.rows.size(); ++r) {
        std::map<int, Rational> acc(qs.rows[r].begin(), qs.rows[r].end());
        bool changed = true;
        while (changed) {
            changed = false;
            for (auto it = std::next(acc.begin()); it != acc.end(); ++it) {
                int pr = qs.pivot_row_of_col[it->first];
                if (pr < 0 || pr == r) continue;
                Rational f = it->second;
                for (auto& [col, coef] : qs.rows[pr]) {
                    auto jt = acc.find(col);
                    Rational nv = (jt == acc.end() ? Rational(0) : jt->second) - f * coef;
                    if (nv == Rational(0)) {
                        if (jt != acc.end()) acc.erase(jt);
                    } else {
                        acc[col] = nv;
                    }
                }
                changed = true;
                break;
            }
        }
        qs.rows[r].assign(acc.begin(), acc.end());
    }
    for (int c = 0; c < ncols; ++c)
        if (qs.pivot_row_of_col[c] < 0) qs.basis.push_back(qs.columns[c]);
    return qs;
}

// Truncation soundness: reducing first in window K and re-reducing in window
// K+2 agrees with reducing directly in window K+2, over every diagram whose
// exponents fit in K-2. Returns the number of diagrams checked.
inline int64_t stabilization_check(int degree, int K, bool nh_only,
                                   const RelationOptions& opts = {}, int threads = 1) {
    Window wk{degree, K, nh_only, opts};
    Window wk2{degree, K + 2, nh_only, opts};
    QuotientSpace qk = build_quotient(wk, threads);
    QuotientSpace qk2 = build_quotient(wk2, threads);
    int64_t checked = 0;
    for (const Diagram& d : qk.columns) {
        if (!d.within_window(K - 2)) continue;
        DiagramVector via_k = qk2.reduce(qk.reduce(d));
        DiagramVector direct = qk2.reduce(d);
        if (via_k != direct)
            throw consistency_error("stabilization failure at " + d.brief());
        ++checked;
    }
    return checked;
}

} // namespace knotforge
