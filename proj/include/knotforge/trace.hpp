#pragma once

#include <functional>
#include <map>
#include <string>
#include <vector>

#include "knotforge/diagram.hpp"
#include "knotforge/diagram_vector.hpp"
#include "knotforge/laurent.hpp"
#include "knotforge/quotient.hpp"

namespace knotforge {

// Class with rational-function edge colors, held as a cleared-denominator
// pair. Equality is cross-multiplied reduction inside a quotient window.
struct TracedClass {
    LaurentPoly D = LaurentPoly(1);
    DiagramVector numerator;

    bool is_zero() const { return numerator.empty(); }
    std::string str() const { return "(" + D.str() + ") \\ " + numerator.brief(); }
};

// t^k acting on a class shifts the color of its unique non-Wilson edge by k.
inline DiagramVector poly_action(const LaurentPoly& f, const DiagramVector& v) {
    DiagramVector out;
    for (auto& [d, c] : v.terms()) {
        if ((int)d.edges.size() - d.q != 1)
            throw ambiguity_error("poly_action: diagram must have exactly one non-Wilson edge");
        for (auto& [k, a] : f.coeffs()) {
            Diagram shifted = d;
            shifted.edges[d.q].color[0] += k;
            shifted.set_key({});
            out.add(shifted, c * a);
        }
    }
    return out;
}

// Substitute one rational function per edge (t_i -> t), multilinearly in each
// edge color; edges absent from the map default to the identity substitution.
// The result is the pair (product of denominators, expanded numerator vector)
// where each numerator monomial choice adds its exponent to the edge color.
inline TracedClass trace(const Diagram& shape, const std::map<int, RationalFn>& edge_fns) {
    if (shape.rank != 1) throw argument_error("trace: rank-1 colors required");
    TracedClass out;
    std::vector<int> touched;
    std::vector<LaurentPoly> nums;
    for (auto& [e, fn] : edge_fns) {
        if (e < 0 || e >= (int)shape.edges.size())
            throw argument_error("trace: edge index out of range");
        out.D = out.D * fn.den();
        touched.push_back(e);
        nums.push_back(fn.num());
    }
    // Multilinear expansion over the numerator monomials of each edge.
    DiagramVector acc;
    std::vector<std::map<int, Rational>::const_iterator> its;
    std::function<void(size_t, Diagram, Rational)> walk =
        [&](size_t i, Diagram d, Rational coeff) {
            if (coeff == Rational(0)) return;
            if (i == touched.size()) {
                d.set_key({});
                acc.add(d, coeff);
                return;
            }
            if (nums[i].is_zero()) return;
            for (auto& [k, a] : nums[i].coeffs()) {
                Diagram next = d;
                next.edges[touched[i]].color[0] += k;
                walk(i + 1, std::move(next), coeff * a);
            }
        };
    walk(0, shape, Rational(1));
    out.numerator = std::move(acc);
    return out;
}

// D2 ⊙ N1 − D1 ⊙ N2 reduces to 0 exactly when the two classes agree.
inline bool traced_equal(const TracedClass& a, const TracedClass& b, const QuotientSpace& qs) {
    DiagramVector diff = poly_action(b.D, a.numerator);
    diff -= poly_action(a.D, b.numerator);
    return qs.reduce(diff).empty();
}

} // namespace knotforge
