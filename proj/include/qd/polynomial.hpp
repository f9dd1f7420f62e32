#pragma once

#include "qd/errors.hpp"
#include "qd/expr.hpp"
#include "qd/shape.hpp"

#include <map>
#include <numeric>
#include <vector>

namespace qd {

/// Exponent vector over the registry slots (x_1..x_m, z_1..z_n, z); the
/// std::map keying gives a fixed lexicographic monomial order.
using Monomial = std::vector<int>;
using Poly = std::map<Monomial, Rat>;

inline int total_degree(const Poly& p) {
    int deg = 0;
    for (const auto& [mono, c] : p) {
        (void)c;
        deg = std::max(deg, std::accumulate(mono.begin(), mono.end(), 0));
    }
    return deg;
}

inline Rat eval_poly(const Poly& p, const Point& pt) {
    Rat out(0);
    for (const auto& [mono, c] : p) {
        Rat term = c;
        for (std::size_t i = 0; i < mono.size(); ++i)
            if (mono[i] != 0) term *= pt.values[i].pow(mono[i]);
        out += term;
    }
    return out;
}

/// A rational function in canonical sparse form: numerator / denominator with
/// the denominator's first monomial coefficient scaled to one.
struct PolyPair {
    Poly num;
    Poly den;

    /// Equality as rational functions, by cross-multiplication.
    friend bool equal_as_rational(const PolyPair& a, const PolyPair& b) {
        return multiply(a.num, b.den) == multiply(b.num, a.den);
    }

    static Poly multiply(const Poly& a, const Poly& b) {
        Poly out;
        for (const auto& [ma, ca] : a)
            for (const auto& [mb, cb] : b) {
                Monomial m(ma.size());
                for (std::size_t i = 0; i < m.size(); ++i) m[i] = ma[i] + mb[i];
                Rat& slot = out[m];
                slot += ca * cb;
                if (slot.is_zero()) out.erase(m);
            }
        return out;
    }
};

namespace detail {

struct Expander {
    int vars;
    int max_degree;

    Poly one() const { return {{Monomial(static_cast<std::size_t>(vars), 0), Rat(1)}}; }

    void guard(const Poly& p) const {
        if (total_degree(p) > max_degree)
            throw DegreeOverflow("expand_small: degree budget exceeded");
    }

    Poly add(const Poly& a, const Poly& b) const {
        Poly out = a;
        for (const auto& [m, c] : b) {
            Rat& slot = out[m];
            slot += c;
            if (slot.is_zero()) out.erase(m);
        }
        guard(out);
        return out;
    }

    Poly mul(const Poly& a, const Poly& b) const {
        Poly out = PolyPair::multiply(a, b);
        guard(out);
        return out;
    }

    PolyPair expand(const Expr& e, const ModelShape& shape) const {
        const ExprNode& n = e.node();
        switch (n.tag) {
        case ExprNode::Tag::Const: {
            Poly p;
            if (!n.value.is_zero()) p[Monomial(static_cast<std::size_t>(vars), 0)] = n.value;
            return {p, one()};
        }
        case ExprNode::Tag::Variable: {
            Point probe;
            probe.m = shape.m;
            probe.n = shape.n;
            Monomial m(static_cast<std::size_t>(vars), 0);
            m[static_cast<std::size_t>(probe.slot(n.var))] = 1;
            return {{{m, Rat(1)}}, one()};
        }
        case ExprNode::Tag::Sum: {
            PolyPair acc{Poly{}, one()};
            for (const auto& k : n.kids) {
                PolyPair kp = expand(k, shape);
                acc = {add(mul(acc.num, kp.den), mul(kp.num, acc.den)), mul(acc.den, kp.den)};
            }
            return normalize(acc);
        }
        case ExprNode::Tag::Product: {
            PolyPair acc{one(), one()};
            for (const auto& k : n.kids) {
                PolyPair kp = expand(k, shape);
                acc = {mul(acc.num, kp.num), mul(acc.den, kp.den)};
            }
            return normalize(acc);
        }
        case ExprNode::Tag::Quotient: {
            PolyPair a = expand(n.kids[0], shape);
            PolyPair b = expand(n.kids[1], shape);
            if (b.num.empty()) throw DivisionByZero(e);
            return normalize({mul(a.num, b.den), mul(a.den, b.num)});
        }
        case ExprNode::Tag::Pow: {
            PolyPair b = expand(n.kids[0], shape);
            int k = n.exponent;
            if (k < 0) {
                if (b.num.empty()) throw DivisionByZero(e);
                std::swap(b.num, b.den);
                k = -k;
            }
            PolyPair acc{one(), one()};
            for (int i = 0; i < k; ++i) acc = {mul(acc.num, b.num), mul(acc.den, b.den)};
            return normalize(acc);
        }
        }
        throw Error("expand_small: unreachable");
    }

    static PolyPair normalize(PolyPair p) {
        if (p.den.empty()) throw Error("expand_small: zero denominator polynomial");
        Rat lead = p.den.begin()->second;
        if (!lead.is_one()) {
            for (auto& [m, c] : p.num) { (void)m; c /= lead; }
            for (auto& [m, c] : p.den) { (void)m; c /= lead; }
        }
        return p;
    }
};

} // namespace detail

/// Expand an expression into a canonical numerator/denominator polynomial
/// pair. Intended for tiny shapes (m + n <= 5); throws DegreeOverflow when
/// any intermediate exceeds max_degree, in which case the caller should fall
/// back to evaluation at sampled points.
inline PolyPair expand_small(const Expr& e, const ModelShape& shape, int max_degree) {
    detail::Expander ex{shape.registry_size(), max_degree};
    return detail::Expander::normalize(ex.expand(e, shape));
}

} // namespace qd
