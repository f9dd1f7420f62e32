#pragma once

#include "qd/errors.hpp"
#include "qd/rational.hpp"

#include <memory>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

namespace qd {

/// Formal variables: x_i (dual Chern roots of the split bundle E),
/// z_k (dual Chern roots of F) and the single loop-space variable z.
enum class VarKind { X, Zk, Zgiv };

struct Var {
    VarKind kind = VarKind::Zgiv;
    int index = 0; // 1-based for X/Zk, 0 for Zgiv

    static Var x(int i) { return {VarKind::X, i}; }
    static Var zk(int k) { return {VarKind::Zk, k}; }
    static Var zgiv() { return {VarKind::Zgiv, 0}; }

    friend bool operator==(const Var& a, const Var& b) {
        return a.kind == b.kind && a.index == b.index;
    }
    friend bool operator!=(const Var& a, const Var& b) { return !(a == b); }
};

inline std::string to_string(const Var& v) {
    switch (v.kind) {
    case VarKind::X: return "x" + std::to_string(v.index);
    case VarKind::Zk: return "z" + std::to_string(v.index);
    default: return "z";
    }
}

class Expr;

/// Immutable expression node. Sum/Product are n-ary, Quotient binary, Pow unary
/// with an integer exponent. Nodes are shared freely across expressions.
struct ExprNode {
    enum class Tag { Const, Variable, Sum, Product, Quotient, Pow };
    Tag tag = Tag::Const;
    Rat value;
    Var var;
    std::vector<Expr> kids;
    int exponent = 0;
};

/// Value-semantic handle to an immutable expression tree.
class Expr {
public:
    Expr() : Expr(constant(Rat(0))) {}

    static Expr constant(Rat v) {
        auto n = std::make_shared<ExprNode>();
        n->tag = ExprNode::Tag::Const;
        n->value = std::move(v);
        return Expr(std::move(n));
    }
    static Expr from_int(long v) { return constant(Rat(v)); }
    static Expr variable(Var v) {
        auto n = std::make_shared<ExprNode>();
        n->tag = ExprNode::Tag::Variable;
        n->var = v;
        return Expr(std::move(n));
    }

    /// n-ary sum; folds constants and drops zeros. Nested sums are kept as
    /// subtrees so shared nodes (the shifted roots in particular) stay
    /// recognizable by identity.
    static Expr sum(std::vector<Expr> kids) {
        std::vector<Expr> flat;
        Rat c(0);
        for (auto& k : kids) {
            if (k.tag() == ExprNode::Tag::Const) {
                c += k.node().value;
            } else {
                flat.push_back(std::move(k));
            }
        }
        if (!c.is_zero() || flat.empty()) flat.push_back(constant(c));
        if (flat.size() == 1) return flat[0];
        auto n = std::make_shared<ExprNode>();
        n->tag = ExprNode::Tag::Sum;
        n->kids = std::move(flat);
        return Expr(std::move(n));
    }

    /// n-ary product; flattens, folds constants, absorbs exact zeros.
    static Expr product(std::vector<Expr> kids) {
        std::vector<Expr> flat;
        Rat c(1);
        for (auto& k : kids) {
            if (k.tag() == ExprNode::Tag::Const) {
                if (k.node().value.is_zero()) return constant(Rat(0));
                c *= k.node().value;
            } else if (k.tag() == ExprNode::Tag::Product) {
                for (const auto& kk : k.node().kids) flat.push_back(kk);
            } else {
                flat.push_back(std::move(k));
            }
        }
        if (flat.empty()) return constant(c);
        if (!c.is_one()) flat.insert(flat.begin(), constant(c));
        if (flat.size() == 1) return flat[0];
        auto n = std::make_shared<ExprNode>();
        n->tag = ExprNode::Tag::Product;
        n->kids = std::move(flat);
        return Expr(std::move(n));
    }

    static Expr quotient(Expr num, Expr den) {
        if (den.tag() == ExprNode::Tag::Const) {
            if (den.node().value.is_zero())
                throw std::domain_error("Expr: quotient by the zero constant");
            return product({constant(Rat(1) / den.node().value), std::move(num)});
        }
        if (num.tag() == ExprNode::Tag::Const && num.node().value.is_zero())
            return constant(Rat(0)); // 0/g == 0 as a rational function
        auto n = std::make_shared<ExprNode>();
        n->tag = ExprNode::Tag::Quotient;
        n->kids = {std::move(num), std::move(den)};
        return Expr(std::move(n));
    }

    static Expr pow(Expr base, int e) {
        if (e == 0) return constant(Rat(1));
        if (e == 1) return base;
        if (base.tag() == ExprNode::Tag::Const) return constant(base.node().value.pow(e));
        auto n = std::make_shared<ExprNode>();
        n->tag = ExprNode::Tag::Pow;
        n->kids = {std::move(base)};
        n->exponent = e;
        return Expr(std::move(n));
    }

    const ExprNode& node() const { return *node_; }
    const ExprNode* raw() const { return node_.get(); }
    ExprNode::Tag tag() const { return node_->tag; }

    bool is_const() const { return tag() == ExprNode::Tag::Const; }
    bool is_const_zero() const { return is_const() && node().value.is_zero(); }
    bool is_const_one() const { return is_const() && node().value.is_one(); }

    /// Node count with shared subtrees counted once.
    std::size_t size() const {
        std::unordered_set<const ExprNode*> seen;
        count_nodes(*this, seen);
        return seen.size();
    }

private:
    explicit Expr(std::shared_ptr<const ExprNode> n) : node_(std::move(n)) {}

    static void count_nodes(const Expr& e, std::unordered_set<const ExprNode*>& seen) {
        if (!seen.insert(e.raw()).second) return;
        for (const auto& k : e.node().kids) count_nodes(k, seen);
    }

    std::shared_ptr<const ExprNode> node_;
};

inline Expr operator+(const Expr& a, const Expr& b) { return Expr::sum({a, b}); }
inline Expr operator-(const Expr& a) { return Expr::product({Expr::from_int(-1), a}); }
inline Expr operator-(const Expr& a, const Expr& b) { return Expr::sum({a, -b}); }
inline Expr operator*(const Expr& a, const Expr& b) { return Expr::product({a, b}); }
inline Expr operator/(const Expr& a, const Expr& b) { return Expr::quotient(a, b); }

/// Total assignment of variables for one evaluation: x_1..x_m, z_1..z_n, z.
struct Point {
    int m = 0;
    int n = 0;
    std::vector<Rat> values; // size m + n + 1, registry order

    int slot(const Var& v) const {
        switch (v.kind) {
        case VarKind::X:
            if (v.index < 1 || v.index > m) throw IndexOutOfRange("Point: x index out of range");
            return v.index - 1;
        case VarKind::Zk:
            if (v.index < 1 || v.index > n) throw IndexOutOfRange("Point: z_k index out of range");
            return m + v.index - 1;
        default:
            return m + n;
        }
    }
    const Rat& value(const Var& v) const { return values.at(static_cast<std::size_t>(slot(v))); }
};

inline std::string to_string(const Expr& e);

/// Raised when evaluation meets a vanishing divisor; carries the offending
/// subexpression so the caller can resample the point.
struct DivisionByZero : Error {
    Expr offending;
    explicit DivisionByZero(Expr e)
        : Error("division by zero while evaluating " + to_string(e)), offending(std::move(e)) {}
};

/// Memoizing evaluator for one fixed point; exact, pure, deterministic.
class Evaluator {
public:
    explicit Evaluator(const Point& p) : pt_(&p) {}

    Rat eval(const Expr& e) {
        auto it = memo_.find(e.raw());
        if (it != memo_.end()) return it->second;
        Rat out = compute(e);
        memo_.emplace(e.raw(), out);
        return out;
    }

private:
    Rat compute(const Expr& e) {
        const ExprNode& n = e.node();
        switch (n.tag) {
        case ExprNode::Tag::Const: return n.value;
        case ExprNode::Tag::Variable: return pt_->value(n.var);
        case ExprNode::Tag::Sum: {
            Rat acc(0);
            for (const auto& k : n.kids) acc += eval(k);
            return acc;
        }
        case ExprNode::Tag::Product: {
            // evaluate every factor first so a pole in any factor surfaces
            // even when another factor vanishes
            Rat acc(1);
            bool zero = false;
            for (const auto& k : n.kids) {
                Rat v = eval(k);
                if (v.is_zero()) zero = true;
                else if (!zero) acc *= v;
            }
            return zero ? Rat(0) : acc;
        }
        case ExprNode::Tag::Quotient: {
            Rat den = eval(n.kids[1]);
            if (den.is_zero()) throw DivisionByZero(e);
            return eval(n.kids[0]) / den;
        }
        case ExprNode::Tag::Pow: {
            Rat base = eval(n.kids[0]);
            if (base.is_zero() && n.exponent < 0) throw DivisionByZero(e);
            return base.pow(n.exponent);
        }
        }
        throw Error("Evaluator: unreachable");
    }

    const Point* pt_;
    std::unordered_map<const ExprNode*, Rat> memo_;
};

inline Rat eval(const Expr& e, const Point& p) {
    Evaluator ev(p);
    return ev.eval(e);
}

namespace detail {
inline void print_expr(const Expr& e, std::string& out) {
    const ExprNode& n = e.node();
    switch (n.tag) {
    case ExprNode::Tag::Const:
        out += n.value.str();
        return;
    case ExprNode::Tag::Variable:
        out += to_string(n.var);
        return;
    case ExprNode::Tag::Sum: {
        out += '(';
        for (std::size_t i = 0; i < n.kids.size(); ++i) {
            if (i) out += " + ";
            print_expr(n.kids[i], out);
        }
        out += ')';
        return;
    }
    case ExprNode::Tag::Product: {
        out += '(';
        for (std::size_t i = 0; i < n.kids.size(); ++i) {
            if (i) out += "*";
            print_expr(n.kids[i], out);
        }
        out += ')';
        return;
    }
    case ExprNode::Tag::Quotient:
        out += '(';
        print_expr(n.kids[0], out);
        out += ")/(";
        print_expr(n.kids[1], out);
        out += ')';
        return;
    case ExprNode::Tag::Pow:
        out += '(';
        print_expr(n.kids[0], out);
        out += ")^";
        out += std::to_string(n.exponent);
        return;
    }
}
} // namespace detail

inline std::string to_string(const Expr& e) {
    std::string out;
    detail::print_expr(e, out);
    return out;
}

/// Rebuild an expression with every x_i relabelled to x_{image[i-1]}.
/// Used to move formulas between torus-fixed points.
inline Expr rename_x(const Expr& e, const std::vector<int>& image) {
    std::unordered_map<const ExprNode*, Expr> memo;
    struct Walker {
        const std::vector<int>& image;
        std::unordered_map<const ExprNode*, Expr>& memo;
        Expr walk(const Expr& e) {
            auto it = memo.find(e.raw());
            if (it != memo.end()) return it->second;
            const ExprNode& n = e.node();
            Expr out = e;
            switch (n.tag) {
            case ExprNode::Tag::Const: break;
            case ExprNode::Tag::Variable:
                if (n.var.kind == VarKind::X) {
                    int i = n.var.index;
                    if (i < 1 || i > static_cast<int>(image.size()))
                        throw IndexOutOfRange("rename_x: index out of range");
                    out = Expr::variable(Var::x(image[static_cast<std::size_t>(i) - 1]));
                }
                break;
            case ExprNode::Tag::Sum:
            case ExprNode::Tag::Product:
            case ExprNode::Tag::Quotient: {
                std::vector<Expr> kids;
                kids.reserve(n.kids.size());
                for (const auto& k : n.kids) kids.push_back(walk(k));
                out = n.tag == ExprNode::Tag::Sum      ? Expr::sum(std::move(kids))
                      : n.tag == ExprNode::Tag::Product ? Expr::product(std::move(kids))
                                                        : Expr::quotient(kids[0], kids[1]);
                break;
            }
            case ExprNode::Tag::Pow:
                out = Expr::pow(walk(n.kids[0]), n.exponent);
                break;
            }
            memo.emplace(e.raw(), out);
            return out;
        }
    } w{image, memo};
    return w.walk(e);
}

} // namespace qd
