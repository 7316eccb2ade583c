#pragma once

#include <memory>
#include <utility>
#include <variant>
#include <vector>

#include "quatode/linop.hpp"
#include "quatode/quaternion.hpp"

namespace quatode {

namespace qexpr_detail {

struct Node;
using NodePtr = std::shared_ptr<const Node>;

struct ConstNode { Quaternion c; };
struct MonomialNode { int m; };
struct ExpNode { Quaternion q; };
struct SumNode { std::vector<NodePtr> terms; };
struct ProdNode { NodePtr left, right; };
struct LeftScaleNode { Quaternion c; NodePtr inner; };
struct RightScaleNode { NodePtr inner; Quaternion c; };
struct ApplyOpNode { LinOp op; NodePtr inner; };

struct Node {
    std::variant<ConstNode, MonomialNode, ExpNode, SumNode, ProdNode,
                 LeftScaleNode, RightScaleNode, ApplyOpNode> v;
};

Quaternion eval(const NodePtr& n, double x);
NodePtr diff(const NodePtr& n);

inline bool is_zero(const NodePtr& n) {
    if (const auto* c = std::get_if<ConstNode>(&n->v)) return c->c == Quaternion{};
    return false;
}

inline NodePtr make(Node n) { return std::make_shared<const Node>(std::move(n)); }

inline NodePtr make_const(const Quaternion& c) { return make(Node{ConstNode{c}}); }

inline NodePtr make_sum(std::vector<NodePtr> terms) {
    std::vector<NodePtr> kept;
    for (auto& t : terms)
        if (!is_zero(t)) kept.push_back(std::move(t));
    if (kept.empty()) return make_const(Quaternion{});
    if (kept.size() == 1) return kept.front();
    return make(Node{SumNode{std::move(kept)}});
}

inline NodePtr make_prod(NodePtr left, NodePtr right) {
    if (is_zero(left) || is_zero(right)) return make_const(Quaternion{});
    return make(Node{ProdNode{std::move(left), std::move(right)}});
}

inline NodePtr make_left_scale(const Quaternion& c, NodePtr inner) {
    if (c == Quaternion{} || is_zero(inner)) return make_const(Quaternion{});
    return make(Node{LeftScaleNode{c, std::move(inner)}});
}

inline NodePtr make_right_scale(NodePtr inner, const Quaternion& c) {
    if (c == Quaternion{} || is_zero(inner)) return make_const(Quaternion{});
    return make(Node{RightScaleNode{std::move(inner), c}});
}

inline NodePtr make_apply_op(const LinOp& op, NodePtr inner) {
    if (is_zero(inner)) return make_const(Quaternion{});
    return make(Node{ApplyOpNode{op, std::move(inner)}});
}

inline Quaternion eval(const NodePtr& n, double x) {
    struct V {
        double x;
        Quaternion operator()(const ConstNode& c) const { return c.c; }
        Quaternion operator()(const MonomialNode& m) const {
            double p = 1.0;
            for (int t = 0; t < m.m; ++t) p *= x;
            return Quaternion{p};
        }
        Quaternion operator()(const ExpNode& e) const { return exp_qx(e.q, x); }
        Quaternion operator()(const SumNode& s) const {
            Quaternion acc{};
            for (const auto& t : s.terms) acc = acc + eval(t, x);
            return acc;
        }
        Quaternion operator()(const ProdNode& p) const {
            return eval(p.left, x) * eval(p.right, x);
        }
        Quaternion operator()(const LeftScaleNode& l) const {
            return l.c * eval(l.inner, x);
        }
        Quaternion operator()(const RightScaleNode& r) const {
            return eval(r.inner, x) * r.c;
        }
        Quaternion operator()(const ApplyOpNode& a) const {
            return a.op.apply(eval(a.inner, x));
        }
    };
    return std::visit(V{x}, n->v);
}

inline NodePtr diff(const NodePtr& n) {
    struct V {
        NodePtr operator()(const ConstNode&) const { return make_const(Quaternion{}); }
        NodePtr operator()(const MonomialNode& m) const {
            if (m.m == 0) return make_const(Quaternion{});
            if (m.m == 1) return make_const(Quaternion{1.0});
            return make_left_scale(Quaternion{static_cast<double>(m.m)},
                                   make(Node{MonomialNode{m.m - 1}}));
        }
        NodePtr operator()(const ExpNode& e) const {
            return make_left_scale(e.q, make(Node{ExpNode{e.q}}));
        }
        NodePtr operator()(const SumNode& s) const {
            std::vector<NodePtr> d;
            d.reserve(s.terms.size());
            for (const auto& t : s.terms) d.push_back(diff(t));
            return make_sum(std::move(d));
        }
        // (fg)' = f'g + fg', products kept in order.
        NodePtr operator()(const ProdNode& p) const {
            std::vector<NodePtr> d;
            d.push_back(make_prod(diff(p.left), p.right));
            d.push_back(make_prod(p.left, diff(p.right)));
            return make_sum(std::move(d));
        }
        NodePtr operator()(const LeftScaleNode& l) const {
            return make_left_scale(l.c, diff(l.inner));
        }
        NodePtr operator()(const RightScaleNode& r) const {
            return make_right_scale(diff(r.inner), r.c);
        }
        // A is constant and real-linear, so it commutes with d/dx.
        NodePtr operator()(const ApplyOpNode& a) const {
            return make_apply_op(a.op, diff(a.inner));
        }
    };
    return std::visit(V{}, n->v);
}

} // namespace qexpr_detail

/// Expression tree for quaternionic functions of one real variable,
/// closed under differentiation. Trees are immutable; differentiation
/// builds new trees without simplification beyond dropping literal zeros.
class QExpr {
public:
    QExpr() : node_(qexpr_detail::make_const(Quaternion{})) {}

    static QExpr constant(const Quaternion& c) {
        return QExpr(qexpr_detail::make_const(c));
    }

    /// x^m, m >= 0.
    static QExpr monomial(int m) {
        return QExpr(qexpr_detail::make(qexpr_detail::Node{qexpr_detail::MonomialNode{m}}));
    }

    /// e^{qx}.
    static QExpr exp(const Quaternion& q) {
        return QExpr(qexpr_detail::make(qexpr_detail::Node{qexpr_detail::ExpNode{q}}));
    }

    static QExpr sum(std::vector<QExpr> terms) {
        std::vector<qexpr_detail::NodePtr> nodes;
        nodes.reserve(terms.size());
        for (auto& t : terms) nodes.push_back(std::move(t.node_));
        return QExpr(qexpr_detail::make_sum(std::move(nodes)));
    }

    /// Order-preserving product left(x) * right(x).
    static QExpr prod(QExpr left, QExpr right) {
        return QExpr(qexpr_detail::make_prod(std::move(left.node_), std::move(right.node_)));
    }

    /// c * f(x).
    static QExpr left_scale(const Quaternion& c, QExpr inner) {
        return QExpr(qexpr_detail::make_left_scale(c, std::move(inner.node_)));
    }

    /// f(x) * c.
    static QExpr right_scale(QExpr inner, const Quaternion& c) {
        return QExpr(qexpr_detail::make_right_scale(std::move(inner.node_), c));
    }

    /// Pointwise action of a constant real-linear operator on f(x).
    static QExpr apply_op(const LinOp& op, QExpr inner) {
        return QExpr(qexpr_detail::make_apply_op(op, std::move(inner.node_)));
    }

    Quaternion eval(double x) const { return qexpr_detail::eval(node_, x); }

    /// Exact symbolic derivative; the result is again a QExpr.
    QExpr derivative() const { return QExpr(qexpr_detail::diff(node_)); }

    bool is_zero() const { return qexpr_detail::is_zero(node_); }

    QExpr operator+(const QExpr& o) const { return sum({*this, o}); }
    QExpr operator*(const QExpr& o) const { return prod(*this, o); }

private:
    explicit QExpr(qexpr_detail::NodePtr n) : node_(std::move(n)) {}

    qexpr_detail::NodePtr node_;
};

} // namespace quatode
