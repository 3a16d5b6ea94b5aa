#pragma once

#include <functional>
#include <memory>
#include <vector>

#include "fsa/band_operator.hpp"

namespace fsa {

/// One-based section index; the n-th section is the window -n..n.
struct SectionIndex {
  Index n;
  explicit SectionIndex(Index n_) : n(n_) {
    if (n < 1) throw std::invalid_argument("SectionIndex: n must be >= 1");
  }
};

/// Finite tree of Leaf/Sum/Product/Scale nodes describing a composed
/// finite-section sequence.  All leaves live on Z and share one p-exponent.
class FSExpression {
 public:
  enum class Kind { Leaf, Sum, Product, Scale };

  static FSExpression leaf(BandOperator op) {
    if (op.domain() != OperatorDomain::full())
      throw std::invalid_argument("FSExpression: leaf operators must live on Z");
    FSExpression e(Kind::Leaf);
    e.node_->op = std::move(op);
    return e;
  }
  static FSExpression sum(std::vector<FSExpression> children) {
    if (children.empty()) throw std::invalid_argument("FSExpression: empty sum");
    FSExpression e(Kind::Sum);
    e.node_->children = std::move(children);
    e.check_exponents();
    return e;
  }
  static FSExpression product(std::vector<FSExpression> factors) {
    if (factors.empty()) throw std::invalid_argument("FSExpression: empty product");
    FSExpression e(Kind::Product);
    e.node_->children = std::move(factors);
    e.check_exponents();
    return e;
  }
  static FSExpression scale(Complex alpha, FSExpression child) {
    FSExpression e(Kind::Scale);
    e.node_->alpha = alpha;
    e.node_->children.push_back(std::move(child));
    return e;
  }

  Kind kind() const { return node_->kind; }
  const BandOperator& op() const { return node_->op; }
  const std::vector<FSExpression>& children() const { return node_->children; }
  Complex alpha() const { return node_->alpha; }

  PExponent p_exponent() const {
    if (kind() == Kind::Leaf) return node_->op.p_exponent();
    return node_->children.front().p_exponent();
  }

  /// Sum over product factors, max over sum terms.
  Index total_bandwidth() const {
    switch (kind()) {
      case Kind::Leaf: return node_->op.bandwidth();
      case Kind::Scale: return node_->children.front().total_bandwidth();
      case Kind::Sum: {
        Index w = 0;
        for (const auto& c : node_->children) w = std::max(w, c.total_bandwidth());
        return w;
      }
      case Kind::Product: {
        Index w = 0;
        for (const auto& c : node_->children) w += c.total_bandwidth();
        return w;
      }
    }
    return 0;
  }

  void for_each_leaf(const std::function<void(const BandOperator&)>& f) const {
    if (kind() == Kind::Leaf) {
      f(node_->op);
      return;
    }
    for (const auto& c : node_->children) c.for_each_leaf(f);
  }

 private:
  struct Node {
    Kind kind;
    BandOperator op;
    std::vector<FSExpression> children;
    Complex alpha{1.0};
    explicit Node(Kind k) : kind(k) {}
  };
  explicit FSExpression(Kind k) : node_(std::make_shared<Node>(k)) {}

  void check_exponents() const {
    PExponent p = p_exponent();
    for_each_leaf([p](const BandOperator& op) {
      if (op.p_exponent() != p)
        throw std::invalid_argument(
            "FSExpression: mixing p-exponents in one expression");
    });
  }

  // Mutated only inside the static factories; immutable afterwards.
  std::shared_ptr<Node> node_;
};

/// Evaluates the tree with each leaf B replaced by the (2n+1)x(2n+1) window
/// P_n B P_n; products multiply left to right.
inline FiniteMatrix finite_section(const FSExpression& expr, SectionIndex n) {
  Interval win(-n.n, n.n);
  std::function<Eigen::MatrixXcd(const FSExpression&)> eval =
      [&](const FSExpression& e) -> Eigen::MatrixXcd {
    switch (e.kind()) {
      case FSExpression::Kind::Leaf:
        return materialize(e.op(), win, win).values;
      case FSExpression::Kind::Scale:
        return e.alpha() * eval(e.children().front());
      case FSExpression::Kind::Sum: {
        Eigen::MatrixXcd m = eval(e.children().front());
        for (std::size_t i = 1; i < e.children().size(); ++i)
          m += eval(e.children()[i]);
        return m;
      }
      case FSExpression::Kind::Product: {
        Eigen::MatrixXcd m = eval(e.children().front());
        for (std::size_t i = 1; i < e.children().size(); ++i)
          m = m * eval(e.children()[i]);
        return m;
      }
    }
    return Eigen::MatrixXcd();
  };
  FiniteMatrix m;
  m.rows = win;
  m.cols = win;
  m.values = eval(expr);
  return m;
}

/// Evaluates the tree with every leaf B replaced by substitute(B), using band
/// arithmetic.  All substituted leaves must share domain and exponent.
inline BandOperator evaluate_with_leaves(
    const FSExpression& expr,
    const std::function<BandOperator(const BandOperator&)>& substitute,
    Index bandwidth_cap = 64) {
  switch (expr.kind()) {
    case FSExpression::Kind::Leaf:
      return substitute(expr.op());
    case FSExpression::Kind::Scale:
      return band_scale(expr.alpha(),
                        evaluate_with_leaves(expr.children().front(), substitute,
                                             bandwidth_cap));
    case FSExpression::Kind::Sum: {
      BandOperator r =
          evaluate_with_leaves(expr.children().front(), substitute, bandwidth_cap);
      for (std::size_t i = 1; i < expr.children().size(); ++i)
        r = band_sum(r, evaluate_with_leaves(expr.children()[i], substitute,
                                             bandwidth_cap));
      return r;
    }
    case FSExpression::Kind::Product: {
      BandOperator r =
          evaluate_with_leaves(expr.children().front(), substitute, bandwidth_cap);
      for (std::size_t i = 1; i < expr.children().size(); ++i)
        r = band_product(r,
                         evaluate_with_leaves(expr.children()[i], substitute,
                                              bandwidth_cap),
                         bandwidth_cap);
      return r;
    }
  }
  return BandOperator();
}

/// The pointwise limit A of the section sequence: the tree evaluated with
/// leaves unreplaced.
inline BandOperator pointwise_limit(const FSExpression& expr,
                                    Index bandwidth_cap = 64) {
  return evaluate_with_leaves(
      expr, [](const BandOperator& op) { return op; }, bandwidth_cap);
}

}  // namespace fsa
