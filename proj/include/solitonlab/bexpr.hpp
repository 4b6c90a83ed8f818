#pragma once

#include <memory>
#include <string>
#include <utility>

namespace solitonlab {

// Small expression language for b(s): numbers, the variable s, + - * / ^,
// exp(), log(), parentheses. Division and fractional powers are accepted only
// where interval arithmetic certifies the denominator/base away from zero.
class BExpr {
 public:
  struct Node;

  static BExpr parse(const std::string& text);
  static BExpr variable();
  static BExpr number(double v);

  double operator()(double s) const;
  BExpr derivative() const;
  // Enclosure of b over [lo, hi]; throws WeightDomain when the expression is
  // not certified well defined there.
  std::pair<double, double> bounds(double lo, double hi) const;
  std::string to_string() const;

  const std::shared_ptr<const Node>& root() const { return root_; }

 private:
  explicit BExpr(std::shared_ptr<const Node> root) : root_(std::move(root)) {}
  std::shared_ptr<const Node> root_;
};

}  // namespace solitonlab
