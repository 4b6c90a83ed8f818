#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>

#include "solitonlab/bexpr.hpp"
#include "solitonlab/integrand.hpp"
#include "solitonlab/polytope.hpp"

namespace solitonlab {

enum class WeightFamily { Constant, Exponential, AffinePinned, ConePower, Composite, Transformed };

std::string_view to_string(WeightFamily f);

struct PositivityBound {
  double value = 0.0;               // lower bound of g on the polytope
  std::optional<Rational> exact;    // exact minimum when available
  bool admissible = false;          // value > 0 and g well defined
};

// Positive function g on a fixed polytope. The polytope pointer is part of the
// identity of a weight: integrating against another polytope is an error.
class Weight {
 public:
  static Weight constant(PolytopePtr body, Rational c = 1);
  static Weight exponential(PolytopePtr body, Vec xi);                 // e^<x, xi>
  static Weight affine_pinned(PolytopePtr body, RVec xi, RVec xbar);   // 1 + <x - xbar, xi>
  static Weight cone_power(PolytopePtr body, Vec xi, unsigned n);      // (n+1+<x, xi>)^(-n-2)
  static Weight composite(PolytopePtr body, BExpr b, Vec xi);          // b(<x, xi>)

  WeightFamily family() const { return family_; }
  const PolytopePtr& polytope() const { return body_; }
  std::size_t dim() const { return body_->dim(); }

  // Throws WeightNonpositive when g(x) <= 0 or undefined.
  double evaluate(std::span<const double> x) const;
  PositivityBound positivity_min() const;
  // Throws WeightNonpositive unless positivity_min() is admissible.
  void require_positive() const;

  // g as polynomial factor times profile, in the polytope's coordinates.
  const Integrand& integrand() const { return *integrand_; }
  bool is_polynomial() const { return integrand_->exact.has_value(); }

  // Parameters (meaning depends on the family).
  const Vec& xi() const { return xi_; }
  const RVec& xi_exact() const { return xi_q_; }
  const RVec& xbar() const { return xbar_; }
  const Rational& constant_value() const { return c_; }
  unsigned cone_n() const { return cone_n_; }
  const std::optional<BExpr>& expression() const { return expr_; }

  void check_attached(const Polytope& body) const;

 private:
  friend Weight reeb_transform(const Weight& g, const CrossSection& from, const CrossSection& to);
  Weight() = default;

  WeightFamily family_ = WeightFamily::Constant;
  PolytopePtr body_;
  Vec xi_;
  RVec xi_q_, xbar_;
  Rational c_ = 1;
  unsigned cone_n_ = 0;
  std::optional<BExpr> expr_;
  std::shared_ptr<const Integrand> integrand_;
  std::function<PositivityBound()> lower_bound_;  // Transformed only
};

// g0(y) = <y, xi>^(-n-2) g(y / <y, xi>) on the cross-section `to`, for g on the
// cross-section `from` (whose normal is xi). Both sections must come from the
// same cone.
Weight reeb_transform(const Weight& g, const CrossSection& from, const CrossSection& to);

}  // namespace solitonlab
