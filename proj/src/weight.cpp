#include "solitonlab/weight.hpp"

#include <algorithm>
#include <cmath>

#include "solitonlab/errors.hpp"

namespace solitonlab {

std::string_view to_string(WeightFamily f) {
  switch (f) {
    case WeightFamily::Constant: return "constant";
    case WeightFamily::Exponential: return "kr";
    case WeightFamily::AffinePinned: return "mabuchi";
    case WeightFamily::ConePower: return "cone";
    case WeightFamily::Composite: return "composite";
    case WeightFamily::Transformed: return "transformed";
  }
  return "?";
}

namespace {

void check_dim(const PolytopePtr& body, std::size_t size) {
  if (!body) throw Error(ErrorCode::InvalidInput, "weight needs a polytope");
  if (size != body->dim()) throw Error(ErrorCode::InvalidInput, "weight parameter has wrong dimension");
}

}  // namespace

Weight Weight::constant(PolytopePtr body, Rational c) {
  check_dim(body, body ? body->dim() : 0);
  Weight w;
  w.family_ = WeightFamily::Constant;
  w.body_ = std::move(body);
  w.c_ = c;
  const std::size_t n = w.body_->dim();
  auto p = Polynomial<Rational>::constant(n, c);
  w.integrand_ = std::make_shared<Integrand>(Integrand{to_double(p), Profile::one(), p});
  return w;
}

Weight Weight::exponential(PolytopePtr body, Vec xi) {
  check_dim(body, xi.size());
  Weight w;
  w.family_ = WeightFamily::Exponential;
  w.body_ = std::move(body);
  w.xi_ = xi;
  const std::size_t n = w.body_->dim();
  w.integrand_ = std::make_shared<Integrand>(
      Integrand{Polynomial<double>::constant(n, 1.0), Profile::exp(std::move(xi), 0.0), std::nullopt});
  return w;
}

Weight Weight::affine_pinned(PolytopePtr body, RVec xi, RVec xbar) {
  check_dim(body, xi.size());
  check_dim(body, xbar.size());
  Weight w;
  w.family_ = WeightFamily::AffinePinned;
  w.body_ = std::move(body);
  w.xi_q_ = xi;
  w.xi_ = to_double(xi);
  w.xbar_ = xbar;
  auto p = Polynomial<Rational>::affine(xi, 1 - dot(xbar, xi));
  w.integrand_ = std::make_shared<Integrand>(Integrand{to_double(p), Profile::one(), p});
  return w;
}

Weight Weight::cone_power(PolytopePtr body, Vec xi, unsigned n) {
  check_dim(body, xi.size());
  Weight w;
  w.family_ = WeightFamily::ConePower;
  w.body_ = std::move(body);
  w.xi_ = xi;
  w.cone_n_ = n;
  const std::size_t d = w.body_->dim();
  w.integrand_ = std::make_shared<Integrand>(Integrand{
      Polynomial<double>::constant(d, 1.0), Profile::inv_pow(std::move(xi), n + 1.0, static_cast<int>(n) + 2),
      std::nullopt});
  return w;
}

Weight Weight::composite(PolytopePtr body, BExpr b, Vec xi) {
  check_dim(body, xi.size());
  Weight w;
  w.family_ = WeightFamily::Composite;
  w.body_ = std::move(body);
  w.xi_ = xi;
  w.expr_ = b;
  auto [lo, hi] = w.body_->range(std::span<const double>(xi));
  b.bounds(lo, hi);  // domain certificate, throws WeightDomain
  const std::size_t n = w.body_->dim();
  w.integrand_ = std::make_shared<Integrand>(Integrand{
      Polynomial<double>::constant(n, 1.0),
      Profile::pointwise([b, xi](std::span<const double> x) { return b(dot(xi, x)); }), std::nullopt});
  return w;
}

double Weight::evaluate(std::span<const double> x) const {
  if (x.size() != dim()) throw Error(ErrorCode::InvalidInput, "point has wrong dimension");
  double v = integrand_->factor.evaluate(x) * integrand_->profile(x);
  if (!(v > 0.0) || !std::isfinite(v)) throw Error(ErrorCode::WeightNonpositive, "weight is not positive at the point");
  return v;
}

PositivityBound Weight::positivity_min() const {
  PositivityBound r;
  switch (family_) {
    case WeightFamily::Constant:
      r.exact = c_;
      break;
    case WeightFamily::AffinePinned: {
      auto [lo, hi] = body_->range(std::span<const Rational>(xi_q_));
      r.exact = 1 + lo - dot(xbar_, xi_q_);
      break;
    }
    case WeightFamily::Exponential: {
      auto [lo, hi] = body_->range(std::span<const double>(xi_));
      r.value = std::exp(lo);
      r.admissible = r.value > 0.0;
      return r;
    }
    case WeightFamily::ConePower: {
      auto [lo, hi] = body_->range(std::span<const double>(xi_));
      const double base_lo = cone_n_ + 1.0 + lo, base_hi = cone_n_ + 1.0 + hi;
      if (base_lo <= 0.0) {
        r.value = base_lo;  // nonpositive base: outside the admissible set
        r.admissible = false;
        return r;
      }
      r.value = std::pow(base_hi, -static_cast<double>(cone_n_) - 2.0);
      r.admissible = r.value > 0.0;
      return r;
    }
    case WeightFamily::Composite: {
      auto [lo, hi] = body_->range(std::span<const double>(xi_));
      try {
        r.value = expr_->bounds(lo, hi).first;
        r.admissible = r.value > 0.0;
      } catch (const Error&) {
        r.value = 0.0;
        r.admissible = false;
      }
      return r;
    }
    case WeightFamily::Transformed: return lower_bound_();
  }
  r.value = r.exact->get_d();
  r.admissible = sgn(*r.exact) > 0;
  return r;
}

void Weight::require_positive() const {
  auto b = positivity_min();
  if (!b.admissible)
    throw Error(ErrorCode::WeightNonpositive,
                std::string(to_string(family_)) + " weight is not positive on the polytope (lower bound " +
                    std::to_string(b.value) + ")");
}

void Weight::check_attached(const Polytope& body) const {
  if (&body != body_.get())
    throw Error(ErrorCode::WeightPolytopeMismatch, "weight is attached to a different polytope");
}

Weight reeb_transform(const Weight& g, const CrossSection& from, const CrossSection& to) {
  if (g.polytope() != from.polytope)
    throw Error(ErrorCode::WeightPolytopeMismatch, "weight is not attached to the source cross-section");
  const std::size_t n = from.polytope->dim();
  const std::size_t d = n + 1;
  if (to.polytope->dim() != n || to.normal.dim() != d)
    throw Error(ErrorCode::InvalidInput, "cross-sections of different cones");
  const RVec& xi = from.normal.coords;
  for (const auto& y : to.ambient_vertices)
    if (sgn(dot(y, xi)) <= 0) throw Error(ErrorCode::UnboundedSection, "source normal is not positive on the target");

  // z = Q (w - origin): coordinates in the source frame of an ambient point.
  const RMat& basis = from.frame.basis;
  RMat gram(n, RVec(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) gram[i][j] = dot(basis[i], basis[j]);
  RMat q(n, RVec(d));
  for (std::size_t j = 0; j < d; ++j) {
    RVec col(n);
    for (std::size_t i = 0; i < n; ++i) col[i] = basis[i][j];
    RVec sol = solve(gram, col);
    for (std::size_t i = 0; i < n; ++i) q[i][j] = sol[i];
  }
  RVec q_origin(n);
  for (std::size_t i = 0; i < n; ++i) q_origin[i] = dot(q[i], from.frame.origin);

  Weight w;
  w.family_ = WeightFamily::Transformed;
  w.body_ = to.polytope;
  w.xi_q_ = xi;
  w.xi_ = to_double(xi);
  w.cone_n_ = static_cast<unsigned>(n);

  // l(z') = <origin' + B' z', xi>
  Vec lin(n);
  for (std::size_t k = 0; k < n; ++k) lin[k] = dot(to.frame.basis[k], xi).get_d();
  const Rational offset_q = dot(to.frame.origin, xi);
  const bool flat = std::all_of(to.frame.basis.begin(), to.frame.basis.end(),
                                [&](const RVec& b) { return sgn(dot(b, xi)) == 0; });

  if (g.is_polynomial()) {
    std::vector<Polynomial<Rational>> z_of_w;
    for (std::size_t i = 0; i < n; ++i) z_of_w.push_back(Polynomial<Rational>::affine(q[i], -q_origin[i]));
    auto p_w = g.integrand().exact->compose(z_of_w);
    const unsigned deg = p_w.degree();
    auto ell = Polynomial<Rational>::affine(xi, 0);
    std::vector<Polynomial<Rational>> ell_pow{Polynomial<Rational>::constant(d, 1)};
    for (unsigned k = 1; k <= deg; ++k) ell_pow.push_back(ell_pow.back() * ell);
    Polynomial<Rational> homog(d);
    for (const auto& [e, c] : p_w.terms()) {
      unsigned k = 0;
      for (auto x : e) k += x;
      homog += Polynomial<Rational>::monomial(e, c) * ell_pow[deg - k];
    }
    std::vector<Polynomial<Rational>> y_of_z;
    for (std::size_t j = 0; j < d; ++j) {
      RVec a(n);
      for (std::size_t k = 0; k < n; ++k) a[k] = to.frame.basis[k][j];
      y_of_z.push_back(Polynomial<Rational>::affine(a, to.frame.origin[j]));
    }
    auto factor = homog.compose(y_of_z);
    const int power = static_cast<int>(n + 2 + deg);
    std::optional<Polynomial<Rational>> exact;
    if (flat) {
      Rational scale = 1;
      for (int k = 0; k < power; ++k) scale /= offset_q;
      exact = scale * factor;
    }
    w.integrand_ = std::make_shared<Integrand>(
        Integrand{to_double(factor), Profile::inv_pow(lin, offset_q.get_d(), power), exact});
  } else {
    auto source = std::make_shared<Weight>(g);
    Vec xi_d = to_double(xi);
    RMat to_basis = to.frame.basis;
    Vec to_origin = to_double(to.frame.origin);
    std::vector<Vec> q_d;
    for (const auto& row : q) q_d.push_back(to_double(row));
    Vec q_origin_d = to_double(q_origin);
    std::vector<Vec> tb;
    for (const auto& b : to_basis) tb.push_back(to_double(b));
    auto pointwise = [source, xi_d, tb, to_origin, q_d, q_origin_d, n](std::span<const double> z) {
      Vec y = to_origin;
      for (std::size_t k = 0; k < n; ++k)
        for (std::size_t j = 0; j < y.size(); ++j) y[j] += z[k] * tb[k][j];
      const double ell = dot(xi_d, y);
      Vec zs(n);
      for (std::size_t i = 0; i < n; ++i) zs[i] = dot(q_d[i], y) / ell - q_origin_d[i];
      return std::pow(ell, -static_cast<double>(n) - 2.0) * source->evaluate(zs);
    };
    w.integrand_ = std::make_shared<Integrand>(
        Integrand{Polynomial<double>::constant(n, 1.0), Profile::pointwise(pointwise), std::nullopt});
  }

  Rational lmin = dot(to.ambient_vertices[0], xi), lmax = lmin;
  for (const auto& y : to.ambient_vertices) {
    Rational v = dot(y, xi);
    if (v < lmin) lmin = v;
    if (v > lmax) lmax = v;
  }
  const double e = -static_cast<double>(n) - 2.0;
  const double lo_d = lmin.get_d(), hi_d = lmax.get_d();
  auto inner = std::make_shared<Weight>(g);
  w.lower_bound_ = [inner, lo_d, hi_d, e] {
    PositivityBound b = inner->positivity_min();
    PositivityBound r;
    if (!b.admissible) {
      r.value = b.value;
      return r;
    }
    double gv = b.exact ? b.exact->get_d() : b.value;
    r.value = gv >= 0 ? gv * std::pow(hi_d, e) : gv * std::pow(lo_d, e);
    r.admissible = r.value > 0.0;
    return r;
  };
  return w;
}

}  // namespace solitonlab
