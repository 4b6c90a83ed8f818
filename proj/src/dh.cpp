#include "solitonlab/dh.hpp"

#include <algorithm>

#include "solitonlab/errors.hpp"

namespace solitonlab {

Rational dh_factorial(std::size_t n) {
  mpz_class f;
  mpz_fac_ui(f.get_mpz_t(), n);
  return Rational(f);
}

IntegralResult integrate_region(const Polytope& region, const Integrand& g, const Polynomial<Rational>& p) {
  const Rational nf = dh_factorial(region.dim());
  if (g.exact) {
    Rational v = nf * integrate_exact(region, *g.exact * p);
    return {v.get_d(), v};
  }
  double v = nf.get_d() * integrate_lebesgue(region, g.factor * to_double(p), g.profile);
  return {v, std::nullopt};
}

double integrate_region(const Polytope& region, const Integrand& g, const Polynomial<double>& p) {
  return dh_factorial(region.dim()).get_d() * integrate_lebesgue(region, g.factor * p, g.profile);
}

IntegralResult integrate_poly(const Polytope& body, const Weight& g, const Polynomial<Rational>& p) {
  g.check_attached(body);
  g.require_positive();
  return integrate_region(body, g.integrand(), p);
}

double integrate_poly(const Polytope& body, const Weight& g, const Polynomial<double>& p) {
  g.check_attached(body);
  g.require_positive();
  return integrate_region(body, g.integrand(), p);
}

IntegralResult integrate(const Polytope& body, const Weight& g, const std::vector<unsigned>& monomial) {
  std::vector<unsigned> e = monomial;
  if (e.empty()) e.assign(body.dim(), 0);
  if (e.size() != body.dim()) throw Error(ErrorCode::InvalidInput, "monomial has wrong number of variables");
  return integrate_poly(body, g, Polynomial<Rational>::monomial(e, 1));
}

Moments moments(const Polytope& body, const Weight& g) {
  g.check_attached(body);
  g.require_positive();
  const std::size_t n = body.dim();
  Moments m;
  m.mass = integrate_region(body, g.integrand(), Polynomial<Rational>::constant(n, 1));
  m.barycenter.assign(n, 0.0);
  m.covariance.assign(n, Vec(n, 0.0));
  if (m.mass.exact) {
    RVec bar(n);
    for (std::size_t i = 0; i < n; ++i) {
      bar[i] = *integrate_region(body, g.integrand(), Polynomial<Rational>::variable(n, i)).exact / *m.mass.exact;
      m.barycenter[i] = bar[i].get_d();
    }
    RMat cov(n, RVec(n));
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i; j < n; ++j) {
        auto xi = Polynomial<Rational>::affine(RVec(n, 0), -bar[i]) + Polynomial<Rational>::variable(n, i);
        auto xj = Polynomial<Rational>::affine(RVec(n, 0), -bar[j]) + Polynomial<Rational>::variable(n, j);
        cov[i][j] = cov[j][i] = *integrate_region(body, g.integrand(), xi * xj).exact / *m.mass.exact;
        m.covariance[i][j] = m.covariance[j][i] = cov[i][j].get_d();
      }
    m.barycenter_exact = bar;
    m.covariance_exact = cov;
    return m;
  }
  for (std::size_t i = 0; i < n; ++i)
    m.barycenter[i] = integrate_region(body, g.integrand(), Polynomial<double>::variable(n, i)) / m.mass.value;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j) {
      auto xi = Polynomial<double>::constant(n, -m.barycenter[i]) + Polynomial<double>::variable(n, i);
      auto xj = Polynomial<double>::constant(n, -m.barycenter[j]) + Polynomial<double>::variable(n, j);
      m.covariance[i][j] = m.covariance[j][i] = integrate_region(body, g.integrand(), xi * xj) / m.mass.value;
    }
  return m;
}

std::optional<Polytope> clip(const Polytope& body, const std::vector<Facet>& extra) {
  std::vector<Facet> facets = body.facets();
  for (const auto& f : extra) {
    if (is_zero(f.normal)) {
      if (sgn(f.offset) < 0) return std::nullopt;
      continue;
    }
    facets.push_back(f);
  }
  try {
    return Polytope::from_facets(body.dim(), std::move(facets));
  } catch (const Error& e) {
    if (e.code() == ErrorCode::Empty || e.code() == ErrorCode::NotFullDim) return std::nullopt;
    throw;
  }
}

PiecewiseMeasure pushforward_1d(const Polytope& body, const Weight& g, const LatticeVector& direction) {
  if (direction.tag != LatticeTag::N) throw Error(ErrorCode::LatticeMismatch, "direction must be an N-vector");
  if (direction.dim() != body.dim()) throw Error(ErrorCode::InvalidInput, "direction has wrong dimension");
  if (is_zero(direction.coords)) throw Error(ErrorCode::ZeroVector, "zero direction");
  g.check_attached(body);
  g.require_positive();
  RVec breaks;
  for (const auto& v : body.vertices()) breaks.push_back(dot(v, direction.coords));
  std::sort(breaks.begin(), breaks.end());
  breaks.erase(std::unique(breaks.begin(), breaks.end()), breaks.end());
  const std::size_t n = body.dim();
  const unsigned degree = g.is_polynomial() ? static_cast<unsigned>(n + g.integrand().exact->degree()) : 0;
  const auto one = Polynomial<Rational>::constant(n, 1);
  return PiecewiseMeasure::from_upper_mass(breaks, degree, [&](const Rational& t) -> IntegralResult {
    auto region = clip(body, {{direction.coords, -t}});
    if (!region) return {0.0, Rational(0)};
    return integrate_region(*region, g.integrand(), one);
  });
}

}  // namespace solitonlab
