#include "solitonlab/soliton.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/Dense>

#include "solitonlab/errors.hpp"

namespace solitonlab {

std::string_view to_string(SolitonFamily f) {
  switch (f) {
    case SolitonFamily::KR: return "kr";
    case SolitonFamily::Mabuchi: return "mabuchi";
    case SolitonFamily::Cone: return "cone";
    case SolitonFamily::Composite: return "composite";
  }
  return "?";
}

SolitonFamily parse_family(const std::string& name) {
  if (name == "kr") return SolitonFamily::KR;
  if (name == "mabuchi") return SolitonFamily::Mabuchi;
  if (name == "cone" || name.rfind("cone(", 0) == 0) return SolitonFamily::Cone;
  if (name == "composite") return SolitonFamily::Composite;
  throw Error(ErrorCode::InvalidInput, "unknown family '" + name + "'");
}

IntegralResult futaki(const Polytope& body, const Weight& g, const RVec& zeta) {
  if (zeta.size() != body.dim()) throw Error(ErrorCode::InvalidInput, "zeta has wrong dimension");
  auto r = integrate_poly(body, g, Polynomial<Rational>::affine(zeta, Rational(0)));
  r.value = -r.value;
  if (r.exact) *r.exact = -*r.exact;
  return r;
}

double futaki(const Polytope& body, const Weight& g, const Vec& zeta) {
  if (zeta.size() != body.dim()) throw Error(ErrorCode::InvalidInput, "zeta has wrong dimension");
  return -integrate_poly(body, g, Polynomial<double>::affine(zeta, 0.0));
}

double futaki_normalized(const Polytope& body, const Weight& g, const Vec& zeta) {
  const double mass = integrate_poly(body, g, Polynomial<double>::constant(body.dim(), 1.0));
  return futaki(body, g, zeta) / mass;
}

namespace {

unsigned cone_degree(const Polytope& body, const SolitonOptions& opt) {
  return opt.cone_n ? opt.cone_n : static_cast<unsigned>(body.dim());
}

// Moments int x^a h(<x, xi>) of order 0, 1, 2 for a fixed profile h.
struct Stack {
  double mass = 0.0;
  Vec first;
  std::vector<Vec> second;
};

Stack moment_stack(const Polytope& body, const Integrand& h, bool want_second) {
  const std::size_t n = body.dim();
  Stack s;
  s.mass = integrate_region(body, h, Polynomial<double>::constant(n, 1.0));
  s.first.assign(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) s.first[i] = integrate_region(body, h, Polynomial<double>::variable(n, i));
  if (!want_second) return s;
  s.second.assign(n, Vec(n, 0.0));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j)
      s.second[i][j] = s.second[j][i] = integrate_region(
          body, h, Polynomial<double>::variable(n, i) * Polynomial<double>::variable(n, j));
  return s;
}

Integrand profile_only(std::size_t n, Profile p, double scale = 1.0) {
  return {Polynomial<double>::constant(n, scale), std::move(p), std::nullopt};
}

bool origin_interior(const Polytope& body) {
  return std::all_of(body.facets().begin(), body.facets().end(), [](const Facet& f) { return sgn(f.offset) > 0; });
}

struct MabuchiData {
  Rational volume;
  RVec xbar;
  RMat cov;
};

MabuchiData mabuchi_data(const PolytopePtr& body) {
  auto m = moments(*body, Weight::constant(body));
  return {*m.mass.exact, *m.barycenter_exact, *m.covariance_exact};
}

double cone_base_min(const Polytope& body, const Vec& xi, unsigned n) {
  return n + 1.0 + body.range(std::span<const double>(xi)).first;
}

double inf_norm(const Vec& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

}  // namespace

PotentialValue soliton_potential(const PolytopePtr& body, SolitonFamily family, const Vec& xi,
                                 const SolitonOptions& opt) {
  const std::size_t n = body->dim();
  if (xi.size() != n) throw Error(ErrorCode::InvalidInput, "xi has wrong dimension");
  PotentialValue pv;
  switch (family) {
    case SolitonFamily::KR: {
      auto s = moment_stack(*body, profile_only(n, Profile::exp(xi, 0.0)), true);
      pv.value = s.mass;
      pv.gradient = s.first;
      pv.hessian = s.second;
      return pv;
    }
    case SolitonFamily::Mabuchi: {
      auto d = mabuchi_data(body);
      const double vol = d.volume.get_d();
      Vec bar = to_double(d.xbar);
      pv.gradient.assign(n, 0.0);
      pv.hessian.assign(n, Vec(n, 0.0));
      double quad = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        double cx = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
          pv.hessian[i][j] = vol * d.cov[i][j].get_d();
          cx += d.cov[i][j].get_d() * xi[j];
        }
        pv.gradient[i] = vol * (bar[i] + cx);
        quad += xi[i] * cx;
      }
      pv.value = vol * (dot(bar, xi) + 0.5 * quad);
      return pv;
    }
    case SolitonFamily::Cone: {
      const unsigned m = cone_degree(*body, opt);
      if (cone_base_min(*body, xi, m) <= 0.0) throw Error(ErrorCode::WeightDomain, "xi outside the admissible set");
      const double base = m + 1.0;
      pv.value = integrate_region(*body, profile_only(n, Profile::inv_pow(xi, base, m + 1), -1.0 / base),
                                  Polynomial<double>::constant(n, 1.0));
      auto first = moment_stack(*body, profile_only(n, Profile::inv_pow(xi, base, m + 2)), false);
      auto second = moment_stack(*body, profile_only(n, Profile::inv_pow(xi, base, m + 3), -(m + 2.0)), true);
      pv.gradient = first.first;
      pv.hessian = second.second;
      return pv;
    }
    case SolitonFamily::Composite: {
      if (!opt.b) throw Error(ErrorCode::InvalidInput, "composite family needs b(s)");
      const BExpr b = *opt.b, db = b.derivative();
      auto at = [xi](const BExpr& e) {
        return Profile::pointwise([xi, e](std::span<const double> x) { return e(dot(x, std::span<const double>(xi))); });
      };
      auto g = moment_stack(*body, profile_only(n, at(b)), false);
      auto h = moment_stack(*body, profile_only(n, at(db)), true);
      // no closed potential; value reports V_g
      pv.value = g.mass;
      pv.gradient = g.first;
      pv.hessian = h.second;
      return pv;
    }
  }
  return pv;
}

Weight family_weight(const PolytopePtr& body, SolitonFamily family, const Vec& xi, const SolitonOptions& opt) {
  switch (family) {
    case SolitonFamily::KR: return Weight::exponential(body, xi);
    case SolitonFamily::Mabuchi: return Weight::affine_pinned(body, to_rational(xi), mabuchi_data(body).xbar);
    case SolitonFamily::Cone: return Weight::cone_power(body, xi, cone_degree(*body, opt));
    case SolitonFamily::Composite:
      if (!opt.b) throw Error(ErrorCode::InvalidInput, "composite family needs b(s)");
      return Weight::composite(body, *opt.b, xi);
  }
  throw Error(ErrorCode::InvalidInput, "unknown family");
}

namespace {

SolitonSolution solve_mabuchi(const PolytopePtr& body) {
  const std::size_t n = body->dim();
  auto d = mabuchi_data(body);
  RVec rhs(n);
  for (std::size_t i = 0; i < n; ++i) rhs[i] = -d.xbar[i];
  RVec xi = solve(d.cov, rhs);
  SolitonSolution s;
  s.family = SolitonFamily::Mabuchi;
  s.xi_exact = xi;
  s.xi = to_double(xi);
  Weight w = Weight::affine_pinned(body, xi, d.xbar);
  s.feasible = w.positivity_min().admissible;
  Rational worst = 0;
  for (std::size_t i = 0; i < n; ++i) {
    Rational r = *integrate_region(*body, w.integrand(), Polynomial<Rational>::variable(n, i)).exact;
    if (abs(r) > worst) worst = abs(r);
  }
  s.residual = worst.get_d();
  s.mass = d.volume.get_d();
  Rational quad = 0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) quad += xi[i] * d.cov[i][j] * xi[j];
  Rational pot = d.volume * (dot(d.xbar, xi) + quad / 2);
  s.potential = pot.get_d();
  s.converged = true;
  return s;
}

Eigen::VectorXd newton_direction(const PotentialValue& pv, double sign) {
  const auto n = static_cast<Eigen::Index>(pv.gradient.size());
  Eigen::MatrixXd h(n, n);
  Eigen::VectorXd g(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    g[i] = pv.gradient[i];
    for (Eigen::Index j = 0; j < n; ++j) h(i, j) = sign * pv.hessian[i][j];
  }
  Eigen::LLT<Eigen::MatrixXd> llt(h);
  if (llt.info() != Eigen::Success) throw Error(ErrorCode::NewtonDiverged, "Hessian lost definiteness");
  return -llt.solve(sign * g);
}

}  // namespace

SolitonSolution solve_weight_vector(const PolytopePtr& body, SolitonFamily family, const SolitonOptions& opt) {
  if (family == SolitonFamily::Mabuchi) return solve_mabuchi(body);
  const std::size_t n = body->dim();
  if (family != SolitonFamily::Composite && !origin_interior(*body))
    throw Error(ErrorCode::Infeasible, "origin is not interior, no critical point");

  // KR minimizes a convex potential, cone maximizes a concave one; composite
  // runs plain Newton on the moment map with merit |F|^2.
  const double sign = family == SolitonFamily::Cone ? -1.0 : 1.0;
  const unsigned m = cone_degree(*body, opt);
  auto admissible = [&](const Vec& xi) {
    if (family == SolitonFamily::Cone) return cone_base_min(*body, xi, m) > 0.0;
    if (family == SolitonFamily::Composite) return family_weight(body, family, xi, opt).positivity_min().admissible;
    return true;
  };
  auto mass_at = [&](const Vec& xi, const PotentialValue& pv) {
    if (family == SolitonFamily::KR || family == SolitonFamily::Composite) return pv.value;
    return integrate_region(*body, family_weight(body, family, xi, opt).integrand(),
                            Polynomial<double>::constant(n, 1.0));
  };
  auto merit = [&](const PotentialValue& pv) {
    if (family == SolitonFamily::Composite) {
      double s = 0.0;
      for (double g : pv.gradient) s += g * g;
      return 0.5 * s;
    }
    return sign * pv.value;
  };

  SolitonSolution sol;
  sol.family = family;
  Vec xi(n, 0.0);
  if (!admissible(xi)) throw Error(ErrorCode::WeightDomain, "b(0) is not positive");
  PotentialValue pv = soliton_potential(body, family, xi, opt);
  for (int it = 0;; ++it) {
    const double mass = mass_at(xi, pv);
    const double gnorm = inf_norm(pv.gradient);
    sol.iterations = it;
    if (gnorm <= opt.tol * std::max(mass, std::numeric_limits<double>::min())) {
      sol.converged = true;
      break;
    }
    if (it >= opt.max_iter) throw Error(ErrorCode::NewtonDiverged, "no convergence within the iteration limit");

    Eigen::VectorXd d;
    double slope;
    if (family == SolitonFamily::Composite) {
      Eigen::MatrixXd jac(n, n);
      Eigen::VectorXd f(n);
      for (std::size_t i = 0; i < n; ++i) {
        f[i] = pv.gradient[i];
        for (std::size_t j = 0; j < n; ++j) jac(i, j) = pv.hessian[i][j];
      }
      d = -jac.fullPivLu().solve(f);
      slope = -f.squaredNorm();
    } else {
      d = newton_direction(pv, sign);
      slope = 0.0;
      for (std::size_t i = 0; i < n; ++i) slope += sign * pv.gradient[i] * d[i];
    }
    if (!d.allFinite()) throw Error(ErrorCode::NewtonDiverged, "singular Newton system");

    const double f0 = merit(pv);
    double step = 1.0;
    bool moved = false;
    while (step > 1e-14) {
      Vec trial(n);
      for (std::size_t i = 0; i < n; ++i) trial[i] = xi[i] + step * d[i];
      if (admissible(trial)) {
        PotentialValue next = soliton_potential(body, family, trial, opt);
        const bool armijo = merit(next) <= f0 + 1e-4 * step * slope;
        // near the optimum the potential stops resolving decrease; the
        // gradient still does
        const bool contracts = inf_norm(next.gradient) <= 0.5 * gnorm;
        if (armijo || contracts) {
          xi = trial;
          pv = std::move(next);
          moved = true;
          break;
        }
      }
      step *= 0.5;
    }
    if (!moved) {
      if (gnorm <= 1e-9 * mass) {
        sol.converged = true;
        break;
      }
      throw Error(ErrorCode::NewtonDiverged, "line search failed");
    }
  }
  sol.xi = xi;
  sol.residual = inf_norm(pv.gradient);
  sol.mass = mass_at(xi, pv);
  sol.potential = family == SolitonFamily::Composite ? std::numeric_limits<double>::quiet_NaN() : pv.value;
  sol.feasible = true;
  return sol;
}

}  // namespace solitonlab
