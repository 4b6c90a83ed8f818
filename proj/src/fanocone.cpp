#include "solitonlab/fanocone.hpp"

#include <algorithm>
#include <cmath>
#include <type_traits>

#include <Eigen/Dense>

#include "solitonlab/errors.hpp"
#include "solitonlab/soliton.hpp"

namespace solitonlab {

namespace {

FanoCone finish(PolyCone moment) {
  const std::size_t d = moment.dim();
  if (d < 2) throw Error(ErrorCode::InvalidInput, "cone needs dimension at least 2");
  PolyCone reeb = moment.dual();

  // <gamma, v> = 1 on the rays of C
  const auto& rays = reeb.generators();
  RMat aug;
  for (const auto& v : rays) {
    RVec row = v;
    row.push_back(1);
    aug.push_back(std::move(row));
  }
  if (rank(RMat(rays)) != rank(aug)) throw Error(ErrorCode::NonGorenstein, "no vector pairs to 1 with every ray");
  RMat normal(d, RVec(d));
  RVec rhs(d);
  for (std::size_t i = 0; i < d; ++i) {
    for (std::size_t j = 0; j < d; ++j)
      for (const auto& v : rays) normal[i][j] += v[i] * v[j];
    for (const auto& v : rays) rhs[i] += v[i];
  }
  RVec gamma = solve(normal, rhs);
  for (const auto& v : rays)
    if (dot(gamma, v) != 1) throw Error(ErrorCode::NonGorenstein, "no vector pairs to 1 with every ray");
  auto simplices = triangulate(moment, 0);
  return FanoCone{static_cast<unsigned>(d - 1), std::move(moment), std::move(reeb), std::move(gamma),
                  std::move(simplices)};
}

template <class T>
struct VolumeTerms {
  T value{0};
  std::vector<T> gradient;
  std::vector<std::vector<T>> hessian;
};

template <class T>
VolumeTerms<T> volume_terms(const FanoCone& cone, const std::vector<SimplicialCone>& simplices,
                            const std::vector<std::vector<T>>& gens, const std::vector<T>& xi) {
  const std::size_t d = xi.size();
  VolumeTerms<T> r;
  r.gradient.assign(d, T(0));
  r.hessian.assign(d, std::vector<T>(d, T(0)));
  std::vector<T> pair(gens.size());
  for (std::size_t g = 0; g < gens.size(); ++g) {
    T s(0);
    for (std::size_t k = 0; k < d; ++k) s += gens[g][k] * xi[k];
    if (!(s > T(0))) throw Error(ErrorCode::OutsideReebCone, "Reeb vector is not in the interior of the Reeb cone");
    pair[g] = s;
  }
  (void)cone;
  std::vector<T> sum(d);
  for (const auto& sc : simplices) {
    T term;
    if constexpr (std::is_same_v<T, double>)
      term = sc.abs_det.get_d();
    else
      term = sc.abs_det;
    for (auto id : sc.generator_ids) term /= pair[id];
    for (std::size_t k = 0; k < d; ++k) {
      T s(0);
      for (auto id : sc.generator_ids) s += gens[id][k] / pair[id];
      sum[k] = s;
    }
    r.value += term;
    for (std::size_t k = 0; k < d; ++k) {
      T gk = term * sum[k];
      r.gradient[k] -= gk;
      for (std::size_t l = 0; l < d; ++l) {
        T s(0);
        for (auto id : sc.generator_ids) s += gens[id][k] * gens[id][l] / (pair[id] * pair[id]);
        T hk = term * (sum[k] * sum[l] + s);
        r.hessian[k][l] += hk;
      }
    }
  }
  return r;
}

const std::vector<SimplicialCone>& simplices_for(const FanoCone& cone, int variant,
                                                 std::vector<SimplicialCone>& scratch) {
  if (variant == 0) return cone.simplices;
  scratch = triangulate(cone.moment, variant);
  return scratch;
}

}  // namespace

FanoCone build_cone_from_generators(std::vector<RVec> moment_generators) {
  return finish(PolyCone::from_generators(LatticeTag::M, std::move(moment_generators)));
}

FanoCone build_cone_from_rays(std::vector<RVec> reeb_rays) {
  return finish(PolyCone::from_generators(LatticeTag::N, std::move(reeb_rays)).dual());
}

VolumeValue volume(const FanoCone& cone, const Vec& xi, int variant) {
  if (xi.size() != cone.n + 1) throw Error(ErrorCode::InvalidInput, "Reeb vector has wrong dimension");
  std::vector<SimplicialCone> scratch;
  std::vector<Vec> gens;
  for (const auto& g : cone.moment.generators()) gens.push_back(to_double(g));
  auto t = volume_terms<double>(cone, simplices_for(cone, variant, scratch), gens, xi);
  return {t.value, t.gradient, t.hessian, std::nullopt, std::nullopt, std::nullopt};
}

VolumeValue volume(const FanoCone& cone, const RVec& xi, int variant) {
  if (xi.size() != cone.n + 1) throw Error(ErrorCode::InvalidInput, "Reeb vector has wrong dimension");
  std::vector<SimplicialCone> scratch;
  auto t = volume_terms<Rational>(cone, simplices_for(cone, variant, scratch), cone.moment.generators(), xi);
  VolumeValue v;
  v.exact = t.value;
  v.gradient_exact = t.gradient;
  v.hessian_exact = t.hessian;
  v.value = t.value.get_d();
  v.gradient = to_double(t.gradient);
  for (const auto& row : t.hessian) v.hessian.push_back(to_double(row));
  return v;
}

MsyResult msy_minimize(const FanoCone& cone, std::optional<Rational> level) {
  const std::size_t d = cone.n + 1, m = cone.n;
  const Rational target = level.value_or(Rational(d));
  // gamma is positive on C \ {0}, so only positive levels meet the cone
  if (sgn(target) <= 0) throw Error(ErrorCode::EmptySlice, "normalized slice misses the Reeb cone");

  Eigen::MatrixXd z(d, m);
  {
    RMat basis = integer_kernel_basis(cone.gorenstein);
    for (std::size_t k = 0; k < m; ++k)
      for (std::size_t j = 0; j < d; ++j) z(j, k) = basis[k][j].get_d();
  }
  RVec center(d);
  for (const auto& r : cone.reeb.generators()) center = center + r;
  const Rational scale = target / dot(cone.gorenstein, center);
  center = scale * center;
  Eigen::VectorXd base(d);
  for (std::size_t j = 0; j < d; ++j) base[j] = center[j].get_d();

  std::vector<Eigen::VectorXd> gens;
  for (const auto& g : cone.moment.generators()) {
    Eigen::VectorXd v(d);
    for (std::size_t j = 0; j < d; ++j) v[j] = g[j].get_d();
    gens.push_back(v);
  }

  auto to_vec = [](const Eigen::VectorXd& v) { return Vec(v.data(), v.data() + v.size()); };
  struct Eval {
    double f;
    Eigen::VectorXd grad;
    Eigen::MatrixXd hess;
  };
  auto evaluate = [&](const Eigen::VectorXd& w, double mu) -> std::optional<Eval> {
    Eigen::VectorXd xi = base + z * w;
    for (const auto& g : gens)
      if (g.dot(xi) <= 0.0) return std::nullopt;
    auto v = volume(cone, to_vec(xi));
    Eigen::VectorXd grad(d);
    Eigen::MatrixXd hess(d, d);
    for (std::size_t i = 0; i < d; ++i) {
      grad[i] = v.gradient[i];
      for (std::size_t j = 0; j < d; ++j) hess(i, j) = v.hessian[i][j];
    }
    double f = v.value;
    if (mu > 0.0)
      for (const auto& g : gens) {
        const double s = g.dot(xi);
        f -= mu * std::log(s);
        grad -= mu / s * g;
        hess += mu / (s * s) * g * g.transpose();
      }
    return Eval{f, z.transpose() * grad, z.transpose() * hess * z};
  };

  MsyResult res;
  Eigen::VectorXd w = Eigen::VectorXd::Zero(m);
  std::vector<double> schedule;
  for (double mu = 1.0; mu >= 1e-12 * 0.999; mu /= 10) schedule.push_back(mu);
  schedule.push_back(0.0);

  for (double mu : schedule) {
    for (int it = 0; it < 100; ++it) {
      auto e = evaluate(w, mu);
      Eigen::LLT<Eigen::MatrixXd> llt(e->hess);
      if (llt.info() != Eigen::Success) throw Error(ErrorCode::NewtonDiverged, "reduced Hessian lost definiteness");
      Eigen::VectorXd step = -llt.solve(e->grad);
      const double decrement = -e->grad.dot(step);
      if (e->grad.lpNorm<Eigen::Infinity>() < 1e-14 || decrement < 1e-28) break;
      ++res.iterations;
      double t = 1.0;
      bool moved = false;
      while (t > 1e-14) {
        Eigen::VectorXd trial = w + t * step;
        auto next = evaluate(trial, mu);
        if (next && (next->f <= e->f - 1e-4 * t * decrement ||
                     next->grad.lpNorm<Eigen::Infinity>() <= 0.5 * e->grad.lpNorm<Eigen::Infinity>())) {
          w = trial;
          moved = true;
          break;
        }
        t *= 0.5;
      }
      if (!moved) break;
    }
  }

  Eigen::VectorXd xi = base + z * w;
  res.xi = to_vec(xi);
  auto v = volume(cone, res.xi);
  res.vol = v.value;
  Eigen::VectorXd grad(d), gamma(d);
  Eigen::MatrixXd hess(d, d);
  for (std::size_t i = 0; i < d; ++i) {
    grad[i] = v.gradient[i];
    gamma[i] = cone.gorenstein[i].get_d();
    for (std::size_t j = 0; j < d; ++j) hess(i, j) = v.hessian[i][j];
  }
  Eigen::VectorXd projected = grad - gamma * (gamma.dot(grad) / gamma.squaredNorm());
  res.gradient_norm = projected.norm();
  Eigen::MatrixXd reduced = z.transpose() * hess * z;
  res.reduced_hessian_definite = Eigen::LLT<Eigen::MatrixXd>(reduced).info() == Eigen::Success;
  for (std::size_t i = 0; i < m; ++i) {
    res.reduced_hessian.emplace_back(m);
    for (std::size_t j = 0; j < m; ++j) res.reduced_hessian[i][j] = reduced(i, j);
  }
  if (res.gradient_norm > 1e-10) throw Error(ErrorCode::NewtonDiverged, "volume minimization did not converge");
  return res;
}

QuotientModel quotient(const FanoCone& cone, const RVec& chi_in) {
  const std::size_t d = cone.n + 1;
  if (chi_in.size() != d) throw Error(ErrorCode::InvalidInput, "Reeb vector has wrong dimension");
  if (!cone.in_reeb_interior(std::span<const Rational>(chi_in)))
    throw Error(ErrorCode::UnboundedSection, "Reeb vector is not in the interior of the Reeb cone");
  QuotientModel q;
  q.n = cone.n;
  q.gorenstein = cone.gorenstein;
  const Rational scale = Rational(d) / dot(cone.gorenstein, chi_in);
  q.chi = scale * chi_in;
  q.section = cross_section(cone.moment, {q.chi, LatticeTag::N}, frac(1, static_cast<long>(d)) * cone.gorenstein);

  std::vector<RVec> verts;
  for (const auto& v : q.section.polytope->vertices()) verts.push_back(Rational(d) * v);
  q.polytope = std::make_shared<const Polytope>(Polytope::from_vertices(std::move(verts)));

  // facet <y, u> >= 0 reads <x, (<b_k, u>)_k> >= -1; a non-primitive induced
  // normal m * a gives an orbifold divisor with coefficient 1 - 1/m
  for (const auto& u : cone.moment.facet_normals()) {
    RVec induced(cone.n);
    for (std::size_t k = 0; k < cone.n; ++k) induced[k] = dot(q.section.frame.basis[k], u);
    if (is_zero(induced)) continue;
    mpz_class g = 0;
    for (const auto& c : induced) mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), c.get_num_mpz_t());
    q.divisor_coefficients.push_back(Rational(1) - Rational(1) / Rational(g));
  }
  return q;
}

QuotientModel quotient(const FanoCone&, const Vec&) {
  throw Error(ErrorCode::IrregularQuotient, "quotient needs a rational Reeb vector");
}

RVec QuotientModel::lift(const RVec& theta) const {
  const std::size_t d = n + 1;
  if (theta.size() != n) throw Error(ErrorCode::InvalidInput, "tangent vector has wrong dimension");
  RMat a = section.frame.basis;
  a.push_back(gorenstein);
  RVec rhs = theta;
  rhs.push_back(0);
  (void)d;
  return solve(a, rhs);
}

Vec QuotientModel::lift(const Vec& theta) const {
  const std::size_t d = n + 1;
  if (theta.size() != n) throw Error(ErrorCode::InvalidInput, "tangent vector has wrong dimension");
  Eigen::MatrixXd a(d, d);
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(d);
  for (std::size_t k = 0; k < n; ++k) {
    for (std::size_t j = 0; j < d; ++j) a(k, j) = section.frame.basis[k][j].get_d();
    rhs[k] = theta[k];
  }
  for (std::size_t j = 0; j < d; ++j) a(n, j) = gorenstein[j].get_d();
  Eigen::VectorXd x = a.fullPivLu().solve(rhs);
  return Vec(x.data(), x.data() + d);
}

Vec QuotientModel::project(const Vec& xi) const {
  const std::size_t d = n + 1;
  if (xi.size() != d) throw Error(ErrorCode::InvalidInput, "Reeb vector has wrong dimension");
  const Vec g = to_double(gorenstein);
  const double s = static_cast<double>(d) / dot(std::span<const double>(g), std::span<const double>(xi));
  Vec theta(n, 0.0);
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t j = 0; j < d; ++j) theta[k] += section.frame.basis[k][j].get_d() * (s * xi[j] - chi[j].get_d());
  return theta;
}

Vec QuotientModel::reeb_vector(const Vec& theta) const {
  Vec xi = lift(theta);
  for (std::size_t j = 0; j <= n; ++j) xi[j] += chi[j].get_d();
  return xi;
}

Weight QuotientModel::weight(const Vec& xi) const { return Weight::cone_power(polytope, project(xi), n); }

IntegralResult section_integral(const CrossSection& section, const Weight& g, const Polynomial<Rational>& p) {
  auto r = integrate_poly(*section.polytope, g, p);
  r.value *= section.dh_factor.get_d();
  if (r.exact) *r.exact *= section.dh_factor;
  return r;
}

DhCheck dh_invariance_check(const FanoCone& cone, const RVec& xi, const RVec& chi, const std::vector<unsigned>& monomial,
                            bool with_factor) {
  const std::size_t d = cone.n + 1, n = cone.n;
  if (monomial.size() != d) throw Error(ErrorCode::InvalidInput, "monomial has wrong number of variables");
  auto from = cross_section(cone.moment, {xi, LatticeTag::N});
  auto to = cross_section(cone.moment, {chi, LatticeTag::N});
  auto ambient = [&](const CrossSection& s) {
    std::vector<Polynomial<Rational>> forms;
    for (std::size_t j = 0; j < d; ++j) {
      RVec a(n);
      for (std::size_t k = 0; k < n; ++k) a[k] = s.frame.basis[k][j];
      forms.push_back(Polynomial<Rational>::affine(a, s.frame.origin[j]));
    }
    return forms;
  };
  const auto v = Polynomial<Rational>::monomial(monomial);
  unsigned deg = 0;
  for (auto e : monomial) deg += e;

  DhCheck out;
  out.lhs = section_integral(from, Weight::constant(from.polytope), v.compose(ambient(from)));

  // v is homogeneous of degree deg, so v(y / l) l^{-n-1} = v(y) l^{-deg-n-1}
  Vec lin(n);
  for (std::size_t k = 0; k < n; ++k) lin[k] = dot(to.frame.basis[k], xi).get_d();
  const double offset = dot(to.frame.origin, xi).get_d();
  const int power = static_cast<int>(deg + (with_factor ? n + 1 : 0));
  auto factor = to_double(v.compose(ambient(to)));
  const double nf = dh_factorial(n).get_d();
  out.rhs = nf * to.dh_factor.get_d() *
            integrate_lebesgue(*to.polytope, factor, power ? Profile::inv_pow(lin, offset, power) : Profile::one());
  return out;
}

}  // namespace solitonlab
