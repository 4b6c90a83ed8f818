#include "solitonlab/nastab.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include <Eigen/Dense>

#include "solitonlab/errors.hpp"

namespace solitonlab {

namespace {

struct Barycenter {
  Vec value;
  std::optional<RVec> exact;
  IntegralResult mass;
};

Barycenter barycenter(const Polytope& body, const Weight& g) {
  const std::size_t n = body.dim();
  Barycenter b;
  b.mass = integrate_poly(body, g, Polynomial<Rational>::constant(n, 1));
  b.value.assign(n, 0.0);
  RVec ex(n);
  bool exact = b.mass.exact.has_value();
  for (std::size_t i = 0; i < n; ++i) {
    auto r = integrate_poly(body, g, Polynomial<Rational>::variable(n, i));
    b.value[i] = r.value / b.mass.value;
    if (exact && r.exact)
      ex[i] = *r.exact / *b.mass.exact;
    else
      exact = false;
  }
  if (exact) {
    b.exact = ex;
    b.value = to_double(ex);
  }
  return b;
}

Rational piece_value(const AffinePiece& p, std::span<const Rational> x) { return dot(p.slope, x) + p.offset; }

// P ∩ {piece_j - piece_i >= 0 for all j} (sign = 1) or <= 0 (sign = -1)
std::optional<Polytope> active_region(const Polytope& body, const std::vector<AffinePiece>& pieces, std::size_t i,
                                      int sign) {
  std::vector<Facet> extra;
  for (std::size_t j = 0; j < pieces.size(); ++j) {
    if (j == i) continue;
    RVec a = pieces[j].slope - pieces[i].slope;
    Rational b = pieces[j].offset - pieces[i].offset;
    if (sign < 0) {
      a = Rational(-1) * a;
      b = -b;
    }
    extra.push_back({a, b});
  }
  return clip(body, extra);
}

void check_zero(std::span<const double> u) {
  if (std::all_of(u.begin(), u.end(), [](double x) { return x == 0.0; }))
    throw Error(ErrorCode::ZeroVector, "valuation needs u != 0");
}

}  // namespace

ValuationReport valuation_report(const Polytope& body, const Weight& g, const RVec& u) {
  if (u.size() != body.dim()) throw Error(ErrorCode::InvalidInput, "u has wrong dimension");
  if (is_zero(u)) throw Error(ErrorCode::ZeroVector, "valuation needs u != 0");
  g.check_attached(body);
  g.require_positive();
  auto bar = barycenter(body, g);
  ValuationReport r;
  const Rational a = -body.range(std::span<const Rational>(u)).first;
  r.log_discrepancy_exact = a;
  r.log_discrepancy = a.get_d();
  if (bar.exact) {
    Rational s = dot(*bar.exact, u) + a;
    Rational ding = a - s;
    r.expected_order_exact = s;
    r.ding_exact = ding;
    r.expected_order = s.get_d();
    r.ding = ding.get_d();
  } else {
    Vec ud = to_double(u);
    r.expected_order = dot(std::span<const double>(bar.value), std::span<const double>(ud)) + r.log_discrepancy;
    r.ding = r.log_discrepancy - r.expected_order;
  }
  return r;
}

ValuationReport valuation_report(const Polytope& body, const Weight& g, const Vec& u) {
  if (u.size() != body.dim()) throw Error(ErrorCode::InvalidInput, "u has wrong dimension");
  check_zero(u);
  g.check_attached(body);
  g.require_positive();
  auto bar = barycenter(body, g);
  ValuationReport r;
  r.log_discrepancy = -body.range(std::span<const double>(u)).first;
  r.expected_order = dot(std::span<const double>(bar.value), std::span<const double>(u)) + r.log_discrepancy;
  r.ding = r.log_discrepancy - r.expected_order;
  return r;
}

RVec twist(const RVec& u, const RVec& xi) {
  if (u.size() != xi.size()) throw Error(ErrorCode::InvalidInput, "twist dimension mismatch");
  return u + xi;
}

PLFiltration PLFiltration::from_pieces(const PolytopePtr& body, std::vector<AffinePiece> pieces,
                                       const std::string& combine) {
  if (!body) throw Error(ErrorCode::InvalidInput, "filtration needs a polytope");
  if (pieces.empty()) throw Error(ErrorCode::InvalidInput, "filtration needs at least one affine piece");
  for (const auto& p : pieces)
    if (p.slope.size() != body->dim()) throw Error(ErrorCode::InvalidInput, "affine piece has wrong dimension");
  // identical pieces would give overlapping regions
  std::vector<AffinePiece> unique;
  for (auto& p : pieces) {
    bool seen = false;
    for (const auto& q : unique) seen = seen || (q.slope == p.slope && q.offset == p.offset);
    if (!seen) unique.push_back(std::move(p));
  }
  if (combine == "max") {
    std::vector<std::size_t> active;
    for (std::size_t i = 0; i < unique.size(); ++i)
      if (active_region(*body, unique, i, -1)) active.push_back(i);
    if (active.size() != 1) throw Error(ErrorCode::NotConcave, "max of affine functions is not concave on P");
    unique = {unique[active[0]]};
  } else if (combine != "min") {
    throw Error(ErrorCode::InvalidInput, "combine must be 'min' or 'max'");
  }
  PLFiltration f;
  f.body_ = body;
  f.pieces_ = std::move(unique);
  f.finish();
  return f;
}

PLFiltration PLFiltration::constant(const PolytopePtr& body, Rational c) {
  return from_pieces(body, {{RVec(body->dim(), 0), std::move(c)}});
}

PLFiltration PLFiltration::linear(const PolytopePtr& body, RVec slope, Rational offset) {
  return from_pieces(body, {{std::move(slope), std::move(offset)}});
}

void PLFiltration::finish() {
  regions_.clear();
  vertices_.clear();
  for (std::size_t i = 0; i < pieces_.size(); ++i) {
    regions_.push_back(active_region(*body_, pieces_, i, 1));
    if (regions_.back())
      for (const auto& v : regions_.back()->vertices()) vertices_.push_back(v);
  }
  std::sort(vertices_.begin(), vertices_.end());
  vertices_.erase(std::unique(vertices_.begin(), vertices_.end()), vertices_.end());
}

Rational PLFiltration::operator()(std::span<const Rational> x) const {
  Rational best = piece_value(pieces_[0], x);
  for (std::size_t i = 1; i < pieces_.size(); ++i) {
    Rational v = piece_value(pieces_[i], x);
    if (v < best) best = v;
  }
  return best;
}

double PLFiltration::operator()(std::span<const double> x) const {
  double best = std::numeric_limits<double>::infinity();
  for (const auto& p : pieces_) {
    double v = p.offset.get_d();
    for (std::size_t k = 0; k < x.size(); ++k) v += p.slope[k].get_d() * x[k];
    best = std::min(best, v);
  }
  return best;
}

PLFiltration PLFiltration::twisted(const RVec& xi) const {
  if (xi.size() != body_->dim()) throw Error(ErrorCode::InvalidInput, "twist has wrong dimension");
  std::vector<AffinePiece> p = pieces_;
  for (auto& piece : p) piece.slope = piece.slope + xi;
  return from_pieces(body_, std::move(p));
}

Rational PLFiltration::max_value() const {
  Rational best = (*this)(vertices_[0]);
  for (const auto& v : vertices_) {
    Rational x = (*this)(v);
    if (x > best) best = x;
  }
  return best;
}

Rational PLFiltration::min_value() const {
  const auto& vs = body_->vertices();
  Rational best = (*this)(vs[0]);
  for (const auto& v : vs) {
    Rational x = (*this)(v);
    if (x < best) best = x;
  }
  return best;
}

IntegralResult na_energy(const Polytope& body, const Weight& g, const PLFiltration& f) {
  if (f.polytope().get() != &body) throw Error(ErrorCode::WeightPolytopeMismatch, "filtration lives on another polytope");
  g.check_attached(body);
  g.require_positive();
  const std::size_t n = body.dim();
  auto mass = integrate_region(body, g.integrand(), Polynomial<Rational>::constant(n, 1));
  IntegralResult total{0.0, Rational(0)};
  for (std::size_t i = 0; i < f.pieces().size(); ++i) {
    const auto& region = f.regions()[i];
    if (!region) continue;
    const auto& p = f.pieces()[i];
    auto r = integrate_region(*region, g.integrand(), Polynomial<Rational>::affine(p.slope, p.offset));
    total.value += r.value;
    if (total.exact && r.exact)
      *total.exact += *r.exact;
    else
      total.exact.reset();
  }
  if (total.exact && mass.exact) {
    Rational e = *total.exact / *mass.exact;
    return {e.get_d(), e};
  }
  return {total.value / mass.value, std::nullopt};
}

NaReport na_eval(const Polytope& body, const Weight& g, const PLFiltration& f) {
  NaReport r;
  auto e = na_energy(body, g, f);
  const Rational lam = f.max_value(), lo = f.min_value();
  r.energy = e.value;
  r.lambda_max = lam.get_d();
  r.lambda_min = lo.get_d();
  r.lambda_max_exact = lam;
  r.lambda_min_exact = lo;
  if (e.exact) {
    r.energy_exact = e.exact;
    Rational j = lam - *e.exact;
    r.j_exact = j;
    r.j = j.get_d();
  } else {
    r.j = r.lambda_max - r.energy;
  }

  const std::size_t n = body.dim();
  auto mass = integrate_region(body, g.integrand(), Polynomial<Rational>::constant(n, 1));
  RVec breaks;
  for (const auto& v : f.subdivision_vertices()) breaks.push_back(f(v));
  std::sort(breaks.begin(), breaks.end());
  breaks.erase(std::unique(breaks.begin(), breaks.end()), breaks.end());
  const unsigned degree = g.is_polynomial() ? static_cast<unsigned>(n + g.integrand().exact->degree()) : 0;
  const auto one = Polynomial<Rational>::constant(n, 1);
  r.dh = PiecewiseMeasure::from_upper_mass(breaks, degree, [&](const Rational& t) -> IntegralResult {
    std::vector<Facet> level;
    for (const auto& p : f.pieces()) level.push_back({p.slope, p.offset - t});
    auto region = clip(body, level);
    if (!region) return {0.0, Rational(0)};
    auto m = integrate_region(*region, g.integrand(), one);
    if (m.exact && mass.exact) {
      Rational q = *m.exact / *mass.exact;
      return {q.get_d(), q};
    }
    return {m.value / mass.value, std::nullopt};
  });
  return r;
}

ReducedJ reduced_jna(const Polytope& body, const Weight& g, const PLFiltration& f, const std::vector<RVec>& basis) {
  const std::size_t n = body.dim(), k = basis.size();
  for (const auto& b : basis)
    if (b.size() != n) throw Error(ErrorCode::InvalidInput, "subspace vector has wrong dimension");
  if (k > 0 && rank(RMat(basis)) != k) throw Error(ErrorCode::InvalidInput, "subspace vectors are dependent");
  const double energy = na_energy(body, g, f).value;
  const auto bar = barycenter(body, g).value;

  // J(f + <., B t>) = max_v (f(v) + <v - xbar, B t>) - E(f): a max of affine
  // functions of t, minimized at a vertex of its epigraph.
  const auto& verts = f.subdivision_vertices();
  const std::size_t m = verts.size();
  std::vector<double> c(m);
  std::vector<Eigen::VectorXd> w(m, Eigen::VectorXd::Zero(static_cast<Eigen::Index>(k)));
  for (std::size_t v = 0; v < m; ++v) {
    c[v] = f(verts[v]).get_d();
    for (std::size_t j = 0; j < k; ++j)
      for (std::size_t i = 0; i < n; ++i) w[v][j] += (verts[v][i].get_d() - bar[i]) * basis[j][i].get_d();
  }
  auto objective = [&](const Eigen::VectorXd& t) {
    double best = -std::numeric_limits<double>::infinity();
    for (std::size_t v = 0; v < m; ++v) best = std::max(best, c[v] + w[v].dot(t));
    return best;
  };

  Eigen::VectorXd best_t = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(k));
  double best = objective(best_t);
  std::vector<std::size_t> pick(k + 1);
  std::function<void(std::size_t, std::size_t)> choose = [&](std::size_t depth, std::size_t from) {
    if (depth == k + 1) {
      Eigen::MatrixXd a(k + 1, k + 1);
      Eigen::VectorXd rhs(k + 1);
      for (std::size_t r = 0; r <= k; ++r) {
        for (std::size_t j = 0; j < k; ++j) a(r, j) = w[pick[r]][j];
        a(r, k) = -1.0;
        rhs[r] = -c[pick[r]];
      }
      Eigen::FullPivLU<Eigen::MatrixXd> lu(a);
      if (lu.rank() < static_cast<Eigen::Index>(k + 1)) return;
      Eigen::VectorXd sol = lu.solve(rhs);
      Eigen::VectorXd t = sol.head(k);
      const double val = objective(t);
      if (val < best - 1e-15) {
        best = val;
        best_t = t;
      }
      return;
    }
    for (std::size_t i = from; i < m; ++i) {
      pick[depth] = i;
      choose(depth + 1, i + 1);
    }
  };
  if (k > 0) choose(0, 0);

  ReducedJ r;
  r.value = best - energy;
  r.xi.assign(n, 0.0);
  for (std::size_t j = 0; j < k; ++j)
    for (std::size_t i = 0; i < n; ++i) r.xi[i] += best_t[j] * basis[j][i].get_d();
  return r;
}

double filtration_shadow(const PLFiltration& f, const Vec& u) {
  const auto& body = *f.polytope();
  if (u.size() != body.dim()) throw Error(ErrorCode::InvalidInput, "u has wrong dimension");
  double top = -std::numeric_limits<double>::infinity();
  for (const auto& v : f.subdivision_vertices()) {
    Vec x = to_double(v);
    top = std::max(top, f(std::span<const double>(x)) - dot(std::span<const double>(x), std::span<const double>(u)));
  }
  return top + body.range(std::span<const double>(u)).first;
}

namespace {

// Nelder-Mead minimization; returns the best point and value.
std::pair<Vec, double> nelder_mead(const std::function<double(const Vec&)>& fn, Vec start, double step, int max_evals,
                                   int& evals) {
  const std::size_t n = start.size();
  std::vector<Vec> simplex{start};
  for (std::size_t i = 0; i < n; ++i) {
    Vec p = start;
    p[i] += step;
    simplex.push_back(p);
  }
  std::vector<double> val;
  for (const auto& p : simplex) {
    val.push_back(fn(p));
    ++evals;
  }
  int used = static_cast<int>(n + 1);
  auto blend = [&](const Vec& a, const Vec& b, double t) {
    Vec r(n);
    for (std::size_t i = 0; i < n; ++i) r[i] = a[i] + t * (b[i] - a[i]);
    return r;
  };
  while (used < max_evals) {
    std::vector<std::size_t> order(n + 1);
    for (std::size_t i = 0; i <= n; ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return val[a] < val[b]; });
    const std::size_t best = order[0], worst = order[n], second = order[n - 1];
    if (std::abs(val[worst] - val[best]) < 1e-15 * (1.0 + std::abs(val[best]))) {
      double spread = 0.0;
      for (const auto& p : simplex)
        for (std::size_t i = 0; i < n; ++i) spread = std::max(spread, std::abs(p[i] - simplex[best][i]));
      if (spread < 1e-12) break;
    }
    Vec centroid(n, 0.0);
    for (std::size_t i = 0; i <= n; ++i)
      if (i != worst)
        for (std::size_t k = 0; k < n; ++k) centroid[k] += simplex[i][k] / n;
    auto try_point = [&](double t) {
      Vec p = blend(centroid, simplex[worst], t);
      ++used;
      ++evals;
      return std::make_pair(p, fn(p));
    };
    auto [refl, fr] = try_point(-1.0);
    if (fr < val[best]) {
      auto [exp, fe] = try_point(-2.0);
      if (fe < fr) {
        simplex[worst] = exp;
        val[worst] = fe;
      } else {
        simplex[worst] = refl;
        val[worst] = fr;
      }
    } else if (fr < val[second]) {
      simplex[worst] = refl;
      val[worst] = fr;
    } else {
      auto [con, fc] = try_point(fr < val[worst] ? -0.5 : 0.5);
      if (fc < std::min(fr, val[worst])) {
        simplex[worst] = con;
        val[worst] = fc;
      } else {
        for (std::size_t i = 0; i <= n; ++i) {
          if (i == best) continue;
          simplex[i] = blend(simplex[best], simplex[i], 0.5);
          val[i] = fn(simplex[i]);
          ++used;
          ++evals;
        }
      }
    }
  }
  std::size_t best = 0;
  for (std::size_t i = 1; i <= n; ++i)
    if (val[i] < val[best]) best = i;
  return {simplex[best], val[best]};
}

std::vector<Vec> sphere_points(std::size_t n, int count, std::mt19937_64& rng) {
  std::vector<Vec> pts;
  if (n == 1) return {{1.0}, {-1.0}};
  if (n == 2) {
    for (int k = 0; k < count; ++k) {
      const double a = 2 * std::numbers::pi * k / count;
      pts.push_back({std::cos(a), std::sin(a)});
    }
    return pts;
  }
  if (n == 3) {
    const double golden = std::numbers::pi * (3.0 - std::sqrt(5.0));
    for (int k = 0; k < count; ++k) {
      const double z = 1.0 - 2.0 * (k + 0.5) / count, r = std::sqrt(1.0 - z * z);
      pts.push_back({r * std::cos(golden * k), r * std::sin(golden * k), z});
    }
    return pts;
  }
  std::normal_distribution<double> normal;
  for (int k = 0; k < count; ++k) {
    Vec p(n);
    double s = 0.0;
    for (auto& x : p) {
      x = normal(rng);
      s += x * x;
    }
    for (auto& x : p) x /= std::sqrt(s);
    pts.push_back(p);
  }
  return pts;
}

Vec normalized(Vec v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  s = std::sqrt(s);
  if (s > 0.0)
    for (auto& x : v) x /= s;
  return v;
}

}  // namespace

DeltaEstimate delta_estimate(const Polytope& body, const Weight& g, const DeltaOptions& opt) {
  g.check_attached(body);
  g.require_positive();
  const std::size_t n = body.dim();
  const Vec bar = barycenter(body, g).value;
  std::vector<Vec> verts;
  for (const auto& v : body.vertices()) verts.push_back(to_double(v));

  const double nan = std::numeric_limits<double>::quiet_NaN();
  // A/S for w != 0; NaN at the origin
  auto ratio = [&](const Vec& w) {
    double norm = 0.0;
    for (double x : w) norm = std::max(norm, std::abs(x));
    if (norm < 1e-12) return nan;
    double lo = std::numeric_limits<double>::infinity();
    for (const auto& v : verts) lo = std::min(lo, dot(std::span<const double>(v), std::span<const double>(w)));
    const double a = -lo;
    const double s = dot(std::span<const double>(bar), std::span<const double>(w)) + a;
    return a / s;
  };

  std::vector<Vec> sub;
  if (opt.reduced) {
    if (opt.subspace.empty())
      for (std::size_t i = 0; i < n; ++i) {
        Vec e(n, 0.0);
        e[i] = 1.0;
        sub.push_back(e);
      }
    else
      for (const auto& b : opt.subspace) {
        if (b.size() != n) throw Error(ErrorCode::InvalidInput, "subspace vector has wrong dimension");
        sub.push_back(to_double(b));
      }
  }
  auto shifted = [&](const Vec& u, const Vec& t) {
    Vec w = u;
    for (std::size_t j = 0; j < sub.size(); ++j)
      for (std::size_t i = 0; i < n; ++i) w[i] += t[j] * sub[j][i];
    return w;
  };

  // outer objective: min over u; reduced runs an inner max over the subspace
  struct Value {
    double value;
    Vec t;
    int evals;
  };
  auto outer = [&](const Vec& u, std::uint64_t start_seed) -> Value {
    if (!opt.reduced) {
      double r = ratio(u);
      return {std::isnan(r) ? std::numeric_limits<double>::infinity() : r, {}, 1};
    }
    std::mt19937_64 rng(start_seed);
    std::uniform_real_distribution<double> unif(-1.0, 1.0);
    int evals = 0;
    auto neg = [&](const Vec& t) {
      double r = ratio(shifted(u, t));
      return std::isnan(r) ? std::numeric_limits<double>::infinity() : -r;
    };
    Vec best_t(sub.size(), 0.0);
    double best = neg(best_t);
    ++evals;
    for (int s = 0; s < 3; ++s) {
      Vec t0(sub.size(), 0.0);
      if (s > 0)
        for (auto& x : t0) x = unif(rng);
      auto [t, v] = nelder_mead(neg, t0, 0.25, 400, evals);
      if (v < best) {
        best = v;
        best_t = t;
      }
    }
    return {-best, best_t, evals};
  };

  std::mt19937_64 rng(opt.seed);
  std::vector<Vec> starts = sphere_points(n, std::max(opt.sphere_points, 1), rng);
  // fan rays: A/S is linear-fractional on each fan cone, so rays are natural candidates
  for (const auto& f : body.facets()) starts.push_back(normalized(to_double(f.normal)));
  std::vector<std::uint64_t> seeds(starts.size());
  for (auto& s : seeds) s = rng();

  std::vector<Value> values(starts.size());
  parallel_for(starts.size(), [&](std::size_t i) { values[i] = outer(starts[i], seeds[i]); });

  DeltaEstimate est;
  std::vector<std::size_t> order(starts.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return values[a].value < values[b].value; });
  for (const auto& v : values) est.evaluations += v.evals;

  std::size_t best = order[0];
  Vec best_u = starts[best];
  double best_val = values[best].value;
  Vec best_t = values[best].t;

  const std::size_t refine = std::min<std::size_t>(order.size(), static_cast<std::size_t>(std::max(opt.refine_starts, 0)));
  std::vector<std::pair<Vec, Value>> refined(refine);
  parallel_for(refine, [&](std::size_t r) {
    const std::size_t i = order[r];
    int evals = 0;
    auto fn = [&](const Vec& u) { return outer(normalized(u), seeds[i]).value; };
    auto [u, v] = nelder_mead(fn, starts[i], 0.05, opt.reduced ? 150 : 600, evals);
    Vec un = normalized(u);
    Value val = outer(un, seeds[i]);
    val.evals += evals;
    refined[r] = {un, val};
  });
  for (const auto& [u, val] : refined) {
    est.evaluations += val.evals;
    if (val.value < best_val - 1e-15) {
      best_val = val.value;
      best_u = u;
      best_t = val.t;
    }
  }

  est.delta = best_val;
  est.witness_u = best_u;
  if (opt.reduced) {
    Vec xi(n, 0.0);
    for (std::size_t j = 0; j < sub.size(); ++j)
      for (std::size_t i = 0; i < n; ++i) xi[i] += best_t[j] * sub[j][i];
    est.witness_xi = xi;
  }
  return est;
}

}  // namespace solitonlab
