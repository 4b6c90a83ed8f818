#include "solitonlab/integrand.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <map>
#include <thread>

#include <boost/math/quadrature/gauss.hpp>

#include "solitonlab/errors.hpp"

namespace solitonlab {

double Profile::operator()(std::span<const double> x) const {
  switch (kind) {
    case Kind::One: return 1.0;
    case Kind::Exp: return std::exp(dot(lin, x) + offset);
    case Kind::InvPow: {
      double s = dot(lin, x) + offset;
      if (!(s > 0.0)) throw Error(ErrorCode::WeightNonpositive, "power base is not positive");
      return std::pow(s, -power);
    }
    case Kind::Point: return point(x);
  }
  return 0.0;
}

Polynomial<double> to_double(const Polynomial<Rational>& p) {
  return p.convert<double>([](const Rational& q) { return q.get_d(); });
}

unsigned worker_count() {
  unsigned hw = std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("SOLITONLAB_THREADS")) {
    long v = std::strtol(env, nullptr, 10);
    if (v >= 1) return static_cast<unsigned>(std::min<long>(v, 256));
  }
  return hw;
}

void parallel_for(std::size_t count, const std::function<void(std::size_t)>& fn) {
  const unsigned workers = static_cast<unsigned>(std::min<std::size_t>(worker_count(), count));
  if (workers <= 1 || count < 4) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> errors(workers);
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      try {
        for (std::size_t i = w; i < count; i += workers) fn(i);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

namespace {

double factorial(unsigned k) {
  static const Vec table = [] {
    Vec t{1.0};
    for (int i = 1; i <= 170; ++i) t.push_back(t.back() * i);
    return t;
  }();
  return table.at(k);
}

Rational factorial_q(unsigned k) {
  mpz_class f;
  mpz_fac_ui(f.get_mpz_t(), k);
  return Rational(f);
}

template <class T>
std::vector<Polynomial<T>> barycentric_forms(const std::vector<std::vector<T>>& verts) {
  const std::size_t n = verts[0].size();
  const std::size_t m = verts.size();
  std::vector<Polynomial<T>> forms;
  for (std::size_t j = 0; j < n; ++j) {
    Polynomial<T> f(m);
    for (std::size_t i = 0; i < m; ++i) {
      typename Polynomial<T>::Exponent e(m, 0);
      e[i] = 1;
      f.add_term(e, verts[i][j]);
    }
    forms.push_back(std::move(f));
  }
  return forms;
}

struct Rule {
  Vec nodes, weights;  // on [0, 1]
};

template <unsigned Q>
Rule make_rule() {
  using G = boost::math::quadrature::gauss<double, Q>;
  Rule r;
  const auto& a = G::abscissa();
  const auto& w = G::weights();
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] == 0.0) {
      r.nodes.push_back(0.5);
      r.weights.push_back(w[i] / 2);
      continue;
    }
    r.nodes.push_back(0.5 * (1 - a[i]));
    r.weights.push_back(w[i] / 2);
    r.nodes.push_back(0.5 * (1 + a[i]));
    r.weights.push_back(w[i] / 2);
  }
  return r;
}

const Rule& rule_for_dim(std::size_t n) {
  static const Rule r25 = make_rule<25>();
  static const Rule r15 = make_rule<15>();
  static const Rule r10 = make_rule<10>();
  return n <= 3 ? r25 : n == 4 ? r15 : r10;
}

// Collapsed-coordinate Gauss-Legendre on one simplex.
double simplex_quadrature(const std::vector<Vec>& verts, double abs_det, const Polynomial<double>& factor,
                          const Profile& profile) {
  const std::size_t n = verts.size() - 1;
  const Rule& rule = rule_for_dim(n);
  const std::size_t q = rule.nodes.size();
  std::vector<std::size_t> idx(n, 0);
  Vec x(n), lambda(n + 1);
  double total = 0.0;
  while (true) {
    double jac = 1.0, rest = 1.0, w = 1.0;
    for (std::size_t k = 0; k < n; ++k) {
      double t = rule.nodes[idx[k]];
      w *= rule.weights[idx[k]];
      lambda[k + 1] = rest * t;
      jac *= std::pow(1 - t, static_cast<double>(n - 1 - k));
      rest *= 1 - t;
    }
    lambda[0] = rest;
    std::fill(x.begin(), x.end(), 0.0);
    for (std::size_t i = 0; i <= n; ++i)
      for (std::size_t j = 0; j < n; ++j) x[j] += lambda[i] * verts[i][j];
    total += w * jac * factor.evaluate(x) * profile(x);
    std::size_t k = 0;
    while (k < n && ++idx[k] == q) idx[k++] = 0;
    if (k == n) break;
  }
  return total * abs_det;
}

// Complete homogeneous symmetric polynomial h_k of the values, all k <= kmax.
Vec complete_homogeneous(std::span<const double> values, std::size_t kmax) {
  Vec h(kmax + 1, 0.0);
  h[0] = 1.0;
  for (double u : values)
    for (std::size_t k = 1; k <= kmax; ++k) h[k] += u * h[k - 1];
  return h;
}

double simplex_closed_form(const std::vector<Vec>& verts, double abs_det, const Polynomial<double>& factor,
                           const Profile& profile, bool& fallback) {
  const std::size_t n = verts.size() - 1;
  Vec node(n + 1);
  for (std::size_t i = 0; i <= n; ++i)
    node[i] = profile.kind == Profile::Kind::One ? 0.0 : dot(profile.lin, verts[i]) + profile.offset;
  if (profile.kind == Profile::Kind::InvPow) {
    for (double z : node)
      if (!(z > 0.0)) throw Error(ErrorCode::WeightNonpositive, "power base is not positive on the body");
    if (static_cast<long>(profile.power) - static_cast<long>(n + factor.degree()) < 1) {
      fallback = true;
      return 0.0;
    }
  }
  auto bary = factor.compose(barycentric_forms(verts));
  double total = 0.0;
  Vec nodes;
  for (const auto& [beta, c] : bary.terms()) {
    unsigned order = 0;
    double beta_fact = 1.0;
    nodes.clear();
    for (std::size_t i = 0; i <= n; ++i) {
      order += beta[i];
      beta_fact *= factorial(beta[i]);
      for (unsigned r = 0; r <= beta[i]; ++r) nodes.push_back(node[i]);
    }
    const unsigned big_n = static_cast<unsigned>(n) + order;
    double dd = 0.0;
    switch (profile.kind) {
      case Profile::Kind::One: dd = 1.0 / factorial(big_n); break;
      case Profile::Kind::Exp: dd = exp_divided_difference(nodes); break;
      case Profile::Kind::InvPow: {
        const unsigned m = static_cast<unsigned>(profile.power);
        const unsigned p = m - big_n;
        Vec inv(nodes.size());
        double prod = 1.0;
        for (std::size_t i = 0; i < nodes.size(); ++i) {
          inv[i] = 1.0 / nodes[i];
          prod *= inv[i];
        }
        dd = factorial(p - 1) / factorial(m - 1) * prod * complete_homogeneous(inv, p - 1)[p - 1];
        break;
      }
      case Profile::Kind::Point: break;
    }
    total += c * beta_fact * dd;
  }
  return total * abs_det;
}

double simplex_integral(const std::vector<Vec>& verts, double abs_det, const Polynomial<double>& factor,
                        const Profile& profile) {
  if (profile.kind == Profile::Kind::Point) return simplex_quadrature(verts, abs_det, factor, profile);
  bool fallback = false;
  double v = simplex_closed_form(verts, abs_det, factor, profile, fallback);
  return fallback ? simplex_quadrature(verts, abs_det, factor, profile) : v;
}

}  // namespace

double exp_divided_difference(std::span<const double> nodes) {
  const std::size_t m = nodes.size();
  const double lo = *std::min_element(nodes.begin(), nodes.end());
  double spread = 0.0;
  for (double z : nodes) spread = std::max(spread, z - lo);
  // exp of the bidiagonal matrix with the shifted nodes on the diagonal and
  // ones above it; entry (0, m-1) is the divided difference.
  int squarings = 0;
  while ((spread + 1.0) / std::ldexp(1.0, squarings) > 0.5) ++squarings;
  const double scale = std::ldexp(1.0, -squarings);
  std::vector<Vec> a(m, Vec(m, 0.0));
  for (std::size_t i = 0; i < m; ++i) {
    a[i][i] = (nodes[i] - lo) * scale;
    if (i + 1 < m) a[i][i + 1] = scale;
  }
  auto mul = [m](const std::vector<Vec>& x, const std::vector<Vec>& y) {
    std::vector<Vec> r(m, Vec(m, 0.0));
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t k = i; k < m; ++k) {
        if (x[i][k] == 0.0) continue;
        for (std::size_t j = k; j < m; ++j) r[i][j] += x[i][k] * y[k][j];
      }
    return r;
  };
  // Horner for the Taylor series; every entry is nonnegative, no cancellation.
  const int terms = 20 + static_cast<int>(m);
  std::vector<Vec> e(m, Vec(m, 0.0));
  for (std::size_t i = 0; i < m; ++i) e[i][i] = 1.0;
  for (int k = terms; k >= 1; --k) {
    e = mul(a, e);
    for (auto& row : e)
      for (auto& v : row) v /= k;
    for (std::size_t i = 0; i < m; ++i) e[i][i] += 1.0;
  }
  for (int s = 0; s < squarings; ++s) e = mul(e, e);
  return std::exp(lo) * e[0][m - 1];
}

Rational integrate_exact(const Polytope& body, const std::vector<Simplex>& pieces, const Polynomial<Rational>& p) {
  const std::size_t n = body.dim();
  std::vector<Rational> parts(pieces.size());
  parallel_for(pieces.size(), [&](std::size_t k) {
    std::vector<RVec> verts;
    for (auto id : pieces[k].vertex_ids) verts.push_back(body.vertices()[id]);
    auto bary = p.compose(barycentric_forms(verts));
    Rational s = 0;
    for (const auto& [beta, c] : bary.terms()) {
      unsigned order = 0;
      Rational num = 1;
      for (auto b : beta) {
        order += b;
        num *= factorial_q(b);
      }
      s += c * num / factorial_q(static_cast<unsigned>(n) + order);
    }
    parts[k] = s * pieces[k].abs_det;
  });
  Rational total = 0;
  for (const auto& v : parts) total += v;
  return total;
}

Rational integrate_exact(const Polytope& body, const Polynomial<Rational>& p) {
  return integrate_exact(body, body.simplices(), p);
}

double integrate_lebesgue(const Polytope& body, const std::vector<Simplex>& pieces, const Polynomial<double>& factor,
                          const Profile& profile) {
  Vec parts(pieces.size());
  parallel_for(pieces.size(), [&](std::size_t k) {
    std::vector<Vec> verts;
    for (auto id : pieces[k].vertex_ids) verts.push_back(body.vertices_double()[id]);
    parts[k] = simplex_integral(verts, pieces[k].abs_det.get_d(), factor, profile);
  });
  double total = 0.0;
  for (double v : parts) total += v;
  return total;
}

double integrate_lebesgue(const Polytope& body, const Polynomial<double>& factor, const Profile& profile) {
  return integrate_lebesgue(body, body.simplices(), factor, profile);
}

double integrate_quadrature(const Polytope& body, const Polynomial<double>& factor, const Profile& profile) {
  const auto& pieces = body.simplices();
  Vec parts(pieces.size());
  parallel_for(pieces.size(), [&](std::size_t k) {
    std::vector<Vec> verts;
    for (auto id : pieces[k].vertex_ids) verts.push_back(body.vertices_double()[id]);
    parts[k] = simplex_quadrature(verts, pieces[k].abs_det.get_d(), factor, profile);
  });
  double total = 0.0;
  for (double v : parts) total += v;
  return total;
}

}  // namespace solitonlab
