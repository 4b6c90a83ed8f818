#include "solitonlab/toricfunc.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <boost/math/quadrature/gauss.hpp>

#include "solitonlab/dh.hpp"
#include "solitonlab/errors.hpp"

namespace solitonlab {

namespace {

// p(t) = sum c_k t^k on [0, 1] matching value, slope, curvature at both ends of
// a cell of width h.
struct Quintic {
  double c[6];
  double h;

  Quintic(double width, double f0, double d0, double s0, double f1, double d1, double s1) : h(width) {
    c[0] = f0;
    c[1] = h * d0;
    c[2] = 0.5 * h * h * s0;
    const double F = f1 - (c[0] + c[1] + c[2]);
    const double D = h * d1 - (c[1] + 2 * c[2]);
    const double S = h * h * s1 - 2 * c[2];
    c[3] = 10 * F - 4 * D + 0.5 * S;
    c[4] = -15 * F + 7 * D - S;
    c[5] = 6 * F - 3 * D + 0.5 * S;
  }

  double f(double t) const { return c[0] + t * (c[1] + t * (c[2] + t * (c[3] + t * (c[4] + t * c[5])))); }
  double df(double t) const {
    return (c[1] + t * (2 * c[2] + t * (3 * c[3] + t * (4 * c[4] + t * 5 * c[5])))) / h;
  }
  double d2f(double t) const { return (2 * c[2] + t * (6 * c[3] + t * (12 * c[4] + t * 20 * c[5]))) / (h * h); }

  // Curvature kept within a factor 2 of the nodal values; near the box ends
  // the cells are a few ulps wide and the polynomial's second derivative is
  // rounding noise.
  double curvature(double t, double s0, double s1) const {
    const double lo = std::min(s0, s1), hi = std::max(s0, s1);
    return std::clamp(d2f(t), 0.5 * std::max(lo, 0.0), 2 * std::max(hi, 0.0));
  }

  // t in [0, 1] with df(t) = target, assuming df(0) <= target <= df(1)
  double solve_slope(double target) const {
    double lo = 0.0, hi = 1.0;
    double t = 0.5;
    const double d0 = df(0.0), d1 = df(1.0);
    if (d1 > d0) t = std::clamp((target - d0) / (d1 - d0), 0.0, 1.0);
    for (int it = 0; it < 100; ++it) {
      const double r = df(t) - target;
      if (r == 0) return t;
      if (r < 0)
        lo = t;
      else
        hi = t;
      const double s = d2f(t) * h;
      double next = s > 0 ? t - r / s : -1.0;
      if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
      if (std::abs(next - t) < 1e-16) return next;
      t = next;
      if (hi - lo < 1e-16) break;
    }
    return t;
  }
};

std::pair<double, double> interval_bounds(const PolytopePtr& body) {
  if (!body) throw Error(ErrorCode::InvalidInput, "missing polytope");
  if (body->dim() != 1) throw Error(ErrorCode::InvalidInput, "toric potentials are implemented in dimension 1 only");
  double a = std::numeric_limits<double>::infinity(), b = -a;
  for (const auto& v : body->vertices_double()) {
    a = std::min(a, v[0]);
    b = std::max(b, v[0]);
  }
  return {a, b};
}

void check_grid(const GridSpec& grid) {
  if (grid.points < 9 || grid.points % 2 == 0)
    throw Error(ErrorCode::InvalidInput, "grid needs an odd number of points (at least 9)");
  if (!(grid.half_width > 0)) throw Error(ErrorCode::InvalidInput, "grid half width must be positive");
}

Vec grid_nodes(const GridSpec& grid) {
  Vec x(grid.points);
  const std::size_t mid = grid.points / 2;
  const double h = grid.half_width / double(mid);
  for (std::size_t i = 0; i < grid.points; ++i) x[i] = (double(i) - double(mid)) * h;
  return x;
}

// 6th order central differences where possible, lower order near the ends.
Vec first_difference(const Vec& v, double h) {
  const std::size_t n = v.size();
  Vec d(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (i >= 3 && i + 3 < n)
      d[i] = (-v[i - 3] + 9 * v[i - 2] - 45 * v[i - 1] + 45 * v[i + 1] - 9 * v[i + 2] + v[i + 3]) / (60 * h);
    else if (i >= 1 && i + 1 < n)
      d[i] = (v[i + 1] - v[i - 1]) / (2 * h);
    else if (i == 0)
      d[i] = (-3 * v[0] + 4 * v[1] - v[2]) / (2 * h);
    else
      d[i] = (3 * v[n - 1] - 4 * v[n - 2] + v[n - 3]) / (2 * h);
  }
  return d;
}

Vec second_difference(const Vec& v, double h) {
  const std::size_t n = v.size();
  Vec d(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (i >= 3 && i + 3 < n)
      d[i] = (v[i - 3] / 90 - 3 * v[i - 2] / 20 + 1.5 * v[i - 1] - 49 * v[i] / 18 + 1.5 * v[i + 1] -
              3 * v[i + 2] / 20 + v[i + 3] / 90) /
             (h * h);
    else if (i >= 1 && i + 1 < n)
      d[i] = (v[i + 1] - 2 * v[i] + v[i - 1]) / (h * h);
    else if (i == 0)
      d[i] = (v[0] - 2 * v[1] + v[2]) / (h * h);
    else
      d[i] = (v[n - 1] - 2 * v[n - 2] + v[n - 3]) / (h * h);
  }
  return d;
}

// pool adjacent violators, equal weights
Vec isotonic(const Vec& s) {
  std::vector<double> mean;
  std::vector<std::size_t> count;
  for (double v : s) {
    mean.push_back(v);
    count.push_back(1);
    while (mean.size() > 1 && mean[mean.size() - 2] > mean.back()) {
      const std::size_t k = mean.size();
      const double m = (mean[k - 2] * count[k - 2] + mean[k - 1] * count[k - 1]) / double(count[k - 2] + count[k - 1]);
      count[k - 2] += count[k - 1];
      mean[k - 2] = m;
      mean.pop_back();
      count.pop_back();
    }
  }
  Vec out;
  out.reserve(s.size());
  for (std::size_t k = 0; k < mean.size(); ++k) out.insert(out.end(), count[k], mean[k]);
  return out;
}

double weight_at(const Weight& g, double a, double b, double y) {
  const double p = std::clamp(y, a, b);
  return g.evaluate(std::span<const double>(&p, 1));
}

constexpr double tail_tol = 1e-10;

}  // namespace

// ---------------------------------------------------------------- ToricPotential

ToricPotential ToricPotential::from_data(const PolytopePtr& interval, Vec u, Vec du, Vec d2u, GridSpec grid) {
  check_grid(grid);
  if (u.size() != grid.points || du.size() != grid.points || d2u.size() != grid.points)
    throw Error(ErrorCode::InvalidInput, "potential samples do not match the grid");
  ToricPotential p;
  p.body_ = interval;
  std::tie(p.a_, p.b_) = interval_bounds(interval);
  p.grid_ = grid;
  p.x_ = grid_nodes(grid);
  p.u_ = std::move(u);
  p.du_ = std::move(du);
  p.d2u_ = std::move(d2u);
  p.normalize();
  return p;
}

void ToricPotential::normalize() {
  for (std::size_t i = 0; i < x_.size(); ++i) {
    if (!std::isfinite(u_[i]) || !std::isfinite(du_[i]) || !std::isfinite(d2u_[i]))
      throw Error(ErrorCode::InvalidInput, "non-finite potential sample");
  }
  auto& du = du_;
  auto& d2u = d2u_;
  for (std::size_t i = 0; i < x_.size(); ++i) {
    if (du[i] < a_ - 1e-8 || du[i] > b_ + 1e-8)
      throw Error(ErrorCode::InvalidInput, "gradient leaves the polytope at x = " + std::to_string(x_[i]));
    du[i] = std::clamp(du[i], a_, b_);
    if (d2u[i] < -1e-10) throw Error(ErrorCode::NotConvex, "negative curvature at x = " + std::to_string(x_[i]));
    d2u[i] = std::max(d2u[i], 0.0);
    if (i > 0 && du[i] < du[i - 1] - 1e-10)
      throw Error(ErrorCode::NotConvex, "decreasing slope at x = " + std::to_string(x_[i]));
  }
  for (std::size_t i = 1; i < du.size(); ++i) du[i] = std::max(du[i], du[i - 1]);
}

ToricPotential ToricPotential::from_function(const PolytopePtr& interval, const Fn& u, const Fn& du, const Fn& d2u,
                                             GridSpec grid) {
  check_grid(grid);
  const Vec x = grid_nodes(grid);
  Vec a(x.size()), b(x.size()), c(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    a[i] = u(x[i]);
    b[i] = du(x[i]);
    c[i] = d2u(x[i]);
  }
  return from_data(interval, std::move(a), std::move(b), std::move(c), grid);
}

ToricPotential ToricPotential::from_samples(const PolytopePtr& interval, const Vec& values, GridSpec grid) {
  check_grid(grid);
  if (values.size() != grid.points) throw Error(ErrorCode::InvalidInput, "potential samples do not match the grid");
  const auto [a, b] = interval_bounds(interval);
  const std::size_t n = values.size(), mid = n / 2;
  const double h = grid.half_width / double(mid);
  Vec slope(n - 1);
  for (std::size_t i = 0; i + 1 < n; ++i) slope[i] = (values[i + 1] - values[i]) / h;
  slope = isotonic(slope);
  for (auto& s : slope) s = std::clamp(s, a, b);
  Vec v(n);
  v[mid] = values[mid];
  for (std::size_t i = mid; i + 1 < n; ++i) v[i + 1] = v[i] + h * slope[i];
  for (std::size_t i = mid; i > 0; --i) v[i - 1] = v[i] - h * slope[i - 1];
  Vec du = first_difference(v, h), d2u = second_difference(v, h);
  for (std::size_t i = 0; i < n; ++i) {
    du[i] = std::clamp(du[i], a, b);
    if (i > 0) du[i] = std::max(du[i], du[i - 1]);
    d2u[i] = std::max(d2u[i], 0.0);
  }
  return from_data(interval, std::move(v), std::move(du), std::move(d2u), grid);
}

ToricPotential ToricPotential::canonical(const PolytopePtr& interval, GridSpec grid) {
  const auto [a, b] = interval_bounds(interval);
  const double c = 0.5 * (a + b), r = 0.5 * (b - a);
  const double log2 = std::log(2.0);
  return from_function(
      interval,
      [=](double x) {
        const double ax = std::abs(x);
        return c * x + r * (ax + 2 * std::log1p(std::exp(-ax)) - 2 * log2) + log2;
      },
      [=](double x) { return c + r * std::tanh(0.5 * x); },
      [=](double x) {
        const double e = std::exp(-std::abs(x));
        return 2 * r * e / ((1 + e) * (1 + e));
      },
      grid);
}

namespace {

struct CellPoint {
  std::size_t cell;
  double t;
};

CellPoint locate_uniform(const Vec& x, double at) {
  const std::size_t n = x.size();
  const double h = x[1] - x[0];
  double s = (at - x[0]) / h;
  std::size_t k = s <= 0 ? 0 : std::min<std::size_t>(n - 2, std::size_t(s));
  return {k, std::clamp((at - x[k]) / h, 0.0, 1.0)};
}

Quintic cell_of(const Vec& x, const Vec& f, const Vec& df, const Vec& d2f, std::size_t k) {
  return Quintic(x[k + 1] - x[k], f[k], df[k], d2f[k], f[k + 1], df[k + 1], d2f[k + 1]);
}

}  // namespace

double ToricPotential::value(double at) const {
  if (at <= x_.front()) return u_.front() + du_.front() * (at - x_.front());
  if (at >= x_.back()) return u_.back() + du_.back() * (at - x_.back());
  auto [k, t] = locate_uniform(x_, at);
  return cell_of(x_, u_, du_, d2u_, k).f(t);
}

double ToricPotential::slope(double at) const {
  if (at <= x_.front()) return du_.front();
  if (at >= x_.back()) return du_.back();
  auto [k, t] = locate_uniform(x_, at);
  return cell_of(x_, u_, du_, d2u_, k).df(t);
}

double ToricPotential::curvature(double at) const {
  if (at <= x_.front() || at >= x_.back()) return 0.0;
  auto [k, t] = locate_uniform(x_, at);
  return cell_of(x_, u_, du_, d2u_, k).curvature(t, d2u_[k], d2u_[k + 1]);
}

double ToricPotential::conjugate_point(double y) const {
  if (y <= du_.front()) return x_.front();
  if (y >= du_.back()) return x_.back();
  const auto it = std::upper_bound(du_.begin(), du_.end(), y);
  const std::size_t k = std::size_t(it - du_.begin()) - 1;
  if (du_[k + 1] <= du_[k]) return x_[k];
  const Quintic q = cell_of(x_, u_, du_, d2u_, k);
  return x_[k] + q.solve_slope(y) * q.h;
}

double ToricPotential::dual(double y) const {
  const double xs = conjugate_point(y);
  return xs * y - value(xs);
}

ToricPotential ToricPotential::shifted(double c) const {
  ToricPotential p = *this;
  for (auto& v : p.u_) v += c;
  return p;
}

ToricPotential ToricPotential::blend(const ToricPotential& other, double t) const {
  if (other.x_.size() != x_.size() || other.grid_.half_width != grid_.half_width)
    throw Error(ErrorCode::InvalidInput, "potentials live on different grids");
  Vec u(x_.size()), du(x_.size()), d2u(x_.size());
  for (std::size_t i = 0; i < x_.size(); ++i) {
    u[i] = (1 - t) * u_[i] + t * other.u_[i];
    du[i] = (1 - t) * du_[i] + t * other.du_[i];
    d2u[i] = (1 - t) * d2u_[i] + t * other.d2u_[i];
  }
  return from_data(body_, std::move(u), std::move(du), std::move(d2u), grid_);
}

// ---------------------------------------------------------------- SymplecticPotential

SymplecticPotential SymplecticPotential::from_data(const PolytopePtr& interval, Vec nodes, Vec phi, Vec dphi,
                                                   Vec d2phi) {
  const auto [a, b] = interval_bounds(interval);
  const std::size_t n = nodes.size();
  if (n < 2 || phi.size() != n || dphi.size() != n || d2phi.size() != n)
    throw Error(ErrorCode::InvalidInput, "symplectic potential samples do not match the nodes");
  for (std::size_t i = 0; i < n; ++i) {
    if (nodes[i] < a || nodes[i] > b) throw Error(ErrorCode::InvalidInput, "node outside the polytope");
    if (i > 0 && !(nodes[i] > nodes[i - 1])) throw Error(ErrorCode::InvalidInput, "nodes must increase");
    if (!std::isfinite(phi[i]) || !std::isfinite(dphi[i]) || !std::isfinite(d2phi[i]))
      throw Error(ErrorCode::InvalidInput, "non-finite symplectic sample");
    if (d2phi[i] < 0) throw Error(ErrorCode::NotConvex, "negative curvature of the symplectic potential");
    if (i > 0 && dphi[i] < dphi[i - 1]) throw Error(ErrorCode::NotConvex, "decreasing symplectic slope");
  }
  SymplecticPotential p;
  p.body_ = interval;
  p.y_ = std::move(nodes);
  p.phi_ = std::move(phi);
  p.dphi_ = std::move(dphi);
  p.d2phi_ = std::move(d2phi);
  return p;
}

SymplecticPotential SymplecticPotential::from_function(const PolytopePtr& interval, const Fn& phi, const Fn& dphi,
                                                       const Fn& d2phi, const Vec& nodes) {
  Vec a(nodes.size()), b(nodes.size()), c(nodes.size());
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    a[i] = phi(nodes[i]);
    b[i] = dphi(nodes[i]);
    c[i] = d2phi(nodes[i]);
  }
  return from_data(interval, nodes, std::move(a), std::move(b), std::move(c));
}

namespace {

std::size_t locate_sorted(const Vec& y, double at) {
  const auto it = std::upper_bound(y.begin(), y.end(), at);
  std::size_t k = it == y.begin() ? 0 : std::size_t(it - y.begin()) - 1;
  return std::min(k, y.size() - 2);
}

}  // namespace

double SymplecticPotential::value(double at) const {
  if (at <= y_.front()) return phi_.front() + dphi_.front() * (at - y_.front());
  if (at >= y_.back()) return phi_.back() + dphi_.back() * (at - y_.back());
  const std::size_t k = locate_sorted(y_, at);
  const Quintic q = cell_of(y_, phi_, dphi_, d2phi_, k);
  return q.f((at - y_[k]) / q.h);
}

double SymplecticPotential::slope(double at) const {
  if (at <= y_.front()) return dphi_.front();
  if (at >= y_.back()) return dphi_.back();
  const std::size_t k = locate_sorted(y_, at);
  const Quintic q = cell_of(y_, phi_, dphi_, d2phi_, k);
  return q.df((at - y_[k]) / q.h);
}

double SymplecticPotential::conjugate_point(double x) const {
  if (x <= dphi_.front()) return y_.front();
  if (x >= dphi_.back()) return y_.back();
  const auto it = std::upper_bound(dphi_.begin(), dphi_.end(), x);
  const std::size_t k = std::size_t(it - dphi_.begin()) - 1;
  if (dphi_[k + 1] <= dphi_[k]) return y_[k];
  const Quintic q = cell_of(y_, phi_, dphi_, d2phi_, k);
  return y_[k] + q.solve_slope(x) * q.h;
}

SymplecticPotential SymplecticPotential::shifted(double c) const {
  SymplecticPotential p = *this;
  for (auto& v : p.phi_) v += c;
  return p;
}

// ---------------------------------------------------------------- Legendre

Vec canonical_nodes(const PolytopePtr& interval, GridSpec grid) {
  check_grid(grid);
  const auto [a, b] = interval_bounds(interval);
  const double c = 0.5 * (a + b), r = 0.5 * (b - a);
  Vec y = grid_nodes(grid);
  for (auto& v : y) v = std::clamp(c + r * std::tanh(0.5 * v), a, b);
  // keep strictly increasing where tanh saturates
  for (std::size_t i = 1; i < y.size(); ++i)
    if (!(y[i] > y[i - 1])) y[i] = std::nextafter(y[i - 1], b + 1);
  return y;
}

SymplecticPotential legendre(const ToricPotential& u, const Vec& nodes) {
  const std::size_t n = nodes.size();
  Vec phi(n), dphi(n), d2phi(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double xs = u.conjugate_point(nodes[i]);
    phi[i] = xs * nodes[i] - u.value(xs);
    dphi[i] = xs;
    const double k = u.curvature(xs);
    d2phi[i] = k > 0 ? 1.0 / k : 0.0;
  }
  return SymplecticPotential::from_data(u.polytope(), nodes, std::move(phi), std::move(dphi), std::move(d2phi));
}

SymplecticPotential legendre(const ToricPotential& u) { return legendre(u, canonical_nodes(u.polytope(), u.grid())); }

ToricPotential legendre(const SymplecticPotential& phi, GridSpec grid) {
  check_grid(grid);
  const Vec x = grid_nodes(grid);
  Vec u(x.size()), du(x.size()), d2u(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double ys = phi.conjugate_point(x[i]);
    u[i] = x[i] * ys - phi.value(ys);
    du[i] = ys;
    const std::size_t k = locate_sorted(phi.nodes(), ys);
    const auto& y = phi.nodes();
    const Quintic q = cell_of(y, phi.values(), phi.slopes(), phi.curvatures(), k);
    const double c = q.curvature(std::clamp((ys - y[k]) / q.h, 0.0, 1.0), phi.curvatures()[k], phi.curvatures()[k + 1]);
    d2u[i] = c > 0 ? 1.0 / c : 0.0;
  }
  return ToricPotential::from_data(phi.polytope(), std::move(u), std::move(du), std::move(d2u), grid);
}

ToricPotential geodesic(const SymplecticPotential& phi0, const SymplecticPotential& phi1, double t, GridSpec grid) {
  if (!(t >= 0 && t <= 1)) throw Error(ErrorCode::InvalidInput, "geodesic parameter must lie in [0, 1]");
  if (phi0.nodes() != phi1.nodes()) throw Error(ErrorCode::InvalidInput, "symplectic potentials use different nodes");
  const std::size_t n = phi0.nodes().size();
  Vec v(n), d(n), s(n);
  for (std::size_t i = 0; i < n; ++i) {
    v[i] = (1 - t) * phi0.values()[i] + t * phi1.values()[i];
    d[i] = (1 - t) * phi0.slopes()[i] + t * phi1.slopes()[i];
    s[i] = (1 - t) * phi0.curvatures()[i] + t * phi1.curvatures()[i];
  }
  return legendre(SymplecticPotential::from_data(phi0.polytope(), phi0.nodes(), std::move(v), std::move(d), std::move(s)),
                  grid);
}

// ---------------------------------------------------------------- functionals

Functionals functionals(const ToricPotential& u, const Weight& g, const ToricPotential& ref) {
  g.check_attached(*u.polytope());
  g.check_attached(*ref.polytope());
  if (u.x().size() != ref.x().size() || u.grid().half_width != ref.grid().half_width)
    throw Error(ErrorCode::InvalidInput, "potentials live on different grids");
  const double a = u.lower(), b = u.upper();
  Functionals out;
  out.volume = integrate(*u.polytope(), g, {0}).value;
  const double V = out.volume;

  const double gmax = std::max(weight_at(g, a, b, a), weight_at(g, a, b, b));
  auto check_tail = [&](const ToricPotential& p) {
    const Vec& du = p.slopes();
    const Vec& uu = p.values();
    const double moment_tail = gmax * ((b - du.back()) + (du.front() - a));
    const double exp_tail = (du.back() > 0 ? std::exp(-uu.back()) / du.back() : 1.0) +
                            (du.front() < 0 ? std::exp(-uu.front()) / -du.front() : 1.0);
    if (moment_tail > tail_tol * V || exp_tail > tail_tol * V)
      throw Error(ErrorCode::QuadratureDiverged, "mass outside the truncation box exceeds 1e-10");
  };
  check_tail(u);
  check_tail(ref);

  using G = boost::math::quadrature::gauss<double, 8>;
  const auto& nodes = G::abscissa();
  const auto& weights = G::weights();
  const Vec& x = u.x();
  double s_energy = 0, s_lambda = 0, s_i = 0, s_exp = 0, s_entropy = 0;
  for (std::size_t k = 0; k + 1 < x.size(); ++k) {
    const Quintic q0 = cell_of(x, ref.values(), ref.slopes(), ref.curvatures(), k);
    const Quintic qu = cell_of(x, u.values(), u.slopes(), u.curvatures(), k);
    const double half = 0.5 * (x[k + 1] - x[k]);
    for (std::size_t j = 0; j < nodes.size(); ++j) {
      for (int sgn : {-1, 1}) {
        const double t = 0.5 + 0.5 * sgn * nodes[j];
        const double w = weights[j] * half;
        const double xp = x[k] + t * q0.h;
        const double u0 = q0.f(t), du0 = q0.df(t);
        const double d2u0 = q0.curvature(t, ref.curvatures()[k], ref.curvatures()[k + 1]);
        const double uu = qu.f(t), duu = qu.df(t);
        const double d2uu = qu.curvature(t, u.curvatures()[k], u.curvatures()[k + 1]);
        const double m0 = weight_at(g, a, b, du0) * d2u0;
        const double mu = weight_at(g, a, b, duu) * d2uu;
        const double diff = uu - u0;
        s_lambda += w * diff * m0;
        s_i += w * diff * (m0 - mu);
        s_exp += w * std::exp(-uu);
        if (mu > 0) s_entropy += w * (std::log(mu) + u0) * mu;
        const double y = std::clamp(du0, a, b);
        s_energy += w * (u.dual(y) - (xp * y - u0)) * m0;
      }
    }
  }
  out.energy = -s_energy / V;
  out.lambda = s_lambda / V;
  out.i = s_i / V;
  out.j = out.lambda - out.energy;
  out.ding_l = -std::log(s_exp / V);
  out.ding = -out.energy + out.ding_l;
  out.entropy = s_entropy / V;
  out.mabuchi = out.entropy - (out.i - out.j);
  return out;
}

// ---------------------------------------------------------------- ODE

GSoliton1D solve_gsoliton_1d(const Weight& g, GridSpec grid) {
  check_grid(grid);
  const PolytopePtr& body = g.polytope();
  const auto [a, b] = interval_bounds(body);
  g.require_positive();

  const double obstruction = integrate(*body, g, {1}).value;
  if (std::abs(obstruction) > 1e-10)
    throw Error(ErrorCode::ObstructedFutaki,
                "int s g(s) ds = " + std::to_string(obstruction) + " on the interval; no soliton exists");
  if (!(a < 0 && b > 0)) throw Error(ErrorCode::ObstructedFutaki, "the origin is not interior");

  auto gw = [&](double y) { return weight_at(g, a, b, y); };
  using G = boost::math::quadrature::gauss<double, 20>;
  // Phi(b - d) / d and Phi(a + d) / d with Phi(y) = int_y^b s g = -int_a^y s g
  auto right_ratio = [&](double d) {
    return G::integrate([&](double t) { return (b - d * t) * gw(b - d * t); }, 0.0, 1.0);
  };
  auto left_ratio = [&](double d) {
    return G::integrate([&](double t) { return -(a + d * t) * gw(a + d * t); }, 0.0, 1.0);
  };

  const Vec x = grid_nodes(grid);
  const std::size_t n = x.size(), mid = n / 2;
  const double h = x[1] - x[0];
  Vec u(n), du(n), d2u(n);
  constexpr int sub = 8;

  auto record = [&](std::size_t i, double z, bool right) {
    const double d = std::exp(z);
    const double ratio = right ? right_ratio(d) : left_ratio(d);
    const double y = right ? b - d : a + d;
    u[i] = -(z + std::log(ratio));
    du[i] = y;
    d2u[i] = d * ratio / gw(y);
  };

  // right half: z = log(b - u'), dz/dx = -(Phi/d) / g
  {
    auto rhs = [&](double z) {
      const double d = std::exp(z);
      return -right_ratio(d) / gw(b - d);
    };
    double z = std::log(b);
    record(mid, z, true);
    const double step = h / sub;
    for (std::size_t i = mid; i + 1 < n; ++i) {
      for (int s = 0; s < sub; ++s) {
        const double k1 = rhs(z), k2 = rhs(z + 0.5 * step * k1), k3 = rhs(z + 0.5 * step * k2),
                     k4 = rhs(z + step * k3);
        z += step * (k1 + 2 * k2 + 2 * k3 + k4) / 6;
      }
      record(i + 1, z, true);
    }
  }
  // left half: z = log(u' - a), marching towards -X
  {
    auto rhs = [&](double z) {
      const double d = std::exp(z);
      return left_ratio(d) / gw(a + d);
    };
    double z = std::log(-a);
    const double step = -h / sub;
    for (std::size_t i = mid; i > 0; --i) {
      for (int s = 0; s < sub; ++s) {
        const double k1 = rhs(z), k2 = rhs(z + 0.5 * step * k1), k3 = rhs(z + 0.5 * step * k2),
                     k4 = rhs(z + step * k3);
        z += step * (k1 + 2 * k2 + 2 * k3 + k4) / 6;
      }
      record(i - 1, z, false);
    }
  }

  const Vec fd1 = first_difference(u, h), fd2 = second_difference(u, h);
  double res = 0;
  for (std::size_t i = 3; i + 3 < n; ++i) res = std::max(res, std::abs(gw(fd1[i]) * fd2[i] - std::exp(-u[i])));

  auto p = ToricPotential::from_data(body, std::move(u), std::move(du), std::move(d2u), grid);
  using G8 = boost::math::quadrature::gauss<double, 8>;
  double mass = 0;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    const Quintic q = cell_of(x, p.values(), p.slopes(), p.curvatures(), k);
    mass += G8::integrate([&](double t) { return std::exp(-q.f(t)); }, 0.0, 1.0) * q.h;
  }
  // u is affine to all orders that matter past the box
  mass += std::exp(-p.values().back()) / p.slopes().back() + std::exp(-p.values().front()) / -p.slopes().front();
  return GSoliton1D{std::move(p), obstruction, res, mass};
}

}  // namespace solitonlab
