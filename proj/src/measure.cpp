#include "solitonlab/measure.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <boost/math/quadrature/gauss.hpp>

#include "solitonlab/errors.hpp"

namespace solitonlab {

namespace {

constexpr int kChebNodes = 24;

Vec cheb_fit(const Vec& values) {
  const int k = static_cast<int>(values.size());
  Vec c(k, 0.0);
  for (int m = 0; m < k; ++m) {
    double s = 0.0;
    for (int j = 0; j < k; ++j) s += values[j] * std::cos(std::numbers::pi * m * (j + 0.5) / k);
    c[m] = (m == 0 ? 1.0 : 2.0) * s / k;
  }
  return c;
}

double cheb_node(int j, int k) { return std::cos(std::numbers::pi * (j + 0.5) / k); }

Vec cheb_derivative(const Vec& c) {
  const std::size_t k = c.size();
  Vec d(k, 0.0);
  if (k < 2) return d;
  // recurrence in the halved-first-coefficient convention
  Vec a = c;
  a[0] *= 2;
  Vec e(k + 1, 0.0);
  for (std::size_t m = k - 1; m >= 1; --m) e[m - 1] = e[m + 1] + 2.0 * m * a[m];
  for (std::size_t m = 0; m < k; ++m) d[m] = e[m];
  d[0] /= 2;
  return d;
}

}  // namespace

double chebyshev_eval(const Vec& c, double t) {
  double b1 = 0.0, b2 = 0.0;
  for (std::size_t k = c.size(); k-- > 1;) {
    double b0 = c[k] + 2 * t * b1 - b2;
    b2 = b1;
    b1 = b0;
  }
  return (c.empty() ? 0.0 : c[0]) + t * b1 - b2;
}

PiecewiseMeasure PiecewiseMeasure::from_upper_mass(const RVec& breakpoints, unsigned degree,
                                                   const std::function<IntegralResult(const Rational&)>& upper_mass) {
  PiecewiseMeasure m;
  m.breakpoints_ = breakpoints;
  m.exact_ = degree > 0;
  std::vector<IntegralResult> at_break;
  for (const auto& b : breakpoints) {
    at_break.push_back(upper_mass(b));
    if (!at_break.back().exact) m.exact_ = false;
  }
  std::vector<IntegralResult> right_limit(breakpoints.size());

  for (std::size_t k = 0; k + 1 < breakpoints.size(); ++k) {
    const Rational lo = breakpoints[k], hi = breakpoints[k + 1], h = hi - lo;
    Piece piece;
    piece.lo = lo.get_d();
    piece.hi = hi.get_d();
    bool done = false;
    if (m.exact_) {
      const unsigned d = degree;
      RMat vander(d + 1, RVec(d + 1));
      RVec values(d + 1);
      bool ok = true;
      for (unsigned j = 0; j <= d; ++j) {
        Rational t = h * frac(j + 1, d + 2);
        Rational p = 1;
        for (unsigned i = 0; i <= d; ++i) {
          vander[j][i] = p;
          p *= t;
        }
        auto r = upper_mass(lo + t);
        if (!r.exact) {
          ok = false;
          break;
        }
        values[j] = *r.exact;
      }
      if (ok) {
        RVec a = solve(vander, values);
        RVec dens(d);
        for (unsigned i = 0; i < d; ++i) dens[i] = -Rational(i + 1) * a[i + 1];
        while (dens.size() > 1 && sgn(dens.back()) == 0) dens.pop_back();
        Vec samples(kChebNodes);
        for (int j = 0; j < kChebNodes; ++j) {
          double t = 0.5 * h.get_d() * (cheb_node(j, kChebNodes) + 1.0);
          double v = 0.0;
          for (std::size_t i = dens.size(); i-- > 0;) v = v * t + dens[i].get_d();
          samples[j] = v;
        }
        piece.cheb = cheb_fit(samples);
        piece.exact = dens;
        right_limit[k] = {a[0].get_d(), a[0]};
        done = true;
      } else {
        m.exact_ = false;
      }
    }
    if (!done) {
      Vec samples(kChebNodes);
      const double mid = 0.5 * (piece.lo + piece.hi), half = 0.5 * (piece.hi - piece.lo);
      for (int j = 0; j < kChebNodes; ++j)
        samples[j] = upper_mass(rational_from_double(mid + half * cheb_node(j, kChebNodes))).value;
      Vec c = cheb_fit(samples);
      Vec dc = cheb_derivative(c);
      for (auto& v : dc) v = -v / half;
      piece.cheb = dc;
      right_limit[k] = {chebyshev_eval(c, -1.0), std::nullopt};
    }
    m.pieces_.push_back(std::move(piece));
  }
  if (!m.exact_)
    for (auto& p : m.pieces_) p.exact.reset();

  // U is left-continuous; an atom at b is U(b) minus the limit from the right.
  double scale = 0.0;
  for (const auto& r : at_break) scale = std::max(scale, std::abs(r.value));
  for (std::size_t k = 0; k < breakpoints.size(); ++k) {
    Atom atom;
    atom.at = breakpoints[k].get_d();
    atom.exact_at = breakpoints[k];
    const bool last = k + 1 == breakpoints.size();
    if (m.exact_) {
      Rational mass = last ? *at_break[k].exact : *at_break[k].exact - *right_limit[k].exact;
      if (sgn(mass) == 0) continue;
      atom.exact_mass = mass;
      atom.mass = mass.get_d();
    } else {
      atom.mass = last ? at_break[k].value : at_break[k].value - right_limit[k].value;
      if (std::abs(atom.mass) <= 1e-11 * std::max(scale, 1.0)) continue;
    }
    m.atoms_.push_back(atom);
  }
  return m;
}

double PiecewiseMeasure::density(double s) const {
  for (const auto& p : pieces_)
    if (s >= p.lo && s <= p.hi) return chebyshev_eval(p.cheb, (2 * s - p.lo - p.hi) / (p.hi - p.lo));
  return 0.0;
}

double PiecewiseMeasure::moment(unsigned k) const {
  using G = boost::math::quadrature::gauss<double, 30>;
  double total = 0.0;
  for (const auto& p : pieces_) {
    const double mid = 0.5 * (p.lo + p.hi), half = 0.5 * (p.hi - p.lo);
    auto f = [&](double x) { return std::pow(mid + half * x, k) * chebyshev_eval(p.cheb, x); };
    total += half * G::integrate(f, -1.0, 1.0);
  }
  for (const auto& a : atoms_) total += std::pow(a.at, k) * a.mass;
  return total;
}

std::optional<Rational> PiecewiseMeasure::moment_exact(unsigned k) const {
  if (!exact_) return std::nullopt;
  Rational total = 0;
  for (std::size_t idx = 0; idx < pieces_.size(); ++idx) {
    const Rational lo = breakpoints_[idx], h = breakpoints_[idx + 1] - lo;
    const RVec& r = *pieces_[idx].exact;
    // int_0^h (lo + t)^k sum_i r_i t^i dt
    RVec binom(k + 1);
    binom[0] = 1;
    for (unsigned j = 1; j <= k; ++j) binom[j] = binom[j - 1] * frac(k - j + 1, j);
    for (std::size_t i = 0; i < r.size(); ++i) {
      if (sgn(r[i]) == 0) continue;
      for (unsigned j = 0; j <= k; ++j) {
        Rational term = r[i] * binom[j];
        for (unsigned e = 0; e < k - j; ++e) term *= lo;
        Rational hp = 1;
        for (std::size_t e = 0; e < i + j + 1; ++e) hp *= h;
        total += term * hp / Rational(static_cast<long>(i + j + 1));
      }
    }
  }
  for (const auto& a : atoms_) {
    Rational p = 1;
    for (unsigned e = 0; e < k; ++e) p *= *a.exact_at;
    total += p * *a.exact_mass;
  }
  return total;
}

std::pair<double, double> PiecewiseMeasure::support(double tol) const {
  double lo = std::numeric_limits<double>::infinity(), hi = -lo;
  for (const auto& a : atoms_)
    if (std::abs(a.mass) > tol) {
      lo = std::min(lo, a.at);
      hi = std::max(hi, a.at);
    }
  for (const auto& p : pieces_) {
    double mx = 0.0;
    for (double c : p.cheb) mx = std::max(mx, std::abs(c));
    if (mx > tol) {
      lo = std::min(lo, p.lo);
      hi = std::max(hi, p.hi);
    }
  }
  return {lo, hi};
}

PiecewiseMeasure PiecewiseMeasure::scaled(const Rational& factor) const {
  PiecewiseMeasure m = *this;
  const double f = factor.get_d();
  for (auto& p : m.pieces_) {
    for (auto& c : p.cheb) c *= f;
    if (p.exact)
      for (auto& c : *p.exact) c *= factor;
  }
  for (auto& a : m.atoms_) {
    a.mass *= f;
    if (a.exact_mass) *a.exact_mass *= factor;
  }
  return m;
}

}  // namespace solitonlab
