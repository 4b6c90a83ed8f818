#include "suite.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <random>

#include "solitonlab/dh.hpp"
#include "solitonlab/errors.hpp"
#include "solitonlab/fanocone.hpp"
#include "solitonlab/nastab.hpp"
#include "solitonlab/soliton.hpp"
#include "solitonlab/toricfunc.hpp"

namespace solitonlab::cli {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

std::string fmt(const char* format, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, format, args...);
  return buf;
}

PolytopePtr share(Polytope p) { return std::make_shared<const Polytope>(std::move(p)); }

PolytopePtr segment(Rational a, Rational b) { return share(Polytope::from_facets(1, {{{1}, -a}, {{-1}, b}})); }

PolytopePtr blowup() { return share(Polytope::from_vertices({{-1, 0}, {0, -1}, {2, -1}, {-1, 2}})); }

PolytopePtr plane() { return share(Polytope::from_facets(2, {{{1, 0}, 1}, {{0, 1}, 1}, {{-1, -1}, 1}})); }

FanoCone conifold() { return build_cone_from_generators({{0, 0, 1}, {1, 0, 1}, {0, 1, 1}, {1, 1, 1}}); }

double max_abs_diff(const Vec& a, const Vec& b) {
  double m = 0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

// ---------------------------------------------------------------- 1

CriterionResult conifold_msy() {
  const auto t0 = Clock::now();
  auto r = msy_minimize(conifold());
  const double secs = seconds_since(t0);
  const double vol_err = std::abs(r.vol - 16.0 / 27);
  const double xi_err = max_abs_diff(r.xi, {0, 0, 1.5});
  return {1, "", vol_err < 1e-9 && xi_err < 1e-8 && secs < 1,
          fmt("vol* = %.16g (err %.2e), xi* err %.2e, runtime < 1 s: %s", r.vol, vol_err, xi_err, secs < 1 ? "yes" : "no"),
          fmt("%.3f s", secs)};
}

// ---------------------------------------------------------------- 2

CriterionResult affine_spaces() {
  bool ok = true;
  std::string detail;
  for (std::size_t n = 1; n <= 4; ++n) {
    std::vector<RVec> gens;
    for (std::size_t i = 0; i <= n; ++i) {
      RVec e(n + 1, Rational(0));
      e[i] = 1;
      gens.push_back(e);
    }
    auto cone = build_cone_from_generators(gens);
    auto v = volume(cone, RVec(n + 1, Rational(1)));
    auto r = msy_minimize(cone);
    const double err = max_abs_diff(r.xi, Vec(n + 1, 1.0));
    const bool exact_one = v.exact && *v.exact == 1;
    ok = ok && exact_one && err < 1e-10;
    detail += fmt("C^%zu: vol %s, xi* err %.1e; ", n + 1, v.exact ? to_string(*v.exact).c_str() : "inexact", err);
  }
  detail.resize(detail.size() - 2);
  return {2, "", ok, detail};
}

// ---------------------------------------------------------------- 3

// F(t) = int_{-1}^{1} s (s + 2) e^{t s} ds in closed form
double blowup_oracle_f(double t) {
  auto prim = [t](double s) {
    const double p = s * s + 2 * s, dp = 2 * s + 2, d2p = 2;
    return std::exp(t * s) * (p / t - dp / (t * t) + d2p / (t * t * t));
  };
  return prim(1) - prim(-1);
}

CriterionResult blowup_kr() {
  auto bl = blowup();
  const auto t0 = Clock::now();
  auto s = solve_weight_vector(bl, SolitonFamily::KR);
  const double secs = seconds_since(t0);
  double lo = -2.0, hi = -0.05;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    (blowup_oracle_f(mid) > 0 ? hi : lo) = mid;
  }
  const double oracle = 0.5 * (lo + hi);
  auto g = Weight::exponential(bl, s.xi);
  double res = 0;
  for (std::size_t k = 0; k < 2; ++k) {
    Vec e(2, 0.0);
    e[k] = 1;
    res = std::max(res, std::abs(futaki(*bl, g, e)));
  }
  const bool diagonal = std::abs(s.xi[0] - s.xi[1]) < 1e-12;
  const double err = std::abs(s.xi[0] - oracle);
  return {3, "", diagonal && err < 5e-3 && res < 1e-10 && secs < 0.1,
          fmt("t* = %.12f, oracle %.12f (diff %.1e), futaki residual %.1e, runtime < 0.1 s: %s", s.xi[0], oracle, err,
              res, secs < 0.1 ? "yes" : "no"),
          fmt("%.4f s", secs)};
}

// ---------------------------------------------------------------- 4

CriterionResult mabuchi_random() {
  std::mt19937_64 rng(2024);
  std::uniform_int_distribution<long> coord(-3, 3);
  const std::size_t dims[] = {1, 2, 3, 2, 3};
  bool ok = true;
  double worst = 0;
  int feasible = 0, agree = 0;
  for (std::size_t d : dims) {
    PolytopePtr body;
    while (!body) {
      std::vector<RVec> pts;
      for (std::size_t k = 0; k < d + 4; ++k) {
        RVec p(d);
        for (auto& x : p) x = Rational(coord(rng));
        pts.push_back(p);
      }
      try {
        body = share(Polytope::from_vertices(pts));
      } catch (const Error&) {
      }
    }
    auto s = solve_weight_vector(body, SolitonFamily::Mabuchi);
    auto bar = *moments(*body, Weight::constant(body)).barycenter_exact;
    const RVec xi = s.xi_exact ? *s.xi_exact : to_rational(s.xi);
    Rational low = 0;
    bool first = true;
    for (const auto& v : body->vertices()) {
      Rational val = 1 + dot(v - bar, xi);
      if (first || val < low) low = val;
      first = false;
    }
    const bool exact_feasible = low > 0;
    worst = std::max(worst, s.residual);
    feasible += exact_feasible;
    agree += exact_feasible == s.feasible;
    ok = ok && s.residual < 1e-12 && exact_feasible == s.feasible;
  }
  return {4, "", ok, fmt("max residual %.1e, feasibility agrees on %d/5 (%d feasible)", worst, agree, feasible)};
}

// ---------------------------------------------------------------- 5

CriterionResult cone_quotient() {
  auto c = conifold();
  auto r = msy_minimize(c);
  auto q = quotient(c, RVec{frac(3, 4), frac(3, 4), frac(3, 4)});
  SolitonOptions opt;
  opt.cone_n = c.n;
  auto s = solve_weight_vector(q.polytope, SolitonFamily::Cone, opt);
  const double err = max_abs_diff(q.reeb_vector(s.xi), r.xi);
  return {5, "", err < 1e-8, fmt("|chi + lift(theta*) - xi*_msy| = %.2e", err)};
}

// ---------------------------------------------------------------- 6

CriterionResult dh_invariance() {
  auto c = conifold();
  const std::vector<std::pair<RVec, RVec>> pairs{
      {{0, 0, frac(3, 2)}, {frac(3, 4), frac(3, 4), frac(3, 4)}},
      {{frac(1, 2), frac(1, 4), frac(5, 4)}, {0, 0, frac(3, 2)}},
  };
  const std::vector<std::vector<unsigned>> monos{{0, 0, 0}, {1, 0, 0}, {0, 1, 1}};
  double worst = 0, control = 1e300;
  for (const auto& [xi, chi] : pairs)
    for (const auto& m : monos) {
      auto r = dh_invariance_check(c, xi, chi, m);
      worst = std::max(worst, std::abs(r.lhs.value - r.rhs));
      auto bad = dh_invariance_check(c, xi, chi, m, false);
      control = std::min(control, std::abs(bad.lhs.value - bad.rhs));
    }
  return {6, "", worst < 1e-10 && control > 1e-3,
          fmt("max |lhs - rhs| = %.1e, smallest negative-control gap %.3e", worst, control)};
}

// ---------------------------------------------------------------- 7

RVec random_rvec(std::size_t n, std::mt19937_64& rng) {
  std::uniform_int_distribution<long> coef(-9, 9);
  RVec v(n);
  for (auto& x : v) x = frac(coef(rng), 4);
  return v;
}

PLFiltration random_filtration(const PolytopePtr& body, std::mt19937_64& rng) {
  std::uniform_int_distribution<long> coef(-6, 6);
  std::uniform_int_distribution<int> count(1, 4);
  std::vector<AffinePiece> pieces;
  const int k = count(rng);
  for (int i = 0; i < k; ++i) {
    RVec a(body->dim());
    for (auto& x : a) x = frac(coef(rng), 3);
    pieces.push_back({a, frac(coef(rng), 2)});
  }
  return PLFiltration::from_pieces(body, pieces);
}

CriterionResult identity_suite() {
  auto bl = blowup();
  auto g = Weight::constant(bl);
  std::mt19937_64 rng(7);

  double ena = 0, ena_flipped = 0;
  for (int i = 0; i < 50; ++i) {
    auto f = random_filtration(bl, rng);
    RVec xi = random_rvec(2, rng);
    const double fut = futaki_normalized(*bl, g, to_double(xi));
    const double de = na_energy(*bl, g, f.twisted(xi)).value - na_energy(*bl, g, f).value;
    ena = std::max(ena, std::abs(de - fut));
    ena_flipped = std::max(ena_flipped, std::abs(de + fut));
  }

  double as = 0;
  int as_count = 0;
  while (as_count < 50) {
    RVec u = random_rvec(2, rng), xi = random_rvec(2, rng);
    if (is_zero(u) || is_zero(twist(u, xi))) continue;
    const double fut = futaki_normalized(*bl, g, to_double(xi));
    auto a = valuation_report(*bl, g, u), b = valuation_report(*bl, g, twist(u, xi));
    as = std::max(as, std::abs((b.ding - a.ding) - fut));
    ++as_count;
  }

  auto c = conifold();
  bool homogeneous = true;
  for (const RVec& xi : {RVec{0, 0, frac(3, 2)}, RVec{frac(1, 2), frac(1, 4), frac(5, 4)}, RVec{frac(1, 3), -frac(1, 5), 2}})
    for (const Rational& s : {Rational(2), frac(1, 3), frac(5, 2)}) {
      auto a = volume(c, xi), b = volume(c, s * xi);
      Rational expect = *a.exact / (s * s * s);
      homogeneous = homogeneous && b.exact && *b.exact == expect;
    }

  double fd = 0;
  const double h = 1e-5;
  for (SolitonFamily fam : {SolitonFamily::KR, SolitonFamily::Mabuchi, SolitonFamily::Cone})
    for (const Vec& xi : {Vec{0.1, -0.2}, Vec{-0.3, 0.25}, Vec{0.05, 0.4}}) {
      auto p = soliton_potential(bl, fam, xi);
      for (std::size_t k = 0; k < 2; ++k) {
        Vec a = xi, b = xi;
        a[k] += h;
        b[k] -= h;
        const double num = (soliton_potential(bl, fam, a).value - soliton_potential(bl, fam, b).value) / (2 * h);
        fd = std::max(fd, std::abs(num - p.gradient[k]));
      }
    }

  const bool ok = ena < 1e-12 && as < 1e-12 && homogeneous && fd < 1e-6;
  return {7, "", ok,
          fmt("E^NA twist max|dE - Fut_g| = %.3e (with -Fut_g: %.1e); A-S twist %.1e; vol homogeneity %s; "
              "gradient vs FD %.1e",
              ena, ena_flipped, as, homogeneous ? "exact" : "FAILED", fd)};
}

// ---------------------------------------------------------------- 8

CriterionResult delta_targets() {
  auto tri = plane();
  auto gt = Weight::constant(tri);
  bool every = true;
  for (int k = 0; k < 400; ++k) {
    const double a = 2 * std::numbers::pi * k / 400;
    auto r = valuation_report(*tri, gt, Vec{std::cos(a), std::sin(a)});
    every = every && r.log_discrepancy / r.expected_order == 1.0;
  }
  auto dp = delta_estimate(*tri, gt);

  auto bl = blowup();
  auto d = delta_estimate(*bl, Weight::constant(bl));
  const double norm = std::hypot(d.witness_u[0], d.witness_u[1]);
  const double angle =
      std::acos(std::clamp((d.witness_u[0] + d.witness_u[1]) / (norm * std::sqrt(2.0)), -1.0, 1.0)) * 180 /
      std::numbers::pi;

  auto kr = solve_weight_vector(bl, SolitonFamily::KR);
  DeltaOptions opt;
  opt.reduced = true;
  opt.sphere_points = 60;
  auto dr = delta_estimate(*bl, Weight::exponential(bl, kr.xi), opt);

  const bool ok = every && dp.delta == 1.0 && std::abs(d.delta - 6.0 / 7) < 1e-3 && angle < 1.0 && dr.delta >= 1 - 1e-6;
  return {8, "", ok,
          fmt("P^2: %s, delta %.17g; Bl1P^2: delta %.6f (6/7 = %.6f), witness angle %.3f deg; reduced at KR %.9f",
              every ? "A/S == 1 on 400 directions" : "A/S != 1 somewhere", dp.delta, d.delta, 6.0 / 7, angle,
              dr.delta)};
}

// ---------------------------------------------------------------- 9

CriterionResult ode_targets() {
  auto seg = segment(-1, 1);
  auto s = solve_gsoliton_1d(Weight::constant(seg));
  double err = 0;
  for (std::size_t i = 0; i < s.potential.x().size(); ++i) {
    const double x = std::abs(s.potential.x()[i]);
    const double exact = x + 2 * std::log1p(std::exp(-x)) - std::log(2.0);
    err = std::max(err, std::abs(s.potential.values()[i] - exact));
  }
  bool obstructed = false;
  try {
    auto half = segment(-1, frac(1, 2));
    solve_gsoliton_1d(Weight::constant(half));
  } catch (const Error& e) {
    obstructed = e.code() == ErrorCode::ObstructedFutaki;
  }
  return {9, "", err < 1e-6 && obstructed,
          fmt("sup |u - u_FS| = %.1e on |x| <= 30, residual %.1e; [-1,1/2]: %s", err, s.residual,
              obstructed ? "ObstructedFutaki" : "no error")};
}

// ---------------------------------------------------------------- 10

double fs_dual(double y) { return (1 + y) * std::log1p(y) + (1 - y) * std::log1p(-y) - std::log(2.0); }

struct Perturbation {
  double c1, c2, c3, c4;
};

Perturbation random_perturbation(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1, 1);
  return {0.8 * u(rng), 0.3 * u(rng), 0.1 * u(rng), 0.08 * u(rng)};
}

SymplecticPotential perturbed_dual(const PolytopePtr& seg, const Perturbation& p) {
  const double pi = std::numbers::pi;
  return SymplecticPotential::from_function(
      seg,
      [&](double y) { return fs_dual(y) + p.c1 * y + p.c2 * y * y + p.c3 * y * y * y + p.c4 * std::sin(pi * y); },
      [&](double y) {
        return std::log1p(y) - std::log1p(-y) + p.c1 + 2 * p.c2 * y + 3 * p.c3 * y * y + p.c4 * pi * std::cos(pi * y);
      },
      [&](double y) { return 2 / ((1 - y) * (1 + y)) + 2 * p.c2 + 6 * p.c3 * y - p.c4 * pi * pi * std::sin(pi * y); },
      canonical_nodes(seg));
}

CriterionResult functional_suite() {
  auto seg = segment(-1, 1);
  auto g = Weight::constant(seg);
  auto ref = ToricPotential::canonical(seg);
  std::mt19937_64 rng(101);

  double i_min = 1e300, mabuchi_gap = 1e300;
  for (int k = 0; k < 200; ++k) {
    auto f = functionals(legendre(perturbed_dual(seg, random_perturbation(rng))), g, ref);
    i_min = std::min(i_min, f.i);
    mabuchi_gap = std::min(mabuchi_gap, f.mabuchi - f.ding);
  }
  const double i_const = std::abs(functionals(ref.shifted(0.7), g, ref).i);

  double j_drop = 0, ij_gap = 1e300;
  for (int k = 0; k < 10; ++k) {
    auto u = legendre(perturbed_dual(seg, random_perturbation(rng)));
    double last = -1e300;
    for (int s = 1; s <= 10; ++s) {
      const double t = 0.1 * s;
      const double ratio = functionals(ref.blend(u, t), g, ref).j / t;
      j_drop = std::max(j_drop, last - ratio);
      last = ratio;
    }
    auto f = functionals(u, g, ref);
    ij_gap = std::min(ij_gap, f.i - f.j);
  }

  auto star = solve_gsoliton_1d(g).potential;
  const double d_star = functionals(star, g, ref).ding;
  double d_excess = 1e300;
  for (int k = 0; k < 50; ++k)
    d_excess = std::min(d_excess, functionals(legendre(perturbed_dual(seg, random_perturbation(rng))), g, ref).ding - d_star);

  double affine = 0, d_second = 1e300, m_second = 1e300;
  for (int k = 0; k < 3; ++k) {
    auto phi0 = perturbed_dual(seg, random_perturbation(rng));
    auto phi1 = perturbed_dual(seg, random_perturbation(rng));
    std::vector<Functionals> f;
    for (int s = 0; s <= 10; ++s) f.push_back(functionals(geodesic(phi0, phi1, 0.1 * s), g, ref));
    for (int s = 0; s <= 10; ++s) {
      const double t = 0.1 * s;
      affine = std::max(affine, std::abs(f[s].energy - ((1 - t) * f[0].energy + t * f[10].energy)));
      mabuchi_gap = std::min(mabuchi_gap, f[s].mabuchi - f[s].ding);
    }
    for (int s = 1; s < 10; ++s) {
      d_second = std::min(d_second, f[s - 1].ding - 2 * f[s].ding + f[s + 1].ding);
      m_second = std::min(m_second, f[s - 1].mabuchi - 2 * f[s].mabuchi + f[s + 1].mabuchi);
    }
  }
  const bool ok = i_min > 1e-8 && i_const < 1e-12 && j_drop <= 1e-10 && ij_gap >= -1e-12 && affine < 1e-8 &&
                  d_second >= -1e-8 && m_second >= -1e-8 && mabuchi_gap >= -1e-10 && d_excess >= -1e-10;
  return {10, "", ok,
          fmt("min I %.2e over 200 samples, I(u0 + c) %.1e; J(tu)/t max drop %.1e, min(I - J) %.2e; E affine err %.1e; "
              "min second differences D %.2e, M %.2e; min(M - D) %.2e; min D(u) - D(u*) %.2e over 50 samples",
              i_min, i_const, j_drop, ij_gap, affine, d_second, m_second, mabuchi_gap, d_excess)};
}

CriterionResult guarded(int id, CriterionResult (*fn)()) {
  try {
    return fn();
  } catch (const std::exception& e) {
    return {id, "", false, std::string("threw ") + e.what()};
  }
}

}  // namespace

const std::vector<Criterion>& criteria() {
  static const std::vector<Criterion> list = [] {
    std::vector<std::pair<std::string, CriterionResult (*)()>> raw{
        {"conifold MSY minimizer", conifold_msy},
        {"affine spaces C^2..C^5", affine_spaces},
        {"Bl1P^2 KR soliton", blowup_kr},
        {"Mabuchi solver on random polytopes", mabuchi_random},
        {"cone/quotient cross-validation", cone_quotient},
        {"DH cross-section invariance", dh_invariance},
        {"identity suite", identity_suite},
        {"delta estimates", delta_targets},
        {"1D soliton ODE", ode_targets},
        {"functional property suite", functional_suite},
    };
    std::vector<Criterion> out;
    for (std::size_t i = 0; i < raw.size(); ++i) {
      const int id = int(i) + 1;
      auto fn = raw[i].second;
      std::string title = raw[i].first;
      out.push_back({id, title, [id, fn, title] {
                       CriterionResult r = guarded(id, fn);
                       r.id = id;
                       r.title = title;
                       return r;
                     }});
    }
    return out;
  }();
  return list;
}

}  // namespace solitonlab::cli
