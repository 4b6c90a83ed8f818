#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <random>

#include "solitonlab/errors.hpp"
#include "solitonlab/fanocone.hpp"
#include "solitonlab/soliton.hpp"

using namespace solitonlab;

namespace {

FanoCone conifold() { return build_cone_from_generators({{0, 0, 1}, {1, 0, 1}, {0, 1, 1}, {1, 1, 1}}); }

FanoCone affine_space(std::size_t d) {
  std::vector<RVec> gens;
  for (std::size_t i = 0; i < d; ++i) {
    RVec e(d, 0);
    e[i] = 1;
    gens.push_back(e);
  }
  return build_cone_from_generators(gens);
}

// (x+y+2z) / (z (x+z) (y+z) (x+y+z))
Rational conifold_closed_form(const RVec& v) {
  const Rational &x = v[0], &y = v[1], &z = v[2];
  Rational num = x + y + 2 * z;
  Rational den = z * (x + z) * (y + z) * (x + y + z);
  return num / den;
}

}  // namespace

TEST_CASE("cone construction") {
  auto c3 = affine_space(3);
  CHECK(c3.gorenstein == RVec{1, 1, 1});
  CHECK(c3.reeb.generators().size() == 3);

  auto c = conifold();
  CHECK(c.n == 2);
  CHECK(c.gorenstein == RVec{1, 1, 2});
  auto rays = c.reeb.generators();
  std::sort(rays.begin(), rays.end());
  CHECK(rays == std::vector<RVec>{{-1, 0, 1}, {0, -1, 1}, {0, 1, 0}, {1, 0, 0}});

  auto again = build_cone_from_rays({{1, 0, 0}, {0, 1, 0}, {-1, 0, 1}, {0, -1, 1}});
  CHECK(again.gorenstein == RVec{1, 1, 2});
  CHECK(again.moment.generators().size() == 4);
}

TEST_CASE("cone construction errors") {
  CHECK_THROWS_WITH_AS(build_cone_from_generators({{1, 0}, {-1, 0}, {0, 1}}), doctest::Contains("NotPointed"), Error);
  CHECK_THROWS_WITH_AS(build_cone_from_rays({{1, 0, 1}, {0, 1, 1}, {-1, 0, 1}, {0, -1, 2}}),
                       doctest::Contains("NonGorenstein"), Error);
}

TEST_CASE("reeb interior agrees with positivity on generators") {
  auto c = conifold();
  CHECK(c.in_reeb_interior(RVec{0, 0, frac(3, 2)}));
  CHECK(c.in_reeb_interior(RVec{frac(3, 4), frac(3, 4), frac(3, 4)}));
  CHECK_FALSE(c.in_reeb_interior(RVec{1, 0, 0}));
  CHECK_FALSE(c.in_reeb_interior(RVec{0, 0, -1}));
}

TEST_CASE("volume examples") {
  CHECK(*volume(affine_space(3), RVec{1, 1, 1}).exact == 1);
  auto c = conifold();
  CHECK(*volume(c, RVec{0, 0, frac(3, 2)}).exact == frac(16, 27));
  CHECK_THROWS_WITH_AS(volume(c, RVec{1, 0, 0}), doctest::Contains("OutsideReebCone"), Error);
}

TEST_CASE("volume closed form, homogeneity and triangulation independence") {
  auto c = conifold();
  std::mt19937_64 rng(3);
  std::uniform_int_distribution<long> num(-9, 9);
  int checked = 0;
  while (checked < 25) {
    RVec xi{frac(num(rng), 7), frac(num(rng), 7), frac(num(rng) + 12, 5)};
    if (!c.in_reeb_interior(std::span<const Rational>(xi))) continue;
    ++checked;
    Rational v = *volume(c, xi).exact;
    CHECK(v == conifold_closed_form(xi));
    CHECK(*volume(c, xi, 1).exact == v);
    CHECK(*volume(c, Rational(2) * xi).exact == v / 8);
    CHECK(*volume(c, frac(3, 5) * xi).exact * frac(27, 125) == v);
  }
}

TEST_CASE("volume derivatives match differences") {
  auto c = conifold();
  const Vec xi{0.2, -0.1, 1.3};
  auto v = volume(c, xi);
  const double h = 1e-5;
  for (std::size_t k = 0; k < 3; ++k) {
    Vec up = xi, dn = xi;
    up[k] += h;
    dn[k] -= h;
    auto a = volume(c, up), b = volume(c, dn);
    CHECK(std::abs((a.value - b.value) / (2 * h) - v.gradient[k]) < 1e-6);
    for (std::size_t l = 0; l < 3; ++l)
      CHECK(std::abs((a.gradient[l] - b.gradient[l]) / (2 * h) - v.hessian[k][l]) < 1e-5);
  }
}

TEST_CASE("volume equals the DH mass of the cross-section") {
  auto c = conifold();
  for (RVec xi : {RVec{0, 0, frac(3, 2)}, RVec{frac(3, 4), frac(3, 4), frac(3, 4)}, RVec{frac(1, 3), -frac(1, 5), 2}}) {
    auto s = cross_section(c.moment, {xi, LatticeTag::N});
    auto mass = section_integral(s, Weight::constant(s.polytope), Polynomial<Rational>::constant(2, 1));
    CHECK(*mass.exact == *volume(c, xi).exact);
  }
}

TEST_CASE("msy minimization") {
  for (std::size_t d = 2; d <= 5; ++d) {
    auto r = msy_minimize(affine_space(d));
    for (double x : r.xi) CHECK(std::abs(x - 1.0) < 1e-9);
    CHECK(std::abs(r.vol - 1.0) < 1e-12);
    CHECK(r.gradient_norm < 1e-10);
    CHECK(r.reduced_hessian_definite);
  }
  auto r = msy_minimize(conifold());
  CHECK(std::abs(r.xi[0]) < 1e-9);
  CHECK(std::abs(r.xi[1]) < 1e-9);
  CHECK(std::abs(r.xi[2] - 1.5) < 1e-9);
  CHECK(std::abs(r.vol - 16.0 / 27) < 1e-12);
  CHECK(r.reduced_hessian_definite);
}

TEST_CASE("msy against a brute force grid on the conifold slice") {
  auto c = conifold();
  auto r = msy_minimize(c);
  // slice x + y + 2z = 3
  double best = 1e300;
  for (int i = -40; i <= 40; ++i)
    for (int j = -40; j <= 40; ++j) {
      const double x = i * 0.05, y = j * 0.05, z = (3 - x - y) / 2;
      Vec xi{x, y, z};
      if (!c.in_reeb_interior(std::span<const double>(xi))) continue;
      best = std::min(best, volume(c, xi).value);
    }
  CHECK(r.vol <= best + 1e-12);
}

TEST_CASE("msy slice errors") {
  CHECK_THROWS_WITH_AS(msy_minimize(conifold(), Rational(-1)), doctest::Contains("EmptySlice"), Error);
}

TEST_CASE("quotient of the plane is the projective line") {
  auto c2 = affine_space(2);
  auto q = quotient(c2, RVec{1, 1});
  CHECK(q.chi == RVec{1, 1});
  CHECK(q.polytope->dim() == 1);
  CHECK(q.polytope->volume() == 2);
  auto [lo, hi] = q.polytope->range(std::span<const Rational>(RVec{1}));
  CHECK(lo == -1);
  CHECK(hi == 1);
  for (const auto& a : q.divisor_coefficients) CHECK(a == 0);
}

TEST_CASE("weighted quotient carries orbifold coefficients") {
  auto q = quotient(affine_space(2), RVec{1, 2});
  CHECK(q.chi == RVec{frac(2, 3), frac(4, 3)});
  auto coeffs = q.divisor_coefficients;
  std::sort(coeffs.begin(), coeffs.end());
  CHECK(coeffs == std::vector<Rational>{0, frac(1, 2)});
}

TEST_CASE("conifold quotients") {
  auto c = conifold();
  auto q = quotient(c, RVec{0, 0, frac(3, 2)});
  std::vector<RVec> verts = q.polytope->vertices();
  std::sort(verts.begin(), verts.end());
  CHECK(verts == std::vector<RVec>{{-1, -1}, {-1, 1}, {1, -1}, {1, 1}});
  SolitonOptions opt;
  opt.cone_n = 2;
  auto s = solve_weight_vector(q.polytope, SolitonFamily::Cone, opt);
  for (double x : s.xi) CHECK(std::abs(x) < 1e-12);

  // auto-rescaling
  CHECK(quotient(c, RVec{0, 0, 1}).chi == RVec{0, 0, frac(3, 2)});

  auto q2 = quotient(c, RVec{frac(3, 4), frac(3, 4), frac(3, 4)});
  auto s2 = solve_weight_vector(q2.polytope, SolitonFamily::Cone, opt);
  Vec xi = q2.reeb_vector(s2.xi);
  CHECK(std::abs(xi[0]) < 1e-8);
  CHECK(std::abs(xi[1]) < 1e-8);
  CHECK(std::abs(xi[2] - 1.5) < 1e-8);
}

TEST_CASE("quotient lift and weight") {
  auto c = conifold();
  auto q = quotient(c, RVec{frac(3, 4), frac(3, 4), frac(3, 4)});
  const Vec theta{0.3, -0.2};
  Vec back = q.project(q.reeb_vector(theta));
  CHECK(std::abs(back[0] - 0.3) < 1e-14);
  CHECK(std::abs(back[1] + 0.2) < 1e-14);
  RVec lifted = q.lift(RVec{1, 0});
  CHECK(dot(lifted, c.gorenstein) == 0);
  auto w = q.weight(to_double(q.chi));
  auto pos = w.positivity_min();
  CHECK(std::abs(pos.value - std::pow(3.0, -4)) < 1e-15);
}

TEST_CASE("irrational quotient") {
  CHECK_THROWS_WITH_AS(quotient(conifold(), Vec{std::sqrt(2.0), 1.0, 1.0}), doctest::Contains("IrregularQuotient"),
                       Error);
}

TEST_CASE("dh invariance") {
  auto c = conifold();
  const RVec chi{frac(3, 4), frac(3, 4), frac(3, 4)};
  auto same = dh_invariance_check(c, chi, chi, {1, 0, 0});
  CHECK(std::abs(same.lhs.value - same.rhs) < 1e-14);

  const RVec xi{0, 0, frac(3, 2)};
  for (std::vector<unsigned> mono : {std::vector<unsigned>{1, 0, 0}, {0, 0, 0}, {1, 1, 2}}) {
    auto r = dh_invariance_check(c, xi, chi, mono);
    CHECK(std::abs(r.lhs.value - r.rhs) < 1e-10);
  }
  auto bad = dh_invariance_check(c, xi, chi, {1, 0, 0}, false);
  CHECK(std::abs(bad.lhs.value - bad.rhs) > 1e-3);
}

TEST_CASE("stationarity and the quotient-side vanishing") {
  auto c = conifold();
  auto r = msy_minimize(c);
  auto q = quotient(c, RVec{0, 0, frac(3, 2)});
  // theta-weighted integrals of the cone weight at theta = 0
  auto g = q.weight(r.xi);
  for (std::size_t k = 0; k < 2; ++k) {
    Vec e(2, 0.0);
    e[k] = 1.0;
    CHECK(std::abs(futaki(*q.polytope, g, e)) < 1e-9);
  }
}

TEST_CASE("cone and quotient masses agree at the minimizer only") {
  auto c = conifold();
  const RVec chi{frac(3, 4), frac(3, 4), frac(3, 4)};
  auto to = cross_section(c.moment, {chi, LatticeTag::N});
  auto compare = [&](const RVec& xi) {
    auto from = cross_section(c.moment, {xi, LatticeTag::N});
    auto g = Weight::constant(from.polytope);
    auto g0 = reeb_transform(g, from, to);
    auto one = Polynomial<Rational>::constant(2, 1);
    return std::abs(section_integral(from, g, one).value - section_integral(to, g0, one).value);
  };
  CHECK(compare({0, 0, frac(3, 2)}) < 1e-10);
  CHECK(compare({frac(1, 2), 0, frac(5, 4)}) > 1e-3);
}
