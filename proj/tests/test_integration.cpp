#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>

#include "solitonlab/dh.hpp"
#include "solitonlab/errors.hpp"
#include "test_shapes.hpp"

using namespace solitonlab;
using namespace solitonlab::testing;

namespace {

PolytopePtr share(Polytope p) { return std::make_shared<const Polytope>(std::move(p)); }

double rel(double a, double b) { return std::abs(a - b) / std::max(1.0, std::abs(b)); }

}  // namespace

TEST_CASE("volumes with DH normalization") {
  auto seg = share(interval(-1, 1));
  CHECK(*integrate(*seg, Weight::constant(seg), {}).exact == 2);
  auto tri = share(p2());
  CHECK(*integrate(*tri, Weight::constant(tri), {}).exact == 9);
  auto bl = share(blp2());
  CHECK(*integrate(*bl, Weight::constant(bl), {}).exact == 8);
}

TEST_CASE("exponential weight on the interval") {
  auto seg = share(interval(-1, 1));
  auto g = Weight::exponential(seg, {1.0});
  CHECK(rel(integrate(*seg, g, {}).value, 2 * std::sinh(1.0)) < 1e-14);
  // int x e^x over [-1, 1] = 2/e
  CHECK(rel(integrate(*seg, g, {1}).value, 2 / std::exp(1.0)) < 1e-14);
}

TEST_CASE("exp divided differences") {
  // distinct nodes: classic formula
  double a = 0.3, b = 1.7;
  double dd = exp_divided_difference(std::vector<double>{a, b});
  CHECK(rel(dd, (std::exp(b) - std::exp(a)) / (b - a)) < 1e-15);
  // confluent: f[a, a, a] = e^a / 2
  CHECK(rel(exp_divided_difference(std::vector<double>{a, a, a}), std::exp(a) / 2) < 1e-15);
  // nearly coincident nodes stay accurate
  double e = 1e-11;
  double near = exp_divided_difference(std::vector<double>{a, a + e});
  CHECK(rel(near, std::exp(a + e / 2)) < 1e-13);
  // wide spread
  std::vector<double> wide{-20, -3, 0.5, 7, 12};
  double ref = 0.0;
  for (std::size_t i = 0; i < wide.size(); ++i) {
    double den = 1.0;
    for (std::size_t j = 0; j < wide.size(); ++j)
      if (j != i) den *= wide[i] - wide[j];
    ref += std::exp(wide[i]) / den;
  }
  CHECK(rel(exp_divided_difference(wide), ref) < 1e-12);
}

TEST_CASE("closed forms agree with quadrature") {
  for (const auto& body : {p2(), blp2(), hexagon(), cube_minus_corner()}) {
    const std::size_t n = body.dim();
    Vec lin(n);
    for (std::size_t i = 0; i < n; ++i) lin[i] = 0.3 * (i + 1) - 0.4;
    auto poly = Polynomial<double>::constant(n, 0.5);
    for (std::size_t i = 0; i < n; ++i) poly += Polynomial<double>::variable(n, i) * Polynomial<double>::variable(n, 0);
    auto e = Profile::exp(lin, 0.2);
    CHECK(rel(integrate_lebesgue(body, poly, e), integrate_quadrature(body, poly, e)) < 1e-12);
    auto ip = Profile::inv_pow(lin, n + 1.5, static_cast<int>(n) + 4);
    CHECK(rel(integrate_lebesgue(body, poly, ip), integrate_quadrature(body, poly, ip)) < 1e-12);
    auto one = Polynomial<Rational>::constant(n, 1) + Polynomial<Rational>::variable(n, 0).pow(3);
    CHECK(rel(integrate_exact(body, one).get_d(), integrate_quadrature(body, to_double(one), Profile::one())) < 1e-13);
  }
}

TEST_CASE("exact integrals do not depend on the triangulation") {
  for (const auto& body : {blp2(), hexagon(), cube_minus_corner(), square()}) {
    const std::size_t n = body.dim();
    auto p = Polynomial<Rational>::constant(n, 2);
    for (std::size_t i = 0; i < n; ++i)
      p += frac(static_cast<long>(i) + 1, 3) * Polynomial<Rational>::variable(n, i).pow(static_cast<unsigned>(i + 2));
    auto t0 = triangulate(body, 0), t1 = triangulate(body, 1);
    CHECK(integrate_exact(body, t0, p) == integrate_exact(body, t1, p));
    auto pd = to_double(p);
    auto prof = Profile::exp(Vec(n, 0.7), 0.0);
    CHECK(rel(integrate_lebesgue(body, t0, pd, prof), integrate_lebesgue(body, t1, pd, prof)) < 1e-13);
  }
}

TEST_CASE("moments") {
  auto seg = share(interval(-1, 1));
  auto m = moments(*seg, Weight::constant(seg));
  CHECK((*m.barycenter_exact)[0] == 0);
  CHECK((*m.covariance_exact)[0][0] == Rational(1, 3));

  auto bl = share(blp2());
  auto mb = moments(*bl, Weight::constant(bl));
  CHECK(*mb.mass.exact == 8);
  CHECK(*mb.barycenter_exact == RVec{Rational(1, 12), Rational(1, 12)});

  // exponential weight: positive definite covariance
  auto me = moments(*bl, Weight::exponential(bl, {0.4, -0.2}));
  CHECK(me.covariance[0][0] > 0);
  CHECK(me.covariance[0][0] * me.covariance[1][1] - me.covariance[0][1] * me.covariance[1][0] > 0);
}

TEST_CASE("translation equivariance") {
  RVec t{Rational(3, 7), Rational(-2, 5)};
  auto bl = share(blp2());
  auto moved = share(bl->translated(t));
  auto a = moments(*bl, Weight::constant(bl));
  auto b = moments(*moved, Weight::constant(moved));
  CHECK(*b.barycenter_exact == *a.barycenter_exact + t);
  CHECK(*b.covariance_exact == *a.covariance_exact);
}

TEST_CASE("weights reject foreign polytopes") {
  auto a = share(blp2());
  auto b = share(blp2());
  auto g = Weight::constant(a);
  bool mismatch = false;
  try {
    integrate(*b, g, {});
  } catch (const Error& e) {
    mismatch = e.code() == ErrorCode::WeightPolytopeMismatch;
  }
  CHECK(mismatch);
}

TEST_CASE("pushforward examples") {
  auto sq = share(square());
  auto m = pushforward_1d(*sq, Weight::constant(sq), {{1, 0}, LatticeTag::N});
  REQUIRE(m.pieces().size() == 1);
  CHECK(*m.pieces()[0].exact == RVec{2});
  CHECK(m.atoms().empty());

  auto bl = share(blp2());
  auto mb = pushforward_1d(*bl, Weight::constant(bl), {{1, 1}, LatticeTag::N});
  REQUIRE(mb.pieces().size() == 1);
  CHECK(mb.pieces()[0].lo == -1.0);
  CHECK(mb.pieces()[0].hi == 1.0);
  // 2(s + 2) in the local variable t = s + 1: 2 + 2t
  CHECK(*mb.pieces()[0].exact == RVec{2, 2});
  CHECK(std::abs(mb.density(0.5) - 5.0) < 1e-13);

  auto seg = share(interval(-1, 1));
  auto ms = pushforward_1d(*seg, Weight::constant(seg), {{1}, LatticeTag::N});
  CHECK(*ms.pieces()[0].exact == RVec{1});
}

TEST_CASE("pushforward moments match direct integrals") {
  for (auto body : {share(blp2()), share(hexagon()), share(cube_minus_corner())}) {
    const std::size_t n = body->dim();
    RVec dir(n);
    for (std::size_t i = 0; i < n; ++i) dir[i] = static_cast<long>(i) + 1;
    auto g = Weight::affine_pinned(body, RVec(n, Rational(1, 10)), RVec(n, 0));
    auto m = pushforward_1d(*body, g, {dir, LatticeTag::N});
    auto ell = Polynomial<Rational>::affine(dir, 0);
    for (unsigned k = 0; k <= 4; ++k) {
      auto direct = *integrate_poly(*body, g, ell.pow(k)).exact;
      CHECK(*m.moment_exact(k) == direct);
      CHECK(rel(m.moment(k), direct.get_d()) < 1e-12);
    }
    // non-polynomial weight goes through Chebyshev fitting
    auto ge = Weight::exponential(body, Vec(n, 0.3));
    auto me = pushforward_1d(*body, ge, {dir, LatticeTag::N});
    for (unsigned k = 0; k <= 4; ++k) {
      double direct = integrate_poly(*body, ge, to_double(ell.pow(k)));
      CHECK(rel(me.moment(k), direct) < 1e-10);
    }
  }
}

TEST_CASE("weight evaluation and positivity") {
  auto tri = share(p2());
  CHECK(std::abs(Weight::cone_power(tri, {0, 0}, 2).evaluate(Vec{0.3, -0.2}) - 1.0 / 81) < 1e-17);
  CHECK(Weight::exponential(tri, {0, 0}).evaluate(Vec{0.5, 0.5}) == 1.0);
  auto seg = share(interval(-1, 1));
  auto bad = Weight::affine_pinned(seg, {2}, {0});
  CHECK_THROWS_AS(bad.evaluate(Vec{-1.0}), Error);
  CHECK(!bad.positivity_min().admissible);
  auto half = Weight::affine_pinned(seg, {Rational(1, 2)}, {0});
  CHECK(*half.positivity_min().exact == Rational(1, 2));
  auto ex = Weight::exponential(tri, {1, 2});
  CHECK(std::abs(ex.positivity_min().value - std::exp(-3.0)) < 1e-15);
  auto cone_bad = Weight::cone_power(tri, {-2, 0}, 2);
  CHECK(!cone_bad.positivity_min().admissible);
  CHECK(cone_bad.positivity_min().value <= 0);
  CHECK_THROWS_AS(integrate(*tri, cone_bad, {}), Error);
}

TEST_CASE("positivity lower bounds hold on samples") {
  auto bl = share(blp2());
  std::vector<Weight> ws{Weight::exponential(bl, {0.7, -1.1}), Weight::affine_pinned(bl, {Rational(1, 5), Rational(1, 7)}, {0, 0}),
                         Weight::cone_power(bl, {0.3, 0.2}, 2),
                         Weight::composite(bl, BExpr::parse("exp(s) + (2 + s)^(-3)"), {0.5, 0.25})};
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const auto& v = bl->vertices_double();
  for (const auto& w : ws) {
    const double lb = w.positivity_min().value;
    REQUIRE(w.positivity_min().admissible);
    for (int s = 0; s < 10000; ++s) {
      // random convex combination of the vertices
      Vec lam(v.size());
      double tot = 0.0;
      for (auto& l : lam) tot += (l = -std::log(u(rng) + 1e-300));
      Vec x(2, 0.0);
      for (std::size_t i = 0; i < v.size(); ++i)
        for (int j = 0; j < 2; ++j) x[j] += lam[i] / tot * v[i][j];
      CHECK(w.evaluate(x) >= lb * (1 - 1e-14));
    }
  }
}

TEST_CASE("b-expressions") {
  auto b = BExpr::parse("2*exp(s/2) + s^2 - 3");
  CHECK(std::abs(b(1.0) - (2 * std::exp(0.5) + 1 - 3)) < 1e-15);
  auto db = b.derivative();
  CHECK(std::abs(db(1.0) - (std::exp(0.5) + 2)) < 1e-14);
  CHECK(std::abs(db.derivative()(1.0) - (std::exp(0.5) / 2 + 2)) < 1e-14);
  auto [lo, hi] = b.bounds(-1, 1);
  CHECK(lo <= b(0.3));
  CHECK(hi >= b(0.3));
  CHECK_THROWS_AS(BExpr::parse("1/s").bounds(-1, 1), Error);
  CHECK_THROWS_AS(BExpr::parse("sin(s)"), Error);
  CHECK_THROWS_AS(BExpr::parse("s^s"), Error);
  auto bl = share(blp2());
  CHECK_THROWS_AS(Weight::composite(bl, BExpr::parse("log(s)"), {1, 0}), Error);
}

TEST_CASE("composite weight integrates like the matching family") {
  auto bl = share(blp2());
  auto a = Weight::composite(bl, BExpr::parse("exp(s)"), {0.3, -0.4});
  auto b = Weight::exponential(bl, {0.3, -0.4});
  CHECK(rel(integrate(*bl, a, {1, 1}).value, integrate(*bl, b, {1, 1}).value) < 1e-12);
}
