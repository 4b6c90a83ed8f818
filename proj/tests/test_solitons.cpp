#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>

#include "solitonlab/errors.hpp"
#include "solitonlab/soliton.hpp"
#include "test_shapes.hpp"

using namespace solitonlab;
using namespace solitonlab::testing;

namespace {

PolytopePtr share(Polytope p) { return std::make_shared<const Polytope>(std::move(p)); }

PolytopePtr big_square() { return share(Polytope::from_vertices({{-1, -1}, {1, -1}, {-1, 1}, {1, 1}})); }

}  // namespace

TEST_CASE("futaki invariant examples") {
  auto tri = share(p2());
  CHECK(*futaki(*tri, Weight::constant(tri), RVec{1, 0}).exact == 0);
  CHECK(*futaki(*tri, Weight::constant(tri), RVec{2, -5}).exact == 0);

  auto bl = share(blp2());
  CHECK(*futaki(*bl, Weight::constant(bl), RVec{1, 1}).exact == frac(-4, 3));
  CHECK(futaki_normalized(*bl, Weight::constant(bl), {1.0, 1.0}) == doctest::Approx(-1.0 / 6).epsilon(1e-14));

  auto seg = share(interval(-1, 1));
  double f = futaki(*seg, Weight::exponential(seg, {1.0}), Vec{1.0});
  CHECK(std::abs(f + 2 / std::exp(1.0)) < 1e-14);
}

TEST_CASE("futaki rejects a foreign polytope") {
  auto a = share(p2());
  auto b = share(p2());
  CHECK_THROWS_WITH_AS(futaki(*b, Weight::constant(a), RVec{1, 0}), doctest::Contains("WeightPolytopeMismatch"),
                       Error);
}

TEST_CASE("kr on symmetric bodies is zero") {
  for (auto body : {share(interval(-1, 1)), share(p2()), share(hexagon()), big_square()}) {
    auto s = solve_weight_vector(body, SolitonFamily::KR);
    CHECK(s.converged);
    for (double x : s.xi) CHECK(std::abs(x) < 1e-12);
  }
}

TEST_CASE("kr on the one point blow-up") {
  auto bl = share(blp2());
  auto s = solve_weight_vector(bl, SolitonFamily::KR);
  REQUIRE(s.converged);
  CHECK(std::abs(s.xi[0] - (-0.5276195198969628)) < 1e-10);
  CHECK(std::abs(s.xi[1] - s.xi[0]) < 1e-12);
  CHECK(s.residual < 1e-10);
  // the resulting weight kills the twisted futaki invariant in every direction
  auto g = Weight::exponential(bl, s.xi);
  CHECK(std::abs(futaki(*bl, g, Vec{1.0, 0.0})) < 1e-10);
  CHECK(std::abs(futaki(*bl, g, Vec{0.0, 1.0})) < 1e-10);
}

TEST_CASE("kr is translation covariant") {
  // the solution on P + t is the critical point of int_P e^<x + t, xi>
  auto bl = share(blp2());
  const RVec t{frac(1, 7), frac(-1, 5)};
  auto moved = share(blp2().translated(t));
  auto b = solve_weight_vector(moved, SolitonFamily::KR);
  auto g = Weight::exponential(bl, b.xi);
  const double mass = integrate(*bl, g, {}).value;
  CHECK(std::abs(integrate(*bl, g, {1, 0}).value + t[0].get_d() * mass) < 1e-10);
  CHECK(std::abs(integrate(*bl, g, {0, 1}).value + t[1].get_d() * mass) < 1e-10);
  auto a = solve_weight_vector(bl, SolitonFamily::KR);
  CHECK(std::abs(a.xi[0] - b.xi[0]) > 1e-3);
}

TEST_CASE("kr without interior origin is infeasible") {
  auto sq = share(square());
  CHECK_THROWS_WITH_AS(solve_weight_vector(sq, SolitonFamily::KR), doctest::Contains("Infeasible"), Error);
}

TEST_CASE("mabuchi is exact") {
  auto seg = share(interval(-1, 1));
  auto s = solve_weight_vector(seg, SolitonFamily::Mabuchi);
  REQUIRE(s.xi_exact);
  CHECK((*s.xi_exact)[0] == 0);

  auto bl = share(blp2());
  auto m = solve_weight_vector(bl, SolitonFamily::Mabuchi);
  REQUIRE(m.xi_exact);
  CHECK((*m.xi_exact)[0] == (*m.xi_exact)[1]);
  CHECK(m.residual == 0.0);
  // residual recomputed independently through the public integrator
  auto g = Weight::affine_pinned(bl, *m.xi_exact, RVec{frac(1, 12), frac(1, 12)});
  CHECK(*integrate(*bl, g, {1, 0}).exact == 0);
  CHECK(*integrate(*bl, g, {0, 1}).exact == 0);
  CHECK(*integrate(*bl, g, {}).exact == 8);
  CHECK(m.feasible);
}

TEST_CASE("cone family") {
  auto sq = big_square();
  auto s = solve_weight_vector(sq, SolitonFamily::Cone);
  CHECK(s.converged);
  for (double x : s.xi) CHECK(std::abs(x) < 1e-12);

  auto bl = share(blp2());
  auto c = solve_weight_vector(bl, SolitonFamily::Cone);
  REQUIRE(c.converged);
  CHECK(c.residual < 1e-10);
  auto g = Weight::cone_power(bl, c.xi, 2);
  CHECK(std::abs(futaki(*bl, g, Vec{1.0, 0.0})) < 1e-10);
  CHECK(std::abs(c.xi[0] - c.xi[1]) < 1e-12);
}

TEST_CASE("potential gradient is the weighted moment and matches differences") {
  auto bl = share(blp2());
  const Vec xi{0.2, -0.3};
  for (auto fam : {SolitonFamily::KR, SolitonFamily::Cone, SolitonFamily::Mabuchi}) {
    auto pv = soliton_potential(bl, fam, xi);
    auto g = family_weight(bl, fam, xi);
    for (std::size_t k = 0; k < 2; ++k) {
      std::vector<unsigned> e(2, 0);
      e[k] = 1;
      CHECK(std::abs(pv.gradient[k] - integrate(*bl, g, e).value) < 1e-10);
      const double h = 1e-5;
      Vec up = xi, dn = xi;
      up[k] += h;
      dn[k] -= h;
      double fd = (soliton_potential(bl, fam, up).value - soliton_potential(bl, fam, dn).value) / (2 * h);
      CHECK(std::abs(fd - pv.gradient[k]) < 1e-6 * std::max(1.0, std::abs(fd)));
      for (std::size_t j = 0; j < 2; ++j) {
        double fdh = (soliton_potential(bl, fam, up).gradient[j] - soliton_potential(bl, fam, dn).gradient[j]) / (2 * h);
        CHECK(std::abs(fdh - pv.hessian[k][j]) < 1e-6 * std::max(1.0, std::abs(fdh)));
      }
    }
  }
}

TEST_CASE("hessian definiteness at random admissible points") {
  auto bl = share(blp2());
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-0.5, 0.5);
  for (int t = 0; t < 20; ++t) {
    Vec xi{u(rng), u(rng)};
    auto kr = soliton_potential(bl, SolitonFamily::KR, xi).hessian;
    auto cone = soliton_potential(bl, SolitonFamily::Cone, xi).hessian;
    auto det = [](const std::vector<Vec>& h) { return h[0][0] * h[1][1] - h[0][1] * h[1][0]; };
    CHECK(kr[0][0] > 0);
    CHECK(det(kr) > 0);
    CHECK(cone[0][0] < 0);
    CHECK(det(cone) > 0);
  }
}

TEST_CASE("cone potential outside the admissible set") {
  auto bl = share(blp2());
  CHECK_THROWS_WITH_AS(soliton_potential(bl, SolitonFamily::Cone, {3.0, 0.0}), doctest::Contains("WeightDomain"),
                       Error);
}

TEST_CASE("composite family reproduces kr") {
  auto bl = share(blp2());
  SolitonOptions opt;
  opt.b = BExpr::parse("exp(s)");
  opt.tol = 1e-11;
  auto c = solve_weight_vector(bl, SolitonFamily::Composite, opt);
  auto k = solve_weight_vector(bl, SolitonFamily::KR);
  CHECK(std::abs(c.xi[0] - k.xi[0]) < 1e-8);
  CHECK(std::abs(c.xi[1] - k.xi[1]) < 1e-8);
}

TEST_CASE("family names") {
  CHECK(parse_family("kr") == SolitonFamily::KR);
  CHECK(parse_family("cone(3)") == SolitonFamily::Cone);
  CHECK(to_string(SolitonFamily::Mabuchi) == "mabuchi");
  CHECK_THROWS_AS(parse_family("nope"), Error);
}
