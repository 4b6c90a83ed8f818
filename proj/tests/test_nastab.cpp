#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <numbers>
#include <random>

#include "solitonlab/errors.hpp"
#include "solitonlab/nastab.hpp"
#include "solitonlab/soliton.hpp"
#include "test_shapes.hpp"

using namespace solitonlab;
using namespace solitonlab::testing;

namespace {

PolytopePtr share(Polytope p) { return std::make_shared<const Polytope>(std::move(p)); }

// random concave PL function with small rational data
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

RVec random_vector(std::size_t n, std::mt19937_64& rng) {
  std::uniform_int_distribution<long> coef(-9, 9);
  RVec v(n);
  for (auto& x : v) x = frac(coef(rng), 4);
  return v;
}

}  // namespace

TEST_CASE("valuation examples") {
  auto seg = share(interval(-1, 1));
  auto r = valuation_report(*seg, Weight::constant(seg), RVec{1});
  CHECK(*r.log_discrepancy_exact == 1);
  CHECK(*r.expected_order_exact == 1);
  CHECK(*r.ding_exact == 0);

  auto bl = share(blp2());
  auto b = valuation_report(*bl, Weight::constant(bl), RVec{1, 1});
  CHECK(*b.log_discrepancy_exact == 1);
  CHECK(*b.expected_order_exact == frac(7, 6));
  CHECK(*b.ding_exact == frac(-1, 6));

  auto tri = share(p2());
  std::mt19937_64 rng(5);
  for (int i = 0; i < 20; ++i) {
    RVec u = random_vector(2, rng);
    if (is_zero(u)) continue;
    auto t = valuation_report(*tri, Weight::constant(tri), u);
    CHECK(*t.log_discrepancy_exact == *t.expected_order_exact);
  }
  CHECK_THROWS_WITH_AS(valuation_report(*tri, Weight::constant(tri), RVec{0, 0}), doctest::Contains("ZeroVector"),
                       Error);
}

TEST_CASE("A and S are homogeneous of degree one") {
  auto bl = share(blp2());
  auto g = Weight::exponential(bl, {0.3, -0.2});
  auto a = valuation_report(*bl, g, Vec{0.4, 1.1});
  auto b = valuation_report(*bl, g, Vec{1.2, 3.3});
  CHECK(std::abs(3 * a.log_discrepancy - b.log_discrepancy) < 1e-14);
  CHECK(std::abs(3 * a.expected_order - b.expected_order) < 1e-13);
}

TEST_CASE("twists") {
  CHECK(twist(RVec{1, 0}, RVec{0, 1}) == RVec{1, 1});
  auto bl = share(blp2());
  auto zero = PLFiltration::constant(bl, 0);
  auto lin = zero.twisted(RVec{2, -1});
  CHECK(lin.pieces().size() == 1);
  CHECK(lin.pieces()[0].slope == RVec{2, -1});
  std::mt19937_64 rng(9);
  auto f = random_filtration(bl, rng);
  auto back = f.twisted(RVec{frac(1, 3), 2}).twisted(RVec{frac(-1, 3), -2});
  for (const auto& v : f.subdivision_vertices()) CHECK(f(v) == back(v));
}

TEST_CASE("na_eval examples") {
  auto seg = share(interval(-1, 1));
  auto g = Weight::constant(seg);

  auto c = na_eval(*seg, g, PLFiltration::constant(seg, frac(2, 3)));
  CHECK(*c.energy_exact == frac(2, 3));
  CHECK(*c.lambda_max_exact == frac(2, 3));
  CHECK(*c.j_exact == 0);
  REQUIRE(c.dh.atoms().size() == 1);
  CHECK(*c.dh.atoms()[0].exact_mass == 1);
  CHECK(*c.dh.atoms()[0].exact_at == frac(2, 3));

  auto f = PLFiltration::from_pieces(seg, {{{0}, 1}, {{-1}, 1}});
  auto r = na_eval(*seg, g, f);
  CHECK(*r.energy_exact == frac(3, 4));
  CHECK(*r.lambda_max_exact == 1);
  CHECK(*r.j_exact == frac(1, 4));
  CHECK(*r.lambda_min_exact == 0);

  auto l = na_eval(*seg, g, PLFiltration::linear(seg, {1}));
  CHECK(*l.energy_exact == 0);
  CHECK(*l.lambda_max_exact == 1);
  CHECK(*l.j_exact == 1);
}

TEST_CASE("DH of a filtration is a probability measure on [lambda_min, Lambda]") {
  auto bl = share(blp2());
  std::mt19937_64 rng(11);
  for (int i = 0; i < 10; ++i) {
    auto f = random_filtration(bl, rng);
    auto r = na_eval(*bl, Weight::constant(bl), f);
    CHECK(*r.dh.moment_exact(0) == 1);
    CHECK(*r.dh.moment_exact(1) == *r.energy_exact);
    auto [lo, hi] = r.dh.support();
    CHECK(lo == doctest::Approx(r.lambda_min));
    CHECK(hi == doctest::Approx(r.lambda_max));
    CHECK(*r.j_exact >= 0);
  }
  // non-polynomial weight: Chebyshev path
  auto g = Weight::exponential(bl, {-0.5, -0.5});
  auto f = PLFiltration::from_pieces(bl, {{{1, 0}, 1}, {{0, -1}, 1}, {{-1, -1}, frac(3, 2)}});
  auto r = na_eval(*bl, g, f);
  CHECK(std::abs(r.dh.moment(0) - 1.0) < 1e-10);
  CHECK(std::abs(r.dh.moment(1) - r.energy) < 1e-10);
}

TEST_CASE("concavity") {
  auto seg = share(interval(-1, 1));
  CHECK_THROWS_WITH_AS(PLFiltration::from_pieces(seg, {{{1}, 0}, {{-1}, 0}}, "max"), doctest::Contains("NotConcave"),
                       Error);
  // one piece dominates everywhere on P
  auto f = PLFiltration::from_pieces(seg, {{{1}, 5}, {{-1}, 0}}, "max");
  CHECK(f.pieces().size() == 1);
  CHECK(f.pieces()[0].offset == 5);
}

TEST_CASE("twist identities against the normalized futaki invariant") {
  std::mt19937_64 rng(21);
  auto bl = share(blp2());
  auto g = Weight::constant(bl);
  const Vec bar{1.0 / 12, 1.0 / 12};
  for (int i = 0; i < 50; ++i) {
    RVec u = random_vector(2, rng), xi = random_vector(2, rng);
    if (is_zero(u) || is_zero(twist(u, xi))) continue;
    Vec xid = to_double(xi);
    const double fut = futaki_normalized(*bl, g, xid);
    auto a = valuation_report(*bl, g, u), b = valuation_report(*bl, g, twist(u, xi));
    CHECK(std::abs((b.ding - a.ding) - fut) < 1e-12);

    // the energy moves by the barycenter pairing, i.e. by -Fut_g
    auto f = random_filtration(bl, rng);
    const double de = na_energy(*bl, g, f.twisted(xi)).value - na_energy(*bl, g, f).value;
    CHECK(std::abs(de - (bar[0] * xid[0] + bar[1] * xid[1])) < 1e-12);
    CHECK(std::abs(de + fut) < 1e-12);
  }
}

TEST_CASE("shadow inequality") {
  std::mt19937_64 rng(33);
  auto bl = share(blp2());
  auto g = Weight::exponential(bl, {0.2, -0.4});
  for (int i = 0; i < 40; ++i) {
    auto f = random_filtration(bl, rng);
    Vec u = to_double(random_vector(2, rng));
    if (u[0] == 0 && u[1] == 0) continue;
    const double e = na_energy(*bl, g, f).value;
    CHECK(filtration_shadow(f, u) + valuation_report(*bl, g, u).expected_order >= e - 1e-12);
  }
}

TEST_CASE("reduced J") {
  auto bl = share(blp2());
  auto g = Weight::constant(bl);
  const std::vector<RVec> full{{1, 0}, {0, 1}};

  auto lin = PLFiltration::linear(bl, {frac(1, 2), -1});
  auto r = reduced_jna(*bl, g, lin, full);
  CHECK(std::abs(r.value) < 1e-12);
  CHECK(std::abs(r.xi[0] + 0.5) < 1e-12);
  CHECK(std::abs(r.xi[1] - 1.0) < 1e-12);

  auto zero = reduced_jna(*bl, g, PLFiltration::constant(bl, 0), full);
  CHECK(std::abs(zero.value) < 1e-12);

  auto seg = share(interval(-1, 1));
  auto f = PLFiltration::from_pieces(seg, {{{0}, 1}, {{-1}, 1}});
  auto rj = reduced_jna(*seg, Weight::constant(seg), f, {{1}});
  double grid = 1e300;
  for (int i = 0; i <= 40000; ++i) {
    const double t = -2.0 + 4.0 * i / 40000;
    double top = -1e300;
    for (int k = 0; k <= 200; ++k) {
      const double x = -1.0 + 2.0 * k / 200;
      top = std::max(top, std::min(1.0, 1.0 - x) + t * x);
    }
    grid = std::min(grid, top - 0.75);
  }
  CHECK(std::abs(rj.value - grid) < 1e-9);
  CHECK(rj.value <= na_eval(*seg, Weight::constant(seg), f).j + 1e-15);

  std::mt19937_64 rng(4);
  for (int i = 0; i < 10; ++i) {
    auto h = random_filtration(bl, rng);
    CHECK(reduced_jna(*bl, g, h, {{1, 1}}).value <= na_eval(*bl, g, h).j + 1e-12);
    CHECK(reduced_jna(*bl, g, h, full).value >= -1e-12);
  }
}

TEST_CASE("delta on the projective plane") {
  auto tri = share(p2());
  auto d = delta_estimate(*tri, Weight::constant(tri));
  CHECK(d.delta == 1.0);
}

TEST_CASE("delta on the one point blow-up") {
  auto bl = share(blp2());
  auto d = delta_estimate(*bl, Weight::constant(bl));
  CHECK(std::abs(d.delta - 6.0 / 7) < 1e-3);
  const double angle = std::acos((d.witness_u[0] + d.witness_u[1]) / std::sqrt(2.0)) * 180 / std::numbers::pi;
  CHECK(angle < 1.0);
  auto again = delta_estimate(*bl, Weight::constant(bl));
  CHECK(again.delta == d.delta);
  CHECK(again.witness_u == d.witness_u);
}

TEST_CASE("reduced delta at the soliton weight") {
  auto bl = share(blp2());
  auto s = solve_weight_vector(bl, SolitonFamily::KR);
  auto g = Weight::exponential(bl, s.xi);
  DeltaOptions opt;
  opt.reduced = true;
  opt.sphere_points = 60;
  auto d = delta_estimate(*bl, g, opt);
  CHECK(d.delta >= 1 - 1e-6);
  CHECK(d.witness_xi.has_value());
}
