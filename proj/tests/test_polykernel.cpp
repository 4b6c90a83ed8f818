#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "solitonlab/errors.hpp"
#include "solitonlab/polytope.hpp"
#include "test_shapes.hpp"

using namespace solitonlab;
using namespace solitonlab::testing;

TEST_CASE("interval from facets") {
  auto p = Polytope::from_facets(1, {{{1}, 1}, {{-1}, 1}});
  REQUIRE(p.vertices().size() == 2);
  CHECK(p.vertices()[0] == RVec{-1});
  CHECK(p.vertices()[1] == RVec{1});
  CHECK(p.volume() == 2);
}

TEST_CASE("P2 vertices from facets") {
  auto p = p2();
  std::vector<RVec> expect{{-1, -1}, {-1, 2}, {2, -1}};
  CHECK(p.vertices() == expect);
  CHECK(p.volume() == Rational(9, 2));
  CHECK(p.facets().size() == 3);
}

TEST_CASE("unbounded and empty and flat") {
  auto code = [](auto&& fn) {
    try {
      fn();
    } catch (const Error& e) {
      return e.code();
    }
    return ErrorCode::InvalidInput;
  };
  CHECK(code([] { Polytope::from_facets(1, {{{1}, 0}, {{1}, -1}}); }) == ErrorCode::Unbounded);
  CHECK(code([] { Polytope::from_facets(1, {{{1}, -2}, {{-1}, 1}}); }) == ErrorCode::Empty);
  CHECK(code([] { Polytope::from_facets(1, {{{1}, -1}, {{-1}, 1}}); }) == ErrorCode::NotFullDim);
  CHECK(code([] { Polytope::from_vertices({{0, 0}, {1, 1}, {2, 2}}); }) == ErrorCode::NotFullDim);
}

TEST_CASE("redundant facets are dropped") {
  auto p = Polytope::from_facets(1, {{{1}, 1}, {{-1}, 1}, {{1}, 5}, {{2}, 2}});
  CHECK(p.facets().size() == 2);
}

TEST_CASE("H and V round trip") {
  for (const auto& p : {p2(), blp2(), square(), cube_minus_corner()}) {
    auto q = Polytope::from_vertices(p.vertices());
    CHECK(q.vertices() == p.vertices());
    auto r = Polytope::from_facets(p.dim(), q.facets());
    CHECK(r.vertices() == p.vertices());
    CHECK(r.volume() == p.volume());
    for (const auto& v : p.vertices()) {
      int tight = 0;
      for (const auto& f : p.facets()) {
        Rational s = dot(v, f.normal) + f.offset;
        CHECK(s >= 0);
        tight += s == 0;
      }
      CHECK(tight >= static_cast<int>(p.dim()));
    }
  }
}

TEST_CASE("from_vertices ignores interior points") {
  auto p = Polytope::from_vertices({{0, 0}, {1, 0}, {0, 1}, {1, 1}, {Rational(1, 2), Rational(1, 2)}, {1, 0}});
  CHECK(p.vertices().size() == 4);
  CHECK(p.facets().size() == 4);
}

TEST_CASE("triangulations tile the body") {
  auto sq = square();
  CHECK(sq.simplices().size() == 2);
  for (const auto& s : sq.simplices()) CHECK(s.abs_det == 1);
  auto simplex = p2();
  CHECK(simplex.simplices().size() == 1);
  for (const auto& p : {p2(), blp2(), square(), cube_minus_corner(), hexagon()}) {
    for (int variant : {0, 1}) {
      Rational total = 0;
      for (const auto& s : triangulate(p, variant)) {
        CHECK(s.abs_det != 0);
        total += s.abs_det;
      }
      Rational fact = 1;
      for (std::size_t k = 2; k <= p.dim(); ++k) fact *= static_cast<unsigned long>(k);
      CHECK(total / fact == p.volume());
    }
  }
}

TEST_CASE("conifold cone triangulation") {
  auto c = conifold_moment_cone();
  CHECK(c.generators().size() == 4);
  CHECK(c.facet_normals().size() == 4);
  auto pieces = triangulate(c);
  REQUIRE(pieces.size() == 2);
  for (const auto& s : pieces) CHECK(s.abs_det == 1);
  auto other = triangulate(c, 1);
  REQUIRE(other.size() == 2);
  CHECK(other[0].generator_ids != pieces[0].generator_ids);
}

TEST_CASE("dual of dual") {
  auto c = conifold_moment_cone();
  auto dd = c.dual().dual();
  CHECK(dd.generators() == c.generators());
  CHECK(dd.tag() == c.tag());
  std::vector<RVec> rays{{-1, 0, 1}, {0, -1, 1}, {0, 1, 0}, {1, 0, 0}};
  CHECK(c.dual().generators() == rays);
}

TEST_CASE("half plane is not pointed") {
  bool thrown = false;
  try {
    PolyCone::from_generators(LatticeTag::M, {{1, 0}, {-1, 0}, {0, 1}});
  } catch (const Error& e) {
    thrown = e.code() == ErrorCode::NotPointed;
  }
  CHECK(thrown);
}

TEST_CASE("cross sections") {
  auto quadrant = PolyCone::from_generators(LatticeTag::M, {{1, 0}, {0, 1}});
  auto seg = cross_section(quadrant, {{1, 1}, LatticeTag::N});
  CHECK(seg.polytope->dim() == 1);
  CHECK(seg.polytope->volume() == 1);
  std::vector<RVec> ends{{0, 1}, {1, 0}};
  CHECK(seg.ambient_vertices == ends);

  auto c = conifold_moment_cone();
  auto sq = cross_section(c, {{0, 0, 1}, LatticeTag::N});
  CHECK(sq.polytope->volume() == 1);
  CHECK(sq.polytope->vertices().size() == 4);
  for (const auto& y : sq.ambient_vertices) CHECK(y[2] == 1);
  for (const auto& z : sq.polytope->vertices()) {
    auto y = sq.frame.to_ambient(z);
    CHECK(dot(y, RVec{0, 0, 1}) == 1);
  }

  auto tilted = cross_section(c, {{Rational(3, 4), Rational(3, 4), Rational(3, 4)}, LatticeTag::N});
  for (const auto& y : tilted.ambient_vertices)
    CHECK(dot(y, RVec{Rational(3, 4), Rational(3, 4), Rational(3, 4)}) == 1);

  bool thrown = false;
  try {
    cross_section(c, {{0, 0, -1}, LatticeTag::N});
  } catch (const Error& e) {
    thrown = e.code() == ErrorCode::UnboundedSection;
  }
  CHECK(thrown);
}

TEST_CASE("pairing needs opposite lattices") {
  LatticeVector m{{1, 2}, LatticeTag::M}, n{{3, 4}, LatticeTag::N};
  CHECK(pairing(m, n) == 11);
  CHECK_THROWS_AS(pairing(m, m), Error);
}
