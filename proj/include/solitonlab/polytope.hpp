#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "solitonlab/rational.hpp"

namespace solitonlab {

// M is the character lattice (moment side), N its dual (Reeb vectors,
// one-parameter subgroups, toric valuations).
enum class LatticeTag { M, N };

struct LatticeVector {
  RVec coords;
  LatticeTag tag = LatticeTag::N;

  std::size_t dim() const { return coords.size(); }
  Vec to_double() const { return solitonlab::to_double(coords); }
};

// <m, u> for vectors on opposite lattices; throws LatticeMismatch otherwise.
Rational pairing(const LatticeVector& a, const LatticeVector& b);

// Half-space <x, normal> >= -offset.
struct Facet {
  RVec normal;
  Rational offset;
};

// Simplex given by indices into the owning polytope's vertex list; abs_det is
// |det(v_1 - v_0, ..., v_n - v_0)|, so its volume is abs_det / n!.
struct Simplex {
  std::vector<std::size_t> vertex_ids;
  Rational abs_det;
};

struct SimplicialCone {
  std::vector<std::size_t> generator_ids;
  Rational abs_det;
};

class Polytope {
 public:
  static Polytope from_facets(std::size_t dim, std::vector<Facet> facets);
  static Polytope from_vertices(std::vector<RVec> points);

  std::size_t dim() const { return dim_; }
  const std::vector<Facet>& facets() const { return facets_; }
  const std::vector<RVec>& vertices() const { return vertices_; }
  const std::vector<Vec>& vertices_double() const { return vertices_d_; }
  // facet_vertices()[j] lists the vertices on facet j (sorted).
  const std::vector<std::vector<std::size_t>>& facet_vertices() const { return incidence_; }

  // Cached pulling triangulation (variant 0).
  const std::vector<Simplex>& simplices() const { return simplices_; }
  Rational volume() const;  // Lebesgue

  Polytope translated(const RVec& t) const;
  std::pair<Rational, Rational> range(std::span<const Rational> linear) const;
  std::pair<double, double> range(std::span<const double> linear) const;
  bool contains(std::span<const Rational> x) const;

 private:
  Polytope() = default;
  void finish();

  std::size_t dim_ = 0;
  std::vector<Facet> facets_;
  std::vector<RVec> vertices_;
  std::vector<Vec> vertices_d_;
  std::vector<std::vector<std::size_t>> incidence_;
  std::vector<Simplex> simplices_;
};

using PolytopePtr = std::shared_ptr<const Polytope>;

// Polyhedral cone with both descriptions: generators (primitive integer
// vectors in `tag`) and facet normals (primitive, in the dual lattice) with
// <g, a> >= 0 for every generator g and normal a.
class PolyCone {
 public:
  static PolyCone from_generators(LatticeTag tag, std::vector<RVec> generators);
  // Cone {y : <y, a_j> >= 0}; normals live in the dual lattice of `tag`.
  static PolyCone from_facet_normals(LatticeTag tag, std::vector<RVec> normals);

  LatticeTag tag() const { return tag_; }
  std::size_t dim() const { return dim_; }
  const std::vector<RVec>& generators() const { return generators_; }
  const std::vector<RVec>& facet_normals() const { return normals_; }
  const std::vector<std::vector<std::size_t>>& facet_generators() const { return incidence_; }

  PolyCone dual() const;
  // Strict positivity of <g, v> on all generators, i.e. v in the interior of the dual.
  bool dual_interior_contains(std::span<const double> v) const;
  bool dual_interior_contains(std::span<const Rational> v) const;

 private:
  PolyCone() = default;

  LatticeTag tag_ = LatticeTag::M;
  std::size_t dim_ = 0;
  std::vector<RVec> generators_;
  std::vector<RVec> normals_;
  std::vector<std::vector<std::size_t>> incidence_;
};

// Pulling triangulations. `variant` rotates the global pulling order
// (0: index order) so different triangulations are available.
std::vector<Simplex> triangulate(const Polytope& body, int variant = 0);
std::vector<SimplicialCone> triangulate(const PolyCone& cone, int variant = 0);

// ambient = origin + sum_k z_k basis[k]
struct AffineFrame {
  RVec origin;
  RMat basis;

  RVec to_ambient(std::span<const Rational> z) const;
  Vec to_ambient(std::span<const double> z) const;
};

// P_chi = cone ∩ {<y, chi> = 1} expressed in frame coordinates. The frame basis
// is a Z-basis of M ∩ chi^perp, so frame Lebesgue measure is the lattice
// measure of the hyperplane. dh_factor converts frame Lebesgue measure into
// the transversal measure (Lebesgue on the cone) / d<y, chi>.
struct CrossSection {
  PolytopePtr polytope;
  AffineFrame frame;
  LatticeVector normal;
  Rational dh_factor;
  std::vector<RVec> ambient_vertices;
};

CrossSection cross_section(const PolyCone& cone, const LatticeVector& normal,
                           std::optional<RVec> origin = std::nullopt);

}  // namespace solitonlab
