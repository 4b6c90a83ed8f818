#include "solitonlab/polytope.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "solitonlab/errors.hpp"

namespace solitonlab {

Rational pairing(const LatticeVector& a, const LatticeVector& b) {
  if (a.tag == b.tag) throw Error(ErrorCode::LatticeMismatch, "pairing needs one M and one N vector");
  if (a.dim() != b.dim()) throw Error(ErrorCode::LatticeMismatch, "dimension mismatch in pairing");
  return dot(a.coords, b.coords);
}

namespace {

struct ExtremeRays {
  std::vector<RVec> rays;
  bool has_lineality = false;
};

// Double description (Motzkin): extreme rays of the pointed cone {y : A y >= 0}.
ExtremeRays extreme_rays(const RMat& a, std::size_t d) {
  ExtremeRays out;
  const std::size_t m = a.size();

  std::vector<std::size_t> basis_rows;
  {
    RMat chosen;
    for (std::size_t i = 0; i < m && basis_rows.size() < d; ++i) {
      chosen.push_back(a[i]);
      if (rank(chosen) == chosen.size()) {
        basis_rows.push_back(i);
      } else {
        chosen.pop_back();
      }
    }
  }
  if (basis_rows.size() < d) {
    out.has_lineality = true;
    return out;
  }

  struct Ray {
    RVec y;
    std::vector<bool> zero;  // over all rows; meaningful for processed rows
  };
  std::vector<bool> processed(m, false);
  std::vector<Ray> rays;
  {
    RMat ak;
    for (auto r : basis_rows) ak.push_back(a[r]);
    for (std::size_t j = 0; j < d; ++j) {
      RVec e(d, 0);
      e[j] = 1;
      Ray ray{primitive(solve(ak, e)), std::vector<bool>(m, false)};
      rays.push_back(std::move(ray));
    }
    for (auto r : basis_rows) processed[r] = true;
    for (auto& ray : rays)
      for (auto r : basis_rows) ray.zero[r] = sgn(dot(a[r], ray.y)) == 0;
  }

  for (std::size_t row = 0; row < m; ++row) {
    if (processed[row]) continue;
    std::vector<Rational> val(rays.size());
    std::vector<std::size_t> pos, neg, zer;
    for (std::size_t k = 0; k < rays.size(); ++k) {
      val[k] = dot(a[row], rays[k].y);
      int s = sgn(val[k]);
      (s > 0 ? pos : s < 0 ? neg : zer).push_back(k);
    }
    std::vector<Ray> next;
    for (auto k : pos) next.push_back(rays[k]);
    for (auto k : zer) next.push_back(rays[k]);
    for (auto p : pos) {
      for (auto q : neg) {
        std::vector<std::size_t> common;
        for (std::size_t r = 0; r < m; ++r)
          if (processed[r] && rays[p].zero[r] && rays[q].zero[r]) common.push_back(r);
        if (common.size() + 2 < d) continue;
        bool adjacent = true;
        for (std::size_t k = 0; k < rays.size() && adjacent; ++k) {
          if (k == p || k == q) continue;
          bool contains = std::all_of(common.begin(), common.end(),
                                      [&](std::size_t r) { return rays[k].zero[r]; });
          if (contains) adjacent = false;
        }
        if (!adjacent) continue;
        RVec y(d);
        for (std::size_t i = 0; i < d; ++i) y[i] = val[p] * rays[q].y[i] - val[q] * rays[p].y[i];
        Ray ray{primitive(y), std::vector<bool>(m, false)};
        for (std::size_t r = 0; r < m; ++r)
          if (processed[r]) ray.zero[r] = rays[p].zero[r] && rays[q].zero[r];
        next.push_back(std::move(ray));
      }
    }
    processed[row] = true;
    for (auto& ray : next) ray.zero[row] = sgn(dot(a[row], ray.y)) == 0;
    rays = std::move(next);
  }
  for (auto& ray : rays) out.rays.push_back(std::move(ray.y));
  std::sort(out.rays.begin(), out.rays.end());
  return out;
}

RVec lift(const RVec& v) {
  RVec l = v;
  l.push_back(1);
  return l;
}

std::size_t affine_rank(const std::vector<RVec>& pts, const std::vector<std::size_t>& ids) {
  RMat rows;
  for (auto i : ids) rows.push_back(lift(pts[i]));
  return rank(rows);
}

// Pulling triangulation of the cone spanned by `pts` (lifted or not), with
// faces described by the facet incidence lists.
void pull(const std::vector<RVec>& pts, const std::vector<std::vector<std::size_t>>& facets,
          const std::vector<std::size_t>& face, std::size_t k, const std::vector<std::size_t>& order,
          std::vector<std::vector<std::size_t>>& out) {
  if (face.size() == k) {
    out.push_back(face);
    return;
  }
  const std::size_t apex = *std::min_element(
      face.begin(), face.end(), [&](std::size_t a, std::size_t b) { return order[a] < order[b]; });
  std::set<std::vector<std::size_t>> subfaces;
  for (const auto& g : facets) {
    std::vector<std::size_t> t;
    std::set_intersection(face.begin(), face.end(), g.begin(), g.end(), std::back_inserter(t));
    if (t.size() < k - 1 || std::binary_search(t.begin(), t.end(), apex)) continue;
    if (t.size() == face.size()) continue;
    RMat rows;
    for (auto i : t) rows.push_back(pts[i]);
    if (rank(rows) == k - 1) subfaces.insert(t);
  }
  for (const auto& t : subfaces) {
    std::vector<std::vector<std::size_t>> sub;
    pull(pts, facets, t, k - 1, order, sub);
    for (auto& s : sub) {
      s.push_back(apex);
      std::sort(s.begin(), s.end());
      out.push_back(std::move(s));
    }
  }
}

// Global pulling order: variant 0 is the index order, variant v rotates it.
std::vector<std::size_t> pulling_order(std::size_t count, int variant) {
  std::vector<std::size_t> order(count);
  const std::size_t shift = count == 0 ? 0 : (static_cast<std::size_t>(variant) * ((count + 1) / 2)) % count;
  for (std::size_t i = 0; i < count; ++i) order[i] = (i + count - shift) % count;
  return order;
}

}  // namespace

Polytope Polytope::from_facets(std::size_t dim, std::vector<Facet> facets) {
  if (dim == 0) throw Error(ErrorCode::NotFullDim, "dimension must be positive");
  RMat rows;
  for (const auto& f : facets) {
    if (f.normal.size() != dim) throw Error(ErrorCode::InvalidInput, "facet normal has wrong dimension");
    RVec r = f.normal;
    r.push_back(f.offset);
    rows.push_back(std::move(r));
  }
  RVec t(dim + 1, 0);
  t[dim] = 1;
  rows.push_back(t);
  auto dd = extreme_rays(rows, dim + 1);
  if (dd.has_lineality) throw Error(ErrorCode::Unbounded, "constraint system has a lineality space");
  Polytope p;
  p.dim_ = dim;
  for (const auto& r : dd.rays) {
    if (sgn(r[dim]) == 0) throw Error(ErrorCode::Unbounded, "polyhedron has a recession direction");
    RVec v(dim);
    for (std::size_t i = 0; i < dim; ++i) v[i] = r[i] / r[dim];
    p.vertices_.push_back(std::move(v));
  }
  if (p.vertices_.empty()) throw Error(ErrorCode::Empty, "no feasible point");
  std::sort(p.vertices_.begin(), p.vertices_.end());
  std::vector<std::size_t> all(p.vertices_.size());
  for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
  if (affine_rank(p.vertices_, all) != dim + 1)
    throw Error(ErrorCode::NotFullDim, "polytope is not full-dimensional");

  // Irredundant facets: tight vertex set of affine rank n, first occurrence kept.
  std::set<std::vector<std::size_t>> seen;
  for (auto& f : facets) {
    std::vector<std::size_t> tight;
    for (std::size_t i = 0; i < p.vertices_.size(); ++i)
      if (dot(p.vertices_[i], f.normal) + f.offset == 0) tight.push_back(i);
    if (tight.size() < dim || affine_rank(p.vertices_, tight) != dim) continue;
    if (!seen.insert(tight).second) continue;
    p.facets_.push_back(std::move(f));
  }
  p.finish();
  return p;
}

Polytope Polytope::from_vertices(std::vector<RVec> points) {
  if (points.empty()) throw Error(ErrorCode::Empty, "no points");
  const std::size_t dim = points[0].size();
  RMat rows;
  for (const auto& v : points) {
    if (v.size() != dim) throw Error(ErrorCode::InvalidInput, "points of mixed dimension");
    rows.push_back(lift(v));
  }
  auto dd = extreme_rays(rows, dim + 1);
  if (dd.has_lineality) throw Error(ErrorCode::NotFullDim, "points do not affinely span the space");
  std::vector<Facet> facets;
  for (const auto& r : dd.rays) {
    RVec normal(r.begin(), r.begin() + static_cast<long>(dim));
    facets.push_back({normal, r[dim]});
  }
  // Vertices are the points lying on facets whose normals have full rank.
  std::sort(points.begin(), points.end());
  points.erase(std::unique(points.begin(), points.end()), points.end());
  Polytope p;
  p.dim_ = dim;
  for (const auto& v : points) {
    RMat normals;
    for (const auto& f : facets)
      if (dot(v, f.normal) + f.offset == 0) normals.push_back(f.normal);
    if (rank(normals) == dim) p.vertices_.push_back(v);
  }
  p.facets_ = std::move(facets);
  p.finish();
  return p;
}

void Polytope::finish() {
  incidence_.clear();
  for (const auto& f : facets_) {
    std::vector<std::size_t> tight;
    for (std::size_t i = 0; i < vertices_.size(); ++i)
      if (dot(vertices_[i], f.normal) + f.offset == 0) tight.push_back(i);
    incidence_.push_back(std::move(tight));
  }
  vertices_d_.clear();
  for (const auto& v : vertices_) vertices_d_.push_back(to_double(v));
  simplices_ = triangulate(*this, 0);
}

Rational Polytope::volume() const {
  Rational s = 0;
  for (const auto& sx : simplices_) s += sx.abs_det;
  mpz_class fact;
  mpz_fac_ui(fact.get_mpz_t(), dim_);
  return s / Rational(fact);
}

Polytope Polytope::translated(const RVec& t) const {
  Polytope p = *this;
  for (auto& v : p.vertices_) v = v + t;
  for (auto& f : p.facets_) f.offset -= dot(f.normal, t);
  std::sort(p.vertices_.begin(), p.vertices_.end());
  p.finish();
  return p;
}

std::pair<Rational, Rational> Polytope::range(std::span<const Rational> linear) const {
  Rational lo = dot(vertices_[0], linear), hi = lo;
  for (const auto& v : vertices_) {
    Rational s = dot(v, linear);
    if (s < lo) lo = s;
    if (s > hi) hi = s;
  }
  return {lo, hi};
}

std::pair<double, double> Polytope::range(std::span<const double> linear) const {
  double lo = dot(vertices_d_[0], linear), hi = lo;
  for (const auto& v : vertices_d_) {
    double s = dot(v, linear);
    lo = std::min(lo, s);
    hi = std::max(hi, s);
  }
  return {lo, hi};
}

bool Polytope::contains(std::span<const Rational> x) const {
  return std::all_of(facets_.begin(), facets_.end(),
                     [&](const Facet& f) { return dot(x, f.normal) + f.offset >= 0; });
}

std::vector<Simplex> triangulate(const Polytope& body, int variant) {
  const std::size_t n = body.dim();
  std::vector<RVec> lifted;
  for (const auto& v : body.vertices()) lifted.push_back(lift(v));
  std::vector<std::size_t> all(lifted.size());
  for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
  std::vector<std::vector<std::size_t>> pieces;
  pull(lifted, body.facet_vertices(), all, n + 1, pulling_order(all.size(), variant), pieces);
  std::vector<Simplex> out;
  for (auto& ids : pieces) {
    RMat m;
    const auto& v0 = body.vertices()[ids[0]];
    for (std::size_t i = 1; i < ids.size(); ++i) m.push_back(body.vertices()[ids[i]] - v0);
    Rational det = determinant(m);
    out.push_back({std::move(ids), abs(det)});
  }
  return out;
}

PolyCone PolyCone::from_generators(LatticeTag tag, std::vector<RVec> generators) {
  if (generators.empty()) throw Error(ErrorCode::NotFullDim, "cone without generators");
  const std::size_t d = generators[0].size();
  for (auto& g : generators) {
    if (g.size() != d) throw Error(ErrorCode::InvalidInput, "generators of mixed dimension");
    if (is_zero(g)) throw Error(ErrorCode::ZeroVector, "zero generator");
    g = primitive(g);
  }
  std::sort(generators.begin(), generators.end());
  generators.erase(std::unique(generators.begin(), generators.end()), generators.end());
  // Facet normals are the extreme rays of the dual cone {a : <g, a> >= 0}.
  auto dd = extreme_rays(generators, d);
  if (dd.has_lineality) throw Error(ErrorCode::NotFullDim, "generators do not span the space");
  PolyCone c;
  c.tag_ = tag;
  c.dim_ = d;
  c.normals_ = dd.rays;
  if (c.normals_.size() < d)
    throw Error(ErrorCode::NotPointed, "dual cone is not full-dimensional; the cone contains a line");
  {
    RMat rows = c.normals_;
    if (rank(rows) < d) throw Error(ErrorCode::NotPointed, "the cone contains a line");
  }
  // Keep only extreme generators.
  for (const auto& g : generators) {
    RMat tight;
    for (const auto& a : c.normals_)
      if (sgn(dot(g, a)) == 0) tight.push_back(a);
    if (rank(tight) == d - 1) c.generators_.push_back(g);
  }
  for (const auto& a : c.normals_) {
    std::vector<std::size_t> ids;
    for (std::size_t i = 0; i < c.generators_.size(); ++i)
      if (sgn(dot(c.generators_[i], a)) == 0) ids.push_back(i);
    c.incidence_.push_back(std::move(ids));
  }
  return c;
}

PolyCone PolyCone::from_facet_normals(LatticeTag tag, std::vector<RVec> normals) {
  LatticeTag dual_tag = tag == LatticeTag::M ? LatticeTag::N : LatticeTag::M;
  return from_generators(dual_tag, std::move(normals)).dual();
}

PolyCone PolyCone::dual() const {
  PolyCone c;
  c.tag_ = tag_ == LatticeTag::M ? LatticeTag::N : LatticeTag::M;
  c.dim_ = dim_;
  c.generators_ = normals_;
  c.normals_ = generators_;
  for (const auto& a : c.normals_) {
    std::vector<std::size_t> ids;
    for (std::size_t i = 0; i < c.generators_.size(); ++i)
      if (sgn(dot(c.generators_[i], a)) == 0) ids.push_back(i);
    c.incidence_.push_back(std::move(ids));
  }
  return c;
}

bool PolyCone::dual_interior_contains(std::span<const double> v) const {
  return std::all_of(generators_.begin(), generators_.end(),
                     [&](const RVec& g) { return dot(to_double(g), v) > 0.0; });
}

bool PolyCone::dual_interior_contains(std::span<const Rational> v) const {
  return std::all_of(generators_.begin(), generators_.end(),
                     [&](const RVec& g) { return sgn(dot(g, v)) > 0; });
}

std::vector<SimplicialCone> triangulate(const PolyCone& cone, int variant) {
  std::vector<std::size_t> all(cone.generators().size());
  for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
  std::vector<std::vector<std::size_t>> pieces;
  pull(cone.generators(), cone.facet_generators(), all, cone.dim(), pulling_order(all.size(), variant), pieces);
  std::vector<SimplicialCone> out;
  for (auto& ids : pieces) {
    RMat m;
    for (auto i : ids) m.push_back(cone.generators()[i]);
    Rational det = determinant(m);
    out.push_back({std::move(ids), abs(det)});
  }
  return out;
}

RVec AffineFrame::to_ambient(std::span<const Rational> z) const {
  RVec y = origin;
  for (std::size_t k = 0; k < basis.size(); ++k)
    for (std::size_t i = 0; i < y.size(); ++i) y[i] += z[k] * basis[k][i];
  return y;
}

Vec AffineFrame::to_ambient(std::span<const double> z) const {
  Vec y = solitonlab::to_double(origin);
  for (std::size_t k = 0; k < basis.size(); ++k)
    for (std::size_t i = 0; i < y.size(); ++i) y[i] += z[k] * basis[k][i].get_d();
  return y;
}

CrossSection cross_section(const PolyCone& cone, const LatticeVector& normal,
                           std::optional<RVec> origin) {
  const LatticeTag dual_tag = cone.tag() == LatticeTag::M ? LatticeTag::N : LatticeTag::M;
  if (normal.tag != dual_tag) throw Error(ErrorCode::LatticeMismatch, "section normal must lie in the dual lattice");
  if (normal.dim() != cone.dim()) throw Error(ErrorCode::InvalidInput, "section normal has wrong dimension");
  if (!cone.dual_interior_contains(normal.coords))
    throw Error(ErrorCode::UnboundedSection, "normal is not strictly positive on the cone");
  const std::size_t d = cone.dim();

  CrossSection cs;
  cs.normal = normal;
  if (origin) {
    if (dot(*origin, normal.coords) != 1)
      throw Error(ErrorCode::InvalidInput, "frame origin must lie on the section hyperplane");
    cs.frame.origin = *origin;
  } else {
    std::size_t k = 0;
    while (sgn(normal.coords[k]) == 0) ++k;
    cs.frame.origin.assign(d, 0);
    cs.frame.origin[k] = 1 / normal.coords[k];
  }
  cs.frame.basis = integer_kernel_basis(normal.coords);

  RMat full = cs.frame.basis;
  full.push_back(cs.frame.origin);
  cs.dh_factor = abs(determinant(full));

  // Normal equations B^T B z = B^T (y - origin) recover frame coordinates exactly.
  const std::size_t n = d - 1;
  RMat gram(n, RVec(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) gram[i][j] = dot(cs.frame.basis[i], cs.frame.basis[j]);
  std::vector<RVec> zs;
  for (const auto& g : cone.generators()) {
    RVec y = (1 / dot(g, normal.coords)) * g;
    cs.ambient_vertices.push_back(y);
    RVec rhs(n);
    RVec diff = y - cs.frame.origin;
    for (std::size_t i = 0; i < n; ++i) rhs[i] = dot(cs.frame.basis[i], diff);
    zs.push_back(n == 0 ? RVec{} : solve(gram, rhs));
  }
  if (n == 0) throw Error(ErrorCode::NotFullDim, "cross section of a ray is a point");
  cs.polytope = std::make_shared<const Polytope>(Polytope::from_vertices(std::move(zs)));
  std::sort(cs.ambient_vertices.begin(), cs.ambient_vertices.end());
  return cs;
}

}  // namespace solitonlab
