#pragma once

#include <optional>
#include <vector>

#include "solitonlab/dh.hpp"
#include "solitonlab/polytope.hpp"
#include "solitonlab/weight.hpp"

namespace solitonlab {

// Toric cone: moment cone C* in M, Reeb cone C = dual in N, and the
// Gorenstein vector gamma with <gamma, v> = 1 on every primitive ray of C.
struct FanoCone {
  unsigned n = 0;  // cone dimension is n + 1
  PolyCone moment;
  PolyCone reeb;
  RVec gorenstein;
  std::vector<SimplicialCone> simplices;  // of the moment cone

  bool in_reeb_interior(std::span<const double> xi) const { return moment.dual_interior_contains(xi); }
  bool in_reeb_interior(std::span<const Rational> xi) const { return moment.dual_interior_contains(xi); }
};

FanoCone build_cone_from_generators(std::vector<RVec> moment_generators);
FanoCone build_cone_from_rays(std::vector<RVec> reeb_rays);

// vol(xi) = sum_sigma |det U_sigma| / prod_i <u_i, xi>, normalized so that
// vol = 1 for C^{n+1} at (1, ..., 1).
struct VolumeValue {
  double value = 0.0;
  Vec gradient;
  std::vector<Vec> hessian;
  std::optional<Rational> exact;
  std::optional<RVec> gradient_exact;
  std::optional<RMat> hessian_exact;
};

VolumeValue volume(const FanoCone& cone, const Vec& xi, int variant = 0);
VolumeValue volume(const FanoCone& cone, const RVec& xi, int variant = 0);

struct MsyResult {
  Vec xi;
  double vol = 0.0;
  double gradient_norm = 0.0;          // of the gradient projected to the slice
  std::vector<Vec> reduced_hessian;    // in slice coordinates
  bool reduced_hessian_definite = false;
  int iterations = 0;
};

// Minimizes vol over {<gamma, xi> = level} (default n + 1) inside C.
MsyResult msy_minimize(const FanoCone& cone, std::optional<Rational> level = std::nullopt);

// Quotient by a quasi-regular Reeb vector chi (normalized to <gamma, chi> = n+1).
// Quotient coordinates: y = gamma/(n+1) + sum_k z_k b_k on the cross-section,
// x = (n+1) z. For xi = chi + lift(theta), <y, xi> = (n+1+<x, theta>)/(n+1).
struct QuotientModel {
  unsigned n = 0;
  RVec chi;
  RVec gorenstein;
  CrossSection section;
  PolytopePtr polytope;                     // x coordinates
  std::vector<Rational> divisor_coefficients;  // 1 - 1/m per facet of the section

  Vec lift(const Vec& theta) const;
  RVec lift(const RVec& theta) const;
  // theta of a Reeb vector after normalizing it to the slice
  Vec project(const Vec& xi) const;
  Vec reeb_vector(const Vec& theta) const;
  Weight weight(const Vec& xi) const;
};

QuotientModel quotient(const FanoCone& cone, const RVec& chi);
// Irrational input: always IrregularQuotient.
QuotientModel quotient(const FanoCone& cone, const Vec& chi);

// lhs = int_{P_xi} v dDH^xi, rhs = int_{P_chi} v(y/l(y)) l(y)^{-n-1} dDH^chi with
// l = <., xi>. v is a monomial in the ambient M coordinates. with_factor = false
// drops l^{-n-1} (negative control).
struct DhCheck {
  IntegralResult lhs;
  double rhs = 0.0;
};

DhCheck dh_invariance_check(const FanoCone& cone, const RVec& xi, const RVec& chi, const std::vector<unsigned>& monomial,
                            bool with_factor = true);

// DH measure on a cross-section: n! * dh_factor * frame Lebesgue.
IntegralResult section_integral(const CrossSection& section, const Weight& g, const Polynomial<Rational>& p);

}  // namespace solitonlab
