#pragma once

#include <optional>
#include <string>
#include <vector>

#include "solitonlab/dh.hpp"
#include "solitonlab/measure.hpp"
#include "solitonlab/weight.hpp"

namespace solitonlab {

// A(u) = -min_P <x, u>, S_g(u) = <xbar_g, u> + A(u); exact when g is polynomial.
struct ValuationReport {
  double log_discrepancy = 0.0;
  double expected_order = 0.0;
  double ding = 0.0;  // A - S_g
  std::optional<Rational> log_discrepancy_exact, expected_order_exact, ding_exact;
};

ValuationReport valuation_report(const Polytope& body, const Weight& g, const RVec& u);
ValuationReport valuation_report(const Polytope& body, const Weight& g, const Vec& u);

RVec twist(const RVec& u, const RVec& xi);

struct AffinePiece {
  RVec slope;
  Rational offset;
};

// Concave PL function min_i (<slope_i, x> + offset_i) on a polytope.
class PLFiltration {
 public:
  // combine = "min" or "max"; a max of affine functions is accepted only when
  // one piece dominates on the polytope (otherwise NotConcave).
  static PLFiltration from_pieces(const PolytopePtr& body, std::vector<AffinePiece> pieces,
                                  const std::string& combine = "min");
  static PLFiltration constant(const PolytopePtr& body, Rational c);
  static PLFiltration linear(const PolytopePtr& body, RVec slope, Rational offset = 0);

  const PolytopePtr& polytope() const { return body_; }
  const std::vector<AffinePiece>& pieces() const { return pieces_; }

  Rational operator()(std::span<const Rational> x) const;
  double operator()(std::span<const double> x) const;

  // f + <., xi>
  PLFiltration twisted(const RVec& xi) const;

  // Regions of the induced subdivision where piece i is active (nullopt when
  // that piece is nowhere strictly active).
  const std::vector<std::optional<Polytope>>& regions() const { return regions_; }
  // Vertices of the subdivision (sorted, unique).
  const std::vector<RVec>& subdivision_vertices() const { return vertices_; }

  Rational max_value() const;  // Lambda
  Rational min_value() const;  // lambda_min (= e_-)

 private:
  PLFiltration() = default;
  void finish();

  PolytopePtr body_;
  std::vector<AffinePiece> pieces_;
  std::vector<std::optional<Polytope>> regions_;
  std::vector<RVec> vertices_;
};

struct NaReport {
  double energy = 0.0;  // E^NA_g
  double lambda_max = 0.0;
  double j = 0.0;       // J^NA_g
  double lambda_min = 0.0;
  std::optional<Rational> energy_exact, lambda_max_exact, j_exact, lambda_min_exact;
  PiecewiseMeasure dh;  // DH(F), a probability measure
};

NaReport na_eval(const Polytope& body, const Weight& g, const PLFiltration& f);

// E^NA_g alone.
IntegralResult na_energy(const Polytope& body, const Weight& g, const PLFiltration& f);

// inf over xi in span(basis) of J^NA_g(f + <., xi>).
struct ReducedJ {
  double value = 0.0;
  Vec xi;
};

ReducedJ reduced_jna(const Polytope& body, const Weight& g, const PLFiltration& f, const std::vector<RVec>& basis);

// Shadow of f at the toric valuation u: max_P (f - <x, u>) + min_P <x, u>.
double filtration_shadow(const PLFiltration& f, const Vec& u);

struct DeltaOptions {
  bool reduced = false;
  std::vector<RVec> subspace;  // reduced case; empty means the full torus
  std::uint64_t seed = 1;
  int sphere_points = 400;
  int refine_starts = 8;
};

struct DeltaEstimate {
  double delta = 0.0;
  Vec witness_u;
  std::optional<Vec> witness_xi;
  int evaluations = 0;
};

DeltaEstimate delta_estimate(const Polytope& body, const Weight& g, const DeltaOptions& opt = {});

}  // namespace solitonlab
