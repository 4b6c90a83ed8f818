#pragma once

#include <vector>

#include "solitonlab/integrand.hpp"
#include "solitonlab/measure.hpp"
#include "solitonlab/polytope.hpp"
#include "solitonlab/weight.hpp"

namespace solitonlab {

// All integrals here are against DH := n! * Lebesgue.

// n! * int_body x^monomial g dx; body must be the weight's polytope.
IntegralResult integrate(const Polytope& body, const Weight& g, const std::vector<unsigned>& monomial);
IntegralResult integrate_poly(const Polytope& body, const Weight& g, const Polynomial<Rational>& p);
double integrate_poly(const Polytope& body, const Weight& g, const Polynomial<double>& p);

// Same integrand over a region of the weight's polytope (no attachment or
// positivity checks; the caller guarantees region is inside).
IntegralResult integrate_region(const Polytope& region, const Integrand& g, const Polynomial<Rational>& p);
double integrate_region(const Polytope& region, const Integrand& g, const Polynomial<double>& p);

struct Moments {
  IntegralResult mass;                 // V_g
  Vec barycenter;
  std::optional<RVec> barycenter_exact;
  std::vector<Vec> covariance;
  std::optional<RMat> covariance_exact;
};

Moments moments(const Polytope& body, const Weight& g);

// Density of the pushforward of g DH under x -> <x, direction>.
PiecewiseMeasure pushforward_1d(const Polytope& body, const Weight& g, const LatticeVector& direction);

// P ∩ {<x, a> + b >= 0 for each (a, b)}; nullopt when lower dimensional or empty.
std::optional<Polytope> clip(const Polytope& body, const std::vector<Facet>& extra);

Rational dh_factorial(std::size_t n);

}  // namespace solitonlab
