#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "solitonlab/rational.hpp"

namespace solitonlab {

// Value of an integral, with the exact rational when the integrand allowed it.
struct IntegralResult {
  double value = 0.0;
  std::optional<Rational> exact;
};

// Measure on the line: polynomial density on consecutive intervals plus atoms.
class PiecewiseMeasure {
 public:
  struct Piece {
    double lo = 0.0, hi = 0.0;
    Vec cheb;                        // density, Chebyshev coefficients on [lo, hi]
    std::optional<RVec> exact;       // density coefficients in (s - lo), when exact
  };
  struct Atom {
    double at = 0.0, mass = 0.0;
    std::optional<Rational> exact_at, exact_mass;
  };

  // upper_mass(t) = mass{h >= t}. `degree` is a bound for the degree of
  // upper_mass on each open interval between breakpoints when it is a
  // polynomial with rational values (exact mode); 0 selects Chebyshev fitting.
  static PiecewiseMeasure from_upper_mass(const RVec& breakpoints, unsigned degree,
                                          const std::function<IntegralResult(const Rational&)>& upper_mass);

  const std::vector<Piece>& pieces() const { return pieces_; }
  const std::vector<Atom>& atoms() const { return atoms_; }
  const RVec& breakpoints() const { return breakpoints_; }
  bool is_exact() const { return exact_; }

  double density(double s) const;
  double moment(unsigned k) const;
  std::optional<Rational> moment_exact(unsigned k) const;
  double total_mass() const { return moment(0); }
  // Smallest interval carrying all mass (pieces with nonzero density, atoms).
  std::pair<double, double> support(double tol = 1e-14) const;
  PiecewiseMeasure scaled(const Rational& factor) const;

 private:
  RVec breakpoints_;
  std::vector<Piece> pieces_;
  std::vector<Atom> atoms_;
  bool exact_ = false;
};

// Chebyshev series on [-1, 1].
double chebyshev_eval(const Vec& c, double t);

}  // namespace solitonlab
