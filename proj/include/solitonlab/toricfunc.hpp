#pragma once

#include <functional>

#include "solitonlab/polytope.hpp"
#include "solitonlab/weight.hpp"

namespace solitonlab {

// One-dimensional toric potentials on P = [a, b]. u lives on a uniform grid
// over [-half_width, half_width]; values, slopes and curvatures are stored and
// interpolated by quintic Hermite pieces.
struct GridSpec {
  double half_width = 30.0;
  std::size_t points = 4097;  // odd, so x = 0 is a node
};

class ToricPotential {
 public:
  using Fn = std::function<double(double)>;

  static ToricPotential from_function(const PolytopePtr& interval, const Fn& u, const Fn& du, const Fn& d2u,
                                      GridSpec grid = {});
  // Samples only: slopes are repaired to be nondecreasing and inside [a, b]
  // (isotonic regression), derivatives by finite differences.
  static ToricPotential from_samples(const PolytopePtr& interval, const Vec& values, GridSpec grid = {});
  static ToricPotential from_data(const PolytopePtr& interval, Vec u, Vec du, Vec d2u, GridSpec grid = {});
  // u = c x + 2 r log cosh(x/2) + log 2 with c, r the center and radius of P
  // (the Fubini-Study potential on [-1, 1]).
  static ToricPotential canonical(const PolytopePtr& interval, GridSpec grid = {});

  const PolytopePtr& polytope() const { return body_; }
  double lower() const { return a_; }
  double upper() const { return b_; }
  const GridSpec& grid() const { return grid_; }
  const Vec& x() const { return x_; }
  const Vec& values() const { return u_; }
  const Vec& slopes() const { return du_; }
  const Vec& curvatures() const { return d2u_; }

  double value(double x) const;
  double slope(double x) const;
  double curvature(double x) const;
  // Point where the slope equals y, clamped to the box.
  double conjugate_point(double y) const;
  // sup_x (x y - u(x)) over the box
  double dual(double y) const;

  ToricPotential shifted(double c) const;
  // (1 - t) u + t other, both on the same grid
  ToricPotential blend(const ToricPotential& other, double t) const;

 private:
  ToricPotential() = default;
  void normalize();

  PolytopePtr body_;
  double a_ = 0.0, b_ = 0.0;
  GridSpec grid_;
  Vec x_, u_, du_, d2u_;
};

// Symplectic potential on increasing nodes in (a, b) with values, slopes and
// curvatures (quintic Hermite in between).
class SymplecticPotential {
 public:
  using Fn = std::function<double(double)>;

  static SymplecticPotential from_function(const PolytopePtr& interval, const Fn& phi, const Fn& dphi, const Fn& d2phi,
                                           const Vec& nodes);
  static SymplecticPotential from_data(const PolytopePtr& interval, Vec nodes, Vec phi, Vec dphi, Vec d2phi);

  const PolytopePtr& polytope() const { return body_; }
  const Vec& nodes() const { return y_; }
  const Vec& values() const { return phi_; }
  const Vec& slopes() const { return dphi_; }
  const Vec& curvatures() const { return d2phi_; }

  double value(double y) const;
  double slope(double y) const;
  // Node range point where the slope equals x, clamped.
  double conjugate_point(double x) const;

  SymplecticPotential shifted(double c) const;

 private:
  SymplecticPotential() = default;

  PolytopePtr body_;
  Vec y_, phi_, dphi_, d2phi_;
};

// Slopes of the canonical potential at the grid nodes.
Vec canonical_nodes(const PolytopePtr& interval, GridSpec grid = {});

SymplecticPotential legendre(const ToricPotential& u, const Vec& nodes);
SymplecticPotential legendre(const ToricPotential& u);
ToricPotential legendre(const SymplecticPotential& phi, GridSpec grid = {});

// Potential whose symplectic potential is (1 - t) phi0 + t phi1.
ToricPotential geodesic(const SymplecticPotential& phi0, const SymplecticPotential& phi1, double t, GridSpec grid = {});

struct Functionals {
  double volume = 0.0;  // V_g
  double energy = 0.0;  // E_g
  double lambda = 0.0;  // Lambda_g
  double i = 0.0;       // I_g
  double j = 0.0;       // J_g
  double entropy = 0.0; // H_g
  double mabuchi = 0.0; // M_g
  double ding_l = 0.0;  // L
  double ding = 0.0;    // D_g
};

// Functionals of u relative to the reference u0 (same grid). The reference
// volume form is e^{-u0} dx.
Functionals functionals(const ToricPotential& u, const Weight& g, const ToricPotential& reference);

struct GSoliton1D {
  ToricPotential potential;
  double obstruction = 0.0;  // int_a^b s g(s) ds
  double residual = 0.0;     // max |g(u') u'' - e^{-u}| on interior nodes
  double mass = 0.0;         // int e^{-u} dx
};

// g(u') u'' = e^{-u} on the line, slopes filling [a, b], gauge u'(0) = 0.
GSoliton1D solve_gsoliton_1d(const Weight& g, GridSpec grid = {});

}  // namespace solitonlab
