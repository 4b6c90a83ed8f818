#pragma once

#include <optional>
#include <string>

#include "solitonlab/bexpr.hpp"
#include "solitonlab/dh.hpp"
#include "solitonlab/weight.hpp"

namespace solitonlab {

enum class SolitonFamily { KR, Mabuchi, Cone, Composite };

std::string_view to_string(SolitonFamily f);
SolitonFamily parse_family(const std::string& name);

// futaki(P, g, zeta) = -n! int <x, zeta> g dx (unnormalized);
// futaki_normalized divides by V_g, which is the sign/normalization used by
// the twist identities.
IntegralResult futaki(const Polytope& body, const Weight& g, const RVec& zeta);
double futaki(const Polytope& body, const Weight& g, const Vec& zeta);
double futaki_normalized(const Polytope& body, const Weight& g, const Vec& zeta);

struct SolitonOptions {
  double tol = 1e-12;         // gradient tolerance relative to V_g
  int max_iter = 100;
  unsigned cone_n = 0;        // 0: polytope dimension
  std::optional<BExpr> b;     // composite family
};

// Potential whose critical point is the soliton vector:
//   kr        V(xi) = int e^<x, xi>                         (convex)
//   mabuchi   V(xi) = V <xbar, xi> + V/2 xi^T C xi          (convex)
//   cone      V(xi) = int a(<x, xi>), a(s) = -(n+1+s)^(-n-1)/(n+1)  (concave)
// The gradient is int x g_xi in every case.
struct PotentialValue {
  double value = 0.0;
  Vec gradient;
  std::vector<Vec> hessian;
};

PotentialValue soliton_potential(const PolytopePtr& body, SolitonFamily family, const Vec& xi,
                                 const SolitonOptions& opt = {});

// The weight g_xi of the family.
Weight family_weight(const PolytopePtr& body, SolitonFamily family, const Vec& xi, const SolitonOptions& opt = {});

struct SolitonSolution {
  SolitonFamily family = SolitonFamily::KR;
  Vec xi;
  std::optional<RVec> xi_exact;
  double residual = 0.0;   // max_k |int x_k g dDH|
  int iterations = 0;
  bool feasible = true;
  double potential = 0.0;
  double mass = 0.0;       // V_g at the solution
  bool converged = false;
};

SolitonSolution solve_weight_vector(const PolytopePtr& body, SolitonFamily family, const SolitonOptions& opt = {});

}  // namespace solitonlab
