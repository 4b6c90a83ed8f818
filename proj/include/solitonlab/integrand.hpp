#pragma once

#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "solitonlab/polynomial.hpp"
#include "solitonlab/polytope.hpp"
#include "solitonlab/rational.hpp"

namespace solitonlab {

// Non-polynomial part of an integrand, as a function of x.
//   One:    1
//   Exp:    exp(<lin, x> + offset)
//   InvPow: (<lin, x> + offset)^(-power), argument must stay positive
//   Point:  arbitrary pointwise function (quadrature only)
struct Profile {
  enum class Kind { One, Exp, InvPow, Point };
  Kind kind = Kind::One;
  Vec lin;
  double offset = 0.0;
  int power = 0;
  std::function<double(std::span<const double>)> point;

  static Profile one() { return {}; }
  static Profile exp(Vec lin, double offset) { return {Kind::Exp, std::move(lin), offset, 0, {}}; }
  static Profile inv_pow(Vec lin, double offset, int power) {
    return {Kind::InvPow, std::move(lin), offset, power, {}};
  }
  static Profile pointwise(std::function<double(std::span<const double>)> f) {
    return {Kind::Point, {}, 0.0, 0, std::move(f)};
  }

  double operator()(std::span<const double> x) const;
};

// Polynomial factor times profile; exact is set when the whole integrand is a
// rational polynomial.
struct Integrand {
  Polynomial<double> factor;
  Profile profile;
  std::optional<Polynomial<Rational>> exact;
};

// Lebesgue integrals (no n! factor).
Rational integrate_exact(const Polytope& body, const Polynomial<Rational>& p);
double integrate_lebesgue(const Polytope& body, const Polynomial<double>& factor, const Profile& profile);
double integrate_quadrature(const Polytope& body, const Polynomial<double>& factor, const Profile& profile);

// Same over an explicit list of simplices (used to compare triangulations).
Rational integrate_exact(const Polytope& body, const std::vector<Simplex>& pieces, const Polynomial<Rational>& p);
double integrate_lebesgue(const Polytope& body, const std::vector<Simplex>& pieces,
                          const Polynomial<double>& factor, const Profile& profile);

// Divided difference of exp over the given nodes (repeats allowed).
double exp_divided_difference(std::span<const double> nodes);

Polynomial<double> to_double(const Polynomial<Rational>& p);

// Worker count from SOLITONLAB_THREADS (default: hardware concurrency).
unsigned worker_count();
// Runs fn(i) for i in [0, count) on up to worker_count() threads.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& fn);

}  // namespace solitonlab
