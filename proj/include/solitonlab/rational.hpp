#pragma once

#include <gmpxx.h>

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace solitonlab {

using Rational = mpq_class;
using RVec = std::vector<Rational>;
using RMat = std::vector<RVec>;  // row-major
using Vec = std::vector<double>;

// a / b in canonical form (mpq_class(a, b) is not canonicalized).
inline Rational frac(long a, long b) {
  Rational q(a, b);
  q.canonicalize();
  return q;
}

Rational parse_rational(const std::string& text);  // "3", "-3/4", "0.125"
Rational rational_from_double(double value);        // exact binary value
std::string to_string(const Rational& q);

Vec to_double(std::span<const Rational> v);
RVec to_rational(std::span<const double> v);

Rational dot(std::span<const Rational> a, std::span<const Rational> b);
double dot(std::span<const double> a, std::span<const double> b);

RVec operator+(const RVec& a, const RVec& b);
RVec operator-(const RVec& a, const RVec& b);
RVec operator*(const Rational& s, const RVec& a);

// Exact Gaussian elimination helpers.
std::size_t rank(RMat rows);
Rational determinant(RMat square);
// Solves A x = b for square nonsingular A; throws std::domain_error otherwise.
RVec solve(RMat a, RVec b);
// Basis of {x : A x = 0} (rational, reduced echelon form).
RMat nullspace(const RMat& a, std::size_t cols);

// Scales a nonzero rational vector to the primitive integer vector on its ray.
RVec primitive(const RVec& v);

// Z-basis of {m in Z^d : <m, p> = 0} for an integer vector p != 0.
RMat integer_kernel_basis(const RVec& p);

bool is_zero(std::span<const Rational> v);

}  // namespace solitonlab
