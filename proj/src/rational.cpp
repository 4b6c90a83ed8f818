#include "solitonlab/rational.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "solitonlab/errors.hpp"

namespace solitonlab {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::Empty: return "Empty";
    case ErrorCode::Unbounded: return "Unbounded";
    case ErrorCode::NotFullDim: return "NotFullDim";
    case ErrorCode::UnboundedSection: return "UnboundedSection";
    case ErrorCode::WeightNonpositive: return "WeightNonpositive";
    case ErrorCode::WeightPolytopeMismatch: return "WeightPolytopeMismatch";
    case ErrorCode::NewtonDiverged: return "NewtonDiverged";
    case ErrorCode::Infeasible: return "Infeasible";
    case ErrorCode::WeightDomain: return "WeightDomain";
    case ErrorCode::NonGorenstein: return "NonGorenstein";
    case ErrorCode::NotPointed: return "NotPointed";
    case ErrorCode::OutsideReebCone: return "OutsideReebCone";
    case ErrorCode::EmptySlice: return "EmptySlice";
    case ErrorCode::IrregularQuotient: return "IrregularQuotient";
    case ErrorCode::ZeroVector: return "ZeroVector";
    case ErrorCode::NotConcave: return "NotConcave";
    case ErrorCode::NotConvex: return "NotConvex";
    case ErrorCode::QuadratureDiverged: return "QuadratureDiverged";
    case ErrorCode::ObstructedFutaki: return "ObstructedFutaki";
    case ErrorCode::LatticeMismatch: return "LatticeMismatch";
    case ErrorCode::InvalidInput: return "InvalidInput";
  }
  return "Unknown";
}

bool is_infeasibility(ErrorCode code) {
  return code == ErrorCode::ObstructedFutaki || code == ErrorCode::Infeasible ||
         code == ErrorCode::EmptySlice;
}

Rational parse_rational(const std::string& text) {
  std::string s;
  for (char c : text)
    if (!std::isspace(static_cast<unsigned char>(c))) s.push_back(c);
  if (s.empty()) throw Error(ErrorCode::InvalidInput, "empty rational literal");
  try {
    auto dot_pos = s.find('.');
    auto e_pos = s.find_first_of("eE");
    if (dot_pos == std::string::npos && e_pos == std::string::npos) {
      Rational q(s, 10);
      q.canonicalize();
      return q;
    }
    // Decimal literal: mantissa digits over a power of ten, exactly.
    std::string mantissa = s.substr(0, e_pos);
    long exponent = e_pos == std::string::npos ? 0 : std::stol(s.substr(e_pos + 1));
    bool negative = !mantissa.empty() && mantissa[0] == '-';
    if (!mantissa.empty() && (mantissa[0] == '-' || mantissa[0] == '+')) mantissa.erase(0, 1);
    auto dp = mantissa.find('.');
    std::string digits = mantissa;
    if (dp != std::string::npos) {
      exponent -= static_cast<long>(mantissa.size() - dp - 1);
      digits.erase(dp, 1);
    }
    if (digits.empty() || digits.find_first_not_of("0123456789") != std::string::npos)
      throw Error(ErrorCode::InvalidInput, "bad rational literal '" + text + "'");
    mpz_class num(digits, 10);
    mpz_class pow10;
    mpz_ui_pow_ui(pow10.get_mpz_t(), 10, static_cast<unsigned long>(std::labs(exponent)));
    Rational q = exponent >= 0 ? Rational(num * pow10) : Rational(num, pow10);
    q.canonicalize();
    return negative ? Rational(-q) : q;
  } catch (const std::invalid_argument&) {
    throw Error(ErrorCode::InvalidInput, "bad rational literal '" + text + "'");
  }
}

Rational rational_from_double(double value) {
  if (!std::isfinite(value)) throw Error(ErrorCode::InvalidInput, "non-finite number");
  Rational q(value);
  q.canonicalize();
  return q;
}

std::string to_string(const Rational& q) { return q.get_str(); }

Vec to_double(std::span<const Rational> v) {
  Vec out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) out[i] = v[i].get_d();
  return out;
}

RVec to_rational(std::span<const double> v) {
  RVec out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) out[i] = rational_from_double(v[i]);
  return out;
}

Rational dot(std::span<const Rational> a, std::span<const Rational> b) {
  Rational s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

RVec operator+(const RVec& a, const RVec& b) {
  RVec c(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) c[i] = a[i] + b[i];
  return c;
}

RVec operator-(const RVec& a, const RVec& b) {
  RVec c(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) c[i] = a[i] - b[i];
  return c;
}

RVec operator*(const Rational& s, const RVec& a) {
  RVec c(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) c[i] = s * a[i];
  return c;
}

namespace {

// In-place reduced row echelon form, pivoting only in the first `cols` columns.
std::vector<std::size_t> rref(RMat& m, std::size_t cols) {
  std::vector<std::size_t> pivots;
  std::size_t row = 0;
  for (std::size_t col = 0; col < cols && row < m.size(); ++col) {
    std::size_t sel = row;
    while (sel < m.size() && sgn(m[sel][col]) == 0) ++sel;
    if (sel == m.size()) continue;
    std::swap(m[row], m[sel]);
    const std::size_t width = m[row].size();
    Rational inv = 1 / m[row][col];
    for (std::size_t j = col; j < width; ++j) m[row][j] *= inv;
    for (std::size_t r = 0; r < m.size(); ++r) {
      if (r == row || sgn(m[r][col]) == 0) continue;
      Rational f = m[r][col];
      for (std::size_t j = col; j < width; ++j) m[r][j] -= f * m[row][j];
    }
    pivots.push_back(col);
    ++row;
  }
  return pivots;
}

}  // namespace

std::size_t rank(RMat rows) {
  if (rows.empty()) return 0;
  return rref(rows, rows[0].size()).size();
}

Rational determinant(RMat a) {
  const std::size_t n = a.size();
  Rational det = 1;
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t sel = col;
    while (sel < n && sgn(a[sel][col]) == 0) ++sel;
    if (sel == n) return 0;
    if (sel != col) {
      std::swap(a[sel], a[col]);
      det = -det;
    }
    det *= a[col][col];
    for (std::size_t r = col + 1; r < n; ++r) {
      if (sgn(a[r][col]) == 0) continue;
      Rational f = a[r][col] / a[col][col];
      for (std::size_t j = col; j < n; ++j) a[r][j] -= f * a[col][j];
    }
  }
  return det;
}

RVec solve(RMat a, RVec b) {
  const std::size_t n = a.size();
  for (std::size_t i = 0; i < n; ++i) a[i].push_back(b[i]);
  auto piv = rref(a, n);
  if (piv.size() != n) throw std::domain_error("singular linear system");
  RVec x(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = a[i][n];
  return x;
}

RMat nullspace(const RMat& a, std::size_t cols) {
  RMat m = a;
  auto piv = rref(m, cols);
  std::vector<bool> is_pivot(cols, false);
  for (auto p : piv) is_pivot[p] = true;
  RMat basis;
  for (std::size_t free = 0; free < cols; ++free) {
    if (is_pivot[free]) continue;
    RVec v(cols, 0);
    v[free] = 1;
    for (std::size_t r = 0; r < piv.size(); ++r) v[piv[r]] = -m[r][free];
    basis.push_back(std::move(v));
  }
  return basis;
}

RVec primitive(const RVec& v) {
  mpz_class l = 1;
  for (const auto& q : v) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), q.get_den_mpz_t());
  mpz_class g = 0;
  std::vector<mpz_class> ints(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    Rational t = v[i] * l;
    ints[i] = t.get_num();
    mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), ints[i].get_mpz_t());
  }
  if (g == 0) throw Error(ErrorCode::ZeroVector, "primitive() of zero vector");
  RVec out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) out[i] = Rational(ints[i] / g);
  return out;
}

RMat integer_kernel_basis(const RVec& p_in) {
  RVec p = primitive(p_in);
  const std::size_t d = p.size();
  std::vector<mpz_class> w(d);
  for (std::size_t i = 0; i < d; ++i) w[i] = p[i].get_num();
  std::vector<std::vector<mpz_class>> u(d, std::vector<mpz_class>(d, 0));
  for (std::size_t i = 0; i < d; ++i) u[i][i] = 1;
  // Column operations on the row vector w, mirrored on U, until one entry remains.
  while (true) {
    std::size_t piv = d;
    for (std::size_t i = 0; i < d; ++i)
      if (w[i] != 0 && (piv == d || abs(w[i]) < abs(w[piv]))) piv = i;
    bool done = true;
    for (std::size_t j = 0; j < d; ++j) {
      if (j == piv || w[j] == 0) continue;
      done = false;
      mpz_class q;
      mpz_fdiv_q(q.get_mpz_t(), w[j].get_mpz_t(), w[piv].get_mpz_t());
      w[j] -= q * w[piv];
      for (std::size_t r = 0; r < d; ++r) u[r][j] -= q * u[r][piv];
    }
    if (done) break;
  }
  RMat basis;
  for (std::size_t j = 0; j < d; ++j) {
    if (w[j] != 0) continue;
    RVec col(d);
    for (std::size_t r = 0; r < d; ++r) col[r] = Rational(u[r][j]);
    basis.push_back(std::move(col));
  }
  return basis;
}

bool is_zero(std::span<const Rational> v) {
  return std::all_of(v.begin(), v.end(), [](const Rational& q) { return sgn(q) == 0; });
}

}  // namespace solitonlab
