#pragma once

#include <cstddef>
#include <map>
#include <span>
#include <vector>

namespace solitonlab {

// Sparse multivariate polynomial with coefficients in T (Rational or double).
// Terms are kept in a std::map so iteration order, and hence every floating
// point reduction over terms, is deterministic.
template <class T>
class Polynomial {
 public:
  using Exponent = std::vector<unsigned>;

  explicit Polynomial(std::size_t nvars = 0) : nvars_(nvars) {}

  static Polynomial constant(std::size_t nvars, const T& c) {
    Polynomial p(nvars);
    p.add_term(Exponent(nvars, 0), c);
    return p;
  }

  static Polynomial variable(std::size_t nvars, std::size_t i) {
    Polynomial p(nvars);
    Exponent e(nvars, 0);
    e[i] = 1;
    p.add_term(e, T(1));
    return p;
  }

  // c0 + sum_i a_i x_i
  static Polynomial affine(std::span<const T> a, const T& c0) {
    Polynomial p = constant(a.size(), c0);
    for (std::size_t i = 0; i < a.size(); ++i) {
      Exponent e(a.size(), 0);
      e[i] = 1;
      p.add_term(e, a[i]);
    }
    return p;
  }

  static Polynomial monomial(const Exponent& e, const T& c = T(1)) {
    Polynomial p(e.size());
    p.add_term(e, c);
    return p;
  }

  std::size_t nvars() const { return nvars_; }
  const std::map<Exponent, T>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }

  unsigned degree() const {
    unsigned d = 0;
    for (const auto& [e, c] : terms_) {
      unsigned s = 0;
      for (auto k : e) s += k;
      d = s > d ? s : d;
    }
    return d;
  }

  void add_term(const Exponent& e, const T& c) {
    if (c == T(0)) return;
    auto [it, inserted] = terms_.emplace(e, c);
    if (!inserted) {
      it->second += c;
      if (it->second == T(0)) terms_.erase(it);
    }
  }

  Polynomial& operator+=(const Polynomial& o) {
    for (const auto& [e, c] : o.terms_) add_term(e, c);
    return *this;
  }

  friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }

  friend Polynomial operator*(const Polynomial& a, const Polynomial& b) {
    Polynomial r(a.nvars_);
    Exponent e(a.nvars_);
    for (const auto& [ea, ca] : a.terms_)
      for (const auto& [eb, cb] : b.terms_) {
        for (std::size_t i = 0; i < a.nvars_; ++i) e[i] = ea[i] + eb[i];
        r.add_term(e, ca * cb);
      }
    return r;
  }

  friend Polynomial operator*(const T& s, const Polynomial& a) {
    Polynomial r(a.nvars_);
    for (const auto& [e, c] : a.terms_) r.add_term(e, s * c);
    return r;
  }

  Polynomial pow(unsigned k) const {
    Polynomial r = constant(nvars_, T(1));
    for (unsigned i = 0; i < k; ++i) r = r * *this;
    return r;
  }

  T evaluate(std::span<const T> x) const {
    T s(0);
    for (const auto& [e, c] : terms_) {
      T t = c;
      for (std::size_t i = 0; i < nvars_; ++i)
        for (unsigned k = 0; k < e[i]; ++k) t *= x[i];
      s += t;
    }
    return s;
  }

  // Substitutes x_i := forms[i] (polynomials in a common new variable set).
  Polynomial compose(const std::vector<Polynomial>& forms) const {
    const std::size_t m = forms.empty() ? 0 : forms[0].nvars();
    Polynomial r(m);
    // Cache powers of each substituted form.
    std::vector<std::vector<Polynomial>> powers(nvars_);
    for (const auto& [e, c] : terms_) {
      Polynomial t = constant(m, c);
      for (std::size_t i = 0; i < nvars_; ++i) {
        if (e[i] == 0) continue;
        auto& cache = powers[i];
        if (cache.empty()) cache.push_back(constant(m, T(1)));
        while (cache.size() <= e[i]) cache.push_back(cache.back() * forms[i]);
        t = t * cache[e[i]];
      }
      r += t;
    }
    return r;
  }

  template <class U, class F>
  Polynomial<U> convert(F&& f) const {
    Polynomial<U> r(nvars_);
    for (const auto& [e, c] : terms_) r.add_term(e, f(c));
    return r;
  }

 private:
  std::size_t nvars_;
  std::map<Exponent, T> terms_;
};

}  // namespace solitonlab
