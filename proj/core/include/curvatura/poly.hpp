#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <vector>

#include "curvatura/rational.hpp"
#include "curvatura/types.hpp"

namespace curvatura {

inline bool coeff_is_zero(double c) { return c == 0.0; }
inline bool coeff_is_zero(const Rat& c) { return c.is_zero(); }

template <class T> T coeff_cast(double c) { return static_cast<T>(c); }
template <class T> T coeff_cast(const Rat& c) { return static_cast<T>(c.to_long_double()); }

// Sparse multivariate polynomial in N variables with coefficients of type C
// (double for the runtime fields, Rat for the exact reduction pipeline).
// Terms are kept sorted by exponent tuple so equality is structural.
template <class C, int N>
class MPoly {
 public:
  using Exps = std::array<std::uint8_t, N>;
  struct Term {
    Exps e;
    C c;
  };

  MPoly() = default;

  static MPoly constant(C c) {
    MPoly p;
    if (!coeff_is_zero(c)) p.terms_.push_back({Exps{}, c});
    return p;
  }

  static MPoly var(int i, int power = 1, C c = C(1)) {
    MPoly p;
    Exps e{};
    e[i] = static_cast<std::uint8_t>(power);
    if (!coeff_is_zero(c)) p.terms_.push_back({e, c});
    return p;
  }

  const std::vector<Term>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }

  int degree() const {
    int d = 0;
    for (const Term& t : terms_) {
      int s = 0;
      for (int i = 0; i < N; ++i) s += t.e[i];
      d = std::max(d, s);
    }
    return d;
  }

  C coeff(const Exps& e) const {
    auto it = std::lower_bound(terms_.begin(), terms_.end(), e,
                               [](const Term& t, const Exps& k) { return t.e < k; });
    if (it != terms_.end() && it->e == e) return it->c;
    return C(0);
  }

  friend MPoly operator+(const MPoly& a, const MPoly& b) {
    std::vector<Term> out;
    out.reserve(a.terms_.size() + b.terms_.size());
    auto ia = a.terms_.begin(), ib = b.terms_.begin();
    while (ia != a.terms_.end() || ib != b.terms_.end()) {
      if (ib == b.terms_.end() || (ia != a.terms_.end() && ia->e < ib->e)) {
        out.push_back(*ia++);
      } else if (ia == a.terms_.end() || ib->e < ia->e) {
        out.push_back(*ib++);
      } else {
        C c = ia->c + ib->c;
        if (!coeff_is_zero(c)) out.push_back({ia->e, c});
        ++ia, ++ib;
      }
    }
    MPoly r;
    r.terms_ = std::move(out);
    return r;
  }

  friend MPoly operator-(const MPoly& a) { return a * C(-1); }
  friend MPoly operator-(const MPoly& a, const MPoly& b) { return a + (-b); }

  friend MPoly operator*(const MPoly& a, C s) {
    MPoly r;
    if (coeff_is_zero(s)) return r;
    r.terms_ = a.terms_;
    for (Term& t : r.terms_) t.c = t.c * s;
    return r;
  }
  friend MPoly operator*(C s, const MPoly& a) { return a * s; }

  friend MPoly operator*(const MPoly& a, const MPoly& b) {
    std::vector<Term> raw;
    raw.reserve(a.terms_.size() * b.terms_.size());
    for (const Term& ta : a.terms_)
      for (const Term& tb : b.terms_) {
        Term t;
        for (int i = 0; i < N; ++i) t.e[i] = static_cast<std::uint8_t>(ta.e[i] + tb.e[i]);
        t.c = ta.c * tb.c;
        raw.push_back(t);
      }
    return from_raw(std::move(raw));
  }

  friend bool operator==(const MPoly& a, const MPoly& b) {
    if (a.terms_.size() != b.terms_.size()) return false;
    for (std::size_t i = 0; i < a.terms_.size(); ++i)
      if (a.terms_[i].e != b.terms_[i].e || !(a.terms_[i].c == b.terms_[i].c)) return false;
    return true;
  }
  friend bool operator!=(const MPoly& a, const MPoly& b) { return !(a == b); }

  static MPoly pow(const MPoly& a, int k) {
    MPoly r = constant(C(1));
    for (int i = 0; i < k; ++i) r = r * a;
    return r;
  }

  MPoly diff(int v) const {
    std::vector<Term> out;
    for (const Term& t : terms_) {
      if (t.e[v] == 0) continue;
      Term d = t;
      d.c = t.c * C(static_cast<int>(t.e[v]));
      d.e[v] = static_cast<std::uint8_t>(t.e[v] - 1);
      out.push_back(d);
    }
    return from_raw(std::move(out));
  }

  template <class T>
  T eval(const std::array<T, N>& x) const {
    T acc = T(0);
    for (const Term& t : terms_) {
      T m = coeff_cast<T>(t.c);
      for (int i = 0; i < N; ++i)
        for (int k = 0; k < t.e[i]; ++k) m *= x[i];
      acc += m;
    }
    return acc;
  }

  MPoly subst_const(int v, C value) const {
    std::vector<Term> out;
    for (const Term& t : terms_) {
      Term s = t;
      for (int k = 0; k < t.e[v]; ++k) s.c = s.c * value;
      s.e[v] = 0;
      out.push_back(s);
    }
    return from_raw(std::move(out));
  }

  // Substitute var^2 -> repl. Every term must have an even exponent in var.
  MPoly subst_square(int v, const MPoly& repl) const {
    MPoly acc;
    for (const Term& t : terms_) {
      if (t.e[v] % 2 != 0)
        throw invalid_parameter("subst_square: odd exponent");
      Term base = t;
      base.e[v] = 0;
      MPoly m;
      m.terms_.push_back(base);
      acc = acc + m * pow(repl, t.e[v] / 2);
    }
    return acc;
  }

  // Exact division by s * prod var_i^exps[i]; throws if any term is not divisible.
  MPoly div_exact_monomial(const std::array<int, N>& exps, C s) const {
    std::vector<Term> out;
    for (const Term& t : terms_) {
      Term d = t;
      for (int i = 0; i < N; ++i) {
        if (t.e[i] < exps[i]) throw invalid_parameter("div_exact_monomial: not divisible");
        d.e[i] = static_cast<std::uint8_t>(t.e[i] - exps[i]);
      }
      d.c = t.c / s;
      out.push_back(d);
    }
    return from_raw(std::move(out));
  }

 private:
  static MPoly from_raw(std::vector<Term>&& raw) {
    std::sort(raw.begin(), raw.end(), [](const Term& a, const Term& b) { return a.e < b.e; });
    std::vector<Term> out;
    out.reserve(raw.size());
    for (const Term& t : raw) {
      if (!out.empty() && out.back().e == t.e) {
        out.back().c = out.back().c + t.c;
        if (coeff_is_zero(out.back().c)) out.pop_back();
      } else if (!coeff_is_zero(t.c)) {
        out.push_back(t);
      }
    }
    MPoly r;
    r.terms_ = std::move(out);
    return r;
  }

  std::vector<Term> terms_;
};

// Division for coefficient types without operator/ would fail to compile only
// if instantiated; double needs it for div_exact_monomial as well.
using Poly4 = MPoly<double, 4>;   // runtime fields on (x, y, u, v)
using RPoly5 = MPoly<Rat, 5>;     // exact pipeline on (x, y, u, v, s), s = r^2
using RPoly2 = MPoly<Rat, 2>;     // exact reduced system on (w, z)

}  // namespace curvatura
