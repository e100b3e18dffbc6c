#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <string>

#include "rumin/scalar.hpp"

namespace rumin {

// Largest n for which polynomial coefficients are supported.
constexpr int kMaxPolyN = 4;
constexpr int kNumVars = 2 * kMaxPolyN + 1;

// Exponents of z^1..z^N, zbar^1..zbar^N, t.
using Monomial = std::array<std::uint8_t, kNumVars>;

inline int var_z(int alpha) { return alpha - 1; }
inline int var_zbar(int alpha) { return kMaxPolyN + alpha - 1; }
inline constexpr int var_t() { return 2 * kMaxPolyN; }

class Poly {
 public:
  Poly() = default;
  Poly(const Scalar& c);  // NOLINT(implicit)
  Poly(long c) : Poly(Scalar(c)) {}  // NOLINT(implicit)

  static Poly variable(int var);
  static Poly z(int alpha) { return variable(var_z(alpha)); }
  static Poly zbar(int alpha) { return variable(var_zbar(alpha)); }
  static Poly t() { return variable(var_t()); }
  static Poly monomial(const Monomial& m, const Scalar& c);

  const std::map<Monomial, Scalar>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  bool is_constant() const;
  Scalar constant() const;  // constant term
  int total_degree() const;

  Poly& operator+=(const Poly& o);
  Poly& operator-=(const Poly& o);
  Poly& operator*=(const Scalar& s);
  friend Poly operator+(Poly a, const Poly& b) { return a += b; }
  friend Poly operator-(Poly a, const Poly& b) { return a -= b; }
  friend Poly operator*(const Poly& a, const Poly& b);
  friend Poly operator*(Poly a, const Scalar& s) { return a *= s; }
  friend Poly operator*(const Scalar& s, Poly a) { return a *= s; }
  Poly operator-() const;

  friend bool operator==(const Poly& a, const Poly& b) { return a.terms_ == b.terms_; }
  friend bool operator!=(const Poly& a, const Poly& b) { return !(a == b); }

  Poly conj() const;  // conjugates scalars and swaps z <-> zbar
  Poly partial(int var) const;

  std::string str() const;

 private:
  void add_term(const Monomial& m, const Scalar& c);
  std::map<Monomial, Scalar> terms_;
};

}  // namespace rumin
