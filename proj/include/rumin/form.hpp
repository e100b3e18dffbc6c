#pragma once

#include <map>
#include <string>
#include <vector>

#include "rumin/matrix.hpp"
#include "rumin/multi_index.hpp"
#include "rumin/poly.hpp"

namespace rumin {

// Complex form on a (2n+1)-manifold in the coframe θ, θ^α, θ^ᾱ.
// Coefficient of key K multiplies θ? ∧ θ^A ∧ θ^B̄ with A, B sorted.
class Form {
 public:
  using Terms = std::map<Key, Poly, KeyLess>;

  Form() = default;
  explicit Form(int n) : n_(n) {}

  static Form one(int n) { return scalar(n, Scalar(1)); }
  static Form scalar(int n, const Poly& f);
  static Form theta(int n);
  static Form hol(int n, int alpha);   // θ^α
  static Form anti(int n, int beta);   // θ^β̄
  static Form monomial(int n, const Key& k, const Poly& c = Poly(1));

  int n() const { return n_; }
  const Terms& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  // Degree of the (homogeneous) form; -1 for zero.  Throws on mixed degrees.
  int degree() const;
  bool is_constant() const;
  Poly coeff(const Key& k) const;
  Scalar constant_coeff(const Key& k) const;

  void add(const Key& k, const Poly& c);
  Form& operator+=(const Form& o);
  Form& operator-=(const Form& o);
  Form& operator*=(const Scalar& s);
  Form& operator*=(const Poly& f);
  friend Form operator+(Form a, const Form& b) { return a += b; }
  friend Form operator-(Form a, const Form& b) { return a -= b; }
  friend Form operator*(Form a, const Scalar& s) { return a *= s; }
  friend Form operator*(const Scalar& s, Form a) { return a *= s; }
  friend Form operator*(const Poly& f, Form a) { return a *= f; }
  friend Form operator*(Form a, const Poly& f) { return a *= f; }
  Form operator-() const { return *this * Scalar(-1); }

  friend bool operator==(const Form& a, const Form& b) { return a.terms_ == b.terms_; }
  friend bool operator!=(const Form& a, const Form& b) { return !(a == b); }

  Form conj() const;
  Form horizontal() const;          // drop θ-terms
  Form contract_reeb() const;       // T⨼ω (horizontal, since θ^α(T) = 0)
  Form theta_wedge() const;         // θ ∧ ω
  Form part(int p, int q) const;    // horizontal terms of bidegree (p,q)
  Form theta_part(int p, int q) const;  // θ-terms θ∧θ^A∧θ^B̄ with |A| = p, |B| = q

  std::string str() const;

 private:
  int n_ = 0;
  Terms terms_;
};

Form wedge(const Form& a, const Form& b);
Form power(const Form& a, int k);  // a ∧ ... ∧ a, with a^0 = 1

// Component with arbitrary index order, e.g. ω_{μ A'} with μ prepended.
Poly component(const Form& w, bool theta, const std::vector<int>& A, const std::vector<int>& B);

// Components (p+1) τ_{[α} ω_{AB̄]}: holomorphic skew, no division.
Form skew_hol(const std::vector<Poly>& tau, const Form& w);
// Components (q+1) τ_{[β̄} ω_{|A|B̄]}: antiholomorphic skew of the B̄ slots only.
Form skew_anti(const std::vector<Poly>& tau, const Form& w);
// p P_{[α}{}^μ ω_{|μ|A'B̄]} with P(α-1, μ-1) = P_α^μ (index μ fixed).
Form fixed_index_hol(const Matrix& P, const Form& w);
// q P_{[β̄}{}^{ν̄} ω_{A|ν̄|B̄']} with P(β-1, ν-1) = P_β̄^ν̄.
Form fixed_index_anti(const Matrix& P, const Form& w);

// Components ω_{μA'B̄} as a form in (A', B): the leading holomorphic slot fixed to μ.
Form contract_hol(const Form& w, int mu);
// Components ω_{Aν̄B̄'} as a form in (A, B').
Form contract_anti(const Form& w, int nu);

}  // namespace rumin
