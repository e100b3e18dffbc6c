#pragma once

#include <map>
#include <memory>
#include <string>
#include <vector>

#include "rumin/form.hpp"
#include "rumin/matrix.hpp"

namespace rumin {

// Frame directions: 0 is T, α in 1..n is Z_α, n+α is Z_ᾱ.
inline int dir_hol(int alpha) { return alpha; }
inline int dir_anti(int n, int beta) { return n + beta; }
inline int dir_conj(int n, int a) { return a == 0 ? 0 : (a <= n ? a + n : a - n); }
Key dir_key(int n, int a);  // the coframe element dual to direction a

// Covariant tensor: components on frame directions, one direction per slot.
struct Tensor {
  int rank = 0;
  std::map<std::vector<int>, Poly> comps;
  Poly get(const std::vector<int>& idx) const;
  void add(const std::vector<int>& idx, const Poly& c);
};

struct ModelData {
  int n = 1;
  Matrix h;                       // h(α-1, β-1) = h_{αβ̄}
  std::vector<Form> dtheta_alpha;  // dθ^α, constant coefficients
};

class Model {
 public:
  static Model heisenberg(int n, bool invariant);
  static Model custom(const ModelData& data, const std::string& name = "custom");
  static Model from_json(const std::string& text, const std::string& name = "custom");
  // "builtin:heisenberg:n", "builtin:heisenberg-quotient:n", "file:path"
  static Model from_source(const std::string& source);

  int n() const { return n_; }
  bool polynomial() const { return polynomial_; }
  bool invariant() const { return !polynomial_; }
  const std::string& name() const { return name_; }

  const Matrix& h() const { return h_; }
  // hup(α-1, β-1) = h^{αβ̄}, so that h^{αβ̄} h_{γβ̄} = δ^α_γ.
  const Matrix& hup() const { return hup_; }
  bool strictly_pseudoconvex() const { return pseudoconvex_; }
  bool torsion_free() const { return A_.is_zero(); }
  bool unimodular() const;

  const Form& dtheta() const { return dtheta_; }
  const Form& dtheta_hol(int alpha) const { return dtheta_alpha_[alpha - 1]; }
  Form dtheta_anti(int beta) const { return dtheta_alpha_[beta - 1].conj(); }

  // ω_μ^α as a one-form, and its value on direction a.
  const Form& connection(int mu, int alpha) const { return omega_[mu - 1][alpha - 1]; }
  Scalar gamma(int mu, int alpha, int a) const;
  // τ^α
  const Form& tau(int alpha) const { return tau_[alpha - 1]; }
  const Matrix& torsion() const { return A_; }  // A(α-1, γ-1) = A_{αγ}

  const Scalar& R(int a, int b, int r, int s) const;  // R_{αβ̄ρσ̄}
  const Matrix& ricci() const { return ricci_; }
  const Scalar& scalar_curvature() const { return scal_; }
  const Matrix& schouten() const { return schouten_; }
  const Scalar& chern(int a, int b, int r, int s) const;
  bool pseudo_einstein_tensorial() const;  // R_{αβ̄} = (R/n) h (n ≥ 2); n = 1 uses torsion
  const Form& curvature_form(int alpha, int gamma) const { return Omega_[alpha - 1][gamma - 1]; }

  // Derivation e_a acting on coefficients.
  Poly derive(int a, const Poly& f) const;
  Form d(const Form& w) const;
  Form nabla(int a, const Form& w) const;  // Tanaka–Webster derivative of a form
  Tensor nabla(const Tensor& t) const;     // appends the derivative slot
  // ∇_{e_c} e_b = Σ_a conn(b, a, c) e_a
  Scalar conn(int b, int a, int c) const;
  // Second covariant derivative ∇_b∇_a ω, the slot a differentiated first.
  Form nabla2(int b, int a, const Form& w) const;

  // Torsion as a covariant 2-tensor on all directions.
  Tensor torsion_tensor() const;
  Tensor curvature_tensor() const;

  // Residuals of the structural equations (all empty on a valid model).
  std::vector<std::string> structure_failures() const;

 private:
  void finish();
  void solve_connection();
  void derive_curvature();
  Form d_key(const Key& k) const;
  Form nabla_key(int a, const Key& k) const;

  int n_ = 1;
  bool polynomial_ = false;
  bool pseudoconvex_ = true;
  std::string name_;
  Matrix h_, hup_;
  Form dtheta_;
  std::vector<Form> dtheta_alpha_;
  std::vector<std::vector<Form>> omega_;
  std::vector<Form> tau_;
  Matrix A_;
  std::vector<Scalar> R_, S_;
  Matrix ricci_, schouten_;
  Scalar scal_;
  std::vector<std::vector<Form>> Omega_;
  std::shared_ptr<std::map<Key, Form, KeyLess>> dkey_;
  std::shared_ptr<std::vector<std::map<Key, Form, KeyLess>>> nkey_;
};

}  // namespace rumin
