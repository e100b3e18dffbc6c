#pragma once

#include <string>
#include <vector>

#include "rumin/form.hpp"
#include "rumin/model.hpp"
#include "rumin/poly.hpp"
#include "rumin/spaces.hpp"

namespace rumin::test {

inline const Scalar I = Scalar::I();

inline Model load(const std::string& file) {
  return Model::from_source(std::string("file:") + RUMIN_MODEL_DIR + "/" + file);
}

inline Form dz(int n, int a) { return Form::hol(n, a); }
inline Form dzb(int n, int a) { return Form::anti(n, a); }
inline Form th(int n) { return Form::theta(n); }

// Coefficient samples {1, z^α, z̄^α, t, z^αz̄^β, z^αt, ...} up to the given total degree.
inline std::vector<Poly> poly_samples(int n, int max_degree) {
  std::vector<Poly> vars;
  for (int a = 1; a <= n; ++a) {
    vars.push_back(Poly::z(a));
    vars.push_back(Poly::zbar(a));
  }
  vars.push_back(Poly::t());
  std::vector<Poly> out{Poly(1)};
  std::vector<Poly> layer{Poly(1)};
  for (int d = 1; d <= max_degree; ++d) {
    std::vector<Poly> next;
    for (std::size_t i = 0; i < layer.size(); ++i)
      for (const Poly& v : vars) next.push_back(layer[i] * v);
    // Keep the layer small: one product per variable pair pattern.
    std::vector<Poly> uniq;
    for (const Poly& p : next) {
      bool seen = false;
      for (const Poly& u : uniq) seen = seen || u == p;
      if (!seen) uniq.push_back(p);
    }
    layer = uniq;
    out.insert(out.end(), layer.begin(), layer.end());
  }
  return out;
}

// A deterministic mixed polynomial, so samples are not all monomials.
inline Poly mixed_poly(int n, int seed) {
  Poly f = Poly(Scalar(seed % 3 - 1)) + Poly::z(1) * Poly::zbar(n) * Scalar::frac(1, 2);
  if (seed % 2) f += Poly::t() * Scalar::I();
  if (seed % 5 == 0) f += Poly::z(n) * Poly::t();
  return f;
}

// Invariant strictly pseudoconvex models used across the operator tests.
inline std::vector<Model> invariant_models(int max_builtin_n = 3) {
  std::vector<Model> ms;
  for (int n = 1; n <= max_builtin_n; ++n) ms.push_back(Model::heisenberg(n, true));
  for (const char* f : {"sasakian_su2.json", "torsion_n1.json", "rescaled_levi_n1.json", "skew_levi_n2.json",
                        "curved_n2.json"})
    ms.push_back(load(f));
  return ms;
}

// Elements of R^{p,q} with polynomial coefficients: π^{p,q}π(f θ?∧θ^A∧θ^B̄).
inline std::vector<Form> rumin_samples(const Spaces& s, int p, int q, const std::vector<Poly>& coeffs,
                                       std::size_t max_count = 24) {
  int n = s.n(), k = p + q;
  std::vector<Form> out;
  std::size_t salt = 0;
  for (const Key& key : s.keys(k)) {
    const Poly& f = coeffs[salt++ % coeffs.size()];
    Form w = s.pi_pq(s.pi(Form::monomial(n, key, f)), p, q);
    if (w.is_zero()) continue;
    out.push_back(w);
    if (out.size() >= max_count) break;
  }
  return out;
}

// Small polynomial coefficients for the flat ℍ^n samples.
inline std::vector<Poly> small_coeffs(int n) {
  return {Poly::z(1) * Poly::zbar(n), Poly::t() + Poly::z(n), Poly::zbar(1) * Poly::t(),
          Poly::z(1) * Poly::z(n) * Poly::zbar(1) + Poly::t() * Scalar::I(), Poly(1)};
}

}  // namespace rumin::test
