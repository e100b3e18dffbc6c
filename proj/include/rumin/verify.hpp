#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "rumin/operators.hpp"

namespace rumin {

// One identity of a suite: how many instances were evaluated and how many failed.
struct CheckRow {
  std::string identity;
  std::string anchor;  // label of the statement being checked
  std::size_t checked = 0;
  std::size_t failed = 0;
  bool skipped = false;
  std::string detail;  // first counterexample, or the reason for skipping

  bool ok() const { return failed == 0; }
  std::string status() const { return skipped ? "skip" : (failed ? "fail" : "pass"); }
};

struct SuiteReport {
  std::string suite;
  std::string model;
  std::vector<CheckRow> rows;

  bool ok() const;
  const CheckRow* first_failure() const;
};

struct VerifyOptions {
  int max_poly_degree = 3;  // coefficient degree bound for ℍⁿ samples
  std::size_t samples = 6;  // polynomial samples per bidegree
  std::size_t tuples = 120;  // sampled tuples per arity for polynomial A∞ checks
};

// complex-identities, a-infinity, hodge, weitzenbock, commutators, les, dualities
const std::vector<std::string>& suite_names();
// Throws std::invalid_argument on an unknown suite.
SuiteReport run_suite(const Operators& ops, const std::string& suite, const VerifyOptions& opt = {});

// Monomials in z, z̄, t of total degree ≤ d, constant first.
std::vector<Poly> sample_coefficients(int n, int max_degree);
// Elements of R^{p,q}: the invariant basis, or deterministic polynomial samples on ℍⁿ.
std::vector<Form> sample_forms(const Operators& ops, int p, int q, const VerifyOptions& opt);
// Horizontal forms of type (p,q), same policy.
std::vector<Form> sample_horizontal(const Operators& ops, int p, int q, const VerifyOptions& opt);

// Bidegree of a nonzero form lying in a single R^{p,q}; throws BidegreeMismatch otherwise.
Bidegree rumin_bidegree(const Spaces& s, const Form& w);

// Σ_{r+s+t=k} (−1)^{r+st} m_{r+t+1}(1^r ⊗ m_s ⊗ 1^t) on x_1 ⊗ … ⊗ x_k, Koszul signs included.
// bigraded selects m1 = ∂̄_b and m2 = ⩕; otherwise m1 = d and m2 = ⋏.
Form a_infinity_residual(const Operators& ops, const std::vector<Form>& xs, bool bigraded);

}  // namespace rumin
