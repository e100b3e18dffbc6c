#pragma once

#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <utility>
#include <vector>

#include "rumin/form.hpp"
#include "rumin/matrix.hpp"
#include "rumin/model.hpp"

namespace rumin {

struct Bidegree {
  int p = 0;
  int q = 0;
  int k() const { return p + q; }
  friend bool operator==(const Bidegree& a, const Bidegree& b) { return a.p == b.p && a.q == b.q; }
  friend bool operator<(const Bidegree& a, const Bidegree& b) {
    return a.p != b.p ? a.p < b.p : a.q < b.q;
  }
};

// A form together with the Rumin space it is asserted to lie in.
struct RuminForm {
  enum class Tag { None, Degree, Bidegree };
  Form form;
  Tag tag = Tag::None;
  int k = 0;
  int p = 0;
  int q = 0;
};

class Spaces;

// RREF basis of an invariant Rumin space inside the constant forms of degree k.
struct InvariantBasis {
  std::string label;
  int n = 1;
  int k = 0;
  bool bigraded = false;
  int p = 0;
  int q = 0;
  std::size_t ambient = 0;
  std::vector<Form> elems;
  std::vector<Vector> vectors;
  std::vector<std::size_t> pivots;

  std::size_t dim() const { return elems.size(); }
  // Coordinates of w; throws MembershipViolation when w is not in the span.
  Vector coords(const Form& w, const Spaces& s) const;
  Form combine(const Vector& c) const;
};

// Lefschetz machinery, Γ, the Rumin projections and the Hodge star of one model.
class Spaces {
 public:
  explicit Spaces(const Model& m);
  explicit Spaces(Model&&) = delete;  // holds a reference

  const Model& model() const { return *m_; }
  int n() const { return n_; }

  // Horizontal keys of degree r (all bidegrees), sorted.
  const std::vector<Key>& hkeys(int r) const;
  // Matrix of L^j from horizontal degree r to r + 2j.
  const Matrix& lefschetz(int r, int j) const;
  // L^j restricted to Λ^{p,q}, columns keys_of_bidegree(p,q), rows keys_of_bidegree(p+j,q+j).
  Matrix lefschetz_pq(int p, int q, int j) const;

  Form L(const Form& w) const { return wedge(w, m_->dtheta()); }
  Form Lambda(const Form& w) const;

  Form gamma(const Form& w) const;
  Form pi(const Form& w) const;
  Form pi_pq(const Form& w, int p, int q) const;

  bool in_R(const Form& w, int k) const;
  bool in_Rpq(const Form& w, int p, int q) const;
  // Empty when w ∈ R^{p,q}; otherwise the violated condition.
  std::string Rpq_failure(const Form& w, int p, int q) const;
  std::string R_failure(const Form& w, int k) const;
  void require_Rpq(const Form& w, int p, int q) const;
  void require_R(const Form& w, int k) const;

  // The unique element of R^{p,q} (p+q ≤ n) with horizontal part x.
  Form project_E(const Form& x, int p, int q) const;
  // For ω ∈ R^{p,q}, p+q ≥ n+1, the τ ∈ R^{n-q,n+1-p} with ω = θ∧τ∧dθ^{j}/j!.
  Form extract_primitive(const Form& w, int p, int q) const;
  // θ∧τ∧dθ^{p+q-n-1}/(p+q-n-1)! for τ of bidegree (n-q, n+1-p).
  Form from_primitive(const Form& tau, int p, int q) const;

  // Gram matrix of Λ^{a,b}: G(i,j) = <e_j, e_i>.
  const Matrix& gram_horizontal(int a, int b) const;
  // Pointwise Levi pairing of two horizontal forms of one bidegree.
  Poly inner_horizontal(const Form& x, const Form& y) const;
  // Pointwise <ω,τ> on R^{p,q}.
  Poly inner(const Form& a, const Form& b, int p, int q) const;
  // Gram matrix of a family of R^{p,q} forms with constant coefficients.
  Matrix gram(const std::vector<Form>& basis, int p, int q) const;

  Form star(const Form& w, int p, int q) const;
  Bidegree star_bidegree(int p, int q) const;

  // All keys of degree k and coordinate vectors of constant forms against them.
  const std::vector<Key>& keys(int k) const;
  Vector to_vector(const Form& w, int k) const;
  Form from_vector(const Vector& v, int k) const;
  InvariantBasis make_basis(const std::vector<Form>& spanning, int k) const;
  InvariantBasis basis_R(int k) const;
  InvariantBasis basis_Rpq(int p, int q) const;

  // Apply a constant matrix between horizontal degrees coefficientwise.
  Form apply_horizontal(const Matrix& m, int r_in, int r_out, const Form& w) const;

 private:
  const Matrix& G(int k) const;

  const Model* m_;
  int n_;
  std::vector<std::vector<Key>> keys_;
  std::vector<std::map<Key, std::size_t, KeyLess>> kindex_;
  std::vector<std::vector<Key>> hkeys_;
  std::vector<std::map<Key, std::size_t, KeyLess>> hindex_;
  mutable std::mutex mu_;
  mutable std::map<std::pair<int, int>, std::unique_ptr<Matrix>> lef_;
  mutable std::map<int, std::unique_ptr<Matrix>> G_;
  mutable std::map<std::pair<int, int>, std::unique_ptr<Matrix>> gram_;
};

}  // namespace rumin
