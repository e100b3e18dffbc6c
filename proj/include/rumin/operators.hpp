#pragma once

#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

#include "rumin/form.hpp"
#include "rumin/matrix.hpp"
#include "rumin/model.hpp"
#include "rumin/spaces.hpp"

namespace rumin {

// Projection-based (π∘d, ⋆-conjugation) versus coefficient formulas.
enum class Path { Projection, Formula };

// Whether R^{p,q} exists on a (2n+1)-manifold.
bool valid_bidegree(int n, int p, int q);
// Bidegree of conj(ω) for ω ∈ R^{p,q}.
Bidegree conj_bidegree(int n, int p, int q);

// Name plus domain/codomain of an operator on the Rumin complex.
// Degree-graded operators (d, d*, delta_b, m2, m3) set graded = false and use k.
struct OperatorHandle {
  std::string name;
  bool bigraded = true;
  Bidegree from, to;
  int k_from = 0;
  int k_to = 0;
  bool zero_target = false;  // the codomain space is 0
};

// Builds the handle; throws MiddleDegreeOnly / BadBidegree.
OperatorHandle make_handle(int n, const std::string& name, int p, int q);
OperatorHandle make_degree_handle(int n, const std::string& name, int k);

// Hodge projection H^{p,q} supplied by the caller.
using Projector = std::function<Form(const Form&, int p, int q)>;

class Operators {
 public:
  explicit Operators(const Spaces& s);
  explicit Operators(Spaces&&) = delete;

  const Spaces& spaces() const { return *s_; }
  const Model& model() const { return s_->model(); }
  int n() const { return n_; }

  // ∇̸-family and curvature actions on horizontal forms of a single bidegree.
  Form nablas(const Form& w) const;
  Form nablas_bar(const Form& w) const;
  Form nablas_star(const Form& w) const;
  Form nablas_bar_star(const Form& w) const;
  Form rough(const Form& w) const;      // ∇_b^*∇_b
  Form rough_bar(const Form& w) const;  // ∇̄_b^*∇̄_b
  Form nabla0(const Form& w) const;
  Form boxs(const Form& w) const;
  Form curv_RR(const Form& w) const;    // R⨼⨼
  Form ric_hol(const Form& w) const;    // Ric⨼
  Form ric_anti(const Form& w) const;   // Ric⨼̄
  Form tor_hol(const Form& w) const;    // A⨼
  Form tor_anti(const Form& w) const;   // A⨼̄

  // Rumin complex.  Inputs are checked for membership.
  Form d(const Form& w, int k) const;
  Form d_star(const Form& w, int k) const;
  Form db(const Form& w, int p, int q, Path path = Path::Projection) const;
  Form dbbar(const Form& w, int p, int q, Path path = Path::Projection) const;
  Form d0(const Form& w, int p, int q, Path path = Path::Projection) const;
  Form db_star(const Form& w, int p, int q, Path path = Path::Projection) const;
  Form dbbar_star(const Form& w, int p, int q, Path path = Path::Projection) const;
  Form d0_star(const Form& w, int p, int q, Path path = Path::Projection) const;

  Form kohn(const Form& w, int p, int q) const;
  Form kohn_bar(const Form& w, int p, int q) const;
  Form rumin_laplacian(const Form& w, int k) const;
  Form L_b(const Form& w, int p, int q) const;
  Form popovici(const Form& w, int p, int q, const Projector& H) const;

  // Products.  The degrees of the factors are read off the forms.
  Form m2(const Form& a, const Form& b) const;
  Form m3(const Form& a, const Form& b, const Form& c) const;
  Form kr_m2(const Form& a, Bidegree pa, const Form& b, Bidegree pb) const;

  // Lee form, via the curvature trace or via the Ricci/torsion expansion.
  Form lee_form(Path path = Path::Projection) const;
  bool is_pseudo_einstein() const;

  // Evaluate a handle on a form of its domain.
  Form apply(const OperatorHandle& h, const Form& w) const;
  // Invariant bases, cached.
  const InvariantBasis& basis(int p, int q) const;
  const InvariantBasis& basis_degree(int k) const;
  // Matrix of a handle between invariant bases: column j holds the coordinates
  // of the image of the j-th domain basis element.
  Matrix matrix(const OperatorHandle& h) const;
  Matrix gram(int p, int q) const;
  Matrix gram_degree(int k) const;
  // L²-orthogonal projection onto ker □_b on invariant forms, as a Projector.
  Projector kohn_projector() const;

  // Assembly threads; RUMIN_THREADS overrides the default of 1.
  void set_threads(int t) { threads_ = t < 1 ? 1 : t; }

  // Unchecked versions, used inside compositions.
  Form db_raw(const Form& w, int p, int q, Path path) const;
  Form dbbar_raw(const Form& w, int p, int q, Path path) const;
  Form d0_raw(const Form& w, int p, int q, Path path) const;
  Form db_star_raw(const Form& w, int p, int q, Path path) const;
  Form dbbar_star_raw(const Form& w, int p, int q, Path path) const;
  Form d0_star_raw(const Form& w, int p, int q, Path path) const;
  Form d_star_raw(const Form& w, int k) const;

 private:
  Form star(const Form& w, int p, int q) const { return s_->star(w, p, q); }
  Form star_degree(const Form& w, int k) const;
  void check_pq(const Form& w, int p, int q) const;
  void require_pseudoconvex() const;
  Form proj(const Form& w, int p, int q) const;  // π^{p,q}, zero on invalid bidegrees

  const Spaces* s_;
  int n_;
  int threads_ = 1;
  mutable std::mutex mu_;
  mutable std::map<Bidegree, std::unique_ptr<InvariantBasis>> bases_;
  mutable std::map<int, std::unique_ptr<InvariantBasis>> dbases_;
  mutable std::map<Bidegree, std::unique_ptr<Matrix>> kohn_proj_;
};

}  // namespace rumin
