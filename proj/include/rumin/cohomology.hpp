#pragma once

#include <cstddef>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "rumin/operators.hpp"

namespace rumin {

// R^k_inv as the direct sum of the invariant R^{p,k-p} bases, blocks in increasing p.
class GradedSpace {
 public:
  GradedSpace(const Operators& ops, int k);
  GradedSpace(Operators&&, int) = delete;

  int k() const { return k_; }
  std::size_t dim() const { return elems_.size(); }
  const std::vector<Form>& elems() const { return elems_; }
  Bidegree bidegree(std::size_t i) const { return bideg_[i]; }
  // Index range [lo, hi) of the R^{p,k-p} block; empty when the bidegree is absent.
  std::pair<std::size_t, std::size_t> block(int p) const;
  Vector coords(const Form& w) const;
  Form form(const Vector& c) const;
  // Block-diagonal Gram matrix, G(i,j) = <e_j, e_i>.
  Matrix gram() const;

 private:
  const Operators* ops_;
  int k_;
  std::vector<Form> elems_;
  std::vector<Bidegree> bideg_;
  std::map<int, std::pair<std::size_t, std::size_t>> blocks_;
};

// numerator / denominator inside a coordinate space.  Representatives are the
// first numerator vectors (in order) that are independent modulo the denominator.
struct Subquotient {
  std::size_t ambient = 0;
  std::vector<Vector> numerator;
  std::vector<Vector> denominator;
  std::vector<Vector> reps;

  static Subquotient make(std::size_t ambient, const std::vector<Vector>& num, const std::vector<Vector>& den);
  std::size_t dim() const { return reps.size(); }
  // Coordinates of [v] against reps; throws NotClosed when v is not in the numerator.
  Vector classify(const Vector& v) const;
};

// "ok", "invariant subcomplex only" (Kohn–Rossi at q ∈ {0, n}), "fail"
struct GroupRow {
  std::string group;
  int p = -1;
  int q = -1;
  int k = -1;
  std::size_t dim = 0;
  std::string status = "ok";
};

struct Decomposition {
  std::size_t total = 0, harmonic = 0, image = 0, coimage = 0;
  bool orthogonal = false;
  bool spans = false;
  bool ok() const { return orthogonal && spans && harmonic + image + coimage == total; }
};

struct SpectralPage {
  int r = 0;
  std::map<Bidegree, std::size_t> dims;
  // d_r : E_r^{p,q} → E_r^{p+r,q-r+1} in the page representatives.
  std::map<Bidegree, Matrix> d;
};

struct ExactnessNode {
  std::string label;
  std::size_t dim = 0;
  std::size_t rank_in = 0;
  std::size_t rank_out = 0;
  bool composition_zero = true;
  bool exact() const { return composition_zero && rank_in + rank_out == dim; }
};

struct CheckLine {
  std::string name;
  std::string anchor;
  bool ok = true;
  std::string detail;
  bool skipped = false;
};

class Cohomology {
 public:
  // Throws NotInvariantModel.
  explicit Cohomology(const Operators& ops);
  explicit Cohomology(Operators&&) = delete;

  const Operators& ops() const { return *ops_; }
  int n() const { return ops_->n(); }
  const GradedSpace& space(int k) const;

  // Complex coefficients, in GradedSpace / R^{p,q} basis coordinates.
  Subquotient de_rham(int k) const;
  Subquotient kohn_rossi(int p, int q) const;
  // Over ℝ: realified coordinates (Re, Im) of the ambient complex space.
  Subquotient pluriharmonic(int k) const;
  Subquotient de_rham_real(int k) const;
  Subquotient kohn_rossi_real(int k) const;  // H^{0,k} as a real vector space
  // Independent path: invariant ambient forms Λ^k with the exterior derivative.
  std::size_t naive_de_rham(int k) const;

  // Harmonic forms: kernels of □_b, of the Popovici Laplacian, of Δ_b.
  std::vector<Form> harmonic_kohn(int p, int q) const;
  std::vector<Form> harmonic_popovici(int p, int q) const;
  std::vector<Form> harmonic_rumin(int k) const;
  Decomposition kohn_decomposition(int p, int q) const;
  Decomposition rumin_decomposition(int k) const;

  SpectralPage spectral_page(int r) const;

  // Nodes H^0(ℝ), H^{0,0}, H^0(𝒫), H^1(ℝ), … through H^{2n+1}(ℝ), all over ℝ.
  std::vector<ExactnessNode> long_exact_sequence() const;
  std::vector<CheckLine> dualities() const;

  // Lef : H^k → H^{2n+1-k} on harmonic representatives.  Throws NotTorsionFree, and
  // NotUnimodular when Δ_b-harmonic forms need not be closed.
  Matrix hard_lefschetz(int k) const;
  bool lefschetz_preserves_harmonic(int k) const;

  // Class of ω ⋏ τ; throws NotClosed unless both factors are closed.  degree is the
  // total degree, needed only when a factor is the zero form.
  Vector cup(const Form& a, const Form& b, int degree = -1) const;
  // Every product of harmonic classes of degrees k, l ≤ n with k + l ≥ n+1 vanishes.
  CheckLine cup_vanishing() const;
  // [dz¹] ∪ … ∪ [dzⁿ] ∪ [θ∧dz̄¹∧…∧dz̄ⁿ] on a Heisenberg quotient; the product form and its class.
  std::pair<Form, Vector> cuplength_witness() const;
  std::vector<CheckLine> cup_checks() const;

  // Torsion-free models only; throws NotTorsionFree.
  std::vector<CheckLine> sasaki_report() const;

  // derham | kohn-rossi | pluriharmonic | e2 | harmonic
  std::vector<GroupRow> table(const std::string& group) const;

 private:
  Matrix degree_map(int k_from, int k_to, const std::function<Form(const Form&)>& f) const;
  Matrix bidegree_map(Bidegree from, Bidegree to, const std::function<Form(const Form&)>& f) const;

  const Operators* ops_;
  mutable std::map<int, std::unique_ptr<GradedSpace>> spaces_;
  mutable std::map<int, std::unique_ptr<Subquotient>> de_rham_;
  mutable std::map<int, std::unique_ptr<Matrix>> d_;
};

}  // namespace rumin
