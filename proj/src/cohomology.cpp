#include "rumin/cohomology.hpp"

#include <algorithm>
#include <functional>

#include "rumin/errors.hpp"

namespace rumin {

// ---- GradedSpace ----------------------------------------------------------------

GradedSpace::GradedSpace(const Operators& ops, int k) : ops_(&ops), k_(k) {
  int n = ops.n();
  for (int p = 0; p <= k; ++p) {
    int q = k - p;
    if (!valid_bidegree(n, p, q)) continue;
    std::size_t lo = elems_.size();
    for (const Form& w : ops.basis(p, q).elems) {
      elems_.push_back(w);
      bideg_.push_back({p, q});
    }
    blocks_[p] = {lo, elems_.size()};
  }
}

std::pair<std::size_t, std::size_t> GradedSpace::block(int p) const {
  auto it = blocks_.find(p);
  return it == blocks_.end() ? std::pair<std::size_t, std::size_t>{0, 0} : it->second;
}

Vector GradedSpace::coords(const Form& w) const {
  Vector out(dim());
  if (w.is_zero()) return out;
  const Spaces& s = ops_->spaces();
  Form rebuilt(ops_->n());
  for (const auto& [p, range] : blocks_) {
    int q = k_ - p;
    Form c = s.pi_pq(w, p, q);
    if (c.is_zero()) continue;
    Vector v = ops_->basis(p, q).coords(c, s);
    for (std::size_t i = 0; i < v.size(); ++i) out[range.first + i] = v[i];
    rebuilt += c;
  }
  if (rebuilt != w) throw MembershipViolation("form is not in R^" + std::to_string(k_) + ": " + w.str());
  return out;
}

Form GradedSpace::form(const Vector& c) const {
  Form w(ops_->n());
  for (std::size_t i = 0; i < elems_.size(); ++i)
    if (!c[i].is_zero()) w += elems_[i] * c[i];
  return w;
}

Matrix GradedSpace::gram() const {
  Matrix G(dim(), dim());
  for (const auto& [p, range] : blocks_) {
    Matrix g = ops_->gram(p, k_ - p);
    for (std::size_t i = 0; i < g.rows(); ++i)
      for (std::size_t j = 0; j < g.cols(); ++j) G(range.first + i, range.first + j) = g(i, j);
  }
  return G;
}

// ---- Subquotient ----------------------------------------------------------------

Subquotient Subquotient::make(std::size_t ambient, const std::vector<Vector>& num, const std::vector<Vector>& den) {
  Subquotient s;
  s.ambient = ambient;
  s.numerator = independent_subset(num, ambient);
  s.denominator = independent_subset(den, ambient);
  std::vector<Vector> acc = s.denominator;
  std::size_t r = acc.size();
  for (const Vector& v : s.numerator) {
    acc.push_back(v);
    std::size_t r2 = rank_of(acc, ambient);
    if (r2 > r) {
      s.reps.push_back(v);
      r = r2;
    } else {
      acc.pop_back();
    }
  }
  return s;
}

Vector Subquotient::classify(const Vector& v) const {
  std::vector<Vector> cols = reps;
  cols.insert(cols.end(), denominator.begin(), denominator.end());
  Vector x;
  try {
    x = solve(Matrix::from_columns(cols, ambient), v);
  } catch (const InconsistentSystem&) {
    throw NotClosed("vector is not in the numerator space");
  }
  x.resize(reps.size());
  return x;
}

// ---- helpers ------------------------------------------------------------------------

namespace {

Vector realify(const Vector& c) {
  Vector out(2 * c.size());
  for (std::size_t i = 0; i < c.size(); ++i) {
    out[i] = Scalar(c[i].re);
    out[c.size() + i] = Scalar(c[i].im);
  }
  return out;
}

Vector complexify(const Vector& r) {
  std::size_t N = r.size() / 2;
  Vector out(N);
  for (std::size_t i = 0; i < N; ++i) out[i] = Scalar(r[i].re, r[N + i].re);
  return out;
}

Form re_part(const Form& w) { return (w + w.conj()) * Scalar::frac(1, 2); }
Form im_part(const Form& w) { return (w - w.conj()) * (Scalar::I() * Scalar::frac(-1, 2)); }

// Combinations Σ x_j basis_j with Σ x_j images_j = 0.
std::vector<Vector> kernel_in(const std::vector<Vector>& basis, const std::vector<Vector>& images,
                              std::size_t amb_in, std::size_t amb_out) {
  Matrix M = Matrix::from_columns(images, amb_out);
  if (images.empty()) M = Matrix(amb_out, 0);
  std::vector<Vector> out;
  for (const Vector& x : kernel_basis(M)) {
    Vector v(amb_in);
    for (std::size_t j = 0; j < basis.size(); ++j)
      if (!x[j].is_zero()) v = add(v, scaled(basis[j], x[j]));
    out.push_back(std::move(v));
  }
  return out;
}

std::vector<Vector> units(std::size_t N) {
  std::vector<Vector> out;
  for (std::size_t i = 0; i < N; ++i) {
    Vector e(N);
    e[i] = Scalar(1);
    out.push_back(std::move(e));
  }
  return out;
}

std::vector<Vector> columns(const Matrix& M) {
  std::vector<Vector> out;
  for (std::size_t j = 0; j < M.cols(); ++j) out.push_back(M.column(j));
  return out;
}

// Real basis (realified coordinates) of the conjugation-closed span of the given forms.
std::vector<Vector> real_basis(const std::vector<Form>& forms, const std::function<Vector(const Form&)>& coords,
                               std::size_t N) {
  std::vector<Vector> cand;
  for (const Form& f : forms) {
    Form c = f.conj();
    cand.push_back(realify(coords(f + c)));
    cand.push_back(realify(coords((f - c) * Scalar::I())));
  }
  return independent_subset(cand, 2 * N);
}

Matrix map_matrix(const Subquotient& from, const Subquotient& to, const std::function<Vector(const Vector&)>& f) {
  Matrix M(to.dim(), from.dim());
  for (std::size_t j = 0; j < from.dim(); ++j) {
    Vector c = to.classify(f(from.reps[j]));
    for (std::size_t i = 0; i < c.size(); ++i) M(i, j) = c[i];
  }
  return M;
}

bool valid_pq(int n, int p, int q) { return p >= 0 && q >= 0 && valid_bidegree(n, p, q); }

std::string bstr(int p, int q) { return "(" + std::to_string(p) + "," + std::to_string(q) + ")"; }

Form star_degree(const Operators& o, const Form& w, int k) {
  const Spaces& s = o.spaces();
  Form out(o.n());
  for (int p = 0; p <= k; ++p) {
    if (!valid_bidegree(o.n(), p, k - p)) continue;
    Form c = s.pi_pq(w, p, k - p);
    if (!c.is_zero()) out += s.star(c, p, k - p);
  }
  return out;
}

// Forms of the invariant vectors, for the span/rank checks below.
std::vector<Vector> coords_all(const GradedSpace& V, const std::vector<Form>& ws) {
  std::vector<Vector> out;
  for (const Form& w : ws) out.push_back(V.coords(w));
  return out;
}

}  // namespace

// ---- Cohomology ------------------------------------------------------------------------

Cohomology::Cohomology(const Operators& ops) : ops_(&ops) {
  if (!ops.model().invariant()) throw NotInvariantModel(ops.model().name());
}

const GradedSpace& Cohomology::space(int k) const {
  auto& slot = spaces_[k];
  if (!slot) slot = std::make_unique<GradedSpace>(*ops_, k);
  return *slot;
}

Matrix Cohomology::degree_map(int k_from, int k_to, const std::function<Form(const Form&)>& f) const {
  const GradedSpace& A = space(k_from);
  if (k_to < 0 || k_to > 2 * n() + 1) return Matrix(0, A.dim());
  const GradedSpace& B = space(k_to);
  Matrix M(B.dim(), A.dim());
  for (std::size_t j = 0; j < A.dim(); ++j) {
    Vector c = B.coords(f(A.elems()[j]));
    for (std::size_t i = 0; i < c.size(); ++i) M(i, j) = c[i];
  }
  return M;
}

Matrix Cohomology::bidegree_map(Bidegree from, Bidegree to, const std::function<Form(const Form&)>& f) const {
  const InvariantBasis& A = ops_->basis(from.p, from.q);
  if (!valid_pq(n(), to.p, to.q)) return Matrix(0, A.dim());
  const InvariantBasis& B = ops_->basis(to.p, to.q);
  Matrix M(B.dim(), A.dim());
  for (std::size_t j = 0; j < A.dim(); ++j) {
    Vector c = B.coords(f(A.elems[j]), ops_->spaces());
    for (std::size_t i = 0; i < c.size(); ++i) M(i, j) = c[i];
  }
  return M;
}

Subquotient Cohomology::de_rham(int k) const {
  auto& slot = de_rham_[k];
  if (slot) return *slot;
  const Model& m = ops_->model();
  auto dmat = [&](int j) -> const Matrix& {
    auto& d = d_[j];
    if (!d) d = std::make_unique<Matrix>(degree_map(j, j + 1, [&](const Form& w) { return m.d(w); }));
    return *d;
  };
  std::vector<Vector> den;
  if (k > 0) den = columns(dmat(k - 1));
  slot = std::make_unique<Subquotient>(Subquotient::make(space(k).dim(), kernel_basis(dmat(k)), den));
  return *slot;
}

Subquotient Cohomology::kohn_rossi(int p, int q) const {
  int N = n();
  if (!valid_pq(N, p, q)) throw BadBidegree(bstr(p, q));
  const InvariantBasis& B = ops_->basis(p, q);
  Matrix D = ops_->matrix(make_handle(N, "dbbar", p, q));
  std::vector<Vector> den;
  if (valid_pq(N, p, q - 1)) den = columns(ops_->matrix(make_handle(N, "dbbar", p, q - 1)));
  return Subquotient::make(B.dim(), kernel_basis(D), den);
}

Subquotient Cohomology::de_rham_real(int k) const {
  const Model& m = ops_->model();
  auto realspace = [&](int j) {
    const GradedSpace& V = space(j);
    return real_basis(V.elems(), [&](const Form& w) { return V.coords(w); }, V.dim());
  };
  auto image = [&](int j, const std::vector<Vector>& rb) {
    std::vector<Vector> out;
    for (const Vector& v : rb) {
      Form w = m.d(space(j).form(complexify(v)));
      out.push_back(j + 1 <= 2 * n() + 1 ? realify(space(j + 1).coords(w)) : Vector{});
    }
    return out;
  };
  const GradedSpace& V = space(k);
  std::vector<Vector> rb = realspace(k);
  std::size_t amb_out = k + 1 <= 2 * n() + 1 ? 2 * space(k + 1).dim() : 0;
  std::vector<Vector> num =
      amb_out == 0 ? rb : kernel_in(rb, image(k, rb), 2 * V.dim(), amb_out);
  std::vector<Vector> den;
  if (k > 0) den = image(k - 1, realspace(k - 1));
  return Subquotient::make(2 * V.dim(), num, den);
}

Subquotient Cohomology::kohn_rossi_real(int k) const {
  int N = n();
  if (!valid_pq(N, 0, k)) return Subquotient::make(0, {}, {});
  const InvariantBasis& B = ops_->basis(0, k);
  Matrix D = ops_->matrix(make_handle(N, "dbbar", 0, k));
  auto realmap = [](const Matrix& M) {
    std::vector<Vector> out;
    std::size_t C = M.cols();
    for (std::size_t j = 0; j < 2 * C; ++j) {
      Vector c(C);
      c[j % C] = j < C ? Scalar(1) : Scalar::I();
      out.push_back(realify(M * c));
    }
    return out;
  };
  std::vector<Vector> rb = units(2 * B.dim());
  std::vector<Vector> num = kernel_in(rb, realmap(D), 2 * B.dim(), 2 * D.rows());
  std::vector<Vector> den;
  if (valid_pq(N, 0, k - 1)) den = realmap(ops_->matrix(make_handle(N, "dbbar", 0, k - 1)));
  return Subquotient::make(2 * B.dim(), num, den);
}

// 𝒮^k lives in R^{k+1} (k ≥ 1) or R^0 (k = 0).
Subquotient Cohomology::pluriharmonic(int k) const {
  int N = n();
  const Model& m = ops_->model();
  auto amb = [&](int j) -> const GradedSpace& { return space(j == 0 ? 0 : j + 1); };
  auto realspace = [&](int j) {
    const GradedSpace& V = amb(j);
    std::vector<Form> gens;
    for (std::size_t i = 0; i < V.dim(); ++i) {
      int p = V.bidegree(i).p;
      if (j >= 1 && j <= N - 1 && (p < 1 || p > j)) continue;
      gens.push_back(V.elems()[i]);
    }
    return real_basis(gens, [&](const Form& w) { return V.coords(w); }, V.dim());
  };
  auto D = [&](int j, const Form& w) {
    if (j == 0) return m.d(ops_->dbbar(w, 0, 0)) * Scalar::I();
    return m.d(w);
  };
  auto image = [&](int j, const std::vector<Vector>& rb) {
    std::vector<Vector> out;
    for (const Vector& v : rb) out.push_back(realify(amb(j + 1).coords(D(j, amb(j).form(complexify(v))))));
    return out;
  };
  std::vector<Vector> rb = realspace(k);
  std::size_t amb_in = 2 * amb(k).dim();
  std::vector<Vector> num = k == 2 * N ? rb : kernel_in(rb, image(k, rb), amb_in, 2 * amb(k + 1).dim());
  std::vector<Vector> den;
  if (k > 0) den = image(k - 1, realspace(k - 1));
  return Subquotient::make(amb_in, num, den);
}

std::size_t Cohomology::naive_de_rham(int k) const {
  const Spaces& s = ops_->spaces();
  const Model& m = ops_->model();
  int top = 2 * n() + 1;
  auto dmat = [&](int j) {
    const auto& from = s.keys(j);
    std::size_t rows = j + 1 <= top ? s.keys(j + 1).size() : 0;
    Matrix M(rows, from.size());
    if (rows == 0) return M;
    for (std::size_t c = 0; c < from.size(); ++c) {
      Vector v = s.to_vector(m.d(Form::monomial(n(), from[c])), j + 1);
      for (std::size_t r = 0; r < rows; ++r) M(r, c) = v[r];
    }
    return M;
  };
  std::size_t dimk = s.keys(k).size();
  std::size_t rk = rank(dmat(k));
  std::size_t rprev = k > 0 ? rank(dmat(k - 1)) : 0;
  return dimk - rk - rprev;
}

std::vector<Form> Cohomology::harmonic_kohn(int p, int q) const {
  const InvariantBasis& B = ops_->basis(p, q);
  std::vector<Form> out;
  for (const Vector& v : kernel_basis(ops_->matrix(make_handle(n(), "box_b", p, q)))) out.push_back(B.combine(v));
  return out;
}

std::vector<Form> Cohomology::harmonic_popovici(int p, int q) const {
  const InvariantBasis& B = ops_->basis(p, q);
  std::vector<Form> out;
  for (const Vector& v : kernel_basis(ops_->matrix(make_handle(n(), "popovici", p, q)))) out.push_back(B.combine(v));
  return out;
}

std::vector<Form> Cohomology::harmonic_rumin(int k) const {
  const GradedSpace& V = space(k);
  Matrix L = degree_map(k, k, [&](const Form& w) { return ops_->rumin_laplacian(w, k); });
  std::vector<Form> out;
  for (const Vector& v : kernel_basis(L)) out.push_back(V.form(v));
  return out;
}

namespace {

Decomposition decompose(const Matrix& G, const std::vector<Vector>& H, const std::vector<Vector>& I,
                        const std::vector<Vector>& C, std::size_t N) {
  Decomposition d;
  d.total = N;
  std::vector<Vector> h = independent_subset(H, N), im = independent_subset(I, N), co = independent_subset(C, N);
  d.harmonic = h.size();
  d.image = im.size();
  d.coimage = co.size();
  auto ip = [&](const Vector& x, const Vector& y) {
    // <x,y> = y^* G x
    Vector gx = G * x;
    Scalar s;
    for (std::size_t i = 0; i < N; ++i) s += y[i].conj() * gx[i];
    return s;
  };
  d.orthogonal = true;
  auto orth = [&](const std::vector<Vector>& a, const std::vector<Vector>& b) {
    for (const Vector& x : a)
      for (const Vector& y : b)
        if (!ip(x, y).is_zero()) d.orthogonal = false;
  };
  orth(h, im);
  orth(h, co);
  orth(im, co);
  std::vector<Vector> all = h;
  all.insert(all.end(), im.begin(), im.end());
  all.insert(all.end(), co.begin(), co.end());
  d.spans = rank_of(all, N) == N;
  return d;
}

}  // namespace

Decomposition Cohomology::kohn_decomposition(int p, int q) const {
  int N = n();
  const InvariantBasis& B = ops_->basis(p, q);
  std::vector<Vector> H = kernel_basis(ops_->matrix(make_handle(N, "box_b", p, q)));
  std::vector<Vector> I, C;
  if (valid_pq(N, p, q - 1)) I = columns(ops_->matrix(make_handle(N, "dbbar", p, q - 1)));
  if (valid_pq(N, p, q + 1)) C = columns(ops_->matrix(make_handle(N, "dbbar*", p, q + 1)));
  return decompose(ops_->gram(p, q), H, I, C, B.dim());
}

Decomposition Cohomology::rumin_decomposition(int k) const {
  const GradedSpace& V = space(k);
  std::vector<Vector> H = coords_all(V, harmonic_rumin(k));
  std::vector<Vector> I, C;
  const Model& m = ops_->model();
  if (k > 0) I = columns(degree_map(k - 1, k, [&](const Form& w) { return m.d(w); }));
  if (k < 2 * n() + 1) C = columns(degree_map(k + 1, k, [&](const Form& w) { return ops_->d_star(w, k + 1); }));
  return decompose(V.gram(), H, I, C, V.dim());
}

// ---- spectral sequence ------------------------------------------------------------------

SpectralPage Cohomology::spectral_page(int r) const {
  int N = n(), top = 2 * N + 1;
  const Model& m = ops_->model();
  auto D = [&](int k) -> const Matrix& {
    auto& d = d_[k];
    if (!d) d = std::make_unique<Matrix>(degree_map(k, k + 1, [&](const Form& w) { return m.d(w); }));
    return *d;
  };
  // F^p R^k as coordinate indices.
  auto filt = [&](int k, int p) {
    std::vector<std::size_t> idx;
    if (k < 0 || k > top) return idx;
    const GradedSpace& V = space(k);
    for (std::size_t i = 0; i < V.dim(); ++i)
      if (V.bidegree(i).p >= p) idx.push_back(i);
    return idx;
  };
  auto unit = [](std::size_t N0, std::size_t i) {
    Vector e(N0);
    e[i] = Scalar(1);
    return e;
  };
  // Z_r^{p,q}: ω ∈ F^p with dω ∈ F^{p+r}.
  auto Z = [&](int p, int q, int rr) {
    int k = p + q;
    std::vector<Vector> out;
    if (k < 0 || k > top) return out;
    const GradedSpace& V = space(k);
    auto idx = filt(k, p);
    if (k == top) {
      for (std::size_t i : idx) out.push_back(unit(V.dim(), i));
      return out;
    }
    const GradedSpace& W = space(k + 1);
    const Matrix& Dk = D(k);
    std::vector<std::size_t> rows;
    for (std::size_t i = 0; i < W.dim(); ++i)
      if (W.bidegree(i).p < p + rr) rows.push_back(i);
    Matrix M(rows.size(), idx.size());
    for (std::size_t a = 0; a < rows.size(); ++a)
      for (std::size_t b = 0; b < idx.size(); ++b) M(a, b) = Dk(rows[a], idx[b]);
    for (const Vector& x : kernel_basis(M)) {
      Vector v(V.dim());
      for (std::size_t b = 0; b < idx.size(); ++b) v[idx[b]] = x[b];
      out.push_back(std::move(v));
    }
    return out;
  };
  // B_r^{p,q} = F^p ∩ d(F^{p-r+1} R^{k-1}).
  auto Bsp = [&](int p, int q, int rr) {
    int k = p + q;
    std::vector<Vector> out;
    if (k <= 0 || k > top) return out;
    const GradedSpace& V = space(k);
    const Matrix& Dk = D(k - 1);
    auto src = filt(k - 1, p - rr + 1);
    std::vector<Vector> imgs;
    for (std::size_t j : src) imgs.push_back(Dk.column(j));
    if (imgs.empty()) return out;
    std::vector<std::size_t> low;
    for (std::size_t i = 0; i < V.dim(); ++i)
      if (V.bidegree(i).p < p) low.push_back(i);
    Matrix M(low.size(), imgs.size());
    for (std::size_t a = 0; a < low.size(); ++a)
      for (std::size_t b = 0; b < imgs.size(); ++b) M(a, b) = imgs[b][low[a]];
    for (const Vector& x : kernel_basis(M)) {
      Vector v(V.dim());
      for (std::size_t b = 0; b < imgs.size(); ++b)
        if (!x[b].is_zero()) v = add(v, scaled(imgs[b], x[b]));
      out.push_back(std::move(v));
    }
    return out;
  };
  auto E = [&](int p, int q) {
    int k = p + q;
    std::size_t amb = (k >= 0 && k <= top) ? space(k).dim() : 0;
    std::vector<Vector> den = Bsp(p, q, r);
    auto z = Z(p + 1, q - 1, r - 1);
    den.insert(den.end(), z.begin(), z.end());
    return Subquotient::make(amb, Z(p, q, r), den);
  };
  SpectralPage page;
  page.r = r;
  std::map<Bidegree, Subquotient> quots;
  for (int p = 0; p <= N + 1; ++p)
    for (int q = 0; q <= N; ++q)
      if (valid_bidegree(N, p, q)) quots.emplace(Bidegree{p, q}, E(p, q));
  for (const auto& [b, Q] : quots) page.dims[b] = Q.dim();
  for (const auto& [b, Q] : quots) {
    Bidegree t{b.p + r, b.q - r + 1};
    auto it = quots.find(t);
    if (it == quots.end()) {
      page.d[b] = Matrix(0, Q.dim());
      continue;
    }
    int k = b.k();
    page.d[b] = map_matrix(Q, it->second, [&](const Vector& v) { return D(k) * v; });
  }
  return page;
}

// ---- long exact sequence ------------------------------------------------------------------

std::vector<ExactnessNode> Cohomology::long_exact_sequence() const {
  int N = n(), top = 2 * N + 1;
  const Model& m = ops_->model();
  const Spaces& s = ops_->spaces();
  struct Node {
    std::string label;
    Subquotient Q;
    std::function<Form(const Vector&)> form;
  };
  auto amb_P = [&](int k) -> const GradedSpace& { return space(k == 0 ? 0 : k + 1); };
  std::vector<Node> nodes;
  std::vector<std::function<Vector(const Form&)>> next_coords;  // coordinates in the following node
  std::vector<std::function<Form(const Form&)>> maps;           // map from node i to i+1
  for (int k = 0; k <= top; ++k) {
    nodes.push_back({"H^" + std::to_string(k) + "(M;R)", de_rham_real(k),
                     [this, k](const Vector& v) { return space(k).form(complexify(v)); }});
    if (k == top) break;
    // H^k(ℝ) → H^{0,k}
    if (valid_pq(N, 0, k)) {
      const InvariantBasis* B0 = &ops_->basis(0, k);
      maps.push_back([&s, k](const Form& w) { return s.pi_pq(w, 0, k) * Scalar::I(); });
      next_coords.push_back([B0, &s](const Form& w) { return realify(B0->coords(w, s)); });
      nodes.push_back({"H^{0," + std::to_string(k) + "}", kohn_rossi_real(k),
                       [B0](const Vector& v) { return B0->combine(complexify(v)); }});
    } else {
      maps.push_back([N](const Form&) { return Form(N); });
      next_coords.push_back([](const Form&) { return Vector{}; });
      nodes.push_back({"H^{0," + std::to_string(k) + "}", Subquotient::make(0, {}, {}),
                       [N](const Vector&) { return Form(N); }});
    }
    // H^{0,k} → H^k(𝒫)
    const GradedSpace* P = &amb_P(k);
    if (k == 0) maps.push_back([](const Form& f) { return re_part(f); });
    else maps.push_back([&m](const Form& w) { return -im_part(m.d(w)); });
    next_coords.push_back([P](const Form& w) { return realify(P->coords(w)); });
    nodes.push_back({"H^" + std::to_string(k) + "(M;P)", pluriharmonic(k),
                     [P](const Vector& v) { return P->form(complexify(v)); }});
    // H^k(𝒫) → H^{k+1}(ℝ)
    if (k == 0) maps.push_back([this](const Form& u) { return -im_part(ops_->dbbar(u, 0, 0)); });
    else maps.push_back([](const Form& w) { return w; });
    const GradedSpace* A = &space(k + 1);
    next_coords.push_back([A](const Form& w) { return realify(A->coords(w)); });
  }
  std::vector<Matrix> mats;
  for (std::size_t i = 0; i + 1 < nodes.size(); ++i) {
    const Node& a = nodes[i];
    const Node& b = nodes[i + 1];
    mats.push_back(map_matrix(a.Q, b.Q, [&](const Vector& v) {
      Form y = maps[i](a.form(v));
      return b.Q.ambient == 0 ? Vector{} : next_coords[i](y);
    }));
  }
  std::vector<ExactnessNode> out;
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    ExactnessNode e;
    e.label = nodes[i].label;
    e.dim = nodes[i].Q.dim();
    e.rank_in = i > 0 ? rank(mats[i - 1]) : 0;
    e.rank_out = i < mats.size() ? rank(mats[i]) : 0;
    if (i > 0 && i < mats.size()) e.composition_zero = (mats[i] * mats[i - 1]).is_zero();
    out.push_back(e);
  }
  return out;
}

// ---- dualities ---------------------------------------------------------------------------

std::vector<CheckLine> Cohomology::dualities() const {
  int N = n(), top = 2 * N + 1;
  const Spaces& s = ops_->spaces();
  std::vector<CheckLine> out;
  CheckLine serre{"dim H^{p,q} = dim H^{n+1-p,n-q}", "serre", true, ""};
  CheckLine serre_map{"conjugate star maps harmonic (p,q)-forms onto harmonic (n+1-p,n-q)-forms", "serre", true, ""};
  CheckLine poinc{"b_k = b_{2n+1-k}", "rumin-serre", true, ""};
  CheckLine poinc_map{"star maps harmonic k-forms onto harmonic (2n+1-k)-forms", "rumin-serre", true, ""};
  CheckLine e2{"dim E_2^{p,q} = dim E_2^{n+1-p,n-q}", "popovici-serre-duality", true, ""};
  CheckLine e2_map{"conjugate star maps ker of the Popovici Laplacian bijectively", "popovici-serre-duality", true, ""};
  auto fail = [](CheckLine& c, const std::string& d) {
    if (c.ok) c.detail = d;
    c.ok = false;
  };
  // Without a compact quotient the formal adjoints are not L² adjoints.
  if (!ops_->model().unimodular() || !ops_->model().strictly_pseudoconvex()) {
    out = {serre, serre_map, poinc, poinc_map, e2, e2_map};
    for (CheckLine& c : out) {
      c.skipped = true;
      c.detail = "skipped: needs a unimodular strictly pseudoconvex model";
    }
    return out;
  }
  SpectralPage E2 = spectral_page(2);
  for (int p = 0; p <= N + 1; ++p)
    for (int q = 0; q <= N; ++q) {
      if (!valid_bidegree(N, p, q)) continue;
      int dp = N + 1 - p, dq = N - q;
      if (kohn_rossi(p, q).dim() != kohn_rossi(dp, dq).dim()) fail(serre, "at " + bstr(p, q));
      if (E2.dims.at({p, q}) != E2.dims.at({dp, dq})) fail(e2, "at " + bstr(p, q));
      Bidegree cb = conj_bidegree(N, p, q);
      Bidegree sb = s.star_bidegree(cb.p, cb.q);
      if (!(sb == Bidegree{dp, dq})) fail(serre_map, "star of conj lands in " + bstr(sb.p, sb.q));
      auto check = [&](CheckLine& line, const std::vector<Form>& src, const std::string& lap) {
        std::vector<Vector> imgs;
        const InvariantBasis& T = ops_->basis(dp, dq);
        Projector H = ops_->kohn_projector();
        for (const Form& w : src) {
          Form y = s.star(w.conj(), cb.p, cb.q);
          Form z = lap == "kohn" ? ops_->kohn(y, dp, dq) : ops_->popovici(y, dp, dq, H);
          if (!z.is_zero()) fail(line, "image of " + w.str() + " is not harmonic");
          imgs.push_back(T.coords(y, s));
        }
        std::size_t target = lap == "kohn" ? harmonic_kohn(dp, dq).size() : harmonic_popovici(dp, dq).size();
        if (rank_of(imgs, T.dim()) != src.size() || src.size() != target) fail(line, "rank at " + bstr(p, q));
      };
      check(serre_map, harmonic_kohn(p, q), "kohn");
      check(e2_map, harmonic_popovici(p, q), "popovici");
    }
  for (int k = 0; k <= top; ++k) {
    if (de_rham(k).dim() != de_rham(top - k).dim()) fail(poinc, "at k = " + std::to_string(k));
    std::vector<Vector> imgs;
    const GradedSpace& T = space(top - k);
    auto src = harmonic_rumin(k);
    for (const Form& w : src) {
      Form y = star_degree(*ops_, w, k);
      if (!ops_->rumin_laplacian(y, top - k).is_zero()) fail(poinc_map, "image of " + w.str() + " is not harmonic");
      imgs.push_back(T.coords(y));
    }
    if (rank_of(imgs, T.dim()) != src.size() || src.size() != harmonic_rumin(top - k).size())
      fail(poinc_map, "rank at k = " + std::to_string(k));
  }
  out = {serre, serre_map, poinc, poinc_map, e2, e2_map};
  return out;
}

// ---- Hard Lefschetz ------------------------------------------------------------------------

namespace {
Form lef_image(const Model& m, const Form& w, int n, int k) {
  return wedge(wedge(Form::theta(n), w), power(m.dtheta(), n - k));
}
}  // namespace

Matrix Cohomology::hard_lefschetz(int k) const {
  const Model& m = ops_->model();
  if (!m.torsion_free()) throw NotTorsionFree(m.name());
  if (!m.unimodular()) throw NotUnimodular(m.name());
  int N = n();
  if (k < 0 || k > N) throw IndexOutOfRange("hard Lefschetz needs 0 ≤ k ≤ n");
  Subquotient target = de_rham(2 * N + 1 - k);
  auto src = harmonic_rumin(k);
  Matrix M(target.dim(), src.size());
  const GradedSpace& T = space(2 * N + 1 - k);
  for (std::size_t j = 0; j < src.size(); ++j) {
    Vector c = target.classify(T.coords(lef_image(m, src[j], N, k)));
    for (std::size_t i = 0; i < c.size(); ++i) M(i, j) = c[i];
  }
  return M;
}

bool Cohomology::lefschetz_preserves_harmonic(int k) const {
  const Model& m = ops_->model();
  if (!m.torsion_free()) throw NotTorsionFree(m.name());
  int N = n();
  for (const Form& w : harmonic_rumin(k))
    if (!ops_->rumin_laplacian(lef_image(m, w, N, k), 2 * N + 1 - k).is_zero()) return false;
  return true;
}

// ---- cup products ----------------------------------------------------------------------------

Vector Cohomology::cup(const Form& a, const Form& b, int degree) const {
  const Model& m = ops_->model();
  if (!m.d(a).is_zero()) throw NotClosed(a.str());
  if (!m.d(b).is_zero()) throw NotClosed(b.str());
  int k = degree >= 0 ? degree : a.degree() + b.degree();
  if (k > 2 * n() + 1) return {};
  if (a.is_zero() || b.is_zero()) {
    if (k < 0) throw std::invalid_argument("cup: degree of a zero factor is unknown");
    return Vector(de_rham(k).dim());
  }
  return de_rham(k).classify(space(k).coords(ops_->m2(a, b)));
}

namespace {
std::vector<Form> rep_forms(const Cohomology& c, int k) {
  std::vector<Form> out;
  for (const Vector& v : c.de_rham(k).reps) out.push_back(c.space(k).form(v));
  return out;
}
}  // namespace

CheckLine Cohomology::cup_vanishing() const {
  int N = n();
  CheckLine line{"classes of degrees k, l ≤ n with k + l ≥ n+1 multiply to zero", "cup-vanishing", true, ""};
  bool harmonic = ops_->model().unimodular() && ops_->model().strictly_pseudoconvex();
  for (int k = 1; k <= N; ++k)
    for (int l = 1; l <= N; ++l) {
      if (k + l < N + 1) continue;
      auto A = harmonic ? harmonic_rumin(k) : rep_forms(*this, k);
      auto B = harmonic ? harmonic_rumin(l) : rep_forms(*this, l);
      for (const Form& a : A)
        for (const Form& b : B)
          if (!is_zero(cup(a, b)) && line.ok) {
            line.ok = false;
            line.detail = "[" + a.str() + "] ∪ [" + b.str() + "] ≠ 0";
          }
    }
  return line;
}

std::pair<Form, Vector> Cohomology::cuplength_witness() const {
  int N = n();
  const Model& m = ops_->model();
  Form prod = Form::hol(N, 1);
  for (int a = 2; a <= N; ++a) {
    Form next = Form::hol(N, a);
    if (!m.d(prod).is_zero() || !m.d(next).is_zero()) throw NotClosed("dz^" + std::to_string(a));
    prod = ops_->m2(prod, next);
  }
  Form top = Form::theta(N);
  for (int b = 1; b <= N; ++b) top = wedge(top, Form::anti(N, b));
  if (!m.d(top).is_zero()) throw NotClosed(top.str());
  if (!m.d(prod).is_zero()) throw NotClosed(prod.str());
  Form w = ops_->m2(prod, top);
  return {w, de_rham(2 * N + 1).classify(space(2 * N + 1).coords(w))};
}

std::vector<CheckLine> Cohomology::cup_checks() const {
  int N = n(), top = 2 * N + 1;
  const Model& m = ops_->model();
  CheckLine unit{"[1] ∪ [ω] = [ω]", "de-rham-cup", true, ""};
  CheckLine welldef{"[ω + dβ] ∪ [τ] = [ω] ∪ [τ]", "de-rham-cup", true, ""};
  CheckLine assoc{"cup product is associative on classes", "a-infinity-cohomology", true, ""};
  CheckLine kr{"[ω + ∂̄_bβ] ⊔ [τ] = [ω] ⊔ [τ]", "kohn-rossi-cup", true, ""};
  auto fail = [](CheckLine& c, const std::string& d) {
    if (c.ok) c.detail = d;
    c.ok = false;
  };
  Form one = Form::one(N);
  for (int k = 0; k <= top; ++k)
    for (const Form& w : rep_forms(*this, k))
      if (cup(one, w) != de_rham(k).classify(space(k).coords(w))) fail(unit, w.str());
  for (int k = 1; k <= top; ++k)
    for (int l = 0; k + l <= top; ++l) {
      auto A = rep_forms(*this, k), B = rep_forms(*this, l);
      for (const Form& a : A)
        for (const Form& b : B) {
          Vector base = cup(a, b, k + l);
          for (const Form& beta : space(k - 1).elems()) {
            Form shifted = a + m.d(beta);
            if (cup(shifted, b, k + l) != base) fail(welldef, a.str() + " + d(" + beta.str() + ")");
          }
        }
    }
  for (int k = 1; k <= top; ++k)
    for (int l = 1; k + l <= top; ++l)
      for (int j = 1; k + l + j <= top; ++j)
        for (const Form& a : rep_forms(*this, k))
          for (const Form& b : rep_forms(*this, l))
            for (const Form& c : rep_forms(*this, j)) {
              Form ab = ops_->m2(a, b), bc = ops_->m2(b, c);
              if (cup(ab, c, k + l + j) != cup(a, bc, k + l + j)) fail(assoc, a.str() + ", " + b.str() + ", " + c.str());
            }
  // Kohn–Rossi products of ∂̄_b-closed representatives
  for (int p = 0; p <= N + 1; ++p)
    for (int q = 0; q <= N; ++q) {
      if (!valid_bidegree(N, p, q)) continue;
      Subquotient A = kohn_rossi(p, q);
      const InvariantBasis& BA = ops_->basis(p, q);
      for (int r = 0; r + p <= N + 1; ++r)
        for (int t = 0; t + q <= N; ++t) {
          if (!valid_bidegree(N, r, t) || !valid_bidegree(N, p + r, q + t)) continue;
          Subquotient B = kohn_rossi(r, t), C = kohn_rossi(p + r, q + t);
          const InvariantBasis& BB = ops_->basis(r, t);
          const InvariantBasis& BC = ops_->basis(p + r, q + t);
          auto cls = [&](const Form& x, const Form& y) {
            return C.classify(BC.coords(ops_->kr_m2(x, {p, q}, y, {r, t}), ops_->spaces()));
          };
          for (const Vector& va : A.reps)
            for (const Vector& vb : B.reps) {
              Form a = BA.combine(va), b = BB.combine(vb);
              Vector base = cls(a, b);
              if (!valid_pq(N, p, q - 1)) continue;
              for (const Form& beta : ops_->basis(p, q - 1).elems) {
                Form shifted = a + ops_->dbbar(beta, p, q - 1);
                if (cls(shifted, b) != base) fail(kr, a.str() + " ⊔ " + b.str());
              }
            }
        }
    }
  return {unit, welldef, assoc, kr};
}

// ---- Sasakian consequences ---------------------------------------------------------------------

std::vector<CheckLine> Cohomology::sasaki_report() const {
  const Model& m = ops_->model();
  if (!m.torsion_free()) throw NotTorsionFree(m.name());
  int N = n(), top = 2 * N + 1;
  const Spaces& s = ops_->spaces();
  std::vector<CheckLine> out;
  SpectralPage E2 = spectral_page(2);

  CheckLine fro{"Σ_{p+q=k} dim E_2^{p,q} = b_k", "cr-frolicher", true, ""};
  for (int k = 0; k <= top; ++k) {
    std::size_t sum = 0;
    for (const auto& [b, d] : E2.dims)
      if (b.k() == k) sum += d;
    if (sum != de_rham(k).dim() && fro.ok) {
      fro.ok = false;
      fro.detail = "k = " + std::to_string(k) + ": " + std::to_string(sum) + " vs " + std::to_string(de_rham(k).dim());
    }
  }
  out.push_back(fro);

  CheckLine par{"b_k is even for odd k ≤ n", "sasakian", true, ""};
  for (int k = 1; k <= N; k += 2)
    if (de_rham(k).dim() % 2 != 0 && par.ok) {
      par.ok = false;
      par.detail = "b_" + std::to_string(k) + " = " + std::to_string(de_rham(k).dim());
    }
  out.push_back(par);

  CheckLine hp0{"dim E_2^{p,0} ≤ C(n,p) (p ≤ n) and dim E_2^{n+1,0} ≤ 1", "sasakian-Hp0-vanishing", true, ""};
  if (!is_positive_semidefinite(m.ricci())) {
    hp0.skipped = true;
    hp0.detail = "skipped: Ricci curvature is not nonnegative";
  } else {
    bool positive = is_positive_definite(m.ricci());
    for (int p = 0; p <= N + 1; ++p) {
      std::size_t d = E2.dims.at({p, 0});
      std::size_t bound = p <= N ? static_cast<std::size_t>(binomial(N, p).get_num().get_ui()) : 1;
      // With positive Ricci curvature the bound drops to 0 for p ≥ 1; constants keep E_2^{0,0} ≠ 0.
      if (positive && p >= 1) bound = 0;
      if (d > bound && hp0.ok) {
        hp0.ok = false;
        hp0.detail = "p = " + std::to_string(p) + ": " + std::to_string(d);
      }
    }
    if (positive && hp0.ok) hp0.detail = "Ricci positive: E_2^{p,0} = 0 for 1 ≤ p ≤ n+1";
  }
  out.push_back(hp0);

  // Chern forms i^{|K|} Π tr(Ω^{k_j}), without the 1/(2π) normalization.
  CheckLine chern{"π χ^(K) ∈ im d for 2|K| ≥ n+1", "sasakian-chern-vanishing", true, ""};
  std::size_t count = 0;
  auto trace_power = [&](int k) {
    // Ω^k as a matrix of forms, then the trace
    std::vector<std::vector<Form>> P(N, std::vector<Form>(N, Form(N)));
    for (int a = 0; a < N; ++a) P[a][a] = Form::one(N);
    for (int step = 0; step < k; ++step) {
      std::vector<std::vector<Form>> Q(N, std::vector<Form>(N, Form(N)));
      for (int a = 0; a < N; ++a)
        for (int c = 0; c < N; ++c)
          for (int b = 0; b < N; ++b) Q[a][c] += wedge(P[a][b], m.curvature_form(b + 1, c + 1));
      P = std::move(Q);
    }
    Form t(N);
    for (int a = 0; a < N; ++a) t += P[a][a];
    return t;
  };
  std::function<void(int, int, std::vector<int>&)> parts = [&](int left, int maxpart, std::vector<int>& K) {
    if (left == 0) {
      int size = 0;
      Form chi = Form::one(N);
      for (int kj : K) {
        size += kj;
        chi = wedge(chi, trace_power(kj));
      }
      chi = chi * ipow(size);
      ++count;
      std::string tag = "K = (";
      for (std::size_t i = 0; i < K.size(); ++i) tag += (i ? "," : "") + std::to_string(K[i]);
      tag += ")";
      if (!m.d(chi).is_zero() || chi.part(size, size) != chi) {
        if (chern.ok) chern.detail = tag + ": χ is not a closed (|K|,|K|)-form";
        chern.ok = false;
        return;
      }
      Form pc = s.pi(chi);
      if (pc.is_zero()) return;
      std::vector<Vector> img = columns(degree_map(2 * size - 1, 2 * size, [&](const Form& w) { return m.d(w); }));
      if (!in_span(img, space(2 * size).coords(pc), space(2 * size).dim())) {
        if (chern.ok) chern.detail = tag + ": π χ is not exact";
        chern.ok = false;
      }
      return;
    }
    for (int kj = std::min(left, maxpart); kj >= 1; --kj) {
      K.push_back(kj);
      parts(left - kj, kj, K);
      K.pop_back();
    }
  };
  for (int size = 1; 2 * size <= top; ++size) {
    if (2 * size < N + 1) continue;
    std::vector<int> K;
    parts(size, size, K);
  }
  if (chern.ok) chern.detail = std::to_string(count) + " multi-indices";
  out.push_back(chern);

  CheckLine hl{"Lef : H^k → H^{2n+1-k} is bijective and preserves harmonic forms, k ≤ n", "hard-lefschetz", true, ""};
  if (!m.unimodular()) {
    hl.skipped = true;
    hl.detail = "skipped: model is not unimodular";
  }
  for (int k = 0; k <= N && !hl.skipped; ++k) {
    Matrix L = hard_lefschetz(k);
    if (L.rows() != L.cols() || rank(L) != L.cols() || !lefschetz_preserves_harmonic(k)) {
      if (hl.ok) hl.detail = "k = " + std::to_string(k);
      hl.ok = false;
    }
  }
  out.push_back(hl);
  out.push_back(cup_vanishing());
  return out;
}

// ---- tables --------------------------------------------------------------------------------------

std::vector<GroupRow> Cohomology::table(const std::string& group) const {
  int N = n(), top = 2 * N + 1;
  std::vector<GroupRow> rows;
  if (group == "derham") {
    for (int k = 0; k <= top; ++k) {
      GroupRow r{"H^k(M;C)", -1, -1, k, de_rham(k).dim(), "ok"};
      if (naive_de_rham(k) != r.dim) r.status = "fail";
      rows.push_back(r);
    }
  } else if (group == "kohn-rossi") {
    for (int p = 0; p <= N + 1; ++p)
      for (int q = 0; q <= N; ++q) {
        if (!valid_bidegree(N, p, q)) continue;
        GroupRow r{"H^{p,q}", p, q, p + q, kohn_rossi(p, q).dim(), "ok"};
        if (q == 0 || q == N) r.status = "invariant subcomplex only";
        rows.push_back(r);
      }
  } else if (group == "pluriharmonic") {
    for (int k = 0; k <= 2 * N; ++k) rows.push_back({"H^k(M;P)", -1, -1, k, pluriharmonic(k).dim(), "ok"});
  } else if (group == "e2") {
    SpectralPage E2 = spectral_page(2);
    for (const auto& [b, d] : E2.dims) rows.push_back({"E_2^{p,q}", b.p, b.q, b.k(), d, "ok"});
  } else if (group == "harmonic") {
    if (!ops_->model().strictly_pseudoconvex()) throw NotStrictlyPseudoconvex(ops_->model().name());
    const std::string bad = ops_->model().unimodular() ? "fail" : "not unimodular";
    SpectralPage E2 = spectral_page(2);
    for (int p = 0; p <= N + 1; ++p)
      for (int q = 0; q <= N; ++q) {
        if (!valid_bidegree(N, p, q)) continue;
        std::size_t hk = harmonic_kohn(p, q).size(), hp = harmonic_popovici(p, q).size();
        rows.push_back({"ker box_b", p, q, p + q, hk, hk == kohn_rossi(p, q).dim() ? "ok" : bad});
        rows.push_back({"ker popovici", p, q, p + q, hp, hp == E2.dims.at({p, q}) ? "ok" : bad});
      }
    for (int k = 0; k <= top; ++k) {
      std::size_t h = harmonic_rumin(k).size();
      rows.push_back({"ker delta_b", -1, -1, k, h, h == de_rham(k).dim() ? "ok" : bad});
    }
  } else {
    throw std::invalid_argument("unknown group " + group);
  }
  return rows;
}

}  // namespace rumin
