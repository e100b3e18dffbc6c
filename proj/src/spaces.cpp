#include "rumin/spaces.hpp"

#include "rumin/errors.hpp"

namespace rumin {

namespace {

std::string bideg_str(int p, int q) { return "(" + std::to_string(p) + "," + std::to_string(q) + ")"; }

// Bidegree of the horizontal (or T⨼) part; nullopt-like {-1,-1} for mixed.
Bidegree horizontal_bidegree(const Form& h) {
  Bidegree b{-1, -1};
  for (const auto& [k, c] : h.terms()) {
    if (b.p < 0) b = {k.p(), k.q()};
    else if (b.p != k.p() || b.q != k.q()) return {-2, -2};
  }
  return b;
}

}  // namespace

Spaces::Spaces(const Model& m) : m_(&m), n_(m.n()) {
  keys_.resize(2 * n_ + 2);
  kindex_.resize(2 * n_ + 2);
  for (int k = 0; k <= 2 * n_ + 1; ++k) {
    keys_[k] = keys_of_degree(n_, k);
    for (std::size_t i = 0; i < keys_[k].size(); ++i) kindex_[k].emplace(keys_[k][i], i);
  }
  hkeys_.resize(2 * n_ + 1);
  hindex_.resize(2 * n_ + 1);
  for (int r = 0; r <= 2 * n_; ++r) {
    for (const Key& k : keys_of_degree(n_, r))
      if (!k.theta) hkeys_[r].push_back(k);
    for (std::size_t i = 0; i < hkeys_[r].size(); ++i) hindex_[r].emplace(hkeys_[r][i], i);
  }
}

const std::vector<Key>& Spaces::hkeys(int r) const {
  static const std::vector<Key> empty;
  if (r < 0 || r > 2 * n_) return empty;
  return hkeys_[r];
}

const Matrix& Spaces::lefschetz(int r, int j) const {
  std::lock_guard<std::mutex> lock(mu_);
  auto& slot = lef_[{r, j}];
  if (!slot) {
    const auto& in = hkeys(r);
    const auto& out = hkeys(r + 2 * j);
    auto M = std::make_unique<Matrix>(out.size(), in.size());
    Form lj = power(m_->dtheta(), j);
    for (std::size_t c = 0; c < in.size(); ++c) {
      Form img = wedge(Form::monomial(n_, in[c]), lj);
      for (const auto& [k, v] : img.terms()) (*M)(hindex_[r + 2 * j].at(k), c) = v.constant();
    }
    slot = std::move(M);
  }
  return *slot;
}

Matrix Spaces::lefschetz_pq(int p, int q, int j) const {
  auto in = keys_of_bidegree(n_, p, q, false);
  auto out = keys_of_bidegree(n_, p + j, q + j, false);
  Matrix M(out.size(), in.size());
  Form lj = power(m_->dtheta(), j);
  std::map<Key, std::size_t, KeyLess> idx;
  for (std::size_t i = 0; i < out.size(); ++i) idx.emplace(out[i], i);
  for (std::size_t c = 0; c < in.size(); ++c) {
    Form img = wedge(Form::monomial(n_, in[c]), lj);
    for (const auto& [k, v] : img.terms()) M(idx.at(k), c) = v.constant();
  }
  return M;
}

Form Spaces::Lambda(const Form& w) const {
  const Matrix& hu = m_->hup();
  Form out(n_);
  for (const auto& [k, c] : w.terms()) {
    int p = k.p();
    Scalar pre = sign_pow(p) * Scalar::I();
    for (int mu = 1; mu <= n_; ++mu) {
      if (!((k.A >> (mu - 1)) & 1u)) continue;
      for (int nu = 1; nu <= n_; ++nu) {
        if (!((k.B >> (nu - 1)) & 1u)) continue;
        const Scalar& g = hu(mu - 1, nu - 1);
        if (g.is_zero()) continue;
        Scalar s = pre * g;
        if ((position_in(k.A, mu) + position_in(k.B, nu)) % 2) s = -s;
        out.add(Key{k.theta, k.A & ~(1u << (mu - 1)), k.B & ~(1u << (nu - 1))}, c * s);
      }
    }
  }
  return out;
}

Form Spaces::apply_horizontal(const Matrix& m, int r_in, int r_out, const Form& w) const {
  Form out(n_);
  if (r_out < 0 || r_out > 2 * n_) return out;
  const auto& keys_out = hkeys(r_out);
  for (const auto& [k, c] : w.terms()) {
    if (k.theta) continue;
    std::size_t j = hindex_[r_in].at(k);
    for (std::size_t i = 0; i < keys_out.size(); ++i)
      if (!m(i, j).is_zero()) out.add(keys_out[i], c * m(i, j));
  }
  return out;
}

const Matrix& Spaces::G(int k) const {
  {
    std::lock_guard<std::mutex> lock(mu_);
    auto it = G_.find(k);
    if (it != G_.end()) return *it->second;
  }
  int n = n_;
  Matrix g;
  if (k <= n) {
    // θ∧ω∧dθ^{n+1-k} = θ∧ξ∧dθ^{n+2-k}
    g = inverse(lefschetz(k - 2, n + 2 - k)) * lefschetz(k, n + 1 - k);
  } else {
    // θ∧ω = θ∧ξ∧dθ^{k-n}, Γω = θ∧ξ∧dθ^{k-n-1}
    g = lefschetz(2 * n - k, k - n - 1) * inverse(lefschetz(2 * n - k, k - n));
  }
  std::lock_guard<std::mutex> lock(mu_);
  auto& slot = G_[k];
  if (!slot) slot = std::make_unique<Matrix>(std::move(g));
  return *slot;
}

Form Spaces::gamma(const Form& w) const {
  int k = w.degree();
  if (k < 2 || k > 2 * n_) return Form(n_);
  return apply_horizontal(G(k), k, k - 2, w.horizontal()).theta_wedge();
}

Form Spaces::pi(const Form& w) const {
  if (w.is_zero()) return w;
  return w - m_->d(gamma(w)) - gamma(m_->d(w));
}

Form Spaces::pi_pq(const Form& w, int p, int q) const {
  int k = p + q;
  if (p < 0 || q < 0 || q > n_ || p > n_ + 1 || k > 2 * n_ + 1)
    throw BadBidegree("no Rumin space of bidegree " + bideg_str(p, q));
  if (w.is_zero()) return w;
  if (w.degree() != k) throw BadBidegree("degree " + std::to_string(w.degree()) + " form, bidegree " + bideg_str(p, q));
  require_R(w, k);
  if (k <= n_) {
    if (p > n_) return Form(n_);
    return pi(w.horizontal().part(p, q));
  }
  if (p < 1) return Form(n_);
  return w.contract_reeb().part(p - 1, q).theta_wedge();
}

std::string Spaces::R_failure(const Form& w, int k) const {
  int n = n_;
  if (w.is_zero()) return "";
  if (w.degree() != k) return "degree " + std::to_string(w.degree()) + " != " + std::to_string(k);
  Form dw = m_->d(w);
  if (k <= n) {
    Form dp = power(m_->dtheta(), n - k);
    if (!wedge(wedge(w.theta_wedge(), dp), m_->dtheta()).is_zero()) return "θ∧ω∧dθ^{n+1-k} != 0";
    if (!wedge(dw.theta_wedge(), dp).is_zero()) return "θ∧dω∧dθ^{n-k} != 0";
  } else {
    if (!w.theta_wedge().is_zero()) return "θ∧ω != 0";
    if (!dw.theta_wedge().is_zero()) return "θ∧dω != 0";
  }
  return "";
}

std::string Spaces::Rpq_failure(const Form& w, int p, int q) const {
  int k = p + q;
  if (p < 0 || q < 0 || q > n_ || p > n_ + 1) return "no Rumin space of bidegree " + bideg_str(p, q);
  std::string f = R_failure(w, k);
  if (!f.empty() || w.is_zero()) return f;
  if (k <= n_) {
    Form h = w.horizontal();
    if (h != h.part(p, q)) return "ω|H is not of type " + bideg_str(p, q);
  } else {
    Form t = w.contract_reeb();
    if (t != t.part(p - 1, q)) return "T⨼ω is not of type " + bideg_str(p - 1, q);
  }
  return "";
}

bool Spaces::in_R(const Form& w, int k) const { return R_failure(w, k).empty(); }
bool Spaces::in_Rpq(const Form& w, int p, int q) const { return Rpq_failure(w, p, q).empty(); }

void Spaces::require_R(const Form& w, int k) const {
  std::string f = R_failure(w, k);
  if (!f.empty()) throw MembershipViolation("R^" + std::to_string(k) + ": " + f);
}

void Spaces::require_Rpq(const Form& w, int p, int q) const {
  std::string f = Rpq_failure(w, p, q);
  if (!f.empty()) throw MembershipViolation("R^" + bideg_str(p, q) + ": " + f);
}

Form Spaces::project_E(const Form& x, int p, int q) const {
  int n = n_;
  if (p < 0 || q < 0 || p + q > n) throw BadBidegree("project_E needs p+q <= n, got " + bideg_str(p, q));
  if (x != x.part(p, q)) throw BadBidegree("input is not a horizontal " + bideg_str(p, q) + " form");
  if (!Lambda(x).is_zero()) throw NotTraceFree("trace of the input does not vanish");
  const Matrix& hu = m_->hup();
  Scalar w = Scalar(1) / Scalar(n - p - q + 1);
  Form out = x;
  Form corr(n);
  for (int mu = 1; mu <= n; ++mu)
    for (int nu = 1; nu <= n; ++nu) {
      const Scalar& g = hu(mu - 1, nu - 1);
      if (g.is_zero()) continue;
      // -(i/(n-p-q+1)) ∇^μ ω_{μA'B̄} and ((-1)^p i/(n-p-q+1)) ∇^ν̄ ω_{Aν̄B̄'}
      if (p > 0) corr += contract_hol(m_->nabla(dir_anti(n, nu), x), mu) * (-Scalar::I() * w * g);
      if (q > 0)
        corr += contract_anti(m_->nabla(dir_hol(mu), x), nu) * (sign_pow(p) * Scalar::I() * w * g);
    }
  out += corr.horizontal().theta_wedge();
  return out;
}

Form Spaces::extract_primitive(const Form& w, int p, int q) const {
  int n = n_;
  int j = p + q - n - 1;
  if (j < 0) throw BadBidegree("extract_primitive needs p+q >= n+1, got " + bideg_str(p, q));
  require_Rpq(w, p, q);
  int r = 2 * n + 1 - p - q;
  Form mu = w.contract_reeb();
  Form tau = apply_horizontal(inverse(lefschetz(r, j)), p + q - 1, r, mu) * Scalar(factorial(j));
  return project_E(tau, n - q, n + 1 - p);
}

Form Spaces::from_primitive(const Form& tau, int p, int q) const {
  int j = p + q - n_ - 1;
  return wedge(tau.theta_wedge(), power(m_->dtheta(), j)) * Scalar(mpq_class(1) / factorial(j));
}

const Matrix& Spaces::gram_horizontal(int a, int b) const {
  std::lock_guard<std::mutex> lock(mu_);
  auto& slot = gram_[{a, b}];
  if (!slot) {
    auto keys = keys_of_bidegree(n_, a, b, false);
    const Matrix& hu = m_->hup();
    auto M = std::make_unique<Matrix>(keys.size(), keys.size());
    auto sub_det = [&](const MultiIndex& rows, const MultiIndex& cols) {
      Matrix s(rows.size(), cols.size());
      for (std::size_t i = 0; i < rows.size(); ++i)
        for (std::size_t j = 0; j < cols.size(); ++j) s(i, j) = hu(rows[i] - 1, cols[j] - 1);
      // Determinant by elimination.
      Scalar det(1);
      std::size_t m = rows.size();
      for (std::size_t c = 0; c < m; ++c) {
        std::size_t piv = c;
        while (piv < m && s(piv, c).is_zero()) ++piv;
        if (piv == m) return Scalar();
        if (piv != c) {
          for (std::size_t t = 0; t < m; ++t) std::swap(s(piv, t), s(c, t));
          det = -det;
        }
        det *= s(c, c);
        Scalar inv = s(c, c).inverse();
        for (std::size_t r = c + 1; r < m; ++r) {
          if (s(r, c).is_zero()) continue;
          Scalar f = s(r, c) * inv;
          for (std::size_t t = c; t < m; ++t) s(r, t) -= f * s(c, t);
        }
      }
      return det;
    };
    for (std::size_t i = 0; i < keys.size(); ++i)
      for (std::size_t j = 0; j < keys.size(); ++j) {
        // <e_j, e_i> = det h^{A_j A_i} det h^{B_i B_j}
        (*M)(i, j) = sub_det(from_mask(keys[j].A), from_mask(keys[i].A)) *
                     sub_det(from_mask(keys[i].B), from_mask(keys[j].B));
      }
    slot = std::move(M);
  }
  return *slot;
}

Poly Spaces::inner_horizontal(const Form& x, const Form& y) const {
  Bidegree bx = horizontal_bidegree(x), by = horizontal_bidegree(y);
  if (bx.p == -1 || by.p == -1) return Poly();
  if (bx.p < 0 || !(bx == by)) throw BidegreeMismatch("pairing of forms of different type");
  for (const auto& [k, c] : x.terms())
    if (k.theta) throw BidegreeMismatch("pairing expects horizontal forms");
  auto keys = keys_of_bidegree(n_, bx.p, bx.q, false);
  const Matrix& g = gram_horizontal(bx.p, bx.q);
  Poly out;
  for (std::size_t i = 0; i < keys.size(); ++i) {
    Poly yi = y.coeff(keys[i]);
    if (yi.is_zero()) continue;
    Poly cyi = yi.conj();
    for (std::size_t j = 0; j < keys.size(); ++j) {
      if (g(i, j).is_zero()) continue;
      Poly xj = x.coeff(keys[j]);
      if (xj.is_zero()) continue;
      out += xj * cyi * g(i, j);
    }
  }
  return out;
}

Poly Spaces::inner(const Form& a, const Form& b, int p, int q) const {
  Form x, y;
  int ha = p;
  if (p + q <= n_) {
    x = a.horizontal();
    y = b.horizontal();
  } else {
    x = a.contract_reeb();
    y = b.contract_reeb();
    ha = p - 1;
  }
  Bidegree bx = horizontal_bidegree(x), by = horizontal_bidegree(y);
  if ((bx.p != -1 && !(bx.p == ha && bx.q == q)) || (by.p != -1 && !(by.p == ha && by.q == q)))
    throw BidegreeMismatch("inner product of forms outside R^" + bideg_str(p, q));
  return inner_horizontal(x, y);
}

Matrix Spaces::gram(const std::vector<Form>& basis, int p, int q) const {
  Matrix g(basis.size(), basis.size());
  for (std::size_t i = 0; i < basis.size(); ++i)
    for (std::size_t j = 0; j < basis.size(); ++j) g(i, j) = inner(basis[j], basis[i], p, q).constant();
  return g;
}

Bidegree Spaces::star_bidegree(int p, int q) const {
  if (p + q <= n_) return {n_ + 1 - q, n_ - p};
  return {n_ - q, n_ + 1 - p};
}

Form Spaces::star(const Form& w, int p, int q) const {
  if (!m_->strictly_pseudoconvex())
    throw NotStrictlyPseudoconvex("Hodge star needs a positive definite Levi form");
  int n = n_, k = p + q;
  Scalar s = sign_pow(static_cast<long>(k) * (k + 1) / 2);
  if (k <= n) {
    s *= ipow(q - p) * Scalar(mpq_class(1) / factorial(n - k));
    return wedge(w.horizontal().theta_wedge(), power(m_->dtheta(), n - k)) * s;
  }
  s *= sign_pow(n) * ipow(p - q + 1);
  return extract_primitive(w, p, q) * s;
}

const std::vector<Key>& Spaces::keys(int k) const {
  static const std::vector<Key> empty;
  if (k < 0 || k > 2 * n_ + 1) return empty;
  return keys_[k];
}

Vector Spaces::to_vector(const Form& w, int k) const {
  const auto& ks = keys(k);
  Vector v(ks.size());
  for (const auto& [key, c] : w.terms()) {
    if (!c.is_constant()) throw NotInvariantModel("form with nonconstant coefficients");
    auto it = kindex_[k].find(key);
    if (it == kindex_[k].end()) throw BadBidegree("form of degree " + std::to_string(key.degree()) + ", expected " + std::to_string(k));
    v[it->second] = c.constant();
  }
  return v;
}

Form Spaces::from_vector(const Vector& v, int k) const {
  const auto& ks = keys(k);
  Form w(n_);
  for (std::size_t i = 0; i < ks.size(); ++i)
    if (!v[i].is_zero()) w.add(ks[i], Poly(v[i]));
  return w;
}

InvariantBasis Spaces::make_basis(const std::vector<Form>& spanning, int k) const {
  InvariantBasis b;
  b.n = n_;
  b.k = k;
  b.ambient = keys(k).size();
  if (spanning.empty()) return b;
  Matrix rows(spanning.size(), b.ambient);
  for (std::size_t i = 0; i < spanning.size(); ++i) {
    Vector v = to_vector(spanning[i], k);
    for (std::size_t j = 0; j < v.size(); ++j) rows(i, j) = v[j];
  }
  Echelon e = rref(rows);
  for (std::size_t i = 0; i < e.pivots.size(); ++i) {
    Vector v = e.reduced.row(i);
    b.vectors.push_back(v);
    b.elems.push_back(from_vector(v, k));
  }
  b.pivots = e.pivots;
  return b;
}

InvariantBasis Spaces::basis_R(int k) const {
  if (!m_->invariant()) throw NotInvariantModel("invariant bases need a constant-coefficient model");
  std::vector<Form> span;
  for (const Key& key : keys(k)) span.push_back(pi(Form::monomial(n_, key)));
  InvariantBasis b = make_basis(span, k);
  b.label = "R^" + std::to_string(k);
  return b;
}

InvariantBasis Spaces::basis_Rpq(int p, int q) const {
  if (!m_->invariant()) throw NotInvariantModel("invariant bases need a constant-coefficient model");
  int k = p + q;
  std::vector<Form> span;
  if (p >= 0 && q >= 0 && p <= n_ + 1 && q <= n_ && k <= 2 * n_ + 1)
    for (const Key& key : keys(k)) span.push_back(pi_pq(pi(Form::monomial(n_, key)), p, q));
  InvariantBasis b = make_basis(span, k);
  b.bigraded = true;
  b.p = p;
  b.q = q;
  b.label = "R^" + bideg_str(p, q);
  return b;
}

Vector InvariantBasis::coords(const Form& w, const Spaces& s) const {
  Vector v = s.to_vector(w, k);
  Vector c(elems.size());
  Vector rebuilt(ambient);
  for (std::size_t i = 0; i < elems.size(); ++i) {
    c[i] = v[pivots[i]];
    for (std::size_t j = 0; j < ambient; ++j) rebuilt[j] += c[i] * vectors[i][j];
  }
  if (rebuilt != v) throw MembershipViolation("form is not in the span of " + label);
  return c;
}

Form InvariantBasis::combine(const Vector& c) const {
  Form w(n);
  for (std::size_t i = 0; i < elems.size(); ++i)
    if (!c[i].is_zero()) w += elems[i] * c[i];
  return w;
}

}  // namespace rumin
