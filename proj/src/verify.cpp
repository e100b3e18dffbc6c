#include "rumin/verify.hpp"

#include <functional>
#include <stdexcept>

#include "rumin/cohomology.hpp"
#include "rumin/errors.hpp"

namespace rumin {

bool SuiteReport::ok() const {
  for (const CheckRow& r : rows)
    if (!r.ok()) return false;
  return true;
}

const CheckRow* SuiteReport::first_failure() const {
  for (const CheckRow& r : rows)
    if (!r.ok()) return &r;
  return nullptr;
}

namespace {

const Path P = Path::Projection;

Scalar frac(long a, long b) { return Scalar(mpq_class(a, b)); }

std::string bstr(int p, int q) { return "(" + std::to_string(p) + "," + std::to_string(q) + ")"; }

std::string at(int p, int q, const Form& w) { return bstr(p, q) + " ω = " + w.str(); }

template <class F>
void for_bidegrees(int n, F f) {
  for (int p = 0; p <= n + 1; ++p)
    for (int q = 0; q <= n; ++q)
      if (valid_bidegree(n, p, q)) f(p, q);
}

class Acc {
 public:
  Acc(std::string identity, std::string anchor) {
    row_.identity = std::move(identity);
    row_.anchor = std::move(anchor);
  }
  template <class F>
  void expect(bool ok, F&& what) {
    ++row_.checked;
    if (!ok && row_.failed++ == 0) row_.detail = what();
  }
  // Residual must vanish.
  template <class F>
  void zero(const Form& residual, F&& what) {
    expect(residual.is_zero(), [&] { return what() + "; residual " + residual.str(); });
  }
  void skip(std::string why) {
    row_.skipped = true;
    row_.detail = std::move(why);
  }
  bool skipped() const { return row_.skipped; }
  CheckRow take() { return std::move(row_); }

 private:
  CheckRow row_;
};

// A form tagged with its Rumin bidegree; operators follow the bidegree contract.
struct BF {
  Form w;
  Bidegree b;
};

class Alg {
 public:
  explicit Alg(const Operators& o) : o_(o), n_(o.n()) {}

  BF db(const BF& x) const {
    Bidegree t = x.b.k() == n_ ? Bidegree{x.b.p + 2, x.b.q - 1} : Bidegree{x.b.p + 1, x.b.q};
    return {o_.db_raw(x.w, x.b.p, x.b.q, P), t};
  }
  BF dbb(const BF& x) const { return {o_.dbbar_raw(x.w, x.b.p, x.b.q, P), {x.b.p, x.b.q + 1}}; }
  BF d0(const BF& x) const {
    Bidegree t{x.b.p + 1, x.b.q};
    if (x.b.k() != n_ || x.w.is_zero()) return {Form(n_), t};
    return {o_.d0_raw(x.w, x.b.p, x.b.q, P), t};
  }
  BF dbs(const BF& x) const {
    Bidegree t = x.b.k() == n_ + 1 ? Bidegree{x.b.p - 2, x.b.q + 1} : Bidegree{x.b.p - 1, x.b.q};
    return {o_.db_star_raw(x.w, x.b.p, x.b.q, P), t};
  }
  BF dbbs(const BF& x) const { return {o_.dbbar_star_raw(x.w, x.b.p, x.b.q, P), {x.b.p, x.b.q - 1}}; }
  BF d0s(const BF& x) const {
    Bidegree t{x.b.p - 1, x.b.q};
    if (x.b.k() != n_ + 1 || x.w.is_zero()) return {Form(n_), t};
    return {o_.d0_star_raw(x.w, x.b.p, x.b.q, P), t};
  }
  BF kohn(const BF& x) const {
    if (x.w.is_zero()) return {Form(n_), x.b};
    return {o_.kohn(x.w, x.b.p, x.b.q), x.b};
  }
  BF Lb(const BF& x) const {
    if (x.w.is_zero()) return {Form(n_), x.b};
    return {o_.L_b(x.w, x.b.p, x.b.q), x.b};
  }
  static BF conj(const BF& x, int n) { return {x.w.conj(), conj_bidegree(n, x.b.p, x.b.q)}; }

 private:
  const Operators& o_;
  int n_;
};

// Sum of the stars of the π^{p,q} components of a degree-k form.
Form star_degree(const Operators& o, const Form& w, int k) {
  const Spaces& s = o.spaces();
  Form out(o.n());
  if (w.is_zero()) return out;
  for (int p = 0; p <= k; ++p) {
    if (!valid_bidegree(o.n(), p, k - p)) continue;
    Form c = s.pi_pq(w, p, k - p);
    if (!c.is_zero()) out += s.star(c, p, k - p);
  }
  return out;
}

std::vector<Form> components(const Spaces& s, const Form& w) {
  std::vector<Form> out;
  if (w.is_zero()) return out;
  int k = w.degree();
  for (int p = 0; p <= k; ++p) {
    if (!valid_bidegree(s.n(), p, k - p)) continue;
    Form c = s.pi_pq(w, p, k - p);
    if (!c.is_zero()) out.push_back(std::move(c));
  }
  return out;
}

// Matrix of a linear map between invariant bases.
Matrix assemble(const Operators& o, Bidegree from, Bidegree to, const std::function<Form(const Form&)>& f) {
  const InvariantBasis& dom = o.basis(from.p, from.q);
  if (!valid_bidegree(o.n(), to.p, to.q)) return Matrix(0, dom.dim());
  const InvariantBasis& cod = o.basis(to.p, to.q);
  Matrix M(cod.dim(), dom.dim());
  for (std::size_t j = 0; j < dom.dim(); ++j) {
    Vector c = cod.coords(f(dom.elems[j]), o.spaces());
    for (std::size_t i = 0; i < c.size(); ++i) M(i, j) = c[i];
  }
  return M;
}

bool same_span(const std::vector<Vector>& a, const std::vector<Vector>& b, std::size_t ambient) {
  std::size_t ra = rank_of(a, ambient), rb = rank_of(b, ambient);
  if (ra != rb) return false;
  std::vector<Vector> all = a;
  all.insert(all.end(), b.begin(), b.end());
  return rank_of(all, ambient) == ra;
}

std::vector<Vector> kernel_of_stack(const std::vector<Matrix>& ms, std::size_t cols) {
  std::size_t rows = 0;
  for (const Matrix& m : ms) rows += m.rows();
  Matrix S(rows, cols);
  std::size_t r0 = 0;
  for (const Matrix& m : ms) {
    for (std::size_t i = 0; i < m.rows(); ++i)
      for (std::size_t j = 0; j < cols; ++j) S(r0 + i, j) = m(i, j);
    r0 += m.rows();
  }
  return kernel_basis(S);
}

// ---- complex identities -----------------------------------------------------

SuiteReport complex_identities(const Operators& o, const VerifyOptions& opt) {
  const Model& m = o.model();
  int n = o.n();
  Alg A(o);
  Acc d2("d∘d = 0", "rumin-complex");
  Acc split("d = ∂_b + ∂̄_b + ∂_0", "dbbar");
  Acc sq("∂_b∂_b = 0 and ∂̄_b∂̄_b = 0", "justification-of-bigraded-complex");
  Acc anti("∂_b∂̄_b + ∂̄_b∂_b = 0 for k ∉ {n−1, n}", "justification-of-bigraded-complex");
  Acc low("∂_0∂_b + ∂_b∂̄_b = 0 and ∂̄_b∂_b + ∂_0∂̄_b = 0 at k = n−1", "justification-of-bigraded-complex");
  Acc mid("∂̄_b∂_b + ∂_b∂_0 = 0 and ∂̄_b∂_0 + ∂_b∂̄_b = 0 at k = n", "justification-of-bigraded-complex");
  Acc conj("conj ∂_b = ∂̄_b conj and conj ∂_0 = ∂_0 conj", "conjugate-rumin-operators");
  Acc paths("projection and coefficient formulas agree for ∂_b, ∂̄_b, ∂_0", "bigraded-operators");
  Acc apaths("star conjugation and divergence formulas agree for the adjoints", "divergence-formula");
  Acc asq("∂_b^*∂_b^* = 0 and ∂̄_b^*∂̄_b^* = 0", "dual-justification");
  Acc aanti("∂_b^*∂̄_b^* + ∂̄_b^*∂_b^* = 0 for k ∉ {n+1, n+2}", "dual-justification");
  Acc alow("∂̄_b^*∂_b^* + ∂_b^*∂_0^* = 0 and ∂̄_b^*∂_0^* + ∂_b^*∂̄_b^* = 0 at k = n+1", "dual-justification");
  Acc amid("∂_0^*∂_b^* + ∂_b^*∂̄_b^* = 0 and ∂̄_b^*∂_b^* + ∂_0^*∂̄_b^* = 0 at k = n+2", "dual-justification");
  Acc dsplit("d^* = ∂_b^* + ∂̄_b^* + ∂_0^*", "dbbar-adjoint");
  bool pc = m.strictly_pseudoconvex();

  for_bidegrees(n, [&](int p, int q) {
    int k = p + q;
    for (const Form& w : sample_forms(o, p, q, opt)) {
      auto where = [&] { return at(p, q, w); };
      BF x{w, {p, q}};
      Form dw = m.d(w);
      d2.zero(m.d(dw), where);
      BF a = A.db(x), b = A.dbb(x), c = A.d0(x);
      split.zero(dw - a.w - b.w - c.w, where);
      sq.zero(A.db(a).w, where);
      sq.zero(A.dbb(b).w, where);
      if (k != n - 1 && k != n) anti.zero(A.db(b).w + A.dbb(a).w, where);
      if (k == n - 1) {
        low.zero(A.d0(a).w + A.db(b).w, where);
        low.zero(A.dbb(a).w + A.d0(b).w, where);
      }
      if (k == n) {
        mid.zero(A.dbb(a).w + A.db(c).w, where);
        mid.zero(A.dbb(c).w + A.db(b).w, where);
      }
      BF cx = Alg::conj(x, n);
      conj.expect(a.w.conj() == A.dbb(cx).w, where);
      conj.expect(b.w.conj() == A.db(cx).w, where);
      if (k == n) conj.expect(c.w.conj() == A.d0(cx).w, where);
      paths.expect(a.w == o.db_raw(w, p, q, Path::Formula), where);
      paths.expect(b.w == o.dbbar_raw(w, p, q, Path::Formula), where);
      if (k == n) paths.expect(c.w == o.d0_raw(w, p, q, Path::Formula), where);
      if (!pc) continue;
      BF as = A.dbs(x), bs = A.dbbs(x), cs = A.d0s(x);
      apaths.expect(as.w == o.db_star_raw(w, p, q, Path::Formula), where);
      apaths.expect(bs.w == o.dbbar_star_raw(w, p, q, Path::Formula), where);
      if (k == n + 1) apaths.expect(cs.w == o.d0_star_raw(w, p, q, Path::Formula), where);
      asq.zero(A.dbs(as).w, where);
      asq.zero(A.dbbs(bs).w, where);
      if (k != n + 1 && k != n + 2) aanti.zero(A.dbs(bs).w + A.dbbs(as).w, where);
      if (k == n + 1) {
        alow.zero(A.dbbs(as).w + A.dbs(cs).w, where);
        alow.zero(A.dbbs(cs).w + A.dbs(bs).w, where);
      }
      if (k == n + 2) {
        amid.zero(A.d0s(as).w + A.dbs(bs).w, where);
        amid.zero(A.dbbs(as).w + A.d0s(bs).w, where);
      }
      dsplit.zero(o.d_star_raw(w, k) - as.w - bs.w - cs.w, where);
    }
  });
  if (!pc)
    for (Acc* r : {&apaths, &asq, &aanti, &alow, &amid, &dsplit}) r->skip("Levi form is not definite");
  SuiteReport rep{"complex-identities", m.name(), {}};
  for (Acc* r : {&d2, &split, &sq, &anti, &low, &mid, &conj, &paths, &apaths, &asq, &aanti, &alow, &amid, &dsplit})
    rep.rows.push_back(r->take());
  return rep;
}

// ---- Hodge star, adjointness, Laplacians ---------------------------------------

SuiteReport hodge_suite(const Operators& o, const VerifyOptions& opt) {
  const Model& m = o.model();
  const Spaces& s = o.spaces();
  int n = o.n();
  Alg A(o);
  Acc sq("⋆⋆ = 1", "hodge-star-squared");
  Acc pair("ω ∧ ⋆τ̄ = (1/n!)⟨ω,τ⟩ θ∧dθⁿ", "hodge");
  Acc adj("G·M(D^*) = M(D)^†·G for D = d, ∂_b, ∂̄_b, ∂_0", "formal-adjoint");
  Acc kpsd("□_b is formally self-adjoint and nonnegative", "kernel-kohn-laplacian");
  Acc kker("ker □_b = ker ∂̄_b ∩ ker ∂̄_b^*", "kernel-kohn-laplacian");
  Acc kstar("□_b ⋆ω̄ = ⋆ conj(□_b ω)", "kohn-laplacian-hodge-star");
  Acc rpsd("Δ_b is formally self-adjoint and nonnegative", "kernel-rumin-laplacian");
  Acc rker("ker Δ_b = ker d ∩ ker d^*", "kernel-rumin-laplacian");
  Acc rstar("Δ_b ⋆ = ⋆ Δ_b", "rumin-hodge-star");
  Acc ppsd("Popovici Laplacian is formally self-adjoint and nonnegative", "popovici-kernel");
  Acc pker("ker of the Popovici Laplacian = {□_bω = 0, H of the correction terms = 0}", "popovici-kernel");
  Acc pstar("Popovici Laplacian commutes with conj ⋆", "popovici-hodge-star");
  SuiteReport rep{"hodge", m.name(), {}};
  auto all = {&sq, &pair, &adj, &kpsd, &kker, &kstar, &rpsd, &rker, &rstar, &ppsd, &pker, &pstar};
  if (!m.strictly_pseudoconvex()) {
    for (Acc* r : all) r->skip("Levi form is not definite");
    for (Acc* r : all) rep.rows.push_back(r->take());
    return rep;
  }
  Form vol = wedge(Form::theta(n), power(m.dtheta(), n)) * Scalar(mpq_class(1) / factorial(n));

  // Form-level identities.
  for_bidegrees(n, [&](int p, int q) {
    int k = p + q;
    Bidegree sb = s.star_bidegree(p, q), cb = conj_bidegree(n, p, q);
    auto forms = sample_forms(o, p, q, opt);
    for (std::size_t i = 0; i < forms.size(); ++i) {
      const Form& w = forms[i];
      auto where = [&] { return at(p, q, w); };
      Form sw = s.star(w, p, q);
      sq.expect(s.star(sw, sb.p, sb.q) == w, where);
      for (std::size_t j = 0; j < forms.size() && j < 4; ++j) {
        const Form& t = forms[j];
        pair.expect(wedge(w, s.star(t.conj(), cb.p, cb.q)) == vol * s.inner(w, t, p, q),
                    [&] { return where() + ", τ = " + t.str(); });
      }
      Bidegree scb = s.star_bidegree(cb.p, cb.q);
      Form lhs = o.kohn(s.star(w.conj(), cb.p, cb.q), scb.p, scb.q);
      Form rhs = s.star(o.kohn(w, p, q).conj(), cb.p, cb.q);
      kstar.zero(lhs - rhs, where);
      Form rl = o.rumin_laplacian(sw, 2 * n + 1 - k);
      rstar.zero(rl - star_degree(o, o.rumin_laplacian(w, k), k), where);
    }
  });

  // Matrix identities need invariant forms and a unimodular group, so that
  // integration by parts holds on the invariant complex.
  std::string why;
  if (!m.invariant()) why = "needs an invariant model";
  else if (!m.unimodular()) why = "L² adjointness needs a unimodular model";
  if (!why.empty()) {
    for (Acc* r : {&adj, &kpsd, &kker, &rpsd, &rker, &ppsd, &pker, &pstar}) r->skip(why);
    for (Acc* r : all) rep.rows.push_back(r->take());
    return rep;
  }

  auto check_adj = [&](const std::string& name, Bidegree from) {
    OperatorHandle h = make_handle(n, name, from.p, from.q);
    if (h.zero_target) return;
    OperatorHandle hs = make_handle(n, name + "*", h.to.p, h.to.q);
    if (!(hs.to == from)) return;
    Matrix M = o.matrix(h), N = o.matrix(hs);
    Matrix lhs = o.gram(from.p, from.q) * N, rhs = M.adjoint() * o.gram(h.to.p, h.to.q);
    adj.expect(lhs == rhs, [&] { return name + " at " + bstr(from.p, from.q); });
  };
  for_bidegrees(n, [&](int p, int q) {
    check_adj("db", {p, q});
    check_adj("dbbar", {p, q});
    if (p + q == n) check_adj("d0", {p, q});
    const InvariantBasis& B = o.basis(p, q);
    if (B.dim() == 0) return;
    Matrix G = o.gram(p, q);
    Matrix K = o.matrix(make_handle(n, "box_b", p, q));
    Matrix GK = G * K;
    kpsd.expect(GK == GK.adjoint() && is_positive_semidefinite(GK), [&] { return "□_b at " + bstr(p, q); });
    Matrix D = o.matrix(make_handle(n, "dbbar", p, q));
    Matrix Ds = q > 0 ? o.matrix(make_handle(n, "dbbar*", p, q)) : Matrix(0, B.dim());
    kker.expect(same_span(kernel_basis(K), kernel_of_stack({D, Ds}, B.dim()), B.dim()),
                [&] { return "at " + bstr(p, q); });

    Projector H = o.kohn_projector();
    Matrix Pm = o.matrix(make_handle(n, "popovici", p, q));
    Matrix GP = G * Pm;
    ppsd.expect(GP == GP.adjoint() && is_positive_semidefinite(GP), [&] { return "at " + bstr(p, q); });
    // Kernel characterization: □_b, then H applied to the two correction operators.
    int k = p + q;
    std::vector<Matrix> parts{K};
    auto Hmap = [&](Bidegree t, const std::function<Form(const Form&)>& f) {
      if (!valid_bidegree(n, t.p, t.q)) return;
      parts.push_back(assemble(o, {p, q}, t, [&](const Form& w) {
        Form y = f(w);
        return y.is_zero() ? y : H(y, t.p, t.q);
      }));
    };
    BF probe{Form(n), {p, q}};
    Bidegree tdb = A.db(probe).b, tdbs = A.dbs(probe).b;
    if (k == n) Hmap({p + 1, q}, [&](const Form& w) { return A.d0({w, {p, q}}).w; });
    else Hmap(tdb, [&](const Form& w) { return A.db({w, {p, q}}).w; });
    if (k == n + 1) Hmap({p - 1, q}, [&](const Form& w) { return A.d0s({w, {p, q}}).w; });
    else Hmap(tdbs, [&](const Form& w) { return A.dbs({w, {p, q}}).w; });
    pker.expect(same_span(kernel_basis(Pm), kernel_of_stack(parts, B.dim()), B.dim()),
                [&] { return "at " + bstr(p, q); });
    Bidegree sb = s.star_bidegree(p, q);
    Bidegree cs = conj_bidegree(n, sb.p, sb.q);
    for (const Form& w : B.elems) {
      Form lhs = o.popovici(s.star(w, p, q).conj(), cs.p, cs.q, H);
      Form rhs = s.star(o.popovici(w, p, q, H), p, q).conj();
      pstar.zero(lhs - rhs, [&] { return at(p, q, w); });
    }
  });
  for (int k = 0; k <= 2 * n + 1; ++k) {
    const InvariantBasis& B = o.basis_degree(k);
    if (B.dim() == 0) continue;
    Matrix G = o.gram_degree(k);
    OperatorHandle hd = make_degree_handle(n, "d", k);
    Matrix D = o.matrix(hd);
    if (!hd.zero_target) {
      Matrix Ds = o.matrix(make_degree_handle(n, "d*", k + 1));
      adj.expect(G * Ds == D.adjoint() * o.gram_degree(k + 1), [&] { return "d at degree " + std::to_string(k); });
    }
    Matrix L = o.matrix(make_degree_handle(n, "delta_b", k));
    Matrix GL = G * L;
    rpsd.expect(GL == GL.adjoint() && is_positive_semidefinite(GL), [&] { return "degree " + std::to_string(k); });
    Matrix Ds = k > 0 ? o.matrix(make_degree_handle(n, "d*", k)) : Matrix(0, B.dim());
    rker.expect(same_span(kernel_basis(L), kernel_of_stack({D, Ds}, B.dim()), B.dim()),
                [&] { return "degree " + std::to_string(k); });
  }
  for (Acc* r : all) rep.rows.push_back(r->take());
  return rep;
}

// ---- Weitzenböck-type identities -------------------------------------------------

SuiteReport weitzenbock_suite(const Operators& o, const VerifyOptions& opt) {
  const Model& m = o.model();
  const Spaces& s = o.spaces();
  int n = o.n();
  Alg A(o);
  const Scalar I = Scalar::I();
  Acc simple("∇̸̄^*(dθ∧ω) = dθ∧∇̸̄^*ω + i∇̸ω and ∇̸^*(dθ∧ω) = dθ∧∇̸^*ω − i∇̸̄ω", "onablas-simple-identities");
  Acc slash("∇̸̄∇̸^* + ∇̸^*∇̸̄ = (n−p−q)iA⨼̄ and ∇̸∇̸̄^* + ∇̸̄^*∇̸ = −(n−p−q)iA⨼", "slash-laplacian-add-one-to-q");
  Acc weitz("□̸ = (q/n)∇_b^*∇_b + ((n−q)/n)∇̄_b^*∇̄_b − R⨼⨼ − (q/n)Ric⨼ − ((n−q)/n)Ric⨼̄", "nablas-weitzenbock");
  Acc box0("□̸ = ∇̄_b^*∇̄_b − qi∇_0 − R⨼⨼ − Ric⨼̄", "Boxs-with-0");
  Acc fancy("∇̄_b^*∇̄_b − ∇_b^*∇_b = ni∇_0 − Ric⨼ + Ric⨼̄", "nabla0-fancy-commutator");
  Acc triple("∇̸̄^*∇̸^*∇̸̄ + ∇̸^*∇̸̄^*∇̸̄ + i∇_0∇̸^* = 0 on Ω^{p,0}, and its conjugate on Ω^{0,q}", "triple-commute");
  Acc cplx("∇̸^*∇̸^* = 0, ∇̸̄^*∇̸̄^* = 0, ∇̸^*∇̸̄^* + ∇̸̄^*∇̸^* = 0 on primitives", "nablasast-complex");
  Acc lef("∇̸̄ω = −i dθ∧∇̸^*ω and ∇̸̄^*∇̸̄ω = ∇̸∇̸^*ω − i dθ∧∇̸̄^*∇̸^*ω on P^{p,q}, p+q = n", "lefschetz-consequence");
  Acc srp("∂_b^*, ∂̄_b^*, ∂_b, ∂̄_b and the middle ⋆-formulas in terms of ∇̸", "sR-to-P");
  Acc boch("□_b = (q/n)∇^*∇ + ((n−q)/n)∇̄^*∇̄ − (∂̄∂̄^* + ∂∂^*)/(n−k+1) − R⨼⨼ − (q/n)Ric⨼ − ((n−q)/n)Ric⨼̄", "bochner-order2");
  Acc rord("((n−k+2)/(n−k))L_b in terms of ∇^*∇, ∇̄^*∇̄, ∂^*∂ + ∂̄^*∂̄ and curvature", "rumin-order2");
  Acc better("□_b with the improved-sign coefficients", "bochner-order2-better-sign");
  Acc dbd("(n−k)/(n−k+1) ∂_b∂̄_b^* + ∂̄_b^*∂_b = 0 and the k ≥ n+2 analogue, with conjugates", "dbdbbarstar");
  Acc dhor("∂_b^*∂_0 + ∂_0^*∂̄_b and its relatives in degrees n, n+1", "dhordbbarstar");
  Acc crit("∂̄_b^*∂_b = ∂_b^*∂̄_b = 0 on R^n and ∂̄_b∂_b^* = ∂_b∂̄_b^* = 0 on R^{n+1}", "critical-dbdbbarstar");
  Acc nh("⋆∂̄_b = (−1)^p i^{n²+1} ∂̄_b∂_b^*, ⋆∂_b = (−1)^p i^{n²−1} ∂_b∂̄_b^* on R^n", "n-hodge-dbbar");
  Acc nh0("⋆∂_0 = (−1)^p i^{n²}(∇_0 − i∂_b∂_b^* + i∂̄_b∂̄_b^*) on R^n", "n-hodge-dhor");
  Acc lcom("[L_b, ∂̄_b∂̄_b^*] = [L_b, ∂̄_b^*∂̄_b] = 0 for k ∉ {n, n+1}", "L-dbbardbbarast-commutator");
  Acc k2r("Δ_b = L_b", "kohn-laplacian-to-rumin-laplacian");

  SuiteReport rep{"weitzenbock", m.name(), {}};
  auto all = {&simple, &slash, &weitz, &box0, &fancy, &triple, &cplx, &lef, &srp, &boch, &rord,
              &better, &dbd, &dhor, &crit, &nh, &nh0, &lcom, &k2r};
  if (!m.strictly_pseudoconvex()) {
    for (Acc* r : all) r->skip("Levi form is not definite");
    for (Acc* r : all) rep.rows.push_back(r->take());
    return rep;
  }
  bool tf = m.torsion_free();
  auto over = [](int a, int b) { return frac(a, b); };

  // Ω^{p,q}
  for (int p = 0; p <= n; ++p)
    for (int q = 0; q <= n; ++q)
      for (const Form& x : sample_horizontal(o, p, q, opt)) {
        auto where = [&] { return at(p, q, x); };
        Form Lx = s.L(x);
        simple.zero(o.nablas_bar_star(Lx) - s.L(o.nablas_bar_star(x)) - o.nablas(x) * I, where);
        simple.zero(o.nablas_star(Lx) - s.L(o.nablas_star(x)) + o.nablas_bar(x) * I, where);
        int c = n - p - q;
        slash.zero(o.nablas_bar(o.nablas_star(x)) + o.nablas_star(o.nablas_bar(x)) - o.tor_anti(x) * (I * Scalar(c)),
                   where);
        slash.zero(o.nablas(o.nablas_bar_star(x)) + o.nablas_bar_star(o.nablas(x)) + o.tor_hol(x) * (I * Scalar(c)),
                   where);
        Form bs = o.boxs(x), rr = o.curv_RR(x), rh = o.ric_hol(x), ra = o.ric_anti(x);
        Form r1 = o.rough(x), r2 = o.rough_bar(x), t0 = o.nabla0(x);
        weitz.zero(bs - r1 * over(q, n) - r2 * over(n - q, n) + rr + rh * over(q, n) + ra * over(n - q, n), where);
        box0.zero(bs - r2 + t0 * (I * Scalar(q)) + rr + ra, where);
        fancy.zero(r2 - r1 - t0 * (I * Scalar(n)) + rh - ra, where);
        if (q == 0) {
          Form y = o.nablas_bar(x);
          triple.zero(o.nablas_bar_star(o.nablas_star(y)) + o.nablas_star(o.nablas_bar_star(y)) +
                          o.nabla0(o.nablas_star(x)) * I,
                      where);
        }
        if (p == 0) {
          Form y = o.nablas(x);
          triple.zero(o.nablas_star(o.nablas_bar_star(y)) + o.nablas_bar_star(o.nablas_star(y)) -
                          o.nabla0(o.nablas_bar_star(x)) * I,
                      where);
        }
      }

  // R^{p,q}
  for_bidegrees(n, [&](int p, int q) {
    int k = p + q;
    for (const Form& w : sample_forms(o, p, q, opt)) {
      auto where = [&] { return at(p, q, w); };
      BF x{w, {p, q}};
      Form h = w.horizontal();
      if (k <= n) {
        cplx.zero(o.nablas_star(o.nablas_star(h)), where);
        cplx.zero(o.nablas_bar_star(o.nablas_bar_star(h)), where);
        cplx.zero(o.nablas_star(o.nablas_bar_star(h)) + o.nablas_bar_star(o.nablas_star(h)), where);
        srp.expect(A.dbs(x).w.horizontal() == o.nablas_star(h), where);
        srp.expect(A.dbbs(x).w.horizontal() == o.nablas_bar_star(h), where);
      }
      if (k <= n - 1) {
        Scalar c = I * frac(1, n - k + 1);
        srp.expect(A.dbb(x).w.horizontal() == o.nablas_bar(h) + s.L(o.nablas_star(h)) * c, where);
        srp.expect(A.db(x).w.horizontal() == o.nablas(h) - s.L(o.nablas_bar_star(h)) * c, where);
      }
      if (k == n) {
        lef.zero(o.nablas_bar(h) + s.L(o.nablas_star(h)) * I, where);
        lef.zero(o.nablas_bar_star(o.nablas_bar(h)) - o.nablas(o.nablas_star(h)) +
                     s.L(o.nablas_bar_star(o.nablas_star(h))) * I,
                 where);
        Scalar f = sign_pow(p) * ipow(n * n);
        BF a = A.db(x), b = A.dbb(x), c = A.d0(x);
        Bidegree sa = s.star_bidegree(a.b.p, a.b.q), sbb = s.star_bidegree(b.b.p, b.b.q);
        Form star_a = a.w.is_zero() ? a.w : s.star(a.w, a.b.p, a.b.q);
        Form star_b = b.w.is_zero() ? b.w : s.star(b.w, b.b.p, b.b.q);
        Form star_c = c.w.is_zero() ? c.w : s.star(c.w, c.b.p, c.b.q);
        (void)sa;
        (void)sbb;
        srp.expect(star_a.horizontal() == (o.nablas(o.nablas_bar_star(h)) * (-I) + o.tor_hol(h)) * f, where);
        srp.expect(star_b.horizontal() == (o.nablas_bar(o.nablas_star(h)) * I + o.tor_anti(h)) * f, where);
        Form dh = o.nabla0(h) - o.nablas(o.nablas_star(h)) * I + o.nablas_bar(o.nablas_bar_star(h)) * I;
        srp.expect(star_c.horizontal() == dh * f, where);
        Form ddb = A.db(A.dbs(x)).w, dbbdbb = A.dbb(A.dbbs(x)).w;
        Form rhs0 = s.project_E(o.nabla0(h), p, q) - ddb * I + dbbdbb * I;
        nh0.zero(star_c - rhs0 * f, where);
        if (tf) {
          nh.zero(star_b - A.dbb(A.dbs(x)).w * (f * I), where);
          nh.zero(star_a - A.db(A.dbbs(x)).w * (f * ipow(-1)), where);
        }
      }
      if (k <= n - 1) {
        Form K = o.kohn(w, p, q).horizontal();
        Form DD = (A.dbb(A.dbbs(x)).w + A.db(A.dbs(x)).w).horizontal();
        Form r1 = o.rough(h), r2 = o.rough_bar(h), rr = o.curv_RR(h), rh = o.ric_hol(h), ra = o.ric_anti(h);
        boch.zero(K - r1 * over(q, n) - r2 * over(n - q, n) + DD * frac(1, n - k + 1) + rr + rh * over(q, n) +
                      ra * over(n - q, n),
                  where);
        Form Lb = o.L_b(w, p, q).horizontal();
        Form SS = (A.dbs(A.db(x)).w + A.dbbs(A.dbb(x)).w).horizontal();
        int a1 = n - p + q, a2 = n - q + p;
        rord.zero(Lb * frac(n - k + 2, n - k) - r1 * over(a1, n) - r2 * over(a2, n) - SS * frac(2, n - k) +
                      rr * Scalar(2) + rh * over(a1, n) + ra * over(a2, n),
                  where);
        long den = static_cast<long>(n) * (n - k + 2);
        Scalar c1 = frac(static_cast<long>(q - 1) * (n - k), den);
        Scalar c2 = frac(static_cast<long>(n - q + 1) * (n - k), den);
        better.zero(K - r1 * c1 - r2 * c2 - SS * frac(1, n - k + 2) + rr * frac(n - k, n - k + 2) + rh * c1 + ra * c2,
                    where);
      }
      if (!tf) continue;
      if (k <= n - 1) {
        Scalar c = frac(n - k, n - k + 1);
        dbd.zero(A.db(A.dbbs(x)).w * c + A.dbbs(A.db(x)).w, where);
        dbd.zero(A.dbb(A.dbs(x)).w * c + A.dbs(A.dbb(x)).w, where);
      }
      if (k >= n + 2) {
        Scalar c = frac(k - n - 1, k - n);
        dbd.zero(A.dbs(A.dbb(x)).w * c + A.dbb(A.dbs(x)).w, where);
        dbd.zero(A.dbbs(A.db(x)).w * c + A.db(A.dbbs(x)).w, where);
      }
      if (k == n) {
        BF a = A.dbs(x);
        dhor.zero(A.dbs(A.d0(x)).w + A.d0s(A.dbb(x)).w + A.dbb(A.dbs(A.db(a))).w + A.dbb(A.dbbs(A.dbb(a))).w, where);
        BF b = A.dbbs(x);
        dhor.zero(A.dbbs(A.d0(x)).w + A.d0s(A.db(x)).w + A.db(A.dbbs(A.dbb(b))).w + A.db(A.dbs(A.db(b))).w, where);
        crit.zero(A.dbbs(A.db(x)).w, where);
        crit.zero(A.dbs(A.dbb(x)).w, where);
      }
      if (k == n + 1) {
        BF a = A.db(x);
        dhor.zero(A.db(A.d0s(x)).w + A.d0(A.dbbs(x)).w + A.dbbs(A.db(A.dbs(a))).w + A.dbbs(A.dbb(A.dbbs(a))).w, where);
        BF b = A.dbb(x);
        dhor.zero(A.dbb(A.d0s(x)).w + A.d0(A.dbs(x)).w + A.dbs(A.dbb(A.dbbs(b))).w + A.dbs(A.db(A.dbs(b))).w, where);
        crit.zero(A.dbb(A.dbs(x)).w, where);
        crit.zero(A.db(A.dbbs(x)).w, where);
      }
      if (k != n && k != n + 1) {
        BF u = A.dbb(A.dbbs(x)), v = A.dbbs(A.dbb(x));
        BF Lx = A.Lb(x);
        lcom.zero(A.Lb(u).w - A.dbb(A.dbbs(Lx)).w, where);
        lcom.zero(A.Lb(v).w - A.dbbs(A.dbb(Lx)).w, where);
      }
      k2r.zero(o.rumin_laplacian(w, k) - o.L_b(w, p, q), where);
    }
  });
  if (!tf)
    for (Acc* r : {&dbd, &dhor, &crit, &nh, &lcom, &k2r})
      r->skip("exact only for torsion-free contact forms");
  for (Acc* r : all) rep.rows.push_back(r->take());
  return rep;
}

// ---- commutators of the Tanaka–Webster connection ----------------------------------

SuiteReport commutator_suite(const Operators& o, const VerifyOptions& opt) {
  const Model& m = o.model();
  int n = o.n();
  const Scalar I = Scalar::I();
  const Matrix& h = m.h();
  const Matrix& hu = m.hup();
  const Matrix& T = m.torsion();
  Tensor dA = m.nabla(m.torsion_tensor());
  auto H = [&](int a) { return dir_hol(a); };
  auto B = [&](int b) { return dir_anti(n, b); };
  // A_β̄^μ = h^{μs̄} conj(A_{βs}), A_γ^ν̄ = A_{γμ} h^{μν̄}
  auto Abar_up = [&](int b, int mu) {
    Scalar t;
    for (int s = 1; s <= n; ++s) t += T(b - 1, s - 1).conj() * hu(mu - 1, s - 1);
    return t;
  };
  auto A_up = [&](int g, int nu) {
    Scalar t;
    for (int mu = 1; mu <= n; ++mu) t += T(g - 1, mu - 1) * hu(mu - 1, nu - 1);
    return t;
  };
  Acc f1("[∇_β̄, ∇_α] f = i h_{αβ̄} ∇_0 f", "commutators");
  Acc f2("[∇_γ, ∇_α] f = 0", "commutators");
  Acc f3("[∇_α, ∇_0] f = A_{αμ} f^μ", "commutators");
  Acc w1("[∇_β̄, ∇_α] ω_γ = i h_{αβ̄} ∇_0 ω_γ + R_{αβ̄γ}^μ ω_μ", "commutators");
  Acc w2("[∇_α, ∇_γ] ω_ρ = i A_{αρ} ω_γ − i A_{γρ} ω_α", "commutators");
  Acc w3("[∇_β̄, ∇_σ̄] ω_α = i h_{ασ̄} A_β̄^μ ω_μ − i h_{αβ̄} A_σ̄^μ ω_μ", "commutators");
  Acc w4("[∇_γ, ∇_0] ω_α = A_γ^ν̄ ∇_ν̄ ω_α − ω_μ ∇^μ A_{αγ}", "commutators");
  Acc w5("[∇_β̄, ∇_0] ω_α = A_β̄^μ ∇_μ ω_α + ω_μ ∇_α A_β̄^μ", "commutators");

  std::vector<Poly> fs;
  if (m.invariant()) fs = {Poly(1)};
  else fs = sample_coefficients(n, opt.max_poly_degree);

  auto comm = [&](int b, int a, const Form& w) { return m.nabla2(b, a, w) - m.nabla2(a, b, w); };
  auto coef = [&](const Form& w, int g) { return w.coeff(dir_key(n, dir_hol(g))); };
  auto fcoef = [&](const Form& w) { return w.coeff(Key{}); };

  for (const Poly& f : fs) {
    Form F = Form::scalar(n, f);
    auto where = [&] { return "f = " + f.str(); };
    Poly f0 = fcoef(m.nabla(0, F));
    for (int a = 1; a <= n; ++a)
      for (int b = 1; b <= n; ++b) {
        f1.expect(fcoef(comm(B(b), H(a), F)) == f0 * (I * h(a - 1, b - 1)), where);
        f2.expect(fcoef(comm(H(b), H(a), F)).is_zero(), where);
      }
    for (int a = 1; a <= n; ++a) {
      Poly rhs;
      for (int mu = 1; mu <= n; ++mu)
        for (int nu = 1; nu <= n; ++nu) {
          Scalar c = T(a - 1, mu - 1) * hu(mu - 1, nu - 1);
          if (!c.is_zero()) rhs += fcoef(m.nabla(B(nu), F)) * c;
        }
      f3.expect(fcoef(comm(H(a), 0, F)) == rhs, where);
    }
    // (1,0)-forms f θ^γ
    for (int g0 = 1; g0 <= n; ++g0) {
      Form w = Form::hol(n, g0) * f;
      auto wh = [&] { return "ω = " + w.str(); };
      Form w0 = m.nabla(0, w);
      for (int a = 1; a <= n; ++a)
        for (int b = 1; b <= n; ++b) {
          Form c1 = comm(B(b), H(a), w);
          Form c2 = comm(H(a), H(b), w);
          Form c3 = comm(B(a), B(b), w);
          for (int g = 1; g <= n; ++g) {
            Poly rhs = coef(w0, g) * (I * h(a - 1, b - 1));
            for (int mu = 1; mu <= n; ++mu) {
              Scalar r;
              for (int s = 1; s <= n; ++s) r += m.R(a, b, g, s) * hu(mu - 1, s - 1);
              if (!r.is_zero()) rhs += coef(w, mu) * r;
            }
            w1.expect(coef(c1, g) == rhs, wh);
            // [∇_α, ∇_γ] with γ := b, component ρ := g
            Poly r2 = coef(w, b) * (I * T(a - 1, g - 1)) - coef(w, a) * (I * T(b - 1, g - 1));
            w2.expect(coef(c2, g) == r2, wh);
            // [∇_β̄, ∇_σ̄] with β := a, σ := b, component α := g
            Poly r3;
            for (int mu = 1; mu <= n; ++mu)
              r3 += coef(w, mu) * (I * (h(g - 1, b - 1) * Abar_up(a, mu) - h(g - 1, a - 1) * Abar_up(b, mu)));
            w3.expect(coef(c3, g) == r3, wh);
          }
        }
      for (int g = 1; g <= n; ++g) {
        Form c4 = comm(H(g), 0, w);
        Form c5 = comm(B(g), 0, w);
        for (int a = 1; a <= n; ++a) {
          Poly r4, r5;
          for (int nu = 1; nu <= n; ++nu) {
            Scalar t = A_up(g, nu);
            if (!t.is_zero()) r4 += coef(m.nabla(B(nu), w), a) * t;
          }
          for (int mu = 1; mu <= n; ++mu)
            for (int nu = 1; nu <= n; ++nu) {
              const Scalar& u = hu(mu - 1, nu - 1);
              if (!u.is_zero()) r4 -= coef(w, mu) * dA.get({H(a), H(g), B(nu)}) * u;
            }
          for (int mu = 1; mu <= n; ++mu) {
            Scalar t = Abar_up(g, mu);
            if (!t.is_zero()) r5 += coef(m.nabla(H(mu), w), a) * t;
            for (int s = 1; s <= n; ++s) {
              const Scalar& u = hu(mu - 1, s - 1);
              if (!u.is_zero()) r5 += coef(w, mu) * dA.get({B(g), B(s), H(a)}) * u;
            }
          }
          w4.expect(coef(c4, a) == r4, wh);
          w5.expect(coef(c5, a) == r5, wh);
        }
      }
    }
  }
  SuiteReport rep{"commutators", m.name(), {}};
  for (Acc* r : {&f1, &f2, &f3, &w1, &w2, &w3, &w4, &w5}) rep.rows.push_back(r->take());
  return rep;
}

// ---- A∞ structure -------------------------------------------------------------------

using SV = std::map<int, Scalar>;

void axpy(SV& acc, const SV& x, const Scalar& c) {
  for (const auto& [i, v] : x) {
    Scalar& slot = acc[i];
    slot += v * c;
    if (slot.is_zero()) acc.erase(i);
  }
}

// Structure constants of m1, m2, m3 on the union of the invariant R^{p,q} bases.
class Structure {
 public:
  Structure(const Operators& o, bool bigraded) : o_(o), s_(o.spaces()), n_(o.n()), bigraded_(bigraded) {
    for_bidegrees(n_, [&](int p, int q) {
      const InvariantBasis& b = o.basis(p, q);
      offset_[{p, q}] = static_cast<int>(elems_.size());
      for (const Form& w : b.elems) {
        elems_.push_back(w);
        deg_.push_back(p + q);
        bideg_.push_back({p, q});
      }
    });
    N_ = static_cast<int>(elems_.size());
    m1_.resize(N_);
    m2_.resize(static_cast<std::size_t>(N_) * N_);
    m3_.resize(static_cast<std::size_t>(N_) * N_ * N_);
    for (int i = 0; i < N_; ++i) {
      const Form& w = elems_[i];
      Bidegree b = bideg_[i];
      m1_[i] = coords(bigraded_ ? o.dbbar_raw(w, b.p, b.q, P) : o.model().d(w));
    }
    for (int i = 0; i < N_; ++i)
      for (int j = 0; j < N_; ++j) {
        if (deg_[i] + deg_[j] > 2 * n_ + 1) continue;
        Form x = o.m2(elems_[i], elems_[j]);
        if (bigraded_ && !x.is_zero()) {
          Bidegree t{bideg_[i].p + bideg_[j].p, bideg_[i].q + bideg_[j].q};
          x = valid_bidegree(n_, t.p, t.q) ? s_.pi_pq(x, t.p, t.q) : Form(n_);
        }
        m2_[i * N_ + j] = coords(x);
      }
    for (int i = 0; i < N_; ++i)
      for (int j = 0; j < N_; ++j)
        for (int l = 0; l < N_; ++l) {
          if (deg_[i] + deg_[j] + deg_[l] - 1 > 2 * n_ + 1) continue;
          m3_[(static_cast<std::size_t>(i) * N_ + j) * N_ + l] = coords(o.m3(elems_[i], elems_[j], elems_[l]));
        }
  }

  int N() const { return N_; }
  int deg(int i) const { return deg_[i]; }
  Bidegree bideg(int i) const { return bideg_[i]; }
  const Form& elem(int i) const { return elems_[i]; }
  const SV& m(const std::vector<int>& xs) const {
    static const SV empty;
    switch (xs.size()) {
      case 1: return m1_[xs[0]];
      case 2: return m2_[xs[0] * N_ + xs[1]];
      case 3: return m3_[(static_cast<std::size_t>(xs[0]) * N_ + xs[1]) * N_ + xs[2]];
      default: return empty;
    }
  }
  // Block of basis indices belonging to R^{p,q}.
  std::pair<int, int> block(Bidegree b) const {
    auto it = offset_.find(b);
    if (it == offset_.end()) return {0, 0};
    return {it->second, it->second + static_cast<int>(o_.basis(b.p, b.q).dim())};
  }

 private:
  SV coords(const Form& w) const {
    SV out;
    if (w.is_zero()) return out;
    for (const Form& c : components(s_, w)) {
      Bidegree b = rumin_bidegree(s_, c);
      Vector v = o_.basis(b.p, b.q).coords(c, s_);
      int off = offset_.at(b);
      for (std::size_t i = 0; i < v.size(); ++i)
        if (!v[i].is_zero()) out[off + static_cast<int>(i)] = v[i];
    }
    return out;
  }

  const Operators& o_;
  const Spaces& s_;
  int n_;
  bool bigraded_;
  int N_ = 0;
  std::vector<Form> elems_;
  std::vector<int> deg_;
  std::vector<Bidegree> bideg_;
  std::map<Bidegree, int> offset_;
  std::vector<SV> m1_, m2_, m3_;
};

std::string tuple_str(const Structure& S, const std::vector<int>& t) {
  std::string out = "(";
  for (std::size_t i = 0; i < t.size(); ++i) out += (i ? ", " : "") + S.elem(t[i]).str();
  return out + ")";
}

void enumerate(int N, int len, std::vector<int>& cur, const std::function<void()>& f) {
  if (static_cast<int>(cur.size()) == len) return f();
  for (int i = 0; i < N; ++i) {
    cur.push_back(i);
    enumerate(N, len, cur, f);
    cur.pop_back();
  }
}

// Exhaustive residual of the arity-k relation over all basis tuples.
void ainf_exhaustive(const Structure& S, int k, Acc& row) {
  int N = S.N();
  std::map<std::vector<int>, SV> res;
  for (int s = 1; s <= std::min(3, k); ++s)
    for (int r = 0; r + s <= k; ++r) {
      int t = k - s - r, j = r + t + 1;
      if (j > 3) continue;
      Scalar sign0 = sign_pow(r + s * t);
      int ms_deg = 2 - s;
      std::vector<int> inner;
      enumerate(N, s, inner, [&] {
        const SV& y = S.m(inner);
        if (y.empty()) return;
        std::vector<int> outer;
        enumerate(N, r + t, outer, [&] {
          int pre = 0;
          for (int a = 0; a < r; ++a) pre += S.deg(outer[a]);
          Scalar sg = sign0 * sign_pow(static_cast<long>(ms_deg) * pre);
          std::vector<int> full(outer.begin(), outer.begin() + r);
          full.insert(full.end(), inner.begin(), inner.end());
          full.insert(full.end(), outer.begin() + r, outer.end());
          for (const auto& [c, v] : y) {
            std::vector<int> arg(outer.begin(), outer.begin() + r);
            arg.push_back(c);
            arg.insert(arg.end(), outer.begin() + r, outer.end());
            const SV& z = S.m(arg);
            if (!z.empty()) axpy(res[full], z, sg * v);
          }
        });
      });
    }
  std::size_t total = 1;
  for (int i = 0; i < k; ++i) total *= static_cast<std::size_t>(N);
  std::size_t bad = 0;
  const std::vector<int>* first = nullptr;
  for (const auto& [tup, v] : res)
    if (!v.empty() && bad++ == 0) first = &tup;
  for (std::size_t i = 0; i < total - bad; ++i) row.expect(true, [] { return std::string(); });
  for (std::size_t i = 0; i < bad; ++i) row.expect(false, [&] { return "tuple " + tuple_str(S, *first); });
}

void balanced_exhaustive(const Structure& S, Acc& b11, Acc& b12, Acc& b21) {
  int N = S.N();
  for (int i = 0; i < N; ++i)
    for (int j = 0; j < N; ++j) {
      SV r = S.m({i, j});
      axpy(r, S.m({j, i}), -sign_pow(S.deg(i) * S.deg(j)));
      b11.expect(r.empty(), [&] { return "pair " + tuple_str(S, {i, j}); });
    }
  for (int i = 0; i < N; ++i)
    for (int j = 0; j < N; ++j)
      for (int l = 0; l < N; ++l) {
        int a = S.deg(i), b = S.deg(j), c = S.deg(l);
        SV r = S.m({i, j, l});
        axpy(r, S.m({j, i, l}), -sign_pow(a * b));
        axpy(r, S.m({j, l, i}), sign_pow(a * (b + c)));
        b12.expect(r.empty(), [&] { return "triple " + tuple_str(S, {i, j, l}); });
        SV u = S.m({i, j, l});
        axpy(u, S.m({i, l, j}), -sign_pow(b * c));
        axpy(u, S.m({l, i, j}), sign_pow(c * (a + b)));
        b21.expect(u.empty(), [&] { return "triple " + tuple_str(S, {i, j, l}); });
      }
}

// Direct evaluation on forms, for polynomial samples.
class Direct {
 public:
  Direct(const Operators& o, bool bigraded) : o_(o), s_(o.spaces()), bigraded_(bigraded) {}

  Form m(const std::vector<Form>& xs) const {
    for (const Form& x : xs)
      if (x.is_zero()) return Form(o_.n());
    switch (xs.size()) {
      case 1: return m1(xs[0]);
      case 2: return m2(xs[0], xs[1]);
      case 3: return o_.m3(xs[0], xs[1], xs[2]);
      default: return Form(o_.n());
    }
  }

  Form residual(const std::vector<Form>& xs) const {
    int k = static_cast<int>(xs.size());
    Form out(o_.n());
    for (int s = 1; s <= std::min(3, k); ++s)
      for (int r = 0; r + s <= k; ++r) {
        int t = k - s - r;
        if (r + t + 1 > 3) continue;
        std::vector<Form> inner(xs.begin() + r, xs.begin() + r + s);
        Form y = m(inner);
        if (y.is_zero()) continue;
        int pre = 0;
        for (int a = 0; a < r; ++a) pre += xs[a].degree();
        std::vector<Form> arg(xs.begin(), xs.begin() + r);
        arg.push_back(y);
        arg.insert(arg.end(), xs.begin() + r + s, xs.end());
        Form z = m(arg);
        if (!z.is_zero()) out += z * (sign_pow(r + s * t) * sign_pow(static_cast<long>(2 - s) * pre));
      }
    return out;
  }

 private:
  Form m1(const Form& x) const {
    if (!bigraded_) return o_.model().d(x);
    Form out(o_.n());
    for (const Form& c : components(s_, x)) {
      Bidegree b = rumin_bidegree(s_, c);
      out += o_.dbbar_raw(c, b.p, b.q, P);
    }
    return out;
  }
  Form m2(const Form& x, const Form& y) const {
    if (!bigraded_) return o_.m2(x, y);
    Form out(o_.n());
    for (const Form& a : components(s_, x))
      for (const Form& b : components(s_, y)) {
        Bidegree ba = rumin_bidegree(s_, a), bb = rumin_bidegree(s_, b);
        Bidegree t{ba.p + bb.p, ba.q + bb.q};
        if (!valid_bidegree(o_.n(), t.p, t.q)) continue;
        Form z = o_.m2(a, b);
        if (!z.is_zero()) out += s_.pi_pq(z, t.p, t.q);
      }
    return out;
  }

  const Operators& o_;
  const Spaces& s_;
  bool bigraded_;
};

SuiteReport a_infinity_suite(const Operators& o, const VerifyOptions& opt) {
  const Model& m = o.model();
  int n = o.n();
  SuiteReport rep{"a-infinity", m.name(), {}};
  for (bool bigraded : {false, true}) {
    std::string tag = bigraded ? " (m1 = ∂̄_b, m2 = ⩕)" : " (m1 = d, m2 = ⋏)";
    std::string anchor = bigraded ? "bigraded-rumin-a-infinity" : "rumin-a-infinity";
    std::vector<Acc> rel;
    for (int k = 1; k <= 5; ++k) rel.emplace_back("A∞ relation, arity " + std::to_string(k) + tag, anchor);
    Acc b11("m2∘μ_{1,1} = 0" + tag, "balanced-a-infinity-algebra");
    Acc b12("m3∘μ_{1,2} = 0" + tag, "balanced-a-infinity-algebra");
    Acc b21("m3∘μ_{2,1} = 0" + tag, "balanced-a-infinity-algebra");
    if (m.invariant() && n <= 2) {
      Structure S(o, bigraded);
      for (int k = 1; k <= 5; ++k) ainf_exhaustive(S, k, rel[k - 1]);
      balanced_exhaustive(S, b11, b12, b21);
      if (!bigraded) {
        Acc van("m3 = 0 when |ω|+|τ|+|η| ≤ n+1 or a factor has degree ≥ n+1", "A-infinity-m3-vanishing");
        Acc img("m3(R^{p,q}, R^{r,s}, R^{t,u}) ⊂ R^{p+r+t, q+s+u−1}", "m3-image");
        int N = S.N();
        for (int i = 0; i < N; ++i)
          for (int j = 0; j < N; ++j)
            for (int l = 0; l < N; ++l) {
              const SV& y = S.m({i, j, l});
              int di = S.deg(i), dj = S.deg(j), dl = S.deg(l);
              auto where = [&] { return tuple_str(S, {i, j, l}); };
              if (di + dj + dl <= n + 1 || std::max({di, dj, dl}) >= n + 1) van.expect(y.empty(), where);
              Bidegree a = S.bideg(i), b = S.bideg(j), c = S.bideg(l);
              Bidegree t{a.p + b.p + c.p, a.q + b.q + c.q - 1};
              auto [lo, hi] = S.block(t);
              bool inside = true;
              for (const auto& [idx, v] : y) inside = inside && idx >= lo && idx < hi;
              img.expect(inside, where);
            }
        rep.rows.push_back(van.take());
        rep.rows.push_back(img.take());
      }
    } else {
      Direct D(o, bigraded);
      std::vector<Form> pool;
      for_bidegrees(n, [&](int p, int q) {
        auto f = sample_forms(o, p, q, opt);
        for (std::size_t i = 0; i < f.size() && i < 2; ++i) pool.push_back(f[i]);
      });
      std::size_t N = pool.size();
      for (int k = 1; k <= 5; ++k) {
        std::size_t total = 1;
        for (int i = 0; i < k; ++i) total *= N;
        std::size_t count = std::min(total, opt.tuples);
        // Deterministic stride through the tuple space.
        std::size_t stride = total <= opt.tuples ? 1 : total / opt.tuples;
        for (std::size_t c = 0; c < count; ++c) {
          std::size_t code = c * stride;
          std::vector<Form> xs;
          for (int i = 0; i < k; ++i) {
            xs.push_back(pool[code % N]);
            code /= N;
          }
          Form r = D.residual(xs);
          rel[k - 1].zero(r, [&] {
            std::string t;
            for (const Form& x : xs) t += (t.empty() ? "(" : ", ") + x.str();
            return "tuple " + t + ")";
          });
        }
      }
      for (std::size_t i = 0; i < N; ++i)
        for (std::size_t j = 0; j < N; ++j) {
          const Form &a = pool[i], &b = pool[j];
          int da = a.degree(), db = b.degree();
          b11.zero(D.m({a, b}) - D.m({b, a}) * sign_pow(da * db), [&] { return a.str() + " ⊗ " + b.str(); });
          for (std::size_t l = 0; l < N; l += 2) {
            const Form& c = pool[l];
            int dc = c.degree();
            auto where = [&] { return a.str() + " ⊗ " + b.str() + " ⊗ " + c.str(); };
            b12.zero(D.m({a, b, c}) - D.m({b, a, c}) * sign_pow(da * db) + D.m({b, c, a}) * sign_pow(da * (db + dc)),
                     where);
            b21.zero(D.m({a, b, c}) - D.m({a, c, b}) * sign_pow(db * dc) + D.m({c, a, b}) * sign_pow(dc * (da + db)),
                     where);
          }
        }
    }
    for (Acc& r : rel) rep.rows.push_back(r.take());
    rep.rows.push_back(b11.take());
    rep.rows.push_back(b12.take());
    rep.rows.push_back(b21.take());
  }
  return rep;
}

}  // namespace

// ---- public helpers -------------------------------------------------------------

std::vector<Poly> sample_coefficients(int n, int max_degree) {
  std::vector<int> vars;
  for (int a = 1; a <= n; ++a) vars.push_back(var_z(a));
  for (int a = 1; a <= n; ++a) vars.push_back(var_zbar(a));
  vars.push_back(var_t());
  std::vector<Poly> out;
  std::function<void(std::size_t, int, Monomial&)> rec = [&](std::size_t v, int left, Monomial& mono) {
    if (v == vars.size()) {
      out.push_back(Poly::monomial(mono, Scalar(1)));
      return;
    }
    for (int e = 0; e <= left; ++e) {
      mono[vars[v]] = static_cast<std::uint8_t>(e);
      rec(v + 1, left - e, mono);
    }
    mono[vars[v]] = 0;
  };
  Monomial mono{};
  rec(0, max_degree, mono);
  std::stable_sort(out.begin(), out.end(),
                   [](const Poly& a, const Poly& b) { return a.total_degree() < b.total_degree(); });
  return out;
}

std::vector<Form> sample_forms(const Operators& o, int p, int q, const VerifyOptions& opt) {
  if (!valid_bidegree(o.n(), p, q)) return {};
  if (o.model().invariant()) return o.basis(p, q).elems;
  const Spaces& s = o.spaces();
  int n = o.n(), k = p + q;
  auto coeffs = sample_coefficients(n, opt.max_poly_degree);
  const auto& keys = s.keys(k);
  std::size_t C = coeffs.size();
  std::vector<Form> out;
  for (std::size_t i = 0; out.size() < opt.samples && i < 8 * opt.samples + keys.size(); ++i) {
    const Key& key = keys[i % keys.size()];
    // Two monomials of different degree, so the samples are not homogeneous.
    Poly f = coeffs[(7 * i + 3) % C] + coeffs[(5 * i + 1) % C] * Scalar(mpq_class(static_cast<long>(i % 3) + 1, 2));
    Form w = s.pi_pq(s.pi(Form::monomial(n, key, f)), p, q);
    if (!w.is_zero()) out.push_back(std::move(w));
  }
  return out;
}

std::vector<Form> sample_horizontal(const Operators& o, int p, int q, const VerifyOptions& opt) {
  int n = o.n();
  auto keys = keys_of_bidegree(n, p, q, false);
  std::vector<Form> out;
  if (keys.empty()) return out;
  if (o.model().invariant()) {
    for (const Key& k : keys) out.push_back(Form::monomial(n, k));
    return out;
  }
  auto coeffs = sample_coefficients(n, opt.max_poly_degree);
  std::size_t C = coeffs.size();
  for (std::size_t i = 0; i < opt.samples; ++i) {
    Form w = Form::monomial(n, keys[i % keys.size()], coeffs[(7 * i + 3) % C] + coeffs[(3 * i + 2) % C] * Scalar::I());
    if (keys.size() > 1) w += Form::monomial(n, keys[(i + 1) % keys.size()], coeffs[(11 * i + 5) % C]);
    out.push_back(std::move(w));
  }
  return out;
}

Bidegree rumin_bidegree(const Spaces& s, const Form& w) {
  if (w.is_zero()) throw BidegreeMismatch("the zero form has no bidegree");
  int k = w.degree(), n = s.n();
  Form h = k <= n ? w.horizontal() : w.contract_reeb();
  Bidegree b{-1, -1};
  for (const auto& [key, c] : h.terms()) {
    (void)c;
    Bidegree t{key.p(), key.q()};
    if (b.p < 0) b = t;
    else if (!(b == t)) throw BidegreeMismatch("form has several bidegrees: " + w.str());
  }
  if (b.p < 0) throw BidegreeMismatch("form is not a Rumin form: " + w.str());
  if (k > n) b.p += 1;
  return b;
}

Form a_infinity_residual(const Operators& ops, const std::vector<Form>& xs, bool bigraded) {
  return Direct(ops, bigraded).residual(xs);
}

// ---- cohomological suites --------------------------------------------------

namespace {

SuiteReport les_suite(const Operators& ops) {
  const Model& m = ops.model();
  SuiteReport rep{"les", m.name(), {}};
  Acc ex("im = ker at every node of the long exact sequence", "long-exact-sequence");
  Acc cz("consecutive maps compose to zero", "long-exact-sequence");
  if (!m.invariant()) {
    ex.skip("skipped: needs an invariant model");
    cz.skip("skipped: needs an invariant model");
  } else {
    Cohomology c(ops);
    for (const ExactnessNode& e : c.long_exact_sequence()) {
      ex.expect(e.exact(), [&] {
        return e.label + ": dim " + std::to_string(e.dim) + ", rank in " + std::to_string(e.rank_in) + ", rank out " +
               std::to_string(e.rank_out);
      });
      cz.expect(e.composition_zero, [&] { return e.label; });
    }
  }
  rep.rows.push_back(ex.take());
  rep.rows.push_back(cz.take());
  return rep;
}

SuiteReport dualities_suite(const Operators& ops) {
  const Model& m = ops.model();
  SuiteReport rep{"dualities", m.name(), {}};
  if (!m.invariant()) {
    Acc a("Serre, Poincaré and E_2 dualities", "serre");
    a.skip("skipped: needs an invariant model");
    rep.rows.push_back(a.take());
    return rep;
  }
  Cohomology c(ops);
  for (const CheckLine& l : c.dualities()) {
    Acc a(l.name, l.anchor);
    if (l.skipped) a.skip(l.detail);
    else a.expect(l.ok, [&] { return l.detail; });
    rep.rows.push_back(a.take());
  }
  return rep;
}

}  // namespace

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names{"complex-identities", "a-infinity", "hodge", "weitzenbock",
                                              "commutators",        "les",        "dualities"};
  return names;
}

SuiteReport run_suite(const Operators& ops, const std::string& suite, const VerifyOptions& opt) {
  if (suite == "complex-identities") return complex_identities(ops, opt);
  if (suite == "a-infinity") return a_infinity_suite(ops, opt);
  if (suite == "hodge") return hodge_suite(ops, opt);
  if (suite == "weitzenbock") return weitzenbock_suite(ops, opt);
  if (suite == "commutators") return commutator_suite(ops, opt);
  if (suite == "les") return les_suite(ops);
  if (suite == "dualities") return dualities_suite(ops);
  throw std::invalid_argument("unknown suite " + suite);
}

}  // namespace rumin
