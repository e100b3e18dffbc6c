#include "rumin/operators.hpp"

#include <cstdlib>
#include <thread>

#include "rumin/errors.hpp"

namespace rumin {

namespace {

std::string bideg_str(int p, int q) { return "(" + std::to_string(p) + "," + std::to_string(q) + ")"; }

Scalar frac(long a, long b) { return Scalar(mpq_class(a, b)); }
Scalar inv_fact(int k) { return Scalar(mpq_class(1) / factorial(k)); }

Bidegree target_db(int n, int p, int q) { return p + q == n ? Bidegree{p + 2, q - 1} : Bidegree{p + 1, q}; }
Bidegree target_db_star(int n, int p, int q) {
  return p + q == n + 1 ? Bidegree{p - 2, q + 1} : Bidegree{p - 1, q};
}

}  // namespace

bool valid_bidegree(int n, int p, int q) {
  int k = p + q;
  if (p < 0 || q < 0 || q > n || p > n + 1 || k > 2 * n + 1) return false;
  return k <= n || p >= 1;
}

Bidegree conj_bidegree(int n, int p, int q) {
  if (p + q <= n) return {q, p};
  return {q + 1, p - 1};
}

OperatorHandle make_handle(int n, const std::string& name, int p, int q) {
  if (!valid_bidegree(n, p, q)) throw BadBidegree("no Rumin space of bidegree " + bideg_str(p, q));
  int k = p + q;
  OperatorHandle h;
  h.name = name;
  h.from = {p, q};
  h.k_from = k;
  if (name == "db") h.to = target_db(n, p, q);
  else if (name == "dbbar") h.to = {p, q + 1};
  else if (name == "d0") {
    if (k != n) throw MiddleDegreeOnly("d0 is defined on p+q = n only, got " + bideg_str(p, q));
    h.to = {p + 1, q};
  } else if (name == "db*") h.to = target_db_star(n, p, q);
  else if (name == "dbbar*") h.to = {p, q - 1};
  else if (name == "d0*") {
    if (k != n + 1) throw MiddleDegreeOnly("d0* is defined on p+q = n+1 only, got " + bideg_str(p, q));
    h.to = {p - 1, q};
  } else if (name == "box_b" || name == "box_b_bar" || name == "L_b" || name == "popovici" || name == "boxs")
    h.to = {p, q};
  else
    throw BadBidegree("unknown bigraded operator " + name);
  h.k_to = h.to.k();
  h.zero_target = !valid_bidegree(n, h.to.p, h.to.q);
  return h;
}

OperatorHandle make_degree_handle(int n, const std::string& name, int k) {
  if (k < 0 || k > 2 * n + 1) throw BadBidegree("no Rumin space of degree " + std::to_string(k));
  OperatorHandle h;
  h.name = name;
  h.bigraded = false;
  h.k_from = k;
  if (name == "d") h.k_to = k + 1;
  else if (name == "d*") h.k_to = k - 1;
  else if (name == "delta_b") h.k_to = k;
  else throw BadBidegree("unknown graded operator " + name);
  h.zero_target = h.k_to < 0 || h.k_to > 2 * n + 1;
  return h;
}

Operators::Operators(const Spaces& s) : s_(&s), n_(s.n()) {
  if (const char* env = std::getenv("RUMIN_THREADS")) set_threads(std::atoi(env));
}

void Operators::require_pseudoconvex() const {
  if (!model().strictly_pseudoconvex())
    throw NotStrictlyPseudoconvex("adjoints need a positive definite Levi form");
}

void Operators::check_pq(const Form& w, int p, int q) const {
  if (!valid_bidegree(n_, p, q)) throw BadBidegree("no Rumin space of bidegree " + bideg_str(p, q));
  s_->require_Rpq(w, p, q);
}

Form Operators::proj(const Form& w, int p, int q) const {
  if (w.is_zero() || !valid_bidegree(n_, p, q)) return Form(n_);
  return s_->pi_pq(w, p, q);
}

// ---- ∇̸-family ---------------------------------------------------------------

Form Operators::nablas(const Form& w) const {
  Form x = w.horizontal(), out(n_);
  for (int a = 1; a <= n_; ++a) out += wedge(Form::hol(n_, a), model().nabla(dir_hol(a), x));
  return out;
}

Form Operators::nablas_bar(const Form& w) const {
  Form x = w.horizontal(), out(n_);
  for (int b = 1; b <= n_; ++b) out += wedge(Form::anti(n_, b), model().nabla(dir_anti(n_, b), x));
  return out;
}

Form Operators::nablas_star(const Form& w) const {
  Form x = w.horizontal(), out(n_);
  const Matrix& hu = model().hup();
  for (int mu = 1; mu <= n_; ++mu)
    for (int nu = 1; nu <= n_; ++nu) {
      const Scalar& g = hu(mu - 1, nu - 1);
      if (!g.is_zero()) out -= contract_hol(model().nabla(dir_anti(n_, nu), x), mu) * g;
    }
  return out;
}

Form Operators::nablas_bar_star(const Form& w) const {
  Form x = w.horizontal(), out(n_);
  const Matrix& hu = model().hup();
  for (const auto& [key, c] : x.terms()) {
    (void)c;
    // (-1)^p depends on the bidegree of each term
    Form single(n_);
    single.add(key, x.coeff(key));
    Scalar s = -sign_pow(key.p());
    for (int mu = 1; mu <= n_; ++mu)
      for (int nu = 1; nu <= n_; ++nu) {
        const Scalar& g = hu(mu - 1, nu - 1);
        if (!g.is_zero()) out += contract_anti(model().nabla(dir_hol(mu), single), nu) * (s * g);
      }
  }
  return out;
}

Form Operators::rough(const Form& w) const {
  Form x = w.horizontal(), out(n_);
  const Matrix& hu = model().hup();
  for (int mu = 1; mu <= n_; ++mu)
    for (int nu = 1; nu <= n_; ++nu) {
      const Scalar& g = hu(mu - 1, nu - 1);
      if (!g.is_zero()) out -= model().nabla2(dir_anti(n_, nu), dir_hol(mu), x) * g;
    }
  return out;
}

Form Operators::rough_bar(const Form& w) const {
  Form x = w.horizontal(), out(n_);
  const Matrix& hu = model().hup();
  for (int mu = 1; mu <= n_; ++mu)
    for (int nu = 1; nu <= n_; ++nu) {
      const Scalar& g = hu(mu - 1, nu - 1);
      if (!g.is_zero()) out -= model().nabla2(dir_hol(mu), dir_anti(n_, nu), x) * g;
    }
  return out;
}

Form Operators::nabla0(const Form& w) const { return model().nabla(0, w.horizontal()); }

Form Operators::boxs(const Form& w) const {
  return nablas_bar_star(nablas_bar(w)) + nablas_bar(nablas_bar_star(w));
}

Form Operators::curv_RR(const Form& w) const {
  Form x = w.horizontal(), out(n_);
  const Matrix& hu = model().hup();
  int n = n_;
  for (const auto& [key, c] : x.terms()) {
    (void)c;
    Form single(n);
    single.add(key, x.coeff(key));
    Scalar sgn = sign_pow(key.p() - 1);
    for (int mu = 1; mu <= n; ++mu)
      for (int nu = 1; nu <= n; ++nu) {
        Form y = contract_anti(contract_hol(single, mu), nu);
        if (y.is_zero()) continue;
        for (int a = 1; a <= n; ++a)
          for (int b = 1; b <= n; ++b) {
            // R_{αβ̄}^{ν̄μ} = h^{ρν̄} h^{μσ̄} R_{αβ̄ρσ̄}
            Scalar r;
            for (int rho = 1; rho <= n; ++rho)
              for (int sig = 1; sig <= n; ++sig)
                r += hu(rho - 1, nu - 1) * hu(mu - 1, sig - 1) * model().R(a, b, rho, sig);
            if (r.is_zero()) continue;
            out += wedge(wedge(Form::hol(n, a), Form::anti(n, b)), y) * (sgn * r);
          }
      }
  }
  return out;
}

Form Operators::ric_hol(const Form& w) const {
  Form x = w.horizontal(), out(n_);
  const Matrix& hu = model().hup();
  const Matrix& ric = model().ricci();
  int n = n_;
  for (int a = 1; a <= n; ++a)
    for (int mu = 1; mu <= n; ++mu) {
      Scalar r;  // R_α^μ
      for (int b = 1; b <= n; ++b) r += ric(a - 1, b - 1) * hu(mu - 1, b - 1);
      if (!r.is_zero()) out -= wedge(Form::hol(n, a), contract_hol(x, mu)) * r;
    }
  return out;
}

Form Operators::ric_anti(const Form& w) const {
  Form x = w.horizontal(), out(n_);
  const Matrix& hu = model().hup();
  const Matrix& ric = model().ricci();
  int n = n_;
  for (const auto& [key, c] : x.terms()) {
    (void)c;
    Form single(n);
    single.add(key, x.coeff(key));
    Scalar sgn = -sign_pow(key.p());
    for (int b = 1; b <= n; ++b)
      for (int nu = 1; nu <= n; ++nu) {
        Scalar r;  // R^ν̄_β̄
        for (int mu = 1; mu <= n; ++mu) r += hu(mu - 1, nu - 1) * ric(mu - 1, b - 1);
        if (!r.is_zero()) out += wedge(Form::anti(n, b), contract_anti(single, nu)) * (sgn * r);
      }
  }
  return out;
}

Form Operators::tor_hol(const Form& w) const {
  Form x = w.horizontal(), out(n_);
  const Matrix& hu = model().hup();
  const Matrix& A = model().torsion();
  int n = n_;
  for (const auto& [key, c] : x.terms()) {
    (void)c;
    Form single(n);
    single.add(key, x.coeff(key));
    Scalar sgn = -sign_pow(key.p());
    for (int a = 1; a <= n; ++a)
      for (int nu = 1; nu <= n; ++nu) {
        Scalar t;  // A_α^ν̄
        for (int g = 1; g <= n; ++g) t += A(a - 1, g - 1) * hu(g - 1, nu - 1);
        if (!t.is_zero()) out += wedge(Form::hol(n, a), contract_anti(single, nu)) * (sgn * t);
      }
  }
  return out;
}

Form Operators::tor_anti(const Form& w) const {
  Form x = w.horizontal(), out(n_);
  const Matrix& hu = model().hup();
  const Matrix& A = model().torsion();
  int n = n_;
  for (int b = 1; b <= n; ++b)
    for (int mu = 1; mu <= n; ++mu) {
      Scalar t;  // A_β̄^μ
      for (int s = 1; s <= n; ++s) t += A(b - 1, s - 1).conj() * hu(mu - 1, s - 1);
      if (!t.is_zero()) out -= wedge(Form::anti(n, b), contract_hol(x, mu)) * t;
    }
  return out;
}

// ---- Rumin differentials ----------------------------------------------------

Form Operators::d(const Form& w, int k) const {
  s_->require_R(w, k);
  Form out = model().d(w);
  if (k + 1 <= 2 * n_ + 1) s_->require_R(out, k + 1);
  return out;
}

Form Operators::db_raw(const Form& w, int p, int q, Path path) const {
  Bidegree t = target_db(n_, p, q);
  if (w.is_zero() || !valid_bidegree(n_, t.p, t.q)) return Form(n_);
  if (path == Path::Projection) return proj(model().d(w), t.p, t.q);
  int n = n_, k = p + q;
  const Form& L = model().dtheta();
  if (k <= n - 1) {
    Form x = w.horizontal();
    Form h = nablas(x) - wedge(L, nablas_bar_star(x)) * (Scalar::I() * frac(1, n - k + 1));
    return s_->project_E(h, t.p, t.q);
  }
  if (k == n) {
    Form x = w.horizontal();
    return (nablas(nablas_bar_star(x)) * Scalar::I() - tor_hol(x)).theta_wedge();
  }
  Form tau = s_->extract_primitive(w, p, q).horizontal();
  return wedge(nablas_bar_star(tau).theta_wedge(), power(L, k - n)) * (-Scalar::I() * inv_fact(k - n));
}

Form Operators::dbbar_raw(const Form& w, int p, int q, Path path) const {
  if (w.is_zero() || !valid_bidegree(n_, p, q + 1)) return Form(n_);
  if (path == Path::Projection) return proj(model().d(w), p, q + 1);
  int n = n_, k = p + q;
  const Form& L = model().dtheta();
  if (k <= n - 1) {
    Form x = w.horizontal();
    Form h = nablas_bar(x) + wedge(L, nablas_star(x)) * (Scalar::I() * frac(1, n - k + 1));
    return s_->project_E(h, p, q + 1);
  }
  if (k == n) {
    Form x = w.horizontal();
    return -(nablas_bar(nablas_star(x)) * Scalar::I() + tor_anti(x)).theta_wedge();
  }
  Form tau = s_->extract_primitive(w, p, q).horizontal();
  return wedge(nablas_star(tau).theta_wedge(), power(L, k - n)) * (Scalar::I() * inv_fact(k - n));
}

Form Operators::d0_raw(const Form& w, int p, int q, Path path) const {
  if (p + q != n_) throw MiddleDegreeOnly("d0 is defined on p+q = n only, got " + bideg_str(p, q));
  if (w.is_zero()) return Form(n_);
  if (path == Path::Projection) return proj(model().d(w), p + 1, q);
  Form x = w.horizontal();
  Form y = nabla0(x) - nablas(nablas_star(x)) * Scalar::I() + nablas_bar(nablas_bar_star(x)) * Scalar::I();
  return y.theta_wedge();
}

Form Operators::db(const Form& w, int p, int q, Path path) const {
  check_pq(w, p, q);
  return db_raw(w, p, q, path);
}

Form Operators::dbbar(const Form& w, int p, int q, Path path) const {
  check_pq(w, p, q);
  return dbbar_raw(w, p, q, path);
}

Form Operators::d0(const Form& w, int p, int q, Path path) const {
  if (p + q != n_) throw MiddleDegreeOnly("d0 is defined on p+q = n only, got " + bideg_str(p, q));
  check_pq(w, p, q);
  return d0_raw(w, p, q, path);
}

// ---- adjoints ---------------------------------------------------------------

Form Operators::dbbar_star_raw(const Form& w, int p, int q, Path path) const {
  require_pseudoconvex();
  int n = n_, k = p + q;
  if (w.is_zero() || !valid_bidegree(n, p, q - 1)) return Form(n);
  if (path == Path::Projection) {
    Bidegree s = s_->star_bidegree(p, q);
    Form y = db_raw(star(w, p, q), s.p, s.q, Path::Projection);
    Bidegree t = target_db(n, s.p, s.q);
    if (y.is_zero()) return y;
    return star(y, t.p, t.q) * sign_pow(k);
  }
  const Form& L = model().dtheta();
  if (k <= n) return s_->project_E(nablas_bar_star(w.horizontal()), p, q - 1);
  if (k == n + 1) {
    Form mu = w.contract_reeb();
    Form x = nablas(nablas_bar_star(mu)) * Scalar::I() - tor_hol(mu);
    return s_->project_E(x, p, q - 1);
  }
  int j = k - n - 2;
  Form tau = s_->extract_primitive(w, p, q).horizontal();
  Form inner = nablas(tau) - wedge(L, nablas_bar_star(tau)) * (Scalar::I() * frac(1, k - n));
  return wedge(inner.theta_wedge(), power(L, j)) * (-Scalar::I() * inv_fact(j));
}

Form Operators::db_star_raw(const Form& w, int p, int q, Path path) const {
  require_pseudoconvex();
  int n = n_, k = p + q;
  Bidegree t = target_db_star(n, p, q);
  if (w.is_zero() || !valid_bidegree(n, t.p, t.q)) return Form(n);
  if (path == Path::Projection) {
    Bidegree s = s_->star_bidegree(p, q);
    Form y = dbbar_raw(star(w, p, q), s.p, s.q, Path::Projection);
    if (y.is_zero()) return y;
    return star(y, s.p, s.q + 1) * sign_pow(k);
  }
  const Form& L = model().dtheta();
  if (k <= n) return s_->project_E(nablas_star(w.horizontal()), t.p, t.q);
  if (k == n + 1) {
    Form mu = w.contract_reeb();
    Form x = -(nablas_bar(nablas_star(mu)) * Scalar::I() + tor_anti(mu));
    return s_->project_E(x, t.p, t.q);
  }
  int j = k - n - 2;
  Form tau = s_->extract_primitive(w, p, q).horizontal();
  Form inner = nablas_bar(tau) + wedge(L, nablas_star(tau)) * (Scalar::I() * frac(1, k - n));
  return wedge(inner.theta_wedge(), power(L, j)) * (Scalar::I() * inv_fact(j));
}

Form Operators::d0_star_raw(const Form& w, int p, int q, Path path) const {
  require_pseudoconvex();
  if (p + q != n_ + 1) throw MiddleDegreeOnly("d0* is defined on p+q = n+1 only, got " + bideg_str(p, q));
  if (w.is_zero()) return Form(n_);
  if (path == Path::Projection) {
    Bidegree s = s_->star_bidegree(p, q);
    Form y = d0_raw(star(w, p, q), s.p, s.q, Path::Projection);
    if (y.is_zero()) return y;
    return star(y, s.p + 1, s.q) * sign_pow(n_ + 1);
  }
  Form mu = w.contract_reeb();
  Form x = -(nabla0(mu) - nablas(nablas_star(mu)) * Scalar::I() + nablas_bar(nablas_bar_star(mu)) * Scalar::I());
  return s_->project_E(x, p - 1, q);
}

Form Operators::db_star(const Form& w, int p, int q, Path path) const {
  require_pseudoconvex();
  check_pq(w, p, q);
  return db_star_raw(w, p, q, path);
}

Form Operators::dbbar_star(const Form& w, int p, int q, Path path) const {
  require_pseudoconvex();
  check_pq(w, p, q);
  return dbbar_star_raw(w, p, q, path);
}

Form Operators::d0_star(const Form& w, int p, int q, Path path) const {
  require_pseudoconvex();
  if (p + q != n_ + 1) throw MiddleDegreeOnly("d0* is defined on p+q = n+1 only, got " + bideg_str(p, q));
  check_pq(w, p, q);
  return d0_star_raw(w, p, q, path);
}

Form Operators::star_degree(const Form& w, int k) const {
  Form out(n_);
  for (int p = 0; p <= k; ++p) {
    int q = k - p;
    if (!valid_bidegree(n_, p, q)) continue;
    Form c = proj(w, p, q);
    if (!c.is_zero()) out += star(c, p, q);
  }
  return out;
}

Form Operators::d_star_raw(const Form& w, int k) const {
  require_pseudoconvex();
  if (w.is_zero() || k == 0) return Form(n_);
  Form y = model().d(star_degree(w, k));
  return star_degree(y, 2 * n_ + 2 - k) * sign_pow(k);
}

Form Operators::d_star(const Form& w, int k) const {
  require_pseudoconvex();
  s_->require_R(w, k);
  return d_star_raw(w, k);
}

// ---- Laplacians -------------------------------------------------------------

namespace {

struct Hom {
  Form w;
  Bidegree b;
};

}  // namespace

Form Operators::kohn(const Form& w, int p, int q) const {
  require_pseudoconvex();
  check_pq(w, p, q);
  const Path P = Path::Projection;
  int n = n_, k = p + q;
  auto Db = [&](const Hom& x) { return Hom{db_raw(x.w, x.b.p, x.b.q, P), target_db(n, x.b.p, x.b.q)}; };
  auto Dbb = [&](const Hom& x) { return Hom{dbbar_raw(x.w, x.b.p, x.b.q, P), {x.b.p, x.b.q + 1}}; };
  auto Dbs = [&](const Hom& x) { return Hom{db_star_raw(x.w, x.b.p, x.b.q, P), target_db_star(n, x.b.p, x.b.q)}; };
  auto Dbbs = [&](const Hom& x) { return Hom{dbbar_star_raw(x.w, x.b.p, x.b.q, P), {x.b.p, x.b.q - 1}}; };
  Hom x{w, {p, q}};
  if (k <= n - 1) return Dbb(Dbbs(x)).w * frac(n - k, n - k + 1) + Dbbs(Dbb(x)).w;
  if (k == n) {
    Hom a = Dbbs(x);
    return Dbbs(Dbb(x)).w + Dbb(Dbs(Db(a))).w + Dbb(Db(Dbs(a))).w * frac(1, 2) + Dbb(Dbbs(Dbb(a))).w;
  }
  if (k == n + 1) {
    Hom a = Dbb(x);
    return Dbb(Dbbs(x)).w + Dbbs(Db(Dbs(a))).w + Dbbs(Dbs(Db(a))).w * frac(1, 2) + Dbbs(Dbb(Dbbs(a))).w;
  }
  return Dbbs(Dbb(x)).w * frac(k - n - 1, k - n) + Dbb(Dbbs(x)).w;
}

Form Operators::kohn_bar(const Form& w, int p, int q) const {
  Bidegree c = conj_bidegree(n_, p, q);
  return kohn(w.conj(), c.p, c.q).conj();
}

Form Operators::rumin_laplacian(const Form& w, int k) const {
  require_pseudoconvex();
  s_->require_R(w, k);
  int n = n_;
  const Model& m = model();
  auto D = [&](const Form& x) { return m.d(x); };
  auto Ds = [&](const Form& x, int deg) { return d_star_raw(x, deg); };
  if (k <= n - 1) return Ds(D(w), k + 1) + D(Ds(w, k)) * frac(n - k, n - k + 1);
  if (k == n) return Ds(D(w), k + 1) + D(Ds(D(Ds(w, k)), k));
  if (k == n + 1) return D(Ds(w, k)) + Ds(D(Ds(D(w), k + 1)), k + 1);
  return D(Ds(w, k)) + Ds(D(w), k + 1) * frac(k - n - 1, k - n);
}

Form Operators::L_b(const Form& w, int p, int q) const {
  Form out = kohn(w, p, q) + kohn_bar(w, p, q);
  int k = p + q;
  const Path P = Path::Projection;
  if (k == n_) out += d0_star_raw(d0_raw(w, p, q, P), p + 1, q, P);
  if (k == n_ + 1) out += d0_raw(d0_star_raw(w, p, q, P), p - 1, q, P);
  return out;
}

Form Operators::popovici(const Form& w, int p, int q, const Projector& H) const {
  Form out = kohn(w, p, q);
  int n = n_, k = p + q;
  const Path P = Path::Projection;
  auto Hp = [&](const Form& x, int a, int b) {
    if (x.is_zero() || !valid_bidegree(n, a, b)) return Form(n);
    return H(x, a, b);
  };
  if (k <= n - 1) {
    Form a = Hp(db_star_raw(w, p, q, P), p - 1, q);
    out += db_raw(a, p - 1, q, P) * frac(n - k, n - k + 1);
    Form b = Hp(db_raw(w, p, q, P), p + 1, q);
    out += db_star_raw(b, p + 1, q, P);
  } else if (k == n) {
    Form a = Hp(d0_raw(w, p, q, P), p + 1, q);
    out += d0_star_raw(a, p + 1, q, P);
    Form b = Hp(db_star_raw(w, p, q, P), p - 1, q);
    Form c = Hp(db_star_raw(db_raw(b, p - 1, q, P), p, q, P), p - 1, q);
    out += db_raw(c, p - 1, q, P);
  } else if (k == n + 1) {
    Form a = Hp(d0_star_raw(w, p, q, P), p - 1, q);
    out += d0_raw(a, p - 1, q, P);
    Form b = Hp(db_raw(w, p, q, P), p + 1, q);
    Form c = Hp(db_raw(db_star_raw(b, p + 1, q, P), p, q, P), p + 1, q);
    out += db_star_raw(c, p + 1, q, P);
  } else {
    Form a = Hp(db_raw(w, p, q, P), p + 1, q);
    out += db_star_raw(a, p + 1, q, P) * frac(k - n - 1, k - n);
    Form b = Hp(db_star_raw(w, p, q, P), p - 1, q);
    out += db_raw(b, p - 1, q, P);
  }
  return out;
}

// ---- products ---------------------------------------------------------------

Form Operators::m2(const Form& a, const Form& b) const {
  if (a.is_zero() || b.is_zero()) return Form(n_);
  s_->require_R(a, a.degree());
  s_->require_R(b, b.degree());
  Form ab = wedge(a, b);
  return ab.is_zero() ? ab : s_->pi(ab);
}

Form Operators::m3(const Form& a, const Form& b, const Form& c) const {
  if (a.is_zero() || b.is_zero() || c.is_zero()) return Form(n_);
  s_->require_R(a, a.degree());
  s_->require_R(b, b.degree());
  s_->require_R(c, c.degree());
  Form x = wedge(s_->gamma(wedge(a, b)), c) - wedge(a, s_->gamma(wedge(b, c))) * sign_pow(a.degree());
  return x.is_zero() ? x : s_->pi(x);
}

Form Operators::kr_m2(const Form& a, Bidegree pa, const Form& b, Bidegree pb) const {
  check_pq(a, pa.p, pa.q);
  check_pq(b, pb.p, pb.q);
  return proj(m2(a, b), pa.p + pb.p, pa.q + pb.q);
}

// ---- Lee form ---------------------------------------------------------------

Form Operators::lee_form(Path path) const {
  const Model& m = model();
  int n = n_;
  Scalar R = m.scalar_curvature();
  Scalar pre = -frac(1, n + 2);
  if (path == Path::Projection) {
    Form tr(n);
    for (int mu = 1; mu <= n; ++mu) tr += m.curvature_form(mu, mu);
    Form drt = m.d(Form::theta(n) * R);
    return (tr * Scalar::I() - drt * frac(1, n)) * pre;
  }
  const Matrix& ric = m.ricci();
  const Matrix& h = m.h();
  const Matrix& hu = m.hup();
  Tensor dA = m.nabla(m.torsion_tensor());
  Form out(n);
  Scalar Rn = R * frac(1, n);
  for (int a = 1; a <= n; ++a)
    for (int b = 1; b <= n; ++b) {
      Scalar c = (ric(a - 1, b - 1) - Rn * h(a - 1, b - 1)) * Scalar::I();
      if (!c.is_zero()) out += wedge(Form::hol(n, a), Form::anti(n, b)) * c;
    }
  for (int a = 1; a <= n; ++a) {
    Poly ca = m.derive(dir_hol(a), Poly(R)) * frac(1, n);
    Poly cb = m.derive(dir_anti(n, a), Poly(R)) * frac(1, n);
    for (int mu = 1; mu <= n; ++mu)
      for (int nu = 1; nu <= n; ++nu) {
        const Scalar& g = hu(mu - 1, nu - 1);
        if (g.is_zero()) continue;
        // ∇^μ A_{μα} and ∇^ν̄ A_{ν̄β̄}
        ca -= dA.get({mu, a, dir_anti(n, nu)}) * (Scalar::I() * g);
        cb += dA.get({dir_anti(n, nu), dir_anti(n, a), mu}) * (Scalar::I() * g);
      }
    out += wedge(Form::theta(n), Form::hol(n, a)) * ca;
    out += wedge(Form::theta(n), Form::anti(n, a)) * cb;
  }
  return out * pre;
}

bool Operators::is_pseudo_einstein() const { return lee_form().is_zero(); }

// ---- application and matrices -----------------------------------------------

Form Operators::apply(const OperatorHandle& h, const Form& w) const {
  if (!h.bigraded) {
    if (h.name == "d") return d(w, h.k_from);
    if (h.name == "d*") return d_star(w, h.k_from);
    if (h.name == "delta_b") return rumin_laplacian(w, h.k_from);
    throw BadBidegree("unknown graded operator " + h.name);
  }
  int p = h.from.p, q = h.from.q;
  if (h.name == "db") return db(w, p, q);
  if (h.name == "dbbar") return dbbar(w, p, q);
  if (h.name == "d0") return d0(w, p, q);
  if (h.name == "db*") return db_star(w, p, q);
  if (h.name == "dbbar*") return dbbar_star(w, p, q);
  if (h.name == "d0*") return d0_star(w, p, q);
  if (h.name == "box_b") return kohn(w, p, q);
  if (h.name == "box_b_bar") return kohn_bar(w, p, q);
  if (h.name == "L_b") return L_b(w, p, q);
  if (h.name == "popovici") return popovici(w, p, q, kohn_projector());
  if (h.name == "boxs") return boxs(w);
  throw BadBidegree("unknown bigraded operator " + h.name);
}

const InvariantBasis& Operators::basis(int p, int q) const {
  {
    std::lock_guard<std::mutex> lock(mu_);
    auto it = bases_.find({p, q});
    if (it != bases_.end()) return *it->second;
  }
  auto b = std::make_unique<InvariantBasis>(s_->basis_Rpq(p, q));
  std::lock_guard<std::mutex> lock(mu_);
  auto& slot = bases_[{p, q}];
  if (!slot) slot = std::move(b);
  return *slot;
}

const InvariantBasis& Operators::basis_degree(int k) const {
  {
    std::lock_guard<std::mutex> lock(mu_);
    auto it = dbases_.find(k);
    if (it != dbases_.end()) return *it->second;
  }
  auto b = std::make_unique<InvariantBasis>(s_->basis_R(k));
  std::lock_guard<std::mutex> lock(mu_);
  auto& slot = dbases_[k];
  if (!slot) slot = std::move(b);
  return *slot;
}

Matrix Operators::matrix(const OperatorHandle& h) const {
  const InvariantBasis& dom = h.bigraded ? basis(h.from.p, h.from.q) : basis_degree(h.k_from);
  if (h.zero_target) return Matrix(0, dom.dim());
  const InvariantBasis& cod = h.bigraded ? basis(h.to.p, h.to.q) : basis_degree(h.k_to);
  Matrix M(cod.dim(), dom.dim());
  auto column = [&](std::size_t j) {
    Vector c = cod.coords(apply(h, dom.elems[j]), *s_);
    for (std::size_t i = 0; i < c.size(); ++i) M(i, j) = c[i];
  };
  std::size_t T = std::min<std::size_t>(threads_, dom.dim());
  if (T <= 1) {
    for (std::size_t j = 0; j < dom.dim(); ++j) column(j);
    return M;
  }
  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> errs(T);
  for (std::size_t t = 0; t < T; ++t)
    pool.emplace_back([&, t] {
      try {
        for (std::size_t j = t; j < dom.dim(); j += T) column(j);
      } catch (...) {
        errs[t] = std::current_exception();
      }
    });
  for (auto& th : pool) th.join();
  for (auto& e : errs)
    if (e) std::rethrow_exception(e);
  return M;
}

Matrix Operators::gram(int p, int q) const { return s_->gram(basis(p, q).elems, p, q); }

Matrix Operators::gram_degree(int k) const {
  const InvariantBasis& b = basis_degree(k);
  Matrix G(b.dim(), b.dim());
  for (std::size_t i = 0; i < b.dim(); ++i)
    for (std::size_t j = 0; j < b.dim(); ++j) {
      Scalar s;
      for (int p = 0; p <= k; ++p) {
        if (!valid_bidegree(n_, p, k - p)) continue;
        Form x = proj(b.elems[j], p, k - p), y = proj(b.elems[i], p, k - p);
        if (x.is_zero() || y.is_zero()) continue;
        s += s_->inner(x, y, p, k - p).constant();
      }
      G(i, j) = s;
    }
  return G;
}

Projector Operators::kohn_projector() const {
  return [this](const Form& x, int p, int q) -> Form {
    const Matrix* P = nullptr;
    {
      std::lock_guard<std::mutex> lock(mu_);
      auto it = kohn_proj_.find({p, q});
      if (it != kohn_proj_.end()) P = it->second.get();
    }
    if (!P) {
      Matrix box = matrix(make_handle(n_, "box_b", p, q));
      auto proj = std::make_unique<Matrix>(gram_orthogonal_projection(kernel_basis(box), gram(p, q)));
      std::lock_guard<std::mutex> lock(mu_);
      auto& slot = kohn_proj_[{p, q}];
      if (!slot) slot = std::move(proj);
      P = slot.get();
    }
    const InvariantBasis& b = basis(p, q);
    return b.combine((*P) * b.coords(x, *s_));
  };
}

}  // namespace rumin
