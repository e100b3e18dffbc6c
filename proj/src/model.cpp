#include "rumin/model.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "rumin/errors.hpp"

namespace rumin {

Key dir_key(int n, int a) {
  if (a == 0) return Key{true, 0, 0};
  if (a <= n) return Key{false, 1u << (a - 1), 0};
  return Key{false, 0, 1u << (a - n - 1)};
}

Poly Tensor::get(const std::vector<int>& idx) const {
  auto it = comps.find(idx);
  return it == comps.end() ? Poly() : it->second;
}

void Tensor::add(const std::vector<int>& idx, const Poly& c) {
  if (c.is_zero()) return;
  auto it = comps.find(idx);
  if (it == comps.end()) {
    comps.emplace(idx, c);
    return;
  }
  it->second += c;
  if (it->second.is_zero()) comps.erase(it);
}

Model Model::heisenberg(int n, bool invariant) {
  if (n < 1) throw ModelFormatError("n must be at least 1");
  if (!invariant && n > kMaxPolyN) throw ModelFormatError("polynomial models support n <= " + std::to_string(kMaxPolyN));
  Model m;
  m.n_ = n;
  m.polynomial_ = !invariant;
  m.name_ = std::string(invariant ? "heisenberg-quotient:" : "heisenberg:") + std::to_string(n);
  m.h_ = Matrix::identity(n);
  m.dtheta_alpha_.assign(n, Form(n));
  m.finish();
  return m;
}

Model Model::custom(const ModelData& data, const std::string& name) {
  int n = data.n;
  if (n < 1) throw ModelFormatError("n must be at least 1");
  if (data.h.rows() != static_cast<std::size_t>(n) || data.h.cols() != static_cast<std::size_t>(n))
    throw LeviMismatch("Levi form must be " + std::to_string(n) + "x" + std::to_string(n));
  if (data.h != data.h.adjoint()) throw LeviMismatch("Levi form is not hermitian");
  if (rank(data.h) != static_cast<std::size_t>(n)) throw LeviMismatch("Levi form is degenerate");
  if (data.dtheta_alpha.size() != static_cast<std::size_t>(n))
    throw ModelFormatError("need d(theta^alpha) for every alpha");
  for (const auto& f : data.dtheta_alpha) {
    if (f.is_zero()) continue;
    if (f.n() != n) throw DimensionMismatch("coframe derivative on wrong dimension");
    if (f.degree() != 2) throw ModelFormatError("d(theta^alpha) must be a 2-form");
    if (!f.is_constant()) throw ModelFormatError("structure coefficients must be constant");
  }
  Model m;
  m.n_ = n;
  m.polynomial_ = false;
  m.name_ = name;
  m.h_ = data.h;
  m.dtheta_alpha_ = data.dtheta_alpha;
  for (auto& f : m.dtheta_alpha_) f = Form(n) + f;
  m.finish();
  return m;
}

namespace {

mpq_class parse_rational(const nlohmann::json& num, const nlohmann::json& den) {
  if (!num.is_number_integer() || !den.is_number_integer()) throw ModelFormatError("rational parts must be integers");
  long d = den.get<long>();
  if (d == 0) throw ModelFormatError("zero denominator");
  mpq_class q(num.get<long>(), d);
  q.canonicalize();
  return q;
}

// Levi entries: [re, im] with each part an integer or [num, den].
mpq_class parse_part(const nlohmann::json& v) {
  if (v.is_number_integer()) return mpq_class(v.get<long>());
  if (v.is_array() && v.size() == 2) return parse_rational(v[0], v[1]);
  throw ModelFormatError("bad rational " + v.dump());
}

std::vector<int> parse_indices(const nlohmann::json& v) {
  std::vector<int> out;
  if (!v.is_array()) throw ModelFormatError("index list expected");
  for (const auto& x : v) {
    if (!x.is_number_integer()) throw ModelFormatError("indices must be integers");
    out.push_back(x.get<int>());
  }
  return out;
}

}  // namespace

Model Model::from_json(const std::string& text, const std::string& name) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ModelFormatError(e.what());
  }
  try {
    ModelData data;
    data.n = j.at("n").get<int>();
    int n = data.n;
    if (n < 1) throw ModelFormatError("n must be at least 1");
    const auto& levi = j.at("levi");
    if (!levi.is_array() || levi.size() != static_cast<std::size_t>(n))
      throw LeviMismatch("levi must have n rows");
    data.h = Matrix(n, n);
    for (int a = 0; a < n; ++a) {
      if (!levi[a].is_array() || levi[a].size() != static_cast<std::size_t>(n))
        throw LeviMismatch("levi must have n columns");
      for (int b = 0; b < n; ++b) {
        const auto& e = levi[a][b];
        if (!e.is_array() || e.size() != 2) throw ModelFormatError("levi entries are [re, im]");
        data.h(a, b) = Scalar(parse_part(e[0]), parse_part(e[1]));
      }
    }
    data.dtheta_alpha.assign(n, Form(n));
    for (const auto& entry : j.value("d_theta_alpha", nlohmann::json::array())) {
      int alpha = entry.at("alpha").get<int>();
      if (alpha < 1 || alpha > n) throw IndexOutOfRange("alpha " + std::to_string(alpha));
      for (const auto& term : entry.at("terms")) {
        const auto& key = term.at("key");
        bool theta = key.value("theta", false);
        auto [A, sa] = canonicalize(parse_indices(key.value("A", nlohmann::json::array())), n);
        auto [B, sb] = canonicalize(parse_indices(key.value("B", nlohmann::json::array())), n);
        const auto& c = term.at("coeff");
        if (!c.is_array() || c.size() != 4) throw ModelFormatError("coeff is [re_num, re_den, im_num, im_den]");
        Scalar s(parse_rational(c[0], c[1]), parse_rational(c[2], c[3]));
        if (sa * sb == 0) continue;
        if (sa * sb < 0) s = -s;
        data.dtheta_alpha[alpha - 1].add(Key{theta, to_mask(A), to_mask(B)}, Poly(s));
      }
    }
    return custom(data, j.value("name", name));
  } catch (const nlohmann::json::exception& e) {
    throw ModelFormatError(e.what());
  }
}

Model Model::from_source(const std::string& source) {
  auto tail_int = [&](const std::string& prefix) {
    std::string rest = source.substr(prefix.size());
    std::size_t used = 0;
    int n = 0;
    try {
      n = std::stoi(rest, &used);
    } catch (const std::exception&) {
      throw ModelFormatError("bad dimension in " + source);
    }
    if (used != rest.size() || n < 1) throw ModelFormatError("bad dimension in " + source);
    return n;
  };
  const std::string hq = "builtin:heisenberg-quotient:", hz = "builtin:heisenberg:", fp = "file:";
  if (source.rfind(hq, 0) == 0) return heisenberg(tail_int(hq), true);
  if (source.rfind(hz, 0) == 0) return heisenberg(tail_int(hz), false);
  if (source.rfind(fp, 0) == 0) {
    std::string path = source.substr(fp.size());
    std::ifstream in(path);
    if (!in) throw ModelFormatError("cannot read " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return from_json(ss.str(), path);
  }
  throw ModelFormatError("unknown model source " + source);
}

void Model::finish() {
  int n = n_;
  hup_ = inverse(h_.transpose());
  pseudoconvex_ = is_positive_definite(h_);
  dtheta_ = Form(n);
  for (int a = 1; a <= n; ++a)
    for (int b = 1; b <= n; ++b)
      if (!h_(a - 1, b - 1).is_zero())
        dtheta_.add(Key{false, 1u << (a - 1), 1u << (b - 1)}, Poly(Scalar::I() * h_(a - 1, b - 1)));

  // d on every monomial, by the Leibniz rule from the coframe.
  dkey_ = std::make_shared<std::map<Key, Form, KeyLess>>();
  for (int k = 0; k <= 2 * n + 1; ++k)
    for (const auto& key : keys_of_degree(n, k)) {
      Form out(n);
      if (k == 0) {
      } else if (key.theta) {
        Key rest{false, key.A, key.B};
        out = wedge(dtheta_, Form::monomial(n, rest)) - wedge(Form::theta(n), dkey_->at(rest));
      } else if (key.A) {
        int a = __builtin_ctz(key.A) + 1;
        Key rest{false, key.A & (key.A - 1), key.B};
        out = wedge(dtheta_alpha_[a - 1], Form::monomial(n, rest)) - wedge(Form::hol(n, a), dkey_->at(rest));
      } else {
        int b = __builtin_ctz(key.B) + 1;
        Key rest{false, 0, key.B & (key.B - 1)};
        out = wedge(dtheta_alpha_[b - 1].conj(), Form::monomial(n, rest)) - wedge(Form::anti(n, b), dkey_->at(rest));
      }
      dkey_->emplace(key, out);
    }

  if (!d(dtheta_).is_zero()) throw JacobiFailure("d(d theta) != 0");
  for (int a = 1; a <= n; ++a)
    if (!d(dtheta_alpha_[a - 1]).is_zero()) throw JacobiFailure("d(d theta^" + std::to_string(a) + ") != 0");

  solve_connection();

  nkey_ = std::make_shared<std::vector<std::map<Key, Form, KeyLess>>>(2 * n + 1);
  for (int a = 0; a <= 2 * n; ++a) {
    std::vector<Form> one(2 * n + 1, Form(n));
    for (int al = 1; al <= n; ++al)
      for (int mu = 1; mu <= n; ++mu) {
        Scalar g = gamma(mu, al, a);
        if (!g.is_zero()) one[dir_hol(al)] -= Form::hol(n, mu) * g;
        Scalar gb = gamma(mu, al, dir_conj(n, a)).conj();
        if (!gb.is_zero()) one[dir_anti(n, al)] -= Form::anti(n, mu) * gb;
      }
    auto& cache = (*nkey_)[a];
    for (int k = 0; k <= 2 * n + 1; ++k)
      for (const auto& key : keys_of_degree(n, k)) {
        Form out(n);
        if (k == 0 || (key.theta && !key.A && !key.B)) {
        } else if (key.theta) {
          Key rest{false, key.A, key.B};
          out = wedge(Form::theta(n), cache.at(rest));
        } else if (key.A) {
          int al = __builtin_ctz(key.A) + 1;
          Key rest{false, key.A & (key.A - 1), key.B};
          out = wedge(one[dir_hol(al)], Form::monomial(n, rest)) + wedge(Form::hol(n, al), cache.at(rest));
        } else {
          int b = __builtin_ctz(key.B) + 1;
          Key rest{false, 0, key.B & (key.B - 1)};
          out = wedge(one[dir_anti(n, b)], Form::monomial(n, rest)) + wedge(Form::anti(n, b), cache.at(rest));
        }
        cache.emplace(key, out);
      }
  }

  derive_curvature();
}

Scalar Model::gamma(int mu, int alpha, int a) const {
  return omega_[mu - 1][alpha - 1].constant_coeff(dir_key(n_, a));
}

void Model::solve_connection() {
  int n = n_, D = 2 * n + 1;
  // Unknowns: X(μ,α,a), Y(μ,α,a) = coefficient of θ^a in conj(ω_μ^α), B(α,σ), C(α,σ).
  auto X = [&](int mu, int al, int a) { return ((mu - 1) * n + (al - 1)) * D + a; };
  int N1 = n * n * D;
  auto Y = [&](int mu, int al, int a) { return N1 + X(mu, al, a); };
  auto Bi = [&](int al, int s) { return 2 * N1 + (al - 1) * n + (s - 1); };
  auto Ci = [&](int al, int s) { return 2 * N1 + n * n + (al - 1) * n + (s - 1); };
  int N = 2 * N1 + 2 * n * n;

  std::vector<Vector> rows;
  Vector rhs;
  std::vector<Key> two = keys_of_degree(n, 2);
  std::map<Key, std::size_t, KeyLess> kidx;
  for (std::size_t i = 0; i < two.size(); ++i) kidx[two[i]] = i;

  // dθ^α = θ^μ∧ω_μ^α + θ∧τ^α and its conjugate.
  for (int conjugate = 0; conjugate <= 1; ++conjugate)
    for (int al = 1; al <= n; ++al) {
      std::vector<Vector> block(two.size(), Vector(N));
      for (int mu = 1; mu <= n; ++mu)
        for (int a = 0; a < D; ++a) {
          Key first = conjugate ? dir_key(n, dir_anti(n, mu)) : dir_key(n, dir_hol(mu));
          auto [k, s] = wedge_keys(first, dir_key(n, a));
          if (s) block[kidx[k]][conjugate ? Y(mu, al, a) : X(mu, al, a)] += Scalar(s);
        }
      for (int s = 1; s <= n; ++s) {
        Key second = conjugate ? dir_key(n, dir_hol(s)) : dir_key(n, dir_anti(n, s));
        auto [k, sg] = wedge_keys(Key{true, 0, 0}, second);
        block[kidx[k]][conjugate ? Ci(al, s) : Bi(al, s)] += Scalar(sg);
      }
      Form target = conjugate ? dtheta_alpha_[al - 1].conj() : dtheta_alpha_[al - 1];
      for (std::size_t i = 0; i < two.size(); ++i) {
        rows.push_back(block[i]);
        rhs.push_back(target.constant_coeff(two[i]));
      }
    }
  // ω_{αβ̄} + ω_{β̄α} = 0, with ω_{β̄α} = conj(ω_β^γ) h_{αγ̄}.
  for (int al = 1; al <= n; ++al)
    for (int be = 1; be <= n; ++be)
      for (int a = 0; a < D; ++a) {
        Vector r(N);
        for (int g = 1; g <= n; ++g) {
          r[X(al, g, a)] += h_(g - 1, be - 1);
          r[Y(be, g, a)] += h_(al - 1, g - 1);
        }
        rows.push_back(r);
        rhs.push_back(Scalar());
      }
  // θ^μ∧τ_μ = 0 and its conjugate.
  for (int mu = 1; mu <= n; ++mu)
    for (int s = mu + 1; s <= n; ++s) {
      Vector r(N), rb(N);
      for (int nu = 1; nu <= n; ++nu) {
        r[Ci(nu, s)] += h_(mu - 1, nu - 1);
        r[Ci(nu, mu)] -= h_(s - 1, nu - 1);
        rb[Bi(nu, s)] += h_(nu - 1, mu - 1);
        rb[Bi(nu, mu)] -= h_(nu - 1, s - 1);
      }
      rows.push_back(r);
      rhs.push_back(Scalar());
      rows.push_back(rb);
      rhs.push_back(Scalar());
    }

  Matrix M(rows.size(), N);
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (int j = 0; j < N; ++j) M(i, j) = rows[i][j];
  Vector x;
  try {
    x = solve(M, rhs, true);
  } catch (const InconsistentSystem&) {
    throw ConnectionSolveFailure("structure equations are inconsistent");
  } catch (const NonUniqueSolution&) {
    throw ConnectionSolveFailure("connection is not unique");
  }
  for (int mu = 1; mu <= n; ++mu)
    for (int al = 1; al <= n; ++al)
      for (int a = 0; a < D; ++a)
        if (x[Y(mu, al, a)] != x[X(mu, al, dir_conj(n, a))].conj())
          throw ConnectionSolveFailure("solution is not self-conjugate");
  for (int al = 1; al <= n; ++al)
    for (int s = 1; s <= n; ++s)
      if (x[Ci(al, s)] != x[Bi(al, s)].conj()) throw ConnectionSolveFailure("torsion is not self-conjugate");

  omega_.assign(n, std::vector<Form>(n, Form(n)));
  tau_.assign(n, Form(n));
  for (int mu = 1; mu <= n; ++mu)
    for (int al = 1; al <= n; ++al)
      for (int a = 0; a < D; ++a) omega_[mu - 1][al - 1].add(dir_key(n, a), Poly(x[X(mu, al, a)]));
  for (int al = 1; al <= n; ++al)
    for (int s = 1; s <= n; ++s) tau_[al - 1].add(dir_key(n, dir_anti(n, s)), Poly(x[Bi(al, s)]));
  // τ^β̄ = A_α^β̄ θ^α with A_α^β̄ = C(β, α); A_{αγ} = A_α^β̄ h_{γβ̄}.
  A_ = Matrix(n, n);
  for (int al = 1; al <= n; ++al)
    for (int g = 1; g <= n; ++g)
      for (int be = 1; be <= n; ++be) A_(al - 1, g - 1) += x[Ci(be, al)] * h_(g - 1, be - 1);
  if (A_ != A_.transpose()) throw ConnectionSolveFailure("torsion is not symmetric");
}

const Scalar& Model::R(int a, int b, int r, int s) const {
  return R_[(((a - 1) * n_ + (b - 1)) * n_ + (r - 1)) * n_ + (s - 1)];
}

const Scalar& Model::chern(int a, int b, int r, int s) const {
  return S_[(((a - 1) * n_ + (b - 1)) * n_ + (r - 1)) * n_ + (s - 1)];
}

void Model::derive_curvature() {
  int n = n_;
  Omega_.assign(n, std::vector<Form>(n, Form(n)));
  for (int al = 1; al <= n; ++al)
    for (int g = 1; g <= n; ++g) {
      Form w = d(omega_[al - 1][g - 1]);
      for (int mu = 1; mu <= n; ++mu) w -= wedge(omega_[al - 1][mu - 1], omega_[mu - 1][g - 1]);
      Omega_[al - 1][g - 1] = w;
    }
  R_.assign(n * n * n * n, Scalar());
  for (int al = 1; al <= n; ++al)
    for (int be = 1; be <= n; ++be) {
      Form low(n);
      for (int g = 1; g <= n; ++g) low += Omega_[al - 1][g - 1] * h_(g - 1, be - 1);
      for (int r = 1; r <= n; ++r)
        for (int s = 1; s <= n; ++s) {
          Poly c = low.coeff(Key{false, 1u << (r - 1), 1u << (s - 1)});
          if (!c.is_constant()) throw SymmetryViolation("non-constant curvature");
          R_[(((al - 1) * n + (be - 1)) * n + (r - 1)) * n + (s - 1)] = c.constant();
        }
    }
  for (int a = 1; a <= n; ++a)
    for (int b = 1; b <= n; ++b)
      for (int r = 1; r <= n; ++r)
        for (int s = 1; s <= n; ++s) {
          if (R(a, b, r, s) != R(a, s, r, b) || R(a, b, r, s) != R(r, s, a, b))
            throw SymmetryViolation("R lacks the index symmetries");
          if (R(a, b, r, s).conj() != R(b, a, s, r)) throw SymmetryViolation("R is not conjugate-symmetric");
        }
  ricci_ = Matrix(n, n);
  for (int a = 1; a <= n; ++a)
    for (int b = 1; b <= n; ++b)
      for (int r = 1; r <= n; ++r)
        for (int s = 1; s <= n; ++s) ricci_(a - 1, b - 1) += R(a, b, r, s) * hup_(r - 1, s - 1);
  scal_ = Scalar();
  for (int a = 1; a <= n; ++a)
    for (int b = 1; b <= n; ++b) scal_ += ricci_(a - 1, b - 1) * hup_(a - 1, b - 1);
  schouten_ = Matrix(n, n);
  Scalar c1 = Scalar(mpq_class(1, n + 2)), c2 = scal_ * Scalar(mpq_class(1, 2 * (n + 1)));
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) schouten_(a, b) = c1 * (ricci_(a, b) - c2 * h_(a, b));
  S_.assign(n * n * n * n, Scalar());
  const Matrix& P = schouten_;
  for (int a = 1; a <= n; ++a)
    for (int b = 1; b <= n; ++b)
      for (int g = 1; g <= n; ++g)
        for (int s = 1; s <= n; ++s)
          S_[(((a - 1) * n + (b - 1)) * n + (g - 1)) * n + (s - 1)] =
              R(a, b, g, s) - P(a - 1, b - 1) * h_(g - 1, s - 1) - P(a - 1, s - 1) * h_(g - 1, b - 1) -
              P(g - 1, b - 1) * h_(a - 1, s - 1) - P(g - 1, s - 1) * h_(a - 1, b - 1);
}

bool Model::unimodular() const {
  for (const auto& k : keys_of_degree(n_, 2 * n_))
    if (!dkey_->at(k).is_zero()) return false;
  return true;
}

Poly Model::derive(int a, const Poly& f) const {
  if (f.is_constant()) return Poly();
  if (!polynomial_) throw NotInvariantModel("non-constant coefficient on an invariant model");
  if (a == 0) return f.partial(var_t());
  Poly ft = f.partial(var_t());
  if (a <= n_) return f.partial(var_z(a)) + Poly::zbar(a) * ft * Scalar(mpq_class(0), mpq_class(1, 2));
  int b = a - n_;
  return f.partial(var_zbar(b)) - Poly::z(b) * ft * Scalar(mpq_class(0), mpq_class(1, 2));
}

Form Model::d_key(const Key& k) const { return dkey_->at(k); }
Form Model::nabla_key(int a, const Key& k) const { return (*nkey_)[a].at(k); }

Form Model::d(const Form& w) const {
  Form out(n_);
  for (const auto& [k, c] : w.terms()) {
    if (!c.is_constant())
      for (int a = 0; a <= 2 * n_; ++a) {
        Poly g = derive(a, c);
        if (g.is_zero()) continue;
        auto [key, s] = wedge_keys(dir_key(n_, a), k);
        if (s) out.add(key, s > 0 ? g : -g);
      }
    const Form& dk = dkey_->at(k);
    for (const auto& [k2, c2] : dk.terms()) out.add(k2, c2 * c);
  }
  return out;
}

Form Model::nabla(int a, const Form& w) const {
  Form out(n_);
  for (const auto& [k, c] : w.terms()) {
    if (!c.is_constant()) out.add(k, derive(a, c));
    for (const auto& [k2, c2] : (*nkey_)[a].at(k).terms()) out.add(k2, c2 * c);
  }
  return out;
}

Scalar Model::conn(int b, int a, int c) const {
  int n = n_;
  if (b == 0 || a == 0) return Scalar();
  if (b <= n && a <= n) return gamma(b, a, c);
  if (b > n && a > n) return gamma(b - n, a - n, dir_conj(n, c)).conj();
  return Scalar();
}

Form Model::nabla2(int b, int a, const Form& w) const {
  Form out = nabla(b, nabla(a, w));
  for (int c = 0; c < 2 * n_ + 1; ++c) {
    Scalar g = conn(a, c, b);
    if (!g.is_zero()) out -= nabla(c, w) * g;
  }
  return out;
}

Tensor Model::nabla(const Tensor& t) const {
  int n = n_, D = 2 * n + 1;
  Tensor out;
  out.rank = t.rank + 1;
  for (const auto& [idx, v] : t.comps) {
    for (int c = 0; c < D; ++c) {
      std::vector<int> ext = idx;
      ext.push_back(c);
      out.add(ext, derive(c, v));
      for (std::size_t j = 0; j < idx.size(); ++j)
        for (int a = 0; a < D; ++a) {
          Scalar g = conn(a, idx[j], c);
          if (g.is_zero()) continue;
          std::vector<int> tgt = ext;
          tgt[j] = a;
          out.add(tgt, v * (-g));
        }
    }
  }
  return out;
}

Tensor Model::torsion_tensor() const {
  Tensor t;
  t.rank = 2;
  for (int a = 1; a <= n_; ++a)
    for (int g = 1; g <= n_; ++g) {
      t.add({a, g}, Poly(A_(a - 1, g - 1)));
      t.add({n_ + a, n_ + g}, Poly(A_(a - 1, g - 1).conj()));
    }
  return t;
}

Tensor Model::curvature_tensor() const {
  Tensor t;
  t.rank = 4;
  int n = n_;
  for (int a = 1; a <= n; ++a)
    for (int b = 1; b <= n; ++b)
      for (int r = 1; r <= n; ++r)
        for (int s = 1; s <= n; ++s) t.add({a, n + b, r, n + s}, Poly(R(a, b, r, s)));
  return t;
}

bool Model::pseudo_einstein_tensorial() const {
  int n = n_;
  if (n >= 2) return ricci_ == h_ * (scal_ * Scalar(mpq_class(1, n)));
  // ∇_1 R = i ∇^1 A_{11}; R is constant on every supported model.
  Tensor dA = nabla(torsion_tensor());
  Poly rhs = dA.get({1, 1, dir_anti(1, 1)}) * hup_(0, 0) * Scalar::I();
  return rhs.is_zero();
}

std::vector<std::string> Model::structure_failures() const {
  std::vector<std::string> bad;
  int n = n_;
  Form target(n);
  for (int a = 1; a <= n; ++a)
    for (int b = 1; b <= n; ++b)
      target += wedge(Form::hol(n, a), Form::anti(n, b)) * (Scalar::I() * h_(a - 1, b - 1));
  if (target != dtheta_) bad.push_back("levi");
  if (!d(dtheta_).is_zero()) bad.push_back("jacobi theta");
  for (int a = 1; a <= n; ++a) {
    if (!d(dtheta_alpha_[a - 1]).is_zero()) bad.push_back("jacobi theta^" + std::to_string(a));
    Form rhs = wedge(Form::theta(n), tau_[a - 1]);
    for (int mu = 1; mu <= n; ++mu) rhs += wedge(Form::hol(n, mu), omega_[mu - 1][a - 1]);
    if (rhs != dtheta_alpha_[a - 1]) bad.push_back("structure equation " + std::to_string(a));
    for (const auto& [k, c] : tau_[a - 1].terms())
      if (k.theta || k.A) bad.push_back("tau not antiholomorphic");
  }
  for (int a = 1; a <= n; ++a)
    for (int b = 1; b <= n; ++b) {
      Form s(n);
      for (int g = 1; g <= n; ++g) {
        s += omega_[a - 1][g - 1] * h_(g - 1, b - 1);
        s += omega_[b - 1][g - 1].conj() * h_(a - 1, g - 1);
      }
      if (!s.is_zero()) bad.push_back("metric compatibility");
    }
  Form tt(n);
  for (int mu = 1; mu <= n; ++mu)
    for (int nu = 1; nu <= n; ++nu) tt += wedge(Form::hol(n, mu), tau_[nu - 1].conj()) * h_(mu - 1, nu - 1);
  if (!tt.is_zero()) bad.push_back("theta^mu wedge tau_mu");
  if (A_ != A_.transpose()) bad.push_back("torsion symmetry");
  for (int a = 1; a <= n; ++a)
    for (int b = 1; b <= n; ++b)
      if (ricci_(a - 1, b - 1) != ricci_(b - 1, a - 1).conj()) bad.push_back("ricci hermitian");
  for (int a = 1; a <= n; ++a)
    for (int b = 1; b <= n; ++b) {
      Scalar tr;
      for (int r = 1; r <= n; ++r)
        for (int s = 1; s <= n; ++s) tr += chern(r, s, a, b) * hup_(r - 1, s - 1);
      if (!tr.is_zero()) bad.push_back("chern trace");
    }
  // Bianchi identity.
  for (int a = 1; a <= n; ++a)
    for (int g = 1; g <= n; ++g) {
      Form lhs = d(Omega_[a - 1][g - 1]);
      for (int mu = 1; mu <= n; ++mu) {
        lhs -= wedge(omega_[a - 1][mu - 1], Omega_[mu - 1][g - 1]);
        lhs += wedge(Omega_[a - 1][mu - 1], omega_[mu - 1][g - 1]);
      }
      if (!lhs.is_zero()) bad.push_back("bianchi");
    }
  // Expansion of Ω_{αβ̄} in curvature and torsion.
  Tensor dA = nabla(torsion_tensor());
  for (int a = 1; a <= n; ++a)
    for (int b = 1; b <= n; ++b) {
      Form low(n);
      for (int g = 1; g <= n; ++g) low += Omega_[a - 1][g - 1] * h_(g - 1, b - 1);
      Form rhs(n);
      for (int r = 1; r <= n; ++r)
        for (int s = 1; s <= n; ++s) rhs += wedge(Form::hol(n, r), Form::anti(n, s)) * R(a, b, r, s);
      for (int r = 1; r <= n; ++r) {
        rhs -= dA.get({a, r, dir_anti(n, b)}) * wedge(Form::theta(n), Form::hol(n, r));
        rhs += dA.get({dir_anti(n, b), dir_anti(n, r), a}) * wedge(Form::theta(n), Form::anti(n, r));
      }
      Form theta_a(n), tau_b(n), tau_a(n), theta_b(n);
      for (int nu = 1; nu <= n; ++nu) {
        theta_a += Form::anti(n, nu) * h_(a - 1, nu - 1);
        tau_b += tau_[nu - 1] * h_(nu - 1, b - 1);
        tau_a += tau_[nu - 1].conj() * h_(a - 1, nu - 1);
        theta_b += Form::hol(n, nu) * h_(nu - 1, b - 1);
      }
      rhs += wedge(theta_a, tau_b) * Scalar::I();
      rhs -= wedge(tau_a, theta_b) * Scalar::I();
      if (rhs != low) bad.push_back("curvature form expansion");
    }
  return bad;
}

}  // namespace rumin
