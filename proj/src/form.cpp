#include "rumin/form.hpp"

#include <sstream>

#include "rumin/errors.hpp"

namespace rumin {

Form Form::scalar(int n, const Poly& f) {
  Form w(n);
  w.add(Key{}, f);
  return w;
}

Form Form::theta(int n) { return monomial(n, Key{true, 0, 0}); }

Form Form::hol(int n, int alpha) {
  if (alpha < 1 || alpha > n) throw IndexOutOfRange("θ^" + std::to_string(alpha));
  return monomial(n, Key{false, 1u << (alpha - 1), 0});
}

Form Form::anti(int n, int beta) {
  if (beta < 1 || beta > n) throw IndexOutOfRange("θ^" + std::to_string(beta) + "bar");
  return monomial(n, Key{false, 0, 1u << (beta - 1)});
}

Form Form::monomial(int n, const Key& k, const Poly& c) {
  Form w(n);
  w.add(k, c);
  return w;
}

int Form::degree() const {
  if (terms_.empty()) return -1;
  int d = terms_.begin()->first.degree();
  for (const auto& [k, c] : terms_)
    if (k.degree() != d) throw BadBidegree("inhomogeneous form");
  return d;
}

bool Form::is_constant() const {
  for (const auto& [k, c] : terms_)
    if (!c.is_constant()) return false;
  return true;
}

Poly Form::coeff(const Key& k) const {
  auto it = terms_.find(k);
  return it == terms_.end() ? Poly() : it->second;
}

Scalar Form::constant_coeff(const Key& k) const { return coeff(k).constant(); }

void Form::add(const Key& k, const Poly& c) {
  if (c.is_zero()) return;
  auto it = terms_.find(k);
  if (it == terms_.end()) {
    terms_.emplace(k, c);
    return;
  }
  it->second += c;
  if (it->second.is_zero()) terms_.erase(it);
}

Form& Form::operator+=(const Form& o) {
  if (o.terms_.empty()) return *this;
  if (n_ != o.n_ && !terms_.empty()) throw DimensionMismatch("form sum");
  n_ = o.n_;
  for (const auto& [k, c] : o.terms_) add(k, c);
  return *this;
}

Form& Form::operator-=(const Form& o) {
  if (o.terms_.empty()) return *this;
  if (n_ != o.n_ && !terms_.empty()) throw DimensionMismatch("form difference");
  n_ = o.n_;
  for (const auto& [k, c] : o.terms_) add(k, -c);
  return *this;
}

Form& Form::operator*=(const Scalar& s) {
  if (s.is_zero()) {
    terms_.clear();
    return *this;
  }
  for (auto& [k, c] : terms_) c *= s;
  return *this;
}

Form& Form::operator*=(const Poly& f) {
  Terms out;
  for (const auto& [k, c] : terms_) {
    Poly pc = c * f;
    if (!pc.is_zero()) out.emplace(k, std::move(pc));
  }
  terms_ = std::move(out);
  return *this;
}

Form Form::conj() const {
  Form w(n_);
  for (const auto& [k, c] : terms_) {
    Poly cc = c.conj();
    if ((popcount(k.A) * popcount(k.B)) % 2) cc = -cc;
    w.add(Key{k.theta, k.B, k.A}, cc);
  }
  return w;
}

Form Form::horizontal() const {
  Form w(n_);
  for (const auto& [k, c] : terms_)
    if (!k.theta) w.terms_.emplace(k, c);
  return w;
}

Form Form::contract_reeb() const {
  Form w(n_);
  for (const auto& [k, c] : terms_)
    if (k.theta) w.terms_.emplace(Key{false, k.A, k.B}, c);
  return w;
}

Form Form::theta_wedge() const {
  Form w(n_);
  for (const auto& [k, c] : terms_)
    if (!k.theta) w.terms_.emplace(Key{true, k.A, k.B}, c);
  return w;
}

Form Form::part(int p, int q) const {
  Form w(n_);
  for (const auto& [k, c] : terms_)
    if (!k.theta && k.p() == p && k.q() == q) w.terms_.emplace(k, c);
  return w;
}

Form Form::theta_part(int p, int q) const {
  Form w(n_);
  for (const auto& [k, c] : terms_)
    if (k.theta && k.p() == p && k.q() == q) w.terms_.emplace(k, c);
  return w;
}

std::string Form::str() const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [k, c] : terms_) {
    os << (first ? "" : " + ") << "(" << c.str() << ")";
    if (k.degree() > 0) os << " " << k.str();
    first = false;
  }
  return os.str();
}

Form wedge(const Form& a, const Form& b) {
  if (a.n() != b.n() && !a.is_zero() && !b.is_zero()) throw DimensionMismatch("wedge");
  Form w(a.is_zero() ? b.n() : a.n());
  for (const auto& [ka, ca] : a.terms())
    for (const auto& [kb, cb] : b.terms()) {
      auto [k, s] = wedge_keys(ka, kb);
      if (s == 0) continue;
      Poly c = ca * cb;
      if (s < 0) c = -c;
      w.add(k, c);
    }
  return w;
}

Form power(const Form& a, int k) {
  Form w = Form::one(a.n());
  for (int j = 0; j < k; ++j) w = wedge(w, a);
  return w;
}

Poly component(const Form& w, bool theta, const std::vector<int>& A, const std::vector<int>& B) {
  auto [sa, ea] = canonicalize(A, w.n());
  auto [sb, eb] = canonicalize(B, w.n());
  if (ea == 0 || eb == 0) return Poly();
  Poly c = w.coeff(Key{theta, to_mask(sa), to_mask(sb)});
  return (ea * eb < 0) ? -c : c;
}

Form skew_hol(const std::vector<Poly>& tau, const Form& w) {
  int n = w.n();
  Form out(n);
  for (const auto& [k, c] : w.terms())
    for (int a = 1; a <= n; ++a) {
      if ((k.A >> (a - 1)) & 1u) continue;
      if (tau[a - 1].is_zero()) continue;
      // τ_a ω_K lands on A ∪ {a} with the sign of moving a to its sorted slot.
      Poly v = tau[a - 1] * c;
      if (position_in(k.A, a) % 2) v = -v;
      out.add(Key{k.theta, k.A | (1u << (a - 1)), k.B}, v);
    }
  return out;
}

Form skew_anti(const std::vector<Poly>& tau, const Form& w) {
  int n = w.n();
  Form out(n);
  for (const auto& [k, c] : w.terms())
    for (int b = 1; b <= n; ++b) {
      if ((k.B >> (b - 1)) & 1u) continue;
      if (tau[b - 1].is_zero()) continue;
      Poly v = tau[b - 1] * c;
      if (position_in(k.B, b) % 2) v = -v;
      out.add(Key{k.theta, k.A, k.B | (1u << (b - 1))}, v);
    }
  return out;
}

Form fixed_index_hol(const Matrix& P, const Form& w) {
  int n = w.n();
  Form out(n);
  // Target component (A, B) gets Σ_j P_{α_j}^μ ω_{α_1..μ..α_p B}; equivalently each
  // source index μ in K.A is replaced by α with weight P_α^μ.
  for (const auto& [k, c] : w.terms()) {
    MultiIndex src = from_mask(k.A);
    for (std::size_t j = 0; j < src.size(); ++j) {
      int mu = src[j];
      for (int a = 1; a <= n; ++a) {
        const Scalar& pa = P(a - 1, mu - 1);
        if (pa.is_zero()) continue;
        std::vector<int> tgt = src;
        tgt[j] = a;
        auto [sorted, s] = canonicalize(tgt, n);
        if (s == 0) continue;
        Poly v = c * pa;
        if (s < 0) v = -v;
        out.add(Key{k.theta, to_mask(sorted), k.B}, v);
      }
    }
  }
  return out;
}

Form fixed_index_anti(const Matrix& P, const Form& w) {
  int n = w.n();
  Form out(n);
  for (const auto& [k, c] : w.terms()) {
    MultiIndex src = from_mask(k.B);
    for (std::size_t j = 0; j < src.size(); ++j) {
      int nu = src[j];
      for (int b = 1; b <= n; ++b) {
        const Scalar& pb = P(b - 1, nu - 1);
        if (pb.is_zero()) continue;
        std::vector<int> tgt = src;
        tgt[j] = b;
        auto [sorted, s] = canonicalize(tgt, n);
        if (s == 0) continue;
        Poly v = c * pb;
        if (s < 0) v = -v;
        out.add(Key{k.theta, k.A, to_mask(sorted)}, v);
      }
    }
  }
  return out;
}

Form contract_hol(const Form& w, int mu) {
  Form out(w.n());
  std::uint32_t bit = 1u << (mu - 1);
  for (const auto& [k, c] : w.terms()) {
    if (!(k.A & bit)) continue;
    Poly v = c;
    if (position_in(k.A, mu) % 2) v = -v;
    out.add(Key{k.theta, k.A & ~bit, k.B}, v);
  }
  return out;
}

Form contract_anti(const Form& w, int nu) {
  Form out(w.n());
  std::uint32_t bit = 1u << (nu - 1);
  for (const auto& [k, c] : w.terms()) {
    if (!(k.B & bit)) continue;
    Poly v = c;
    if (position_in(k.B, nu) % 2) v = -v;
    out.add(Key{k.theta, k.A, k.B & ~bit}, v);
  }
  return out;
}

}  // namespace rumin
