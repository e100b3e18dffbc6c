#include "rumin/poly.hpp"

#include <sstream>

namespace rumin {

Poly::Poly(const Scalar& c) {
  if (!c.is_zero()) terms_.emplace(Monomial{}, c);
}

Poly Poly::variable(int var) {
  Monomial m{};
  m[var] = 1;
  return monomial(m, Scalar(1));
}

Poly Poly::monomial(const Monomial& m, const Scalar& c) {
  Poly p;
  p.add_term(m, c);
  return p;
}

void Poly::add_term(const Monomial& m, const Scalar& c) {
  if (c.is_zero()) return;
  auto it = terms_.find(m);
  if (it == terms_.end()) {
    terms_.emplace(m, c);
    return;
  }
  it->second += c;
  if (it->second.is_zero()) terms_.erase(it);
}

bool Poly::is_constant() const {
  return terms_.empty() || (terms_.size() == 1 && terms_.begin()->first == Monomial{});
}

Scalar Poly::constant() const {
  auto it = terms_.find(Monomial{});
  return it == terms_.end() ? Scalar() : it->second;
}

int Poly::total_degree() const {
  int d = 0;
  for (const auto& [m, c] : terms_) {
    int s = 0;
    for (auto e : m) s += e;
    d = std::max(d, s);
  }
  return d;
}

Poly& Poly::operator+=(const Poly& o) {
  for (const auto& [m, c] : o.terms_) add_term(m, c);
  return *this;
}

Poly& Poly::operator-=(const Poly& o) {
  for (const auto& [m, c] : o.terms_) add_term(m, -c);
  return *this;
}

Poly& Poly::operator*=(const Scalar& s) {
  if (s.is_zero()) {
    terms_.clear();
    return *this;
  }
  for (auto& [m, c] : terms_) c *= s;
  return *this;
}

Poly operator*(const Poly& a, const Poly& b) {
  Poly out;
  for (const auto& [ma, ca] : a.terms_)
    for (const auto& [mb, cb] : b.terms_) {
      Monomial m;
      for (int v = 0; v < kNumVars; ++v) m[v] = ma[v] + mb[v];
      out.add_term(m, ca * cb);
    }
  return out;
}

Poly Poly::operator-() const {
  Poly p = *this;
  return p *= Scalar(-1);
}

Poly Poly::conj() const {
  Poly out;
  for (const auto& [m, c] : terms_) {
    Monomial mc = m;
    for (int a = 1; a <= kMaxPolyN; ++a) std::swap(mc[var_z(a)], mc[var_zbar(a)]);
    out.add_term(mc, c.conj());
  }
  return out;
}

Poly Poly::partial(int var) const {
  Poly out;
  for (const auto& [m, c] : terms_) {
    if (m[var] == 0) continue;
    Monomial md = m;
    md[var] -= 1;
    out.add_term(md, c * Scalar(static_cast<long>(m[var])));
  }
  return out;
}

std::string Poly::str() const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [m, c] : terms_) {
    if (!first) os << " + ";
    first = false;
    std::string vars;
    for (int v = 0; v < kNumVars; ++v) {
      if (!m[v]) continue;
      std::string name = v == var_t() ? "t"
                         : v < kMaxPolyN ? "z" + std::to_string(v + 1)
                                         : "zb" + std::to_string(v - kMaxPolyN + 1);
      vars += (vars.empty() ? "" : "*") + name + (m[v] > 1 ? "^" + std::to_string(m[v]) : "");
    }
    if (vars.empty())
      os << "(" << c.str() << ")";
    else if (c.is_one())
      os << vars;
    else
      os << "(" << c.str() << ")*" << vars;
  }
  return os.str();
}

}  // namespace rumin
