#include <catch2/catch_amalgamated.hpp>

#include "rumin/errors.hpp"
#include "rumin/form.hpp"
#include "rumin/model.hpp"

using namespace rumin;

namespace {

const Scalar I = Scalar::I();

// Independent oracle: a form as a map from *ordered coframe words* to scalars,
// multiplied by concatenation and reduced by bubble sort. Coframe letters:
// 0 = θ, α = θ^α, n+α = θ^ᾱ, ordered by that numbering (which matches the key order).
std::map<std::vector<int>, Scalar> word_form(const Form& w) {
  std::map<std::vector<int>, Scalar> out;
  int n = w.n();
  for (const auto& [k, c] : w.terms()) {
    std::vector<int> word;
    if (k.theta) word.push_back(0);
    for (int a : from_mask(k.A)) word.push_back(a);
    for (int b : from_mask(k.B)) word.push_back(n + b);
    out[word] += c.constant();
  }
  return out;
}

std::map<std::vector<int>, Scalar> word_wedge(const std::map<std::vector<int>, Scalar>& a,
                                              const std::map<std::vector<int>, Scalar>& b) {
  std::map<std::vector<int>, Scalar> out;
  for (const auto& [wa, ca] : a)
    for (const auto& [wb, cb] : b) {
      std::vector<int> w = wa;
      w.insert(w.end(), wb.begin(), wb.end());
      int sign = 1;
      bool rep = false;
      for (std::size_t i = 0; i < w.size(); ++i)
        for (std::size_t j = 0; j + 1 < w.size() - i; ++j) {
          if (w[j] == w[j + 1]) rep = true;
          if (w[j] > w[j + 1]) {
            std::swap(w[j], w[j + 1]);
            sign = -sign;
          }
        }
      for (std::size_t j = 0; j + 1 < w.size(); ++j)
        if (w[j] == w[j + 1]) rep = true;
      if (rep) continue;
      out[w] += ca * cb * Scalar(sign);
    }
  for (auto it = out.begin(); it != out.end();)
    it = it->second.is_zero() ? out.erase(it) : std::next(it);
  return out;
}

std::vector<Form> all_monomials(int n) {
  std::vector<Form> out;
  for (int k = 0; k <= 2 * n + 1; ++k)
    for (const auto& key : keys_of_degree(n, k)) out.push_back(Form::monomial(n, key));
  return out;
}

}  // namespace

TEST_CASE("canonicalize examples", "[exterior]") {
  CHECK(canonicalize({2, 1}, 3) == std::pair<MultiIndex, int>{{1, 2}, -1});
  CHECK(canonicalize({1, 1}, 3).second == 0);
  CHECK(canonicalize({3, 1, 2}, 3) == std::pair<MultiIndex, int>{{1, 2, 3}, 1});
  CHECK_THROWS_AS(canonicalize({4}, 3), IndexOutOfRange);
  CHECK_THROWS_AS(canonicalize({0}, 3), IndexOutOfRange);
}

TEST_CASE("key ordering is lexicographic in (theta, A, B)", "[exterior]") {
  auto keys = keys_of_degree(2, 2);
  // horizontal first; A = () < (1) < (1,2) < (2)
  CHECK(keys.front() == Key{false, 0, 3});
  CHECK(keys[1] == Key{false, 1, 1});
  CHECK(keys.back() == Key{true, 2, 0});
  CHECK(lex_less(1u, 3u));
  CHECK(lex_less(3u, 2u));
}

TEST_CASE("wedge examples", "[exterior]") {
  Form dz = Form::hol(1, 1), dzb = Form::anti(1, 1), th = Form::theta(1);
  CHECK(wedge(dz, Form::one(1)) == dz);
  CHECK(wedge(dz, dz).is_zero());
  Form top = wedge(th, wedge(dz, dzb));
  CHECK(top == Form::monomial(1, Key{true, 1, 1}));
  CHECK(wedge(dzb, dz) == -wedge(dz, dzb));
  CHECK(wedge(wedge(dz, dzb), th) == top);
  CHECK_THROWS_AS(wedge(Form::hol(1, 1), Form::hol(2, 1)), DimensionMismatch);
}

TEST_CASE("wedge matches word oracle, graded-commutative, conjugation", "[exterior][property]") {
  for (int n = 1; n <= 3; ++n) {
    auto mons = all_monomials(n);
    std::size_t step = n == 3 ? 3 : 1;
    for (std::size_t i = 0; i < mons.size(); i += step)
      for (std::size_t j = 0; j < mons.size(); j += step) {
        const Form &a = mons[i], &b = mons[j];
        Form ab = wedge(a, b);
        REQUIRE(word_form(ab) == word_wedge(word_form(a), word_form(b)));
        int s = (a.degree() * b.degree()) % 2 ? -1 : 1;
        REQUIRE(ab == wedge(b, a) * Scalar(s));
        REQUIRE(ab.conj() == wedge(a.conj(), b.conj()));
      }
    for (const auto& a : mons) REQUIRE(a.conj().conj() == a);
  }
}

TEST_CASE("wedge is associative", "[exterior][property]") {
  int n = 2;
  auto mons = all_monomials(n);
  for (std::size_t i = 0; i < mons.size(); i += 3)
    for (std::size_t j = 1; j < mons.size(); j += 5)
      for (std::size_t k = 2; k < mons.size(); k += 7)
        REQUIRE(wedge(wedge(mons[i], mons[j]), mons[k]) == wedge(mons[i], wedge(mons[j], mons[k])));
}

TEST_CASE("conjugation swaps A and B with the reordering sign", "[exterior]") {
  int n = 2;
  Form w = wedge(Form::hol(n, 1), Form::anti(n, 2)) * Scalar::gaussian(1, 1, 2, 1);
  // conj(θ^1∧θ^2̄) = θ^1̄∧θ^2 = -θ^2∧θ^1̄
  CHECK(w.conj() == wedge(Form::hol(n, 2), Form::anti(n, 1)) * Scalar::gaussian(-1, 1, 2, 1));
  Poly f = Poly::z(1) * Poly::t();
  CHECK(f.conj() == Poly::zbar(1) * Poly::t());
}

TEST_CASE("skew symmetrization", "[exterior]") {
  int n = 2;
  // p = 0: nothing to skew
  Form w0 = Form::anti(n, 1);
  std::vector<Poly> tau{Poly(3), Poly()};
  CHECK(skew_hol(tau, w0) == Form::monomial(n, Key{false, 1, 1}, Poly(3)));
  // p = 1: τ = θ^1, ω = θ^2 gives the 2-term alternation τ_1 ω_2 - τ_2 ω_1 = 1
  std::vector<Poly> t1{Poly(1), Poly()};
  Form s = skew_hol(t1, Form::hol(n, 2));
  CHECK(s == wedge(Form::hol(n, 1), Form::hol(n, 2)));
  // fixed index: p P_[α^μ ω_μ] for p = 1 is P_α^μ ω_μ
  Matrix P{{1, 2}, {I, 0}};
  Form om = Form::hol(n, 1) * Scalar(5) + Form::hol(n, 2) * Scalar(7);
  Form expect = Form::hol(n, 1) * Scalar(5 + 14) + Form::hol(n, 2) * (I * Scalar(5));
  CHECK(fixed_index_hol(P, om) == expect);
  // identity endomorphism acts by p on (p,q)-forms
  Form w2 = wedge(Form::hol(n, 1), wedge(Form::hol(n, 2), Form::anti(n, 1)));
  CHECK(fixed_index_hol(Matrix::identity(n), w2) == w2 * Scalar(2));
  CHECK(fixed_index_anti(Matrix::identity(n), w2) == w2);
}

TEST_CASE("skew_hol agrees with wedge on horizontal forms", "[exterior][property]") {
  int n = 3;
  for (const auto& key : keys_of_degree(n, 3)) {
    if (key.theta) continue;
    Form w = Form::monomial(n, key);
    for (int a = 1; a <= n; ++a) {
      std::vector<Poly> tau(n);
      tau[a - 1] = Poly(1);
      REQUIRE(skew_hol(tau, w) == wedge(Form::hol(n, a), w));
      // antiholomorphic: θ^b̄ ∧ θ^A∧θ^B̄ = (-1)^p θ^A∧θ^b̄∧θ^B̄
      Scalar s = sign_pow(key.p());
      REQUIRE(skew_anti(tau, w) * s == wedge(Form::anti(n, a), w));
    }
  }
}

TEST_CASE("derivations on the Heisenberg group", "[exterior]") {
  Model h1 = Model::heisenberg(1, false);
  int n = 1;
  CHECK(h1.derive(0, Poly::t()) == Poly(1));
  CHECK(h1.derive(dir_hol(1), Poly::z(1)) == Poly(1));
  CHECK(h1.derive(dir_hol(1), Poly::zbar(1)).is_zero());
  Poly t = Poly::t();
  Poly lhs = h1.derive(dir_anti(n, 1), h1.derive(dir_hol(1), t)) - h1.derive(dir_hol(1), h1.derive(dir_anti(n, 1), t));
  CHECK(lhs == Poly(I));
  // product rule
  Poly f = Poly::z(1) * Poly::t() + Poly::zbar(1) * Poly::zbar(1), g = Poly::t() * Poly::t() + Poly(I);
  for (int a = 0; a <= 2 * n; ++a)
    CHECK(h1.derive(a, f * g) == h1.derive(a, f) * g + f * h1.derive(a, g));
  Model q1 = Model::heisenberg(1, true);
  CHECK(q1.derive(0, Poly(5)).is_zero());
  CHECK_THROWS_AS(q1.derive(0, Poly::t()), NotInvariantModel);
}

TEST_CASE("d squared vanishes on polynomial forms", "[exterior][property]") {
  for (int n = 1; n <= 2; ++n) {
    Model m = Model::heisenberg(n, false);
    std::vector<Poly> gens{Poly(1), Poly::t()};
    for (int a = 1; a <= n; ++a) {
      gens.push_back(Poly::z(a));
      gens.push_back(Poly::zbar(a));
      gens.push_back(Poly::z(a) * Poly::t());
      gens.push_back(Poly::zbar(a) * Poly::z(1) * Poly::t());
    }
    for (int k = 0; k <= 2 * n; ++k)
      for (const auto& key : keys_of_degree(n, k))
        for (const auto& g : gens) {
          Form w = Form::monomial(n, key, g);
          REQUIRE(m.d(m.d(w)).is_zero());
        }
  }
}

TEST_CASE("coordinate differential of theta", "[exterior]") {
  // On H^1, θ = dt + (i/2)(z dzb - zb dz) and dz, dzb are the other coframe members.
  // Checking df for f = t: df = Tt θ + Z t dz + Zb t dzb must equal dt = θ - (i/2)(z dzb - zb dz).
  Model m = Model::heisenberg(1, false);
  Form dt = m.d(Form::scalar(1, Poly::t()));
  Form expect = Form::theta(1) - Form::anti(1, 1) * (Scalar(0, mpq_class(1, 2))) * Poly::z(1) +
                Form::hol(1, 1) * Scalar(0, mpq_class(1, 2)) * Poly::zbar(1);
  CHECK(dt == expect);
}
