#include <catch2/catch_amalgamated.hpp>

#include "rumin/errors.hpp"
#include "rumin/spaces.hpp"
#include "support.hpp"

using namespace rumin;
using namespace rumin::test;

namespace {

Form wedge3(const Form& a, const Form& b, const Form& c) { return wedge(wedge(a, b), c); }

// Bidegree of conj(ω) for ω ∈ R^{p,q}.
Bidegree conj_bidegree(int n, int p, int q) {
  if (p + q <= n) return {q, p};
  return {q + 1, p - 1};
}

}  // namespace

TEST_CASE("Gamma examples", "[spaces]") {
  for (int n = 1; n <= 3; ++n) {
    Model m = Model::heisenberg(n, true);
    Spaces s(m);
    CHECK(s.gamma(m.dtheta()) == th(n));
    CHECK(s.gamma(wedge(th(n), dz(n, 1))).is_zero());
    CHECK(s.gamma(Form::one(n)).is_zero());
    CHECK(s.gamma(dz(n, 1)).is_zero());
  }
  Model m = Model::heisenberg(2, true);
  Spaces s(m);
  // θ∧dz¹∧dz̄¹∧dθ = ξ θ∧dθ² with dθ² = -2 dz¹∧dz̄¹∧dz²∧dz̄²
  CHECK(s.gamma(wedge(dz(2, 1), dzb(2, 1))) == th(2) * (I * Scalar::frac(-1, 2)));
}

TEST_CASE("Gamma inverts the Lefschetz map", "[spaces]") {
  for (int n = 1; n <= 3; ++n) {
    Model m = Model::heisenberg(n, false);
    Spaces s(m);
    for (int r = 0; r + 2 <= n + 1; ++r)
      for (const Key& k : s.hkeys(r)) {
        Form w = Form::monomial(n, k, mixed_poly(n, r + 1));
        CHECK(s.gamma(s.L(w)) == w.theta_wedge());
        CHECK(s.gamma(w.theta_wedge()).is_zero());
      }
  }
}

TEST_CASE("pi examples", "[spaces]") {
  for (int n = 1; n <= 3; ++n) {
    Model m = Model::heisenberg(n, false);
    Spaces s(m);
    Form f = Form::scalar(n, Poly::t() * Poly::z(1));
    CHECK(s.pi(f) == f);
    CHECK(s.pi(m.dtheta()).is_zero());
  }
  Model m = Model::heisenberg(2, true);
  Spaces s(m);
  Form a = wedge(dz(2, 1), dzb(2, 1)), b = wedge(dz(2, 2), dzb(2, 2));
  CHECK(s.pi(a) == (a - b) * Scalar::frac(1, 2));
}

TEST_CASE("pi lands in R^k and is idempotent on invariant monomials", "[spaces]") {
  for (int n = 1; n <= 3; ++n) {
    Model m = Model::heisenberg(n, true);
    Spaces s(m);
    for (int k = 0; k <= 2 * n + 1; ++k)
      for (const Key& key : s.keys(k)) {
        Form w = Form::monomial(n, key);
        Form pw = s.pi(w);
        CHECK(s.in_R(pw, k));
        CHECK(s.pi(pw) == pw);
        CHECK(s.pi(m.d(w)) == m.d(pw));
      }
  }
}

TEST_CASE("pi on polynomial forms of the Heisenberg group", "[spaces]") {
  for (int n = 1; n <= 2; ++n) {
    Model m = Model::heisenberg(n, false);
    Spaces s(m);
    auto coeffs = poly_samples(n, 2);
    for (int k = 0; k <= 2 * n + 1; ++k)
      for (std::size_t i = 0; i < s.keys(k).size(); ++i) {
        const Poly& c = coeffs[(i * 7 + k) % coeffs.size()];
        Form w = Form::monomial(n, s.keys(k)[i], c + mixed_poly(n, int(i)));
        Form pw = s.pi(w);
        INFO("n=" << n << " w=" << w.str());
        CHECK(s.in_R(pw, k));
        CHECK(s.pi(pw) == pw);
        CHECK(s.pi(m.d(w)) == m.d(pw));
      }
  }
}

TEST_CASE("membership rejects the ideal generated by theta and dtheta", "[spaces]") {
  for (int n = 1; n <= 3; ++n) {
    Model m = Model::heisenberg(n, true);
    Spaces s(m);
    for (int k = 1; k <= n; ++k) {
      for (const Key& key : s.hkeys(k - 1)) {
        Form a = Form::monomial(n, key);
        Form ta = a.theta_wedge();
        CHECK_FALSE(s.in_R(ta, k));
        CHECK(s.pi(ta).is_zero());
        if (k >= 2) {
          Form b = Form::monomial(n, s.hkeys(k - 2).front());
          Form bd = s.L(b);
          CHECK_FALSE(s.in_R(bd, k));
          CHECK(s.pi(bd).is_zero());
        }
      }
    }
  }
}

TEST_CASE("Lefschetz decomposition ranks", "[spaces]") {
  for (int n = 1; n <= 3; ++n) {
    Model m = Model::heisenberg(n, true);
    Spaces s(m);
    for (int p = 0; p <= n; ++p)
      for (int q = 0; p + q <= n; ++q) {
        auto keys = keys_of_bidegree(n, p, q, false);
        Matrix Lnk = s.lefschetz_pq(p, q, n - p - q);
        CHECK(rank(Lnk) == keys.size());
        Matrix Lnk1 = s.lefschetz_pq(p, q, n + 1 - p - q);
        // Λ restricted to Λ^{p,q}
        auto low = keys_of_bidegree(n, p - 1, q - 1, false);
        Matrix Lam(low.size(), keys.size());
        for (std::size_t j = 0; j < keys.size(); ++j) {
          Form img = s.Lambda(Form::monomial(n, keys[j]));
          for (std::size_t i = 0; i < low.size(); ++i) Lam(i, j) = img.constant_coeff(low[i]);
        }
        auto kerL = kernel_basis(Lnk1);
        auto kerLam = kernel_basis(Lam);
        CHECK(kerL.size() == kerLam.size());
        CHECK(intersect_spans(kerL, kerLam, keys.size()).size() == kerL.size());
        // the θ∧ version used for Λ(θ∧ω)
        for (const Key& k : keys) {
          Form w = Form::monomial(n, k);
          CHECK(s.Lambda(w.theta_wedge()) == s.Lambda(w).theta_wedge());
        }
      }
  }
}

TEST_CASE("Lambda is the adjoint of L", "[spaces]") {
  std::vector<Model> models;
  for (int n = 1; n <= 3; ++n) models.push_back(Model::heisenberg(n, true));
  models.push_back(load("skew_levi_n2.json"));
  models.push_back(load("rescaled_levi_n1.json"));
  for (const Model& m : models) {
    Spaces s(m);
    int n = m.n();
    for (int p = 0; p < n; ++p)
      for (int q = 0; q < n; ++q) {
        auto lo = keys_of_bidegree(n, p, q, false);
        auto hi = keys_of_bidegree(n, p + 1, q + 1, false);
        for (const Key& a : hi)
          for (const Key& b : lo) {
            Form x = Form::monomial(n, a), y = Form::monomial(n, b);
            CHECK(s.inner_horizontal(s.Lambda(x), y) == s.inner_horizontal(x, s.L(y)));
          }
      }
    // Λ(θ∧dθ) on n = 1 pairs with θ as L does.
    if (n == 1) {
      Form td = wedge(th(1), m.dtheta());
      Form lam = s.Lambda(td);
      CHECK(lam == th(1));
      CHECK(s.inner_horizontal(lam.contract_reeb(), Form::one(1)) ==
            s.inner_horizontal(td.contract_reeb(), s.L(th(1)).contract_reeb()));
    }
  }
}

TEST_CASE("Lambda kills theta wedge primitives", "[spaces]") {
  Model m = Model::heisenberg(2, true);
  Spaces s(m);
  Form prim = wedge(dz(2, 1), dzb(2, 1)) - wedge(dz(2, 2), dzb(2, 2));
  CHECK(s.Lambda(prim.theta_wedge()).is_zero());
  CHECK_FALSE(s.Lambda(m.dtheta().theta_wedge()).is_zero());
}

TEST_CASE("pi_pq examples and reconstruction", "[spaces]") {
  Model m1 = Model::heisenberg(1, false);
  Spaces s1(m1);
  CHECK(s1.pi_pq(dz(1, 1), 1, 0) == dz(1, 1));
  CHECK(s1.pi_pq(dz(1, 1) + dzb(1, 1), 1, 0) == dz(1, 1));
  CHECK(s1.pi_pq(wedge(th(1), dzb(1, 1)), 1, 1) == wedge(th(1), dzb(1, 1)));
  CHECK_THROWS_AS(s1.pi_pq(dz(1, 1), 2, 0), BadBidegree);
  CHECK_THROWS_AS(s1.pi_pq(dz(1, 1), 1, 1), BadBidegree);

  for (int n = 1; n <= 3; ++n) {
    Model m = Model::heisenberg(n, true);
    Spaces s(m);
    for (int k = 0; k <= 2 * n + 1; ++k)
      for (const Key& key : s.keys(k)) {
        Form w = s.pi(Form::monomial(n, key));
        Form sum(n);
        for (int p = std::max(0, k - n); p <= std::min(k, n + 1); ++p) {
          Form c = s.pi_pq(w, p, k - p);
          CHECK(s.in_Rpq(c, p, k - p));
          sum += c;
        }
        CHECK(sum == w);
      }
  }
}

TEST_CASE("project_E", "[spaces]") {
  Model m = Model::heisenberg(1, false);
  Spaces s(m);
  Poly zzb = Poly::z(1) * Poly::zbar(1);
  Form x = dzb(1, 1) * zzb;
  Form e = s.project_E(x, 0, 1);
  CHECK(e == x + th(1) * (Poly::zbar(1) * I));
  CHECK(s.in_Rpq(e, 0, 1));
  CHECK(e.horizontal() == x);
  CHECK(s.project_E(dz(1, 1), 1, 0) == dz(1, 1));
  Model m2 = Model::heisenberg(2, true);
  CHECK_THROWS_AS(Spaces(m2).project_E(m2.dtheta(), 1, 1), NotTraceFree);
  CHECK_THROWS_AS(s.project_E(dz(1, 1), 0, 1), BadBidegree);

  // Formula path against the projection path on primitive polynomial inputs.
  for (int n = 1; n <= 2; ++n) {
    Model mp = Model::heisenberg(n, false);
    Spaces sp(mp);
    auto coeffs = poly_samples(n, 2);
    for (int p = 0; p <= n; ++p)
      for (int q = 0; p + q <= n; ++q) {
        Matrix Lk = sp.lefschetz_pq(p, q, n + 1 - p - q);
        auto keys = keys_of_bidegree(n, p, q, false);
        for (const Vector& v : kernel_basis(Lk))
          for (std::size_t c = 0; c < coeffs.size(); c += 3) {
            Form xin(n);
            for (std::size_t i = 0; i < keys.size(); ++i)
              if (!v[i].is_zero()) xin.add(keys[i], coeffs[c] * v[i]);
            Form a = sp.project_E(xin, p, q);
            INFO("n=" << n << " x=" << xin.str());
            CHECK(a == sp.pi(xin));
            CHECK(sp.in_Rpq(a, p, q));
          }
      }
  }
}

TEST_CASE("extract_primitive", "[spaces]") {
  Model m = Model::heisenberg(1, true);
  Spaces s(m);
  CHECK(s.extract_primitive(wedge(th(1), dzb(1, 1)), 1, 1) == dzb(1, 1));
  for (int n = 1; n <= 3; ++n) {
    Model mn = Model::heisenberg(n, true);
    Spaces sn(mn);
    Form vol = wedge(th(n), power(mn.dtheta(), n)) * Scalar(mpq_class(1) / factorial(n));
    CHECK(sn.extract_primitive(vol, n + 1, n) == Form::one(n));
    for (int p = 0; p <= n + 1; ++p)
      for (int q = 0; q <= n; ++q) {
        if (p + q < n + 1) continue;
        InvariantBasis b = sn.basis_Rpq(p, q);
        for (const Form& w : b.elems) {
          Form tau = sn.extract_primitive(w, p, q);
          CHECK(sn.in_Rpq(tau, n - q, n + 1 - p));
          CHECK(sn.from_primitive(tau, p, q) == w);
        }
      }
  }
}

TEST_CASE("inner product", "[spaces]") {
  Model m = Model::heisenberg(1, true);
  Spaces s(m);
  CHECK(s.inner(dz(1, 1), dz(1, 1), 1, 0) == Poly(1));
  CHECK_THROWS_AS(s.inner(dz(1, 1), dzb(1, 1), 1, 0), BidegreeMismatch);
  Model r = load("rescaled_levi_n1.json");
  Spaces sr(r);
  CHECK(sr.inner(dz(1, 1), dz(1, 1), 1, 0) == Poly(Scalar::frac(1, 2)));
  for (int n = 1; n <= 3; ++n) {
    Model mn = Model::heisenberg(n, true);
    Spaces sn(mn);
    for (int p = 0; p <= n + 1; ++p)
      for (int q = 0; q <= n; ++q) {
        InvariantBasis b = sn.basis_Rpq(p, q);
        if (b.dim() == 0) continue;
        Matrix g = sn.gram(b.elems, p, q);
        CHECK(g == g.adjoint());
        CHECK(is_positive_definite(g));
      }
  }
}

TEST_CASE("Hodge star examples", "[spaces]") {
  for (int n = 1; n <= 3; ++n) {
    Model m = Model::heisenberg(n, true);
    Spaces s(m);
    Form vol = wedge(th(n), power(m.dtheta(), n)) * Scalar(mpq_class(1) / factorial(n));
    CHECK(s.star(Form::one(n), 0, 0) == vol);
    CHECK(s.star(vol, n + 1, n) == Form::one(n));
  }
  Model m = Model::heisenberg(1, true);
  Spaces s(m);
  CHECK(s.star(dz(1, 1), 1, 0) == wedge(th(1), dz(1, 1)) * I);
  Model mixed = load("mixed_signature_n2.json");
  Spaces sm(mixed);
  CHECK_THROWS_AS(sm.star(Form::one(2), 0, 0), NotStrictlyPseudoconvex);
  // The pairing is still available in mixed signature.
  CHECK(sm.inner(dz(2, 2), dz(2, 2), 1, 0) == Poly(-1));
}

TEST_CASE("Hodge star squares to one and realizes the defining pairing", "[spaces]") {
  std::vector<Model> models;
  for (int n = 1; n <= 3; ++n) models.push_back(Model::heisenberg(n, true));
  models.push_back(load("skew_levi_n2.json"));
  models.push_back(load("torsion_n1.json"));
  models.push_back(load("curved_n2.json"));
  for (const Model& m : models) {
    Spaces s(m);
    int n = m.n();
    Form vol = wedge(th(n), power(m.dtheta(), n)) * Scalar(mpq_class(1) / factorial(n));
    for (int p = 0; p <= n + 1; ++p)
      for (int q = 0; q <= n; ++q) {
        InvariantBasis b = s.basis_Rpq(p, q);
        Bidegree sb = s.star_bidegree(p, q);
        Bidegree cb = conj_bidegree(n, p, q);
        for (const Form& w : b.elems) {
          Form sw = s.star(w, p, q);
          INFO(m.name() << " (" << p << "," << q << ") " << w.str());
          CHECK(s.in_Rpq(sw, sb.p, sb.q));
          CHECK(s.star(sw, sb.p, sb.q) == w);
          CHECK(s.in_Rpq(w.conj(), cb.p, cb.q));
          CHECK(s.star(w.conj(), cb.p, cb.q) == sw.conj());
          for (const Form& t : b.elems) {
            Form lhs = wedge(w, s.star(t.conj(), cb.p, cb.q));
            CHECK(lhs == vol * s.inner(w, t, p, q));
          }
        }
      }
  }
}

TEST_CASE("invariant bases", "[spaces]") {
  Model m = Model::heisenberg(1, true);
  Spaces s(m);
  CHECK(s.basis_R(0).dim() == 1);
  CHECK(s.basis_Rpq(0, 1).elems == std::vector<Form>{dzb(1, 1)});
  CHECK(s.basis_Rpq(1, 0).elems == std::vector<Form>{dz(1, 1)});
  InvariantBasis top = s.basis_R(3);
  REQUIRE(top.dim() == 1);
  CHECK(top.elems[0] == wedge3(th(1), dz(1, 1), dzb(1, 1)));
  Model p = Model::heisenberg(1, false);
  Spaces sp(p);
  CHECK_THROWS_AS(sp.basis_R(0), NotInvariantModel);
  // Dimensions of R^k add up over bidegrees.
  for (int n = 1; n <= 3; ++n) {
    Model mn = Model::heisenberg(n, true);
    Spaces sn(mn);
    for (int k = 0; k <= 2 * n + 1; ++k) {
      std::size_t sum = 0;
      for (int pp = 0; pp <= k; ++pp) sum += sn.basis_Rpq(pp, k - pp).dim();
      CHECK(sum == sn.basis_R(k).dim());
      // R^k ≅ R^{2n+1-k}
      CHECK(sn.basis_R(k).dim() == sn.basis_R(2 * n + 1 - k).dim());
    }
  }
}
