#include <catch2/catch_amalgamated.hpp>

#include "rumin/cohomology.hpp"
#include "rumin/errors.hpp"
#include "rumin/verify.hpp"
#include "support.hpp"

using namespace rumin;
using namespace rumin::test;

namespace {

struct Ctx {
  Model m;
  Spaces s;
  Operators ops;
  Cohomology c;
  explicit Ctx(Model model) : m(std::move(model)), s(m), ops(s), c(ops) {}
};

std::size_t binom(int n, int k) { return static_cast<std::size_t>(binomial(n, k).get_num().get_ui()); }

template <class F>
void for_bidegrees(int n, F f) {
  for (int p = 0; p <= n + 1; ++p)
    for (int q = 0; q <= n; ++q)
      if (valid_bidegree(n, p, q)) f(p, q);
}

std::vector<Model> unimodular_models() {
  std::vector<Model> out;
  for (Model& m : invariant_models(2))
    if (m.unimodular()) out.push_back(std::move(m));
  return out;
}

}  // namespace

TEST_CASE("subquotient arithmetic", "[cohomology]") {
  Vector e1{Scalar(1), Scalar(0), Scalar(0)}, e2{Scalar(0), Scalar(1), Scalar(0)}, e3{Scalar(0), Scalar(0), Scalar(1)};
  // span(e1, e2, e1+e2) / span(e1)
  Subquotient q = Subquotient::make(3, {e1, e2, add(e1, e2)}, {e1});
  CHECK(q.dim() == 1);
  CHECK(q.reps.front() == e2);
  CHECK(q.classify(add(e1, scaled(e2, Scalar(3)))) == Vector{Scalar(3)});
  CHECK(is_zero(q.classify(e1)));
  CHECK_THROWS_AS(q.classify(e3), NotClosed);
}

TEST_CASE("invariant bases on I3", "[cohomology]") {
  Ctx x(Model::heisenberg(1, true));
  const GradedSpace& V0 = x.c.space(0);
  REQUIRE(V0.dim() == 1);
  CHECK(V0.elems()[0] == Form::one(1));
  CHECK(x.ops.basis(0, 1).elems == std::vector<Form>{dzb(1, 1)});
  CHECK(x.ops.basis(1, 0).elems == std::vector<Form>{dz(1, 1)});
  const GradedSpace& V3 = x.c.space(3);
  REQUIRE(V3.dim() == 1);
  CHECK(rank_of({V3.coords(wedge(wedge(th(1), dz(1, 1)), dzb(1, 1)))}, 1) == 1);
  CHECK_THROWS_AS(x.c.space(1).coords(th(1)), MembershipViolation);
}

TEST_CASE("polynomial models are rejected", "[cohomology]") {
  Model m = Model::heisenberg(1, false);
  Spaces s(m);
  Operators ops(s);
  CHECK_THROWS_AS(Cohomology(ops), NotInvariantModel);
}

TEST_CASE("block Gram matrix agrees with the degree Gram matrix", "[cohomology]") {
  for (const Model& m : invariant_models(2)) {
    Ctx x(m);
    int top = 2 * m.n() + 1;
    for (int k = 0; k <= top; ++k) {
      const GradedSpace& V = x.c.space(k);
      const InvariantBasis& D = x.ops.basis_degree(k);
      REQUIRE(D.dim() == V.dim());
      std::vector<Vector> cols;
      for (const Form& w : V.elems()) cols.push_back(D.coords(w, x.s));
      Matrix C = Matrix::from_columns(cols, D.dim());
      INFO(m.name() << " k=" << k);
      CHECK(C.adjoint() * x.ops.gram_degree(k) * C == V.gram());
    }
  }
}

TEST_CASE("de Rham cohomology of I3 and the naive ambient complex", "[cohomology]") {
  Ctx x(Model::heisenberg(1, true));
  std::vector<std::size_t> b;
  for (int k = 0; k <= 3; ++k) b.push_back(x.c.de_rham(k).dim());
  CHECK(b == std::vector<std::size_t>{1, 2, 2, 1});
  for (const Model& m : invariant_models(3)) {
    Ctx y(m);
    for (int k = 0; k <= 2 * m.n() + 1; ++k) {
      INFO(m.name() << " k=" << k);
      CHECK(y.c.de_rham(k).dim() == y.c.naive_de_rham(k));
    }
  }
}

TEST_CASE("cohomology representatives are cocycles", "[cohomology]") {
  for (const Model& m : invariant_models(2)) {
    Ctx x(m);
    int N = m.n();
    for (int k = 0; k <= 2 * N + 1; ++k)
      for (const Vector& v : x.c.de_rham(k).reps) CHECK(m.d(x.c.space(k).form(v)).is_zero());
    for_bidegrees(N, [&](int p, int q) {
      const InvariantBasis& B = x.ops.basis(p, q);
      for (const Vector& v : x.c.kohn_rossi(p, q).reps) CHECK(x.ops.dbbar(B.combine(v), p, q).is_zero());
    });
  }
}

TEST_CASE("Kohn-Rossi groups of the Heisenberg quotients", "[cohomology]") {
  for (int n = 1; n <= 3; ++n) {
    Ctx x(Model::heisenberg(n, true));
    for (int q = 0; q <= n; ++q) {
      INFO("n=" << n << " q=" << q);
      CHECK(x.c.kohn_rossi(0, q).dim() == binom(n, q));
    }
  }
  Ctx i5(Model::heisenberg(2, true));
  CHECK(i5.c.kohn_rossi(0, 1).dim() == 2);
  Ctx i7(Model::heisenberg(3, true));
  CHECK(i7.c.kohn_rossi(0, 2).dim() == 3);
  CHECK_THROWS_AS(i7.c.kohn_rossi(0, 4), BadBidegree);
}

TEST_CASE("group tables", "[cohomology]") {
  Ctx x(Model::heisenberg(2, true));
  for (const GroupRow& r : x.c.table("kohn-rossi")) {
    INFO(r.p << "," << r.q);
    CHECK(r.status == ((r.q == 0 || r.q == 2) ? "invariant subcomplex only" : "ok"));
  }
  for (const char* g : {"derham", "pluriharmonic", "e2", "harmonic"})
    for (const GroupRow& r : x.c.table(g)) CHECK(r.status == "ok");
  CHECK_THROWS_AS(x.c.table("nope"), std::invalid_argument);
  Ctx curved(load("curved_n2.json"));
  bool labelled = false;
  for (const GroupRow& r : curved.c.table("harmonic")) {
    CHECK(r.status != "fail");
    labelled = labelled || r.status == "not unimodular";
  }
  CHECK(labelled);
}

TEST_CASE("harmonic spaces and Hodge decompositions", "[cohomology]") {
  for (int n = 1; n <= 3; ++n) {
    Ctx x(Model::heisenberg(n, true));
    for_bidegrees(n, [&](int p, int q) {
      INFO("n=" << n << " (" << p << "," << q << ")");
      CHECK(x.c.harmonic_kohn(p, q).size() == x.c.kohn_rossi(p, q).dim());
      Decomposition d = x.c.kohn_decomposition(p, q);
      CHECK(d.ok());
      CHECK(d.total == x.ops.basis(p, q).dim());
    });
    for (int k = 0; k <= 2 * n + 1; ++k) {
      INFO("n=" << n << " k=" << k);
      CHECK(x.c.harmonic_rumin(k).size() == x.c.de_rham(k).dim());
      CHECK(x.c.rumin_decomposition(k).ok());
    }
  }
  Ctx i5(Model::heisenberg(2, true));
  CHECK(i5.c.harmonic_kohn(0, 1).size() == 2);
  for (const Model& m : unimodular_models()) {
    Ctx x(m);
    for (int k = 0; k <= 2 * m.n() + 1; ++k) {
      INFO(m.name() << " k=" << k);
      CHECK(x.c.rumin_decomposition(k).ok());
      for (const Form& h : x.c.harmonic_rumin(k)) CHECK(m.d(h).is_zero());
    }
  }
}

TEST_CASE("spectral sequence pages", "[cohomology]") {
  for (const Model& m : invariant_models(2)) {
    Ctx x(m);
    int N = m.n();
    INFO(m.name());
    SpectralPage E1 = x.c.spectral_page(1);
    for_bidegrees(N, [&](int p, int q) { CHECK(E1.dims.at({p, q}) == x.c.kohn_rossi(p, q).dim()); });
    // dims are non-increasing in r, and each page is the cohomology of the previous one
    SpectralPage prev = E1;
    for (int r = 2; r <= N + 3; ++r) {
      SpectralPage E = x.c.spectral_page(r);
      for (const auto& [b, d] : E.dims) {
        INFO("r=" << r << " (" << b.p << "," << b.q << ")");
        CHECK(d <= prev.dims.at(b));
        std::size_t rank_out = rank(prev.d.at(b));
        std::size_t rank_in = 0;
        Bidegree src{b.p - (r - 1), b.q + (r - 2)};
        if (prev.d.count(src)) rank_in = rank(prev.d.at(src));
        CHECK(d == prev.dims.at(b) - rank_out - rank_in);
      }
      for (const auto& [b, M] : prev.d) {
        Bidegree t{b.p + r - 1, b.q - r + 2};
        if (prev.d.count(t)) CHECK((prev.d.at(t) * M).is_zero());
      }
      prev = E;
    }
    // E_∞ is graded de Rham
    for (int k = 0; k <= 2 * N + 1; ++k) {
      std::size_t sum = 0;
      for (const auto& [b, d] : prev.dims)
        if (b.k() == k) sum += d;
      CHECK(sum == x.c.de_rham(k).dim());
    }
    // Frölicher inequality, equality when torsion-free
    SpectralPage E2 = x.c.spectral_page(2);
    for (int k = 0; k <= 2 * N + 1; ++k) {
      std::size_t sum = 0;
      for (const auto& [b, d] : E2.dims)
        if (b.k() == k) sum += d;
      CHECK(sum >= x.c.de_rham(k).dim());
      if (m.torsion_free()) CHECK(sum == x.c.de_rham(k).dim());
    }
  }
  Ctx i5(Model::heisenberg(2, true));
  CHECK(i5.c.spectral_page(1).dims.at({0, 1}) == 2);
  Ctx i3(Model::heisenberg(1, true));
  SpectralPage E2 = i3.c.spectral_page(2);
  CHECK(E2.dims.at({0, 1}) + E2.dims.at({1, 0}) == 2);
}

TEST_CASE("E2 equals the kernel of the Popovici Laplacian", "[cohomology]") {
  for (const Model& m : unimodular_models()) {
    Ctx x(m);
    SpectralPage E2 = x.c.spectral_page(2);
    for_bidegrees(m.n(), [&](int p, int q) {
      INFO(m.name() << " (" << p << "," << q << ")");
      CHECK(x.c.harmonic_popovici(p, q).size() == E2.dims.at({p, q}));
    });
  }
  // holomorphic forms dz^A realize E_2^{p,0} = C(n,p)
  for (int n = 1; n <= 3; ++n) {
    Ctx x(Model::heisenberg(n, true));
    SpectralPage E2 = x.c.spectral_page(2);
    for (int p = 0; p <= n; ++p) CHECK(E2.dims.at({p, 0}) == binom(n, p));
  }
}

TEST_CASE("long exact sequence", "[cohomology]") {
  for (const Model& m : invariant_models(3)) {
    Ctx x(m);
    auto nodes = x.c.long_exact_sequence();
    CHECK(nodes.size() == static_cast<std::size_t>(3 * (2 * m.n() + 1) + 1));
    for (const ExactnessNode& e : nodes) {
      INFO(m.name() << " " << e.label << " dim " << e.dim << " in " << e.rank_in << " out " << e.rank_out);
      CHECK(e.exact());
    }
    // constants inject into H^{0,0}
    CHECK(nodes[0].dim == 1);
    CHECK(nodes[0].rank_out == 1);
  }
}

TEST_CASE("Serre and Poincare dualities", "[cohomology]") {
  for (const Model& m : unimodular_models()) {
    Ctx x(m);
    for (const CheckLine& l : x.c.dualities()) {
      INFO(m.name() << " " << l.name << ": " << l.detail);
      CHECK(l.ok);
      CHECK(!l.skipped);
    }
  }
  Ctx i3(Model::heisenberg(1, true));
  for_bidegrees(1, [&](int p, int q) { CHECK(i3.c.kohn_rossi(p, q).dim() == i3.c.kohn_rossi(2 - p, 1 - q).dim()); });
  Ctx i5(Model::heisenberg(2, true));
  for (int k = 0; k <= 5; ++k) CHECK(i5.c.de_rham(k).dim() == i5.c.de_rham(5 - k).dim());
  // conjugate star of ℋ^{0,1} lands in ℋ^{3,1}
  std::vector<Vector> imgs;
  for (const Form& w : i5.c.harmonic_kohn(0, 1)) {
    Form y = i5.s.star(w.conj(), 1, 0);
    CHECK(i5.ops.kohn(y, 3, 1).is_zero());
    imgs.push_back(i5.ops.basis(3, 1).coords(y, i5.s));
  }
  CHECK(rank_of(imgs, i5.ops.basis(3, 1).dim()) == 2);
  Ctx curved(load("curved_n2.json"));
  for (const CheckLine& l : curved.c.dualities()) CHECK(l.skipped);
}

TEST_CASE("Hard Lefschetz", "[cohomology]") {
  Ctx i3(Model::heisenberg(1, true));
  Matrix L0 = i3.c.hard_lefschetz(0);
  REQUIRE(L0.rows() == 1);
  CHECK(!L0.is_zero());
  Matrix L1 = i3.c.hard_lefschetz(1);
  CHECK(L1.rows() == 2);
  CHECK(L1.cols() == 2);
  CHECK(rank(L1) == 2);
  Ctx i5(Model::heisenberg(2, true));
  for (int k = 0; k <= 2; ++k) {
    Matrix L = i5.c.hard_lefschetz(k);
    CHECK(L.rows() == L.cols());
    CHECK(L.cols() == i5.c.de_rham(k).dim());
    CHECK(rank(L) == L.cols());
    CHECK(i5.c.lefschetz_preserves_harmonic(k));
  }
  CHECK_THROWS_AS(i5.c.hard_lefschetz(3), IndexOutOfRange);
  Ctx tor(load("torsion_n1.json"));
  CHECK_THROWS_AS(tor.c.hard_lefschetz(0), NotTorsionFree);
  Ctx curved(load("curved_n2.json"));
  CHECK_THROWS_AS(curved.c.hard_lefschetz(0), NotUnimodular);
}

TEST_CASE("cup products", "[cohomology]") {
  for (int n = 1; n <= 3; ++n) {
    Ctx x(Model::heisenberg(n, true));
    auto [w, cls] = x.c.cuplength_witness();
    INFO("n=" << n << " " << w.str());
    CHECK(!is_zero(cls));
    CHECK(x.c.cup_vanishing().ok);
  }
  for (const Model& m : invariant_models(2)) {
    Ctx x(m);
    for (const CheckLine& l : x.c.cup_checks()) {
      INFO(m.name() << " " << l.name << ": " << l.detail);
      CHECK(l.ok);
    }
  }
  Ctx i3(Model::heisenberg(1, true));
  Vector c = i3.c.cup(Form::one(1), dz(1, 1));
  CHECK(c == i3.c.de_rham(1).classify(i3.c.space(1).coords(dz(1, 1))));
  CHECK_THROWS_AS(i3.c.cup(th(1), Form::one(1)), NotClosed);
}

TEST_CASE("Sasakian report", "[cohomology]") {
  for (const Model& m : invariant_models(2)) {
    if (!m.torsion_free()) continue;
    Ctx x(m);
    for (const CheckLine& l : x.c.sasaki_report()) {
      INFO(m.name() << " " << l.name << ": " << l.detail);
      CHECK(l.ok);
    }
  }
  Ctx tor(load("torsion_n1.json"));
  CHECK_THROWS_AS(tor.c.sasaki_report(), NotTorsionFree);
  // b_1 of I3 is even
  Ctx i3(Model::heisenberg(1, true));
  CHECK(i3.c.de_rham(1).dim() % 2 == 0);
}

TEST_CASE("cohomological verify suites", "[cohomology][suite]") {
  for (const Model& m : invariant_models(2)) {
    Spaces s(m);
    Operators ops(s);
    for (const char* suite : {"les", "dualities"}) {
      SuiteReport r = run_suite(ops, suite);
      for (const CheckRow& row : r.rows) {
        INFO(m.name() << " " << suite << " " << row.identity << ": " << row.detail);
        CHECK(row.ok());
        CHECK(row.skipped == (std::string(suite) == "dualities" && !m.unimodular()));
      }
    }
  }
  Model poly = Model::heisenberg(1, false);
  Spaces s(poly);
  Operators ops(s);
  for (const CheckRow& row : run_suite(ops, "les").rows) CHECK(row.skipped);
}
