#include <catch2/catch_amalgamated.hpp>

#include "rumin/errors.hpp"
#include "rumin/operators.hpp"
#include "support.hpp"

using namespace rumin;
using namespace rumin::test;

namespace {

// Every element of every invariant R^{p,q} basis, with its bidegree.
template <class F>
void for_each_basis_element(const Operators& ops, F f) {
  int n = ops.n();
  for (int p = 0; p <= n + 1; ++p)
    for (int q = 0; q <= n; ++q) {
      if (!valid_bidegree(n, p, q)) continue;
      for (const Form& w : ops.basis(p, q).elems) f(w, p, q);
    }
}

template <class F>
void for_each_poly_sample(const Operators& ops, F f, std::size_t per_bidegree = 12) {
  int n = ops.n();
  auto coeffs = small_coeffs(n);
  for (int p = 0; p <= n + 1; ++p)
    for (int q = 0; q <= n; ++q) {
      if (!valid_bidegree(n, p, q)) continue;
      for (const Form& w : rumin_samples(ops.spaces(), p, q, coeffs, per_bidegree)) f(w, p, q);
    }
}

void check_dual_paths(const Operators& ops, const Form& w, int p, int q) {
  int n = ops.n(), k = p + q;
  INFO(ops.model().name() << " bidegree (" << p << "," << q << ") ω = " << w.str());
  CHECK(ops.db(w, p, q, Path::Projection) == ops.db(w, p, q, Path::Formula));
  CHECK(ops.dbbar(w, p, q, Path::Projection) == ops.dbbar(w, p, q, Path::Formula));
  if (k == n) CHECK(ops.d0(w, p, q, Path::Projection) == ops.d0(w, p, q, Path::Formula));
  if (!ops.model().strictly_pseudoconvex()) return;
  CHECK(ops.db_star(w, p, q, Path::Projection) == ops.db_star(w, p, q, Path::Formula));
  CHECK(ops.dbbar_star(w, p, q, Path::Projection) == ops.dbbar_star(w, p, q, Path::Formula));
  if (k == n + 1) CHECK(ops.d0_star(w, p, q, Path::Projection) == ops.d0_star(w, p, q, Path::Formula));
}

Form bigraded_d(const Operators& ops, const Form& w, int p, int q, Path path) {
  Form out = ops.db(w, p, q, path) + ops.dbbar(w, p, q, path);
  if (p + q == ops.n()) out += ops.d0(w, p, q, path);
  return out;
}

}  // namespace

TEST_CASE("operator handles follow the bidegree contract", "[operators]") {
  int n = 2;
  CHECK(make_handle(n, "db", 1, 0).to == Bidegree{2, 0});
  CHECK(make_handle(n, "db", 1, 1).to == Bidegree{3, 0});
  CHECK(make_handle(n, "dbbar", 1, 1).to == Bidegree{1, 2});
  CHECK(make_handle(n, "d0", 1, 1).to == Bidegree{2, 1});
  CHECK(make_handle(n, "db*", 2, 1).to == Bidegree{0, 2});
  CHECK(make_handle(n, "db*", 2, 2).to == Bidegree{1, 2});
  CHECK(make_handle(n, "d0*", 2, 1).to == Bidegree{1, 1});
  CHECK(make_handle(n, "dbbar*", 2, 1).to == Bidegree{2, 0});
  CHECK(make_handle(n, "db", 2, 0).zero_target);
  CHECK_THROWS_AS(make_handle(n, "d0", 1, 0), MiddleDegreeOnly);
  CHECK_THROWS_AS(make_handle(n, "d0*", 1, 1), MiddleDegreeOnly);
  CHECK_THROWS_AS(make_handle(n, "db", 4, 0), BadBidegree);
  CHECK(make_degree_handle(n, "d", 5).zero_target);
}

TEST_CASE("operator input validation", "[operators]") {
  Model m = Model::heisenberg(1, true);
  Spaces s(m);
  Operators ops(s);
  CHECK_THROWS_AS(ops.d0(dzb(1, 1), 0, 0), MiddleDegreeOnly);
  CHECK_THROWS_AS(ops.d0_star(dzb(1, 1), 0, 1), MiddleDegreeOnly);
  // θ is not in R^1
  CHECK_THROWS_AS(ops.d(th(1), 1), MembershipViolation);
  CHECK_THROWS_AS(ops.dbbar(th(1), 0, 1), MembershipViolation);
  // dz̄ is not of type (1,0)
  CHECK_THROWS_AS(ops.db(dzb(1, 1), 1, 0), MembershipViolation);

  Model mixed = load("mixed_signature_n2.json");
  Spaces sm(mixed);
  Operators om(sm);
  CHECK_NOTHROW(om.dbbar(dzb(2, 1), 0, 1));
  CHECK_THROWS_AS(om.dbbar_star(dzb(2, 1), 0, 1), NotStrictlyPseudoconvex);
  CHECK_THROWS_AS(om.kohn(dzb(2, 1), 0, 1), NotStrictlyPseudoconvex);
}

TEST_CASE("operator examples on the Heisenberg group", "[operators]") {
  Model m = Model::heisenberg(1, false);
  Spaces s(m);
  Operators ops(s);
  Poly z = Poly::z(1), zb = Poly::zbar(1);
  CHECK(ops.d(Form::one(1), 0).is_zero());
  CHECK(ops.dbbar(Form::scalar(1, zb), 0, 0) == dzb(1, 1));
  CHECK(ops.dbbar(Form::scalar(1, zb), 0, 0, Path::Formula) == dzb(1, 1));
  Form w = z * zb * dzb(1, 1) + (I * zb) * th(1);
  Form expect = wedge(th(1), dzb(1, 1)) * (-I);
  CHECK(ops.d0(w, 0, 1) == expect);
  CHECK(ops.d0(w, 0, 1, Path::Formula) == expect);
  CHECK(ops.d(w, 1) == expect);
  // d(θ∧dz̄) = i dz∧dz̄∧dz̄ = 0
  CHECK(ops.d(wedge(th(1), dzb(1, 1)), 2).is_zero());

  Model q = Model::heisenberg(1, true);
  Spaces sq(q);
  Operators oq(sq);
  CHECK(oq.dbbar_star(dzb(1, 1), 0, 1).is_zero());
  CHECK(oq.dbbar_star(dzb(1, 1), 0, 1, Path::Formula).is_zero());
}

TEST_CASE("dual evaluation paths agree on invariant bases", "[operators]") {
  for (const Model& m : invariant_models()) {
    Spaces s(m);
    Operators ops(s);
    for_each_basis_element(ops, [&](const Form& w, int p, int q) { check_dual_paths(ops, w, p, q); });
  }
  Model mixed = load("mixed_signature_n2.json");
  Spaces sm(mixed);
  Operators om(sm);
  for_each_basis_element(om, [&](const Form& w, int p, int q) { check_dual_paths(om, w, p, q); });
}

TEST_CASE("dual evaluation paths agree on polynomial forms", "[operators]") {
  for (int n = 1; n <= 2; ++n) {
    Model m = Model::heisenberg(n, false);
    Spaces s(m);
    Operators ops(s);
    for_each_poly_sample(ops, [&](const Form& w, int p, int q) { check_dual_paths(ops, w, p, q); });
  }
}

TEST_CASE("d splits into the bigraded operators", "[operators]") {
  auto run = [](const Operators& ops, const Form& w, int p, int q) {
    INFO(ops.model().name() << " (" << p << "," << q << ") " << w.str());
    Form dw = ops.d(w, p + q);
    CHECK(bigraded_d(ops, w, p, q, Path::Projection) == dw);
    CHECK(bigraded_d(ops, w, p, q, Path::Formula) == dw);
  };
  for (const Model& m : invariant_models()) {
    Spaces s(m);
    Operators ops(s);
    for_each_basis_element(ops, [&](const Form& w, int p, int q) { run(ops, w, p, q); });
  }
  for (int n = 1; n <= 2; ++n) {
    Model m = Model::heisenberg(n, false);
    Spaces s(m);
    Operators ops(s);
    for_each_poly_sample(ops, [&](const Form& w, int p, int q) { run(ops, w, p, q); }, 6);
  }
}
