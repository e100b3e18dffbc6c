#include "rumin/cli.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <mutex>
#include <thread>

#include "rumin/cohomology.hpp"
#include "rumin/errors.hpp"
#include "rumin/report.hpp"
#include "rumin/verify.hpp"

namespace rumin {

namespace {

const std::vector<std::string> kVerbs{"model", "cohomology", "hodge", "spectral", "verify", "cup", "lee", "sasaki"};
const std::vector<std::string> kGroups{"derham", "kohn-rossi", "pluriharmonic", "e2", "harmonic"};

struct Options {
  std::string model = "builtin:heisenberg-quotient:1";
  std::string format = "text";
  std::string out;
  std::string group = "derham";
  std::string suite;
  std::string witness;
  int max_poly_degree = 3;
  int page = 2;
};

std::size_t thread_cap() {
  const char* env = std::getenv("RUMIN_THREADS");
  if (!env) return 1;
  try {
    return std::max(1, std::stoi(env));
  } catch (const std::exception&) {
    return 1;
  }
}

std::string str(const Vector& v) {
  std::string s = "[";
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ", " : "") + v[i].str();
  return s + "]";
}

std::string sub(int a) { return std::to_string(a); }

Report model_report(const Model& m, const std::string& source) {
  Report r;
  r.kind = "model";
  r.model = m.name();
  int n = m.n();
  r.facts["source"] = source;
  r.facts["n"] = n;
  r.facts["coefficients"] = m.invariant() ? "constant" : "polynomial";
  r.facts["strictly_pseudoconvex"] = m.strictly_pseudoconvex();
  r.facts["torsion_free"] = m.torsion_free();
  r.facts["unimodular"] = m.unimodular();
  r.facts["scalar_curvature"] = m.scalar_curvature().str();
  r.facts["pseudo_einstein"] = m.pseudo_einstein_tensorial();
  for (int a = 1; a <= n; ++a) r.facts["dθ^" + sub(a)] = m.dtheta_hol(a).str();
  auto failures = m.structure_failures();
  r.facts["structure_equations"] = failures.empty() ? "ok" : failures.front();
  if (!failures.empty()) {
    r.ok = false;
    r.first_failure = failures.front();
  }
  r.columns = {"tensor", "entry", "value"};
  auto put = [&](const std::string& t, const Matrix& M) {
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b) r.rows.push_back(Json{{"tensor", t}, {"entry", sub(a + 1) + sub(b + 1)}, {"value", M(a, b).str()}});
  };
  put("h", m.h());
  put("A", m.torsion());
  put("Ric", m.ricci());
  return r;
}

Report hodge_report(const Cohomology& c) {
  const Model& m = c.ops().model();
  if (!m.strictly_pseudoconvex()) throw NotStrictlyPseudoconvex(m.name());
  int N = c.n();
  const std::string bad = m.unimodular() ? "fail" : "not unimodular";
  Report r;
  r.kind = "hodge";
  r.model = m.name();
  r.columns = {"space", "p", "q", "k", "dim", "cohomology", "total", "image", "coimage", "status"};
  auto mark = [&](Json row, bool good, const std::string& what) {
    row["status"] = good ? "ok" : bad;
    if (!good && bad == "fail" && r.ok) {
      r.ok = false;
      r.first_failure = what;
    }
    r.rows.push_back(std::move(row));
  };
  SpectralPage E2 = c.spectral_page(2);
  for (int p = 0; p <= N + 1; ++p)
    for (int q = 0; q <= N; ++q) {
      if (!valid_bidegree(N, p, q)) continue;
      Decomposition d = c.kohn_decomposition(p, q);
      std::size_t h = c.harmonic_kohn(p, q).size(), kr = c.kohn_rossi(p, q).dim();
      mark(Json{{"space", "ker box_b"}, {"p", p}, {"q", q}, {"k", p + q}, {"dim", h}, {"cohomology", kr},
                {"total", d.total}, {"image", d.image}, {"coimage", d.coimage}},
           d.ok() && h == kr, "ker box_b at (" + sub(p) + "," + sub(q) + ")");
      std::size_t hp = c.harmonic_popovici(p, q).size(), e2 = E2.dims.at({p, q});
      mark(Json{{"space", "ker popovici"}, {"p", p}, {"q", q}, {"k", p + q}, {"dim", hp}, {"cohomology", e2}},
           hp == e2, "ker popovici at (" + sub(p) + "," + sub(q) + ")");
    }
  for (int k = 0; k <= 2 * N + 1; ++k) {
    Decomposition d = c.rumin_decomposition(k);
    std::size_t h = c.harmonic_rumin(k).size(), b = c.de_rham(k).dim();
    mark(Json{{"space", "ker delta_b"}, {"k", k}, {"dim", h}, {"cohomology", b}, {"total", d.total},
              {"image", d.image}, {"coimage", d.coimage}},
         d.ok() && h == b, "ker delta_b at k = " + sub(k));
  }
  return r;
}

Report spectral_report(const Cohomology& c, int page) {
  if (page < 1) throw std::invalid_argument("--page must be at least 1");
  SpectralPage E = c.spectral_page(page);
  Report r;
  r.kind = "spectral";
  r.model = c.ops().model().name();
  r.facts["page"] = page;
  r.columns = {"p", "q", "k", "dim", "rank_d"};
  for (const auto& [b, d] : E.dims)
    r.rows.push_back(Json{{"p", b.p}, {"q", b.q}, {"k", b.k()}, {"dim", d}, {"rank_d", rank(E.d.at(b))}});
  return r;
}

Report verify_report(const Model& m, const std::string& source, const Options& o) {
  std::vector<std::string> suites = o.suite.empty() ? suite_names() : std::vector<std::string>{o.suite};
  VerifyOptions vo;
  vo.max_poly_degree = o.max_poly_degree;
  std::vector<SuiteReport> reps(suites.size());
  std::size_t workers = std::min(thread_cap(), suites.size());
  if (workers <= 1) {
    Spaces s(m);
    Operators ops(s);
    for (std::size_t i = 0; i < suites.size(); ++i) reps[i] = run_suite(ops, suites[i], vo);
  } else {
    // Each worker owns its model: the lazy caches are not shared across threads.
    std::mutex mu;
    std::size_t next = 0;
    std::exception_ptr failure;
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w)
      pool.emplace_back([&] {
        try {
          Model local = Model::from_source(source);
          Spaces s(local);
          Operators ops(s);
          for (;;) {
            std::size_t i;
            {
              std::lock_guard<std::mutex> lock(mu);
              if (next >= suites.size() || failure) return;
              i = next++;
            }
            reps[i] = run_suite(ops, suites[i], vo);
          }
        } catch (...) {
          std::lock_guard<std::mutex> lock(mu);
          if (!failure) failure = std::current_exception();
        }
      });
    for (auto& t : pool) t.join();
    if (failure) std::rethrow_exception(failure);
  }
  Report r = suite_report(m.name(), reps);
  r.facts["max_poly_degree"] = o.max_poly_degree;
  return r;
}

Report cup_report(const Cohomology& c, const Options& o) {
  const Model& m = c.ops().model();
  if (o.witness.empty()) {
    std::vector<CheckLine> lines = c.cup_checks();
    lines.push_back(c.cup_vanishing());
    return check_report("cup", m.name(), lines);
  }
  auto [w, cls] = c.cuplength_witness();
  Report r;
  r.kind = "cup";
  r.model = m.name();
  r.facts["product"] = w.str();
  r.facts["class"] = str(cls);
  r.facts["nonzero"] = !is_zero(cls);
  if (is_zero(cls)) {
    r.ok = false;
    r.first_failure = "witness product is zero in cohomology";
  } else {
    r.notes.push_back("cuplength = " + std::to_string(c.n() + 1));
  }
  return r;
}

Report lee_report(const Operators& ops) {
  const Model& m = ops.model();
  Form l = ops.lee_form(Path::Projection);
  Form lf = ops.lee_form(Path::Formula);
  Report r;
  r.kind = "lee";
  r.model = m.name();
  r.facts["lee_form"] = l.str();
  r.facts["paths_agree"] = l == lf;
  r.facts["closed"] = m.d(l).is_zero();
  r.facts["real"] = l == l.conj();
  r.facts["pseudo_einstein"] = ops.is_pseudo_einstein();
  r.facts["pseudo_einstein_tensorial"] = m.pseudo_einstein_tensorial();
  if (l != lf) r.first_failure = "projection and formula Lee forms differ";
  else if (!m.d(l).is_zero()) r.first_failure = "Lee form is not closed";
  else if (ops.is_pseudo_einstein() != m.pseudo_einstein_tensorial()) r.first_failure = "pseudo-Einstein predicates differ";
  r.ok = r.first_failure.empty();
  return r;
}

std::string verb_list() {
  std::string s;
  for (const std::string& v : kVerbs) s += (s.empty() ? "" : ", ") + v;
  return s;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Exact Rumin complex and CR cohomology computations", "rumin"};
  app.require_subcommand(1, 1);
  Options o;
  std::vector<std::string> suites = suite_names();
  for (const std::string& verb : kVerbs) {
    CLI::App* sc = app.add_subcommand(verb);
    sc->add_option("--model", o.model, "builtin:heisenberg:n | builtin:heisenberg-quotient:n | file:path");
    sc->add_option("--format", o.format)->check(CLI::IsMember({"text", "json"}));
    sc->add_option("--out", o.out, "write the report to this file");
    sc->add_option("--max-poly-degree", o.max_poly_degree)->check(CLI::Range(0, 8));
    if (verb == "cohomology") sc->add_option("--group", o.group)->check(CLI::IsMember(kGroups));
    if (verb == "verify") sc->add_option("--suite", o.suite)->check(CLI::IsMember(suites));
    if (verb == "spectral") sc->add_option("--page", o.page)->check(CLI::PositiveNumber);
    if (verb == "cup") sc->add_option("--witness", o.witness)->check(CLI::IsMember({"cuplength"}));
  }
  try {
    std::vector<std::string> rev(args.rbegin(), args.rend());
    app.parse(rev);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    if (code == 0) return kExitOk;
    err << "valid verbs: " << verb_list() << "\n";
    return kExitUsage;
  }
  std::string verb = app.get_subcommands().front()->get_name();
  Report r;
  try {
    Model m = Model::from_source(o.model);
    Spaces s(m);
    Operators ops(s);
    if (verb == "model") r = model_report(m, o.model);
    else if (verb == "verify") r = verify_report(m, o.model, o);
    else if (verb == "lee") r = lee_report(ops);
    else {
      Cohomology c(ops);
      if (verb == "cohomology") r = group_report(m.name(), c.table(o.group));
      else if (verb == "hodge") r = hodge_report(c);
      else if (verb == "spectral") r = spectral_report(c, o.page);
      else if (verb == "cup") r = cup_report(c, o);
      else if (verb == "sasaki") r = check_report("sasaki", m.name(), c.sasaki_report());
    }
    if (verb == "cohomology") r.facts["group"] = o.group;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  std::string text = emit(r, o.format);
  if (o.out.empty()) {
    out << text;
  } else {
    std::ofstream f(o.out, std::ios::binary);
    if (!f) {
      err << "error: cannot write " << o.out << "\n";
      return kExitUsage;
    }
    f << text;
  }
  if (!r.ok) {
    err << "FAIL: " << r.first_failure << "\n";
    return kExitVerifyFailed;
  }
  return kExitOk;
}

}  // namespace rumin
