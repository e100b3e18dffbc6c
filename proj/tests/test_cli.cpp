#include <catch2/catch_amalgamated.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "rumin/cli.hpp"
#include "rumin/report.hpp"

using namespace rumin;

namespace {

struct Run {
  int code;
  std::string out, err;
};

Run run(std::vector<std::string> args) {
  std::ostringstream out, err;
  int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

std::string model_file(const std::string& f) { return std::string("file:") + RUMIN_MODEL_DIR + "/" + f; }

}  // namespace

TEST_CASE("emit: empty report and table columns", "[cli]") {
  Report r;
  r.kind = "cohomology";
  CHECK(emit(r, "text") == "# rumin-report/1 cohomology\n");
  Json j = Json::parse(emit(r, "json"));
  CHECK(j["schema"] == "rumin-report/1");
  CHECK(j["rows"].empty());
  CHECK_THROWS_AS(emit(r, "xml"), std::invalid_argument);

  Report g = group_report("m", {{"H^{p,q}", 0, 1, 1, 2, "ok"}, {"H^k(M;C)", -1, -1, 3, 1, "ok"}});
  std::string text = emit(g, "text");
  CHECK(text.find("group     p  q  k  dim  status\n") != std::string::npos);
  CHECK(text.find("H^k(M;C)  -  -  3  1    ok\n") != std::string::npos);
  Json gj = Json::parse(emit(g, "json"));
  CHECK(gj["columns"] == Json({"group", "p", "q", "k", "dim", "status"}));
  CHECK(gj["rows"][0]["dim"] == 2);
  CHECK(gj["rows"][1]["p"].is_null());
}

TEST_CASE("emit: suite rows carry identity, anchor and status", "[cli]") {
  SuiteReport s{"hodge", "m", {}};
  CheckRow a;
  a.identity = "⋆⋆ = 1";
  a.anchor = "hodge";
  a.checked = 3;
  CheckRow b = a;
  b.failed = 1;
  b.detail = "counterexample";
  s.rows = {a, b};
  Report r = suite_report("m", {s});
  CHECK(r.columns == std::vector<std::string>{"suite", "identity", "anchor", "status", "checked", "detail"});
  CHECK(!r.ok);
  CHECK(r.first_failure == "hodge / ⋆⋆ = 1: counterexample");
  Json j = Json::parse(emit(r, "json"));
  CHECK(j["rows"][0]["status"] == "pass");
  CHECK(j["rows"][1]["status"] == "fail");
  CHECK(j["ok"] == false);
  Report c = check_report("sasaki", "m", {{"x", "y", true, "", true}});
  CHECK(c.ok);
  CHECK(Json::parse(emit(c, "json"))["rows"][0]["status"] == "skip");
}

TEST_CASE("cli: Kohn-Rossi table on I5", "[cli]") {
  Run r = run({"cohomology", "--model", "builtin:heisenberg-quotient:2", "--group", "kohn-rossi", "--format", "json"});
  REQUIRE(r.code == kExitOk);
  Json j = Json::parse(r.out);
  bool found = false;
  for (const Json& row : j["rows"])
    if (row["p"] == 0 && row["q"] == 1) {
      found = true;
      CHECK(row["dim"] == 2);
      CHECK(row["status"] == "ok");
    }
  CHECK(found);
}

TEST_CASE("cli: verification suites", "[cli]") {
  Run r = run({"verify", "--model", "builtin:heisenberg-quotient:1", "--suite", "a-infinity"});
  CHECK(r.code == kExitOk);
  CHECK(r.out.find("fail") == std::string::npos);
  // every row names its anchor
  Run all = run({"verify", "--model", "builtin:heisenberg-quotient:1", "--format", "json"});
  REQUIRE(all.code == kExitOk);
  Json j = Json::parse(all.out);
  std::set<std::string> suites;
  for (const Json& row : j["rows"]) {
    CHECK(!row["anchor"].get<std::string>().empty());
    suites.insert(row["suite"].get<std::string>());
  }
  CHECK(suites.size() == suite_names().size());
  Run poly = run({"verify", "--model", "builtin:heisenberg:1", "--suite", "commutators", "--max-poly-degree", "2"});
  CHECK(poly.code == kExitOk);
  CHECK(poly.out.find("max_poly_degree: 2") != std::string::npos);
}

TEST_CASE("cli: cuplength witness", "[cli]") {
  Run r = run({"cup", "--model", "builtin:heisenberg-quotient:1", "--witness", "cuplength"});
  CHECK(r.code == kExitOk);
  CHECK(r.out.find("cuplength = 2") != std::string::npos);
  CHECK(r.out.find("nonzero: yes") != std::string::npos);
  Run checks = run({"cup", "--model", "builtin:heisenberg-quotient:2"});
  CHECK(checks.code == kExitOk);
}

TEST_CASE("cli: remaining verbs", "[cli]") {
  for (const char* verb : {"model", "hodge", "spectral", "lee", "sasaki"}) {
    Run r = run({verb, "--model", "builtin:heisenberg-quotient:2"});
    INFO(verb << "\n" << r.err);
    CHECK(r.code == kExitOk);
    CHECK(r.out.rfind(std::string("# rumin-report/1 ") + verb, 0) == 0);
  }
  Run m = run({"model", "--model", model_file("curved_n2.json")});
  CHECK(m.out.find("unimodular: no") != std::string::npos);
  Run sp = run({"spectral", "--model", "builtin:heisenberg-quotient:1", "--page", "1", "--format", "json"});
  CHECK(Json::parse(sp.out)["facts"]["page"] == 1);
  Run lee = run({"lee", "--model", "builtin:heisenberg:2"});
  CHECK(lee.code == kExitOk);
  CHECK(lee.out.find("lee_form: 0") != std::string::npos);
}

TEST_CASE("cli: usage and model errors", "[cli]") {
  Run none = run({});
  CHECK(none.code == kExitUsage);
  CHECK(none.err.find("valid verbs: model, cohomology, hodge, spectral, verify, cup, lee, sasaki") != std::string::npos);
  CHECK(run({"frobnicate"}).code == kExitUsage);
  CHECK(run({"cohomology", "--bogus"}).code == kExitUsage);
  CHECK(run({"cohomology", "--group", "nope"}).code == kExitUsage);
  CHECK(run({"verify", "--suite", "nope"}).code == kExitUsage);
  CHECK(run({"cohomology", "--format", "yaml"}).code == kExitUsage);
  Run poly = run({"cohomology", "--model", "builtin:heisenberg:1"});
  CHECK(poly.code == kExitUsage);
  CHECK(poly.err.find("NotInvariantModel") != std::string::npos);
  Run missing = run({"model", "--model", "file:/nonexistent.json"});
  CHECK(missing.code == kExitUsage);
  Run tor = run({"sasaki", "--model", model_file("torsion_n1.json")});
  CHECK(tor.code == kExitUsage);
  CHECK(tor.err.find("NotTorsionFree") != std::string::npos);
  Run mixed = run({"hodge", "--model", model_file("mixed_signature_n2.json")});
  CHECK(mixed.code == kExitUsage);
  CHECK(mixed.err.find("NotStrictlyPseudoconvex") != std::string::npos);
  CHECK(run({"--help"}).code == kExitOk);
}

TEST_CASE("cli: deterministic output, threads and --out", "[cli]") {
  std::vector<std::string> args{"verify", "--model", "builtin:heisenberg-quotient:2"};
  Run a = run(args), b = run(args);
  CHECK(a.out == b.out);
  setenv("RUMIN_THREADS", "3", 1);
  Run c = run(args);
  unsetenv("RUMIN_THREADS");
  CHECK(c.out == a.out);
  auto path = std::filesystem::temp_directory_path() / "rumin_cli_test.json";
  Run d = run({"cohomology", "--model", "builtin:heisenberg-quotient:1", "--format", "json", "--out", path.string()});
  CHECK(d.code == kExitOk);
  CHECK(d.out.empty());
  std::ifstream f(path);
  std::stringstream ss;
  ss << f.rdbuf();
  CHECK(Json::parse(ss.str())["schema"] == "rumin-report/1");
  std::filesystem::remove(path);
}
