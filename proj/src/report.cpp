#include "rumin/report.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace rumin {

namespace {

std::string text_of(const Json& v) {
  if (v.is_null()) return "-";
  if (v.is_string()) return v.get<std::string>();
  if (v.is_boolean()) return v.get<bool>() ? "yes" : "no";
  return v.dump();
}

std::string emit_text(const Report& r) {
  std::ostringstream os;
  os << "# " << kReportSchema << " " << r.kind;
  if (!r.model.empty()) os << " " << r.model;
  os << "\n";
  for (const auto& [k, v] : r.facts.items()) os << k << ": " << text_of(v) << "\n";
  if (r.columns.empty()) {
    for (const std::string& l : r.notes) os << l << "\n";
    return os.str();
  }
  std::vector<std::size_t> width(r.columns.size());
  std::vector<std::vector<std::string>> cells;
  for (std::size_t c = 0; c < r.columns.size(); ++c) width[c] = r.columns[c].size();
  for (const Json& row : r.rows) {
    std::vector<std::string> line;
    for (std::size_t c = 0; c < r.columns.size(); ++c) {
      auto it = row.find(r.columns[c]);
      line.push_back(it == row.end() ? "-" : text_of(*it));
      // width in code points, so the UTF-8 symbols line up
      std::size_t cp = 0;
      for (unsigned char ch : line.back()) cp += (ch & 0xC0) != 0x80;
      width[c] = std::max(width[c], cp);
    }
    cells.push_back(std::move(line));
  }
  auto put = [&](const std::vector<std::string>& line) {
    std::string out;
    for (std::size_t c = 0; c < line.size(); ++c) {
      std::size_t cp = 0;
      for (unsigned char ch : line[c]) cp += (ch & 0xC0) != 0x80;
      out += line[c];
      if (c + 1 < line.size()) out += std::string(width[c] - cp + 2, ' ');
    }
    os << out << "\n";
  };
  put(r.columns);
  for (const auto& line : cells) put(line);
  for (const std::string& l : r.notes) os << l << "\n";
  return os.str();
}

std::string emit_json(const Report& r) {
  Json j;
  j["schema"] = kReportSchema;
  j["kind"] = r.kind;
  j["model"] = r.model;
  j["ok"] = r.ok;
  j["facts"] = r.facts;
  j["columns"] = r.columns;
  j["rows"] = Json::array();
  for (const Json& row : r.rows) {
    Json o = Json::object();
    for (const std::string& c : r.columns) o[c] = row.contains(c) ? row.at(c) : Json();
    j["rows"].push_back(o);
  }
  j["notes"] = r.notes;
  return j.dump(2) + "\n";
}

Json index_or_null(int v) { return v < 0 ? Json() : Json(v); }

}  // namespace

std::string emit(const Report& r, const std::string& format) {
  if (format == "text") return emit_text(r);
  if (format == "json") return emit_json(r);
  throw std::invalid_argument("unknown format " + format);
}

Report group_report(const std::string& model, const std::vector<GroupRow>& rows) {
  Report r;
  r.kind = "cohomology";
  r.model = model;
  r.columns = {"group", "p", "q", "k", "dim", "status"};
  for (const GroupRow& g : rows) {
    r.rows.push_back(Json{{"group", g.group},
                          {"p", index_or_null(g.p)},
                          {"q", index_or_null(g.q)},
                          {"k", index_or_null(g.k)},
                          {"dim", g.dim},
                          {"status", g.status}});
    if (g.status == "fail" && r.ok) {
      r.ok = false;
      r.first_failure = g.group + " at k = " + std::to_string(g.k);
    }
  }
  return r;
}

Report suite_report(const std::string& model, const std::vector<SuiteReport>& suites) {
  Report r;
  r.kind = "verify";
  r.model = model;
  r.columns = {"suite", "identity", "anchor", "status", "checked", "detail"};
  for (const SuiteReport& s : suites)
    for (const CheckRow& row : s.rows) {
      r.rows.push_back(Json{{"suite", s.suite},
                            {"identity", row.identity},
                            {"anchor", row.anchor},
                            {"status", row.status()},
                            {"checked", row.checked},
                            {"detail", row.detail}});
      if (!row.ok() && r.ok) {
        r.ok = false;
        r.first_failure = s.suite + " / " + row.identity + ": " + row.detail;
      }
    }
  return r;
}

Report check_report(const std::string& kind, const std::string& model, const std::vector<CheckLine>& lines) {
  Report r;
  r.kind = kind;
  r.model = model;
  r.columns = {"check", "anchor", "status", "detail"};
  for (const CheckLine& l : lines) {
    std::string status = l.skipped ? "skip" : (l.ok ? "pass" : "fail");
    r.rows.push_back(Json{{"check", l.name}, {"anchor", l.anchor}, {"status", status}, {"detail", l.detail}});
    if (!l.ok && r.ok) {
      r.ok = false;
      r.first_failure = l.name + ": " + l.detail;
    }
  }
  return r;
}

}  // namespace rumin
