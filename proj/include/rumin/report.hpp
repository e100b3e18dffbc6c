#pragma once

#include <json.hpp>
#include <string>
#include <vector>

#include "rumin/cohomology.hpp"
#include "rumin/verify.hpp"

namespace rumin {

using Json = nlohmann::ordered_json;

// A titled table plus key/value facts.  Row objects are keyed by column name;
// a null cell prints as "-".
struct Report {
  std::string kind;
  std::string model;
  Json facts = Json::object();
  std::vector<std::string> columns;
  std::vector<Json> rows;
  std::vector<std::string> notes;  // printed verbatim after the table

  bool ok = true;
  std::string first_failure;
};

inline constexpr const char* kReportSchema = "rumin-report/1";

// format: text | json.  Throws std::invalid_argument otherwise.
std::string emit(const Report& r, const std::string& format);

Report group_report(const std::string& model, const std::vector<GroupRow>& rows);
// One row per identity: suite, identity, anchor, status, checked, detail.
Report suite_report(const std::string& model, const std::vector<SuiteReport>& suites);
Report check_report(const std::string& kind, const std::string& model, const std::vector<CheckLine>& lines);

}  // namespace rumin
