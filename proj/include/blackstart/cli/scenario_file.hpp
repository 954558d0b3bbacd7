#pragma once

#include <string>
#include <string_view>

#include "blackstart/scenario/case.hpp"
#include "blackstart/scenario/schedule.hpp"

namespace blackstart::cli {

/// Malformed scenario text. `line` and `column` are 1-based.
class SyntaxError : public scenario::ScenarioError {
 public:
  SyntaxError(int line, int column, const std::string& message);
  int line() const { return line_; }
  int column() const { return column_; }

 private:
  int line_;
  int column_;
};

struct ScenarioFile {
  scenario::CaseDefinition definition;
  scenario::EventSchedule schedule;

  friend bool operator==(const ScenarioFile&, const ScenarioFile&) = default;
};

/// Reads the line-oriented `section.key = value` format. Throws SyntaxError
/// for malformed lines and unknown keys, ScenarioError when the case or
/// schedule fails validation.
ScenarioFile parse_scenario(std::string_view text);

/// Writes every field of the case and schedule; parse_scenario(serialize(x))
/// == x. Throws ScenarioError for ids the format cannot carry.
std::string serialize_scenario(const ScenarioFile& scenario);

/// "default-blackstart" or "hard-switch"; builtin_scenario throws
/// ScenarioError for any other name.
bool is_builtin_scenario(std::string_view name);
ScenarioFile builtin_scenario(std::string_view name);

/// Built-in name or path to a scenario file.
ScenarioFile load_scenario(const std::string& name_or_path);

}  // namespace blackstart::cli
