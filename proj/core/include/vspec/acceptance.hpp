#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "vspec/config.hpp"

namespace vspec {

inline constexpr const char* kVerifySchema = "vspec-verify/1";

enum class Bound { AtMost, AtLeast, Window };

// One measured quantity against its limit. For windows `limit` is the lower
// end and `upper` the upper end.
struct Check {
  std::string name;
  double value = 0.0;
  Bound bound = Bound::AtMost;
  double limit = 0.0;
  double upper = 0.0;
  bool pass = false;
  std::string note;
};

struct CriterionResult {
  int id = 0;
  std::string title;
  std::vector<Check> checks;
  std::string error;  // exception text when the criterion could not be evaluated
  double seconds = 0.0;

  [[nodiscard]] bool pass() const;
};

struct AcceptanceReport {
  std::string config_json;
  std::vector<CriterionResult> criteria;

  [[nodiscard]] bool pass() const;
  [[nodiscard]] std::string to_json(int indent = 2) const;
};

// Runs criteria 1..10 (or the listed subset). Progress and one PASS/FAIL line
// per criterion go to `log` when given.
AcceptanceReport run_acceptance(const RunConfig& cfg, std::ostream* log = nullptr, const std::vector<int>& only = {});

// "[PASS]  3  eigenfunction structure (4/4 checks)"
std::string summary_line(const CriterionResult& c);

}  // namespace vspec
