#pragma once

#include <optional>
#include <string>
#include <vector>

#include "mms/serialize.hpp"

namespace mms {

inline constexpr const char* kVersion = "0.1.0";

enum class ItemStatus { Pass, Fail, Report };
enum class ReportFormat { Json, Markdown };

std::string status_name(ItemStatus s);

struct SuiteItem {
  std::string id;
  ItemStatus status = ItemStatus::Pass;
  std::string detail;
};

struct SuiteConfig {
  std::string suite;  // rank, manin, hecke, pairing, eis, all
  Family family = Family::Gamma0;
  std::vector<long> levels;  // empty: the suite's default level set
  std::vector<long> primes = {2, 3, 5, 7};
  std::vector<long> pn = {5, 7, 9, 11, 13, 25};
  std::optional<double> tolerance;  // else MMS_TOL, else 1e-8
  bool strict = false;              // conjectural checks become assertions
};

struct SuiteReport {
  std::string suite;
  std::vector<SuiteItem> items;
  bool passed() const;
  std::vector<std::string> failures() const;
};

const std::vector<std::string>& suite_names();
// Level sets used when SuiteConfig::levels is empty.
std::vector<long> default_levels(const std::string& suite, Family family);

// Throws UsageError for an unknown suite, a bad level or a nonpositive tolerance.
SuiteReport run_suite(const SuiteConfig& config);

// 0 when every item passed or is report-only, 1 otherwise.
int exit_code(const SuiteReport& report);

Json report_to_json(const SuiteReport& report);
std::string render(const SuiteReport& report, ReportFormat format);

}  // namespace mms
