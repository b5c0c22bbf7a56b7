#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace sou {

struct ReportRow {
  std::string name;
  std::string family;
  std::string predicted;
  std::string measured;
  std::string tolerance;
  bool pass = false;
};

struct ReportOptions {
  std::vector<std::string> only;  // empty runs every row
  std::uint64_t seed = 7;
  std::size_t mc_paths = 10000;
};

struct ReportResult {
  std::vector<ReportRow> rows;
  std::string markdown;
  std::string csv;
  bool all_pass() const;
};

/// Row names in report order.
const std::vector<std::string>& report_row_names();

ReportResult run_report(const ReportOptions& opts);

}  // namespace sou
