#pragma once

#include "tropjac/io.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace tropjac {

struct CriterionResult {
  int id = 0;
  std::string title;
  bool passed = false;
  std::string summary;  // one line: the measured quantities behind the verdict
  double seconds = 0;
  double time_limit = 0;
  Json details;
};

/// Criteria 1..10 of the acceptance suite.
std::vector<int> acceptance_ids();
CriterionResult run_criterion(int id, std::uint64_t seed = 20261014);
std::vector<CriterionResult> run_acceptance(const std::vector<int>& ids, std::uint64_t seed = 20261014);

Json report_to_json(const std::vector<CriterionResult>& results);
/// "[PASS] 3 torelli suite (1.2 s): ..." style line.
std::string format_line(const CriterionResult& r);

}  // namespace tropjac
