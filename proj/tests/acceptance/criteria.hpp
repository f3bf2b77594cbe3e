#pragma once

#include <string>
#include <vector>

namespace latticegan::acceptance {

inline constexpr int kCriterionCount = 10;

struct CriterionOutcome {
  bool passed = false;
  std::vector<std::string> failures;
  std::string note;  // measured values, printed on pass and fail
};

std::string criterion_name(int id);
CriterionOutcome run_criterion(int id);

}  // namespace latticegan::acceptance
