#pragma once

#include <functional>
#include <string>
#include <vector>

namespace solitonlab::cli {

struct CriterionResult {
  int id = 0;
  std::string title;
  bool passed = false;
  std::string detail;
  std::string timing;  // kept out of detail so reports stay reproducible
};

struct Criterion {
  int id;
  std::string title;
  std::function<CriterionResult()> run;
};

// Quantitative targets 1-10 (the timing of a full `check` run is left to the
// caller of criterion 10).
const std::vector<Criterion>& criteria();

}  // namespace solitonlab::cli
