#pragma once

#include <cstdint>
#include <functional>
#include <set>
#include <string>
#include <vector>

namespace zrp {

struct CriterionResult {
  int id = 0;
  std::string title;
  bool pass = false;
  double seconds = 0;
  std::size_t checks = 0;
  std::string detail;  // first failure witness, or a short summary
};

struct AcceptanceOptions {
  std::uint64_t seed = 20241015;
  std::set<int> only;  // empty: all criteria
};

constexpr int kCriterionCount = 13;
std::string criterion_title(int id);

// Runs the fixed acceptance grid; `on_result` is called as each criterion finishes.
std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& o,
                                            const std::function<void(const CriterionResult&)>& on_result = {});

// "PASS  3  title  [1.2 s, 123 checks]  detail"
std::string format_result(const CriterionResult& r);

}  // namespace zrp
