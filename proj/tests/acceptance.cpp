// Runs every acceptance criterion and prints one PASS/FAIL line each.
#include <cstdio>

#include "ternary/acceptance.hpp"

int main() {
  int failed = 0;
  ternary::run_acceptance({}, [&](const ternary::CriterionResult& r) {
    std::printf("%s\n", ternary::format_result(r).c_str());
    std::fflush(stdout);
    failed += !r.pass;
  });
  std::printf("%d of %d criteria passed\n", ternary::kCriterionCount - failed, ternary::kCriterionCount);
  return failed == 0 ? 0 : 1;
}
