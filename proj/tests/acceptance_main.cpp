// One line per acceptance criterion; exit status 1 if any fails.
#include <cstdio>

#include "hs2/acceptance.hpp"

int main() {
  bool all = true;
  for (const auto& r : hs2::run_acceptance()) {
    std::printf("[%s] %2d %s: %s\n", r.passed ? "PASS" : "FAIL", r.id, r.name.c_str(),
                r.detail.c_str());
    all = all && r.passed;
  }
  std::printf("%s\n", all ? "all criteria passed" : "some criteria FAILED");
  return all ? 0 : 1;
}
