// Acceptance suite: one pass/fail line per criterion, nonzero exit on any
// failure. Heavier end-to-end criteria (6-8) accept a --skip-slow flag for
// quick local iteration; the default runs everything.

#include "criteria.hpp"

#include <chrono>
#include <cstdio>
#include <cstring>
#include <string>
#include <vector>

int main(int argc, char** argv) {
  std::vector<int> only;
  bool skip_slow = false;
  for (int i = 1; i < argc; ++i) {
    if (std::strcmp(argv[i], "--skip-slow") == 0)
      skip_slow = true;
    else
      only.push_back(std::atoi(argv[i]));
  }

  const auto& criteria = acceptance::all_criteria();
  int failures = 0;
  for (const auto& c : criteria) {
    if (!only.empty() && std::find(only.begin(), only.end(), c.id) == only.end()) continue;
    if (skip_slow && c.slow) {
      std::printf("[SKIP] criterion %d: %s\n", c.id, c.name);
      continue;
    }
    auto t0 = std::chrono::steady_clock::now();
    std::string detail;
    bool pass = false;
    try {
      detail = c.run();
      pass = detail.empty();
    } catch (const std::exception& e) {
      detail = std::string("exception: ") + e.what();
    }
    double dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (pass) {
      std::printf("[PASS] criterion %d: %s (%.1fs)\n", c.id, c.name, dt);
    } else {
      std::printf("[FAIL] criterion %d: %s (%.1fs) — %s\n", c.id, c.name, dt, detail.c_str());
      ++failures;
    }
    std::fflush(stdout);
  }
  if (failures) std::printf("%d criterion(s) failed\n", failures);
  return failures ? 1 : 0;
}
