#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <sstream>

#include "commands.hpp"
#include "suite.hpp"

using namespace solitonlab::cli;

int main(int argc, char** argv) {
  const int only = argc > 1 ? std::atoi(argv[1]) : 0;
  int failures = 0;
  for (const auto& c : criteria()) {
    if (only && c.id != only) continue;
    auto r = c.run();
    std::string extra = r.timing.empty() ? "" : " [" + r.timing + "]";
    if (r.id == 10) {
      std::ostringstream out, err;
      const auto t0 = std::chrono::steady_clock::now();
      run_cli({"check", "--all"}, out, err);
      const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
      char buf[96];
      std::snprintf(buf, sizeof buf, "; full check --all in %.2f s (limit 60 s)", secs);
      r.detail += buf;
      r.passed = r.passed && secs < 60;
    }
    std::printf("criterion %2d %s: %s: %s%s\n", r.id, r.passed ? "PASS" : "FAIL", r.title.c_str(), r.detail.c_str(),
                extra.c_str());
    failures += !r.passed;
  }
  return failures ? 1 : 0;
}
