// Runs the eight acceptance criteria and prints one PASS/FAIL line each.
// Exit status: 0 if all pass, 2 if any fails, 1 on error.

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <exception>

#include <hho/checks.hpp>

int main(int argc, char** argv) {
  std::uint64_t seed = 20240607;
  if (argc > 1) seed = std::strtoull(argv[1], nullptr, 10);
  try {
    const auto start = std::chrono::steady_clock::now();
    int failed = 0;
    hho::run_acceptance(seed, [&](const hho::CheckResult& r) {
      std::printf("%s  criterion %s  [%s]\n", r.passed ? "PASS" : "FAIL", r.name.c_str(), r.detail.c_str());
      std::fflush(stdout);
      if (!r.passed) ++failed;
    });
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("%d of 8 criteria failed (%.1f s)\n", failed, seconds);
    return failed ? 2 : 0;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "hho_acceptance: %s\n", e.what());
    return 1;
  }
}
