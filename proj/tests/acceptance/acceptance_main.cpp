// Runs every acceptance criterion and prints one PASS/FAIL line per criterion.
// Usage: aggrlim_acceptance [small|default|large] [seed]

#include <cstdio>
#include <cstdlib>
#include <exception>
#include <string>

#include "aggrlim/verification.hpp"

int main(int argc, char** argv) {
  using namespace aggrlim;
  try {
    VerifyOptions opt;
    if (argc > 1) opt.budget = parse_budget(argv[1]);
    if (argc > 2) opt.seed = std::stoull(argv[2]);
    if (const char* env = std::getenv("AGGRLIM_THREADS")) opt.threads = static_cast<unsigned>(std::stoul(env));
    opt.on_result = [](const CriterionResult& r) {
      const char* verdict = r.pass ? "PASS" : (r.gating ? "FAIL" : "SOFT-FAIL");
      std::printf("%-9s criterion %-3s %s (%.1f s)\n", verdict, r.id.c_str(), r.title.c_str(), r.seconds);
      for (const auto& c : r.checks)
        std::printf("    %-4s %-40s est %.6g  ref %.6g  band [%.6g, %.6g]\n", c.pass ? "ok" : "FAIL",
                    c.name.c_str(), c.estimate, c.reference, c.band_lo, c.band_hi);
      std::fflush(stdout);
    };
    std::printf("budget %s, seed %llu\n", std::string(to_string(opt.budget)).c_str(),
                static_cast<unsigned long long>(opt.seed));
    const auto results = run_suite("all", opt);
    const bool ok = gating_pass(results);
    std::printf("%s\n", ok ? "ALL GATING CRITERIA PASS" : "GATING CRITERIA FAILED");
    return ok ? 0 : 1;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 3;
  }
}
