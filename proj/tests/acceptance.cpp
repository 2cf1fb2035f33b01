// Runs the acceptance criteria and prints one PASS/FAIL line per criterion.
// Usage: acceptance [suite] [seed]   (defaults: all 1)

#include <cstdio>
#include <cstdlib>
#include <string>

#include "qhgeo/acceptance.hpp"
#include "qhgeo/parallel.hpp"

int main(int argc, char** argv) {
  qhgeo::configure_threads_from_env();
  const std::string suite = argc > 1 ? argv[1] : "all";
  const std::uint64_t seed = argc > 2 ? std::strtoull(argv[2], nullptr, 10) : 1;
  const auto report = qhgeo::run_acceptance(seed, qhgeo::parse_suite(suite));
  for (const auto& r : report.results) std::printf("%s\n", qhgeo::format_result_line(r).c_str());
  std::printf("digest %s\n", report.digest().c_str());
  return report.all_pass() ? 0 : 1;
}
