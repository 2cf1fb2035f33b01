#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace qhgeo {

struct CriterionResult {
  int id = 0;
  std::string title;
  bool pass = false;
  /// One line, free of timings, so that it enters the digest.
  std::string summary;
  std::vector<std::pair<std::string, double>> metrics;
  double seconds = 0.0;
  /// Wall-clock limit in seconds, 0 when the criterion has none.
  double time_limit = 0.0;
};

struct AcceptanceReport {
  std::uint64_t seed = 1;
  std::vector<CriterionResult> results;

  bool all_pass() const noexcept;
  /// FNV-1a digest over ids, verdicts, summaries and metrics (not timings).
  std::string digest() const;
  std::string to_json() const;
};

/// Criteria 1-10; `seed` drives every sampled instance. Throws InvalidArgument
/// for ids outside 1..10.
CriterionResult run_criterion(int id, std::uint64_t seed);

/// Runs the listed criteria (empty means 1..11). Criterion 11 reruns 1..10 and
/// compares the digest of the rerun with the first run.
AcceptanceReport run_acceptance(std::uint64_t seed, std::vector<int> criteria = {});

/// "all" or a comma-separated list of ids.
std::vector<int> parse_suite(const std::string& suite);

/// "criterion  3 PASS  <summary>  (1.2 s)"
std::string format_result_line(const CriterionResult& r);

/// The log-polar lattice distance in R^2 \ {0} with weight 1/|z| (the
/// reference for the punctured-space check): Dijkstra on a cylinder lattice of
/// step `h` with all primitive moves of size <= `stencil`, finished by the flat
/// distance from the nearest lattice nodes to y.
double log_polar_lattice_distance(double x1, double x2, double y1, double y2, double h, int stencil = 6);

}  // namespace qhgeo
