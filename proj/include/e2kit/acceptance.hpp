#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace e2kit::acceptance {

struct Config {
  std::uint64_t seed = 1;
  int workers = 0;
  std::string outdir = "acceptance_out";
  bool quiet = false;
};

struct CriterionResult {
  int id = 0;
  std::string name;
  bool pass = false;
  std::string detail;
  double seconds = 0;
};

// Runs every criterion, writes the per-criterion data files plus summary.csv
// under cfg.outdir, prints one pass/fail line per criterion, and finishes
// with the determinism criterion: the whole battery is evaluated a second
// time and every output file must be byte-identical.
std::vector<CriterionResult> run_all(const Config& cfg);

bool all_passed(const std::vector<CriterionResult>& results);

}  // namespace e2kit::acceptance
