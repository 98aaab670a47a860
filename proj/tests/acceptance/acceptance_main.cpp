#include <cstdlib>
#include <string>

#include "e2kit/acceptance.hpp"

int main(int argc, char** argv) {
  e2kit::acceptance::Config cfg;
  for (int i = 1; i < argc; ++i) {
    std::string arg = argv[i];
    if (arg == "--outdir" && i + 1 < argc) cfg.outdir = argv[++i];
    if (arg == "--seed" && i + 1 < argc) cfg.seed = std::stoull(argv[++i]);
    if (arg == "--workers" && i + 1 < argc) cfg.workers = std::atoi(argv[++i]);
  }
  auto results = e2kit::acceptance::run_all(cfg);
  return e2kit::acceptance::all_passed(results) ? 0 : 1;
}
