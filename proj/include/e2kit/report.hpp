#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "e2kit/sums.hpp"

// Output formatting and run configuration.  All serialized reals use '.' as
// the decimal separator and 17 significant digits (lossless for doubles);
// identical inputs therefore produce byte-identical files.  Timing is never
// written to files.

namespace e2kit::report {

std::string fmt_real(double v);  // %.17g, C locale

inline constexpr int kSchemaVersion = 1;

// CSV with a leading literal schema column; one row per report.
std::string sum_reports_csv(const std::vector<sums::SumReport>& reports);
// JSON document for a whole run: {"schema":1, "reports":[...]}
std::string sum_reports_json(const std::vector<sums::SumReport>& reports);

void write_file(const std::string& path, const std::string& content);
std::string read_file(const std::string& path);

// Flat key=value run configuration; unknown keys are rejected against the
// registry of recognized keys, and values round-trip losslessly.
class RunConfig {
 public:
  RunConfig() = default;
  static RunConfig from_file(const std::string& path);
  static RunConfig from_text(const std::string& text);

  void set(const std::string& key, const std::string& value);
  bool has(const std::string& key) const;
  std::string get_str(const std::string& key, const std::string& fallback) const;
  std::int64_t get_int(const std::string& key, std::int64_t fallback) const;
  double get_real(const std::string& key, double fallback) const;

  std::string to_text() const;  // sorted keys, lossless round-trip

  static const std::vector<std::string>& known_keys();

 private:
  std::map<std::string, std::string> values_;
};

}  // namespace e2kit::report

namespace e2kit {
// worker resolution shared by every parallel kernel (declared in reduce.hpp)
}
