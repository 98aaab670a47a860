#include "e2kit/report.hpp"

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <thread>

#include "e2kit/errors.hpp"
#include "e2kit/reduce.hpp"

#include "json.hpp"

namespace e2kit {

int resolve_workers(int requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("E2KIT_WORKERS")) {
    int v = std::atoi(env);
    if (v > 0) return v;
  }
  unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

}  // namespace e2kit

namespace e2kit::report {

std::string fmt_real(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

namespace {

void append_report_fields(std::ostringstream& os, const sums::SumReport& r) {
  os << kSchemaVersion << ',' << r.op << ',' << r.params.tau.str() << ',' << r.params.q
     << ',' << r.params.a << ',' << fmt_real(r.params.z) << ',' << fmt_real(r.params.x)
     << ',' << fmt_real(r.params.delta) << ',' << r.m_window << ',' << r.n_window << ','
     << r.coeff << ',' << fmt_real(r.value) << ',' << fmt_real(r.main_term) << ','
     << fmt_real(r.abs_error) << ',' << fmt_real(r.rel_error) << ','
     << fmt_real(r.value_over_z2) << ','
     << (r.oracle_checked ? fmt_real(r.oracle_value) : std::string()) << '\n';
}

}  // namespace

std::string sum_reports_csv(const std::vector<sums::SumReport>& reports) {
  std::ostringstream os;
  os << "schema,op,tau,q,a,z,x,delta,M,N,coeff,value,main_term,abs_error,rel_error,"
        "value_over_z2,oracle_value\n";
  for (const auto& r : reports) append_report_fields(os, r);
  return os.str();
}

std::string sum_reports_json(const std::vector<sums::SumReport>& reports) {
  nlohmann::ordered_json doc;
  doc["schema"] = kSchemaVersion;
  doc["reports"] = nlohmann::ordered_json::array();
  for (const auto& r : reports) {
    nlohmann::ordered_json j;
    j["op"] = r.op;
    j["tau"] = r.params.tau.str();
    j["q"] = r.params.q;
    j["a"] = r.params.a;
    j["z"] = fmt_real(r.params.z);
    j["x"] = fmt_real(r.params.x);
    j["delta"] = fmt_real(r.params.delta);
    j["M"] = r.m_window;
    j["N"] = r.n_window;
    j["coeff"] = r.coeff;
    j["value"] = fmt_real(r.value);
    j["main_term"] = fmt_real(r.main_term);
    j["abs_error"] = fmt_real(r.abs_error);
    j["rel_error"] = fmt_real(r.rel_error);
    j["value_over_z2"] = fmt_real(r.value_over_z2);
    if (r.oracle_checked) j["oracle_value"] = fmt_real(r.oracle_value);
    doc["reports"].push_back(std::move(j));
  }
  return doc.dump(2) + "\n";
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw ConfigError("cannot write '" + path + "'");
  out << content;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

const std::vector<std::string>& RunConfig::known_keys() {
  static const std::vector<std::string> keys = {
      "seed",        "workers",      "output",        "format",
      "tau",         "q",            "a",             "z",
      "x",           "delta",        "M",             "N",
      "coeff",       "samples",      "b",             "bmax",
      "bfactor",     "alpha",        "qmin",          "qmax",
      "ceiling",     "eta",          "budget",        "near_factor",
      "interval_bits", "truncation", "cl",            "oracle",
      "squarefree",  "bypass_window",
  };
  return keys;
}

RunConfig RunConfig::from_file(const std::string& path) {
  return from_text(read_file(path));
}

RunConfig RunConfig::from_text(const std::string& text) {
  RunConfig cfg;
  std::istringstream is(text);
  std::string line;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("config line " + std::to_string(lineno) + ": missing '='");
    cfg.set(line.substr(0, eq), line.substr(eq + 1));
  }
  return cfg;
}

void RunConfig::set(const std::string& key, const std::string& value) {
  const auto& keys = known_keys();
  if (std::find(keys.begin(), keys.end(), key) == keys.end())
    throw ConfigError("unknown config key '" + key + "'");
  values_[key] = value;
}

bool RunConfig::has(const std::string& key) const { return values_.count(key) > 0; }

std::string RunConfig::get_str(const std::string& key, const std::string& fallback) const {
  auto it = values_.find(key);
  return it == values_.end() ? fallback : it->second;
}

std::int64_t RunConfig::get_int(const std::string& key, std::int64_t fallback) const {
  auto it = values_.find(key);
  return it == values_.end() ? fallback : std::stoll(it->second);
}

double RunConfig::get_real(const std::string& key, double fallback) const {
  auto it = values_.find(key);
  return it == values_.end() ? fallback : std::stod(it->second);
}

std::string RunConfig::to_text() const {
  std::ostringstream os;
  for (const auto& [k, v] : values_) os << k << '=' << v << '\n';
  return os.str();
}

}  // namespace e2kit::report
