#include "e2kit/set_a.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <sstream>

#include "e2kit/errors.hpp"
#include "e2kit/reduce.hpp"

namespace e2kit {

using arith::Rational64;

double InstanceParams::z_pow(double e) const { return std::pow(z, e); }

namespace {

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

InstanceParams derive_params(Rational64 tau, std::int64_t q, std::int64_t a,
                             std::optional<double> z_opt, std::optional<double> x_opt,
                             double delta) {
  if (tau.num <= 0 || compare(tau, Rational64{1, 2}) >= 0)
    throw WindowError("tau = " + tau.str() + " outside (0, 1/2)");
  if (q < 2) throw WindowError("q must be >= 2, got " + std::to_string(q));
  if (delta <= 0) throw WindowError("delta must be > 0");

  std::int64_t a_mod = ((a % q) + q) % q;
  if (std::gcd(a_mod, q) != 1)
    throw ConfigError("gcd(a, q) = " + std::to_string(std::gcd(a_mod, q)) +
                      " != 1 (a = " + std::to_string(a) + ", q = " + std::to_string(q) + ")");

  double t = tau.value();
  double qd = static_cast<double>(q);
  double z_center = std::pow(qd, (1.0 - t) / (1.0 + t));
  double x_center = std::pow(qd, 2.0 / (1.0 + t));
  double z = z_opt.value_or(z_center);
  double x = x_opt.value_or(x_center);

  if (!(z >= 0.5 * z_center && z <= 2.0 * z_center))
    throw WindowError("z window violated: need " + fmt17(0.5 * z_center) + " <= z <= " +
                      fmt17(2.0 * z_center) + ", got z = " + fmt17(z));
  if (!(x >= 0.5 * x_center && x <= 2.0 * x_center))
    throw WindowError("x window violated: need " + fmt17(0.5 * x_center) + " <= x <= " +
                      fmt17(2.0 * x_center) + ", got x = " + fmt17(x));
  // zq and x must agree within the factor-4 window the two memberships imply
  double ratio = z * qd / x;
  if (!(ratio >= 0.25 && ratio <= 4.0))
    throw WindowError("zq/x = " + fmt17(ratio) + " outside [1/4, 4]");
  if (!(z < 0.25 * qd))
    throw WindowError("z = " + fmt17(z) + " >= q/4 = " + fmt17(0.25 * qd) +
                      " (single-representative Phi evaluation needs z < q/4)");

  InstanceParams p;
  p.tau = tau;
  p.q = q;
  p.a = a_mod;
  p.a_inv = arith::mod_inverse(a_mod, q);
  p.z = z;
  p.x = x;
  p.delta = delta;
  return p;
}

std::string params_to_text(const InstanceParams& p) {
  std::ostringstream os;
  os << "tau=" << p.tau.str() << "\n"
     << "q=" << p.q << "\n"
     << "a=" << p.a << "\n"
     << "z=" << fmt17(p.z) << "\n"
     << "x=" << fmt17(p.x) << "\n"
     << "delta=" << fmt17(p.delta) << "\n";
  return os.str();
}

InstanceParams params_from_text(const std::string& text) {
  std::istringstream is(text);
  std::string line;
  std::optional<Rational64> tau;
  std::optional<std::int64_t> q, a;
  std::optional<double> z, x, delta;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("instance record line " + std::to_string(lineno) + ": missing '='");
    std::string key = line.substr(0, eq);
    std::string val = line.substr(eq + 1);
    if (key == "tau")
      tau = Rational64::parse(val);
    else if (key == "q")
      q = std::stoll(val);
    else if (key == "a")
      a = std::stoll(val);
    else if (key == "z")
      z = std::stod(val);
    else if (key == "x")
      x = std::stod(val);
    else if (key == "delta")
      delta = std::stod(val);
    else
      throw ConfigError("instance record: unknown key '" + key + "'");
  }
  if (!tau || !q || !a || !z || !x || !delta)
    throw ConfigError("instance record: need all of tau, q, a, z, x, delta");
  return derive_params(*tau, *q, *a, z, x, *delta);
}

InstanceParams load_params(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open instance file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return params_from_text(ss.str());
}

void save_params(const InstanceParams& p, const std::string& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw ConfigError("cannot write instance file '" + path + "'");
  out << params_to_text(p);
}

PhiEval::PhiEval(const InstanceParams& p) : q_(p.q), a_inv_(p.a_inv), z_(p.z) {
  support_lo_ = static_cast<std::int64_t>(std::ceil(0.25 * z_));
  support_hi_ = static_cast<std::int64_t>(std::floor(0.75 * z_));
}

std::int64_t PhiEval::k0(std::int64_t n) const {
  std::int64_t r = n % q_;
  if (r < 0) r += q_;
  return static_cast<std::int64_t>(
      arith::mulmod(static_cast<std::uint64_t>(r), static_cast<std::uint64_t>(a_inv_),
                    static_cast<std::uint64_t>(q_)));
}

std::int64_t PhiEval::step(std::int64_t m) const {
  std::int64_t r = m % q_;
  if (r < 0) r += q_;
  return static_cast<std::int64_t>(
      arith::mulmod(static_cast<std::uint64_t>(r), static_cast<std::uint64_t>(a_inv_),
                    static_cast<std::uint64_t>(q_)));
}

double phi(std::int64_t n, const InstanceParams& p) { return PhiEval(p)(n); }

bool membership(std::int64_t n, const InstanceParams& p) {
  double nd = static_cast<double>(n);
  if (!(nd > p.x / 4.0 && nd <= p.x)) return false;
  PhiEval pe(p);
  return static_cast<double>(pe.k0(n)) < p.z;
}

namespace {

// residues a*k mod q for k in [0, z), sorted ascending
std::vector<std::int64_t> sorted_residues(const InstanceParams& p) {
  auto kmax = static_cast<std::int64_t>(std::ceil(p.z)) - 1;
  std::vector<std::int64_t> res;
  res.reserve(static_cast<std::size_t>(kmax + 1));
  std::int64_t r = 0;
  for (std::int64_t k = 0; k <= kmax; ++k) {
    res.push_back(r);
    r += p.a;
    if (r >= p.q) r -= p.q;
  }
  std::sort(res.begin(), res.end());
  return res;
}

}  // namespace

void for_each_member(const InstanceParams& p,
                     const std::function<bool(std::int64_t)>& visit,
                     std::int64_t ceiling) {
  if (p.x > static_cast<double>(ceiling))
    throw CeilingError("enumeration ceiling exceeded: x = " + fmt17(p.x) + " > " +
                       std::to_string(ceiling));
  auto lo = static_cast<std::int64_t>(std::floor(p.x / 4.0));  // members are > lo
  auto hi = static_cast<std::int64_t>(std::floor(p.x));        // and <= hi
  if (hi <= lo) return;
  std::vector<std::int64_t> res = sorted_residues(p);
  for (std::int64_t base = (lo / p.q) * p.q; base <= hi; base += p.q) {
    for (std::int64_t r : res) {
      std::int64_t n = base + r;
      if (n <= lo) continue;
      if (n > hi) break;
      if (!visit(n)) return;
    }
  }
}

std::vector<std::int64_t> members(const InstanceParams& p, std::int64_t ceiling) {
  std::vector<std::int64_t> out;
  for_each_member(
      p,
      [&](std::int64_t n) {
        out.push_back(n);
        return true;
      },
      ceiling);
  return out;
}

std::int64_t member_count(const InstanceParams& p) {
  auto lo = static_cast<std::int64_t>(std::floor(p.x / 4.0));
  auto hi = static_cast<std::int64_t>(std::floor(p.x));
  if (hi <= lo) return 0;
  auto kmax = static_cast<std::int64_t>(std::ceil(p.z)) - 1;
  std::int64_t count = 0;
  std::int64_t r = 0;
  auto fdiv = [](std::int64_t a, std::int64_t b) {
    std::int64_t q = a / b;
    if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
    return q;
  };
  for (std::int64_t k = 0; k <= kmax; ++k) {
    count += fdiv(hi - r, p.q) - fdiv(lo - r, p.q);
    r += p.a;
    if (r >= p.q) r -= p.q;
  }
  return count;
}

E2Count count_e2_in_a(const InstanceParams& p, arith::E2Convention conv, int workers,
                      std::int64_t ceiling) {
  if (p.x > static_cast<double>(ceiling))
    throw CeilingError("enumeration ceiling exceeded: x = " + fmt17(p.x) + " > " +
                       std::to_string(ceiling));
  auto lo = static_cast<std::int64_t>(std::floor(p.x / 4.0));
  auto hi = static_cast<std::int64_t>(std::floor(p.x));
  E2Count out;
  if (hi <= lo) return out;

  // partition by k-residue classes: each class is an arithmetic progression
  // mod q, counted independently
  auto kmax = static_cast<std::int64_t>(std::ceil(p.z)) - 1;
  std::vector<std::int64_t> residues;
  residues.reserve(static_cast<std::size_t>(kmax + 1));
  {
    std::int64_t r = 0;
    for (std::int64_t k = 0; k <= kmax; ++k) {
      residues.push_back(r);
      r += p.a;
      if (r >= p.q) r -= p.q;
    }
  }
  auto counts = deterministic_sum_vec<1>(
      0, kmax + 1, workers,
      [&](std::int64_t klo, std::int64_t khi) {
        std::int64_t c = 0;
        for (std::int64_t k = klo; k < khi; ++k) {
          std::int64_t r = residues[static_cast<std::size_t>(k)];
          std::int64_t first = lo + 1;
          std::int64_t n = first + ((r - first) % p.q + p.q) % p.q;
          for (; n <= hi; n += p.q)
            if (arith::is_e2(static_cast<std::uint64_t>(n), conv)) ++c;
        }
        return std::array<double, 1>{static_cast<double>(c)};
      },
      /*chunk=*/16);
  out.count = static_cast<std::int64_t>(counts[0]);
  out.density_ratio =
      static_cast<double>(out.count) * std::log(p.z) / (p.z * p.z);
  return out;
}

}  // namespace e2kit
