// Command-line front end: instance setup, sum experiments, lattice tables,
// Poisson/zerosum/s10 diagnostics, the two applications, and the acceptance
// battery.  Exit codes: 0 success, 1 assertion/acceptance failure,
// 2 usage/config error, 3 resource ceiling.

#include <complex>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "e2kit/acceptance.hpp"
#include "e2kit/apps.hpp"
#include "e2kit/arith.hpp"
#include "e2kit/errors.hpp"
#include "e2kit/lattice.hpp"
#include "e2kit/report.hpp"
#include "e2kit/set_a.hpp"
#include "e2kit/sums.hpp"
#include "e2kit/surd.hpp"
#include "e2kit/weight.hpp"

namespace {

using namespace e2kit;
using arith::Rational64;
using report::fmt_real;

struct GlobalOpts {
  std::string output;  // empty = stdout
  std::string format = "csv";
  std::uint64_t seed = 1;
  int workers = 0;
  std::string config_file;
};

void emit(const GlobalOpts& g, const std::string& content) {
  std::string path = g.output;
  if (path.empty()) {
    if (const char* dir = std::getenv("E2KIT_OUTDIR")) path = std::string(dir) + "/out";
  }
  if (path.empty()) {
    std::cout << content;
  } else {
    report::write_file(path, content);
    std::cerr << "wrote " << path << "\n";
  }
}

arith::Alpha parse_alpha(const std::string& name) {
  if (name == "sqrt2") return arith::Alpha::sqrt2();
  if (name == "phi") return arith::Alpha::golden();
  if (name == "e") return arith::Alpha::euler();
  // otherwise a file of partial quotients, one integer per line
  std::ifstream in(name);
  if (!in) throw ConfigError("alpha: no such named irrational or file '" + name + "'");
  std::vector<std::int64_t> quotients;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    quotients.push_back(std::stoll(line));
  }
  return arith::Alpha::from_quotients(std::move(quotients), name);
}

InstanceParams load_instance(const std::string& path) { return load_params(path); }

std::string reports_out(const GlobalOpts& g, const std::vector<sums::SumReport>& rs) {
  return g.format == "json" ? report::sum_reports_json(rs) : report::sum_reports_csv(rs);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"toolkit for semiprimes in modular-structured sets"};
  app.require_subcommand(1);
  app.fallthrough();  // global options may follow the subcommand

  GlobalOpts g;
  app.add_option("-o,--output", g.output, "output file (default: stdout)");
  app.add_option("--format", g.format, "csv|json")->check(CLI::IsMember({"csv", "json"}));
  app.add_option("--seed", g.seed, "seed for randomized commands");
  app.add_option("--workers", g.workers, "worker threads (default: logical CPUs)");
  app.add_option("--config", g.config_file, "key=value config file");

  // ---- params ----
  auto* cmd_params = app.add_subcommand("params", "derive and validate instance parameters");
  std::string tau_str = "1/3";
  std::int64_t q = 0, a = 0;
  double delta = 0.02;
  std::optional<double> z_opt, x_opt;
  std::string out_instance;
  bool skip_admissibility = false;
  cmd_params->add_option("--tau", tau_str, "tau as a fraction or decimal")->required();
  cmd_params->add_option("--q", q, "modulus")->required();
  cmd_params->add_option("--a", a, "residue multiplier, gcd(a,q)=1")->required();
  cmd_params->add_option("--z", z_opt, "z (default q^{(1-tau)/(1+tau)})");
  cmd_params->add_option("--x", x_opt, "x (default q^{2/(1+tau)})");
  cmd_params->add_option("--delta", delta, "delta > 0");
  cmd_params->add_option("--save", out_instance, "write the instance record to a file");
  cmd_params->add_flag("--no-admissibility-check", skip_admissibility,
                       "skip the Type II tau < 8/23 gate");

  // ---- enumerate ----
  auto* cmd_enum = app.add_subcommand("enumerate", "stream members of the structured set");
  std::string instance_file;
  bool count_e2 = false;
  bool squarefree = false;
  std::int64_t ceiling = kDefaultCeiling;
  cmd_enum->add_option("--instance", instance_file, "instance record file")->required();
  cmd_enum->add_flag("--count-e2", count_e2, "count semiprime members instead of streaming");
  cmd_enum->add_flag("--squarefree", squarefree, "use the squarefree-only convention");
  cmd_enum->add_option("--ceiling", ceiling, "enumeration ceiling");

  // ---- sum commands ----
  struct SumCmd {
    CLI::App* cmd = nullptr;
    std::string instance;
    std::int64_t M = 0, N = 0;
    std::string coeff = "one";
    bool oracle = false;
    bool bypass = false;
  };
  auto add_sum_cmd = [&](const std::string& name, const std::string& desc) {
    SumCmd sc;
    sc.cmd = app.add_subcommand(name, desc);
    return sc;
  };
  SumCmd sc_type1 = add_sum_cmd("type1", "Type I bilinear sum");
  SumCmd sc_type1s = add_sum_cmd("type1-smooth", "Type I sum with a smooth n-window");
  SumCmd sc_type1v = add_sum_cmd("type1-variant", "Type I variant with two Phi factors");
  SumCmd sc_type2 = add_sum_cmd("type2", "Type II sum with varpi-1 coefficients");
  for (SumCmd* sc : {&sc_type1, &sc_type1s, &sc_type1v, &sc_type2}) {
    sc->cmd->add_option("--instance", sc->instance, "instance record file")->required();
    sc->cmd->add_option("--M", sc->M, "dyadic m-window start")->required();
    sc->cmd->add_option("--N", sc->N, "dyadic n-window start")->required();
    sc->cmd->add_option("--coeff", sc->coeff, "one|varpi|varpi-minus-one");
    sc->cmd->add_flag("--oracle", sc->oracle, "cross-check against the naive-loop oracle");
  }
  sc_type2.cmd->add_flag("--bypass-window", sc_type2.bypass,
                         "run outside the admissible N-window");

  // ---- lattice ----
  auto* cmd_lattice = app.add_subcommand("lattice", "level counts or moment sums");
  std::int64_t lat_q = 0, lat_a = 0, lat_M = 0, lat_N = 0;
  bool lat_levels = false, lat_moments = false;
  std::string lat_instance;
  cmd_lattice->add_option("--q", lat_q, "modulus");
  cmd_lattice->add_option("--a", lat_a, "residue multiplier");
  cmd_lattice->add_option("--M", lat_M, "m range limit / dyadic start")->required();
  cmd_lattice->add_flag("--levels", lat_levels, "distribution of shortest-vector lengths");
  cmd_lattice->add_flag("--moments", lat_moments, "second moments of the counting function");
  cmd_lattice->add_option("--instance", lat_instance, "instance file (moments)");
  cmd_lattice->add_option("--N", lat_N, "dyadic n-window (moments)");

  // ---- poisson-check ----
  auto* cmd_poisson = app.add_subcommand("poisson-check", "Poisson summation discrepancies");
  int poisson_samples = 10;
  cmd_poisson->add_option("--samples", poisson_samples, "number of random (v,u) draws");

  // ---- zerosum ----
  auto* cmd_zerosum = app.add_subcommand("zerosum", "truncated vanishing j-sum statistic");
  std::string zs_instance;
  std::int64_t zs_N = 0;
  int zs_samples = 20;
  cmd_zerosum->add_option("--instance", zs_instance, "instance record file")->required();
  cmd_zerosum->add_option("--N", zs_N, "dyadic n-window")->required();
  cmd_zerosum->add_option("--samples", zs_samples, "number of (t,k,n1,n2) draws");

  // ---- s10 ----
  auto* cmd_s10 = app.add_subcommand("s10", "exponential sum over prime inverses");
  std::int64_t s10_N = 0, s10_cl = 1;
  int s10_samples = 0;
  bool s10_unit = false;
  cmd_s10->add_option("--N", s10_N, "dyadic window")->required();
  cmd_s10->add_option("--cl", s10_cl, "the c*l phase numerator (nonzero)");
  cmd_s10->add_option("--samples", s10_samples, "subsample of n2 values (0 = all)");
  cmd_s10->add_flag("--unit-weight", s10_unit, "weight 1 instead of log at primes");

  // ---- dioph ----
  auto* cmd_dioph = app.add_subcommand("dioph", "semiprime Diophantine solutions");
  std::string dioph_alpha = "sqrt2", dioph_tau = "1/3";
  std::int64_t dioph_qmin = 1000, dioph_qmax = 100000;
  cmd_dioph->add_option("--alpha", dioph_alpha, "sqrt2|phi|e|FILE");
  cmd_dioph->add_option("--tau", dioph_tau, "tau as a fraction or decimal");
  cmd_dioph->add_option("--qmin", dioph_qmin, "smallest convergent denominator");
  cmd_dioph->add_option("--qmax", dioph_qmax, "largest convergent denominator");

  // ---- palindrome ----
  auto* cmd_pal = app.add_subcommand("palindrome", "3-digit palindrome semiprime counts");
  std::int64_t pal_b = 0, pal_bmax = 0;
  double pal_factor = 2.0;
  cmd_pal->add_option("--b", pal_b, "base")->required();
  cmd_pal->add_option("--bmax", pal_bmax, "scan bases b, b*f, ... up to bmax");
  cmd_pal->add_option("--bfactor", pal_factor, "geometric step for the scan");

  // ---- suite ----
  auto* cmd_suite = app.add_subcommand("suite", "run a named suite");
  std::string suite_name;
  std::string suite_outdir = "acceptance_out";
  cmd_suite->add_option("name", suite_name, "acceptance")->required();
  cmd_suite->add_option("--outdir", suite_outdir, "directory for data files");

  try {
    app.parse(argc, argv);

    if (!g.config_file.empty()) {
      report::RunConfig cfg = report::RunConfig::from_file(g.config_file);
      g.seed = static_cast<std::uint64_t>(cfg.get_int("seed", static_cast<std::int64_t>(g.seed)));
      g.workers = static_cast<int>(cfg.get_int("workers", g.workers));
      g.output = cfg.get_str("output", g.output);
      g.format = cfg.get_str("format", g.format);
    }

    if (cmd_params->parsed()) {
      Rational64 tau = Rational64::parse(tau_str);
      InstanceParams p = derive_params(tau, q, a, z_opt, x_opt, delta);
      if (!skip_admissibility) {
        sums::Window w = sums::admissible_window(p);  // throws when inadmissible
        std::cerr << "admissible N-window: [" << fmt_real(w.n_low) << ", "
                  << fmt_real(w.n_high) << "]\n";
      }
      if (!out_instance.empty()) save_params(p, out_instance);
      emit(g, params_to_text(p));
      return 0;
    }

    if (cmd_enum->parsed()) {
      InstanceParams p = load_instance(instance_file);
      if (count_e2) {
        auto conv = squarefree ? arith::E2Convention::SquarefreeOnly
                               : arith::E2Convention::WithMultiplicity;
        E2Count c = count_e2_in_a(p, conv, g.workers, ceiling);
        std::ostringstream os;
        os << "count,density_ratio\n" << c.count << ',' << fmt_real(c.density_ratio) << '\n';
        emit(g, os.str());
      } else {
        std::ostringstream os;
        os << "n\n";
        for_each_member(
            p,
            [&](std::int64_t n) {
              os << n << '\n';
              return true;
            },
            ceiling);
        emit(g, os.str());
      }
      return 0;
    }

    for (SumCmd* sc : {&sc_type1, &sc_type1s, &sc_type1v, &sc_type2}) {
      if (!sc->cmd->parsed()) continue;
      InstanceParams p = load_instance(sc->instance);
      sums::EvalOptions opt;
      opt.workers = g.workers;
      opt.oracle = sc->oracle;
      opt.bypass_window = sc->bypass;
      sums::CoefficientSpec coeff = sums::CoefficientSpec::parse(sc->coeff);
      sums::SumReport r;
      if (sc == &sc_type1)
        r = sums::type1(coeff, sc->M, sc->N, p, opt);
      else if (sc == &sc_type1s)
        r = sums::type1_smooth(coeff, sc->M, sc->N, p, opt);
      else if (sc == &sc_type1v)
        r = sums::type1_variant(coeff, sc->M, sc->N, p, opt);
      else
        r = sums::type2(sc->M, sc->N, p, coeff, opt);
      std::cerr << r.op << ": " << fmt_real(r.wall_seconds) << "s\n";
      if (r.oracle_checked) {
        double rel = std::abs(r.value - r.oracle_value) /
                     std::max({std::abs(r.value), std::abs(r.oracle_value),
                               p.z * p.z * 1e-15});
        std::cerr << "oracle rel diff: " << fmt_real(rel) << "\n";
        if (rel > 1e-9) {
          emit(g, reports_out(g, {r}));
          std::cerr << "oracle cross-check FAILED\n";
          return 1;
        }
      }
      emit(g, reports_out(g, {r}));
      return 0;
    }

    if (cmd_lattice->parsed()) {
      if (lat_levels == lat_moments)
        throw ConfigError("lattice: pick exactly one of --levels / --moments");
      std::ostringstream os;
      if (lat_levels) {
        if (lat_q < 1 || lat_a == 0) throw ConfigError("lattice --levels needs --q and --a");
        os << "l,count\n";
        for (auto& [l, cnt] : lattice::level_table(lat_M, lat_q, lat_a))
          os << l << ',' << cnt << '\n';
      } else {
        if (lat_instance.empty() || lat_N < 1)
          throw ConfigError("lattice --moments needs --instance and --N");
        InstanceParams p = load_instance(lat_instance);
        lattice::Moments mo = lattice::moment_sums(lat_M, p, lat_N, g.workers);
        os << "M,N,sum_psi_sq,sum_psi1_sq\n"
           << lat_M << ',' << lat_N << ',' << fmt_real(mo.sum_psi_sq) << ','
           << fmt_real(mo.sum_psi1_sq) << '\n';
      }
      emit(g, os.str());
      return 0;
    }

    if (cmd_poisson->parsed()) {
      Rng rng(g.seed);
      std::ostringstream os;
      os << "v,u,truncation,lhs,rhs_re,rhs_im,discrepancy\n";
      double worst = 0;
      for (int i = 0; i < poisson_samples; ++i) {
        double v = rng.uniform(0.1, 10.0);
        double u = rng.uniform(-5.0, 5.0);
        int trunc = static_cast<int>(std::ceil(500.0 * v)) + 8;
        weight::PoissonCheck c = weight::poisson_check(v, u, trunc);
        worst = std::max(worst, c.discrepancy);
        os << fmt_real(v) << ',' << fmt_real(u) << ',' << trunc << ',' << fmt_real(c.lhs)
           << ',' << fmt_real(c.rhs.real()) << ',' << fmt_real(c.rhs.imag()) << ','
           << fmt_real(c.discrepancy) << '\n';
      }
      emit(g, os.str());
      std::cerr << "max discrepancy " << fmt_real(worst) << "\n";
      return worst <= 1e-8 ? 0 : 1;
    }

    if (cmd_zerosum->parsed()) {
      InstanceParams p = load_instance(zs_instance);
      Rng rng(g.seed);
      double eta = 0.05;
      double t_span = static_cast<double>(p.q) / std::pow(p.z, 1.0 - eta);
      std::ostringstream os;
      os << "t,k,n1,n2,stat\n";
      double worst = 0;
      for (int i = 0; i < zs_samples; ++i) {
        double t = rng.uniform(-t_span, t_span);
        std::int64_t k = rng.uniform_int(-5, 5);
        std::int64_t n1 = rng.uniform_int(zs_N + 1, 2 * zs_N);
        std::int64_t n2 = rng.uniform_int(zs_N + 1, 2 * zs_N);
        double stat = sums::zerosum_stat(t, k, n1, n2, p);
        worst = std::max(worst, stat);
        os << fmt_real(t) << ',' << k << ',' << n1 << ',' << n2 << ',' << fmt_real(stat)
           << '\n';
      }
      emit(g, os.str());
      std::cerr << "max |j-sum| " << fmt_real(worst) << "\n";
      return 0;
    }

    if (cmd_s10->parsed()) {
      sums::S10Result r;
      if (s10_samples > 0) {
        // seeded subsample of n2 values
        Rng rng(g.seed);
        std::ostringstream os;
        os << "n2,magnitude\n";
        Kahan agg;
        for (int i = 0; i < s10_samples; ++i) {
          std::int64_t n2 = rng.uniform_int(s10_N + 1, 2 * s10_N);
          sums::S10Result one =
              sums::s10(s10_N, s10_cl, n2, n2, s10_N + 1, 2 * s10_N, s10_unit, g.workers);
          agg.add(one.per_n2[0].second);
          os << n2 << ',' << fmt_real(one.per_n2[0].second) << '\n';
        }
        double scaled = agg.value() * static_cast<double>(s10_N) / s10_samples;
        os << "aggregate_estimate," << fmt_real(scaled) << '\n';
        os << "empirical_exponent,"
           << fmt_real(std::log(scaled) / std::log(static_cast<double>(s10_N))) << '\n';
        emit(g, os.str());
        return 0;
      }
      r = sums::s10(s10_N, s10_cl, s10_unit, g.workers);
      std::ostringstream os;
      os << "n2,magnitude\n";
      for (auto& [n2, mag] : r.per_n2) os << n2 << ',' << fmt_real(mag) << '\n';
      os << "aggregate," << fmt_real(r.aggregate) << '\n';
      os << "empirical_exponent," << fmt_real(r.exponent) << '\n';
      emit(g, os.str());
      return 0;
    }

    if (cmd_dioph->parsed()) {
      arith::Alpha alpha = parse_alpha(dioph_alpha);
      apps::DiophOptions opt;
      opt.workers = g.workers;
      apps::DiophResult res =
          apps::dioph_solve(alpha, Rational64::parse(dioph_tau), dioph_qmin, dioph_qmax, opt);
      std::ostringstream os;
      os << "n,p1,p2,q_of_convergent,distance,bound\n";
      for (const auto& s : res.solutions)
        os << s.n << ',' << s.p1 << ',' << s.p2 << ',' << s.conv_den << ','
           << fmt_real(s.distance) << ',' << fmt_real(s.bound) << '\n';
      emit(g, os.str());
      std::cerr << res.solutions.size() << " certified solutions, " << res.near_misses
                << " near misses from " << res.candidates << " semiprime candidates\n";
      return 0;
    }

    if (cmd_pal->parsed()) {
      std::ostringstream os;
      os << "b,count,density_ratio\n";
      std::int64_t b = pal_b;
      std::int64_t last = pal_bmax > 0 ? pal_bmax : pal_b;
      while (b <= last) {
        apps::PalindromeCount c = apps::palindrome_e2_count(
            b, arith::E2Convention::WithMultiplicity, g.workers);
        os << c.b << ',' << c.count << ',' << fmt_real(c.density_ratio) << '\n';
        if (pal_factor <= 1.0) break;
        auto next = static_cast<std::int64_t>(static_cast<double>(b) * pal_factor);
        if (next <= b) break;
        b = next;
      }
      emit(g, os.str());
      return 0;
    }

    if (cmd_suite->parsed()) {
      if (suite_name != "acceptance")
        throw ConfigError("unknown suite '" + suite_name + "'");
      acceptance::Config cfg;
      cfg.seed = g.seed;
      cfg.workers = g.workers;
      cfg.outdir = suite_outdir;
      if (const char* dir = std::getenv("E2KIT_OUTDIR")) cfg.outdir = dir;
      auto results = acceptance::run_all(cfg);
      return acceptance::all_passed(results) ? 0 : 1;
    }

    throw ConfigError("no subcommand given");
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return e.exit_code();
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
