// entroof: measure reports, roof solving, figure data and verification
// campaigns from the command line.
//
// Exit status: 0 success, 1 verification failure, 2 usage or input error.

#include <CLI11.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "entroof/entroof.hpp"

namespace {

using namespace entroof;

struct RunConfig {
  std::uint64_t seed = 0;
  std::size_t restarts = tol::roof_restarts;
  std::optional<std::size_t> s;
  std::optional<double> tolerance;
  std::optional<std::size_t> max_iterations;
  std::string out;
  std::size_t n = 100;
  double p = 0.99;
  std::size_t threads = 0;
};

constexpr int exit_ok = 0;
constexpr int exit_verify_failed = 1;
constexpr int exit_usage = 2;

std::string num(double x) {
  if (std::isnan(x)) return "";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  return io_detail::format_double(x);
}

RoofOptions roof_options(const RunConfig& cfg) {
  RoofOptions opt;
  opt.seed = cfg.seed;
  opt.restarts = cfg.restarts;
  if (cfg.s) opt.s = *cfg.s;
  if (cfg.tolerance) opt.tolerance = *cfg.tolerance;
  if (cfg.max_iterations) opt.max_iterations = *cfg.max_iterations;
  return opt;
}

// Writes to --out when given, stdout otherwise.
void emit(const RunConfig& cfg, const std::string& text) {
  if (cfg.out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(cfg.out, std::ios::binary);
  if (!f) throw InvalidArgument("cannot write '" + cfg.out + "'");
  f << text;
}

std::string dims_text(const Dims& dims) {
  std::string s;
  for (std::size_t i = 0; i < dims.size(); ++i) s += (i ? " " : "") + std::to_string(dims[i]);
  return s;
}

int cmd_measure(const std::string& path, const RunConfig& cfg) {
  const DensityMatrix rho = as_density(load_state(path));
  const MeasureReport r = report_all(rho, roof_options(cfg));
  std::ostringstream os;
  os << "dims: " << dims_text(r.dims) << '\n';
  os << "source: " << r.source << '\n';
  if (r.concurrence) os << "concurrence: " << num(*r.concurrence) << '\n';
  if (r.e_formation) os << "e_formation: " << num(*r.e_formation) << '\n';
  os << "f_s: " << num(r.f_separability) << '\n';
  os << "e_g: " << num(r.e_geometric) << '\n';
  os << "e_bures: " << num(r.e_bures) << '\n';
  os << "e_groverian: " << num(r.e_groverian) << '\n';
  os << "entropy: " << num(r.entropy) << '\n';
  os << "er_lower_bound: " << num(r.er_lower_bound) << '\n';
  emit(cfg, os.str());
  return exit_ok;
}

int cmd_roof(const std::string& path, const RunConfig& cfg) {
  const DensityMatrix rho = as_density(load_state(path));
  const RoofResult r = solve_roof(rho, roof_options(cfg));
  std::ostringstream os;
  os << "# f_s: " << num(r.f_s) << '\n';
  os << "# e_g: " << num(r.e_g) << '\n';
  os << "# residual: " << num(r.stationarity_residual) << '\n';
  os << "# iterations: " << r.iterations << '\n';
  os << "# restart: " << r.restart << '\n';
  os << "# converged: " << (r.converged ? "true" : "false") << '\n';
  os << "# members: " << r.decomposition.size() << '\n';
  for (std::size_t k = 0; k < r.decomposition.size(); ++k) {
    os << "#\n# member " << k + 1 << " weight " << num(r.decomposition.weights()[k]) << " fidelity "
       << num(r.member_fidelities[k]) << '\n';
    write_state(os, r.decomposition.states()[k]);
  }
  os << "#\n# closest separable state\n";
  write_state(os, assemble(r.ensemble));
  emit(cfg, os.str());
  return exit_ok;
}

constexpr int figure_points = 1000;

std::string figure_bures_curve() {
  const double g1 = geometric_from_concurrence(1.0);
  const double b1 = bures_from_concurrence(1.0);
  const double r1 = groverian_measure(fs_from_concurrence(1.0));
  std::string csv = "C,E_G/(1/2),E_B/(2−√2),E_Gr/(1/√2)\n";
  for (int i = 0; i <= figure_points; ++i) {
    const double c = static_cast<double>(i) / figure_points;
    csv += num(c) + ',' + num(geometric_from_concurrence(c) / g1) + ',' + num(bures_from_concurrence(c) / b1) + ',' +
           num(groverian_measure(fs_from_concurrence(c)) / r1) + '\n';
  }
  return csv;
}

std::string figure_gvp(double p) {
  if (!(p > 0.0 && p <= 1.0)) throw InvalidArgument("figure gvp: p must lie in (0, 1], got " + num(p));
  std::string csv = "# E_R := S(rho||sigma*), sigma* = (1-p+pa)|01><01| + p(1-a)|10><10|, p = " + num(p) + '\n';
  csv += "a,E_F,E_R,ℰ\n";
  for (int i = 0; i <= figure_points; ++i) {
    const double a = static_cast<double>(i) / figure_points;
    const DensityMatrix rho = gvp_state(a, p);
    csv += num(a) + ',' + num(entanglement_of_formation_2q(rho)) + ',' + num(gvp_relative_entropy(a, p)) + ',' +
           num(er_lower_bound(rho, geometric_measure_2q(rho))) + '\n';
  }
  return csv;
}

int cmd_figure(const std::string& name, const RunConfig& cfg) {
  emit(cfg, name == "gvp" ? figure_gvp(cfg.p) : figure_bures_curve());
  return exit_ok;
}

std::string verify_csv(const VerifyReport& rep) {
  std::string csv = "sample,case,seed";
  for (const auto& c : rep.columns) csv += ',' + c;
  csv += ",pass\n";
  for (std::size_t i = 0; i < rep.samples.size(); ++i) {
    const VerifySample& s = rep.samples[i];
    csv += std::to_string(i) + ',' + s.label + ',' + std::to_string(s.seed);
    for (double v : s.values) csv += ',' + num(v);
    csv += s.pass ? ",1\n" : ",0\n";
  }
  return csv;
}

// One file per failing sample next to the report (or in the working
// directory), holding the offending state and the numbers that failed.
void dump_reproductions(const VerifyReport& rep, const RunConfig& cfg) {
  namespace fs = std::filesystem;
  const fs::path dir = cfg.out.empty() ? fs::current_path() : fs::absolute(cfg.out).parent_path();
  for (std::size_t i = 0; i < rep.samples.size(); ++i) {
    const VerifySample& s = rep.samples[i];
    if (s.pass || !s.state) continue;
    const fs::path file = dir / ("repro-" + rep.suite + "-" + std::to_string(i) + ".state");
    std::ofstream f(file, std::ios::binary);
    if (!f) throw InvalidArgument("cannot write reproduction file '" + file.string() + "'");
    f << "# suite: " << rep.suite << "\n# sample: " << i << "\n# case: " << s.label << "\n# seed: " << s.seed
      << "\n# run seed: " << cfg.seed << '\n';
    for (std::size_t c = 0; c < rep.columns.size(); ++c) f << "# " << rep.columns[c] << ": " << num(s.values[c]) << '\n';
    write_state(f, *s.state);
    std::cerr << "entroof: sample " << i << " failed, state written to " << file.string() << '\n';
  }
}

int cmd_verify(const std::string& name, const RunConfig& cfg) {
  VerifySuite suite{};
  for (const auto& [label, value] : verify_suite_names())
    if (label == name) suite = value;
  VerifyOptions opt;
  opt.n = cfg.n;
  opt.seed = cfg.seed;
  opt.roof = roof_options(cfg);
  opt.threads = cfg.threads;
  const VerifyReport rep = run_verify(suite, opt);
  emit(cfg, verify_csv(rep));

  std::cerr << rep.suite << ": " << (rep.passed() ? "PASS" : "FAIL") << " (" << rep.samples.size() << " samples)\n";
  for (std::size_t c = 0; c < rep.columns.size(); ++c) {
    if (std::isnan(rep.thresholds[c])) continue;
    std::cerr << "  max " << rep.columns[c] << " = " << num(rep.worst(c)) << " (limit " << num(rep.thresholds[c])
              << ")\n";
  }
  if (rep.passed()) return exit_ok;
  dump_reproductions(rep, cfg);
  return exit_verify_failed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Entanglement measures and convex-roof solver", "entroof"};
  app.require_subcommand(1);
  app.allow_config_extras(false);
  app.set_config("--config", "", "key = value file; command-line flags take precedence");

  RunConfig cfg;
  app.add_option("--seed", cfg.seed, "base seed")->capture_default_str();
  app.add_option("--restarts", cfg.restarts, "random restarts of the roof solver")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  app.add_option("--s", cfg.s, "decomposition size (default d^2)")->check(CLI::PositiveNumber);
  app.add_option("--tolerance", cfg.tolerance, "objective improvement tolerance")->check(CLI::PositiveNumber);
  app.add_option("--max-iterations", cfg.max_iterations, "iteration cap per restart")->check(CLI::PositiveNumber);
  app.add_option("--out", cfg.out, "output file (default stdout)");
  app.add_option("--n", cfg.n, "samples for verify")->check(CLI::PositiveNumber)->capture_default_str();
  app.add_option("--p", cfg.p, "mixing parameter for figure gvp")->capture_default_str();
  app.add_option("--threads", cfg.threads, "worker threads for verify (0: all cores)")->capture_default_str();

  std::string state_path, figure_name, suite_name;
  auto* measure = app.add_subcommand("measure", "report every measure of a state")->fallthrough();
  measure->add_option("state", state_path, "state file")->required();
  auto* roof = app.add_subcommand("roof", "optimal decomposition and closest separable state")->fallthrough();
  roof->add_option("state", state_path, "state file")->required();
  auto* figure = app.add_subcommand("figure", "CSV data for a figure")->fallthrough();
  figure->add_option("name", figure_name, "bures-curve | gvp")
      ->required()
      ->check(CLI::IsMember({"bures-curve", "gvp"}));
  auto* verify = app.add_subcommand("verify", "verification campaign")->fallthrough();
  std::vector<std::string> suites;
  for (const auto& entry : verify_suite_names()) suites.push_back(entry.first);
  verify->add_option("suite", suite_name, "two-qubit-roof | inequalities | stationarity | appendix-a")
      ->required()
      ->check(CLI::IsMember(suites));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? exit_ok : exit_usage;
  }

  try {
    if (*measure) return cmd_measure(state_path, cfg);
    if (*roof) return cmd_roof(state_path, cfg);
    if (*figure) return cmd_figure(figure_name, cfg);
    return cmd_verify(suite_name, cfg);
  } catch (const ValidationError& e) {
    std::cerr << "entroof: invalid state: " << e.what() << '\n';
  } catch (const std::exception& e) {
    std::cerr << "entroof: " << e.what() << '\n';
  }
  return exit_usage;
}
