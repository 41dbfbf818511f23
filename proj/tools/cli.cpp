#include "cli.hpp"

#include <CLI11.hpp>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>

#include "qzs/config.hpp"
#include "qzs/csv.hpp"
#include "qzs/errors.hpp"
#include "qzs/experiments.hpp"
#include "qzs/snapshot.hpp"

namespace qzs::cli {

namespace {

namespace fs = std::filesystem;

constexpr double kMaxRm = 1e-10;
constexpr double kMaxRh = 1e-9;
constexpr double kMaxQDefect = 1e-10;

class Stopwatch {
 public:
  double seconds() const { return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count(); }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

std::string sci(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3e", x);
  return buf;
}

fs::path prepare_output(const RunConfig& cfg) {
  const fs::path dir(cfg.output_dir);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create output directory '" + dir.string() + "': " + ec.message());
  return dir;
}

std::string numbered(const std::string& stem, std::size_t index, const char* ext) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "_%06zu", index);
  return stem + buf + ext;
}

void print_summary(std::ostream& out, const SimulationResult& r, double wall) {
  out << "t=" << format_real(r.final_state.t) << " max_rm=" << sci(r.max_rm) << " max_rh=" << sci(r.max_rh);
  if (r.max_q_defect) out << " max_q_defect=" << sci(*r.max_q_defect);
  out << " wall=" << wall << "s\n";
}

void print_report(std::ostream& out, const ConvergenceReport& r, double wall) {
  for (std::size_t k = 0; k < r.params.size(); ++k) {
    out << "  " << to_string(r.axis) << '=' << format_real(r.params[k]) << " e=" << sci(r.errors[k].e)
        << " n=" << sci(r.errors[k].n);
    if (k > 0) out << " rate_e=" << r.rates_e[k - 1] << " rate_n=" << r.rates_n[k - 1];
    out << '\n';
  }
  out << to_string(r.axis) << " convergence s=" << r.stages << " reference=" << r.reference;
  if (!r.rates_e.empty()) out << " final_rate_e=" << r.rates_e.back() << " final_rate_n=" << r.rates_n.back();
  if (r.slope_e) out << " slope_e=" << *r.slope_e << " slope_n=" << *r.slope_n;
  out << " wall=" << wall << "s\n";
}

SimulationResult run_with_output(const Scenario& sc, const RunConfig& cfg, const fs::path& dir,
                                 const std::string& stem, bool force_track_q,
                                 const std::function<void(const FieldState&, std::size_t)>& extra_snapshot) {
  SimulationOptions opts = cfg.simulation_options();
  if (force_track_q) opts.run.track_q = true;
  std::size_t index = 0;
  const double eps = sc.spec.epsilon;
  if (opts.snapshot_stride > 0) {
    opts.on_snapshot = [&](const FieldState& s) {
      write_snapshot(s, eps, (dir / numbered(stem, index, ".qzs")).string());
      if (extra_snapshot) extra_snapshot(s, index);
      ++index;
    };
  }
  for (const auto& w : sc.data.warnings) std::clog << "warning: " << w << '\n';
  SimulationResult r = simulate(sc, opts);
  write_diagnostics_csv(r.records, (dir / (stem + "_diagnostics.csv")).string());
  write_snapshot(r.final_state, eps, (dir / (stem + "_final.qzs")).string());
  return r;
}

int cmd_run(const std::string& path, std::ostream& out) {
  const RunConfig cfg = load_config(path);
  const fs::path dir = prepare_output(cfg);
  Stopwatch sw;
  const SimulationResult r = run_with_output(build_scenario(cfg.scenario), cfg, dir, "run", false, {});
  print_summary(out, r, sw.seconds());
  return ok;
}

int cmd_check_invariants(const std::string& path, std::ostream& out, std::ostream& err) {
  const RunConfig cfg = load_config(path);
  const fs::path dir = prepare_output(cfg);
  Stopwatch sw;
  const SimulationResult r = run_with_output(build_scenario(cfg.scenario), cfg, dir, "invariants", true, {});
  print_summary(out, r, sw.seconds());
  const bool pass = r.max_rm < kMaxRm && r.max_rh < kMaxRh && r.max_q_defect.value_or(0.0) < kMaxQDefect;
  if (!pass) {
    err << "invariant check failed: bounds are rm < " << kMaxRm << ", rh < " << kMaxRh << ", q defect < "
        << kMaxQDefect << '\n';
    return numerical_failure;
  }
  return ok;
}

int cmd_converge_time(const std::string& path, std::ostream& out) {
  const RunConfig cfg = load_config(path);
  const fs::path dir = prepare_output(cfg);
  Stopwatch sw;
  const ConvergenceReport r = temporal_convergence(cfg.stages, cfg.tau, cfg.levels, cfg.scenario, cfg.run_options());
  write_report_csv(r, (dir / "converge_time.csv").string());
  print_report(out, r, sw.seconds());
  return ok;
}

int cmd_converge_space(const std::string& path, std::ostream& out) {
  const RunConfig cfg = load_config(path);
  const fs::path dir = prepare_output(cfg);
  Stopwatch sw;
  const ConvergenceReport r =
      spatial_convergence(cfg.stages, cfg.h0, cfg.levels, cfg.tau, cfg.scenario, cfg.run_options());
  write_report_csv(r, (dir / "converge_space.csv").string());
  print_report(out, r, sw.seconds());
  return ok;
}

int cmd_limit_eps(const std::string& path, std::ostream& out) {
  const RunConfig cfg = load_config(path);
  const fs::path dir = prepare_output(cfg);
  std::vector<double> eps = cfg.eps_list;
  if (eps.empty()) {
    for (int j = 2; j <= 7; ++j) eps.push_back(std::ldexp(1.0, -(2 * j + 1)));
  }
  Stopwatch sw;
  const ConvergenceReport r = semiclassical_limit(cfg.stages, eps, cfg.tau, cfg.scenario, cfg.run_options());
  write_report_csv(r, (dir / "limit_eps.csv").string());
  print_report(out, r, sw.seconds());
  return ok;
}

int cmd_collide(const std::string& which, const std::string& path, std::ostream& out) {
  const CollisionCase c = parse_collision_case(which);
  RunConfig cfg = load_config(path);
  if (cfg.scenario.kind != ScenarioKind::two_solitons) {
    throw ConfigError(path + ": collide requires scenario = two_solitons");
  }
  cfg.scenario.two = collision_preset(c);
  const fs::path dir = prepare_output(cfg);
  const std::string stem = std::string("collide_") + to_string(c);
  const Scenario sc = build_scenario(cfg.scenario);
  Stopwatch sw;
  const SimulationResult r = run_with_output(sc, cfg, dir, stem, false, [&](const FieldState& s, std::size_t i) {
    RealField absE(s.E.size());
    for (std::size_t j = 0; j < s.E.size(); ++j) absE[j] = std::abs(s.E[j]);
    write_table_csv("x,abs_E,N", {s.grid->x_nodes(), absE, s.N}, (dir / numbered(stem, i, ".csv")).string());
  });
  print_summary(out, r, sw.seconds());
  return ok;
}

int cmd_pattern(const std::string& path, std::ostream& out) {
  const RunConfig cfg = load_config(path);
  if (cfg.scenario.kind != ScenarioKind::pump_wave) {
    throw ConfigError(path + ": pattern requires scenario = pump_wave");
  }
  const fs::path dir = prepare_output(cfg);
  const Scenario sc = build_scenario(cfg.scenario);
  Stopwatch sw;
  const SimulationResult r = run_with_output(sc, cfg, dir, "pattern", false, [&](const FieldState& s, std::size_t i) {
    write_table_csv("x,sqrt_abs_E", {s.grid->x_nodes(), sqrt_modulus(s.E)},
                    (dir / numbered("pattern", i, ".csv")).string());
  });
  print_summary(out, r, sw.seconds());
  return ok;
}

int cmd_info(std::ostream& out) {
  out << "qzs " << "0.1.0\n"
      << "schemes: 1 2 3 (Gauss-Legendre stages; temporal order 2, 4, 6)\n"
      << "scenarios: zs_soliton cosine_2d two_solitons pump_wave\n"
      << "snapshot format: QZS" << kSnapshotVersion << " (little-endian)\n"
      << "diagnostics csv: " << kDiagnosticsHeader << '\n'
      << "report csv: " << kReportHeader << '\n';
  return ok;
}

}  // namespace

int cli_main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Structure-preserving quantum Zakharov solver", "qzs"};
  app.require_subcommand(1);

  std::string config;
  std::string which;
  auto* run = app.add_subcommand("run", "integrate a scenario and write diagnostics and snapshots");
  run->add_option("config", config, "config file")->required();
  auto* ct = app.add_subcommand("converge-time", "temporal convergence study");
  ct->add_option("config", config, "config file")->required();
  auto* cs = app.add_subcommand("converge-space", "spatial convergence study");
  cs->add_option("config", config, "config file")->required();
  auto* le = app.add_subcommand("limit-eps", "distance to the classical limit as epsilon -> 0");
  le->add_option("config", config, "config file")->required();
  auto* co = app.add_subcommand("collide", "two-soliton collision (case I, II or III)");
  co->add_option("case", which, "collision case")->required();
  co->add_option("config", config, "config file")->required();
  auto* pa = app.add_subcommand("pattern", "modulated pump-wave pattern dynamics");
  pa->add_option("config", config, "config file")->required();
  auto* ci = app.add_subcommand("check-invariants", "run with q tracked and check conservation bounds");
  ci->add_option("config", config, "config file")->required();
  auto* info = app.add_subcommand("info", "print supported schemes and format versions");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return ok;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n' << app.help();
    return usage_error;
  }

  try {
    if (*run) return cmd_run(config, out);
    if (*ct) return cmd_converge_time(config, out);
    if (*cs) return cmd_converge_space(config, out);
    if (*le) return cmd_limit_eps(config, out);
    if (*co) return cmd_collide(which, config, out);
    if (*pa) return cmd_pattern(config, out);
    if (*ci) return cmd_check_invariants(config, out, err);
    if (*info) return cmd_info(out);
  } catch (const NonconvergenceError& e) {
    err << "numerical failure: " << e.what() << '\n';
    return numerical_failure;
  } catch (const SingularBlockError& e) {
    err << "numerical failure: " << e.what() << '\n';
    return numerical_failure;
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return usage_error;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return usage_error;
  }
  return usage_error;
}

int cli_main(int argc, char** argv) {
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  return cli_main(args, std::cout, std::cerr);
}

}  // namespace qzs::cli
