#include "qzs/config.hpp"

#include <charconv>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "qzs/errors.hpp"

namespace qzs {

namespace {

struct Entry {
  std::string value;
  int line = 0;
};

const std::set<std::string>& known_keys() {
  static const std::set<std::string> keys = {
      "scheme",      "scenario",      "tau",          "T",           "epsilon",     "x_min",
      "x_max",       "nx",            "y_min",        "y_max",       "ny",          "diag_stride",
      "snapshot_stride", "fp_tol",    "fp_max_iters", "fp_policy",   "track_q",     "output_dir",
      "threads",     "levels",        "h0",           "eps_list",    "reference_stages", "reference_tau",
      "soliton_B",   "soliton_V",     "soliton_x0",   "case",        "x1",          "x2",
      "V1",          "V2",            "pump_k",       "pump_beta"};
  return keys;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

[[noreturn]] void fail(int line, const std::string& what) {
  throw ConfigError("line " + std::to_string(line) + ": " + what);
}

class Reader {
 public:
  explicit Reader(std::map<std::string, Entry> entries) : entries_(std::move(entries)) {}

  bool has(const std::string& key) const { return entries_.count(key) != 0; }

  double real(const std::string& key) const {
    const Entry& e = entries_.at(key);
    double out = 0.0;
    const char* first = e.value.data();
    const char* last = first + e.value.size();
    auto [ptr, ec] = std::from_chars(first, last, out);
    if (ec != std::errc{} || ptr != last) fail(e.line, key + " expects a number, got '" + e.value + "'");
    return out;
  }

  long long integer(const std::string& key) const {
    const Entry& e = entries_.at(key);
    long long out = 0;
    const char* first = e.value.data();
    const char* last = first + e.value.size();
    auto [ptr, ec] = std::from_chars(first, last, out);
    if (ec != std::errc{} || ptr != last) fail(e.line, key + " expects an integer, got '" + e.value + "'");
    return out;
  }

  bool boolean(const std::string& key) const {
    const Entry& e = entries_.at(key);
    if (e.value == "true" || e.value == "1" || e.value == "yes") return true;
    if (e.value == "false" || e.value == "0" || e.value == "no") return false;
    fail(e.line, key + " expects true or false, got '" + e.value + "'");
  }

  const std::string& text(const std::string& key) const { return entries_.at(key).value; }
  int line(const std::string& key) const { return entries_.at(key).line; }

  std::vector<double> reals(const std::string& key) const {
    const Entry& e = entries_.at(key);
    std::vector<double> out;
    std::stringstream ss(e.value);
    std::string item;
    while (std::getline(ss, item, ',')) {
      item = trim(item);
      double x = 0.0;
      auto [ptr, ec] = std::from_chars(item.data(), item.data() + item.size(), x);
      if (item.empty() || ec != std::errc{} || ptr != item.data() + item.size()) {
        fail(e.line, key + " expects a comma-separated list of numbers, got '" + e.value + "'");
      }
      out.push_back(x);
    }
    return out;
  }

  template <typename Fn>
  void check(const std::string& key, bool ok, Fn message) const {
    if (!ok) fail(line(key), message());
  }

 private:
  std::map<std::string, Entry> entries_;
};

}  // namespace

RunOptions RunConfig::run_options() const {
  RunOptions o;
  o.fp_tol = fp_tol;
  o.fp_max_iters = fp_max_iters;
  o.policy = policy;
  o.track_q = track_q;
  o.threads = effective_threads(*this);
  o.reference_stages = reference_stages;
  o.reference_tau = reference_tau;
  return o;
}

SimulationOptions RunConfig::simulation_options() const {
  SimulationOptions o;
  o.stages = stages;
  o.tau = tau;
  o.diagnostics_stride = diagnostics_stride;
  o.snapshot_stride = snapshot_stride;
  o.run = run_options();
  return o;
}

RunConfig parse_config(const std::string& text) {
  std::map<std::string, Entry> entries;
  std::istringstream in(text);
  std::string raw;
  int lineno = 0;
  while (std::getline(in, raw)) {
    ++lineno;
    const auto hash = raw.find('#');
    const std::string line = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) fail(lineno, "expected 'key = value', got '" + line + "'");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty()) fail(lineno, "missing key before '='");
    if (!known_keys().count(key)) fail(lineno, "unknown key '" + key + "'");
    if (value.empty()) fail(lineno, "missing value for '" + key + "'");
    auto [it, inserted] = entries.emplace(key, Entry{value, lineno});
    if (!inserted) {
      fail(lineno, "duplicate key '" + key + "' (first set on line " + std::to_string(it->second.line) + ")");
    }
  }

  for (const char* key : {"scheme", "scenario", "tau", "T"}) {
    if (!entries.count(key)) throw ConfigError(std::string("missing mandatory key '") + key + "'");
  }

  const Reader r(std::move(entries));
  RunConfig cfg;

  const long long scheme = r.integer("scheme");
  r.check("scheme", scheme >= 1 && scheme <= 3, [] { return "scheme must be 1, 2 or 3"; });
  cfg.stages = static_cast<int>(scheme);

  try {
    cfg.scenario = default_scenario(parse_scenario_kind(r.text("scenario")));
  } catch (const InvalidArgumentError& e) {
    fail(r.line("scenario"), e.what());
  }
  ScenarioSpec& sc = cfg.scenario;

  cfg.tau = r.real("tau");
  r.check("tau", cfg.tau > 0.0 && std::isfinite(cfg.tau), [] { return "tau must be positive"; });
  sc.T = r.real("T");
  r.check("T", sc.T > 0.0 && std::isfinite(sc.T), [] { return "T must be positive"; });

  if (r.has("epsilon")) {
    sc.epsilon = r.real("epsilon");
    r.check("epsilon", sc.epsilon >= 0.0, [] { return "epsilon must be >= 0"; });
  }
  if (r.has("x_min")) sc.grid.x.lo = r.real("x_min");
  if (r.has("x_max")) sc.grid.x.hi = r.real("x_max");
  if (r.has("nx")) sc.grid.nx = static_cast<int>(r.integer("nx"));
  const bool touches_y = r.has("y_min") || r.has("y_max") || r.has("ny");
  if (touches_y && sc.grid.dims != 2) {
    const char* key = r.has("y_min") ? "y_min" : r.has("y_max") ? "y_max" : "ny";
    fail(r.line(key), std::string(key) + " is only valid for 2D scenarios");
  }
  if (r.has("y_min")) sc.grid.y.lo = r.real("y_min");
  if (r.has("y_max")) sc.grid.y.hi = r.real("y_max");
  if (r.has("ny")) sc.grid.ny = static_cast<int>(r.integer("ny"));

  if (r.has("diag_stride")) {
    const long long d = r.integer("diag_stride");
    r.check("diag_stride", d >= 1, [] { return "diag_stride must be >= 1"; });
    cfg.diagnostics_stride = static_cast<std::size_t>(d);
  }
  if (r.has("snapshot_stride")) {
    const long long m = r.integer("snapshot_stride");
    r.check("snapshot_stride", m >= 1, [] { return "snapshot_stride must be >= 1"; });
    cfg.snapshot_stride = static_cast<std::size_t>(m);
  }
  if (r.has("fp_tol")) {
    cfg.fp_tol = r.real("fp_tol");
    r.check("fp_tol", cfg.fp_tol > 0.0, [] { return "fp_tol must be positive"; });
  }
  if (r.has("fp_max_iters")) {
    const long long m = r.integer("fp_max_iters");
    r.check("fp_max_iters", m >= 1, [] { return "fp_max_iters must be >= 1"; });
    cfg.fp_max_iters = static_cast<int>(m);
  }
  if (r.has("fp_policy")) {
    const std::string& p = r.text("fp_policy");
    if (p == "abort") {
      cfg.policy = NonconvergencePolicy::abort;
    } else if (p == "warn") {
      cfg.policy = NonconvergencePolicy::warn_and_continue;
    } else {
      fail(r.line("fp_policy"), "fp_policy must be 'abort' or 'warn', got '" + p + "'");
    }
  }
  if (r.has("track_q")) cfg.track_q = r.boolean("track_q");
  if (r.has("output_dir")) cfg.output_dir = r.text("output_dir");
  if (r.has("threads")) {
    const long long t = r.integer("threads");
    r.check("threads", t >= 0, [] { return "threads must be >= 0"; });
    cfg.threads = static_cast<unsigned>(t);
  }

  if (r.has("levels")) {
    const long long l = r.integer("levels");
    r.check("levels", l >= 1, [] { return "levels must be >= 1"; });
    cfg.levels = static_cast<int>(l);
  }
  if (r.has("h0")) {
    cfg.h0 = r.real("h0");
    r.check("h0", cfg.h0 > 0.0, [] { return "h0 must be positive"; });
  }
  if (r.has("eps_list")) {
    cfg.eps_list = r.reals("eps_list");
    for (double e : cfg.eps_list) r.check("eps_list", e >= 0.0, [] { return "eps_list entries must be >= 0"; });
  }
  if (r.has("reference_stages")) {
    const long long s = r.integer("reference_stages");
    r.check("reference_stages", s >= 1 && s <= 3, [] { return "reference_stages must be 1, 2 or 3"; });
    cfg.reference_stages = static_cast<int>(s);
  }
  if (r.has("reference_tau")) {
    cfg.reference_tau = r.real("reference_tau");
    r.check("reference_tau", cfg.reference_tau > 0.0, [] { return "reference_tau must be positive"; });
  }

  if (r.has("soliton_B")) sc.soliton.B = r.real("soliton_B");
  if (r.has("soliton_V")) sc.soliton.V = r.real("soliton_V");
  if (r.has("soliton_x0")) sc.soliton.x0 = r.real("soliton_x0");
  if (r.has("case")) {
    try {
      sc.two = collision_preset(parse_collision_case(r.text("case")));
    } catch (const InvalidArgumentError& e) {
      fail(r.line("case"), e.what());
    }
  }
  if (r.has("x1")) sc.two.x1 = r.real("x1");
  if (r.has("x2")) sc.two.x2 = r.real("x2");
  if (r.has("V1")) sc.two.V1 = r.real("V1");
  if (r.has("V2")) sc.two.V2 = r.real("V2");
  if (r.has("pump_k")) sc.pump.k = r.real("pump_k");
  if (r.has("pump_beta")) sc.pump.beta = r.real("pump_beta");

  const GridSpec& g = sc.grid;
  if (!(g.x.hi > g.x.lo)) fail(r.has("x_max") ? r.line("x_max") : r.line("scenario"), "x_max must exceed x_min");
  if (g.nx < 4 || g.nx % 2 != 0) fail(r.has("nx") ? r.line("nx") : r.line("scenario"), "nx must be even and >= 4");
  if (g.dims == 2) {
    if (!(g.y.hi > g.y.lo)) fail(r.has("y_max") ? r.line("y_max") : r.line("scenario"), "y_max must exceed y_min");
    if (g.ny < 4 || g.ny % 2 != 0) fail(r.has("ny") ? r.line("ny") : r.line("scenario"), "ny must be even and >= 4");
  }
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  try {
    return parse_config(ss.str());
  } catch (const ConfigError& e) {
    throw ConfigError(path + ": " + e.what());
  }
}

unsigned effective_threads(const RunConfig& cfg) {
  if (cfg.threads) return *cfg.threads;
  if (const char* env = std::getenv("QZS_THREADS")) {
    unsigned v = 0;
    const std::string s(env);
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec == std::errc{} && ptr == s.data() + s.size()) return v;
  }
  return 1;
}

}  // namespace qzs
