#include "fluorep/config.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <numbers>
#include <sstream>

namespace fluorep {

namespace {

struct Entry {
  std::string value;
  int line = 0;
  bool used = false;
};

std::string trim(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  std::size_t e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

[[noreturn]] void fail(int line, const std::string& message) {
  throw ConfigError("line " + std::to_string(line) + ": " + message);
}

double parse_double(const std::string& key, const Entry& e) {
  const char* begin = e.value.c_str();
  char* end = nullptr;
  double v = std::strtod(begin, &end);
  if (end == begin || *end != '\0')
    fail(e.line, "key '" + key + "': invalid number '" + e.value + "'");
  if (!std::isfinite(v)) fail(e.line, "key '" + key + "': value must be finite");
  return v;
}

long long parse_integer(const std::string& key, const Entry& e) {
  // Accept scientific notation for counts ("2e3"), but require integrality.
  double v = parse_double(key, e);
  if (std::floor(v) != v || std::abs(v) > 9.0e18)
    fail(e.line, "key '" + key + "': expected an integer, got '" + e.value + "'");
  return static_cast<long long>(v);
}

unsigned long long parse_seed(const std::string& key, const Entry& e) {
  const char* begin = e.value.c_str();
  char* end = nullptr;
  unsigned long long v = std::strtoull(begin, &end, 10);
  if (end != begin && *end == '\0' && e.value.find('-') == std::string::npos) return v;
  long long i = parse_integer(key, e);
  if (i < 0) fail(e.line, "key '" + key + "': seed must be non-negative");
  return static_cast<unsigned long long>(i);
}

bool parse_bool(const std::string& key, const Entry& e) {
  if (e.value == "true" || e.value == "1") return true;
  if (e.value == "false" || e.value == "0") return false;
  fail(e.line, "key '" + key + "': expected true or false, got '" + e.value + "'");
}

class Document {
 public:
  explicit Document(const std::string& text) {
    std::istringstream in(text);
    std::string raw;
    int line_no = 0;
    while (std::getline(in, raw)) {
      ++line_no;
      std::size_t hash = raw.find('#');
      if (hash != std::string::npos) raw.erase(hash);
      std::string line = trim(raw);
      if (line.empty()) continue;
      std::size_t eq = line.find('=');
      if (eq == std::string::npos) fail(line_no, "expected 'key = value', got '" + line + "'");
      std::string key = trim(line.substr(0, eq));
      std::string value = trim(line.substr(eq + 1));
      if (key.empty()) fail(line_no, "empty key");
      if (value.empty()) fail(line_no, "key '" + key + "': empty value");
      auto it = entries_.find(key);
      if (it != entries_.end())
        fail(line_no, "duplicate key '" + key + "' (first set on line " +
                          std::to_string(it->second.line) + ")");
      entries_[key] = Entry{value, line_no, false};
    }
  }

  const Entry* find(const std::string& key) {
    auto it = entries_.find(key);
    if (it == entries_.end()) return nullptr;
    it->second.used = true;
    return &it->second;
  }

  const Entry& require(const std::string& key) {
    const Entry* e = find(key);
    if (!e) throw ConfigError("missing required key '" + key + "'");
    return *e;
  }

  void reject_unknown() const {
    for (const auto& [key, e] : entries_) {
      if (!e.used) fail(e.line, "unknown key '" + key + "'");
    }
  }

 private:
  std::map<std::string, Entry> entries_;
};

std::string g17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

Config load_config(const std::string& text) {
  Document doc(text);
  Config cfg;

  {
    const Entry& e = doc.require("units.frequencies");
    if (!frequency_units_from_name(e.value, &cfg.units))
      fail(e.line, "units.frequencies: expected hz_over_2pi or rad_per_s, got '" + e.value + "'");
  }

  cfg.physical.gamma = parse_double("physical.gamma", doc.require("physical.gamma"));
  cfg.physical.delta = parse_double("physical.delta", doc.require("physical.delta"));
  cfg.physical.beta = parse_double("physical.beta", doc.require("physical.beta"));
  cfg.physical.omega_p = parse_double("physical.omega_p", doc.require("physical.omega_p"));
  cfg.physical.omega_c = parse_double("physical.omega_c", doc.require("physical.omega_c"));
  cfg.physical.length_l = parse_double("physical.length_l", doc.require("physical.length_l"));
  cfg.physical.depth_d = parse_double("physical.depth_d", doc.require("physical.depth_d"));
  cfg.physical.eta = parse_double("physical.eta", doc.require("physical.eta"));
  cfg.physical.n_atoms = parse_integer("physical.n_atoms", doc.require("physical.n_atoms"));

  cfg.link.latt_km = parse_double("link.latt_km", doc.require("link.latt_km"));
  cfg.link.q = parse_double("link.q", doc.require("link.q"));
  cfg.link.eta_d = parse_double("link.eta_d", doc.require("link.eta_d"));
  cfg.link.eta_f = parse_double("link.eta_f", doc.require("link.eta_f"));
  cfg.link.n_photons = parse_integer("link.n_photons", doc.require("link.n_photons"));

  cfg.chain.total_km = parse_double("chain.total_km", doc.require("chain.total_km"));
  cfg.chain.nesting_s =
      static_cast<int>(parse_integer("chain.nesting_s", doc.require("chain.nesting_s")));
  {
    const Entry& e = doc.require("chain.scheme");
    if (!scheme_from_name(e.value, &cfg.chain.scheme))
      fail(e.line, "chain.scheme: expected NewSingleRail, NewDualRail, RefDlcz or "
                   "RefDualRail, got '" + e.value + "'");
  }
  cfg.chain.target_fidelity =
      parse_double("chain.target_fidelity", doc.require("chain.target_fidelity"));
  cfg.chain.pir_enabled = parse_bool("chain.pir_enabled", doc.require("chain.pir_enabled"));
  if (const Entry* e = doc.find("chain.fiber_light_speed"))
    cfg.chain.fiber_light_speed = parse_double("chain.fiber_light_speed", *e);

  // The elementary segment defaults to the chain topology's segment length.
  if (const Entry* e = doc.find("link.l0_km")) {
    cfg.link.l0_km = parse_double("link.l0_km", *e);
  } else if (cfg.chain.nesting_s >= 0 && cfg.chain.nesting_s <= 30) {
    cfg.link.l0_km = cfg.chain.total_km / static_cast<double>(1LL << cfg.chain.nesting_s);
  }

  if (const Entry* e = doc.find("rates.kappa_m"))
    cfg.rates.kappa_m = parse_double("rates.kappa_m", *e);
  if (const Entry* e = doc.find("rates.ref_c_r"))
    cfg.rates.ref_c_r = parse_double("rates.ref_c_r", *e);
  if (const Entry* e = doc.find("rates.ref_eta_d"))
    cfg.rates.ref_eta_d = parse_double("rates.ref_eta_d", *e);

  if (const Entry* e = doc.find("optimizer.s_max"))
    cfg.optimizer.s_max = static_cast<int>(parse_integer("optimizer.s_max", *e));
  if (const Entry* e = doc.find("optimizer.co_optimize_pir"))
    cfg.optimizer.co_optimize_pir = parse_bool("optimizer.co_optimize_pir", *e);

  if (const Entry* e = doc.find("sim.trials")) cfg.sim.trials = parse_integer("sim.trials", *e);
  if (const Entry* e = doc.find("sim.seed")) cfg.sim.seed = parse_seed("sim.seed", *e);
  if (const Entry* e = doc.find("sim.max_attempt_cap"))
    cfg.sim.max_attempt_cap = parse_integer("sim.max_attempt_cap", *e);
  if (const Entry* e = doc.find("sim.max_threads"))
    cfg.sim.max_threads = static_cast<int>(parse_integer("sim.max_threads", *e));

  doc.reject_unknown();

  if (cfg.units == FrequencyUnits::HzOver2Pi) {
    const double two_pi = 2.0 * std::numbers::pi_v<double>;
    cfg.physical.gamma *= two_pi;
    cfg.physical.delta *= two_pi;
    cfg.physical.omega_p *= two_pi;
    cfg.physical.omega_c *= two_pi;
    cfg.units = FrequencyUnits::RadPerS; // stored values are angular from here on
  }

  if (cfg.optimizer.s_max < 0 || cfg.optimizer.s_max > 30)
    throw ConfigError("optimizer.s_max must be in [0, 30]");
  if (cfg.sim.trials < 1) throw ConfigError("sim.trials must be at least 1");
  if (cfg.sim.max_attempt_cap < 1) throw ConfigError("sim.max_attempt_cap must be at least 1");
  if (cfg.sim.max_threads < 0) throw ConfigError("sim.max_threads must be non-negative");

  ValidationReport report = validate(cfg.physical, cfg.link, cfg.chain);
  if (!report.ok()) {
    std::string message = "config validation failed:";
    for (const std::string& e : report.errors) message += "\n  " + e;
    throw ConfigError(message);
  }
  cfg.load_warnings = report.warnings;
  return cfg;
}

Config load_config_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open config file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return load_config(buf.str());
}

std::string serialize_config(const Config& cfg) {
  std::ostringstream out;
  out << "units.frequencies = rad_per_s\n";
  out << "physical.gamma = " << g17(cfg.physical.gamma) << "\n";
  out << "physical.delta = " << g17(cfg.physical.delta) << "\n";
  out << "physical.beta = " << g17(cfg.physical.beta) << "\n";
  out << "physical.omega_p = " << g17(cfg.physical.omega_p) << "\n";
  out << "physical.omega_c = " << g17(cfg.physical.omega_c) << "\n";
  out << "physical.length_l = " << g17(cfg.physical.length_l) << "\n";
  out << "physical.depth_d = " << g17(cfg.physical.depth_d) << "\n";
  out << "physical.eta = " << g17(cfg.physical.eta) << "\n";
  out << "physical.n_atoms = " << cfg.physical.n_atoms << "\n";
  out << "link.l0_km = " << g17(cfg.link.l0_km) << "\n";
  out << "link.latt_km = " << g17(cfg.link.latt_km) << "\n";
  out << "link.q = " << g17(cfg.link.q) << "\n";
  out << "link.eta_d = " << g17(cfg.link.eta_d) << "\n";
  out << "link.eta_f = " << g17(cfg.link.eta_f) << "\n";
  out << "link.n_photons = " << cfg.link.n_photons << "\n";
  out << "chain.total_km = " << g17(cfg.chain.total_km) << "\n";
  out << "chain.nesting_s = " << cfg.chain.nesting_s << "\n";
  out << "chain.scheme = " << scheme_name(cfg.chain.scheme) << "\n";
  out << "chain.target_fidelity = " << g17(cfg.chain.target_fidelity) << "\n";
  out << "chain.pir_enabled = " << (cfg.chain.pir_enabled ? "true" : "false") << "\n";
  out << "chain.fiber_light_speed = " << g17(cfg.chain.fiber_light_speed) << "\n";
  out << "rates.kappa_m = " << g17(cfg.rates.kappa_m) << "\n";
  out << "rates.ref_c_r = " << g17(cfg.rates.ref_c_r) << "\n";
  out << "rates.ref_eta_d = " << g17(cfg.rates.ref_eta_d) << "\n";
  out << "optimizer.s_max = " << cfg.optimizer.s_max << "\n";
  out << "optimizer.co_optimize_pir = " << (cfg.optimizer.co_optimize_pir ? "true" : "false")
      << "\n";
  out << "sim.trials = " << cfg.sim.trials << "\n";
  out << "sim.seed = " << cfg.sim.seed << "\n";
  out << "sim.max_attempt_cap = " << cfg.sim.max_attempt_cap << "\n";
  out << "sim.max_threads = " << cfg.sim.max_threads << "\n";
  return out.str();
}

}  // namespace fluorep
