#include "scq/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <spdlog/spdlog.h>

#include "scq/errors.hpp"

namespace scq {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(sep, start);
    parts.push_back(trim(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return parts;
}

double parse_number(std::string_view text, std::string_view what, int line = 0) {
  text = trim(text);
  if (!text.empty() && text.front() == '+') text.remove_prefix(1);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size() || !std::isfinite(v))
    throw ConfigError("invalid number '" + std::string(text) + "' for " + std::string(what), line);
  return v;
}

int parse_int(std::string_view text, std::string_view what, int line = 0) {
  text = trim(text);
  int v = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size())
    throw ConfigError("invalid integer '" + std::string(text) + "' for " + std::string(what), line);
  return v;
}

double positive(double v, std::string_view what, int line) {
  if (!(v > 0.0)) throw ConfigError(std::string(what) + " must be positive", line);
  return v;
}

std::optional<Command> parse_command(std::string_view name) {
  if (name == "simulate") return Command::simulate;
  if (name == "design") return Command::design;
  if (name == "drive-run") return Command::drive_run;
  if (name == "lyapunov") return Command::lyapunov;
  return std::nullopt;
}

const std::set<std::string>& allowed_keys(Command c) {
  static const std::set<std::string> simulate = {"qubit", "model", "params", "psi0",  "r0",     "t_final",
                                                 "dt",    "steps", "substeps", "method", "out", "format"};
  static const std::set<std::string> design = {"qubit", "params", "psi0", "r0", "psif", "rf", "tf", "out", "format"};
  static const std::set<std::string> drive_run = {"qubit", "params", "psi0",     "r0",    "psif", "rf",
                                                  "tf",    "steps",  "substeps", "model", "out",  "format"};
  static const std::set<std::string> lyapunov = {"params", "r0",       "rf",         "alpha", "beta",  "dt",
                                                 "steps",  "substeps", "integrator", "out",   "format"};
  switch (c) {
    case Command::simulate: return simulate;
    case Command::design: return design;
    case Command::drive_run: return drive_run;
    case Command::lyapunov: return lyapunov;
  }
  return simulate;
}

std::optional<StateSpec> read_state(const ConfigSection& s, const char* psi_key, const char* bloch_key) {
  const auto psi = s.find(psi_key);
  const auto bloch = s.find(bloch_key);
  if (psi != s.end() && bloch != s.end())
    throw ConfigError(std::string("give either ") + psi_key + " or " + bloch_key + ", not both", bloch->second.line);
  try {
    if (psi != s.end()) return StateSpec{parse_state(psi->second.value), std::nullopt};
    if (bloch != s.end()) {
      BlochVector r = parse_bloch(bloch->second.value);
      const double n = r.norm();
      if (!(n > 0.0)) throw ConfigError("zero Bloch vector", bloch->second.line);
      if (std::abs(n - 1.0) > 1e-6) {
        spdlog::warn("{} has norm {:.8g}; normalizing", bloch_key, n);
      }
      r = BlochVector(r.vec() / n);
      return StateSpec{std::nullopt, r};
    }
  } catch (const ConfigError&) {
    throw;
  } catch (const Error& e) {
    const int line = psi != s.end() ? psi->second.line : bloch->second.line;
    throw ConfigError(e.what(), line);
  }
  return std::nullopt;
}

const ConfigValue& require(const ConfigSection& s, const std::string& key, Command c) {
  const auto it = s.find(key);
  if (it == s.end()) throw ConfigError("missing required key '" + key + "' for " + std::string(to_string(c)));
  return it->second;
}

}  // namespace

std::string_view to_string(Command c) {
  switch (c) {
    case Command::simulate: return "simulate";
    case Command::design: return "design";
    case Command::drive_run: return "drive-run";
    case Command::lyapunov: return "lyapunov";
  }
  return "unknown";
}

ModelSpec parse_model(std::string_view text) {
  text = trim(text);
  if (text == "approx") return {ModelKind::approximate, 2};
  if (text == "exact2") return {ModelKind::exact_two_level, 2};
  if (text.starts_with("fock:")) {
    const int n = parse_int(text.substr(5), "fock levels");
    if (n < 4) throw ConfigError("fock model needs at least 4 levels");
    return {ModelKind::fock, n};
  }
  throw ConfigError("unknown model '" + std::string(text) + "' (expected approx, exact2 or fock:N)");
}

StateVector parse_state(std::string_view text) {
  const auto amps = split(trim(text), ';');
  if (amps.size() < 2) throw ConfigError("state needs at least two 're,im' amplitudes");
  CVector v(static_cast<Eigen::Index>(amps.size()));
  for (std::size_t i = 0; i < amps.size(); ++i) {
    const auto parts = split(amps[i], ',');
    if (parts.size() != 2) throw ConfigError("amplitude '" + std::string(amps[i]) + "' is not 're,im'");
    v(static_cast<Eigen::Index>(i)) = Complex{parse_number(parts[0], "amplitude"), parse_number(parts[1], "amplitude")};
  }
  const double n = v.norm();
  if (!(n > 0.0)) throw ConfigError("state has zero norm");
  if (std::abs(n - 1.0) > 1e-6) spdlog::warn("state norm {:.8g}; normalizing", n);
  return StateVector::normalize(v);
}

BlochVector parse_bloch(std::string_view text) {
  const auto parts = split(trim(text), ',');
  if (parts.size() != 3) throw ConfigError("Bloch vector must be 'x,y,z'");
  return {parse_number(parts[0], "x"), parse_number(parts[1], "y"), parse_number(parts[2], "z")};
}

StateVector StateSpec::state() const {
  if (psi) return *psi;
  return state_from_bloch(*bloch);
}

BlochVector StateSpec::bloch_vector() const {
  if (bloch) return *bloch;
  if (psi->dim() != 2) throw ConfigError("Bloch vector requested for a state of dimension > 2");
  return bloch_from_state(*psi);
}

void apply_param(QubitParams& p, std::string_view key, const ConfigValue& v) {
  const double x = parse_number(v.value, key, v.line);
  if (key == "E_c") p.charging_energy = x;
  else if (key == "E_J") p.josephson_energy = x;
  else if (key == "E_L") p.inductive_energy = x;
  else if (key == "C_g") p.gate_capacitance = x;
  else if (key == "n_g") p.gate_charge = x;
  else if (key == "V_g") p.gate_charge = gate_charge_from_voltage(p.gate_capacitance, x);
  else if (key == "I_g") p.bias_current = x;
  else if (key == "phi_e") p.flux_phase = x;
  else if (key == "E_LJ0") p.junction_inductive_energy = x;
  else if (key == "n_zpf") p.n_zpf = x;
  else if (key == "phi_zpf") p.phi_zpf = x;
  else throw ConfigError("unknown parameter key '" + std::string(key) + "'", v.line);
}

namespace {

void apply_params_section(QubitParams& p, const ConfigSection& params) {
  if (params.count("V_g") && params.count("n_g"))
    throw ConfigError("give either V_g or n_g, not both", params.at("V_g").line);
  // V_g depends on C_g, so it goes last.
  for (const auto& [key, value] : params)
    if (key != "V_g") apply_param(p, key, value);
  if (auto it = params.find("V_g"); it != params.end()) apply_param(p, "V_g", it->second);
}

struct ParsedIni {
  std::map<std::string, ConfigSection> sections;
  std::map<std::string, int> header_lines;
};

ParsedIni parse_ini(std::string_view text) {
  ParsedIni ini;
  std::string current;
  int line_no = 0;
  std::istringstream in{std::string(text)};
  std::string raw;
  while (std::getline(in, raw)) {
    ++line_no;
    const std::string_view line = trim(raw);
    if (line.empty() || line.front() == '#' || line.front() == ';') continue;
    if (line.front() == '[') {
      if (line.back() != ']') throw ConfigError("malformed section header", line_no);
      current = std::string(trim(line.substr(1, line.size() - 2)));
      if (ini.header_lines.count(current)) throw ConfigError("duplicate section [" + current + "]", line_no);
      if (current != "params" && !parse_command(current))
        throw ConfigError("unknown section [" + current + "]", line_no);
      ini.header_lines[current] = line_no;
      ini.sections[current];
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) throw ConfigError("expected 'key = value'", line_no);
    if (current.empty()) throw ConfigError("key outside of a section", line_no);
    const std::string key(trim(line.substr(0, eq)));
    const std::string value(trim(line.substr(eq + 1)));
    if (key.empty()) throw ConfigError("empty key", line_no);
    auto& section = ini.sections[current];
    if (section.count(key)) throw ConfigError("duplicate key '" + key + "'", line_no);
    section.emplace(key, ConfigValue{value, line_no});
  }
  return ini;
}

}  // namespace

void load_params_file(QubitParams& p, const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw IoError("cannot read parameter file " + file.string());
  std::stringstream buf;
  buf << in.rdbuf();
  const ParsedIni ini = parse_ini(buf.str());
  for (const auto& [name, line] : ini.header_lines)
    if (name != "params") throw ConfigError("parameter file may only contain a [params] section", line);
  if (auto it = ini.sections.find("params"); it != ini.sections.end()) apply_params_section(p, it->second);
}

RunConfig build_run_config(Command command, const ConfigSection& s, const ConfigSection& params,
                           const std::filesystem::path& base_dir) {
  const auto& allowed = allowed_keys(command);
  for (const auto& [key, v] : s)
    if (!allowed.count(key))
      throw ConfigError("unknown key '" + key + "' for " + std::string(to_string(command)), v.line);

  RunConfig cfg;
  cfg.command = command;
  auto get = [&](const char* key) -> const ConfigValue* {
    const auto it = s.find(key);
    return it == s.end() ? nullptr : &it->second;
  };

  try {
    if (command == Command::lyapunov) {
      cfg.qubit = QubitKind::lcjj;
    } else {
      cfg.qubit = parse_qubit_kind(require(s, "qubit", command).value);
    }
  } catch (const ConfigError&) {
    throw;
  } catch (const Error& e) {
    throw ConfigError(e.what(), s.at("qubit").line);
  }

  cfg.params = preset_params(cfg.qubit);
  if (const auto* v = get("params")) {
    std::filesystem::path path = v->value;
    if (path.is_relative()) path = base_dir / path;
    cfg.params_file = path;
    load_params_file(cfg.params, path);
  }
  apply_params_section(cfg.params, params);
  try {
    validate(cfg.params);
  } catch (const Error& e) {
    throw ConfigError(std::string("invalid parameters: ") + e.what());
  }

  if (const auto* v = get("model")) {
    if (command == Command::drive_run) {
      if (v->value == "approx") cfg.drive_models = DriveRunModels::approximate;
      else if (v->value == "exact") cfg.drive_models = DriveRunModels::exact;
      else if (v->value == "both") cfg.drive_models = DriveRunModels::both;
      else throw ConfigError("drive-run model must be approx, exact or both", v->line);
    } else {
      try {
        cfg.model = parse_model(v->value);
      } catch (const ConfigError& e) {
        throw ConfigError(e.what(), v->line);
      }
    }
  }

  cfg.initial = read_state(s, "psi0", "r0");
  cfg.target = read_state(s, "psif", "rf");

  if (const auto* v = get("t_final")) cfg.t_final = positive(parse_number(v->value, "t_final", v->line), "t_final", v->line);
  if (const auto* v = get("tf")) cfg.tf = positive(parse_number(v->value, "tf", v->line), "tf", v->line);
  if (const auto* v = get("dt")) cfg.dt = positive(parse_number(v->value, "dt", v->line), "dt", v->line);
  if (const auto* v = get("steps")) {
    cfg.steps = parse_int(v->value, "steps", v->line);
    if (cfg.steps < 1) throw ConfigError("steps must be at least 1", v->line);
  }
  cfg.substeps = command == Command::drive_run ? 0 : 1;
  if (const auto* v = get("substeps")) {
    cfg.substeps = parse_int(v->value, "substeps", v->line);
    if (cfg.substeps < 1) throw ConfigError("substeps must be at least 1", v->line);
  }
  if (const auto* v = get("method")) {
    if (v->value == "eigen") cfg.method = SimulationMethod::eigen;
    else if (v->value == "rk4") cfg.method = SimulationMethod::rk4;
    else if (v->value == "master") cfg.method = SimulationMethod::master;
    else throw ConfigError("method must be eigen, rk4 or master", v->line);
  }
  if (const auto* v = get("alpha")) cfg.gains.alpha = positive(parse_number(v->value, "alpha", v->line), "alpha", v->line);
  if (const auto* v = get("beta")) cfg.gains.beta = positive(parse_number(v->value, "beta", v->line), "beta", v->line);
  if (const auto* v = get("integrator")) {
    if (v->value == "fixed_rk4") cfg.integrator = LyapunovIntegrator::fixed_rk4;
    else if (v->value == "substepped") cfg.integrator = LyapunovIntegrator::substepped;
    else throw ConfigError("integrator must be fixed_rk4 or substepped", v->line);
  }
  if (const auto* v = get("out")) {
    std::filesystem::path path = v->value;
    if (path.is_relative()) path = base_dir / path;
    cfg.out = path;
  }
  if (const auto* v = get("format")) {
    if (v->value == "csv") cfg.format = OutputFormat::csv;
    else if (v->value == "json") cfg.format = OutputFormat::json;
    else throw ConfigError("format must be csv or json", v->line);
  }
  if (command == Command::design) cfg.format = get("format") ? cfg.format : OutputFormat::json;

  switch (command) {
    case Command::simulate: {
      if (!cfg.initial) throw ConfigError("missing required key 'psi0' (or 'r0') for simulate");
      require(s, "t_final", command);
      if (cfg.steps == 0) cfg.steps = cfg.dt > 0.0 ? static_cast<int>(std::llround(cfg.t_final / cfg.dt)) : 2000;
      if (cfg.steps < 1) throw ConfigError("t_final / dt gives no steps");
      if (cfg.dt == 0.0) cfg.dt = cfg.t_final / cfg.steps;
      break;
    }
    case Command::design:
    case Command::drive_run:
      if (!cfg.initial) throw ConfigError("missing required key 'psi0' (or 'r0') for " + std::string(to_string(command)));
      if (!cfg.target) throw ConfigError("missing required key 'psif' (or 'rf') for " + std::string(to_string(command)));
      require(s, "tf", command);
      if (cfg.steps == 0) cfg.steps = 2000;
      cfg.t_final = cfg.tf;
      cfg.dt = cfg.tf / cfg.steps;
      break;
    case Command::lyapunov:
      if (!cfg.initial) throw ConfigError("missing required key 'r0' for lyapunov");
      if (!cfg.target) throw ConfigError("missing required key 'rf' for lyapunov");
      require(s, "alpha", command);
      require(s, "beta", command);
      require(s, "dt", command);
      require(s, "steps", command);
      cfg.t_final = cfg.dt * cfg.steps;
      break;
  }
  return cfg;
}

RunConfig parse_config_text(std::string_view text, const std::filesystem::path& base_dir) {
  const ParsedIni ini = parse_ini(text);
  std::optional<Command> command;
  ConfigSection section;
  for (const auto& [name, body] : ini.sections) {
    if (name == "params") continue;
    if (command) throw ConfigError("more than one command section", ini.header_lines.at(name));
    command = parse_command(name);
    section = body;
  }
  if (!command) throw ConfigError("no command section ([simulate], [design], [drive-run] or [lyapunov])");
  const auto params = ini.sections.find("params");
  return build_run_config(*command, section, params == ini.sections.end() ? ConfigSection{} : params->second,
                          base_dir);
}

RunConfig parse_config(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw IoError("cannot read config file " + file.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_config_text(buf.str(), file.parent_path());
}

}  // namespace scq
