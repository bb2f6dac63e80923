#include "scq/cli.hpp"

#include <cmath>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <spdlog/spdlog.h>

#include "scq/constants.hpp"
#include "scq/drive.hpp"
#include "scq/errors.hpp"
#include "scq/evolution.hpp"
#include "scq/export.hpp"
#include "scq/lyapunov.hpp"

namespace scq::cli {

namespace {

// Largest phase advance per RK4 substep chosen automatically.
constexpr double kAutoPhasePerStep = 0.01;

void write_to(const std::filesystem::path& path, const std::function<void(std::ostream&)>& writer);

void emit(const RunConfig& cfg, std::ostream& out, const std::function<void(std::ostream&)>& writer) {
  if (!cfg.out) {
    writer(out);
    return;
  }
  write_to(*cfg.out, writer);
}

void write_to(const std::filesystem::path& path, const std::function<void(std::ostream&)>& writer) {
  if (path.has_parent_path()) {
    std::error_code ec;
    std::filesystem::create_directories(path.parent_path(), ec);
    if (ec) throw IoError("cannot create directory " + path.parent_path().string() + ": " + ec.message());
  }
  std::ofstream file(path, std::ios::binary);
  if (!file) throw IoError("cannot open output file " + path.string());
  writer(file);
  file.flush();
  if (!file) throw IoError("failed to write " + path.string());
}

StateVector embed(const StateVector& psi, Eigen::Index dim) {
  if (psi.dim() == dim) return psi;
  if (psi.dim() > dim) throw ConfigError("initial state has more levels than the model");
  CVector v = CVector::Zero(dim);
  v.head(psi.dim()) = psi.amplitudes();
  return StateVector(std::move(v));
}

HamiltonianOperator build_model(const RunConfig& cfg) {
  switch (cfg.model.kind) {
    case ModelKind::approximate: return build_approximate(cfg.params);
    case ModelKind::exact_two_level: return build_exact_two_level(cfg.params);
    case ModelKind::fock: return build_fock(cfg.params, cfg.model.levels);
  }
  throw ConfigError("unknown model");
}

int run_simulate(const RunConfig& cfg, std::ostream& out) {
  const HamiltonianOperator h = build_model(cfg);
  const StateVector psi0 = embed(cfg.initial->state(), h.dim());
  const TimeGrid grid{0.0, cfg.dt, cfg.steps};
  BlochTrajectory traj;
  switch (cfg.method) {
    case SimulationMethod::eigen: traj = propagate_static(h, psi0, grid); break;
    case SimulationMethod::rk4: {
      IntegratorOptions opts;
      opts.substeps = cfg.substeps;
      traj = evolve_time_dependent(TimeDependentHamiltonian(h.matrix()), psi0, grid, opts);
      break;
    }
    case SimulationMethod::master: traj = evolve_master(DensityMatrix::from_state(psi0), h, grid); break;
  }
  emit(cfg, out, [&](std::ostream& os) {
    if (cfg.format == OutputFormat::csv) write_trajectory_csv(os, traj);
    else os << trajectory_to_json(traj).dump(2) << '\n';
  });
  return kExitOk;
}

DrivePlan plan_for(const RunConfig& cfg) {
  const RotationTarget target =
      make_rotation_target(cfg.initial->bloch_vector(), cfg.target->bloch_vector(), cfg.tf);
  return design_drive(target, cfg.params);
}

int run_design(const RunConfig& cfg, std::ostream& out) {
  const DrivePlan plan = plan_for(cfg);
  const nlohmann::json j = to_json(plan);
  emit(cfg, out, [&](std::ostream& os) {
    if (cfg.format == OutputFormat::json) {
      os << j.dump(2) << '\n';
      return;
    }
    os << "kind,lambda_rad,amplitude,dc_offset,omega_c_rad_s,t_f_s,n_x,n_y,n_z,omega_q_rad_s\n"
       << to_string(plan.kind) << ',' << format_double(plan.lambda) << ',' << format_double(plan.amplitude) << ','
       << format_double(plan.dc_offset) << ',' << format_double(plan.omega_c) << ',' << format_double(plan.t_f)
       << ',' << format_double(plan.n_hat.x()) << ',' << format_double(plan.n_hat.y()) << ','
       << format_double(plan.n_hat.z()) << ',' << format_double(plan.omega_q) << '\n';
  });
  return kExitOk;
}

// Upper bound on the Bloch angular rate 2|h|/hbar of a Hamiltonian family.
double rate_bound(const DrivePlan& plan, const QubitParams& params, DriveModel model) {
  const double hbar = constants::hbar;
  if (model == DriveModel::approximate_rotating) {
    const double amp = std::abs(plan.k * plan.amplitude) * rwa_pattern(plan.kind).norm();
    return 2.0 * (amp + std::abs(plan.k * plan.dc_offset)) / hbar;
  }
  QubitParams p = params;
  const HamiltonianOperator h = build_exact_two_level(p);
  const CMatrix* d = h.drive_derivative(native_drive(plan.kind));
  const double drive = std::abs(plan.amplitude) + std::abs(plan.dc_offset);
  return 2.0 * (h.traceless().norm() + drive * (d ? d->norm() : 0.0)) / hbar;
}

int run_drive(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  const DrivePlan plan = plan_for(cfg);
  const StateVector psi0 = cfg.initial->state();
  const TimeGrid grid{0.0, cfg.dt, cfg.steps};

  nlohmann::json summary;
  summary["plan"] = to_json(plan);
  auto run_model = [&](DriveModel model, const char* name) {
    IntegratorOptions opts;
    opts.retain_states = false;
    opts.substeps = cfg.substeps;
    if (opts.substeps == 0) {
      const double rate = rate_bound(plan, cfg.params, model);
      opts.substeps = std::max(1, static_cast<int>(std::ceil(rate * grid.dt / kAutoPhasePerStep)));
    }
    const ExperimentResult res = closed_loop_experiment(plan, cfg.params, psi0, model, grid, opts);
    const BlochVector& r = res.trajectory.final_bloch();
    summary[name] = {{"final_bloch", {r.x, r.y, r.z}},
                     {"target_bloch", {res.target.x, res.target.y, res.target.z}},
                     {"fidelity", res.fidelity},
                     {"final_distance", res.final_distance},
                     {"substeps", opts.substeps},
                     {"max_norm_drift", res.trajectory.max_norm_drift}};
    if (cfg.out) {
      const std::string ext = cfg.format == OutputFormat::csv ? ".csv" : ".json";
      std::filesystem::path path = *cfg.out;
      path += std::string("_") + name + ext;
      write_to(path, [&](std::ostream& os) {
        if (cfg.format == OutputFormat::csv) write_trajectory_csv(os, res.trajectory);
        else os << trajectory_to_json(res.trajectory).dump(2) << '\n';
      });
    }
    err << name << ": fidelity " << format_double(res.fidelity) << '\n';
  };
  if (cfg.drive_models != DriveRunModels::exact) run_model(DriveModel::approximate_rotating, "approx");
  if (cfg.drive_models != DriveRunModels::approximate) run_model(DriveModel::exact_lab, "exact");

  if (cfg.out) {
    std::filesystem::path path = *cfg.out;
    path += "_summary.json";
    write_to(path, [&](std::ostream& os) { os << summary.dump(2) << '\n'; });
  }
  out << summary.dump(2) << '\n';
  return kExitOk;
}

int run_lyapunov(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  const TimeGrid grid{0.0, cfg.dt, cfg.steps};
  LyapunovOptions opts;
  opts.integrator = cfg.integrator;
  opts.substeps = cfg.substeps;
  const LyapunovRun run = simulate_closed_loop(cfg.initial->bloch_vector(), cfg.target->bloch_vector(), cfg.gains,
                                               BilinearParams::from_qubit(cfg.params), grid, opts);
  emit(cfg, out, [&](std::ostream& os) {
    if (cfg.format == OutputFormat::csv) write_lyapunov_csv(os, run);
    else os << lyapunov_to_json(run).dump(2) << '\n';
  });
  err << "lyapunov: final error " << format_double(run.final_error) << ", monotone "
      << (run.monotone ? "yes" : "no") << ", converged " << (run.converged ? "yes" : "no") << '\n';
  return kExitOk;
}

template <typename F>
int guarded(std::ostream& err, F&& body) {
  try {
    return body();
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const InvalidArgument& e) {
    err << "invalid input: " << e.what() << '\n';
    return kExitConfig;
  } catch (const NumericError& e) {
    err << "numeric failure: " << e.what() << '\n';
    return kExitNumeric;
  } catch (const IoError& e) {
    err << "I/O failure: " << e.what() << '\n';
    return kExitIo;
  }
}

// Flags of one subcommand, collected into the same key/value section a
// config file would produce.
struct FlagSet {
  std::map<std::string, std::string> values;
  std::vector<std::string> param_overrides;

  void add(CLI::App* app, const std::string& flag, const std::string& key, const std::string& help) {
    app->add_option(flag, values[key], help);
  }

  ConfigSection section(CLI::App* app) const {
    ConfigSection s;
    for (const auto& [key, value] : values) {
      std::string flag = "--" + key;
      std::replace(flag.begin(), flag.end(), '_', '-');
      if (app->count(flag) > 0) s.emplace(key, ConfigValue{value, 0});
    }
    return s;
  }

  ConfigSection params() const {
    ConfigSection s;
    for (const std::string& kv : param_overrides) {
      const auto eq = kv.find('=');
      if (eq == std::string::npos) throw ConfigError("--param expects KEY=VALUE, got '" + kv + "'");
      const std::string key = kv.substr(0, eq);
      if (s.count(key)) throw ConfigError("duplicate --param '" + key + "'");
      s.emplace(key, ConfigValue{kv.substr(eq + 1), 0});
    }
    return s;
  }
};

void add_flag(FlagSet& f, CLI::App* app, const std::string& key, const std::string& help) {
  std::string flag = "--" + key;
  std::replace(flag.begin(), flag.end(), '_', '-');
  f.add(app, flag, key, help);
}

}  // namespace

int run(const RunConfig& config, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    switch (config.command) {
      case Command::simulate: return run_simulate(config, out);
      case Command::design: return run_design(config, out);
      case Command::drive_run: return run_drive(config, out, err);
      case Command::lyapunov: return run_lyapunov(config, out, err);
    }
    return kExitConfig;
  });
}

int main(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Superconducting qubit evolution, drive design and Lyapunov control"};
  app.require_subcommand(1);
  bool verbose = false;
  app.add_flag("-v,--verbose", verbose, "Debug logging");

  std::string config_path;
  CLI::App* run_cmd = app.add_subcommand("run", "Execute a configuration file");
  run_cmd->add_option("config", config_path, "INI configuration file")->required();

  struct Sub {
    Command command;
    CLI::App* app;
    FlagSet flags;
  };
  std::vector<std::unique_ptr<Sub>> subs;
  auto make_sub = [&](Command c, const std::string& help, std::initializer_list<std::pair<const char*, const char*>> keys) {
    auto sub = std::make_unique<Sub>();
    sub->command = c;
    sub->app = app.add_subcommand(std::string(to_string(c)), help);
    for (const auto& [key, text] : keys) add_flag(sub->flags, sub->app, key, text);
    sub->app->add_option("--param", sub->flags.param_overrides, "Parameter override KEY=VALUE (repeatable)");
    subs.push_back(std::move(sub));
  };
  make_sub(Command::simulate, "Free evolution of a qubit model",
           {{"qubit", "charge|phase|flux|lcjj"}, {"model", "approx|exact2|fock:N"}, {"params", "Parameter file"},
            {"psi0", "Initial state 're,im;re,im'"}, {"r0", "Initial Bloch vector 'x,y,z'"},
            {"t_final", "Duration (s)"}, {"dt", "Sample spacing (s)"}, {"steps", "Number of steps"},
            {"substeps", "RK4 substeps per sample"}, {"method", "eigen|rk4|master"}, {"out", "Output path"},
            {"format", "csv|json"}});
  make_sub(Command::design, "Design a microwave drive for a state transfer",
           {{"qubit", "charge|phase|flux"}, {"params", "Parameter file"}, {"psi0", "Initial state"},
            {"r0", "Initial Bloch vector"}, {"psif", "Final state"}, {"rf", "Final Bloch vector"},
            {"tf", "Transfer time (s)"}, {"out", "Output path"}, {"format", "json|csv"}});
  make_sub(Command::drive_run, "Apply a designed drive to the approximate and exact models",
           {{"qubit", "charge|phase|flux"}, {"params", "Parameter file"}, {"psi0", "Initial state"},
            {"r0", "Initial Bloch vector"}, {"psif", "Final state"}, {"rf", "Final Bloch vector"},
            {"tf", "Transfer time (s)"}, {"steps", "Samples over tf"}, {"substeps", "RK4 substeps (default auto)"},
            {"model", "approx|exact|both"}, {"out", "Output path prefix"}, {"format", "csv|json"}});
  make_sub(Command::lyapunov, "Closed-loop Lyapunov stabilization",
           {{"params", "Parameter file"}, {"r0", "Initial Bloch vector"}, {"rf", "Target Bloch vector"},
            {"alpha", "Voltage gain"}, {"beta", "Current gain"}, {"dt", "Sample spacing (s)"},
            {"steps", "Number of steps"}, {"substeps", "RK4 substeps per sample"},
            {"integrator", "fixed_rk4|substepped"}, {"out", "Output path"}, {"format", "csv|json"}});

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << '\n';
    return e.get_exit_code() == 0 ? kExitOk : kExitConfig;
  }
  spdlog::set_level(verbose ? spdlog::level::debug : spdlog::level::warn);

  RunConfig config;
  const int parsed = guarded(err, [&] {
    if (run_cmd->parsed()) {
      config = parse_config(config_path);
      return kExitOk;
    }
    for (const auto& sub : subs) {
      if (sub->app->parsed()) {
        config = build_run_config(sub->command, sub->flags.section(sub->app), sub->flags.params(), ".");
        return kExitOk;
      }
    }
    throw ConfigError("no subcommand given");
  });
  if (parsed != kExitOk) return parsed;
  return run(config, out, err);
}

}  // namespace scq::cli
