#include "sincmbe/commands.hpp"

#include <json.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <vector>

#include "sincmbe/analysis.hpp"
#include "sincmbe/config.hpp"
#include "sincmbe/energy_csv.hpp"
#include "sincmbe/schemes.hpp"
#include "sincmbe/snapshot.hpp"
#include "sincmbe/spectral.hpp"

namespace sincmbe {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

void apply_overrides(RunConfig& cfg, const CliOverrides& o) {
  if (o.output_dir) cfg.output_dir = *o.output_dir;
  if (o.record_every) {
    if (*o.record_every < 1) {
      throw std::runtime_error("--record-every must be >= 1");
    }
    cfg.scheme.record_every = *o.record_every;
  }
  if (o.snapshot_every) {
    if (*o.snapshot_every < 0) {
      throw std::runtime_error("--snapshot-every must be >= 0");
    }
    cfg.scheme.snapshot_every = *o.snapshot_every;
  }
  if (o.seed) cfg.ic.seed = *o.seed;
}

RealField build_initial_condition(const RunConfig& cfg) {
  switch (cfg.ic.kind) {
    case IcKind::kTrig:
      return initial_condition_trig(cfg.grid);
    case IcKind::kRandom:
      return initial_condition_random(cfg.grid, cfg.ic.amplitude, cfg.ic.seed);
    case IcKind::kFromFile: {
      Snapshot snap = read_snapshot(cfg.ic.path);
      if (!(snap.field.grid() == cfg.grid)) {
        throw std::runtime_error(
            cfg.ic.path + ": snapshot grid " +
            std::to_string(snap.field.grid().nx) + "x" +
            std::to_string(snap.field.grid().ny) + " does not match config grid " +
            std::to_string(cfg.grid.nx) + "x" + std::to_string(cfg.grid.ny));
      }
      return std::move(snap.field);
    }
  }
  throw std::logic_error("build_initial_condition: unknown ic kind");
}

json config_json(const RunConfig& cfg) {
  json j;
  j["model"] = {{"kind", to_string(cfg.model.kind)},
                {"eta_sq", cfg.model.eta_sq},
                {"beta", cfg.model.beta},
                {"beta1", cfg.model.beta1},
                {"classical_well", to_string(cfg.model.classical_well)}};
  j["grid"] = {{"nx", cfg.grid.nx}, {"ny", cfg.grid.ny}};
  j["scheme"] = {{"kind", to_string(cfg.scheme.scheme)},
                 {"tau", cfg.scheme.tau},
                 {"t_final", cfg.scheme.t_final},
                 {"record_every", cfg.scheme.record_every},
                 {"snapshot_every", cfg.scheme.snapshot_every},
                 {"dealias", cfg.scheme.dealias},
                 {"fail_on_blowup", cfg.fail_on_blowup}};
  j["ic"] = {{"kind", to_string(cfg.ic.kind)},
             {"amplitude", cfg.ic.amplitude},
             {"seed", cfg.ic.seed},
             {"path", cfg.ic.path}};
  j["output_dir"] = cfg.output_dir;
  return j;
}

void write_json(const json& j, const fs::path& path) {
  std::ofstream out(path);
  if (!out) {
    throw std::runtime_error(path.string() + ": cannot open for writing");
  }
  out << j.dump(2) << '\n';
}

// Streams snapshots to disk as the run progresses.
class SnapshotWriter : public DiagnosticsSink {
 public:
  explicit SnapshotWriter(fs::path dir) : dir_(std::move(dir)) {}

  void on_snapshot(const RealField& field, std::int64_t step,
                   double time) override {
    char name[32];
    std::snprintf(name, sizeof(name), "snapshot_%08lld.bin",
                  static_cast<long long>(step));
    write_snapshot(field, step, time, (dir_ / name).string());
    ++count_;
  }

  int count() const { return count_; }

 private:
  fs::path dir_;
  int count_ = 0;
};

struct RunOutput {
  SimResult result;
  std::int64_t n_steps = 0;
  int snapshots = 0;
};

RunOutput execute_run(const RunConfig& cfg, const fs::path& dir,
                      const std::string& csv_name) {
  fs::create_directories(dir);
  const RealField h0 = build_initial_condition(cfg);
  SnapshotWriter sink(dir);
  RunOutput out;
  out.n_steps = cfg.scheme.n_steps();
  out.result = run_simulation(cfg.model, cfg.scheme, h0, &sink);
  out.snapshots = sink.count();
  write_energy_csv(out.result.records, (dir / csv_name).string());
  return out;
}

json run_json(const RunOutput& run) {
  json j;
  j["n_steps"] = run.n_steps;
  j["steps_completed"] = run.result.state.step;
  j["t_final_actual"] = run.result.state.time;
  j["blowup"] = run.result.blowup;
  if (run.result.blowup) j["blowup_step"] = run.result.blowup_step;
  j["records_written"] = run.result.records.size();
  j["snapshots_written"] = run.snapshots;
  return j;
}

void print_run_summary(const std::string& tag, const RunOutput& run) {
  const auto& recs = run.result.records;
  std::cout << tag << ": " << run.result.state.step << "/" << run.n_steps
            << " steps, t = " << run.result.state.time;
  if (!recs.empty()) {
    std::cout << ", energy " << recs.front().energy << " -> "
              << recs.back().energy;
  }
  if (run.result.blowup) {
    std::cout << ", BLOWUP at step " << run.result.blowup_step;
  }
  std::cout << '\n';
}

int usage_error(const std::exception& e) {
  std::cerr << "error: " << e.what() << '\n';
  return kExitUsage;
}

int cmd_simulate_impl(const std::string& config_path,
                      const CliOverrides& overrides) {
  RunConfig cfg = parse_config(config_path);
  apply_overrides(cfg, overrides);
  const fs::path dir(cfg.output_dir);
  const RunOutput run = execute_run(cfg, dir, "energy.csv");

  json meta;
  meta["command"] = "simulate";
  meta["config"] = config_json(cfg);
  meta["run"] = run_json(run);
  write_json(meta, dir / "metadata.json");

  print_run_summary("simulate", run);
  if (run.result.blowup && cfg.fail_on_blowup) return kExitBlowup;
  return kExitOk;
}

int cmd_compare_impl(const std::string& config_path_a,
                     const std::string& config_path_b,
                     const CliOverrides& overrides) {
  RunConfig cfg_a = parse_config(config_path_a);
  RunConfig cfg_b = parse_config(config_path_b);
  apply_overrides(cfg_a, overrides);
  apply_overrides(cfg_b, overrides);
  if (!(cfg_a.grid == cfg_b.grid)) {
    throw std::runtime_error("compare: grids differ between configs");
  }
  // Both runs start from config A's initial datum; B's ic section is ignored.
  const fs::path dir(overrides.output_dir ? *overrides.output_dir
                                          : cfg_a.output_dir);
  fs::create_directories(dir);
  const RealField h0 = build_initial_condition(cfg_a);

  SnapshotWriter sink_a(dir / "a"), sink_b(dir / "b");
  fs::create_directories(dir / "a");
  fs::create_directories(dir / "b");
  RunOutput run_a, run_b;
  run_a.n_steps = cfg_a.scheme.n_steps();
  run_b.n_steps = cfg_b.scheme.n_steps();
  run_a.result = run_simulation(cfg_a.model, cfg_a.scheme, h0, &sink_a);
  run_b.result = run_simulation(cfg_b.model, cfg_b.scheme, h0, &sink_b);
  run_a.snapshots = sink_a.count();
  run_b.snapshots = sink_b.count();
  write_energy_csv(run_a.result.records, (dir / "a_energy.csv").string());
  write_energy_csv(run_b.result.records, (dir / "b_energy.csv").string());

  // Joined CSV, row-aligned by record index (truncates at the shorter run).
  {
    std::ofstream out(dir / "compare.csv");
    if (!out) {
      throw std::runtime_error((dir / "compare.csv").string() +
                               ": cannot open for writing");
    }
    out << "row,step_a,time_a,energy_a,step_b,time_b,energy_b\n";
    const size_t n =
        std::min(run_a.result.records.size(), run_b.result.records.size());
    char buf[64];
    for (size_t i = 0; i < n; ++i) {
      const EnergyRecord& a = run_a.result.records[i];
      const EnergyRecord& b = run_b.result.records[i];
      out << i << ',' << a.step << ',';
      std::snprintf(buf, sizeof(buf), "%.17g,", a.time);
      out << buf;
      std::snprintf(buf, sizeof(buf), "%.17g,", a.energy);
      out << buf << b.step << ',';
      std::snprintf(buf, sizeof(buf), "%.17g,", b.time);
      out << buf;
      std::snprintf(buf, sizeof(buf), "%.17g", b.energy);
      out << buf << '\n';
    }
  }

  json meta;
  meta["command"] = "compare";
  meta["config_a"] = config_json(cfg_a);
  meta["config_b"] = config_json(cfg_b);
  meta["run_a"] = run_json(run_a);
  meta["run_b"] = run_json(run_b);
  write_json(meta, dir / "metadata.json");

  print_run_summary("compare[a]", run_a);
  print_run_summary("compare[b]", run_b);
  const bool fatal = (run_a.result.blowup && cfg_a.fail_on_blowup) ||
                     (run_b.result.blowup && cfg_b.fail_on_blowup);
  return fatal ? kExitBlowup : kExitOk;
}

int cmd_sweep_impl(const std::string& config_path,
                   const CliOverrides& overrides) {
  RunConfig cfg = parse_config(config_path);
  apply_overrides(cfg, overrides);
  if (cfg.sweep_taus.empty()) {
    throw std::runtime_error(config_path +
                             ": sweep requires [sweep] taus = ...");
  }
  const fs::path dir(cfg.output_dir);
  fs::create_directories(dir);
  const RealField h0 = build_initial_condition(cfg);

  const SweepResult sweep =
      find_tau_c(cfg.model, cfg.scheme.scheme, cfg.grid, h0,
                 cfg.scheme.t_final, cfg.sweep_taus, cfg.sweep_refine_iters);

  {
    std::ofstream out(dir / "sweep.csv");
    if (!out) {
      throw std::runtime_error((dir / "sweep.csv").string() +
                               ": cannot open for writing");
    }
    out << "tau,holds,first_violation_step,max_increase,tol\n";
    char buf[64];
    for (const SweepProbe& p : sweep.trace) {
      std::snprintf(buf, sizeof(buf), "%.17g,", p.tau);
      out << buf << (p.report.holds ? 1 : 0) << ',';
      if (p.report.first_violation_step) {
        out << *p.report.first_violation_step;
      }
      out << ',';
      std::snprintf(buf, sizeof(buf), "%.17g,", p.report.max_increase);
      out << buf;
      std::snprintf(buf, sizeof(buf), "%.17g", p.report.tol);
      out << buf << '\n';
    }
  }

  json meta;
  meta["command"] = "sweep";
  meta["config"] = config_json(cfg);
  meta["sweep"]["taus"] = cfg.sweep_taus;
  meta["sweep"]["refine_iters"] = cfg.sweep_refine_iters;
  meta["sweep"]["probes"] = sweep.trace.size();
  if (sweep.tau_lo) {
    meta["sweep"]["tau_lo"] = *sweep.tau_lo;
  } else {
    meta["sweep"]["tau_lo"] = nullptr;
  }
  if (sweep.tau_hi) {
    meta["sweep"]["tau_hi"] = *sweep.tau_hi;
  } else {
    meta["sweep"]["tau_hi"] = nullptr;
  }
  write_json(meta, dir / "metadata.json");

  for (const SweepProbe& p : sweep.trace) {
    std::cout << "tau = " << p.tau << ": "
              << (p.report.holds ? "holds" : "fails");
    if (p.report.first_violation_step) {
      std::cout << " (first violation at step " << *p.report.first_violation_step
                << ")";
    }
    std::cout << '\n';
  }
  if (sweep.tau_lo && sweep.tau_hi) {
    std::cout << "bracket: " << *sweep.tau_lo << " < tau_c <= " << *sweep.tau_hi
              << '\n';
  } else if (sweep.tau_lo) {
    std::cout << "open bracket: dissipation holds at every probed tau (tau_c > "
              << *sweep.tau_lo << ")\n";
  } else if (sweep.tau_hi) {
    std::cout << "open bracket: dissipation fails at every probed tau (tau_c < "
              << *sweep.tau_hi << ")\n";
  }
  return kExitOk;
}

}  // namespace

int cmd_simulate(const std::string& config_path, const CliOverrides& overrides) {
  try {
    return cmd_simulate_impl(config_path, overrides);
  } catch (const std::exception& e) {
    return usage_error(e);
  }
}

int cmd_compare(const std::string& config_path_a,
                const std::string& config_path_b,
                const CliOverrides& overrides) {
  try {
    return cmd_compare_impl(config_path_a, config_path_b, overrides);
  } catch (const std::exception& e) {
    return usage_error(e);
  }
}

int cmd_sweep(const std::string& config_path, const CliOverrides& overrides) {
  try {
    return cmd_sweep_impl(config_path, overrides);
  } catch (const std::exception& e) {
    return usage_error(e);
  }
}

int cmd_verify(const VerifyOptions& options) {
  bool all_ok = true;
  auto report = [&all_ok](const std::string& name, bool ok,
                          const std::string& detail) {
    all_ok = all_ok && ok;
    std::cout << (ok ? "[ok]   " : "[FAIL] ") << name;
    if (!detail.empty()) std::cout << " (" << detail << ")";
    std::cout << '\n';
  };

  GridSpec grid;
  try {
    grid = GridSpec(options.grid_n, options.grid_n);
    if (options.samples < 1) {
      throw std::invalid_argument("verify: --samples must be >= 1");
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  }

  {
    const LemmaReport lemma =
        lemma_sampler(options.samples, 1e3, options.seed);
    char buf[128];
    std::snprintf(buf, sizeof(buf), "max ratio %.15g", lemma.max_hessian_ratio);
    report("hessian bound x^T Hess W x <= |x|^2",
           lemma.max_hessian_ratio <= 1.0 + 1e-12, buf);
    std::snprintf(buf, sizeof(buf), "max ratio %.15g",
                  lemma.max_lipschitz_ratio);
    report("flux Lipschitz bound |g(x)-g(y)| <= |x-y|",
           lemma.max_lipschitz_ratio <= 1.0 + 1e-12, buf);
  }

  const std::vector<double> taus = {0.5, 1.0, 10.0, 100.0};
  for (double tau : taus) {
    const MultiplierSpec mult = build_multipliers(tau, grid);
    double max_sum_err = 0.0, max_prod_err = 0.0, max_mod_err = 0.0;
    for (int m = 0; m < grid.size(); ++m) {
      if (mult.t_hat[m] == 0.0) continue;
      const std::complex<double> tp = mult.t_plus[m];
      const std::complex<double> tm = mult.t_minus[m];
      max_sum_err =
          std::max(max_sum_err, std::abs(tp + tm - 4.0 * mult.t_hat[m]));
      max_prod_err = std::max(max_prod_err, std::abs(tp * tm - mult.t_hat[m]));
      if (mult.t_hat[m] < 0.25) {
        max_mod_err = std::max(
            max_mod_err, std::abs(std::abs(tp) - std::sqrt(mult.t_hat[m])));
      }
    }
    char buf[160];
    std::snprintf(buf, sizeof(buf),
                  "tau=%g: theta0=%.15g, sum err %.3g, prod err %.3g, "
                  "modulus err %.3g",
                  tau, mult.theta0, max_sum_err, max_prod_err, max_mod_err);
    report("multiplier roots and theta0 < 1",
           mult.theta0 < 1.0 && max_sum_err <= 1e-12 && max_prod_err <= 1e-12 &&
               max_mod_err <= 1e-12,
           buf);
  }

  {
    const std::vector<double> tau_grid = {0.5, 1.0, 2.0, 5.0, 10.0, 100.0, 1000.0};
    bool monotone = true;
    double prev = 2.0;
    for (double tau : tau_grid) {
      const double theta = build_multipliers(tau, grid).theta0;
      if (theta > prev * (1.0 + 1e-15)) monotone = false;
      prev = theta;
    }
    report("theta0 nonincreasing in tau over [0.5, 1000]", monotone, "");
  }

  for (double tau : {0.5, 10.0}) {
    const RecurrenceReport rec =
        verify_recurrence_contraction(tau, grid, 50, options.seed);
    char buf[160];
    std::snprintf(buf, sizeof(buf),
                  "tau=%g: theta0=%.15g, sup %.6g <= bound %.6g", tau,
                  rec.theta0, rec.sup_norm, rec.sup_bound);
    report("recurrence contraction, decay, and sup bound", rec.ok(), buf);
  }

  return all_ok ? kExitOk : kExitVerifyFail;
}

}  // namespace sincmbe
