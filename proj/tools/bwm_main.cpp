#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>

#include "bwm/calibration.hpp"
#include "bwm/config.hpp"
#include "bwm/csv.hpp"
#include "bwm/error.hpp"
#include "bwm/invariants.hpp"
#include "bwm/kernels.hpp"
#include "bwm/studies.hpp"

namespace {

using namespace bwm;

struct Common {
  std::string config;
  std::string out = ".";
  std::optional<std::uint64_t> seed;
  bool quiet = false;
};

RunConfig load(const Common& o) {
  RunConfig cfg = load_config(o.config);
  if (o.seed) cfg.seed = *o.seed;
  return cfg;
}

Calibration calibration_for(const RunConfig& cfg) {
  return load_calibration(cfg.calibration.empty() ? default_calibration_path()
                                                  : cfg.calibration);
}

std::ofstream open_out(const Common& o, const std::string& name) {
  std::filesystem::create_directories(o.out);
  const std::string path = output_path(o.out, name);
  std::ofstream os(path);
  if (!os) throw Error("cannot open " + path + " for writing");
  return os;
}

int cmd_run(const Common& o) {
  const RunConfig cfg = load(o);
  RunOptions opt;
  opt.out_dir = o.out;
  opt.log = o.quiet ? nullptr : &std::cerr;
  const RunResult r = run_simulation(cfg, calibration_for(cfg), opt);
  if (!o.quiet) {
    const auto& last = r.history.back();
    std::cout << "t = " << format_double(last.time) << "  energy drift "
              << format_double(last.energy_rel_drift) << "  rows " << r.history.size()
              << "\n";
    if (r.exit_code != kExitOk) std::cout << r.message << "\n";
  }
  return r.exit_code;
}

int cmd_convergence(const Common& o) {
  const RunConfig cfg = load(o);
  const ConvergenceReport rep = study_convergence(cfg);
  auto os = open_out(o, "convergence.csv");
  os << "sweep,parameter,error\n";
  for (const auto& r : rep.rows) {
    os << r.sweep << ',' << format_double(r.parameter) << ',' << format_double(r.error)
       << '\n';
    if (!o.quiet) std::cout << r.sweep << " = " << r.parameter << "  error " << r.error << "\n";
  }
  if (!o.quiet) {
    if (rep.order_meaningful) std::cout << "temporal order " << rep.temporal_order << "\n";
    else std::cout << "temporal errors at roundoff; no order fitted\n";
  }
  return rep.passed ? kExitOk : kExitViolation;
}

int cmd_scaling(const Common& o) {
  const RunConfig cfg = load(o);
  const ScalingStudy st = study_scaling(cfg);
  auto os = open_out(o, "scaling.csv");
  const std::pair<const char*, double> rows[] = {
      {"lambda", double(st.lambda)},
      {"energy_original", st.energy.energy_original},
      {"energy_scaled", st.energy.energy_scaled},
      {"measured_ratio", st.energy.measured_ratio},
      {"predicted_fixed_box", st.energy.predicted_fixed_box},
      {"predicted_whole_space", st.energy.predicted_whole_space},
      {"measure_adjusted_ratio", st.energy.measure_adjusted_ratio},
      {"energy_ratio_error", st.energy_ratio_error},
      {"correspondence_error", st.correspondence_error},
      {"exact_error", st.exact_error},
  };
  os << "quantity,value\n";
  for (const auto& [k, v] : rows) {
    os << k << ',' << format_double(v) << '\n';
    if (!o.quiet) std::cout << k << " = " << format_double(v) << "\n";
  }
  return st.passed ? kExitOk : kExitViolation;
}

int cmd_perturb(const Common& o) {
  const RunConfig cfg = load(o);
  const PerturbationReport rep = study_perturbation(cfg);
  auto os = open_out(o, "perturbation.csv");
  os << "delta,ok,ew0,ewT,G,error\n";
  for (const auto& r : rep.rows) {
    os << format_double(r.delta) << ',' << (r.ok ? 1 : 0) << ',' << format_double(r.ew0)
       << ',' << format_double(r.ewT) << ',' << format_double(r.G) << ",\"" << r.error
       << "\"\n";
    if (!o.quiet) {
      std::cout << "delta " << r.delta;
      if (r.ok) std::cout << "  E_w(0) " << r.ew0 << "  G " << r.G << "\n";
      else std::cout << "  " << r.error << "\n";
    }
  }
  if (!o.quiet) {
    std::cout << "G spread " << rep.G_spread << "  linearity error " << rep.linearity_error
              << "\n";
  }
  return rep.passed ? kExitOk : kExitViolation;
}

int cmd_invariants(const Common& o) {
  const auto rows = run_invariants(o.seed.value_or(1));
  if (!o.quiet) print_invariants(std::cout, rows);
  for (const auto& r : rows) {
    if (!r.passed) return kExitViolation;
  }
  return kExitOk;
}

int cmd_calibrate(const Common& o, bool out_given) {
  const Calibration cal = run_calibration(o.quiet ? nullptr : &std::cerr);
  std::string path = default_calibration_path();
  if (out_given) {
    std::filesystem::create_directories(o.out);
    path = output_path(o.out, "calibration.cfg");
  }
  save_calibration(path, cal);
  if (!o.quiet) std::cout << calibration_to_text(cal) << "written to " << path << "\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  bwm::configure_threads_from_env();
  CLI::App app{"Biharmonic wave-map simulator"};
  app.require_subcommand(1);
  Common o;
  std::uint64_t seed = 0;
  auto add_common = [&](CLI::App* sub, bool needs_config) {
    auto* c = sub->add_option("--config", o.config, "Run configuration file");
    if (needs_config) c->required()->check(CLI::ExistingFile);
    sub->add_option("--out", o.out, "Output directory");
    sub->add_option("--seed", seed, "Override the configured seed");
    sub->add_flag("--quiet", o.quiet, "Suppress progress output");
  };
  auto* run = app.add_subcommand("run", "Evolve one configuration, write CSV diagnostics");
  auto* conv = app.add_subcommand("convergence", "Temporal and spatial error study");
  auto* scal = app.add_subcommand("scaling", "Scaling-law study");
  auto* pert = app.add_subcommand("perturb", "Two-trajectory difference-energy study");
  auto* inv = app.add_subcommand("invariants", "Property suite, pass/fail table");
  auto* cal = app.add_subcommand("calibrate", "Refit the frozen inequality constants");
  for (auto* s : {run, conv, scal, pert}) add_common(s, true);
  for (auto* s : {inv, cal}) add_common(s, false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : bwm::kExitUsage;
  }
  for (auto* s : {run, conv, scal, pert, inv, cal}) {
    if (s->count("--seed")) o.seed = seed;
  }

  try {
    if (*run) return cmd_run(o);
    if (*conv) return cmd_convergence(o);
    if (*scal) return cmd_scaling(o);
    if (*pert) return cmd_perturb(o);
    if (*inv) return cmd_invariants(o);
    if (*cal) return cmd_calibrate(o, cal->count("--out") > 0);
  } catch (const bwm::DiscreteBlowup& e) {
    std::cerr << "error: " << e.what() << "\n";
    return bwm::kExitBlowup;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return bwm::kExitUsage;
  }
  return bwm::kExitUsage;
}
