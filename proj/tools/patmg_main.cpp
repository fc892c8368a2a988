#include <cmath>
#include <cstdlib>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "patmg/experiment.hpp"
#include "patmg/fft.hpp"

using namespace patmg;

namespace {

// exit codes: 0 ok, 2 config/validation error, 3 numerical divergence
constexpr int kExitConfig = 2;
constexpr int kExitDiverged = 3;

std::string default_cache_dir(const std::string& bundle) {
  if (const char* env = std::getenv("PATMG_CACHE_DIR")) return env;
  return (std::filesystem::path(bundle) / "lf-cache").string();
}

void apply_threads(int threads) {
  if (threads > 1 && !set_fft_threads(threads))
    std::cerr << "warning: built without FFT threading; --threads ignored\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"photoacoustic tomography: simulation, reconstruction and comparison"};
  app.require_subcommand(1);

  std::string config_path, out_dir, bundle_dir, algo = "fista";
  std::vector<std::string> dirs;
  long long seed = -1;
  int max_iters = -1;
  int threads = 1;

  CLI::App* sim = app.add_subcommand("simulate", "generate sensor data from the configured phantom");
  sim->add_option("--config", config_path, "experiment file")->required();
  sim->add_option("--out", out_dir, "bundle output directory")->required();
  sim->add_option("--seed", seed, "override the config seed");
  sim->add_option("--threads", threads, "FFT threads");

  CLI::App* rec = app.add_subcommand("reconstruct", "invert a data bundle");
  rec->add_option("--config", config_path, "experiment file")->required();
  rec->add_option("--bundle", bundle_dir, "simulate output directory")->required();
  rec->add_option("--out", out_dir, "result output directory")->required();
  rec->add_option("--algo", algo, "tr | ista | fista | mg-ista | mg-fista");
  rec->add_option("--seed", seed, "override the config seed");
  rec->add_option("--max-iters", max_iters, "override the iteration cap");
  rec->add_option("--threads", threads, "FFT threads");

  CLI::App* cmp = app.add_subcommand("compare", "merge result directories into plots and a table");
  cmp->add_option("dirs", dirs, "two or more result directories")->expected(-2);
  cmp->add_option("--out", out_dir, "comparison output directory")->required();

  CLI::App* dflt = app.add_subcommand("defaults", "print the default solver settings");

  CLI11_PARSE(app, argc, argv);

  try {
    if (dflt->parsed()) {
      SolveOptions s;
      MgOptions m;
      std::cout << "[optim]\nlambda = " << s.lambda << "\nmax_iters = " << s.max_iters
                << "\neps_d = " << s.eps_d << "\nprox_iters = " << s.prox_iters
                << "\nstep_scale = " << s.step_scale
                << "\ndivergence_factor = " << s.divergence_factor << "\n\n[mg]\nkappa = "
                << m.kappa << "\nvartheta = " << m.vartheta << "\nq_d = " << m.q_d
                << "\nq_c = " << m.q_c << "\neps_c = " << m.eps_c << "\nrho_tv = " << m.rho_tv
                << "\ncoarse_step_scale = " << m.coarse_step_scale << "\n";
      return 0;
    }
    if (cmp->parsed()) {
      std::cout << run_compare({dirs.begin(), dirs.end()}, out_dir);
      return 0;
    }

    apply_threads(threads);
    ExperimentConfig cfg = load_experiment_config(config_path);
    if (seed >= 0) cfg.seed = static_cast<std::uint64_t>(seed);
    if (max_iters > 0) {
      cfg.solve.max_iters = max_iters;
      cfg.mg.base.max_iters = max_iters;
    }

    if (sim->parsed()) {
      SimulateResult r = run_simulate(cfg, out_dir);
      std::cout << "bundle written to " << r.bundle_dir.string() << "\n";
      return 0;
    }

    ReconstructOptions ropt;
    ropt.algo = algo;
    ropt.cache_dir = default_cache_dir(bundle_dir);
    ReconstructResult r = run_reconstruct(cfg, bundle_dir, out_dir, ropt);
    std::cout << algo << ": " << r.records.size() << " records, stop=" << r.stop_reason;
    if (!r.records.empty())
      std::cout << ", F=" << r.records.back().F << ", cpu=" << r.records.back().cpu_seconds
                << "s";
    if (std::isfinite(r.re_final)) std::cout << ", RE=" << r.re_final << "%";
    std::cout << "\nresults written to " << out_dir << "\n";
    return r.stop_reason == "diverged" ? kExitDiverged : 0;
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const DivergenceError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitDiverged;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
