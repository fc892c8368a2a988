#pragma once
#include <filesystem>
#include <string>
#include <vector>

#include "patmg/config.hpp"
#include "patmg/io.hpp"
#include "patmg/multigrid.hpp"

namespace patmg {

// Batch experiment drivers shared by the command-line tool and the tests.
// Each writes a self-describing directory with a manifest sufficient to
// reproduce the run (config copy, seed, hashes).

struct SimulateResult {
  std::filesystem::path bundle_dir;
  std::uint64_t data_hash = 0;  // hash of the (possibly noisy) measurement file
};

// Phantom + true layered medium on the simulation grid -> sensor data.
// Writes phantom.fld, medium_*.fld, data.fld (+ data_clean.fld when noise is
// on), a preview PNG and manifest.json into out_dir.
SimulateResult run_simulate(const ExperimentConfig& cfg, const std::filesystem::path& out_dir);

struct ReconstructOptions {
  std::string algo = "fista";  // tr | ista | fista | mg-ista | mg-fista
  std::string cache_dir;       // power-iteration cache; empty disables
};

struct ReconstructResult {
  Field image;  // reconstruction-grid interior image
  std::vector<IterationRecord> records;
  std::string stop_reason;  // "tolerance" | "max-iters" | "diverged" | "tr"
  MgStats mg_stats;         // populated for mg-* algorithms
  double lipschitz = 0;
  bool cache_hit = false;
  double f_initial = 0;  // objective at the zero start (iterative algorithms)
  double re_final = std::numeric_limits<double>::quiet_NaN();
};

// Reads a simulate bundle, builds the (perturbed) reconstruction operator, and
// runs the requested algorithm. Writes image.fld/.png, records.csv and
// manifest.json into out_dir.
ReconstructResult run_reconstruct(const ExperimentConfig& cfg,
                                  const std::filesystem::path& bundle_dir,
                                  const std::filesystem::path& out_dir,
                                  const ReconstructOptions& opt);

// Merges >= 2 reconstruction result directories that share a data bundle:
// merged.csv, objective/residual/error-vs-cpu plots (recursive steps marked),
// and summary.json with final metrics and time-to-target ratios.
// Returns the rendered text table.
std::string run_compare(const std::vector<std::filesystem::path>& result_dirs,
                        const std::filesystem::path& out_dir);

std::uint64_t bytes_hash(const void* p, std::size_t n);  // FNV-1a

}  // namespace patmg
