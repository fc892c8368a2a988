#pragma once
#include <cstdint>
#include <filesystem>
#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "patmg/grid.hpp"
#include "patmg/measurement.hpp"
#include "patmg/multigrid.hpp"
#include "patmg/optim.hpp"

namespace patmg {

// Raised on any experiment-file problem; the message lists every violation
// found, one per line.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Minimal INI: [section] headers, key = value lines, '#'/';' comments.
// Repeated keys are kept in order (shape lists rely on this).
struct IniFile {
  std::map<std::string, std::vector<std::pair<std::string, std::string>>> sections;
  bool has_section(const std::string& s) const { return sections.count(s) != 0; }
};

IniFile parse_ini(const std::string& text);

// One file fully determines an experiment: both grids, the layered medium,
// the source phantom, the sensor arc, noise, and solver settings.
struct ExperimentConfig {
  Grid recon_grid;  // reconstruction / inversion grid
  Grid sim_grid;    // data-generation grid; must differ from recon_grid
  TissueLayout layout;
  bool lossy = true;
  bool smooth_media = true;    // anti-alias the acoustic maps
  bool smooth_sources = true;  // anti-alias initial pressure inside H
  PhantomSpec phantom;

  int sensor_count = 0;
  double sensor_radius = 0;
  std::array<double, 3> sensor_center{0, 0, 0};
  double sensor_start_deg = 0;
  double sensor_span_deg = 180;

  bool has_noise = false;  // [noise] section present
  double data_snr_db = 30;
  MediumPerturbation perturb;
  std::uint64_t seed = 1234;

  SolveOptions solve;
  MgOptions mg;  // mg.base is filled from `solve` at load time

  std::string raw_text;  // verbatim file contents, for manifests

  SensorArray make_sensors() const;
};

// Parses and validates; throws ConfigError with *all* violations listed.
ExperimentConfig load_experiment_config(const std::filesystem::path& path);
ExperimentConfig parse_experiment_config(const std::string& text);

// FNV-1a of the raw file text, for manifest identity checks.
std::uint64_t config_hash(const std::string& raw_text);

}  // namespace patmg
