#include "patmg/config.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

namespace patmg {

namespace {

std::string trim(const std::string& s) {
  std::size_t a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  std::size_t b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

std::vector<double> split_numbers(const std::string& v, bool* ok) {
  std::vector<double> out;
  std::istringstream ss(v);
  std::string tok;
  *ok = true;
  while (ss >> tok) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(tok, &used));
      if (used != tok.size()) *ok = false;
    } catch (const std::exception&) {
      *ok = false;
    }
  }
  return out;
}

// Typed access into a parsed file; unknown keys, bad numbers and wrong arities
// are all collected instead of aborting at the first one.
struct Reader {
  const IniFile& ini;
  std::vector<std::string>& errors;
  std::map<std::string, std::set<std::string>> consumed;

  void fail(const std::string& sec, const std::string& key, const std::string& what) {
    errors.push_back("[" + sec + "] " + key + ": " + what);
  }

  const std::string* find(const std::string& sec, const std::string& key) {
    auto it = ini.sections.find(sec);
    if (it == ini.sections.end()) return nullptr;
    const std::string* last = nullptr;
    for (const auto& kv : it->second)
      if (kv.first == key) last = &kv.second;
    if (last) consumed[sec].insert(key);
    return last;
  }

  double num(const std::string& sec, const std::string& key, double dflt,
             bool required = false) {
    const std::string* v = find(sec, key);
    if (!v) {
      if (required) fail(sec, key, "missing");
      return dflt;
    }
    bool ok = false;
    auto nums = split_numbers(*v, &ok);
    if (!ok || nums.size() != 1) {
      fail(sec, key, "expected one number, got '" + *v + "'");
      return dflt;
    }
    return nums[0];
  }

  int integer(const std::string& sec, const std::string& key, int dflt, bool required = false) {
    double d = num(sec, key, dflt, required);
    if (d != std::floor(d)) {
      fail(sec, key, "expected an integer");
      return dflt;
    }
    return static_cast<int>(d);
  }

  bool flag(const std::string& sec, const std::string& key, bool dflt) {
    const std::string* v = find(sec, key);
    if (!v) return dflt;
    std::string s = *v;
    std::transform(s.begin(), s.end(), s.begin(),
                   [](unsigned char c) { return std::tolower(c); });
    if (s == "true" || s == "1" || s == "yes" || s == "on") return true;
    if (s == "false" || s == "0" || s == "no" || s == "off") return false;
    fail(sec, key, "expected a boolean, got '" + *v + "'");
    return dflt;
  }

  std::vector<double> numbers(const std::string& sec, const std::string& key, std::size_t n,
                              std::vector<double> dflt, bool required = false) {
    const std::string* v = find(sec, key);
    if (!v) {
      if (required) fail(sec, key, "missing");
      return dflt;
    }
    bool ok = false;
    auto nums = split_numbers(*v, &ok);
    if (!ok || nums.size() != n) {
      fail(sec, key, "expected " + std::to_string(n) + " numbers, got '" + *v + "'");
      return dflt;
    }
    return nums;
  }

  // every value of a repeated key, each parsed as `n` numbers
  std::vector<std::vector<double>> repeated(const std::string& sec, const std::string& key,
                                            std::size_t n) {
    std::vector<std::vector<double>> out;
    auto it = ini.sections.find(sec);
    if (it == ini.sections.end()) return out;
    consumed[sec].insert(key);
    for (const auto& kv : it->second) {
      if (kv.first != key) continue;
      bool ok = false;
      auto nums = split_numbers(kv.second, &ok);
      if (!ok || nums.size() != n)
        fail(sec, key, "expected " + std::to_string(n) + " numbers, got '" + kv.second + "'");
      else
        out.push_back(std::move(nums));
    }
    return out;
  }

  void check_unknown(const std::set<std::string>& known_sections) {
    for (const auto& [sec, kvs] : ini.sections) {
      if (!known_sections.count(sec)) {
        errors.push_back("[" + sec + "]: unknown section");
        continue;
      }
      const auto& used = consumed[sec];
      std::set<std::string> reported;
      for (const auto& kv : kvs)
        if (!used.count(kv.first) && reported.insert(kv.first).second)
          errors.push_back("[" + sec + "] " + kv.first + ": unknown key");
    }
  }
};

Grid read_grid(Reader& r, const std::string& sec, int* rank_out,
               std::vector<std::string>& errors) {
  Grid g;
  const std::string* dims = r.find(sec, "dims");
  int rank = 0;
  if (!dims) {
    errors.push_back("[" + sec + "] dims: missing");
  } else {
    bool ok = false;
    auto nums = split_numbers(*dims, &ok);
    if (!ok || nums.size() < 1 || nums.size() > 3) {
      errors.push_back("[" + sec + "] dims: expected 1-3 integers, got '" + *dims + "'");
    } else {
      rank = static_cast<int>(nums.size());
      g.rank = rank;
      for (int a = 0; a < rank; ++a) {
        if (nums[a] != std::floor(nums[a]))
          errors.push_back("[" + sec + "] dims: expected integers");
        g.dims[a] = static_cast<int>(nums[a]);
      }
    }
  }
  *rank_out = rank;
  double h = r.num(sec, "spacing", 0, true);
  for (int a = 0; a < 3; ++a) g.spacing[a] = h;
  g.pml_thickness = r.integer(sec, "pml_thickness", 0, true);
  g.pml_alpha_max = r.num(sec, "pml_alpha_max", 2.0);
  g.dt = r.num(sec, "dt", 0, true);
  g.nt = r.integer(sec, "nt", 0, true);
  g.c_ref = r.num(sec, "c_ref", 1500.0);
  return g;
}

}  // namespace

IniFile parse_ini(const std::string& text) {
  IniFile ini;
  std::istringstream ss(text);
  std::string line, section;
  int lineno = 0;
  std::vector<std::string> errors;
  while (std::getline(ss, line)) {
    ++lineno;
    std::size_t cut = line.find_first_of("#;");
    if (cut != std::string::npos) line = line.substr(0, cut);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') {
        errors.push_back("line " + std::to_string(lineno) + ": malformed section header");
        continue;
      }
      section = trim(line.substr(1, line.size() - 2));
      ini.sections[section];  // remember even if empty
      continue;
    }
    std::size_t eq = line.find('=');
    if (eq == std::string::npos) {
      errors.push_back("line " + std::to_string(lineno) + ": expected key = value");
      continue;
    }
    if (section.empty()) {
      errors.push_back("line " + std::to_string(lineno) + ": key before any [section]");
      continue;
    }
    ini.sections[section].emplace_back(trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
  }
  if (!errors.empty()) {
    std::string msg = "config syntax errors:";
    for (const auto& e : errors) msg += "\n  - " + e;
    throw ConfigError(msg);
  }
  return ini;
}

SensorArray ExperimentConfig::make_sensors() const {
  return make_arc_sensors(sensor_count, sensor_radius, {sensor_center[0], sensor_center[1]},
                          sensor_start_deg, sensor_span_deg);
}

std::uint64_t config_hash(const std::string& raw_text) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : raw_text) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

ExperimentConfig parse_experiment_config(const std::string& text) {
  IniFile ini = parse_ini(text);
  std::vector<std::string> errors;
  Reader r{ini, errors, {}};
  ExperimentConfig cfg;
  cfg.raw_text = text;

  for (const char* sec : {"grid", "sim_grid", "medium", "phantom", "sensors", "optim"})
    if (!ini.has_section(sec)) errors.push_back(std::string("[") + sec + "]: missing section");

  int rank = 0, sim_rank = 0;
  cfg.recon_grid = read_grid(r, "grid", &rank, errors);
  cfg.sim_grid = read_grid(r, "sim_grid", &sim_rank, errors);
  if (rank && sim_rank && rank != sim_rank)
    errors.push_back("[sim_grid] dims: rank differs from [grid]");
  if (rank == 0) rank = std::max(sim_rank, 2);

  auto vecd = [&](const std::string& sec, const std::string& key,
                  std::vector<double> dflt) -> std::array<double, 3> {
    auto nums = r.numbers(sec, key, static_cast<std::size_t>(rank), std::move(dflt));
    std::array<double, 3> out{0, 0, 0};
    for (int a = 0; a < rank && a < static_cast<int>(nums.size()); ++a) out[a] = nums[a];
    return out;
  };

  // medium / layered layout
  cfg.layout.center = vecd("medium", "center", std::vector<double>(rank, 0.0));
  cfg.layout.skin_outer_radius = r.num("medium", "skin_outer_radius", 0, true);
  cfg.layout.skin_thickness = r.num("medium", "skin_thickness", 0, true);
  cfg.layout.water_c = r.num("medium", "water_c0", cfg.layout.water_c);
  cfg.layout.water_rho = r.num("medium", "water_rho0", cfg.layout.water_rho);
  cfg.layout.skin_c = r.num("medium", "skin_c0", cfg.layout.skin_c);
  cfg.layout.skin_rho = r.num("medium", "skin_rho0", cfg.layout.skin_rho);
  cfg.layout.fat_c = r.num("medium", "fat_c0", cfg.layout.fat_c);
  cfg.layout.fat_rho = r.num("medium", "fat_rho0", cfg.layout.fat_rho);
  cfg.layout.alpha0_tissue = r.num("medium", "tissue_alpha0", cfg.layout.alpha0_tissue);
  cfg.layout.alpha0_water = r.num("medium", "water_alpha0", cfg.layout.alpha0_water);
  cfg.layout.y = r.num("medium", "alpha_power", cfg.layout.y);
  cfg.lossy = r.flag("medium", "lossy", true);
  cfg.smooth_media = r.flag("medium", "smooth", true);
  cfg.smooth_sources = r.flag("medium", "smooth_sources", true);

  // phantom: repeated `vessel` (capsules) and `disc` (balls) entries
  cfg.phantom.amplitude_max = r.num("phantom", "amplitude_max", 2.0);
  for (const auto& v : r.repeated("phantom", "vessel", 2 * rank + 2)) {
    CapsuleSpec c;
    for (int a = 0; a < rank; ++a) {
      c.a[a] = v[a];
      c.b[a] = v[rank + a];
    }
    c.radius = v[2 * rank];
    c.amplitude = v[2 * rank + 1];
    cfg.phantom.vessels.push_back(c);
  }
  for (const auto& v : r.repeated("phantom", "disc", rank + 2)) {
    BallSpec b;
    for (int a = 0; a < rank; ++a) b.center[a] = v[a];
    b.radius = v[rank];
    b.amplitude = v[rank + 1];
    cfg.phantom.discs.push_back(b);
  }
  if (cfg.phantom.vessels.empty() && cfg.phantom.discs.empty() && ini.has_section("phantom"))
    errors.push_back("[phantom]: needs at least one vessel or disc entry");

  // sensors
  cfg.sensor_count = r.integer("sensors", "count", 0, true);
  cfg.sensor_radius = r.num("sensors", "radius", 0, true);
  cfg.sensor_center = vecd("sensors", "center", std::vector<double>(rank, 0.0));
  cfg.sensor_start_deg = r.num("sensors", "start_deg", 0);
  cfg.sensor_span_deg = r.num("sensors", "span_deg", 180);

  // noise (optional section; absent -> clean data, unperturbed medium)
  cfg.has_noise = ini.has_section("noise");
  if (cfg.has_noise) {
    cfg.data_snr_db = r.num("noise", "data_snr_db", 30);
    cfg.perturb.snr_db = r.num("noise", "medium_snr_db", 35);
    cfg.perturb.interface_shift = r.num("noise", "interface_shift", 0);
    cfg.perturb.smooth = cfg.smooth_media;
    double s = r.num("noise", "seed", static_cast<double>(cfg.seed));
    cfg.seed = static_cast<std::uint64_t>(s);
  }

  // optimizer
  cfg.solve.lambda = r.num("optim", "lambda", cfg.solve.lambda);
  cfg.solve.max_iters = r.integer("optim", "max_iters", cfg.solve.max_iters);
  cfg.solve.eps_d = r.num("optim", "eps_d", cfg.solve.eps_d);
  cfg.solve.prox_iters = r.integer("optim", "prox_iters", cfg.solve.prox_iters);
  cfg.solve.step_scale = r.num("optim", "step_scale", cfg.solve.step_scale);
  cfg.solve.divergence_factor = r.num("optim", "divergence_factor", cfg.solve.divergence_factor);

  // multigrid (optional; defaults are usable)
  cfg.mg.kappa = r.num("mg", "kappa", cfg.mg.kappa);
  cfg.mg.vartheta = r.num("mg", "vartheta", cfg.mg.vartheta);
  cfg.mg.q_d = r.integer("mg", "q_d", cfg.mg.q_d);
  cfg.mg.q_c = r.integer("mg", "q_c", cfg.mg.q_c);
  cfg.mg.eps_c = r.num("mg", "eps_c", cfg.mg.eps_c);
  cfg.mg.rho_tv = r.num("mg", "rho_tv", cfg.mg.rho_tv);
  cfg.mg.coarse_step_scale = r.num("mg", "coarse_step_scale", cfg.mg.coarse_step_scale);
  cfg.mg.base = cfg.solve;

  r.check_unknown({"grid", "sim_grid", "medium", "phantom", "sensors", "noise", "optim", "mg"});

  // semantic validation on top of the per-key parses
  auto try_validate = [&](const char* what, auto&& fn) {
    try {
      fn();
    } catch (const std::exception& e) {
      errors.push_back(std::string(what) + ": " + e.what());
    }
  };
  if (errors.empty()) {
    try_validate("[grid]", [&] { cfg.recon_grid.validate(); });
    try_validate("[sim_grid]", [&] { cfg.sim_grid.validate(); });
    try_validate("[optim]", [&] { cfg.solve.validate(); });
    if (cfg.sensor_count < 2) errors.push_back("[sensors] count: need at least 2");
    if (cfg.layout.skin_thickness > cfg.layout.skin_outer_radius)
      errors.push_back("[medium] skin_thickness: exceeds skin_outer_radius");
    if (!(cfg.layout.y > 1.0 && cfg.layout.y < 3.0) || cfg.layout.y == 2.0)
      errors.push_back("[medium] alpha_power: must lie in (1,3) and differ from 2");
    // inverse-crime guard: generating data on the inversion grid is forbidden
    bool same = cfg.recon_grid.rank == cfg.sim_grid.rank &&
                cfg.recon_grid.spacing == cfg.sim_grid.spacing &&
                cfg.recon_grid.pml_thickness == cfg.sim_grid.pml_thickness;
    for (int a = 0; same && a < cfg.recon_grid.rank; ++a)
      same = cfg.recon_grid.dims[a] == cfg.sim_grid.dims[a];
    if (same)
      errors.push_back(
          "[sim_grid]: identical to [grid]; simulation must use a different discretization");
    // measurements are sampled on the shared (dt, nt) time grid
    if (cfg.recon_grid.dt != cfg.sim_grid.dt)
      errors.push_back("[sim_grid] dt: must equal [grid] dt (shared sensor sampling)");
    if (cfg.recon_grid.nt != cfg.sim_grid.nt)
      errors.push_back("[sim_grid] nt: must equal [grid] nt (shared sensor sampling)");
    // interior physical extents must agree so sensors/phantoms mean the same thing
    for (int a = 0; a < std::min(cfg.recon_grid.rank, cfg.sim_grid.rank); ++a) {
      double er = cfg.recon_grid.interior_extent(a), es = cfg.sim_grid.interior_extent(a);
      if (std::abs(er - es) > 1e-9 * std::max(er, es))
        errors.push_back("[sim_grid]: interior extent along axis " + std::to_string(a) +
                         " differs from [grid] (" + std::to_string(es) + " vs " +
                         std::to_string(er) + " m)");
    }
  }

  if (!errors.empty()) {
    std::string msg = "invalid experiment config:";
    for (const auto& e : errors) msg += "\n  - " + e;
    throw ConfigError(msg);
  }
  return cfg;
}

ExperimentConfig load_experiment_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open config file: " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_experiment_config(ss.str());
}

}  // namespace patmg
