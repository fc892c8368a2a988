#include "patmg/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <random>
#include <sstream>

#include "patmg/evaluation.hpp"
#include "patmg/plot.hpp"
#include "patmg/png.hpp"
#include "patmg/spectral.hpp"

namespace patmg {

namespace {

constexpr const char* kVersion = "0.1.0";

nlohmann::json grid_json(const Grid& g) {
  nlohmann::json j;
  j["dims"] = std::vector<int>(g.dims.begin(), g.dims.begin() + g.rank);
  j["spacing"] = g.spacing[0];
  j["pml_thickness"] = g.pml_thickness;
  j["pml_alpha_max"] = g.pml_alpha_max;
  j["dt"] = g.dt;
  j["nt"] = g.nt;
  j["c_ref"] = g.c_ref;
  return j;
}

std::uint64_t field_hash(const Field& f) {
  return bytes_hash(f.data(), f.size() * sizeof(double));
}

std::uint64_t sensor_data_hash(const SensorData& d) {
  return bytes_hash(d.samples.data(), d.samples.size() * sizeof(double));
}

std::string hex64(std::uint64_t h) {
  char buf[20];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

Medium build_true_medium(const ExperimentConfig& cfg, const Grid& g) {
  Medium m = make_layered_medium(g, cfg.layout);
  if (cfg.smooth_media) smooth_medium(m);
  return m;
}

Medium build_recon_medium(const ExperimentConfig& cfg, const Grid& g) {
  if (!cfg.has_noise) return build_true_medium(cfg, g);
  std::mt19937_64 rng(cfg.seed ^ 0x6d656469756dull);  // distinct stream from data noise
  return make_perturbed_medium(g, cfg.layout, cfg.perturb, rng);
}

WaveOptions wave_options(const ExperimentConfig& cfg) {
  WaveOptions o;
  o.path = cfg.lossy ? AbsorptionPath::automatic : AbsorptionPath::force_lossless;
  return o;
}

void write_preview(const std::filesystem::path& path, const Field& img, Colormap cm,
                   double vmin, double vmax) {
  if (img.rank() > 2) {
    write_field_png(path, visualize_image(img), 0, 2, cm);
  } else {
    write_field_png(path, img, vmin, vmax, cm);
  }
}

}  // namespace

std::uint64_t bytes_hash(const void* p, std::size_t n) {
  const unsigned char* b = static_cast<const unsigned char*>(p);
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (std::size_t i = 0; i < n; ++i) {
    h ^= b[i];
    h *= 0x100000001b3ull;
  }
  return h;
}

SimulateResult run_simulate(const ExperimentConfig& cfg, const std::filesystem::path& out_dir) {
  namespace fs = std::filesystem;
  fs::create_directories(out_dir);

  const Grid& g = cfg.sim_grid;
  Medium med = build_true_medium(cfg, g);
  Field phantom = make_phantom(g, cfg.phantom);
  SensorArray sensors = cfg.make_sensors();

  ForwardOperator H(g, med, sensors, cfg.smooth_sources, wave_options(cfg));
  SensorData data = H.forward(phantom);

  nlohmann::json side;
  side["grid"] = grid_json(g);
  write_field(out_dir / "phantom.fld", phantom, side);
  write_preview(out_dir / "phantom.png", phantom, Colormap::hot, 0, cfg.phantom.amplitude_max);
  write_field(out_dir / "medium_c0.fld", med.c0, side);
  write_field(out_dir / "medium_rho0.fld", med.rho0, side);
  write_field(out_dir / "medium_alpha0.fld", med.alpha0, side);

  if (cfg.has_noise) {
    write_sensor_data(out_dir / "data_clean.fld", data);
    std::mt19937_64 rng(cfg.seed);
    add_awgn(data, cfg.data_snr_db, rng);
  }
  write_sensor_data(out_dir / "data.fld", data);

  SimulateResult res;
  res.bundle_dir = out_dir;
  res.data_hash = sensor_data_hash(data);

  nlohmann::json man;
  man["kind"] = "bundle";
  man["version"] = kVersion;
  man["config"] = cfg.raw_text;
  man["config_hash"] = hex64(config_hash(cfg.raw_text));
  man["seed"] = cfg.seed;
  man["sim_grid"] = grid_json(g);
  man["recon_grid"] = grid_json(cfg.recon_grid);
  man["noisy"] = cfg.has_noise;
  man["data_snr_db"] = cfg.has_noise ? cfg.data_snr_db : 0.0;
  man["num_sensors"] = sensors.count();
  man["data_hash"] = hex64(res.data_hash);
  man["phantom_hash"] = hex64(field_hash(phantom));
  write_json(out_dir / "manifest.json", man);
  return res;
}

ReconstructResult run_reconstruct(const ExperimentConfig& cfg,
                                  const std::filesystem::path& bundle_dir,
                                  const std::filesystem::path& out_dir,
                                  const ReconstructOptions& opt) {
  namespace fs = std::filesystem;
  static const std::vector<std::string> algos = {"tr", "ista", "fista", "mg-ista", "mg-fista"};
  if (std::find(algos.begin(), algos.end(), opt.algo) == algos.end())
    throw ConfigError("unknown algorithm '" + opt.algo + "' (tr|ista|fista|mg-ista|mg-fista)");

  nlohmann::json bundle_man = read_json(bundle_dir / "manifest.json");
  SensorData data = read_sensor_data(bundle_dir / "data.fld");
  const std::uint64_t data_hash = sensor_data_hash(data);
  if (bundle_man.contains("data_hash") &&
      bundle_man["data_hash"].get<std::string>() != hex64(data_hash))
    throw std::runtime_error("bundle corrupt: data.fld does not match its manifest hash");

  const Grid& g = cfg.recon_grid;
  if (data.nt != g.nt || std::abs(data.dt - g.dt) > 1e-15 * g.dt)
    throw ConfigError("bundle/config geometry mismatch: data has nt=" + std::to_string(data.nt) +
                      " dt=" + std::to_string(data.dt) + ", config grid nt=" +
                      std::to_string(g.nt) + " dt=" + std::to_string(g.dt));
  SensorArray sensors = cfg.make_sensors();
  if (data.num_sensors != sensors.count())
    throw ConfigError("bundle/config geometry mismatch: " + std::to_string(data.num_sensors) +
                      " sensors in data, " + std::to_string(sensors.count()) + " in config");

  // ground truth (if present) for the relative-error metric
  Field truth;
  Grid truth_grid;
  bool have_truth = fs::exists(bundle_dir / "phantom.fld");
  if (have_truth) {
    truth = read_field(bundle_dir / "phantom.fld");
    nlohmann::json side = read_sidecar(bundle_dir / "phantom.fld");
    const auto& gj = side.at("grid");
    truth_grid = cfg.sim_grid;  // same file the bundle was generated from
    std::vector<int> dims = gj.at("dims").get<std::vector<int>>();
    bool match = static_cast<int>(dims.size()) == cfg.sim_grid.rank;
    for (std::size_t a = 0; match && a < dims.size(); ++a)
      match = dims[a] == cfg.sim_grid.dims[a];
    if (!match) have_truth = false;  // bundle from some other config; skip RE
  }

  fs::create_directories(out_dir);
  Medium med = build_recon_medium(cfg, g);
  ForwardOperator H(g, med, sensors, cfg.smooth_sources, wave_options(cfg));

  SolveContext ctx;
  ctx.H = &H;
  ctx.data = &data;
  if (have_truth)
    ctx.re_metric = [&](const Field& x) {
      return relative_error_percent(x, g, truth, truth_grid);
    };

  ReconstructResult res;
  SolveOptions sopt = cfg.solve;

  if (opt.algo == "tr") {
    const double t0 = pg_detail::cpu_seconds();
    res.image = H.time_reversal(data);
    IterationRecord rec;
    rec.k = 0;
    rec.kind = "tr";
    rec.cpu_seconds = pg_detail::cpu_seconds() - t0;
    SensorData Hx = H.forward(res.image);
    double r2 = 0;
    for (std::size_t i = 0; i < Hx.samples.size(); ++i) {
      const double d = Hx.samples[i] - data.samples[i];
      r2 += d * d;
    }
    rec.RES = std::sqrt(r2);
    // the baseline is unconstrained, so report the smooth part of the objective
    rec.F = 0.5 * r2 + sopt.lambda * tv_value(res.image);
    if (ctx.re_metric) rec.RE = ctx.re_metric(res.image);
    res.records.push_back(rec);
    res.stop_reason = "tr";
  } else {
    bool cache_hit = false;
    PowerResult pw = estimate_lipschitz_cached(H, opt.cache_dir, 15, 1e-3,
                                               0x2545f4914f6cdd1dull, &cache_hit);
    res.lipschitz = pw.L;
    res.cache_hit = cache_hit;
    ctx.lipschitz = pw.L;
    sopt.momentum = (opt.algo == "fista" || opt.algo == "mg-fista");

    SolveResult sol;
    if (opt.algo == "ista" || opt.algo == "fista") {
      sol = proximal_gradient_solve(ctx, sopt);
    } else {
      Grid gc = coarsen_grid(g);
      Medium mc = coarsen_medium(med);
      ForwardOperator Hc(gc, mc, sensors, cfg.smooth_sources, wave_options(cfg));
      SensorData data_c = restrict_data(data);
      bool chit = false;
      PowerResult pwc = estimate_lipschitz_cached(Hc, opt.cache_dir, 15, 1e-3,
                                                  0x2545f4914f6cdd1dull, &chit);
      SolveContext cctx;
      cctx.H = &Hc;
      cctx.data = &data_c;
      cctx.lipschitz = pwc.L;
      MgOptions mopt = cfg.mg;
      mopt.base = sopt;
      sol = mg_solve(ctx, cctx, mopt, &res.mg_stats);
    }
    res.image = std::move(sol.x);
    res.records = std::move(sol.records);
    res.stop_reason = sol.stop_reason;
    res.f_initial = sol.f_initial;
  }
  if (ctx.re_metric) res.re_final = ctx.re_metric(res.image);

  nlohmann::json side;
  side["grid"] = grid_json(g);
  write_field(out_dir / "image.fld", res.image, side);
  write_preview(out_dir / "image.png", visualize_image(res.image), Colormap::hot, 0, 2);
  write_records_csv(out_dir / "records.csv", res.records);

  nlohmann::json man;
  man["kind"] = "result";
  man["version"] = kVersion;
  man["algo"] = opt.algo;
  man["config"] = cfg.raw_text;
  man["config_hash"] = hex64(config_hash(cfg.raw_text));
  man["seed"] = cfg.seed;
  man["bundle"] = bundle_dir.string();
  man["data_hash"] = hex64(data_hash);
  man["stop_reason"] = res.stop_reason;
  man["lipschitz"] = res.lipschitz;
  man["lipschitz_cache_hit"] = res.cache_hit;
  man["re_final"] = std::isfinite(res.re_final) ? nlohmann::json(res.re_final)
                                                : nlohmann::json(nullptr);
  if (!res.records.empty()) {
    man["f_final"] = res.records.back().F;
    man["cpu_seconds"] = res.records.back().cpu_seconds;
  }
  if (opt.algo.rfind("mg-", 0) == 0) {
    man["mg_recursions"] = res.mg_stats.recursions;
    man["mg_coarse_iters"] = res.mg_stats.coarse_iters;
    man["mg_gate_ratios"] = res.mg_stats.gate_ratios;
    man["mg_max_coherence_mismatch"] = res.mg_stats.max_coherence_mismatch;
    man["mg_min_iterate"] = res.mg_stats.min_iterate;
  }
  write_json(out_dir / "manifest.json", man);
  return res;
}

std::string run_compare(const std::vector<std::filesystem::path>& result_dirs,
                        const std::filesystem::path& out_dir) {
  namespace fs = std::filesystem;
  if (result_dirs.size() < 2)
    throw ConfigError("compare needs at least two result directories");

  struct Run {
    std::string algo;
    std::string data_hash;
    std::vector<IterationRecord> records;
  };
  std::vector<Run> runs;
  for (const auto& dir : result_dirs) {
    Run r;
    nlohmann::json man = read_json(dir / "manifest.json");
    r.algo = man.at("algo").get<std::string>();
    r.data_hash = man.value("data_hash", "");
    r.records = read_records_csv(dir / "records.csv");
    runs.push_back(std::move(r));
  }
  for (const auto& r : runs)
    if (r.data_hash != runs[0].data_hash)
      throw std::runtime_error("incompatible experiments: result directories were produced from "
                               "different data bundles (hash mismatch)");

  fs::create_directories(out_dir);

  // merged per-iteration table
  {
    std::ofstream out(out_dir / "merged.csv");
    out << "algo,k,kind,cpu_seconds,F,RES,RE\n";
    out.precision(17);
    for (const auto& r : runs)
      for (const auto& rec : r.records) {
        out << r.algo << ',' << rec.k << ',' << rec.kind << ',' << rec.cpu_seconds << ','
            << rec.F << ',' << rec.RES << ',';
        if (std::isfinite(rec.RE)) out << rec.RE;
        out << '\n';
      }
  }

  const std::array<std::array<unsigned char, 3>, 6> palette = {{{31, 119, 180},
                                                                {214, 39, 40},
                                                                {44, 160, 44},
                                                                {148, 103, 189},
                                                                {255, 127, 14},
                                                                {23, 190, 207}}};
  auto make_plot = [&](const char* fname, const char* ylab, auto value, bool logy) {
    std::vector<PlotSeries> series;
    bool any = false;
    for (std::size_t i = 0; i < runs.size(); ++i) {
      PlotSeries s;
      s.label = runs[i].algo;
      s.color = palette[i % palette.size()];
      s.marker = Marker::none;
      PlotSeries rec_marks;  // recursive steps drawn as stars on top of the line
      rec_marks.label = runs[i].algo + " recursive";
      rec_marks.color = s.color;
      rec_marks.line = false;
      rec_marks.marker = Marker::star;
      for (const auto& r : runs[i].records) {
        const double v = value(r);
        if (std::isfinite(v)) any = true;
        s.x.push_back(r.cpu_seconds);
        s.y.push_back(v);
        if (r.kind == "recursive") {
          rec_marks.x.push_back(r.cpu_seconds);
          rec_marks.y.push_back(v);
        }
      }
      series.push_back(std::move(s));
      if (!rec_marks.x.empty()) series.push_back(std::move(rec_marks));
    }
    if (!any) return false;
    write_line_plot(out_dir / fname, series, "cpu seconds", ylab, logy);
    return true;
  };

  make_plot("plot_F.png", "objective", [](const IterationRecord& r) { return r.F; }, true);
  make_plot("plot_RES.png", "residual", [](const IterationRecord& r) { return r.RES; }, true);
  bool have_re =
      make_plot("plot_RE.png", "relative error (%)",
                [](const IterationRecord& r) { return r.RE; }, false);

  // time-to-target ratios: fixed-grid final F as the target for its mg variant
  nlohmann::json summary;
  std::ostringstream table;
  table << "algo        iters  cpu_s      final_F        final_RES      final_RE\n";
  auto find_run = [&](const std::string& a) -> const Run* {
    for (const auto& r : runs)
      if (r.algo == a) return &r;
    return nullptr;
  };
  for (const auto& r : runs) {
    if (r.records.empty()) continue;
    const auto& last = r.records.back();
    nlohmann::json j;
    j["iters"] = last.k;
    j["cpu_seconds"] = last.cpu_seconds;
    j["final_F"] = last.F;
    j["final_RES"] = last.RES;
    if (std::isfinite(last.RE)) j["final_RE"] = last.RE;
    summary["runs"][r.algo] = j;
    char line[160];
    std::snprintf(line, sizeof line, "%-11s %-6d %-10.3g %-14.8g %-14.8g ", r.algo.c_str(),
                  last.k, last.cpu_seconds, last.F, last.RES);
    table << line;
    if (std::isfinite(last.RE)) {
      std::snprintf(line, sizeof line, "%.4g%%", last.RE);
      table << line;
    }
    table << '\n';
  }
  for (const auto& [fixed, mg] :
       std::vector<std::pair<std::string, std::string>>{{"ista", "mg-ista"},
                                                        {"fista", "mg-fista"}}) {
    const Run* rf = find_run(fixed);
    const Run* rm = find_run(mg);
    if (!rf || !rm || rf->records.empty() || rm->records.empty()) continue;
    const double target = rf->records.back().F;
    const double fixed_cpu = rf->records.back().cpu_seconds;
    double mg_cpu = std::numeric_limits<double>::quiet_NaN();
    for (const auto& rec : rm->records)
      if (rec.F <= target) {
        mg_cpu = rec.cpu_seconds;
        break;
      }
    nlohmann::json j;
    j["target_F"] = target;
    j["fixed_cpu_seconds"] = fixed_cpu;
    if (std::isfinite(mg_cpu)) {
      j["mg_cpu_seconds_to_target"] = mg_cpu;
      j["speedup"] = fixed_cpu / mg_cpu;
      char line[160];
      std::snprintf(line, sizeof line,
                    "time-to-target %s vs %s: %.3gs vs %.3gs, speedup %.2fx\n", mg.c_str(),
                    fixed.c_str(), mg_cpu, fixed_cpu, fixed_cpu / mg_cpu);
      table << line;
    } else {
      j["mg_cpu_seconds_to_target"] = nullptr;
      table << mg << " never reached the " << fixed << " target objective\n";
    }
    summary["time_to_target"][mg] = j;
  }
  if (!have_re) table << "(no ground truth in these runs; RE plot skipped)\n";
  write_json(out_dir / "summary.json", summary);
  return table.str();
}

}  // namespace patmg
