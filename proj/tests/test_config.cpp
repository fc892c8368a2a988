#include <doctest.h>

#include <string>

#include "patmg/config.hpp"

using namespace patmg;
using doctest::Approx;

namespace {

// minimal consistent experiment: 4.8 mm interior on both grids
const char* kGood = R"(
# tiny smoke experiment
[grid]
dims = 36 36
spacing = 2e-4
pml_thickness = 6
dt = 2.5e-8
nt = 160
c_ref = 1500

[sim_grid]
dims = 48 48                ; finer discretization of the same box
spacing = 1.3333333333333333e-4
pml_thickness = 6
dt = 2.5e-8
nt = 160
c_ref = 1500

[medium]
center = 2.4e-3 2.4e-3
skin_outer_radius = 1.8e-3
skin_thickness = 3e-4
lossy = true
smooth = true

[phantom]
amplitude_max = 2.0
vessel = 1.2e-3 2.4e-3 3.6e-3 2.4e-3 2e-4 1.0
disc = 2.4e-3 1.4e-3 3e-4 1.0
disc = 2.4e-3 3.4e-3 3e-4 0.8

[sensors]
count = 24
radius = 2.0e-3
center = 2.4e-3 2.4e-3
start_deg = -90
span_deg = 180

[noise]
data_snr_db = 30
medium_snr_db = 35
interface_shift = 3.6e-5
seed = 42

[optim]
lambda = 1e-2
max_iters = 8
eps_d = 1e-3

[mg]
kappa = 0.25
q_c = 8
)";

}  // namespace

TEST_CASE("a complete experiment file parses into the expected settings") {
  ExperimentConfig c = parse_experiment_config(kGood);
  CHECK(c.recon_grid.dims[0] == 36);
  CHECK(c.recon_grid.pml_thickness == 6);
  CHECK(c.recon_grid.interior_dim(0) == 24);
  CHECK(c.sim_grid.interior_dim(0) == 36);
  CHECK(c.recon_grid.interior_extent(0) == Approx(c.sim_grid.interior_extent(0)));
  CHECK(c.layout.skin_outer_radius == Approx(1.8e-3));
  CHECK(c.phantom.vessels.size() == 1);
  CHECK(c.phantom.discs.size() == 2);  // repeated keys accumulate
  CHECK(c.phantom.vessels[0].b[0] == Approx(3.6e-3));
  CHECK(c.sensor_count == 24);
  CHECK(c.has_noise);
  CHECK(c.seed == 42);
  CHECK(c.data_snr_db == Approx(30));
  CHECK(c.perturb.snr_db == Approx(35));
  CHECK(c.solve.max_iters == 8);
  CHECK(c.mg.base.max_iters == 8);  // solver settings propagate to the mg driver
  CHECK(c.mg.kappa == Approx(0.25));
  SensorArray s = c.make_sensors();
  CHECK(s.count() == 24);
}

TEST_CASE("comments and blank lines are ignored") {
  IniFile ini = parse_ini("# c1\n\n[a]\nx = 1 ; tail\n; full line\nk = v\n");
  REQUIRE(ini.has_section("a"));
  CHECK(ini.sections["a"].size() == 2);
  CHECK(ini.sections["a"][0].second == "1");
}

TEST_CASE("syntax problems are reported with line numbers") {
  CHECK_THROWS_AS(parse_ini("[a\nx = 1\n"), ConfigError);
  CHECK_THROWS_AS(parse_ini("x = 1\n"), ConfigError);  // key before any section
  try {
    parse_ini("[a]\nnonsense line\nanother bad one\n");
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    std::string m = e.what();
    CHECK(m.find("line 2") != std::string::npos);
    CHECK(m.find("line 3") != std::string::npos);
  }
}

TEST_CASE("validation lists every violation in one message") {
  std::string bad = kGood;
  // same grid twice -> inverse-crime guard; also break two scalar fields
  auto pos = bad.find("dims = 48 48");
  bad.replace(pos, 12, "dims = 36 36");
  pos = bad.find("spacing = 1.3333333333333333e-4");
  bad.replace(pos, 31, "spacing = 2e-4");
  pos = bad.find("count = 24");
  bad.replace(pos, 10, "count = 1");
  try {
    parse_experiment_config(bad);
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    std::string m = e.what();
    CHECK(m.find("identical to [grid]") != std::string::npos);
    CHECK(m.find("[sensors] count") != std::string::npos);
  }
}

TEST_CASE("unknown keys and sections are flagged") {
  std::string bad = std::string(kGood) + "\n[grid]\nwombat = 3\n\n[zoo]\nx = 1\n";
  try {
    parse_experiment_config(bad);
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    std::string m = e.what();
    CHECK(m.find("wombat") != std::string::npos);
    CHECK(m.find("[zoo]") != std::string::npos);
  }
}

TEST_CASE("missing required keys surface as errors, not defaults") {
  std::string bad = kGood;
  auto pos = bad.find("spacing = 2e-4");
  bad.replace(pos, 14, "");
  try {
    parse_experiment_config(bad);
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("[grid] spacing: missing") != std::string::npos);
  }
}

TEST_CASE("mismatched interior extents are rejected") {
  std::string bad = kGood;
  auto pos = bad.find("spacing = 1.3333333333333333e-4");
  bad.replace(pos, 31, "spacing = 1.5e-4");  // 36 * 1.5e-4 != 24 * 2e-4
  try {
    parse_experiment_config(bad);
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("interior extent") != std::string::npos);
  }
}

TEST_CASE("omitting the noise section turns all perturbations off") {
  std::string clean = kGood;
  auto a = clean.find("[noise]");
  auto b = clean.find("[optim]");
  clean.erase(a, b - a);
  ExperimentConfig c = parse_experiment_config(clean);
  CHECK_FALSE(c.has_noise);
}

TEST_CASE("config hash is stable and content-sensitive") {
  CHECK(config_hash("abc") == config_hash("abc"));
  CHECK(config_hash("abc") != config_hash("abd"));
}
