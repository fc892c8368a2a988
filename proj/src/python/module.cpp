// python surface: numpy in/out wrappers around the reconstruction engine
#include <pybind11/functional.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <cstring>

#include "patmg/evaluation.hpp"
#include "patmg/io.hpp"
#include "patmg/multigrid.hpp"
#include "patmg/optim.hpp"
#include "patmg/spectral.hpp"
#include "patmg/wave.hpp"

namespace py = pybind11;
using namespace patmg;

namespace {

using DoubleArray = py::array_t<double, py::array::c_style | py::array::forcecast>;

Field to_field(const DoubleArray& a) {
  if (a.ndim() < 1 || a.ndim() > 3)
    throw std::invalid_argument("expected a 1-3 dimensional float array");
  std::vector<int> dims(a.ndim());
  for (py::ssize_t i = 0; i < a.ndim(); ++i) dims[i] = static_cast<int>(a.shape(i));
  Field f(dims);
  std::memcpy(f.data(), a.data(), f.size() * sizeof(double));
  return f;
}

py::array_t<double> to_array(const Field& f) {
  std::vector<py::ssize_t> shape(f.rank());
  for (int a = 0; a < f.rank(); ++a) shape[a] = f.dim(a);
  py::array_t<double> out(shape);
  std::memcpy(out.mutable_data(), f.data(), f.size() * sizeof(double));
  return out;
}

SensorData to_sensor_data(const DoubleArray& a, double dt) {
  if (a.ndim() != 2) throw std::invalid_argument("sensor data must be 2d (sensors, samples)");
  SensorData d(static_cast<int>(a.shape(0)), static_cast<int>(a.shape(1)), dt);
  std::memcpy(d.samples.data(), a.data(), d.samples.size() * sizeof(double));
  return d;
}

py::array_t<double> to_array(const SensorData& d) {
  py::array_t<double> out({static_cast<py::ssize_t>(d.num_sensors),
                           static_cast<py::ssize_t>(d.nt)});
  std::memcpy(out.mutable_data(), d.samples.data(), d.samples.size() * sizeof(double));
  return out;
}

py::dict record_dict(const IterationRecord& r) {
  py::dict d;
  d["k"] = r.k;
  d["kind"] = r.kind;
  d["cpu_seconds"] = r.cpu_seconds;
  d["F"] = r.F;
  d["RES"] = r.RES;
  d["RE"] = r.RE;
  return d;
}

py::dict solve_dict(const SolveResult& r) {
  py::dict d;
  d["image"] = to_array(r.x);
  py::list recs;
  for (const auto& rec : r.records) recs.append(record_dict(rec));
  d["records"] = recs;
  d["stop_reason"] = r.stop_reason;
  d["f_initial"] = r.f_initial;
  d["f_final"] = r.f_final;
  return d;
}

SolveOptions make_solve_options(double lam, bool nonneg, int prox_iters, double step_scale,
                                bool momentum, int max_iters, double eps_d,
                                double divergence_factor) {
  SolveOptions o;
  o.lambda = lam;
  o.nonneg = nonneg;
  o.prox_iters = prox_iters;
  o.step_scale = step_scale;
  o.momentum = momentum;
  o.max_iters = max_iters;
  o.eps_d = eps_d;
  o.divergence_factor = divergence_factor;
  return o;
}

}  // namespace

PYBIND11_MODULE(_patmg, m) {
  m.doc() = "photoacoustic tomography reconstruction engine";

  py::register_exception<DivergenceError>(m, "DivergenceError", PyExc_RuntimeError);

  py::class_<Grid>(m, "Grid")
      .def(py::init([](std::vector<int> dims, double spacing, int pml_thickness, double dt,
                       int nt, double c_ref, double pml_alpha_max) {
             Grid g;
             if (dims.empty() || dims.size() > 3)
               throw std::invalid_argument("dims must have 1-3 entries");
             g.rank = static_cast<int>(dims.size());
             for (std::size_t a = 0; a < dims.size(); ++a) g.dims[a] = dims[a];
             for (int a = 0; a < 3; ++a) g.spacing[a] = spacing;
             g.pml_thickness = pml_thickness;
             g.dt = dt;
             g.nt = nt;
             g.c_ref = c_ref;
             g.pml_alpha_max = pml_alpha_max;
             g.validate();
             return g;
           }),
           py::arg("dims"), py::arg("spacing"), py::arg("pml_thickness"), py::arg("dt"),
           py::arg("nt"), py::arg("c_ref") = 1500.0, py::arg("pml_alpha_max") = 2.0)
      .def_readonly("rank", &Grid::rank)
      .def_readonly("pml_thickness", &Grid::pml_thickness)
      .def_readonly("dt", &Grid::dt)
      .def_readonly("nt", &Grid::nt)
      .def_readonly("c_ref", &Grid::c_ref)
      .def_property_readonly("dims",
                             [](const Grid& g) {
                               return std::vector<int>(g.dims.begin(), g.dims.begin() + g.rank);
                             })
      .def_property_readonly("spacing", [](const Grid& g) { return g.spacing[0]; })
      .def("interior_dims", &Grid::interior_dims)
      .def("interior_extent", &Grid::interior_extent, py::arg("axis"))
      .def("__repr__", [](const Grid& g) {
        std::string s = "Grid(dims=[";
        for (int a = 0; a < g.rank; ++a)
          s += (a ? "," : "") + std::to_string(g.dims[a]);
        return s + "], nt=" + std::to_string(g.nt) + ")";
      });

  py::class_<Medium>(m, "Medium")
      .def_property_readonly("c0", [](const Medium& m_) { return to_array(m_.c0); })
      .def_property_readonly("rho0", [](const Medium& m_) { return to_array(m_.rho0); })
      .def_property_readonly("alpha0", [](const Medium& m_) { return to_array(m_.alpha0); })
      .def_readonly("y", &Medium::y)
      .def("lossless", &Medium::lossless);

  m.def("uniform_medium", &uniform_medium, py::arg("grid"), py::arg("c0") = 1500.0,
        py::arg("rho0") = 1000.0, py::arg("alpha0") = 0.0, py::arg("y") = 1.5);
  m.def(
      "medium_from_maps",
      [](const Grid& g, const DoubleArray& c0, const DoubleArray& rho0,
         const DoubleArray& alpha0, double y) {
        Medium med;
        med.c0 = to_field(c0);
        med.rho0 = to_field(rho0);
        med.alpha0 = to_field(alpha0);
        med.y = y;
        derive_loss_coefficients(med);
        med.validate(g);
        return med;
      },
      py::arg("grid"), py::arg("c0"), py::arg("rho0"), py::arg("alpha0"), py::arg("y") = 1.5,
      "build a medium from full-grid sound-speed/density/absorption maps");
  m.def("alpha0_to_si", &alpha0_to_si, py::arg("alpha0_db"), py::arg("y"));
  m.def("absorption_np_per_m", &absorption_np_per_m, py::arg("alpha0_db"), py::arg("y"),
        py::arg("omega"));

  py::class_<SensorArray>(m, "SensorArray")
      .def(py::init([](const std::vector<std::array<double, 3>>& pos) {
             SensorArray s;
             s.positions = pos;
             return s;
           }),
           py::arg("positions"))
      .def_property_readonly("count", &SensorArray::count)
      .def_property_readonly("positions",
                             [](const SensorArray& s) { return s.positions; });
  m.def("make_arc_sensors", &make_arc_sensors, py::arg("count"), py::arg("radius"),
        py::arg("center"), py::arg("start_deg") = 0.0, py::arg("span_deg") = 180.0);

  py::class_<ForwardOperator>(m, "ForwardOperator")
      .def(py::init([](const Grid& g, const Medium& med, const SensorArray& s,
                       bool smooth_sources) {
             return new ForwardOperator(g, med, s, smooth_sources);
           }),
           py::arg("grid"), py::arg("medium"), py::arg("sensors"),
           py::arg("smooth_sources") = true)
      .def_property_readonly("grid", &ForwardOperator::grid,
                             py::return_value_policy::reference_internal)
      .def_property_readonly("lossy", &ForwardOperator::lossy)
      .def(
          "forward",
          [](const ForwardOperator& H, const DoubleArray& image) {
            return to_array(H.forward(to_field(image)));
          },
          py::arg("image"), "interior initial pressure -> (sensors, samples) time series")
      .def(
          "adjoint",
          [](const ForwardOperator& H, const DoubleArray& data) {
            return to_array(H.adjoint(to_sensor_data(data, H.grid().dt)));
          },
          py::arg("data"), "transpose of forward")
      .def(
          "time_reversal",
          [](const ForwardOperator& H, const DoubleArray& data) {
            return to_array(H.time_reversal(to_sensor_data(data, H.grid().dt)));
          },
          py::arg("data"), "conventional time-reversal baseline image");

  m.def(
      "estimate_lipschitz",
      [](const ForwardOperator& H, int max_iters, double tol, std::uint64_t seed) {
        PowerResult r = estimate_lipschitz(H, max_iters, tol, seed);
        py::dict d;
        d["L"] = r.L;
        d["iters"] = r.iters;
        d["converged"] = r.converged;
        d["rayleigh"] = r.rayleigh;
        return d;
      },
      py::arg("op"), py::arg("max_iters") = 15, py::arg("tol") = 1e-3,
      py::arg("seed") = 0x2545f4914f6cdd1dull,
      "power iteration for the largest eigenvalue of H^T H");

  m.def(
      "prox_tv",
      [](const DoubleArray& z, double weight, int iters, bool nonneg) {
        return to_array(prox_tv(to_field(z), weight, ProxOptions{iters, nonneg}));
      },
      py::arg("z"), py::arg("weight"), py::arg("iters") = 20, py::arg("nonneg") = true,
      "proximal map of weight*TV (optionally restricted to nonnegative images)");
  m.def("tv_value", [](const DoubleArray& x) { return tv_value(to_field(x)); }, py::arg("x"));
  m.def(
      "smooth_source",
      [](const DoubleArray& x) { return to_array(smooth_source(to_field(x))); }, py::arg("x"),
      "frequency-domain anti-alias filter used on injected sources");

  m.def("prolong", [](const DoubleArray& x) { return to_array(prolong_image(to_field(x))); },
        py::arg("coarse"));
  m.def("restrict", [](const DoubleArray& x) { return to_array(restrict_image(to_field(x))); },
        py::arg("fine"));
  m.def(
      "restrict_data",
      [](const DoubleArray& d, double dt) { return to_array(restrict_data(to_sensor_data(d, dt))); },
      py::arg("data"), py::arg("dt"), "halve a sensor time series (low-pass + decimate)");
  m.def("coarsen_grid", &coarsen_grid, py::arg("grid"));
  m.def("coarsen_medium", &coarsen_medium, py::arg("medium"));

  m.def(
      "solve",
      [](const ForwardOperator& H, const DoubleArray& data, const std::string& algo, double lam,
         int max_iters, double eps_d, int prox_iters, double step_scale, double L,
         double divergence_factor, double kappa, double vartheta, int q_d, int q_c, double eps_c,
         double rho_tv) {
        SensorData d = to_sensor_data(data, H.grid().dt);
        const bool momentum = algo == "fista" || algo == "mg-fista";
        SolveOptions opt = make_solve_options(lam, true, prox_iters, step_scale, momentum,
                                              max_iters, eps_d, divergence_factor);
        SolveContext ctx{&H, &d, L > 0 ? L : estimate_lipschitz(H).L, {}};
        if (algo == "ista" || algo == "fista") {
          return solve_dict(proximal_gradient_solve(ctx, opt));
        } else if (algo == "mg-ista" || algo == "mg-fista") {
          Grid gc = coarsen_grid(H.grid());
          Medium mc = coarsen_medium(H.medium());
          ForwardOperator Hc(gc, mc, H.sensors(), H.smoothing());
          SensorData dc = restrict_data(d);
          SolveContext cctx{&Hc, &dc, estimate_lipschitz(Hc).L, {}};
          MgOptions mg;
          mg.base = opt;
          mg.kappa = kappa;
          mg.vartheta = vartheta;
          mg.q_d = q_d;
          mg.q_c = q_c;
          mg.eps_c = eps_c;
          mg.rho_tv = rho_tv;
          MgStats stats;
          SolveResult r = mg_solve(ctx, cctx, mg, &stats);
          py::dict out = solve_dict(r);
          out["recursions"] = stats.recursions;
          out["coarse_iters"] = stats.coarse_iters;
          out["min_iterate"] = stats.min_iterate;
          return out;
        }
        throw std::invalid_argument("algo must be ista|fista|mg-ista|mg-fista");
      },
      py::arg("op"), py::arg("data"), py::arg("algo") = "fista", py::arg("lam") = 1e-2,
      py::arg("max_iters") = 100, py::arg("eps_d") = 1e-3, py::arg("prox_iters") = 20,
      py::arg("step_scale") = 1.0, py::arg("L") = 0.0, py::arg("divergence_factor") = 10.0,
      py::arg("kappa") = 0.25, py::arg("vartheta") = 0.1, py::arg("q_d") = 3, py::arg("q_c") = 8,
      py::arg("eps_c") = 1e-2, py::arg("rho_tv") = 1e-2,
      "TV-regularized nonnegative reconstruction from sensor data");

  m.def(
      "relative_error_percent",
      [](const DoubleArray& x, const DoubleArray& truth) {
        return relative_error_percent(to_field(x), to_field(truth));
      },
      py::arg("x"), py::arg("truth"));

  m.def("read_field", [](const std::filesystem::path& p) { return to_array(read_field(p)); },
        py::arg("path"));
  m.def(
      "write_field",
      [](const std::filesystem::path& p, const DoubleArray& x) { write_field(p, to_field(x)); },
      py::arg("path"), py::arg("x"));
}
