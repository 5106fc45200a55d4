#include <pybind11/complex.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <complex>
#include <cstring>
#include <utility>

#include "sincmbe/analysis.hpp"
#include "sincmbe/energy_csv.hpp"
#include "sincmbe/grid.hpp"
#include "sincmbe/models.hpp"
#include "sincmbe/schemes.hpp"
#include "sincmbe/snapshot.hpp"
#include "sincmbe/spectral.hpp"

namespace py = pybind11;
using namespace sincmbe;

namespace {

py::array_t<double> field_to_numpy(const RealField& f) {
  py::array_t<double> out({f.grid().nx, f.grid().ny});
  std::memcpy(out.mutable_data(), f.data(), sizeof(double) * f.size());
  return out;
}

RealField field_from_numpy(const py::array_t<double, py::array::c_style |
                                                         py::array::forcecast>& a) {
  if (a.ndim() != 2) {
    throw std::invalid_argument("expected a 2d array");
  }
  GridSpec grid(static_cast<int>(a.shape(0)), static_cast<int>(a.shape(1)));
  RealField f(grid);
  std::memcpy(f.data(), a.data(), sizeof(double) * f.size());
  return f;
}

py::array_t<std::complex<double>> spectral_to_numpy(const SpectralField& f) {
  py::array_t<std::complex<double>> out({f.grid().nx, f.grid().ny});
  std::memcpy(out.mutable_data(), f.data(),
              sizeof(std::complex<double>) * f.size());
  return out;
}

SpectralField spectral_from_numpy(
    const py::array_t<std::complex<double>,
                      py::array::c_style | py::array::forcecast>& a) {
  if (a.ndim() != 2) {
    throw std::invalid_argument("expected a 2d array");
  }
  GridSpec grid(static_cast<int>(a.shape(0)), static_cast<int>(a.shape(1)));
  SpectralField f(grid);
  std::memcpy(f.data(), a.data(), sizeof(std::complex<double>) * f.size());
  return f;
}

template <typename T>
py::array_t<T> grid_array(const GridSpec& g, const std::vector<T>& v) {
  py::array_t<T> out({g.nx, g.ny});
  std::memcpy(out.mutable_data(), v.data(), sizeof(T) * v.size());
  return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Pseudo-spectral solvers for sinc-type and classical MBE "
            "gradient flows on the periodic torus";

  py::class_<GridSpec>(m, "GridSpec")
      .def(py::init<int, int>(), py::arg("nx"), py::arg("ny"))
      .def_readonly("nx", &GridSpec::nx)
      .def_readonly("ny", &GridSpec::ny)
      .def("__eq__", [](const GridSpec& a, const GridSpec& b) { return a == b; })
      .def("__repr__", [](const GridSpec& g) {
        return "GridSpec(" + std::to_string(g.nx) + ", " + std::to_string(g.ny) +
               ")";
      });

  py::class_<RealField>(m, "RealField")
      .def(py::init<GridSpec>(), py::arg("grid"))
      .def_property_readonly("grid", &RealField::grid)
      .def("numpy", &field_to_numpy)
      .def("__repr__", [](const RealField& f) {
        return "RealField(" + std::to_string(f.grid().nx) + "x" +
               std::to_string(f.grid().ny) + ")";
      });
  m.def("field_from_numpy", &field_from_numpy, py::arg("values"),
        "RealField from a 2d float array (rows = x index)");

  py::class_<SpectralField>(m, "SpectralField")
      .def_property_readonly("grid", &SpectralField::grid)
      .def("numpy", &spectral_to_numpy)
      .def("dealias_truncate",
           [](SpectralField& f) { dealias_truncate(f); });
  m.def("spectral_from_numpy", &spectral_from_numpy, py::arg("coeffs"),
        "SpectralField from a 2d complex array in FFT storage order");

  m.def("forward_transform", &forward_transform, py::arg("field"));
  m.def("inverse_transform", &inverse_transform, py::arg("coeffs"));
  m.def("spectral_gradient", &spectral_gradient, py::arg("field"));
  m.def("spectral_divergence", &spectral_divergence, py::arg("vx"),
        py::arg("vy"));
  m.def("spectral_laplacian", &spectral_laplacian, py::arg("field"));
  m.def("spectral_bilaplacian", &spectral_bilaplacian, py::arg("field"));
  m.def("solve_shifted_biharmonic", &solve_shifted_biharmonic, py::arg("rhs"),
        py::arg("a"), py::arg("b"));
  m.def("integrate", &integrate, py::arg("field"));
  m.def("norm_l2", &norm_l2, py::arg("field"));
  m.def("seminorm_h2", &seminorm_h2, py::arg("field"));
  m.def("mean", &mean, py::arg("field"));

  py::enum_<ModelKind>(m, "ModelKind")
      .value("SINC_ISOTROPIC", ModelKind::kSincIsotropic)
      .value("CLASSICAL_SLOPE_SELECTION", ModelKind::kClassicalSlopeSelection)
      .value("SQUARE_SYMMETRY", ModelKind::kSquareSymmetry)
      .value("LINEAR_ONLY", ModelKind::kLinearOnly);

  py::enum_<ClassicalWell>(m, "ClassicalWell")
      .value("UNIT_SLOPE", ClassicalWell::kUnitSlope)
      .value("SCALED_SIX", ClassicalWell::kScaledSix);

  py::class_<ModelParams>(m, "ModelParams")
      .def(py::init([](ModelKind kind, double eta_sq, double beta, double beta1,
                       ClassicalWell well) {
             ModelParams p;
             p.kind = kind;
             p.eta_sq = eta_sq;
             p.beta = beta;
             p.beta1 = beta1;
             p.classical_well = well;
             p.validate();
             return p;
           }),
           py::arg("kind"), py::arg("eta_sq"), py::arg("beta") = 1.0,
           py::arg("beta1") = 1.0,
           py::arg("classical_well") = ClassicalWell::kUnitSlope)
      .def_readwrite("kind", &ModelParams::kind)
      .def_readwrite("eta_sq", &ModelParams::eta_sq)
      .def_readwrite("beta", &ModelParams::beta)
      .def_readwrite("beta1", &ModelParams::beta1)
      .def_readwrite("classical_well", &ModelParams::classical_well)
      .def("validate", &ModelParams::validate);

  m.def("sinc_eval", &sinc_eval, py::arg("s"));
  m.def(
      "flux",
      [](const ModelParams& p, const RealField& gx, const RealField& gy) {
        VectorField out = flux(p, VectorField{gx, gy});
        return py::make_tuple(std::move(out.x), std::move(out.y));
      },
      py::arg("params"), py::arg("grad_x"), py::arg("grad_y"));
  m.def(
      "flux_at",
      [](const ModelParams& p, std::pair<double, double> z) {
        const Vec2 g = flux_at(p, {z.first, z.second});
        return std::make_pair(g.x, g.y);
      },
      py::arg("params"), py::arg("z"));
  m.def("total_energy", &total_energy, py::arg("params"), py::arg("field"));
  m.def("modified_energy_bdf2", &modified_energy_bdf2, py::arg("params"),
        py::arg("h_curr"), py::arg("h_prev"), py::arg("tau"));
  m.def(
      "hessian_quadratic_form",
      [](std::pair<double, double> z, std::pair<double, double> x) {
        return hessian_quadratic_form({z.first, z.second}, {x.first, x.second});
      },
      py::arg("z"), py::arg("x"));
  m.def("flux_jacobian_eigenvalues", &flux_jacobian_eigenvalues, py::arg("s"));
  m.def("sinc_series_partial", &sinc_series_partial, py::arg("s"),
        py::arg("n_terms"));

  py::enum_<SchemeKind>(m, "SchemeKind")
      .value("IMEX1", SchemeKind::kImex1)
      .value("BDF2", SchemeKind::kBdf2);

  py::class_<SchemeConfig>(m, "SchemeConfig")
      .def(py::init([](SchemeKind scheme, double tau, double t_final,
                       std::int64_t snapshot_every, std::int64_t record_every,
                       bool dealias) {
             SchemeConfig c;
             c.scheme = scheme;
             c.tau = tau;
             c.t_final = t_final;
             c.snapshot_every = snapshot_every;
             c.record_every = record_every;
             c.dealias = dealias;
             c.validate();
             return c;
           }),
           py::arg("scheme"), py::arg("tau"), py::arg("t_final"),
           py::arg("snapshot_every") = 0, py::arg("record_every") = 1,
           py::arg("dealias") = false)
      .def_readwrite("scheme", &SchemeConfig::scheme)
      .def_readwrite("tau", &SchemeConfig::tau)
      .def_readwrite("t_final", &SchemeConfig::t_final)
      .def_readwrite("snapshot_every", &SchemeConfig::snapshot_every)
      .def_readwrite("record_every", &SchemeConfig::record_every)
      .def_readwrite("dealias", &SchemeConfig::dealias)
      .def("n_steps", &SchemeConfig::n_steps);

  py::class_<EnergyRecord>(m, "EnergyRecord")
      .def(py::init<>())
      .def_readwrite("step", &EnergyRecord::step)
      .def_readwrite("time", &EnergyRecord::time)
      .def_readwrite("energy", &EnergyRecord::energy)
      .def_readwrite("modified_energy", &EnergyRecord::modified_energy)
      .def_readwrite("mass", &EnergyRecord::mass)
      .def_readwrite("l2_norm", &EnergyRecord::l2_norm)
      .def_readwrite("h2_seminorm", &EnergyRecord::h2_seminorm)
      .def_readwrite("first_step_ratio", &EnergyRecord::first_step_ratio)
      .def("__repr__", [](const EnergyRecord& r) {
        return "EnergyRecord(step=" + std::to_string(r.step) +
               ", energy=" + std::to_string(r.energy) + ")";
      });

  py::class_<SimState>(m, "SimState")
      .def_property_readonly(
          "h_curr", [](const SimState& s) { return field_to_numpy(s.h_curr); })
      .def_property_readonly("h_prev",
                             [](const SimState& s) -> py::object {
                               if (!s.h_prev) return py::none();
                               return field_to_numpy(*s.h_prev);
                             })
      .def_readonly("step", &SimState::step)
      .def_readonly("time", &SimState::time);

  py::class_<SimResult>(m, "SimResult")
      .def_readonly("state", &SimResult::state)
      .def_readonly("records", &SimResult::records)
      .def_readonly("blowup", &SimResult::blowup)
      .def_readonly("blowup_step", &SimResult::blowup_step);

  m.def("imex_step", &imex_step, py::arg("params"), py::arg("tau"),
        py::arg("h_n"), py::arg("dealias") = false,
        py::call_guard<py::gil_scoped_release>());
  m.def("bdf2_step", &bdf2_step, py::arg("params"), py::arg("tau"),
        py::arg("h_n"), py::arg("h_nm1"), py::arg("dealias") = false,
        py::call_guard<py::gil_scoped_release>());
  m.def("bootstrap_first_step", &bootstrap_first_step, py::arg("params"),
        py::arg("tau"), py::arg("h0"), py::arg("dealias") = false,
        py::call_guard<py::gil_scoped_release>());
  m.def(
      "run_simulation",
      [](const ModelParams& params, const SchemeConfig& config,
         const RealField& h0) {
        py::gil_scoped_release release;
        return run_simulation(params, config, h0, nullptr);
      },
      py::arg("params"), py::arg("config"), py::arg("h0"));
  m.def("initial_condition_trig", &initial_condition_trig, py::arg("grid"));
  m.def("initial_condition_random", &initial_condition_random, py::arg("grid"),
        py::arg("amplitude"), py::arg("seed"));

  py::class_<DissipationReport>(m, "DissipationReport")
      .def_readonly("holds", &DissipationReport::holds)
      .def_readonly("first_violation_step",
                    &DissipationReport::first_violation_step)
      .def_readonly("max_increase", &DissipationReport::max_increase)
      .def_readonly("tol", &DissipationReport::tol);

  m.def("check_dissipation", &check_dissipation, py::arg("records"),
        py::arg("use_modified") = false, py::arg("tol") = 1e-12);

  py::class_<SweepProbe>(m, "SweepProbe")
      .def_readonly("tau", &SweepProbe::tau)
      .def_readonly("report", &SweepProbe::report);

  py::class_<SweepResult>(m, "SweepResult")
      .def_readonly("tau_lo", &SweepResult::tau_lo)
      .def_readonly("tau_hi", &SweepResult::tau_hi)
      .def_readonly("trace", &SweepResult::trace);

  m.def(
      "find_tau_c",
      [](const ModelParams& params, SchemeKind scheme, GridSpec grid,
         const RealField& h0, double t_final, const std::vector<double>& taus,
         int refine_iters, double tol) {
        py::gil_scoped_release release;
        return find_tau_c(params, scheme, grid, h0, t_final, taus, refine_iters,
                          tol);
      },
      py::arg("params"), py::arg("scheme"), py::arg("grid"), py::arg("h0"),
      py::arg("t_final"), py::arg("tau_list"), py::arg("refine_iters") = 0,
      py::arg("tol") = 1e-12);

  py::class_<BoundednessSummary>(m, "BoundednessSummary")
      .def_readonly("sup_l2", &BoundednessSummary::sup_l2)
      .def_readonly("sup_h2", &BoundednessSummary::sup_h2)
      .def_readonly("trend", &BoundednessSummary::trend)
      .def_readonly("nonfinite", &BoundednessSummary::nonfinite);

  m.def("boundedness_monitor", &boundedness_monitor, py::arg("records"));

  py::class_<MultiplierSpec>(m, "MultiplierSpec")
      .def_readonly("tau", &MultiplierSpec::tau)
      .def_readonly("grid", &MultiplierSpec::grid)
      .def_readonly("theta0", &MultiplierSpec::theta0)
      .def_property_readonly(
          "t_hat",
          [](const MultiplierSpec& s) { return grid_array(s.grid, s.t_hat); })
      .def_property_readonly(
          "t_plus",
          [](const MultiplierSpec& s) { return grid_array(s.grid, s.t_plus); })
      .def_property_readonly("t_minus", [](const MultiplierSpec& s) {
        return grid_array(s.grid, s.t_minus);
      });

  m.def("build_multipliers", &build_multipliers, py::arg("tau"),
        py::arg("grid"));

  py::class_<RecurrenceReport>(m, "RecurrenceReport")
      .def_readonly("theta0", &RecurrenceReport::theta0)
      .def_readonly("contraction_ok", &RecurrenceReport::contraction_ok)
      .def_readonly("decay_ok", &RecurrenceReport::decay_ok)
      .def_readonly("sup_bound_ok", &RecurrenceReport::sup_bound_ok)
      .def_readonly("sup_norm", &RecurrenceReport::sup_norm)
      .def_readonly("sup_bound", &RecurrenceReport::sup_bound)
      .def("ok", &RecurrenceReport::ok);

  m.def("verify_recurrence_contraction", &verify_recurrence_contraction,
        py::arg("tau"), py::arg("grid"), py::arg("n_steps"), py::arg("seed"),
        py::call_guard<py::gil_scoped_release>());

  py::class_<LemmaReport>(m, "LemmaReport")
      .def_readonly("max_hessian_ratio", &LemmaReport::max_hessian_ratio)
      .def_readonly("max_lipschitz_ratio", &LemmaReport::max_lipschitz_ratio)
      .def_readonly("n_samples", &LemmaReport::n_samples);

  m.def("lemma_sampler", &lemma_sampler, py::arg("n_samples"),
        py::arg("radius"), py::arg("seed"),
        py::call_guard<py::gil_scoped_release>());

  m.def("write_energy_csv", &write_energy_csv, py::arg("records"),
        py::arg("path"));
  m.def("read_energy_csv", &read_energy_csv, py::arg("path"));

  py::class_<Snapshot>(m, "Snapshot")
      .def_property_readonly(
          "field", [](const Snapshot& s) { return field_to_numpy(s.field); })
      .def_readonly("step", &Snapshot::step)
      .def_readonly("time", &Snapshot::time);

  m.def(
      "write_snapshot",
      [](const py::array_t<double, py::array::c_style | py::array::forcecast>&
             values,
         std::int64_t step, double time, const std::string& path) {
        write_snapshot(field_from_numpy(values), step, time, path);
      },
      py::arg("values"), py::arg("step"), py::arg("time"), py::arg("path"));
  m.def("read_snapshot", &read_snapshot, py::arg("path"));

  m.attr("__version__") = "0.1.0";
}
