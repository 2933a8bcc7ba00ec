#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "entangler/config.hpp"
#include "entangler/constants.hpp"
#include "entangler/duan.hpp"
#include "entangler/mc.hpp"
#include "entangler/measures.hpp"
#include "entangler/model.hpp"
#include "entangler/sweep.hpp"

namespace py = pybind11;
using namespace pybind11::literals;
using namespace entangler;

namespace {

using Rows = std::vector<std::vector<double>>;

Eigen::Matrix4d rows_to_matrix(const Rows& rows) {
  if (rows.size() != 4) throw py::value_error("expected a 4x4 matrix");
  Eigen::Matrix4d m;
  for (int i = 0; i < 4; ++i) {
    if (rows[i].size() != 4) throw py::value_error("expected a 4x4 matrix");
    for (int j = 0; j < 4; ++j) m(i, j) = rows[i][j];
  }
  return m;
}

Rows matrix_to_rows(const Eigen::Matrix4d& m) {
  Rows rows(4, std::vector<double>(4));
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) rows[i][j] = m(i, j);
  return rows;
}

Normalization parse_norm(const std::string& tag) {
  if (tag == "vacuum_half") return Normalization::VacuumHalf;
  if (tag == "vacuum_one") return Normalization::VacuumOne;
  throw py::value_error("normalization must be 'vacuum_half' or 'vacuum_one'");
}

std::string norm_tag(Normalization n) {
  return n == Normalization::VacuumHalf ? "vacuum_half" : "vacuum_one";
}

std::string measure_status(MeasureStatus s) {
  switch (s) {
    case MeasureStatus::Ok: return "ok";
    case MeasureStatus::NonPhysicalInput: return "non_physical_input";
    case MeasureStatus::WrongNormalization: return "wrong_normalization";
  }
  return "?";
}

std::string duan_status(DuanStatus s) {
  switch (s) {
    case DuanStatus::Ok: return "ok";
    case DuanStatus::NoRealSolution: return "no_real_solution";
    case DuanStatus::DegenerateBlock: return "degenerate_block";
    case DuanStatus::NoConvergence: return "no_convergence";
    case DuanStatus::DegenerateState: return "degenerate_state";
    case DuanStatus::NotApplicable: return "not_applicable";
  }
  return "?";
}

}  // namespace

PYBIND11_MODULE(_entangler, m) {
  m.doc() = "Two-carrier optomechanical entanglement simulator";

  m.attr("c") = constants::c;
  m.attr("hbar") = constants::hbar;
  m.attr("k_B") = constants::k_B;

  py::class_<CovarianceMatrix>(m, "CovarianceMatrix")
      .def(py::init([](const Rows& rows, const std::string& norm) {
             return CovarianceMatrix(rows_to_matrix(rows), parse_norm(norm));
           }),
           py::arg("entries"), py::arg("normalization") = "vacuum_half")
      .def_static("vacuum",
                  [](const std::string& norm) {
                    return CovarianceMatrix::vacuum(parse_norm(norm));
                  },
                  py::arg("normalization") = "vacuum_half")
      .def_property_readonly(
          "entries",
          [](const CovarianceMatrix& v) { return matrix_to_rows(v.entries()); })
      .def_property_readonly(
          "normalization",
          [](const CovarianceMatrix& v) { return norm_tag(v.normalization()); })
      .def("rescale",
           [](const CovarianceMatrix& v, const std::string& norm) {
             return rescale(v, parse_norm(norm));
           })
      .def("to_json", &cm_to_json)
      .def("__repr__", [](const CovarianceMatrix& v) {
        return "CovarianceMatrix(normalization='" + norm_tag(v.normalization()) +
               "')";
      });

  m.def("cm_from_json", &cm_from_json);
  m.def("load_cm", &load_cm);
  m.def("save_cm", &save_cm);

  m.def("validate_cm", [](const CovarianceMatrix& v) {
    ValidationReport report = validate_cm(v);
    return py::dict("physical"_a = report.physical,
                    "symmetry_residual"_a = report.symmetry_residual,
                    "min_eigenvalue"_a = report.min_eigenvalue);
  });

  m.def("log_negativity", [](const CovarianceMatrix& v) {
    MeasureResult r = log_negativity(v);
    return py::make_tuple(r.value, measure_status(r.status));
  });
  m.def("ppt_symplectic_eigenvalue", [](const CovarianceMatrix& v) {
    MeasureResult r = ppt_symplectic_eigenvalue(v);
    return py::make_tuple(r.value, measure_status(r.status));
  });

  m.def("duan_check", [](const CovarianceMatrix& v) {
    DuanReport report = duan_check(v);
    py::dict out("status"_a = duan_status(report.status));
    if (report.status == DuanStatus::Ok) {
      out["R"] = report.R;
      out["entangled"] = report.entangled;
      out["n"] = report.sub.n;
      out["m"] = report.sub.m;
      out["c"] = report.sub.c;
      out["c_prime"] = report.sub.c_prime;
      out["r1"] = report.form.r1;
      out["r2"] = report.form.r2;
    }
    return out;
  });

  py::class_<MechanicalMode>(m, "MechanicalMode")
      .def(py::init<>())
      .def(py::init([](const std::string& label, double f, double q, double mass) {
             return MechanicalMode{label, f, q, mass};
           }),
           py::arg("label"), py::arg("resonance_frequency"),
           py::arg("quality_factor"), py::arg("effective_mass"))
      .def_readwrite("label", &MechanicalMode::label)
      .def_readwrite("resonance_frequency", &MechanicalMode::resonance_frequency)
      .def_readwrite("quality_factor", &MechanicalMode::quality_factor)
      .def_readwrite("effective_mass", &MechanicalMode::effective_mass);

  py::class_<ModeTable>(m, "ModeTable")
      .def(py::init<>())
      .def_readwrite("modes", &ModeTable::modes)
      .def_readwrite("source", &ModeTable::source);

  m.def("default_modes", &default_modes);
  m.def("load_modes", &load_modes);
  m.def("save_modes", &save_modes);
  m.def("modes_to_csv", &modes_to_csv);

  py::class_<CarrierConfig>(m, "CarrierConfig")
      .def(py::init<>())
      .def_readwrite("circulating_power", &CarrierConfig::circulating_power)
      .def_readwrite("detuning", &CarrierConfig::detuning);

  py::class_<SimConfig>(m, "SimConfig")
      .def(py::init<>())
      .def_readwrite("temperature", &SimConfig::temperature)
      .def_readwrite("carrier", &SimConfig::carrier)
      .def_readwrite("subcarrier", &SimConfig::subcarrier)
      .def_readwrite("round_trip_loss", &SimConfig::round_trip_loss)
      .def_readwrite("cavity_length", &SimConfig::cavity_length)
      .def_readwrite("input_transmission", &SimConfig::input_transmission)
      .def_readwrite("wavelength", &SimConfig::wavelength)
      .def_readwrite("modes", &SimConfig::modes);

  m.def("load_config", &load_config);
  m.def("validate_config", &validate_config);

  m.def("half_linewidth", [](const SimConfig& cfg) {
    Linewidths lw = half_linewidth(cfg);
    return py::dict("gamma_in"_a = lw.gamma_in, "gamma_loss"_a = lw.gamma_loss,
                    "gamma"_a = lw.gamma);
  });
  m.def("mech_susceptibility", &mech_susceptibility);
  m.def("optical_spring", &optical_spring);
  m.def("total_spring", &total_spring);
  m.def("effective_susceptibility", &effective_susceptibility);
  m.def("thermal_force_psd", &thermal_force_psd);
  m.def("output_covariance", &output_covariance, py::arg("cfg"),
        py::arg("omega"), py::call_guard<py::gil_scoped_release>());
  m.def("quantum_thermal_ratio", &quantum_thermal_ratio);
  m.def("stability_check",
        [](const SimConfig& cfg) {
          StabilityReport report;
          {
            py::gil_scoped_release release;
            report = stability_check(cfg);
          }
          return py::dict("stable"_a = report.stable, "margin"_a = report.margin,
                          "max_growth_rate"_a = report.max_growth_rate);
        });

  m.def(
      "run_sweep",
      [](const SimConfig& cfg, const std::vector<std::string>& axis_specs,
         double eval_frequency_hz, int workers) {
        std::vector<SweepAxis> axes;
        for (const auto& spec : axis_specs) axes.push_back(parse_axis(spec));
        SweepResult result;
        {
          py::gil_scoped_release release;
          result = run_sweep(cfg, axes, eval_frequency_hz, workers);
        }
        std::vector<double> e_n, duan_r, qt;
        std::vector<bool> stable;
        for (const auto& cell : result.cells) {
          e_n.push_back(cell.e_n);
          duan_r.push_back(cell.duan_R);
          qt.push_back(cell.qt_ratio);
          stable.push_back(cell.stable);
        }
        py::dict out("shape"_a = py::make_tuple(result.rows, result.cols),
                     "E_N"_a = e_n, "duan_R"_a = duan_r, "qt_ratio"_a = qt,
                     "stable"_a = stable);
        py::list axes_meta;
        for (const auto& axis : result.axes) {
          axes_meta.append(py::dict(
              "parameter"_a = sweep_parameter_name(axis.parameter),
              "values"_a = axis.values()));
        }
        out["axes"] = axes_meta;
        return out;
      },
      py::arg("cfg"), py::arg("axes"), py::arg("eval_frequency_hz") = 20000.0,
      py::arg("workers") = 0);

  m.def(
      "en_distribution",
      [](const CovarianceMatrix& v, double sigma, long samples,
         std::uint64_t seed, int workers, bool absolute_sigma) {
        McConfig mc{sigma, absolute_sigma, samples, seed};
        McResult r;
        {
          py::gil_scoped_release release;
          r = en_distribution(v, mc, workers);
        }
        return py::dict("mean"_a = r.mean_en, "std"_a = r.std_en,
                        "ci67"_a = py::make_tuple(r.ci67_low, r.ci67_high),
                        "clamped_fraction"_a = r.clamped_fraction,
                        "samples"_a = r.samples, "sigma"_a = r.sigma);
      },
      py::arg("V"), py::arg("sigma"), py::arg("samples") = 10000,
      py::arg("seed") = 1, py::arg("workers") = 0,
      py::arg("absolute_sigma") = false);

  m.def(
      "required_precision",
      [](const CovarianceMatrix& v, double target_ratio, std::uint64_t seed,
         long samples) {
        PrecisionResult r;
        {
          py::gil_scoped_release release;
          r = required_precision(v, target_ratio, seed, samples);
        }
        return py::make_tuple(r.sigma, r.achievable);
      },
      py::arg("V"), py::arg("target_ratio"), py::arg("seed") = 12345,
      py::arg("samples") = 10000);
}
