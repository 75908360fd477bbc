#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <complex>
#include <string>
#include <vector>

#include "lacvar/avgops.hpp"
#include "lacvar/error.hpp"
#include "lacvar/fourier.hpp"
#include "lacvar/gridfn.hpp"
#include "lacvar/harness.hpp"
#include "lacvar/lacunary.hpp"

namespace py = pybind11;
using namespace lacvar;

namespace {

using Array = py::array_t<double, py::array::c_style | py::array::forcecast>;

Array to_array(std::span<const double> v) {
  Array out(static_cast<py::ssize_t>(v.size()));
  std::copy(v.begin(), v.end(), out.mutable_data());
  return out;
}

std::vector<double> to_vector(const Array& a) {
  if (a.ndim() != 1) throw py::value_error("expected a 1-d array");
  return {a.data(), a.data() + a.size()};
}

VariationSpec make_spec(double s, int K, bool waive_tail, double tail_tol) {
  VariationSpec spec;
  spec.s = s;
  spec.K = K;
  spec.waive_tail = waive_tail;
  spec.tail_tol = tail_tol;
  return spec;
}

py::dict sums_dict(const MultiplierSums& m) {
  py::dict d;
  d["I"] = m.I;
  d["I1"] = m.I1;
  d["I2"] = m.I2;
  d["Q"] = m.Q;
  d["max_term"] = m.max_term;
  return d;
}

}  // namespace

PYBIND11_MODULE(_lacvar, m) {
  m.doc() = "Variation norms of lacunary averages";

  static py::exception<Error> error(m, "LacvarError", PyExc_ValueError);
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      py::object cls = error;
      py::object exc = cls(e.what());
      exc.attr("code") = to_string(e.code());
      exc.attr("index") = e.index() ? py::cast(*e.index()) : py::none();
      PyErr_SetObject(error.ptr(), exc.ptr());
    }
  });

  py::class_<LacunarySeq>(m, "LacunarySeq")
      .def_property_readonly("scales", [](const LacunarySeq& s) { return to_array(s.scales()); })
      .def_property_readonly("beta", &LacunarySeq::beta)
      .def("truncated", &LacunarySeq::truncated, py::arg("K"))
      .def("__len__", &LacunarySeq::size)
      .def("__getitem__", [](const LacunarySeq& s, std::size_t k) {
        if (k >= s.size()) throw py::index_error();
        return s[k];
      })
      .def("__repr__", [](const LacunarySeq& s) {
        return "<LacunarySeq len=" + std::to_string(s.size()) + " beta=" + std::to_string(s.beta()) + ">";
      });

  m.def("validate_lacunary", [](const Array& scales, double beta) {
    return validate_lacunary(to_vector(scales), beta);
  }, py::arg("scales"), py::arg("beta"));
  m.def("sequence", &sequence_from_literal, py::arg("literal"),
        "Parse 'geometric:n0:ratio:count' and friends.");
  m.def("sequence_from_scales", [](const Array& scales) { return sequence_from_scales(to_vector(scales)); },
        py::arg("scales"));
  m.def("lacunary_gamma", &lacunary_gamma, py::arg("beta"));
  m.def("refine", [](const LacunarySeq& seq) {
    const auto r = refine(seq);
    return py::make_tuple(to_array(r.scales), r.origin_indices);
  }, py::arg("seq"), "Refined scales and the positions of the original ones.");

  py::class_<GridFunction>(m, "GridFunction")
      .def(py::init([](double x0, double h, const Array& values) {
             return GridFunction(x0, h, to_vector(values));
           }),
           py::arg("x0"), py::arg("h"), py::arg("values"))
      .def_property_readonly("x0", &GridFunction::x0)
      .def_property_readonly("h", &GridFunction::h)
      .def_property_readonly("values", [](const GridFunction& f) { return to_array(f.values()); })
      .def_property_readonly("left", &GridFunction::left)
      .def_property_readonly("right", &GridFunction::right)
      .def("at", &GridFunction::at, py::arg("x"))
      .def("mass", &GridFunction::mass)
      .def("__len__", &GridFunction::size);

  m.def("average", [](const GridFunction& f, double n, const Array& xs) {
    const PrefixIntegral prefix(f);
    const auto x = to_vector(xs);
    std::vector<double> out(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) out[i] = average_at(prefix, n, x[i]);
    return to_array(out);
  }, py::arg("f"), py::arg("n"), py::arg("xs"));

  m.def("average_oracle", [](const GridFunction& f, double n, double x) {
    return average_oracle_at(f, n, x);
  }, py::arg("f"), py::arg("n"), py::arg("x"));

  m.def("variation_at", [](const GridFunction& f, const LacunarySeq& seq, const Array& xs, double s,
                           int K, bool waive_tail, double tail_tol) {
    const auto x = to_vector(xs);
    return to_array(variation_at(f, seq, make_spec(s, K, waive_tail, tail_tol), x));
  }, py::arg("f"), py::arg("seq"), py::arg("xs"), py::arg("s") = 2.0, py::arg("K"),
     py::arg("waive_tail") = false, py::arg("tail_tol") = 1e-8);

  m.def("variation_profile", [](const GridFunction& f, const LacunarySeq& seq, double s, int K,
                                double resolution, bool waive_tail, double tail_tol) {
    const auto p = variation_profile(f, seq, make_spec(s, K, waive_tail, tail_tol),
                                     resolution > 0.0 ? resolution : f.h());
    return py::make_tuple(to_array(p.edges), to_array(p.values));
  }, py::arg("f"), py::arg("seq"), py::arg("s") = 2.0, py::arg("K"), py::arg("resolution") = 0.0,
     py::arg("waive_tail") = false, py::arg("tail_tol") = 1e-8,
     "Cell edges and per-cell values (sampled at cell midpoints).");

  m.def("tail_bound", &tail_bound, py::arg("f"), py::arg("seq"), py::arg("s"), py::arg("K"));

  m.def("phi_hat", &phi_hat, py::arg("n"), py::arg("xi"));
  m.def("multiplier_sums", [](const LacunarySeq& seq, double xi, int K) {
    return sums_dict(multiplier_sums(seq, xi, K));
  }, py::arg("seq"), py::arg("xi"), py::arg("K"));
  m.def("sup_scan", [](const LacunarySeq& seq, const Array& xi, int K) {
    const auto x = to_vector(xi);
    const auto scan = sup_scan(seq, x, K);
    py::dict d;
    d["sup_I"] = scan.sup_I;
    d["sup_I1"] = scan.sup_I1;
    d["sup_I2"] = scan.sup_I2;
    d["sup_Q"] = scan.sup_Q;
    d["argmax_xi"] = scan.argmax_xi;
    d["max_term"] = scan.max_term;
    return d;
  }, py::arg("seq"), py::arg("xi"), py::arg("K"));

  m.def("scenario_kinds", [] {
    std::vector<std::string> out;
    for (auto k : all_scenario_kinds()) out.emplace_back(to_string(k));
    return out;
  });
  m.def("run_scenario_json", [](const std::string& kind, const std::string& config, bool timing) {
    const auto scenario = make_scenario(scenario_kind_from_string(kind), nlohmann::json::parse(config));
    VerificationReport rep;
    {
      py::gil_scoped_release release;
      rep = run_scenario(scenario);
    }
    return emit_report(rep, ReportFormat::Json, timing);
  }, py::arg("kind"), py::arg("config") = "{}", py::arg("timing") = false);
}
