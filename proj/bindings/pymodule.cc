// Python bindings for the core operations: pseudo-inverse, g-frame analysis
// and duals, localization norms, coorbit norms, and the Gabor model.
#include "gflt/scenario.hh"

#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>
#include <utility>
#include <vector>

namespace py = pybind11;
using namespace gflt;

namespace {

GFrame frame_from_operators(const std::vector<ComplexMatrix>& ops) {
  const Eigen::Index count = Eigen::Index(ops.size());
  std::vector<ComplexMatrix> copy = ops;
  return GFrame(IndexSet::line(count), std::move(copy));
}

GaborGSystem gabor_system(Eigen::Index L, Eigen::Index step_x, Eigen::Index step_w) {
  if (L < 4 || step_x < 1 || step_w < 1 || L % step_x != 0 || L % step_w != 0)
    throw std::invalid_argument("gabor_frame: steps must be positive divisors of L >= 4");
  GaborGSystem sys;
  sys.L = L;
  const ComplexVector g0 = discrete_gaussian(L);
  sys.window.terms.push_back({g0, g0});
  for (Eigen::Index x = 0; x < L; x += step_x)
    for (Eigen::Index w = 0; w < L; w += step_w) sys.points.push_back({x, w});
  return sys;
}

std::vector<ComplexVector> analysis_list(const GFrame& T, const ComplexVector& f) {
  const BlockVector c = analysis(T, f);
  std::vector<ComplexVector> out;
  out.reserve(size_t(c.count()));
  for (Eigen::Index k = 0; k < c.count(); ++k) out.push_back(c.component(k));
  return out;
}

ComplexVector synthesis_list(const GFrame& T, const std::vector<ComplexVector>& coeffs) {
  if (Eigen::Index(coeffs.size()) != T.count())
    throw std::invalid_argument("synthesis: expected one coefficient block per operator");
  BlockVector c(T.index_set(), T.n());
  for (Eigen::Index k = 0; k < T.count(); ++k) c.component(k) = coeffs[size_t(k)];
  return synthesis(T, c);
}

py::dict fit_dict(const std::optional<DecayFit>& fit) {
  py::dict d;
  if (fit) {
    d["C"] = fit->C;
    d["s_fit"] = fit->s_fit;
    d["rms_log_residual"] = fit->rms_log_residual;
    d["pairs_used"] = fit->pairs_used;
  }
  return d;
}

}  // namespace

PYBIND11_MODULE(_gflt, m) {
  m.doc() = "operator-valued frame localization toolkit";
  m.attr("__version__") = version_string();

  py::class_<GFrame>(m, "Frame", "finite family of operators acting on C^n")
      .def_property_readonly("count", &GFrame::count)
      .def_property_readonly("n", &GFrame::n)
      .def("op", &GFrame::op, py::arg("k"), "operator at position k");

  m.def("frame_from_operators", &frame_from_operators, py::arg("operators"),
        "Frame over the line index set 0..count-1 from square complex matrices");
  m.def(
      "gabor_frame",
      [](Eigen::Index L, Eigen::Index step_x, Eigen::Index step_w) {
        return build_gabor_gsystem(gabor_system(L, step_x, step_w));
      },
      py::arg("L"), py::arg("step_x"), py::arg("step_w"),
      "rank-one Gaussian-window Gabor frame on the step_x Z x step_w Z lattice");

  m.def(
      "frame_bounds",
      [](const GFrame& T) {
        const FrameBounds b = frame_bounds(T);
        return py::make_tuple(b.lower, b.upper, b.is_frame);
      },
      py::arg("frame"), "(A, B, is_frame) from the frame operator spectrum");
  m.def("canonical_dual", &canonical_dual, py::arg("frame"));
  m.def(
      "is_dual_pair",
      [](const GFrame& T, const GFrame& Td, double tol) {
        const DualPairCheck c = is_dual_pair(T, Td, tol);
        return py::make_tuple(c.ok, c.residual);
      },
      py::arg("frame"), py::arg("dual"), py::arg("tol") = 1e-8);

  m.def("analysis", &analysis_list, py::arg("frame"), py::arg("f"),
        "coefficient blocks (T_k f) as a list of vectors");
  m.def("synthesis", &synthesis_list, py::arg("frame"), py::arg("coefficients"),
        "sum of T_k^* c_k over all k");
  m.def("reconstruct", &reconstruct, py::arg("frame"), py::arg("dual"), py::arg("f"),
        "synthesis of the dual applied to the analysis of f");
  m.def(
      "frame_operator", [](const GFrame& T) { return frame_operator(T); }, py::arg("frame"));

  m.def("pinv", &pinv, py::arg("A"), py::arg("rtol") = -1.0,
        "Moore-Penrose pseudo-inverse via SVD truncation");
  m.def("spectral_norm", &spectral_norm, py::arg("A"));

  m.def(
      "jaffard_localization",
      [](const GFrame& T, double s) {
        const LocalizationReport rep = localization_report(T, nullptr, AlgebraSpec::jaffard(s));
        py::dict d;
        d["norm"] = rep.norm_value;
        d["fit"] = fit_dict(rep.decay_fit);
        return d;
      },
      py::arg("frame"), py::arg("s"),
      "Jaffard norm of the Gram matrix and its polynomial decay fit");

  m.def(
      "coorbit_norm",
      [](const ComplexVector& f, const GFrame& Td, double p, double weight_exponent) {
        return coorbit_norm(f, Td, {p, Weight::polynomial(weight_exponent)});
      },
      py::arg("f"), py::arg("dual"), py::arg("p") = 2.0, py::arg("weight_exponent") = 0.0,
      "weighted sequence norm of the analysis coefficients");
  m.def(
      "duality_pairing",
      [](const ComplexVector& f, const ComplexVector& g, const GFrame& T, const GFrame& Td) {
        return duality_pairing(f, g, T, Td);
      },
      py::arg("f"), py::arg("g"), py::arg("frame"), py::arg("dual"));

  m.def("discrete_gaussian", &discrete_gaussian, py::arg("L"),
        "periodized, balanced, unit-norm Gaussian window on C^L");
  m.def(
      "tf_shift",
      [](const ComplexVector& f, Eigen::Index x, Eigen::Index w) {
        return tf_shift(f, TFPoint{x, w});
      },
      py::arg("f"), py::arg("x"), py::arg("w"), "modulation after cyclic translation");
  m.def("stft", &stft, py::arg("f"), py::arg("g"),
        "short-time Fourier transform matrix V[x, w] = <f, pi((x,w)) g>");

  m.def(
      "verify_decay",
      [](Eigen::Index L, Eigen::Index step_x, Eigen::Index step_w, double s) {
        const DecayTheoremReport rep = verify_decay_theorem(gabor_system(L, step_x, step_w), s);
        py::dict d;
        d["s"] = rep.s;
        d["C1"] = rep.C1;
        d["C2"] = rep.C2;
        d["C3"] = rep.C3;
        d["fit_primal"] = fit_dict(rep.fit_primal);
        d["fit_mixed"] = fit_dict(rep.fit_mixed);
        d["fit_dual"] = fit_dict(rep.fit_dual);
        d["decay_slack"] = rep.decay_slack;
        d["dual_exponent_ok"] = rep.dual_exponent_ok;
        d["bounds"] = py::make_tuple(rep.bounds.lower, rep.bounds.upper, rep.bounds.is_frame);
        d["max_points_per_unit_ball"] = rep.max_points_per_unit_ball;
        return d;
      },
      py::arg("L"), py::arg("step_x"), py::arg("step_w"), py::arg("s"),
      "Jaffard norms and decay fits of the Gabor Gram, mixed and dual Grams");
}
