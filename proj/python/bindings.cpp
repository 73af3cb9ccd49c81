#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "ifc/achievability.hpp"
#include "ifc/certify.hpp"
#include "ifc/construct.hpp"
#include "ifc/outer_bound.hpp"
#include "ifc/report_json.hpp"

namespace py = pybind11;
using namespace ifc;

namespace {

OptimizerConfig make_config(std::uint64_t seed, int restarts, int max_evals, double tolerance) {
  OptimizerConfig cfg;
  cfg.seed = seed;
  cfg.restarts = restarts;
  cfg.max_evals = max_evals;
  cfg.tolerance = tolerance;
  cfg.check();
  return cfg;
}

std::vector<Family> parse_families(const std::vector<std::string>& names) {
  std::vector<Family> out;
  for (const auto& s : names) {
    if (s == "KRA") out.push_back(Family::KRA);
    else if (s == "ETW") out.push_back(Family::ETW);
    else throw Error(ErrorCode::InvalidArgument, "unknown bound family '" + s + "'");
  }
  return out;
}

std::vector<int> zero_based(const std::vector<int>& one_based, const char* what) {
  std::vector<int> out;
  for (int u : one_based) {
    if (u < 1) throw Error(ErrorCode::InvalidArgument, std::string(what) + " uses 1-based user labels");
    out.push_back(u - 1);
  }
  return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Outer bounds and sum-capacity certificates for Gaussian interference channels.";

  py::register_exception<Error>(m, "IfcError", PyExc_ValueError);

  m.def("count_terms", &count_terms, py::arg("K"));

  m.def(
      "tin_sum_rate", [](const CMatrix& h) { return tin_sum_rate(ChannelMatrix::validate(h)); }, py::arg("H"));
  m.def(
      "succ_dec_rates", [](const CMatrix& h) { return succ_dec_rates(ChannelMatrix::validate(h)); }, py::arg("H"));

  m.def(
      "kra_term_value",
      [](const CMatrix& h, const CMatrix& sigma, const std::vector<int>& subset, const std::vector<int>& perm) {
        return kra_term_value(ChannelMatrix::validate(h), NoiseCorrelation::validate(sigma),
                              BoundTerm{zero_based(subset, "subset"), zero_based(perm, "perm")});
      },
      py::arg("H"), py::arg("sigma"), py::arg("subset"), py::arg("perm"));

  m.def(
      "build_z_channel",
      [](const CMatrix& sigma, const std::vector<double>& gains) {
        return build_z_channel(NoiseCorrelation::validate(sigma), gains).gains();
      },
      py::arg("sigma"), py::arg("diag_gains"));
  m.def(
      "many_to_one",
      [](const std::vector<Complex>& v, const std::vector<double>& gains, bool strict) {
        return many_to_one(v, gains, strict).gains();
      },
      py::arg("v"), py::arg("diag_gains"), py::arg("strict") = true);
  m.def(
      "rank_one_channel",
      [](const std::vector<Complex>& a, const std::vector<Complex>& b) { return rank_one_channel(a, b).gains(); },
      py::arg("a"), py::arg("b"));

  m.def(
      "region_json",
      [](const CMatrix& h, std::uint64_t seed, int restarts, int max_evals, double tolerance,
         const std::vector<std::string>& families, bool sum_rate_only) {
        const ChannelMatrix ch = ChannelMatrix::validate(h);
        const OptimizerConfig cfg = make_config(seed, restarts, max_evals, tolerance);
        const std::vector<Family> fams = parse_families(families);
        const BoundReport r = [&] {
          py::gil_scoped_release release;
          return region(ch, cfg, fams, sum_rate_only);
        }();
        return to_json(r).dump();
      },
      py::arg("H"), py::arg("seed") = 0, py::arg("restarts") = 8, py::arg("max_evals") = 2000,
      py::arg("tolerance") = 1e-7, py::arg("families") = std::vector<std::string>{"KRA", "ETW"},
      py::arg("sum_rate_only") = false);

  m.def(
      "certify_json",
      [](const CMatrix& h, std::uint64_t seed, int restarts, int max_evals, double tolerance) {
        const ChannelMatrix ch = ChannelMatrix::validate(h);
        const OptimizerConfig cfg = make_config(seed, restarts, max_evals, tolerance);
        const Certificate c = [&] {
          py::gil_scoped_release release;
          return certify_sum_capacity(ch, cfg);
        }();
        return to_json(c).dump();
      },
      py::arg("H"), py::arg("seed") = 0, py::arg("restarts") = 8, py::arg("max_evals") = 2000,
      py::arg("tolerance") = 1e-7);
}
