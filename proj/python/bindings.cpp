#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "kurisym/app.hpp"

namespace py = pybind11;
using namespace kurisym;

namespace {

std::vector<std::string> coefficients(const std::string& spec) {
  const WeierstrassModel model = parse_curve_spec(spec);
  std::vector<std::string> out;
  for (const auto& a : model.coefficients()) out.push_back(a.get_str());
  return out;
}

RunConfig base(Command cmd, const std::string& curve, i64 p, unsigned threads, std::optional<std::string> cache_dir) {
  RunConfig c;
  c.command = cmd;
  c.curve = curve;
  c.p = p;
  c.threads = threads;
  c.timings = false;
  if (cache_dir) c.cache_dir = std::filesystem::path(*cache_dir);
  return c;
}

std::string run_released(const RunConfig& c) {
  py::gil_scoped_release nogil;
  return run(c);
}

}  // namespace

PYBIND11_MODULE(_kurisym, m) {
  static py::exception<Error> error(m, "KurisymError");
  py::register_exception_translator([](std::exception_ptr ep) {
    try {
      if (ep) std::rethrow_exception(ep);
    } catch (const Error& e) {
      PyErr_SetObject(error.ptr(), py::make_tuple(e.what(), exit_code(e.code())).ptr());
    }
  });

  m.attr("__version__") = kToolVersion;

  m.def("parse_curve", &coefficients, py::arg("spec"), "a-invariants of a curve spec, as decimal strings");

  m.def(
      "analyze",
      [](const std::string& curve, i64 p, std::optional<std::string> cache_dir) {
        return run_released(base(Command::Analyze, curve, p, 1, cache_dir));
      },
      py::arg("curve"), py::arg("p"), py::arg("cache_dir") = py::none());

  m.def(
      "sweep",
      [](const std::string& curve, i64 p, i64 lmax, int rmax, int mm, bool diagnostic_parity, unsigned threads,
         double budget, std::optional<std::string> cache_dir) {
        RunConfig c = base(Command::Sweep, curve, p, threads, cache_dir);
        c.lmax = lmax;
        c.rmax = rmax;
        c.m = mm;
        c.diagnostic_parity = diagnostic_parity;
        c.work_budget = budget;
        return run_released(c);
      },
      py::arg("curve"), py::arg("p"), py::arg("lmax") = 1000, py::arg("rmax") = 2, py::arg("m") = 1,
      py::arg("diagnostic_parity") = false, py::arg("threads") = 1, py::arg("budget") = 2e10,
      py::arg("cache_dir") = py::none());

  m.def(
      "heegner",
      [](const std::string& curve, i64 p, i64 disc, i64 lmax, std::optional<std::string> cache_dir) {
        RunConfig c = base(Command::Heegner, curve, p, 1, cache_dir);
        c.disc = disc;
        c.lmax = lmax;
        return run_released(c);
      },
      py::arg("curve"), py::arg("p"), py::arg("disc"), py::arg("lmax") = 1000, py::arg("cache_dir") = py::none());
}
