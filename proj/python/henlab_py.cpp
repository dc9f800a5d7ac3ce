#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "commands.hpp"
#include "henlab/atlas.hpp"
#include "henlab/errors.hpp"
#include "henlab/henon.hpp"
#include "henlab/maps1d.hpp"
#include "henlab/renorm.hpp"

namespace py = pybind11;
using namespace henlab;

namespace {

py::object lyap_to_py(const LyapValue& v) {
  switch (v.kind) {
    case LyapValue::Kind::MinusInf:
      return py::float_(-HUGE_VAL);
    case LyapValue::Kind::Escape:
      return py::none();
    default:
      return py::float_(v.value);
  }
}

}  // namespace

PYBIND11_MODULE(_henlab, m) {
  auto base = py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);
  py::register_exception<ConvergenceError>(m, "ConvergenceError", PyExc_RuntimeError);
  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
  (void)base;

  m.def("special_parameters", [] {
    auto sp = special_parameters();
    return py::dict(py::arg("a1") = sp.a1, py::arg("a2") = sp.a2);
  });
  m.def("ladder", [](double a) {
    auto l = ladder(a);
    return py::dict(py::arg("alpha") = l.alpha, py::arg("beta") = l.beta, py::arg("alpha0") = l.alpha0,
                    py::arg("alpha1") = l.alpha1, py::arg("alpha2") = l.alpha2, py::arg("alpha3") = l.alpha3);
  });
  m.def("superstable_c1", &superstable_c1);

  m.def("normalize_word", [](const std::string& w) { return format_word(parse_word(w)); });
  m.def("piece", [](const std::string& w, double a) {
    auto p = piece_1d(parse_word(w), a);
    return py::dict(py::arg("lo") = p.lo, py::arg("hi") = p.hi, py::arg("order") = p.order,
                    py::arg("image_lo") = p.image_lo, py::arg("image_hi") = p.image_hi);
  });
  m.def("swallow_tag", [](double a, double b, int n_max) { return tag_name(swallow_classify(a, b, n_max).tag); },
        py::arg("a"), py::arg("b"), py::arg("n_max") = 2000);

  m.def("maps", &registry_names);
  m.def(
      "step",
      [](double a, double b, double x, double y, const std::string& map) {
        auto z = make_map(map, a, b)({x, y});
        return py::make_tuple(z.x, z.y);
      },
      py::arg("a"), py::arg("b"), py::arg("x"), py::arg("y"), py::arg("map") = "standard");
  m.def(
      "escape_steps",
      [](double a, double b, double x, double y, int n_max, const std::string& map) {
        return escape_steps(make_map(map, a, b), {x, y}, n_max);
      },
      py::arg("a"), py::arg("b"), py::arg("x") = 0.0, py::arg("y") = 0.0, py::arg("n_max") = 2000,
      py::arg("map") = "standard");
  m.def(
      "lyapunov",
      [](double a, double b, int n, const std::string& map) {
        return lyap_to_py(lyapunov(make_map(map, a, b), {0, 0}, {1, 0}, n));
      },
      py::arg("a"), py::arg("b"), py::arg("n") = 10000, py::arg("map") = "standard");

  m.def(
      "renormalize",
      [](double a, double b, const std::string& word, const std::string& map, int grid) {
        auto r = renormalize(make_map(map, a, b), parse_word(word), 2.5, grid);
        return py::dict(py::arg("abar") = r.abar, py::arg("bbar") = r.bbar, py::arg("n") = r.n,
                        py::arg("c") = r.tangency.c, py::arg("mu") = r.tangency.mu, py::arg("q") = r.tangency.q,
                        py::arg("sigma") = r.tangency.sigma, py::arg("delta_star") = r.delta_star());
      },
      py::arg("a"), py::arg("b"), py::arg("word") = "c1", py::arg("map") = "standard", py::arg("grid") = 33);
  m.def(
      "renorm_window",
      [](const std::string& word, double b, const std::string& map) {
        auto w = renorm_window(family(map), parse_word(word), b);
        return py::make_tuple(w.a_lo, w.a_mu, w.a_hi);
      },
      py::arg("word") = "c1", py::arg("b") = 0.0, py::arg("map") = "standard");

  m.def(
      "sweep",
      [](const std::string& kernel, std::pair<double, double> a_range, std::pair<double, double> b_range, int width,
         int height, int workers, const std::string& map) {
        KernelParams p;
        p.map = map;
        Kernel k = parse_kernel(kernel);
        if (k == Kernel::EmbedCompare) throw ConfigError("embed-compare is available through the CLI only");
        Raster r;
        {
          py::gil_scoped_release release;
          r = sweep({a_range.first, a_range.second, b_range.first, b_range.second}, k, width, height, p, workers);
        }
        py::array_t<double> out({height, width});
        auto v = out.mutable_unchecked<2>();
        for (int j = 0; j < height; ++j)
          for (int i = 0; i < width; ++i) v(j, i) = r.at(i, j).value;
        return out;
      },
      py::arg("kernel"), py::arg("a_range"), py::arg("b_range"), py::arg("width"), py::arg("height"),
      py::arg("workers") = 0, py::arg("map") = "standard");

  m.def("cli", [](std::vector<std::string> args) {
    args.insert(args.begin(), "henlab");
    std::vector<const char*> argv;
    for (auto& s : args) argv.push_back(s.c_str());
    std::ostringstream out, err;
    int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
    return py::make_tuple(code, out.str(), err.str());
  });
}
