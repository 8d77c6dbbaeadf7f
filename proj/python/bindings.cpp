#include <optional>
#include <sstream>

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "json.hpp"

#include "betadual/cli.hpp"
#include "betadual/errors.hpp"
#include "betadual/hightemp_density.hpp"
#include "betadual/loggas.hpp"
#include "betadual/matrixmodels.hpp"
#include "betadual/orthopoly.hpp"
#include "betadual/resolvent.hpp"

namespace py = pybind11;
using namespace betadual;

namespace {

std::optional<Rational> rational(const std::optional<std::string>& s) {
  if (!s) return std::nullopt;
  return parse_rational(*s);
}

template <class T>
std::string dump(const T& v) {
  return nlohmann::json(v).dump();
}

DualityReport dual_check(const std::string& identity, int order) {
  if (identity == "gauss-finite" || identity.rfind("laguerre-finite", 0) == 0)
    return duality_check_finite(parse_finite_duality(identity), order);
  return duality_check_series(parse_series_identity(identity), order);
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "High-low temperature duality checks for classical beta ensembles";
  py::register_exception<PoleError>(m, "PoleError", PyExc_ArithmeticError);
  py::register_exception<ConvergenceError>(m, "ConvergenceError", PyExc_RuntimeError);
  py::register_exception<OrderUnderflow>(m, "OrderUnderflow", PyExc_ValueError);

  m.def(
      "run_cli",
      [](const std::vector<std::string>& args) {
        std::ostringstream out, err;
        const int code = run_cli(args, out, err);
        return py::make_tuple(code, out.str(), err.str());
      },
      py::arg("args"));

  m.def(
      "moments_json",
      [](const std::string& family, int order, const std::string& regime, const std::string& source) {
        const Family f = parse_family(family);
        return dump(parse_regime(regime) == Regime::Low ? moments_zero_temp(f, order, parse_source(source))
                                                        : moments_high_temp(f, order));
      },
      py::arg("family"), py::arg("order"), py::arg("regime") = "low", py::arg("source") = "rederived");

  m.def(
      "moments_text",
      [](const std::string& family, int order, const std::string& regime) {
        const Family f = parse_family(family);
        MomentSeries ms = parse_regime(regime) == Regime::Low ? moments_zero_temp(f, order) : moments_high_temp(f, order);
        std::vector<std::string> out;
        for (const auto& c : ms.moments) out.push_back(c.to_string());
        return out;
      },
      py::arg("family"), py::arg("order"), py::arg("regime") = "low");

  m.def(
      "dual_check_json", [](const std::string& identity, int order) { return dump(dual_check(identity, order)); },
      py::arg("identity"), py::arg("order"));

  m.def(
      "poly_zeros",
      [](const std::string& family, int n, std::optional<std::string> a, std::optional<std::string> b) {
        return poly_zeros(parse_family(family), n, rational(a), rational(b)).zeros;
      },
      py::arg("family"), py::arg("n"), py::arg("a") = std::nullopt, py::arg("b") = std::nullopt);

  m.def(
      "crystallize_json",
      [](const std::string& family, int n, double a, double b, double tol) {
        return dump(crystallize(Potential{parse_family(family), n, a, b}, std::nullopt, tol));
      },
      py::arg("family"), py::arg("n"), py::arg("a") = 0.0, py::arg("b") = 0.0, py::arg("tol") = 1e-12);

  m.def("harmonic_two_point", &harmonic_two_point, py::arg("n"), py::arg("x1"), py::arg("x2"));

  m.def(
      "sample_spectrum",
      [](const std::string& family, int n, double kappa, double a, std::uint64_t seed, std::uint64_t index) {
        return sample_spectrum(ModelParams{parse_family(family), n, kappa, a}, seed, index).eigenvalues;
      },
      py::arg("family"), py::arg("n"), py::arg("kappa"), py::arg("a") = 0.0, py::arg("seed") = 1,
      py::arg("index") = 0);

  m.def(
      "mc_moments_json",
      [](const std::string& family, int n, double kappa, double a, int k_max, std::size_t samples,
         std::uint64_t seed) {
        py::gil_scoped_release release;
        return dump(mc_moments(ModelParams{parse_family(family), n, kappa, a}, k_max, samples, seed));
      },
      py::arg("family"), py::arg("n"), py::arg("kappa"), py::arg("a") = 0.0, py::arg("k_max") = 4,
      py::arg("samples") = 10000, py::arg("seed") = 1);

  m.def(
      "exact_moment",
      [](const std::string& family, int n, double kappa, double a, int k) {
        return exact_moment(ModelParams{parse_family(family), n, kappa, a}, k);
      },
      py::arg("family"), py::arg("n"), py::arg("kappa"), py::arg("a") = 0.0, py::arg("k") = 1);

  m.def("high_temp_density", &high_temp_density, py::arg("x"), py::arg("alpha"));
  m.def("high_temp_resolvent", &high_temp_resolvent, py::arg("x"), py::arg("alpha"));
  m.def("stieltjes_pv", &stieltjes_pv, py::arg("x"), py::arg("alpha"));
  m.def("density_moment", &density_moment, py::arg("k"), py::arg("alpha"));
}
