#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "ncgeo/config.hpp"
#include "ncgeo/errors.hpp"
#include "ncgeo/index_calculus.hpp"
#include "ncgeo/linearized.hpp"
#include "ncgeo/metric.hpp"
#include "ncgeo/pipeline.hpp"
#include "ncgeo/search.hpp"
#include "ncgeo/topology.hpp"

namespace py = pybind11;
using namespace ncgeo;

namespace {

std::vector<Rational> angles(const std::vector<std::string>& in) {
  std::vector<Rational> out;
  for (const auto& s : in) out.push_back(parse_rational(s));
  return out;
}

std::string rational_str(const Rational& r) { return to_string(r); }

py::dict counting_dict(const CountingReport& c) {
  py::dict d;
  d["N"] = c.N;
  d["bound_c1"] = c.bound_c1;
  d["bound_c2"] = c.bound_c2;
  d["closed_form_c2"] = c.closed_form_c2;
  d["branch"] = c.branch;
  d["x"] = c.x;
  d["bound_c2_over_pi"] = c.bound_c2_over_pi ? py::object(py::str(rational_str(*c.bound_c2_over_pi))) : py::none();
  d["branch_within_closed_form"] = c.branch_within_closed_form;
  return d;
}

}  // namespace

PYBIND11_MODULE(_ncgeo, m) {
  m.doc() = "Closed geodesics on Finsler space forms: search, stability and index calculus";

  auto base = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
  auto with_base = [&](PyObject* std_base) { return py::make_tuple(base, py::handle(std_base)); };
  py::register_exception<PreconditionError>(m, "PreconditionError", with_base(PyExc_ValueError));
  py::register_exception<DomainError>(m, "DomainError", with_base(PyExc_ValueError));
  py::register_exception<DataError>(m, "DataError", with_base(PyExc_ValueError));
  py::register_exception<ConfigError>(m, "ConfigError", with_base(PyExc_ValueError));
  py::register_exception<IoError>(m, "IoError", with_base(PyExc_OSError));

  m.def("betti", &betti, py::arg("n"), py::arg("q"));
  m.def("poincare_series_coeffs", &poincare_series_coeffs, py::arg("n"), py::arg("Q"));

  py::class_<NormalForm>(m, "NormalForm")
      .def(py::init([](int n, int i1, int nu1, int p_minus, int p_zero, int p_plus, int q_minus, int q_zero,
                       int q_plus, int r_prime, int h_count, const std::vector<std::string>& thetas,
                       const std::vector<std::string>& alphas, const std::vector<std::string>& betas) {
             NormalForm nf;
             nf.n = n;
             nf.i1 = i1;
             nf.nu1 = nu1;
             nf.p_minus = p_minus;
             nf.p_zero = p_zero;
             nf.p_plus = p_plus;
             nf.q_minus = q_minus;
             nf.q_zero = q_zero;
             nf.q_plus = q_plus;
             nf.r_prime = r_prime;
             nf.h_count = h_count;
             nf.thetas = angles(thetas);
             nf.alphas = angles(alphas);
             nf.betas = angles(betas);
             validate(nf);
             return nf;
           }),
           py::arg("n"), py::arg("i1") = 0, py::arg("nu1") = 0, py::arg("p_minus") = 0, py::arg("p_zero") = 0,
           py::arg("p_plus") = 0, py::arg("q_minus") = 0, py::arg("q_zero") = 0, py::arg("q_plus") = 0,
           py::arg("r_prime") = 0, py::arg("h_count") = 0, py::arg("thetas") = std::vector<std::string>{},
           py::arg("alphas") = std::vector<std::string>{}, py::arg("betas") = std::vector<std::string>{})
      .def("index", [](const NormalForm& nf, int mm) { return index_iterate(nf, mm); }, py::arg("m"))
      .def("nullity", [](const NormalForm& nf, int mm) { return nullity_iterate(nf, mm); }, py::arg("m"))
      .def("index_float", [](const NormalForm& nf, int mm) { return index_iterate(to_long_double(nf), mm); },
           py::arg("m"))
      .def("mean_index", [](const NormalForm& nf) { return rational_str(mean_index(nf)); })
      .def("growth_bound", [](const NormalForm& nf) { return linear_growth_bound(nf); });

  m.def("thm1_counting",
        [](const std::string& delta, const std::string& lambda) {
          return counting_dict(thm1_counting(parse_rational(delta), parse_rational(lambda)));
        },
        py::arg("delta"), py::arg("lambda_"));
  m.def("thm3_count",
        [](int n, int p, const std::string& lambda, const std::string& delta, const std::string& rho) {
          return thm3_count(n, p, parse_rational(lambda), parse_rational(delta), parse_rational(rho));
        },
        py::arg("n"), py::arg("p"), py::arg("lambda_"), py::arg("delta"), py::arg("rho"));
  m.def("standard_metric_index", &standard_metric_index, py::arg("m"), py::arg("n"), py::arg("p"));
  m.def("bound_min_length", &bound_min_length, py::arg("lambda_"));
  m.def("bound_index_from_length", &bound_index_from_length, py::arg("L"), py::arg("delta"), py::arg("n"));
  m.def("bound_mean_index", &bound_mean_index, py::arg("delta"), py::arg("lambda_"), py::arg("n"), py::arg("p"));

  m.def("reversibility",
        [](const std::string& kind, int n, double alpha, int grid) {
          return MetricSpec::make(metric_kind_from_string(kind), n, alpha, grid).lambda;
        },
        py::arg("kind"), py::arg("n"), py::arg("alpha") = 0.0, py::arg("grid") = kDefaultGrid);

  m.def("find_geodesics",
        [](int n, int p, const std::string& kind, double alpha, int seeds, int N, std::uint64_t rng_seed,
           bool analyze) {
          ExperimentConfig cfg;
          cfg.n = n;
          cfg.p = p;
          cfg.metric = metric_kind_from_string(kind);
          cfg.alpha = alpha;
          cfg.search.seeds = seeds;
          cfg.search.N = N;
          cfg.search.rng_seed = rng_seed;
          cfg.poincare = analyze;
          cfg.index_oracle = analyze;
          const PipelineResult r = run_pipeline(cfg);
          if (!r.error.empty()) throw Error(r.error);
          py::list out;
          for (const auto& rec : r.search.records) {
            py::dict d;
            d["length"] = rec.length;
            d["energy"] = rec.energy;
            d["index"] = rec.index;
            d["nullity"] = rec.nullity;
            d["residual"] = rec.residual;
            d["simple"] = rec.simple;
            d["class_power"] = rec.class_power;
            d["eigenvalues"] = rec.eigenvalues;
            out.append(d);
          }
          return out;
        },
        py::arg("n"), py::arg("p"), py::arg("kind") = "round", py::arg("alpha") = 0.0, py::arg("seeds") = 4,
        py::arg("N") = 64, py::arg("rng_seed") = 1, py::arg("analyze") = true);
}
