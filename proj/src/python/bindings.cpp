#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "specflow/almost_eigen.hpp"
#include "specflow/counting.hpp"
#include "specflow/io.hpp"
#include "specflow/matrix_sf.hpp"
#include "specflow/oscillator.hpp"
#include "specflow/profiles.hpp"
#include "specflow/radial_dirac.hpp"

namespace py = pybind11;
using namespace specflow;

namespace {

SectorSpec sector_arg(const ContactProfile& p, const std::string& s) { return sector_for(p, sector_kind_from_string(s)); }

py::dict green_dict(const GreenReport& r) {
  py::dict d;
  d["ratio"] = r.ratio;
  d["overlap"] = r.overlap;
  d["residual"] = r.residual;
  return d;
}

}  // namespace

PYBIND11_MODULE(_specflow, m) {
  m.doc() = "Spectral flow toolkit for S1 x S1 symmetric contact forms";

  py::class_<ContactProfile>(m, "ContactProfile")
      .def_property_readonly("kind", [](const ContactProfile& p) { return std::string(to_string(p.kind)); })
      .def_readonly("rho_lo", &ContactProfile::rho_lo)
      .def_readonly("rho_hi", &ContactProfile::rho_hi)
      .def_property_readonly("V", [](const ContactProfile& p) { return p.params.V; })
      .def_property_readonly("eps", [](const ContactProfile& p) { return p.params.eps; })
      .def_property_readonly("v", [](const ContactProfile& p) { return p.params.v; })
      .def("f", &ContactProfile::f)
      .def("g", &ContactProfile::g)
      .def("delta", [](const ContactProfile& p, double rho) { return delta(p, rho); })
      .def("validate",
           [](const ContactProfile& p, int samples) {
             std::vector<std::tuple<std::string, bool, std::string>> out;
             for (const auto& c : validate_profile(p, samples)) out.emplace_back(c.name, c.ok, c.detail);
             return out;
           },
           py::arg("samples") = 10000)
      .def("to_json", [](const ContactProfile& p) { return profile_to_json(p).dump(); });

  m.def("build_binding_profile", &build_binding_profile, py::arg("V"), py::arg("eps") = 0.01);
  m.def(
      "build_dehn_profile",
      [](double V, double v, int N, int sign, double eps) { return build_dehn_profile(V, v, make_twist(N, sign, eps), eps); },
      py::arg("V"), py::arg("v"), py::arg("N") = 1, py::arg("sign") = 1, py::arg("eps") = 0.01);
  m.def("profile_from_json", [](const std::string& s) { return profile_from_json(Json::parse(s)); });
  m.def("integral_delta", py::overload_cast<const ContactProfile&>(&integral_delta));

  py::class_<ModePoint>(m, "ModePoint")
      .def_readonly("k", &ModePoint::k)
      .def_readonly("m", &ModePoint::m)
      .def_readonly("rho_star", &ModePoint::rho_star)
      .def_readonly("gamma", &ModePoint::gamma);
  py::class_<TaylorData>(m, "TaylorData")
      .def(py::init<>())
      .def_readwrite("gamma", &TaylorData::gamma)
      .def_readwrite("rho_star", &TaylorData::rho_star)
      .def_readwrite("c1", &TaylorData::c1)
      .def_readwrite("c2", &TaylorData::c2)
      .def_readwrite("c3", &TaylorData::c3)
      .def_readwrite("r1", &TaylorData::r1)
      .def_readwrite("r2", &TaylorData::r2)
      .def_readwrite("r3", &TaylorData::r3)
      .def_readwrite("r4", &TaylorData::r4)
      .def_readwrite("p1", &TaylorData::p1);
  m.def("mode_point", &mode_point);
  m.def("is_pole_mode", &is_pole_mode);
  m.def("taylor_at", &taylor_at);

  m.def("lattice_count", [](const ContactProfile& p, double r, const std::string& sector) {
    return lattice_count(p, r, sector_arg(p, sector));
  }, py::arg("profile"), py::arg("r"), py::arg("sector") = "all");
  m.def("enumerate_modes", [](const ContactProfile& p, double r, const std::string& sector) {
    return enumerate_modes(p, r, sector_arg(p, sector));
  }, py::arg("profile"), py::arg("r"), py::arg("sector") = "all");

  py::class_<ModeOperator>(m, "ModeOperator")
      .def_readonly("mode", &ModeOperator::mode)
      .def_property_readonly("backend", [](const ModeOperator& o) { return std::string(to_string(o.backend)); })
      .def_readonly("a", &ModeOperator::a)
      .def_readonly("b", &ModeOperator::b)
      .def_readonly("n_cells", &ModeOperator::n_cells)
      .def("size", &ModeOperator::size);
  m.def("assemble", py::overload_cast<const ContactProfile&, long, long, int>(&assemble), py::arg("profile"),
        py::arg("k"), py::arg("m"), py::arg("n_cells") = kDefaultCells);
  m.def("small_eigs", [](const ModeOperator& op, double r, int q) {
    const EigenResult e = small_eigs(op, r, q);
    return py::make_tuple(e.eigenvalues, e.vectors, e.residuals);
  }, py::arg("op"), py::arg("r"), py::arg("q") = 1);
  m.def("crossing_r", &crossing_r, py::arg("op"), py::arg("r_lo"), py::arg("r_hi"), py::arg("tol") = 1e-10);
  m.def("eigen_derivative", py::overload_cast<const ModeOperator&, double>(&eigen_derivative));
  m.def("model_sf", [](const ContactProfile& p, double r, const std::string& sector, int n_cells, int threads) {
    ModelSfOptions o;
    o.n_cells = n_cells;
    o.threads = threads;
    const ModelSfResult res = model_sf(p, r, sector_arg(p, sector), o);
    std::vector<std::tuple<long, long, double, double, double>> rows;
    for (const auto& c : res.table) rows.emplace_back(c.k, c.m, c.gamma, c.r_star, c.residual);
    return py::make_tuple(res.count, rows);
  }, py::arg("profile"), py::arg("r"), py::arg("sector") = "all", py::arg("n_cells") = kDefaultCells,
     py::arg("threads") = 0);

  m.def("kernel1d", [](double gamma, double x) { return kernel1d({gamma, 0.0}, x); });
  m.def("kernel2d", [](double gamma, long k, std::complex<double> z) { return kernel2d({gamma, k}, z); });
  m.def("green1d_bound_check", [](double gamma, const std::vector<double>& x, const std::vector<double>& eta) {
    return green_dict(green1d_bound_check(gamma, x, eta));
  });
  m.def("second_order_lambda", &second_order_lambda);
  m.def("second_order_section", [](const TaylorData& td, double r, double x) {
    const SectionValue s = second_order_section(td, r, x);
    return py::make_tuple(s.alpha, s.beta);
  });
  m.def("decay_bound", [](long k, long mm, double z) {
    const DecayResult d = decay_bound(k, mm, z);
    return py::make_tuple(d.value, d.bound, d.holds);
  });

  m.def("spectral_flow", [](const std::vector<Eigen::MatrixXcd>& samples, int grid, double tol) {
    const SfResult r = spectral_flow(sampled_path(samples), grid, tol);
    std::vector<std::tuple<double, int, int, double>> rows;
    for (const auto& c : r.crossings) rows.emplace_back(c.s_star, c.sign, c.multiplicity, c.lambda_prime);
    return py::make_tuple(r.flow, rows);
  }, py::arg("samples"), py::arg("grid") = kDefaultSfGrid, py::arg("tol") = kDefaultSfTol);
  m.def("negcount_delta", [](const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) { return negcount_delta(a, b); });

  m.def("eta_circle", [](double theta) {
    const EtaH e = eta_circle(theta);
    return py::make_tuple(e.eta, e.h);
  });
  m.def("index_sigma", [](double V, double v, long n) { return index_sigma(default_sigma(V, v), n); });

  m.def("welch_lower_bound", &welch_lower_bound);
  m.def("run_lemma_suite", [](long trials, std::uint64_t seed, long coherence_trials) {
    const LemmaSuiteSummary s = run_lemma_suite(trials, seed, 0, coherence_trials);
    py::dict d;
    d["trials"] = s.trials;
    d["matchings_found"] = s.matchings_found;
    d["hypothesis_failures"] = s.hypothesis_failures;
    d["worst_gap_over_bound"] = s.worst_gap_ratio;
    d["welch_sets"] = s.welch_sets;
    d["welch_ok"] = s.welch_ok;
    d["min_max_coherence"] = s.coherence.best;
    return d;
  }, py::arg("trials") = 500, py::arg("seed") = 42, py::arg("coherence_trials") = 100000);
}
