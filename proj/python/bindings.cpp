#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "dmdsep/baselines.hpp"
#include "dmdsep/dmd.hpp"
#include "dmdsep/harness.hpp"
#include "dmdsep/lagstats.hpp"
#include "dmdsep/metrics.hpp"
#include "dmdsep/rng.hpp"
#include "dmdsep/signals.hpp"

namespace py = pybind11;
using namespace dmdsep;

namespace {

py::dict eig_dict(const linalg::ComplexEig& e) {
  py::dict d;
  d["values"] = e.values;
  d["vectors"] = e.vectors;
  return d;
}

py::dict dmd_dict(const dmd::DmdResult& r) {
  py::dict d = eig_dict(r.eig);
  d["tau"] = r.tau;
  d["rank"] = r.rank;
  d["detected_rank"] = r.detected_rank;
  d["warnings"] = r.warnings;
  if (r.a_hat) d["a_hat"] = *r.a_hat;
  return d;
}

py::dict record_dict(const harness::ExperimentRecord& r) {
  py::dict d;
  d["suite"] = r.suite;
  d["n"] = r.n;
  d["p"] = r.p;
  d["k"] = r.k;
  d["tau"] = r.tau;
  d["q"] = r.q;
  d["trial"] = r.trial;
  d["method"] = r.method;
  d["q_sq_error"] = r.q_sq_error;
  d["s_sq_error"] = r.s_sq_error;
  d["eig_sq_error"] = r.eig_sq_error;
  d["wall_ms"] = r.wall_ms;
  return d;
}

dmd::DmdOptions options(bool keep_operator) {
  dmd::DmdOptions o;
  o.keep_operator = keep_operator;
  return o;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Blind source separation with dynamic mode decomposition";

  static py::exception<ValidationError> validation(m, "ValidationError", PyExc_ValueError);
  static py::exception<NumericalError> numerical(m, "NumericalError", PyExc_ArithmeticError);
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const ValidationError& e) {
      py::set_error(validation, e.what());
    } catch (const NumericalError& e) {
      py::set_error(numerical, e.what());
    }
  });

  m.def("svd", [](const Matrix& a) {
    const linalg::Svd s = linalg::svd(a);
    return py::make_tuple(s.U, s.sigma, s.V);
  }, py::arg("a"), "Thin SVD; returns (U, sigma, V).");
  m.def("pinv", py::overload_cast<const Matrix&, double>(&linalg::pinv), py::arg("a"),
        py::arg("rel_tol") = linalg::kDefaultPinvTol);
  m.def("eig_nonsymmetric", [](const Matrix& a) { return eig_dict(linalg::eig_nonsymmetric(a)); }, py::arg("a"));

  m.def("gen_cosines", [](const std::vector<double>& omegas, Index n, const std::vector<double>& phases) {
    return signals::gen_cosines({omegas, phases}, n);
  }, py::arg("omegas"), py::arg("n"), py::arg("phases") = std::vector<double>{});
  m.def("gen_arma", [](const std::vector<double>& ar, const std::vector<double>& ma, Index n, std::uint64_t seed,
                       double innovation_std) {
    return signals::gen_arma({ar, ma, innovation_std}, n, seed);
  }, py::arg("ar"), py::arg("ma"), py::arg("n"), py::arg("seed"), py::arg("innovation_std") = 1.0);
  m.def("gen_changepoint_suite", &signals::gen_changepoint_suite, py::arg("n"), py::arg("seed"));
  m.def("gen_audio_standin", &signals::gen_audio_standin, py::arg("n"));
  m.def("random_unit_columns", &signals::random_unit_columns, py::arg("p"), py::arg("k"), py::arg("seed"));
  m.def("assemble", [](const Matrix& q, const Vector& d, const Matrix& c) {
    const signals::SourceModel s = signals::assemble(q, d, c);
    return py::make_tuple(s.Q, s.d, s.S, s.X);
  }, py::arg("q"), py::arg("d"), py::arg("c_raw"), "Returns (Q, d, S, X).");
  m.def("assemble_natural", [](const Matrix& b, const Matrix& c) {
    const signals::SourceModel s = signals::assemble_natural(b, c);
    return py::make_tuple(s.Q, s.d, s.S, s.X);
  }, py::arg("b"), py::arg("c_raw"), "Returns (Q, d, S, X).");
  m.def("apply_mask", [](const Matrix& x, double q, std::uint64_t seed) {
    return signals::apply_mask(x, {q, seed});
  }, py::arg("x"), py::arg("q"), py::arg("seed"));
  m.def("derive_seed", [](std::uint64_t base, const std::string& cell, std::uint64_t trial) {
    return derive_seed(base, cell, trial);
  }, py::arg("base"), py::arg("cell"), py::arg("trial"));

  m.def("lag_cov", [](const Matrix& s, Index tau) {
    const lagstats::LagCov l = lagstats::lag_cov(s, tau);
    return py::make_tuple(l.L, l.delta_l);
  }, py::arg("s"), py::arg("tau"), "Returns (L, delta_L).");

  m.def("dmd_fit", [](const Matrix& x, Index tau, Index k, bool keep_operator) {
    return dmd_dict(dmd::dmd_fit(x, tau, k, options(keep_operator)));
  }, py::arg("x"), py::arg("tau"), py::arg("k"), py::arg("keep_operator") = false);
  m.def("tsvd_dmd_fit", [](const Matrix& x, double q, Index tau, Index k) {
    return dmd_dict(dmd::tsvd_dmd_fit(x, q, tau, k));
  }, py::arg("x_masked"), py::arg("q"), py::arg("tau"), py::arg("k"));
  m.def("recover_signals", [](const Matrix& x, const CMatrix& modes) {
    const dmd::RecoveredSignals r = dmd::recover_signals(x, dmd::left_vectors(modes));
    return py::make_tuple(r.s_hat, r.warnings);
  }, py::arg("x"), py::arg("modes"), "Returns (S_hat, warnings).");
  m.def("dmf", [](const Matrix& x, Index tau, Index k) {
    const dmd::DmfResult f = dmd::dmf(x, tau, k);
    py::dict d;
    d["q_hat"] = f.q_hat;
    d["c_hat"] = f.c_hat;
    d["mu_hat"] = f.mu_hat;
    d["eigvals"] = f.eigvals;
    d["dropped_mean_norm"] = f.dropped_mean_norm;
    d["warnings"] = f.warnings;
    return d;
  }, py::arg("x"), py::arg("tau"), py::arg("k"));

  m.def("amuse", [](const Matrix& x, Index tau, Index k) {
    const baselines::UnmixResult r = baselines::amuse(x, tau, k);
    return py::make_tuple(r.q_hat, r.s_hat);
  }, py::arg("x"), py::arg("tau"), py::arg("k"), "Returns (Q_hat, S_hat).");
  m.def("pca_unmix", [](const Matrix& x, Index k) {
    const baselines::UnmixResult r = baselines::pca_unmix(x, k);
    return py::make_tuple(r.q_hat, r.s_hat);
  }, py::arg("x"), py::arg("k"), "Returns (Q_hat, S_hat).");

  m.def("align_columns", [](const CMatrix& est, const Matrix& truth) {
    const metrics::Alignment a = metrics::align_columns(est, truth);
    py::dict d;
    d["perm"] = a.perm;
    d["phases"] = a.phases;
    d["total_sq_error"] = a.total_sq_error;
    d["degenerate"] = a.degenerate;
    return d;
  }, py::arg("est"), py::arg("truth"));
  m.def("s_error", &metrics::s_error, py::arg("est"), py::arg("truth"));
  m.def("rate_fit", [](const std::vector<double>& ns, const std::vector<double>& errors) {
    const metrics::RateFit f = metrics::rate_fit(ns, errors);
    return py::make_tuple(f.slope, f.intercept, f.r2);
  }, py::arg("ns"), py::arg("errors"), "Returns (slope, intercept, r2).");

  m.attr("SUITES") = harness::kSuites;
  m.def("run_experiment", [](const std::string& suite, py::dict overrides) {
    harness::ExperimentConfig cfg = harness::default_config(suite);
    for (auto item : overrides) {
      const std::string key = py::str(item.first);
      if (key == "n_grid") cfg.n_grid = item.second.cast<std::vector<Index>>();
      else if (key == "tau_list") cfg.tau_list = item.second.cast<std::vector<Index>>();
      else if (key == "q_grid") cfg.q_grid = item.second.cast<std::vector<double>>();
      else if (key == "p") cfg.p = item.second.cast<Index>();
      else if (key == "trials") cfg.trials = item.second.cast<Index>();
      else if (key == "seed") cfg.seed = item.second.cast<std::uint64_t>();
      else throw ValidationError("config field '" + key + "': not settable here");
    }
    py::list out;
    for (const auto& r : harness::run_experiment(cfg)) out.append(record_dict(r));
    return out;
  }, py::arg("suite"), py::arg("overrides") = py::dict());
}
