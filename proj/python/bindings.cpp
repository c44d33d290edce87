#include <sstream>

#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "zenolab/lab.hpp"

namespace py = pybind11;
using namespace zenolab;

namespace {

py::dict leaf_to_dict(const protocol::LeafRecord& leaf) {
  py::dict d;
  d["kind"] = leaf.kind == protocol::LeafKind::Click ? "click" : "survived";
  d["step"] = leaf.step;
  d["p_given_h0"] = leaf.p_given_h0;
  d["p_given_h1"] = leaf.p_given_h1;
  d["marginal"] = leaf.marginal;
  d["posterior"] = leaf.posterior;
  d["leaf_cost"] = leaf.leaf_cost.value();
  d["pruned"] = leaf.pruned;
  d["state0"] = leaf.state0 ? py::cast(leaf.state0->amplitudes()) : py::none();
  d["state1"] = leaf.state1 ? py::cast(leaf.state1->amplitudes()) : py::none();
  return d;
}

py::dict fit_to_dict(const series::ScalingFit& fit) {
  py::dict d;
  d["quantity"] = std::string(series::to_string(fit.quantity));
  d["exponent"] = fit.exponent;
  d["intercept"] = fit.intercept;
  d["sample_deltas"] = fit.sample_deltas;
  d["residuals"] = fit.residuals;
  d["noise_points"] = fit.noise_points;
  d["indeterminate"] = fit.indeterminate;
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Exact simulation of negative-measurement state discrimination";

  auto validation = py::register_exception<ValidationError>(m, "ValidationError", PyExc_ValueError);
  py::register_exception<DegenerateBranchError>(m, "DegenerateBranchError", PyExc_ArithmeticError);
  py::register_exception<NumericalError>(m, "NumericalError", PyExc_ArithmeticError);
  (void)validation;

  // qcore
  py::class_<qcore::HamiltonianSpec>(m, "HamiltonianSpec")
      .def(py::init([](double e0, double e1, double delta) { return qcore::HamiltonianSpec{e0, e1, delta}; }),
           py::arg("e0"), py::arg("e1"), py::arg("delta"))
      .def_readwrite("e0", &qcore::HamiltonianSpec::e0)
      .def_readwrite("e1", &qcore::HamiltonianSpec::e1)
      .def_readwrite("delta", &qcore::HamiltonianSpec::delta);

  m.def("build_hamiltonian", [](const qcore::HamiltonianSpec& s) { return qcore::build_hamiltonian(s).entries(); });
  m.def("eigendecompose", [](const qcore::HamiltonianSpec& s) {
    std::vector<std::pair<double, qcore::Vector>> out;
    for (auto& [value, v] : qcore::eigendecompose(s)) out.emplace_back(value, v);
    return out;
  });
  m.def("normalize", [](const qcore::Vector& v) { return qcore::normalize(v).amplitudes(); });
  m.def("evolve", [](const qcore::HamiltonianSpec& s, double t, const qcore::Vector& psi) {
    return qcore::evolve(s, t, qcore::PureState(psi)).amplitudes();
  });
  m.def("inner_product", [](const qcore::Vector& phi, const qcore::Vector& psi) {
    return qcore::inner_product(qcore::PureState(phi), qcore::PureState(psi));
  });
  m.def("measure_binary", [](const qcore::Vector& direction, const qcore::Vector& psi) {
    const auto o = qcore::measure_binary(qcore::MeasurementDirection(direction), qcore::PureState(psi));
    py::dict d;
    d["click_prob"] = o.click_prob;
    d["survive_prob"] = o.survive_prob;
    d["post_click_state"] = o.post_click_state.amplitudes();
    d["post_survive_state"] = o.post_survive_state.amplitudes();
    return d;
  });

  // helstrom
  m.def("helstrom_pure", [](const qcore::Vector& psi0, const qcore::Vector& psi1, double prior) {
    return helstrom::helstrom_pure({qcore::PureState(psi0), qcore::PureState(psi1), prior}).value();
  }, py::arg("psi0"), py::arg("psi1"), py::arg("prior"));
  m.def("helstrom_mixed", [](const qcore::Matrix& rho0, const qcore::Matrix& rho1, double prior) {
    return helstrom::helstrom_mixed(rho0, rho1, prior).value();
  }, py::arg("rho0"), py::arg("rho1"), py::arg("prior"));
  m.def("posterior_update", &helstrom::posterior_update, py::arg("prior"), py::arg("p_event_given_h0"),
        py::arg("p_event_given_h1"));
  m.def("guess_only_cost", [](double prior) { return helstrom::guess_only_cost(prior).value(); });

  // protocol
  py::enum_<protocol::AccountingMode>(m, "AccountingMode")
      .value("EXACT", protocol::AccountingMode::Exact)
      .value("PAPER", protocol::AccountingMode::Paper);

  py::class_<protocol::ProtocolParams>(m, "ProtocolParams")
      .def(py::init<>())
      .def_static("from_b", &protocol::ProtocolParams::from_b, py::arg("b"), py::arg("delta"), py::arg("dt"),
                  py::arg("k"), py::arg("prior") = 0.5)
      .def_static("from_a", &protocol::ProtocolParams::from_a, py::arg("a"), py::arg("delta"), py::arg("dt"),
                  py::arg("k"), py::arg("prior") = 0.5)
      .def_readwrite("a", &protocol::ProtocolParams::a)
      .def_readwrite("b", &protocol::ProtocolParams::b)
      .def_readwrite("delta", &protocol::ProtocolParams::delta)
      .def_readwrite("dt", &protocol::ProtocolParams::dt)
      .def_readwrite("k", &protocol::ProtocolParams::k)
      .def_readwrite("e0", &protocol::ProtocolParams::e0)
      .def_readwrite("e1", &protocol::ProtocolParams::e1)
      .def_readwrite("prior", &protocol::ProtocolParams::prior)
      .def_readwrite("mode", &protocol::ProtocolParams::mode)
      .def_property(
          "direction", [](const protocol::ProtocolParams& p) { return p.direction.vector(); },
          [](protocol::ProtocolParams& p, const qcore::Vector& v) { p.direction = qcore::MeasurementDirection(v); })
      .def("validate", &protocol::ProtocolParams::validate);

  m.def("initial_states", [](const protocol::ProtocolParams& p) {
    auto [a, b] = protocol::initial_states(p);
    return std::pair{a.amplitudes(), b.amplitudes()};
  });
  m.def("solve_orthogonality", py::overload_cast<double, double, int>(&protocol::solve_orthogonality),
        py::arg("a"), py::arg("b"), py::arg("k"));
  m.def("total_cost_paper_mode", &protocol::total_cost_paper_mode);
  m.def("run", [](const protocol::ProtocolParams& p) {
    const auto r = protocol::run(p);
    py::dict d;
    py::list leaves;
    for (const auto& leaf : r.leaves) leaves.append(leaf_to_dict(leaf));
    d["leaves"] = leaves;
    d["total_cost"] = r.total_cost.value();
    d["baseline_exact"] = r.baseline_exact.value();
    d["baseline_paper"] = r.baseline_paper.value();
    d["paper_new_cost"] = r.paper_new_cost;
    d["overlap_trajectory"] = r.overlap_trajectory;
    d["survival_trajectory"] = std::pair{r.survival_trajectory[0], r.survival_trajectory[1]};
    d["verdict_vs_exact"] = r.verdict.vs_exact;
    d["verdict_vs_paper"] = r.verdict.vs_paper;
    d["pruned"] = r.pruned;
    return d;
  });

  // series
  auto to_vec = [](const series::Amplitudes& a) { return std::vector<qcore::Complex>(a.begin(), a.end()); };
  m.def("one_step_state", [to_vec](const protocol::ProtocolParams& p, int h) { return to_vec(series::one_step_state(p, h)); });
  m.def("k_step_state", [to_vec](const protocol::ProtocolParams& p, int h) { return to_vec(series::k_step_state(p, h)); });
  m.def("survival_one_step_paper", &series::survival_one_step_paper);
  m.def("survival_k_paper", &series::survival_k_paper);
  m.def("overlap_k_paper", &series::overlap_k_paper);
  m.def("baseline_paper_convention", [](const protocol::ProtocolParams& p) {
    const auto b = series::baseline_paper_convention(p);
    return std::pair{b.closed_form, b.leading_order};
  });
  m.def("original_cost", &series::original_cost);
  m.def("checklist", [] {
    std::vector<std::string> out;
    for (auto s : series::checklist()) out.emplace_back(s);
    return out;
  });
  m.def("fit_scaling", [](const std::string& quantity, const std::vector<double>& deltas, double b, int k,
                          std::optional<double> dt, double prior) {
    series::ParamsTemplate t;
    t.b = b;
    t.k = k;
    t.prior = prior;
    t.dt_rule = dt ? series::DtRule::Fixed : series::DtRule::Orthogonality;
    t.dt = dt.value_or(1.0);
    return fit_to_dict(series::fit_scaling(series::parse_quantity(quantity), deltas, t));
  }, py::arg("quantity"), py::arg("deltas"), py::arg("b"), py::arg("k"), py::arg("dt") = py::none(),
     py::arg("prior") = 0.5);

  // lab
  m.def("sweep", [](const std::string& config_text) {
    const auto config = lab::parse_config(config_text);
    const auto rows = lab::run_sweep(config);
    std::ostringstream csv, summary;
    lab::write_csv(csv, rows, config.precision);
    lab::write_summary(summary, rows, config.precision);
    return std::pair{csv.str(), summary.str()};
  }, py::arg("config_text"), "Run a sweep from config text; returns (csv, summary).");
  m.def("emit_report", [](const std::string& config_text, const std::filesystem::path& csv_path) {
    const auto config = lab::parse_config(config_text);
    const auto files = lab::emit_report(lab::run_sweep(config), csv_path, config.precision);
    return std::pair{files.csv, files.summary};
  }, py::arg("config_text"), py::arg("csv_path"));
}
