#include "sclgeo/analysis.hpp"
#include "sclgeo/batching.hpp"
#include "sclgeo/geometry.hpp"
#include "sclgeo/loss.hpp"
#include "sclgeo/metrics.hpp"
#include "sclgeo/solver.hpp"

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

namespace py = pybind11;
using namespace py::literals;
using namespace sclgeo;

namespace {

LossConfig make_loss_config(double tau, std::optional<double> base_tau, bool per_sample) {
    LossConfig cfg;
    cfg.tau = tau;
    cfg.base_tau = base_tau;
    cfg.per_sample = per_sample;
    return cfg;
}

BatchSet make_batchset(int n, const std::vector<std::vector<int>>& batches) {
    return BatchSet(n, batches);
}

}  // namespace

PYBIND11_MODULE(_sclgeo, m) {
    m.doc() = "Supervised-contrastive-loss geometry laboratory (C++ core)";

    py::class_<LabelSet>(m, "LabelSet")
        .def(py::init<std::vector<int>>(), py::arg("labels"))
        .def_static("from_counts", &LabelSet::from_counts, py::arg("counts"))
        .def_property_readonly("n", &LabelSet::n)
        .def_property_readonly("k", &LabelSet::k)
        .def_property_readonly("labels", &LabelSet::labels)
        .def_property_readonly("counts", &LabelSet::counts);

    py::class_<BatchSet>(m, "BatchSet")
        .def(py::init(&make_batchset), py::arg("n"), py::arg("batches"))
        .def_static("full", &BatchSet::full, py::arg("n"))
        .def_readonly("n", &BatchSet::n)
        .def_readonly("batches", &BatchSet::batches);

    py::class_<ConditionReport>(m, "ConditionReport")
        .def_readonly("per_class_connected", &ConditionReport::per_class_connected)
        .def_readonly("missing_cross_pairs", &ConditionReport::missing_cross_pairs)
        .def_readonly("satisfied", &ConditionReport::satisfied);

    // geometry
    m.def("class_means", &class_means, py::arg("H"), py::arg("y"));
    m.def("make_of", &make_of, py::arg("k"), py::arg("d"));
    m.def("make_etf", &make_etf, py::arg("k"), py::arg("d"));
    m.def("center_columns", &center_columns, py::arg("V"));
    m.def(
        "project_feasible",
        [](const Vector& v, bool nonneg) {
            auto r = project_feasible(v, nonneg);
            return py::make_tuple(r.x, r.degenerate);
        },
        py::arg("v"), py::arg("nonneg"));

    // loss
    m.def(
        "scl_full_loss",
        [](const Matrix& H, const LabelSet& y, double tau, std::optional<double> base_tau,
           bool per_sample) {
            return scl_full_loss(H, y, make_loss_config(tau, base_tau, per_sample));
        },
        py::arg("H"), py::arg("y"), py::arg("tau") = 0.1,
        py::arg("base_tau") = std::nullopt, py::arg("per_sample") = false);
    m.def(
        "scl_batch_loss",
        [](const Matrix& H, const LabelSet& y, const BatchSet& b, double tau,
           std::optional<double> base_tau, bool per_sample) {
            return scl_batch_loss(H, y, b, make_loss_config(tau, base_tau, per_sample));
        },
        py::arg("H"), py::arg("y"), py::arg("batches"), py::arg("tau") = 0.1,
        py::arg("base_tau") = std::nullopt, py::arg("per_sample") = false);
    m.def(
        "scl_full_gradient",
        [](const Matrix& H, const LabelSet& y, double tau) {
            return scl_full_gradient(H, y, make_loss_config(tau, std::nullopt, false));
        },
        py::arg("H"), py::arg("y"), py::arg("tau") = 0.1);
    m.def(
        "full_lower_bound",
        [](const std::vector<int>& counts, double tau, std::optional<double> base_tau,
           bool per_sample) {
            return full_lower_bound(counts, make_loss_config(tau, base_tau, per_sample));
        },
        py::arg("counts"), py::arg("tau") = 0.1, py::arg("base_tau") = std::nullopt,
        py::arg("per_sample") = false);
    m.def(
        "batch_lower_bound",
        [](const BatchSet& b, const LabelSet& y, double tau) {
            return batch_lower_bound(b, y, make_loss_config(tau, std::nullopt, false));
        },
        py::arg("batches"), py::arg("y"), py::arg("tau") = 0.1);

    // batching
    m.def(
        "check_batches",
        [](const BatchSet& b, const LabelSet& y) {
            return check_cor_conditions(build_graph(b), y);
        },
        py::arg("batches"), py::arg("y"));
    m.def("batch_binding", &batch_binding, py::arg("batches"), py::arg("y"),
          py::arg("binding") = std::nullopt, py::arg("seed") = std::nullopt);
    m.def(
        "make_partition",
        [](const LabelSet& y, int batch_size, const std::string& scheme, int epoch,
           std::uint64_t seed) {
            return make_partition(y, batch_size,
                                  scheme == "fixed" ? PartitionScheme::Fixed
                                                    : PartitionScheme::Reshuffle,
                                  epoch, seed);
        },
        py::arg("y"), py::arg("batch_size"), py::arg("scheme") = "reshuffle",
        py::arg("epoch") = 0, py::arg("seed") = 0);
    m.def(
        "all_permutation_batches_complete",
        [](int n, int b) { return all_permutation_batches(n, b).is_complete(); },
        py::arg("n"), py::arg("b"));

    // metrics
    m.def("delta_gm", &delta_gm, py::arg("M"));
    m.def("delta_etf", &delta_etf, py::arg("M"));
    m.def("beta_nc", &beta_nc, py::arg("H"), py::arg("y"));
    m.def("mean_pairwise_cosine", &mean_pairwise_cosine, py::arg("M"));
    m.def("heatmap_payload", &heatmap_payload, py::arg("G"));

    // analysis
    m.def(
        "counterexample_losses",
        [](int n_min, double ratio) {
            auto r = counterexample_losses(n_min, ratio);
            return py::make_tuple(r.loss_etf, r.loss_tilde, r.tilde_wins);
        },
        py::arg("n_min"), py::arg("ratio"));
    m.def("verify_counterexample_formulas", &verify_counterexample_formulas,
          py::arg("n_min"), py::arg("ratio"));

    // solver
    m.def(
        "solve",
        [](const LabelSet& y, int d, std::optional<BatchSet> batches, double tau,
           bool nonneg, std::uint64_t seed, int max_iters) {
            LossConfig lc = make_loss_config(tau, std::nullopt, false);
            SolverConfig sc;
            sc.nonneg = nonneg;
            sc.seed = seed;
            sc.max_iters = max_iters;
            sc.init = nonneg ? InitMode::RandomNonneg : InitMode::RandomSphere;
            sc.metrics_every = 0;
            Trajectory t = solve(y, d, batches, lc, sc);
            return py::dict("H"_a = t.final_H, "loss"_a = t.final_loss,
                            "lower_bound"_a = t.lower_bound, "gap"_a = t.final_gap,
                            "iters"_a = t.iters,
                            "termination"_a = termination_name(t.reason));
        },
        py::arg("y"), py::arg("d"), py::arg("batches") = std::nullopt,
        py::arg("tau") = 0.1, py::arg("nonneg") = true, py::arg("seed") = 0,
        py::arg("max_iters") = 50000);
}
