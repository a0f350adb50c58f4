#include "sclgeo/analysis.hpp"
#include "sclgeo/batching.hpp"
#include "sclgeo/geometry.hpp"
#include "sclgeo/io.hpp"
#include "sclgeo/loss.hpp"
#include "sclgeo/metrics.hpp"
#include "sclgeo/solver.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

namespace {

using namespace sclgeo;

constexpr int kExitOk = 0;
constexpr int kExitConditionFalse = 1;
constexpr int kExitInputError = 2;
constexpr int kExitNumerical = 3;

std::vector<int> parse_counts(const std::string& s) {
    std::vector<int> counts;
    std::stringstream ss(s);
    std::string field;
    while (std::getline(ss, field, ',')) counts.push_back(std::stoi(field));
    if (counts.empty()) throw std::invalid_argument("empty counts");
    return counts;
}

json load_json_file(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw std::runtime_error("cannot open " + path);
    return json::parse(f);
}

std::vector<int> generated_counts(int k, const std::string& dist, double ratio,
                                  int n_min) {
    if (k < 1) throw std::invalid_argument("generator: k must be >= 1");
    if (n_min < 1) throw std::invalid_argument("generator: n_min must be >= 1");
    if (ratio < 1.0) throw std::invalid_argument("generator: ratio must be >= 1");
    std::vector<int> counts;
    const int n_max = static_cast<int>(std::lround(n_min * ratio));
    if (dist == "step") {
        // first ceil(k/2) classes are majorities
        const int majors = (k + 1) / 2;
        for (int c = 0; c < k; ++c) counts.push_back(c < majors ? n_max : n_min);
    } else if (dist == "longtail") {
        // n_c = round(n_max * R^(-c/(k-1))), decaying from n_max to n_min
        for (int c = 0; c < k; ++c) {
            const double expo = k > 1 ? -static_cast<double>(c) / (k - 1) : 0.0;
            counts.push_back(
                std::max(1, static_cast<int>(std::lround(n_max * std::pow(ratio, expo)))));
        }
    } else if (dist == "balanced") {
        for (int c = 0; c < k; ++c) counts.push_back(n_min);
    } else {
        throw std::invalid_argument("generator: dist must be step, longtail or balanced");
    }
    return counts;
}

json default_config() {
    return json{
        {"generator", {{"k", 3}, {"dist", "step"}, {"ratio", 10.0}, {"n_min", 5}}},
        {"d", 5},
        {"loss", {{"tau", 0.1}, {"base_tau", nullptr}, {"per_sample", false}}},
        {"solver",
         {{"nonneg", true},
          {"step_size", nullptr},
          {"decay", 0.5},
          {"max_iters", 50000},
          {"rel_tol", 1e-12},
          {"seed", 0},
          {"init", "random_nonneg"},
          {"gap_tol_rel", 1e-9},
          {"plateau_window", 200}}},
        {"batching",
         {{"mode", "full"},
          {"scheme", "reshuffle"},
          {"batch_size", 16},
          {"binding", false},
          {"seed", 0},
          {"epochs", 1}}},
        {"n_starts", 1},
        {"outputs",
         {{"trajectory", "trajectory.csv"},
          {"embeddings", "embeddings.csv"},
          {"summary", "summary.json"},
          {"metrics_every", 50}}}};
}

LabelSet labels_from_config(const json& cfg) {
    if (cfg.contains("labels"))
        return LabelSet(cfg.at("labels").get<std::vector<int>>());
    const json& g = cfg.at("generator");
    return LabelSet::from_counts(generated_counts(
        g.at("k").get<int>(), g.at("dist").get<std::string>(),
        g.at("ratio").get<double>(), g.at("n_min").get<int>()));
}

LossConfig loss_from_config(const json& cfg) {
    LossConfig lc;
    if (cfg.contains("loss")) {
        const json& l = cfg.at("loss");
        lc.tau = l.value("tau", 0.1);
        if (l.contains("base_tau") && !l.at("base_tau").is_null())
            lc.base_tau = l.at("base_tau").get<double>();
        lc.per_sample = l.value("per_sample", false);
    }
    return lc;
}

SolverConfig solver_from_config(const json& cfg) {
    SolverConfig sc;
    if (cfg.contains("solver")) {
        const json& s = cfg.at("solver");
        sc.nonneg = s.value("nonneg", true);
        if (s.contains("step_size") && !s.at("step_size").is_null())
            sc.step_size = s.at("step_size").get<double>();
        sc.decay = s.value("decay", 0.5);
        sc.max_iters = s.value("max_iters", 50000);
        sc.rel_tol = s.value("rel_tol", 1e-12);
        sc.seed = s.value("seed", std::uint64_t{0});
        sc.gap_tol_rel = s.value("gap_tol_rel", 1e-9);
        sc.plateau_window = s.value("plateau_window", 200);
        const std::string init = s.value("init", "random_nonneg");
        if (init == "random_nonneg") sc.init = InitMode::RandomNonneg;
        else if (init == "random_sphere") sc.init = InitMode::RandomSphere;
        else throw std::invalid_argument("solver.init must be random_nonneg or random_sphere");
    }
    if (cfg.contains("outputs"))
        sc.metrics_every = cfg.at("outputs").value("metrics_every", 50);
    return sc;
}

std::optional<BatchSet> batches_from_config(const json& cfg, const LabelSet& y) {
    if (!cfg.contains("batching")) return std::nullopt;
    const json& b = cfg.at("batching");
    const std::string mode = b.value("mode", "full");
    if (mode == "full") return std::nullopt;
    if (mode != "partition")
        throw std::invalid_argument("batching.mode must be full or partition");

    const std::string scheme_s = b.value("scheme", "reshuffle");
    const PartitionScheme scheme = scheme_s == "fixed" ? PartitionScheme::Fixed
                                                       : PartitionScheme::Reshuffle;
    const int batch_size = b.value("batch_size", 16);
    const auto seed = b.value("seed", std::uint64_t{0});
    const int epochs = b.value("epochs", 1);

    BatchSet all;
    all.n = y.n();
    for (int e = 0; e < epochs; ++e) {
        BatchSet part = make_partition(y, batch_size, scheme, e, seed);
        for (auto& batch : part.batches) all.batches.push_back(std::move(batch));
    }
    if (b.value("binding", false)) all = batch_binding(all, y);
    return all;
}

int cmd_optimize(const std::string& config_path, std::optional<std::uint64_t> seed,
                 int workers) {
    json cfg;
    LabelSet y({0});
    LossConfig lc;
    SolverConfig sc;
    std::optional<BatchSet> batches;
    int d = 0, n_starts = 1;
    std::string traj_path, emb_path, summary_path;
    try {
        cfg = load_json_file(config_path);
        y = labels_from_config(cfg);
        lc = loss_from_config(cfg);
        sc = solver_from_config(cfg);
        batches = batches_from_config(cfg, y);
        d = cfg.at("d").get<int>();
        n_starts = cfg.value("n_starts", 1);
        const json out = cfg.value("outputs", json::object());
        traj_path = out.value("trajectory", "trajectory.csv");
        emb_path = out.value("embeddings", "embeddings.csv");
        summary_path = out.value("summary", "summary.json");
    } catch (const std::exception& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitInputError;
    }
    if (seed) sc.seed = *seed;
    if (d < y.k())
        std::cerr << "warning: d=" << d << " < k=" << y.k()
                  << "; the orthogonal-frame optimum cannot be realized\n";

    std::vector<Trajectory> runs;
    try {
        runs = multi_start(y, d, batches, lc, sc, n_starts, workers);
    } catch (const NumericalFailure& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        std::ostringstream ss;
        write_trajectory_csv(ss, e.partial);
        atomic_write_file(traj_path, ss.str());
        return kExitNumerical;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInputError;
    }

    // report the best run (smallest final gap)
    int best = 0;
    for (int t = 1; t < static_cast<int>(runs.size()); ++t)
        if (runs[t].final_gap < runs[best].final_gap) best = t;
    const Trajectory& tr = runs[best];

    std::ostringstream traj_ss;
    write_trajectory_csv(traj_ss, tr);
    atomic_write_file(traj_path, traj_ss.str());
    write_embedding_csv_file(emb_path, tr.final_H);

    const GeometryReport geo = geometry_report(tr.final_H, y);
    const bool achieved =
        tr.final_gap <= 1e-5 * std::max(1.0, std::abs(tr.lower_bound));
    json starts = json::array();
    for (const auto& r : runs)
        starts.push_back({{"final_loss", r.final_loss},
                          {"final_gap", r.final_gap},
                          {"iters", r.iters},
                          {"termination", termination_name(r.reason)}});
    json summary{{"termination", termination_name(tr.reason)},
                 {"final_loss", tr.final_loss},
                 {"lower_bound", tr.lower_bound},
                 {"final_gap", tr.final_gap},
                 {"achieved", achieved},
                 {"iters", tr.iters},
                 {"best_start", best},
                 {"starts", starts},
                 {"geometry", to_json(geo)}};
    atomic_write_file(summary_path, summary.dump(2) + "\n");
    std::cout << summary.dump(2) << "\n";
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Numerical laboratory for the implicit geometry of supervised "
                 "contrastive loss over unconstrained features"};
    app.require_subcommand(1);

    // bound
    std::string counts_str;
    double bound_tau = 1.0;
    std::optional<double> bound_base_tau;
    bool bound_per_sample = false;
    auto* bound_cmd = app.add_subcommand("bound", "Evaluate the analytic lower bound");
    bound_cmd->add_option("--counts", counts_str, "comma-separated class counts")
        ->required();
    bound_cmd->add_option("--tau", bound_tau, "temperature");
    bound_cmd->add_option("--base-tau", bound_base_tau, "base temperature scaling");
    bound_cmd->add_flag("--per-sample", bound_per_sample, "divide by n");

    // optimize
    std::string config_path;
    std::optional<std::uint64_t> seed_override;
    int workers = 1;
    auto* opt_cmd = app.add_subcommand("optimize", "Run projected gradient descent");
    opt_cmd->add_option("config", config_path, "experiment config JSON")->required();
    opt_cmd->add_option("--seed", seed_override, "override config seed");
    opt_cmd->add_option("--workers", workers, "parallel restarts");

    // check-batches
    std::string batches_path, labels_path;
    auto* check_cmd =
        app.add_subcommand("check-batches", "Check the batch interaction-graph conditions");
    check_cmd->add_option("--batches", batches_path, "batch set JSON")->required();
    check_cmd->add_option("--labels", labels_path, "labels CSV")->required();

    // bind
    std::string bind_batches, bind_labels, bind_out;
    std::optional<std::uint64_t> bind_seed;
    auto* bind_cmd = app.add_subcommand("bind", "Add binding examples to every batch");
    bind_cmd->add_option("--batches", bind_batches, "batch set JSON")->required();
    bind_cmd->add_option("--labels", bind_labels, "labels CSV")->required();
    bind_cmd->add_option("--seed", bind_seed, "random binding-example selection");
    bind_cmd->add_option("--output", bind_out, "output path (default stdout)");

    // counterexample
    int ce_nmin = 2;
    double ce_rmin = 1.0, ce_rmax = 100.0, ce_step = 1.0;
    std::string ce_out;
    auto* ce_cmd = app.add_subcommand(
        "counterexample", "Closed-form loss comparison of ETF vs merged configuration");
    ce_cmd->add_option("--nmin", ce_nmin, "minority class size");
    ce_cmd->add_option("--rmin", ce_rmin, "smallest imbalance ratio");
    ce_cmd->add_option("--rmax", ce_rmax, "largest imbalance ratio");
    ce_cmd->add_option("--step", ce_step, "ratio step");
    ce_cmd->add_option("--output", ce_out, "output CSV path (default stdout)");

    // metrics
    std::string met_embeddings, met_labels, met_heatmap;
    auto* met_cmd = app.add_subcommand("metrics", "Geometry diagnostics of embeddings");
    met_cmd->add_option("--embeddings", met_embeddings, "embeddings CSV")->required();
    met_cmd->add_option("--labels", met_labels, "labels CSV")->required();
    met_cmd->add_option("--heatmap", met_heatmap, "write normalized Gram CSV here");

    // gen-labels
    int gl_k = 3, gl_nmin = 5;
    double gl_ratio = 10.0;
    std::string gl_dist = "step", gl_out;
    auto* gl_cmd = app.add_subcommand("gen-labels", "Generate an imbalanced label set");
    gl_cmd->add_option("--k", gl_k, "class count");
    gl_cmd->add_option("--dist", gl_dist, "step | longtail | balanced");
    gl_cmd->add_option("--ratio", gl_ratio, "imbalance ratio R");
    gl_cmd
        ->add_option("--nmin", gl_nmin,
                     "minority class size; longtail uses n_c = round(R*nmin * "
                     "R^(-c/(k-1)))")
        ->check(CLI::PositiveNumber);
    gl_cmd->add_option("--output", gl_out, "output path (default stdout)");

    auto* pdc_cmd =
        app.add_subcommand("print-default-config", "Print the default experiment config");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*bound_cmd) {
            LossConfig lc;
            lc.tau = bound_tau;
            lc.base_tau = bound_base_tau;
            lc.per_sample = bound_per_sample;
            const auto counts = parse_counts(counts_str);
            const double b = full_lower_bound(counts, lc);
            LossReport r;
            r.value = b;
            r.lower_bound = b;
            r.gap = 0.0;
            r.achieved = true;
            r.tau = lc.tau;
            r.per_sample = lc.per_sample;
            std::cout << to_json(r).dump(2) << "\n";
            return kExitOk;
        }
        if (*opt_cmd) return cmd_optimize(config_path, seed_override, workers);
        if (*check_cmd) {
            const BatchSet b = batchset_from_json(load_json_file(batches_path));
            const LabelSet y = read_labels_csv_file(labels_path);
            const ConditionReport r = check_cor_conditions(build_graph(b), y);
            std::cout << to_json(r).dump(2) << "\n";
            return r.satisfied ? kExitOk : kExitConditionFalse;
        }
        if (*bind_cmd) {
            const BatchSet b = batchset_from_json(load_json_file(bind_batches));
            const LabelSet y = read_labels_csv_file(bind_labels);
            const BatchSet bound_set = batch_binding(b, y, std::nullopt, bind_seed);
            const std::string text = to_json(bound_set).dump(2) + "\n";
            if (bind_out.empty()) std::cout << text;
            else atomic_write_file(bind_out, text);
            return kExitOk;
        }
        if (*ce_cmd) {
            std::ostringstream ss;
            ss << "n_min,R,loss_etf,loss_tilde,tilde_wins,discrepancy\n";
            for (double R = ce_rmin; R <= ce_rmax + 1e-9; R += ce_step) {
                const CounterexampleResult r = counterexample_losses(ce_nmin, R);
                const double disc = verify_counterexample_formulas(ce_nmin, R);
                ss << r.n_min << "," << R << "," << r.loss_etf << "," << r.loss_tilde
                   << "," << (r.tilde_wins ? 1 : 0) << "," << disc << "\n";
            }
            if (ce_out.empty()) std::cout << ss.str();
            else atomic_write_file(ce_out, ss.str());
            return kExitOk;
        }
        if (*met_cmd) {
            const Matrix H = read_embedding_csv_file(met_embeddings);
            const LabelSet y = read_labels_csv_file(met_labels);
            const GeometryReport r = geometry_report(H, y);
            std::cout << to_json(r).dump(2) << "\n";
            if (!met_heatmap.empty()) {
                std::ostringstream ss;
                write_matrix_csv(ss, r.heatmap);
                atomic_write_file(met_heatmap, ss.str());
            }
            return kExitOk;
        }
        if (*gl_cmd) {
            const LabelSet y =
                LabelSet::from_counts(generated_counts(gl_k, gl_dist, gl_ratio, gl_nmin));
            std::ostringstream ss;
            write_labels_csv(ss, y);
            if (gl_out.empty()) std::cout << ss.str();
            else atomic_write_file(gl_out, ss.str());
            return kExitOk;
        }
        if (*pdc_cmd) {
            std::cout << default_config().dump(2) << "\n";
            return kExitOk;
        }
    } catch (const NumericalFailure& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return kExitNumerical;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInputError;
    }
    return kExitInputError;
}
