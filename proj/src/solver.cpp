#include "sclgeo/solver.hpp"

#include "sclgeo/metrics.hpp"

#include <atomic>
#include <cmath>
#include <random>
#include <stdexcept>
#include <thread>

namespace sclgeo {

void SolverConfig::validate() const {
    if (step_size && !(*step_size > 0.0))
        throw std::invalid_argument("SolverConfig: step_size must be > 0");
    if (!(decay > 0.0 && decay <= 1.0))
        throw std::invalid_argument("SolverConfig: decay must be in (0, 1]");
    if (max_iters < 1) throw std::invalid_argument("SolverConfig: max_iters must be >= 1");
    if (init == InitMode::Provided && !init_H)
        throw std::invalid_argument("SolverConfig: init=Provided requires init_H");
}

const char* termination_name(Termination t) {
    switch (t) {
        case Termination::ConvergedToBound: return "converged_to_bound";
        case Termination::Stalled: return "stalled";
        case Termination::MaxIters: return "max_iters";
    }
    return "unknown";
}

namespace {

Matrix initial_point(const LabelSet& y, int d, const SolverConfig& cfg) {
    switch (cfg.init) {
        case InitMode::Provided: {
            const Matrix& H = *cfg.init_H;
            if (H.rows() != d || H.cols() != y.n())
                throw std::invalid_argument("solve: provided init has wrong shape");
            if (!is_feasible(H, cfg.nonneg, 1e-8))
                throw std::invalid_argument("solve: provided init is infeasible");
            return H;
        }
        case InitMode::RandomNonneg: {
            std::mt19937_64 eng(cfg.seed);
            std::uniform_real_distribution<double> uni(0.0, 1.0);
            Matrix H(d, y.n());
            for (int j = 0; j < y.n(); ++j)
                for (int i = 0; i < d; ++i) H(i, j) = uni(eng);
            return project_feasible_columns(H, cfg.nonneg);
        }
        case InitMode::RandomSphere: {
            std::mt19937_64 eng(cfg.seed);
            std::normal_distribution<double> gauss(0.0, 1.0);
            Matrix H(d, y.n());
            for (int j = 0; j < y.n(); ++j)
                for (int i = 0; i < d; ++i) H(i, j) = gauss(eng);
            return project_feasible_columns(H, cfg.nonneg);
        }
    }
    throw std::logic_error("solve: bad init mode");
}

}  // namespace

Trajectory solve(const LabelSet& y, int d, const std::optional<BatchSet>& batches,
                 const LossConfig& loss_cfg, const SolverConfig& cfg) {
    loss_cfg.validate();
    cfg.validate();

    auto loss_at = [&](const Matrix& H) {
        return batches ? scl_batch_loss(H, y, *batches, loss_cfg)
                       : scl_full_loss(H, y, loss_cfg);
    };
    auto grad_at = [&](const Matrix& H) {
        return batches ? scl_batch_gradient(H, y, *batches, loss_cfg)
                       : scl_full_gradient(H, y, loss_cfg);
    };
    const double bound = batches ? batch_lower_bound(*batches, y, loss_cfg)
                                 : full_lower_bound(y.counts(), loss_cfg);
    // The analytic bound is only valid on the non-negative feasible set, so
    // gap-based convergence applies to UFM+ runs only.
    const bool gap_termination = cfg.nonneg;
    const double gap_tol = cfg.gap_tol_rel * std::max(1.0, std::abs(bound));

    Trajectory traj;
    traj.lower_bound = bound;

    Matrix H = initial_point(y, d, cfg);
    double loss = loss_at(H);
    double step = cfg.step_size.value_or(0.5 * loss_cfg.tau);
    int plateau = 0;

    auto record = [&](int iter, double l) {
        TrajectoryRecord rec;
        rec.iter = iter;
        rec.loss = l;
        rec.gap = l - bound;
        const Matrix M = class_means(H, y);
        rec.delta_gm = delta_gm(M);
        rec.beta_nc = y.k() >= 2 ? beta_nc(H, y) : 0.0;
        rec.mean_cos = y.k() >= 2 ? mean_pairwise_cosine(M) : 0.0;
        traj.records.push_back(rec);
    };

    Termination reason = Termination::MaxIters;
    int iter = 0;
    for (; iter < cfg.max_iters; ++iter) {
        if (!std::isfinite(loss)) {
            traj.final_H = H;
            traj.final_loss = loss;
            traj.reason = Termination::Stalled;
            traj.iters = iter;
            throw NumericalFailure(
                "solve: non-finite loss at iteration " + std::to_string(iter), traj);
        }
        if (cfg.metrics_every > 0 && iter % cfg.metrics_every == 0) record(iter, loss);

        if (gap_termination && loss - bound <= gap_tol) {
            reason = Termination::ConvergedToBound;
            break;
        }

        const Matrix g = grad_at(H);
        if (!g.allFinite()) {
            traj.final_H = H;
            traj.final_loss = loss;
            traj.reason = Termination::Stalled;
            traj.iters = iter;
            throw NumericalFailure(
                "solve: non-finite gradient at iteration " + std::to_string(iter), traj);
        }

        // backtracking line search on the projected step
        double eta = step;
        bool accepted = false;
        Matrix H_next;
        double loss_next = loss;
        for (int halving = 0; halving <= 30; ++halving) {
            H_next = project_feasible_columns(H - eta * g, cfg.nonneg);
            loss_next = loss_at(H_next);
            if (loss_next <= loss) {
                accepted = true;
                break;
            }
            eta *= 0.5;
        }
        if (!accepted) {
            reason = (gap_termination && loss - bound <= gap_tol)
                         ? Termination::ConvergedToBound
                         : Termination::Stalled;
            break;
        }

        const double improvement = loss - loss_next;
        if (improvement < cfg.rel_tol * std::max(1.0, std::abs(loss))) {
            if (++plateau >= cfg.plateau_window) {
                step *= cfg.decay;
                plateau = 0;
                if (step < 1e-18) {
                    H = H_next;
                    loss = loss_next;
                    reason = (gap_termination && loss - bound <= gap_tol)
                                 ? Termination::ConvergedToBound
                                 : Termination::Stalled;
                    ++iter;
                    break;
                }
            }
        } else {
            plateau = 0;
        }
        H = H_next;
        loss = loss_next;
    }

    traj.final_H = H;
    traj.final_loss = loss;
    traj.final_gap = loss - bound;
    traj.reason = reason;
    traj.iters = iter;
    if (traj.records.empty() || traj.records.back().iter != iter) record(iter, loss);
    return traj;
}

std::vector<Trajectory> multi_start(const LabelSet& y, int d,
                                    const std::optional<BatchSet>& batches,
                                    const LossConfig& loss_cfg, const SolverConfig& cfg,
                                    int n_starts, int workers) {
    if (n_starts < 1) throw std::invalid_argument("multi_start: n_starts must be >= 1");
    std::vector<Trajectory> out(n_starts);

    auto run = [&](int t) {
        SolverConfig c = cfg;
        c.seed = cfg.seed + static_cast<std::uint64_t>(t);
        out[t] = solve(y, d, batches, loss_cfg, c);
    };

    if (workers <= 1) {
        for (int t = 0; t < n_starts; ++t) run(t);
    } else {
        std::vector<std::thread> pool;
        std::atomic<int> next{0};
        for (int w = 0; w < std::min(workers, n_starts); ++w) {
            pool.emplace_back([&] {
                for (int t; (t = next.fetch_add(1)) < n_starts;) run(t);
            });
        }
        for (auto& th : pool) th.join();
    }
    return out;
}

}  // namespace sclgeo
