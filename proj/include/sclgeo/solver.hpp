#pragma once

#include "sclgeo/batching.hpp"
#include "sclgeo/geometry.hpp"
#include "sclgeo/loss.hpp"

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace sclgeo {

enum class InitMode { RandomNonneg, RandomSphere, Provided };

struct SolverConfig {
    bool nonneg = true;                    // UFM+ vs UFM feasible set
    std::optional<double> step_size;       // default 0.5 * tau
    double decay = 0.5;                    // step multiplier on plateau
    int max_iters = 50000;
    double rel_tol = 1e-12;                // relative loss-change tolerance
    std::uint64_t seed = 0;
    InitMode init = InitMode::RandomNonneg;
    std::optional<Matrix> init_H;          // used when init == Provided
    double gap_tol_rel = 1e-9;             // converged when gap <= this * max(1,|bound|)
    int plateau_window = 200;
    int metrics_every = 50;

    void validate() const;
};

enum class Termination { ConvergedToBound, Stalled, MaxIters };

const char* termination_name(Termination t);

struct TrajectoryRecord {
    int iter = 0;
    double loss = 0.0;
    double gap = 0.0;
    double delta_gm = 0.0;
    double beta_nc = 0.0;
    double mean_cos = 0.0;
};

struct Trajectory {
    std::vector<TrajectoryRecord> records;
    Matrix final_H;
    Termination reason = Termination::MaxIters;
    double final_loss = 0.0;
    double lower_bound = 0.0;
    double final_gap = 0.0;
    int iters = 0;
};

/// Thrown when the loss or gradient turns non-finite; carries the trajectory
/// recorded up to the failing iteration.
struct NumericalFailure : std::runtime_error {
    NumericalFailure(const std::string& what, Trajectory partial_)
        : std::runtime_error(what), partial(std::move(partial_)) {}
    Trajectory partial;
};

/// Projected gradient descent with backtracking over the UFM/UFM+ feasible
/// set. Optimizes the full-batch loss, or the mini-batch loss when a batch
/// set is given.
Trajectory solve(const LabelSet& y, int d, const std::optional<BatchSet>& batches,
                 const LossConfig& loss_cfg, const SolverConfig& cfg);

/// Independent seeded runs (seeds cfg.seed, cfg.seed+1, ...).
std::vector<Trajectory> multi_start(const LabelSet& y, int d,
                                    const std::optional<BatchSet>& batches,
                                    const LossConfig& loss_cfg, const SolverConfig& cfg,
                                    int n_starts, int workers = 1);

}  // namespace sclgeo
