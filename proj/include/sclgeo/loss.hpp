#pragma once

#include "sclgeo/batching.hpp"
#include "sclgeo/geometry.hpp"

#include <optional>
#include <vector>

namespace sclgeo {

struct LossConfig {
    double tau = 0.1;                     // temperature; inner products divided by tau
    std::optional<double> base_tau;       // when set, loss scaled by tau/base_tau
    bool per_sample = false;              // divide by n

    double scale(int n) const;
    void validate() const;
};

struct LossReport {
    double value = 0.0;
    double lower_bound = 0.0;
    double gap = 0.0;
    bool achieved = false;
    double tau = 0.0;
    bool per_sample = false;
};

/// Full-batch supervised contrastive loss:
///   sum_i 1/(n_{y_i}-1) sum_{j != i, y_j = y_i}
///       log( sum_{l != i} exp((h_i.h_l - h_i.h_j)/tau) ).
/// Classes with fewer than two members contribute zero.
double scl_full_loss(const Matrix& H, const LabelSet& y, const LossConfig& cfg);

/// Sum over batches of the full-batch loss restricted to each batch, with
/// within-batch class counts.
double scl_batch_loss(const Matrix& H, const LabelSet& y, const BatchSet& batches,
                      const LossConfig& cfg);

/// Euclidean gradient of scl_full_loss with respect to H (d x n).
Matrix scl_full_gradient(const Matrix& H, const LabelSet& y, const LossConfig& cfg);

Matrix scl_batch_gradient(const Matrix& H, const LabelSet& y, const BatchSet& batches,
                          const LossConfig& cfg);

/// Analytic lower bound sum_c n_c log(n_c - 1 + (n - n_c) e^{-1/tau}),
/// skipping classes with n_c <= 1, with the same base_tau/per_sample scaling
/// as the loss.
double full_lower_bound(const std::vector<int>& counts, const LossConfig& cfg);

/// Per-batch bound summed over the batch set, using within-batch counts.
double batch_lower_bound(const BatchSet& batches, const LabelSet& y,
                         const LossConfig& cfg);

LossReport full_loss_report(const Matrix& H, const LabelSet& y, const LossConfig& cfg,
                            double tol = 1e-9);
LossReport batch_loss_report(const Matrix& H, const LabelSet& y, const BatchSet& batches,
                             const LossConfig& cfg, double tol = 1e-9);

}  // namespace sclgeo
