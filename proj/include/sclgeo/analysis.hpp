#pragma once

#include "sclgeo/batching.hpp"
#include "sclgeo/geometry.hpp"

#include <string>
#include <vector>

namespace sclgeo {

struct CounterexampleResult {
    int n_min = 0;
    double ratio = 0.0;
    double loss_etf = 0.0;
    double loss_tilde = 0.0;
    bool tilde_wins = false;
};

/// Closed-form full-batch losses (tau = 1) of the 3-class STEP instance with
/// sizes [R*n_min, n_min, n_min] at the ETF configuration and at the merged
/// antipodal configuration H~. For R large enough H~ beats the ETF.
CounterexampleResult counterexample_losses(int n_min, double ratio);

/// Max relative discrepancy between the two closed forms and direct loss
/// evaluation on explicitly constructed embedding matrices.
double verify_counterexample_formulas(int n_min, double ratio);

struct NonOfResult {
    bool ok = false;
    Matrix H;
    std::string reason;  // set when no counterexample exists
};

/// For a batch set that fails the interaction-graph conditions, construct an
/// embedding matrix that attains the mini-batch lower bound exactly while its
/// class-mean geometry is not an orthogonal frame. Case 1 splits a
/// disconnected class across orthogonal directions; case 2 merges two classes
/// that are never co-batched. Fails when the conditions actually hold.
NonOfResult build_non_of_optimizer(const LabelSet& y, const BatchSet& batches, int d);

struct PairViolation {
    int i = 0;
    int j = 0;
    bool same_class = false;
    double magnitude = 0.0;  // ||h_i - h_j|| or |h_i.h_j|
};

struct EqualityCheck {
    bool holds = false;
    std::vector<PairViolation> violations;
};

/// Scan every co-batched pair: same-class pairs must coincide, cross-class
/// pairs must be orthogonal (the bound-equality conditions).
EqualityCheck equality_conditions_hold(const Matrix& H, const LabelSet& y,
                                       const BatchSet& batches, double tol);

}  // namespace sclgeo
