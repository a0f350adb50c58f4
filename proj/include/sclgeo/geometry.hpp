#pragma once

#include <Eigen/Dense>

#include <optional>
#include <stdexcept>
#include <vector>

namespace sclgeo {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Per-example class labels with derived class counts.
/// Every class index in 0..k-1 must appear at least once.
class LabelSet {
public:
    explicit LabelSet(std::vector<int> labels);

    /// Build labels [0,..,0, 1,..,1, ...] from per-class counts.
    static LabelSet from_counts(const std::vector<int>& counts);

    int n() const { return static_cast<int>(labels_.size()); }
    int k() const { return k_; }
    const std::vector<int>& labels() const { return labels_; }
    const std::vector<int>& counts() const { return counts_; }

    /// Indices of the examples belonging to each class.
    std::vector<std::vector<int>> class_indices() const;

private:
    std::vector<int> labels_;
    std::vector<int> counts_;
    int k_ = 0;
};

/// Column c is the mean of the embedding columns with label c.
Matrix class_means(const Matrix& H, const LabelSet& y);

/// Mean of the columns of a d x k mean matrix (mu_G).
Vector global_mean(const Matrix& M);

/// k orthogonal unit columns in R^d (the first k standard basis vectors).
/// Requires d >= k. Gram is exactly the identity and all entries are >= 0.
Matrix make_of(int k, int d);

/// k unit columns with all pairwise cosines -1/(k-1); built by centering an
/// orthogonal frame and rescaling columns to unit norm. Requires d >= k.
Matrix make_etf(int k, int d);

/// Subtract the column mean from every column; output columns sum to zero.
Matrix center_columns(const Matrix& V);

struct ProjectionResult {
    Vector x;
    bool degenerate = false;  // fallback to the uniform direction fired
};

/// Euclidean projection onto the unit sphere, optionally intersected with the
/// non-negative orthant (clip negatives, then normalize). A vector that
/// projects to zero falls back to the uniform direction 1/sqrt(d).
ProjectionResult project_feasible(const Vector& v, bool nonneg);

/// Column-wise projection of a full embedding matrix.
Matrix project_feasible_columns(const Matrix& H, bool nonneg);

bool columns_unit_norm(const Matrix& H, double tol = 1e-8);
bool is_feasible(const Matrix& H, bool nonneg, double tol = 1e-8);

/// Symmetric within 1e-12 relative and smallest eigenvalue >= -1e-9*||G||.
bool is_symmetric_psd(const Matrix& G);

}  // namespace sclgeo
