#include "sclgeo/geometry.hpp"

#include <algorithm>
#include <cmath>

namespace sclgeo {

LabelSet::LabelSet(std::vector<int> labels) : labels_(std::move(labels)) {
    if (labels_.empty()) throw std::invalid_argument("LabelSet: empty label list");
    int max_label = -1;
    for (int y : labels_) {
        if (y < 0) throw std::invalid_argument("LabelSet: negative class index");
        max_label = std::max(max_label, y);
    }
    k_ = max_label + 1;
    counts_.assign(k_, 0);
    for (int y : labels_) counts_[y]++;
    for (int c = 0; c < k_; ++c) {
        if (counts_[c] == 0)
            throw std::invalid_argument("LabelSet: class " + std::to_string(c) +
                                        " has no members");
    }
}

LabelSet LabelSet::from_counts(const std::vector<int>& counts) {
    std::vector<int> labels;
    for (std::size_t c = 0; c < counts.size(); ++c) {
        if (counts[c] < 1) throw std::invalid_argument("LabelSet: count must be >= 1");
        labels.insert(labels.end(), counts[c], static_cast<int>(c));
    }
    return LabelSet(std::move(labels));
}

std::vector<std::vector<int>> LabelSet::class_indices() const {
    std::vector<std::vector<int>> idx(k_);
    for (int i = 0; i < n(); ++i) idx[labels_[i]].push_back(i);
    return idx;
}

Matrix class_means(const Matrix& H, const LabelSet& y) {
    if (H.cols() != y.n())
        throw std::invalid_argument("class_means: H has " + std::to_string(H.cols()) +
                                    " columns, labels have " + std::to_string(y.n()));
    Matrix M = Matrix::Zero(H.rows(), y.k());
    for (int i = 0; i < y.n(); ++i) M.col(y.labels()[i]) += H.col(i);
    for (int c = 0; c < y.k(); ++c) M.col(c) /= static_cast<double>(y.counts()[c]);
    return M;
}

Vector global_mean(const Matrix& M) { return M.rowwise().mean(); }

Matrix make_of(int k, int d) {
    if (k < 1) throw std::invalid_argument("make_of: k must be >= 1");
    if (d < k) throw std::invalid_argument("make_of: requires d >= k");
    return Matrix::Identity(d, k);
}

Matrix make_etf(int k, int d) {
    if (k < 2) throw std::invalid_argument("make_etf: k must be >= 2");
    if (d < k) throw std::invalid_argument("make_etf: requires d >= k");
    Matrix M = center_columns(make_of(k, d));
    // centered OF columns have norm sqrt((k-1)/k)
    for (int c = 0; c < k; ++c) M.col(c) /= M.col(c).norm();
    return M;
}

Matrix center_columns(const Matrix& V) {
    return V.colwise() - V.rowwise().mean().eval();
}

ProjectionResult project_feasible(const Vector& v, bool nonneg) {
    const auto d = v.size();
    Vector w = nonneg ? v.cwiseMax(0.0).eval() : v;
    const double nrm = w.norm();
    if (nrm == 0.0) {
        Vector u = Vector::Constant(d, 1.0 / std::sqrt(static_cast<double>(d)));
        return {std::move(u), true};
    }
    return {w / nrm, false};
}

Matrix project_feasible_columns(const Matrix& H, bool nonneg) {
    Matrix P(H.rows(), H.cols());
    for (Eigen::Index i = 0; i < H.cols(); ++i)
        P.col(i) = project_feasible(H.col(i), nonneg).x;
    return P;
}

bool columns_unit_norm(const Matrix& H, double tol) {
    for (Eigen::Index i = 0; i < H.cols(); ++i)
        if (std::abs(H.col(i).norm() - 1.0) > tol) return false;
    return true;
}

bool is_feasible(const Matrix& H, bool nonneg, double tol) {
    if (!H.allFinite()) return false;
    if (!columns_unit_norm(H, tol)) return false;
    if (nonneg && H.minCoeff() < -tol) return false;
    return true;
}

bool is_symmetric_psd(const Matrix& G) {
    if (G.rows() != G.cols()) return false;
    const double scale = std::max(1.0, G.norm());
    if ((G - G.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale) return false;
    Eigen::SelfAdjointEigenSolver<Matrix> es(G, Eigen::EigenvaluesOnly);
    return es.eigenvalues().minCoeff() >= -1e-9 * G.norm();
}

}  // namespace sclgeo
