#include "sclgeo/metrics.hpp"

#include <cmath>
#include <stdexcept>

namespace sclgeo {

namespace {

double unit_frobenius_distance(const Matrix& A, const Matrix& B) {
    const double na = A.norm(), nb = B.norm();
    if (na == 0.0 || nb == 0.0)
        throw std::invalid_argument("unit_frobenius_distance: zero matrix");
    return (A / na - B / nb).norm();
}

}  // namespace

double delta_gm(const Matrix& M) {
    const int k = static_cast<int>(M.cols());
    if (k < 1) throw std::invalid_argument("delta_gm: empty matrix");
    Matrix G = M.transpose() * M;
    if (G.norm() == 0.0) throw std::invalid_argument("delta_gm: zero Gram matrix");
    return unit_frobenius_distance(G, Matrix::Identity(k, k));
}

double delta_etf(const Matrix& M) {
    const int k = static_cast<int>(M.cols());
    if (k < 2) throw std::invalid_argument("delta_etf: requires k >= 2");
    Matrix C = center_columns(M);
    Matrix G = C.transpose() * C;
    if (G.norm() < 1e-300)
        throw std::invalid_argument("delta_etf: all columns equal (zero centered Gram)");
    Matrix target = Matrix::Identity(k, k) - Matrix::Constant(k, k, 1.0 / k);
    return unit_frobenius_distance(G, target);
}

double beta_nc(const Matrix& H, const LabelSet& y) {
    if (y.k() < 2) throw std::invalid_argument("beta_nc: requires k >= 2");
    const Matrix M = class_means(H, y);
    const Vector mu_g = global_mean(M);

    const auto d = H.rows();
    Matrix sigma_b = Matrix::Zero(d, d);
    for (int c = 0; c < y.k(); ++c) {
        Vector v = M.col(c) - mu_g;
        sigma_b += v * v.transpose();
    }
    Matrix sigma_w = Matrix::Zero(d, d);
    for (int i = 0; i < y.n(); ++i) {
        Vector v = H.col(i) - M.col(y.labels()[i]);
        sigma_w += v * v.transpose();
    }

    Eigen::SelfAdjointEigenSolver<Matrix> es(sigma_b);
    const Vector& evals = es.eigenvalues();
    const double lmax = evals.maxCoeff();
    if (lmax <= 0.0)
        throw std::invalid_argument("beta_nc: between-class covariance is zero");

    // Moore-Penrose pseudoinverse with relative eigenvalue cutoff.
    const double cutoff = 1e-10 * lmax;
    Vector inv = Vector::Zero(evals.size());
    for (Eigen::Index i = 0; i < evals.size(); ++i)
        if (evals(i) > cutoff) inv(i) = 1.0 / evals(i);
    Matrix pinv = es.eigenvectors() * inv.asDiagonal() * es.eigenvectors().transpose();

    return (sigma_w * pinv).trace() / y.k();
}

double mean_pairwise_cosine(const Matrix& M) {
    const int k = static_cast<int>(M.cols());
    if (k < 2) throw std::invalid_argument("mean_pairwise_cosine: requires k >= 2");
    double sum = 0.0;
    int pairs = 0;
    for (int a = 0; a < k; ++a) {
        const double na = M.col(a).norm();
        if (na == 0.0) throw std::invalid_argument("mean_pairwise_cosine: zero class mean");
        for (int b = a + 1; b < k; ++b) {
            const double nb = M.col(b).norm();
            if (nb == 0.0)
                throw std::invalid_argument("mean_pairwise_cosine: zero class mean");
            sum += M.col(a).dot(M.col(b)) / (na * nb);
            ++pairs;
        }
    }
    return sum / pairs;
}

Matrix heatmap_payload(const Matrix& G) {
    const double m = G.cwiseAbs().maxCoeff();
    if (m == 0.0) throw std::invalid_argument("heatmap_payload: zero matrix");
    return G / m;
}

GeometryReport geometry_report(const Matrix& H, const LabelSet& y) {
    GeometryReport r;
    const Matrix M = class_means(H, y);
    r.delta_gm = delta_gm(M);
    r.delta_etf = y.k() >= 2 ? delta_etf(M) : 0.0;
    r.beta_nc = y.k() >= 2 ? beta_nc(H, y) : 0.0;

    const int k = y.k();
    r.cosine_table = Matrix::Zero(k, k);
    double sum = 0.0, abs_sum = 0.0;
    int pairs = 0;
    for (int a = 0; a < k; ++a) {
        for (int b = 0; b < k; ++b) {
            const double na = M.col(a).norm(), nb = M.col(b).norm();
            r.cosine_table(a, b) =
                (na > 0 && nb > 0) ? M.col(a).dot(M.col(b)) / (na * nb) : 0.0;
            if (b > a) {
                sum += r.cosine_table(a, b);
                abs_sum += std::abs(r.cosine_table(a, b));
                ++pairs;
            }
        }
    }
    r.mean_cos = pairs ? sum / pairs : 0.0;
    r.mean_abs_cos = pairs ? abs_sum / pairs : 0.0;
    r.heatmap = heatmap_payload(M.transpose() * M);
    return r;
}

}  // namespace sclgeo
