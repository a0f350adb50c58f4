#pragma once

#include "sclgeo/geometry.hpp"

namespace sclgeo {

/// Frobenius distance between the unit-normalized Gram of M and the
/// unit-normalized identity (distance to an orthogonal frame).
double delta_gm(const Matrix& M);

/// Center columns, form the Gram, unit-normalize, and measure the Frobenius
/// distance to the unit-normalized I - (1/k) 11^T (distance to a simplex ETF).
double delta_etf(const Matrix& M);

/// Neural-collapse metric tr(Sigma_W Sigma_B^+)/k. The pseudoinverse of
/// Sigma_B uses a symmetric eigendecomposition with relative eigenvalue
/// cutoff 1e-10 * lambda_max.
double beta_nc(const Matrix& H, const LabelSet& y);

/// Average cosine similarity of class-mean pairs, over unordered c != c'.
double mean_pairwise_cosine(const Matrix& M);

/// Gram matrix divided by its maximum absolute entry; entries in [-1, 1].
Matrix heatmap_payload(const Matrix& G);

struct GeometryReport {
    double delta_gm = 0.0;
    double delta_etf = 0.0;
    double beta_nc = 0.0;
    double mean_cos = 0.0;      // signed average over pairs
    double mean_abs_cos = 0.0;
    Matrix cosine_table;        // k x k pairwise cosines of class means
    Matrix heatmap;             // normalized mean-embedding Gram
};

GeometryReport geometry_report(const Matrix& H, const LabelSet& y);

}  // namespace sclgeo
