#include "sclgeo/loss.hpp"

#include <cmath>
#include <limits>

namespace sclgeo {

void LossConfig::validate() const {
    if (!(tau > 0.0)) throw std::invalid_argument("LossConfig: tau must be > 0");
    if (base_tau && !(*base_tau > 0.0))
        throw std::invalid_argument("LossConfig: base_tau must be > 0");
}

double LossConfig::scale(int n) const {
    double s = base_tau ? tau / *base_tau : 1.0;
    if (per_sample) s /= static_cast<double>(n);
    return s;
}

namespace {

// Loss of one batch (subset of columns) with within-batch class counts.
// Per anchor i with n_{B,c} >= 2:
//   lse_i - mean over positives j of (h_i.h_j)/tau,
// where lse_i = logsumexp over l != i in B of (h_i.h_l)/tau.
double subset_loss(const Matrix& H, const std::vector<int>& labels,
                   const std::vector<int>& idx, double tau, int k) {
    const int m = static_cast<int>(idx.size());
    std::vector<int> cnt(k, 0);
    for (int i : idx) cnt[labels[i]]++;

    double total = 0.0;
    std::vector<double> z(m);
    for (int a = 0; a < m; ++a) {
        const int i = idx[a];
        const int c = labels[i];
        if (cnt[c] < 2) continue;

        double zmax = -std::numeric_limits<double>::infinity();
        double pos_sum = 0.0;
        for (int b = 0; b < m; ++b) {
            if (b == a) continue;
            const int l = idx[b];
            z[b] = H.col(i).dot(H.col(l)) / tau;
            zmax = std::max(zmax, z[b]);
            if (labels[l] == c) pos_sum += z[b];
        }
        double expsum = 0.0;
        for (int b = 0; b < m; ++b) {
            if (b == a) continue;
            expsum += std::exp(z[b] - zmax);
        }
        const double lse = zmax + std::log(expsum);
        total += lse - pos_sum / static_cast<double>(cnt[c] - 1);
    }
    return total;
}

// Adds the gradient of subset_loss into G.
void subset_gradient(const Matrix& H, const std::vector<int>& labels,
                     const std::vector<int>& idx, double tau, int k, Matrix& G) {
    const int m = static_cast<int>(idx.size());
    std::vector<int> cnt(k, 0);
    for (int i : idx) cnt[labels[i]]++;

    std::vector<double> z(m), s(m);
    for (int a = 0; a < m; ++a) {
        const int i = idx[a];
        const int c = labels[i];
        if (cnt[c] < 2) continue;

        double zmax = -std::numeric_limits<double>::infinity();
        for (int b = 0; b < m; ++b) {
            if (b == a) continue;
            z[b] = H.col(i).dot(H.col(idx[b])) / tau;
            zmax = std::max(zmax, z[b]);
        }
        double expsum = 0.0;
        for (int b = 0; b < m; ++b) {
            if (b == a) continue;
            s[b] = std::exp(z[b] - zmax);
            expsum += s[b];
        }
        const double wpos = 1.0 / (static_cast<double>(cnt[c] - 1) * tau);
        for (int b = 0; b < m; ++b) {
            if (b == a) continue;
            const int l = idx[b];
            const double w = s[b] / (expsum * tau);
            G.col(i) += w * H.col(l);
            G.col(l) += w * H.col(i);
            if (labels[l] == c) {
                G.col(i) -= wpos * H.col(l);
                G.col(l) -= wpos * H.col(i);
            }
        }
    }
}

void check_dims(const Matrix& H, const LabelSet& y) {
    if (H.cols() != y.n())
        throw std::invalid_argument("scl loss: H column count does not match labels");
}

std::vector<int> all_indices(int n) {
    std::vector<int> idx(n);
    for (int i = 0; i < n; ++i) idx[i] = i;
    return idx;
}

}  // namespace

double scl_full_loss(const Matrix& H, const LabelSet& y, const LossConfig& cfg) {
    cfg.validate();
    check_dims(H, y);
    const double raw = subset_loss(H, y.labels(), all_indices(y.n()), cfg.tau, y.k());
    return raw * cfg.scale(y.n());
}

double scl_batch_loss(const Matrix& H, const LabelSet& y, const BatchSet& batches,
                      const LossConfig& cfg) {
    cfg.validate();
    check_dims(H, y);
    batches.validate();
    if (batches.n != y.n())
        throw std::invalid_argument("scl_batch_loss: batch universe size mismatch");
    double raw = 0.0;
    for (const auto& b : batches.batches)
        raw += subset_loss(H, y.labels(), b, cfg.tau, y.k());
    return raw * cfg.scale(y.n());
}

Matrix scl_full_gradient(const Matrix& H, const LabelSet& y, const LossConfig& cfg) {
    cfg.validate();
    check_dims(H, y);
    Matrix G = Matrix::Zero(H.rows(), H.cols());
    subset_gradient(H, y.labels(), all_indices(y.n()), cfg.tau, y.k(), G);
    return G * cfg.scale(y.n());
}

Matrix scl_batch_gradient(const Matrix& H, const LabelSet& y, const BatchSet& batches,
                          const LossConfig& cfg) {
    cfg.validate();
    check_dims(H, y);
    batches.validate();
    if (batches.n != y.n())
        throw std::invalid_argument("scl_batch_gradient: batch universe size mismatch");
    Matrix G = Matrix::Zero(H.rows(), H.cols());
    for (const auto& b : batches.batches)
        subset_gradient(H, y.labels(), b, cfg.tau, y.k(), G);
    return G * cfg.scale(y.n());
}

namespace {

// sum_c n_c log(n_c - 1 + (n - n_c) e^{-1/tau}); classes with n_c <= 1 skipped.
double counts_bound(const std::vector<int>& counts, double tau) {
    int n = 0;
    for (int c : counts) n += c;
    const double e = std::exp(-1.0 / tau);
    double total = 0.0;
    for (int nc : counts) {
        if (nc < 2) continue;
        total += nc * std::log(nc - 1.0 + (n - nc) * e);
    }
    return total;
}

}  // namespace

double full_lower_bound(const std::vector<int>& counts, const LossConfig& cfg) {
    cfg.validate();
    if (counts.empty()) throw std::invalid_argument("full_lower_bound: empty counts");
    int n = 0;
    for (int c : counts) {
        if (c < 1) throw std::invalid_argument("full_lower_bound: counts must be >= 1");
        n += c;
    }
    return counts_bound(counts, cfg.tau) * cfg.scale(n);
}

double batch_lower_bound(const BatchSet& batches, const LabelSet& y,
                         const LossConfig& cfg) {
    cfg.validate();
    batches.validate();
    if (batches.n != y.n())
        throw std::invalid_argument("batch_lower_bound: batch universe size mismatch");
    double total = 0.0;
    for (const auto& b : batches.batches) {
        std::vector<int> cnt(y.k(), 0);
        for (int i : b) cnt[y.labels()[i]]++;
        total += counts_bound(cnt, cfg.tau);
    }
    return total * cfg.scale(y.n());
}

namespace {

LossReport make_report(double value, double bound, const LossConfig& cfg, double tol) {
    LossReport r;
    r.value = value;
    r.lower_bound = bound;
    r.gap = value - bound;
    r.achieved = r.gap <= tol * std::max(1.0, std::abs(bound));
    r.tau = cfg.tau;
    r.per_sample = cfg.per_sample;
    return r;
}

}  // namespace

LossReport full_loss_report(const Matrix& H, const LabelSet& y, const LossConfig& cfg,
                            double tol) {
    return make_report(scl_full_loss(H, y, cfg), full_lower_bound(y.counts(), cfg), cfg,
                       tol);
}

LossReport batch_loss_report(const Matrix& H, const LabelSet& y, const BatchSet& batches,
                             const LossConfig& cfg, double tol) {
    return make_report(scl_batch_loss(H, y, batches, cfg),
                       batch_lower_bound(batches, y, cfg), cfg, tol);
}

}  // namespace sclgeo
