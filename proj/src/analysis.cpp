#include "sclgeo/analysis.hpp"

#include "sclgeo/loss.hpp"
#include "sclgeo/metrics.hpp"

#include <cmath>
#include <stdexcept>

namespace sclgeo {

namespace {

void check_counterexample_args(int n_min, double ratio) {
    if (n_min < 2)
        throw std::invalid_argument("counterexample: n_min must be >= 2");
    if (ratio < 1.0)
        throw std::invalid_argument("counterexample: R must be >= 1");
    const double rn = ratio * n_min;
    if (std::abs(rn - std::round(rn)) > 1e-9)
        throw std::invalid_argument("counterexample: R * n_min must be integral");
}

}  // namespace

CounterexampleResult counterexample_losses(int n_min, double ratio) {
    check_counterexample_args(n_min, ratio);
    const double nm = n_min;
    const double R = ratio;
    const double e32 = std::exp(-1.5);
    const double e2 = std::exp(-2.0);

    CounterexampleResult r;
    r.n_min = n_min;
    r.ratio = ratio;
    r.loss_etf = nm * (R * std::log(R * nm - 1.0 + 2.0 * nm * e32) +
                       2.0 * std::log(nm - 1.0 + nm * (R + 1.0) * e32));
    r.loss_tilde = nm * (R * std::log(R * nm - 1.0 + 2.0 * nm * e2) +
                         2.0 * std::log(2.0 * nm - 1.0 + R * nm * e2));
    r.tilde_wins = r.loss_tilde < r.loss_etf;
    return r;
}

double verify_counterexample_formulas(int n_min, double ratio) {
    const CounterexampleResult cf = counterexample_losses(n_min, ratio);
    const int big = static_cast<int>(std::lround(ratio * n_min));
    const LabelSet y = LabelSet::from_counts({big, n_min, n_min});
    const int d = 3;
    LossConfig cfg;
    cfg.tau = 1.0;

    // ETF with exact within-class collapse
    const Matrix etf = make_etf(3, d);
    Matrix h_etf(d, y.n());
    for (int i = 0; i < y.n(); ++i) h_etf.col(i) = etf.col(y.labels()[i]);
    const double direct_etf = scl_full_loss(h_etf, y, cfg);

    // merged configuration: majority at mu, both minorities at -mu
    Vector mu = Vector::Zero(d);
    mu(0) = 1.0;
    Matrix h_tilde(d, y.n());
    for (int i = 0; i < y.n(); ++i)
        h_tilde.col(i) = (y.labels()[i] == 0) ? mu : Vector(-mu);
    const double direct_tilde = scl_full_loss(h_tilde, y, cfg);

    const double rel_etf =
        std::abs(cf.loss_etf - direct_etf) / std::max(1.0, std::abs(cf.loss_etf));
    const double rel_tilde =
        std::abs(cf.loss_tilde - direct_tilde) / std::max(1.0, std::abs(cf.loss_tilde));
    return std::max(rel_etf, rel_tilde);
}

NonOfResult build_non_of_optimizer(const LabelSet& y, const BatchSet& batches, int d) {
    const InteractionGraph g = build_graph(batches);
    const ConditionReport report = check_cor_conditions(g, y);
    NonOfResult out;
    if (report.satisfied) {
        out.reason = "conditions satisfied";
        return out;
    }

    const auto comps = class_components(g, y);

    // One direction per class component. If the only failure is a missing
    // cross-class edge, merge one such class pair onto a shared direction so
    // the result is genuinely non-OF.
    int units = 0;
    for (const auto& cc : comps) units += static_cast<int>(cc.size());

    bool any_split = false;
    for (const auto& cc : comps)
        if (cc.size() > 1) any_split = true;

    int merge_c1 = -1, merge_c2 = -1;
    if (!any_split) {
        merge_c1 = report.missing_cross_pairs.front().first;
        merge_c2 = report.missing_cross_pairs.front().second;
        units -= 1;
    }
    if (d < units) {
        out.reason = "d too small for the construction (need " +
                     std::to_string(units) + " directions)";
        return out;
    }

    Matrix H = Matrix::Zero(d, y.n());
    int next_dir = 0;
    std::vector<int> class_dir(y.k(), -1);  // used for the merge case
    for (int c = 0; c < y.k(); ++c) {
        for (const auto& comp : comps[c]) {
            int dir;
            if (!any_split && (c == merge_c1 || c == merge_c2)) {
                if (class_dir[merge_c1] < 0 && class_dir[merge_c2] < 0) {
                    dir = next_dir++;
                    class_dir[merge_c1] = class_dir[merge_c2] = dir;
                } else {
                    dir = class_dir[c];
                }
            } else {
                dir = next_dir++;
            }
            for (int i : comp) H(dir, i) = 1.0;
        }
    }

    // certify: bound attained and geometry not an orthogonal frame
    LossConfig cfg;  // any tau works; conditions are tau-independent
    cfg.tau = 1.0;
    const double loss = scl_batch_loss(H, y, batches, cfg);
    const double bound = batch_lower_bound(batches, y, cfg);
    if (std::abs(loss - bound) > 1e-9 * std::max(1.0, std::abs(bound))) {
        out.reason = "construction failed to attain the bound";
        return out;
    }
    const double dgm = delta_gm(class_means(H, y));
    const double bnc = y.k() >= 2 ? beta_nc(H, y) : 0.0;
    if (dgm <= 0.1 && bnc <= 0.1) {
        out.reason = "constructed optimizer is not distinguishably non-OF";
        return out;
    }
    out.ok = true;
    out.H = std::move(H);
    return out;
}

EqualityCheck equality_conditions_hold(const Matrix& H, const LabelSet& y,
                                       const BatchSet& batches, double tol) {
    const InteractionGraph g = build_graph(batches);
    EqualityCheck out;
    for (int u = 0; u < y.n(); ++u) {
        for (int v : g.adjacency()[u]) {
            if (v <= u) continue;
            PairViolation pv;
            pv.i = u;
            pv.j = v;
            pv.same_class = y.labels()[u] == y.labels()[v];
            pv.magnitude = pv.same_class ? (H.col(u) - H.col(v)).norm()
                                         : std::abs(H.col(u).dot(H.col(v)));
            if (pv.magnitude > tol) out.violations.push_back(pv);
        }
    }
    out.holds = out.violations.empty();
    return out;
}

}  // namespace sclgeo
