#include "sclgeo/analysis.hpp"
#include "sclgeo/loss.hpp"
#include "sclgeo/metrics.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace sclgeo;

TEST_CASE("counterexample closed forms: imbalanced vs balanced") {
    CounterexampleResult imb = counterexample_losses(2, 10);
    CHECK(imb.loss_etf == doctest::Approx(66.91269).epsilon(1e-6));
    CHECK(imb.loss_tilde == doctest::Approx(66.41721).epsilon(1e-6));
    CHECK(imb.tilde_wins);

    CounterexampleResult bal = counterexample_losses(2, 1);
    CHECK(bal.loss_etf == doctest::Approx(3.82746).epsilon(1e-5));
    CHECK(bal.loss_tilde == doctest::Approx(5.60529).epsilon(1e-5));
    CHECK_FALSE(bal.tilde_wins);

    CHECK_THROWS(counterexample_losses(1, 10));
    CHECK_THROWS(counterexample_losses(2, 2.7));  // non-integral R*n_min
}

TEST_CASE("merged configuration wins across the imbalanced sweep") {
    for (int n_min = 2; n_min <= 10; ++n_min)
        for (int R = 10; R <= 100; R += 10)
            CHECK(counterexample_losses(n_min, R).tilde_wins);
}

TEST_CASE("closed forms match direct loss evaluation") {
    CHECK(verify_counterexample_formulas(2, 10) < 1e-9);
    CHECK(verify_counterexample_formulas(3, 12) < 1e-9);
    CHECK(verify_counterexample_formulas(2, 1) < 1e-9);
}

TEST_CASE("non-OF optimizer: disconnected-class split") {
    LabelSet y({0, 0, 0, 1, 1, 2, 2});
    BatchSet b(7, {{0, 1, 3, 4}, {2, 5, 6}});
    NonOfResult r = build_non_of_optimizer(y, b, 4);
    REQUIRE(r.ok);

    LossConfig cfg;
    cfg.tau = 1.0;
    const double loss = scl_batch_loss(r.H, y, b, cfg);
    const double bound = batch_lower_bound(b, y, cfg);
    CHECK(std::abs(loss - bound) <= 1e-9 * std::max(1.0, std::abs(bound)));
    // split class means are non-orthogonal / shrunk, and collapse is broken
    const bool non_of = delta_gm(class_means(r.H, y)) > 0.1 || beta_nc(r.H, y) > 0.1;
    CHECK(non_of);
    CHECK(beta_nc(r.H, y) > 1e-3);
    CHECK(equality_conditions_hold(r.H, y, b, 1e-9).holds);
}

TEST_CASE("non-OF optimizer: merged never-co-batched classes") {
    LabelSet y({0, 0, 1, 1, 2, 2});
    BatchSet b(6, {{0, 1, 2, 3}, {0, 1, 4, 5}});  // classes 1 and 2 never meet
    NonOfResult r = build_non_of_optimizer(y, b, 3);
    REQUIRE(r.ok);

    LossConfig cfg;
    cfg.tau = 1.0;
    const double loss = scl_batch_loss(r.H, y, b, cfg);
    const double bound = batch_lower_bound(b, y, cfg);
    CHECK(std::abs(loss - bound) <= 1e-9 * std::max(1.0, std::abs(bound)));
    CHECK(delta_gm(class_means(r.H, y)) > 0.1);

    // merged classes share a mean
    Matrix M = class_means(r.H, y);
    CHECK((M.col(1) - M.col(2)).norm() < 1e-12);
}

TEST_CASE("non-OF optimizer refuses satisfying batch sets") {
    LabelSet y({0, 0, 1, 1});
    NonOfResult r = build_non_of_optimizer(y, BatchSet::full(4), 4);
    CHECK_FALSE(r.ok);
    CHECK(r.reason == "conditions satisfied");
}

TEST_CASE("non-OF optimizer reports insufficient dimension") {
    LabelSet y({0, 0, 0, 1, 1, 2, 2});
    BatchSet b(7, {{0, 1, 3, 4}, {2, 5, 6}});
    NonOfResult r = build_non_of_optimizer(y, b, 2);  // needs 4 directions
    CHECK_FALSE(r.ok);
}

TEST_CASE("equality-conditions scan") {
    LabelSet y({0, 0, 1, 1});
    Matrix M = make_of(2, 3);
    Matrix H(3, 4);
    for (int i = 0; i < 4; ++i) H.col(i) = M.col(y.labels()[i]);
    CHECK(equality_conditions_hold(H, y, BatchSet::full(4), 1e-9).holds);

    // plant a cross-class cosine of 0.3 between co-batched examples
    Matrix bad = H;
    Vector v(3);
    v << 0.3, std::sqrt(1.0 - 0.09), 0.0;
    bad.col(2) = v;
    EqualityCheck chk = equality_conditions_hold(bad, y, BatchSet::full(4), 1e-5);
    CHECK_FALSE(chk.holds);
    bool found = false;
    for (const auto& pv : chk.violations)
        if (!pv.same_class && ((pv.i == 0 && pv.j == 2) || (pv.i == 2 && pv.j == 0)))
            found = true;
    CHECK(found);
}

TEST_CASE("bound equality iff the pairwise conditions hold (small instances)") {
    std::mt19937_64 eng(31);
    std::normal_distribution<double> gauss;
    LossConfig cfg;
    cfg.tau = 1.0;

    LabelSet y({0, 0, 1, 1, 2, 2});
    BatchSet b(6, {{0, 1, 2, 3}, {2, 3, 4, 5}});
    const double bound = batch_lower_bound(b, y, cfg);

    // random feasible points: equality and conditions always agree
    for (int trial = 0; trial < 60; ++trial) {
        Matrix H(6, 6);
        for (int j = 0; j < 6; ++j)
            for (int i = 0; i < 6; ++i) H(i, j) = std::abs(gauss(eng));
        H = project_feasible_columns(H, true);
        const double loss = scl_batch_loss(H, y, b, cfg);
        const bool at_bound = std::abs(loss - bound) <= 1e-9 * std::max(1.0, bound);
        const bool conds = equality_conditions_hold(H, y, b, 1e-5).holds;
        CHECK(at_bound == conds);
    }

    // constructed equality case: conditions hold and the loss sits at the bound
    Matrix M = make_of(3, 6);
    Matrix H(6, 6);
    for (int i = 0; i < 6; ++i) H.col(i) = M.col(y.labels()[i]);
    CHECK(equality_conditions_hold(H, y, b, 1e-9).holds);
    CHECK(scl_batch_loss(H, y, b, cfg) == doctest::Approx(bound).epsilon(1e-12));
}
