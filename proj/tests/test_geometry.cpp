#include "sclgeo/geometry.hpp"
#include "sclgeo/io.hpp"

#include <doctest.h>

#include <cmath>
#include <random>
#include <sstream>

using namespace sclgeo;

namespace {

Vector basis(int d, int i) {
    Vector e = Vector::Zero(d);
    e(i) = 1.0;
    return e;
}

Matrix random_matrix(int d, int n, std::uint64_t seed) {
    std::mt19937_64 eng(seed);
    std::normal_distribution<double> gauss;
    Matrix H(d, n);
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < d; ++i) H(i, j) = gauss(eng);
    return H;
}

}  // namespace

TEST_CASE("label set derives counts and validates") {
    LabelSet y({0, 1, 0, 2, 1, 0});
    CHECK(y.n() == 6);
    CHECK(y.k() == 3);
    CHECK(y.counts() == std::vector<int>{3, 2, 1});
    CHECK_THROWS(LabelSet({0, 2}));  // class 1 missing
    CHECK_THROWS(LabelSet({}));

    LabelSet z = LabelSet::from_counts({2, 3});
    CHECK(z.labels() == std::vector<int>{0, 0, 1, 1, 1});
}

TEST_CASE("class means: exact collapse and two-point mean") {
    const int d = 3;
    Matrix H(d, 4);
    H << basis(d, 0), basis(d, 0), basis(d, 1), basis(d, 1);
    LabelSet y({0, 0, 1, 1});
    Matrix M = class_means(H, y);
    CHECK((M.col(0) - basis(d, 0)).norm() == 0.0);
    CHECK((M.col(1) - basis(d, 1)).norm() == 0.0);

    Matrix H2(d, 2);
    H2 << basis(d, 0), basis(d, 1);
    Matrix M2 = class_means(H2, LabelSet({0, 0}));
    CHECK((M2.col(0) - 0.5 * (basis(d, 0) + basis(d, 1))).norm() == 0.0);

    CHECK_THROWS(class_means(H, LabelSet({0, 1})));
}

TEST_CASE("class means match per-class averaging oracle") {
    Matrix H = random_matrix(4, 6, 42);
    LabelSet y({0, 1, 2, 0, 1, 2});
    Matrix M = class_means(H, y);
    for (int c = 0; c < 3; ++c) {
        Vector avg = Vector::Zero(4);
        int cnt = 0;
        for (int i = 0; i < 6; ++i)
            if (y.labels()[i] == c) {
                avg += H.col(i);
                ++cnt;
            }
        avg /= cnt;
        CHECK((M.col(c) - avg).norm() < 1e-15);
    }
}

TEST_CASE("class means are permutation equivariant") {
    Matrix H = random_matrix(3, 8, 7);
    std::vector<int> labels{0, 1, 1, 0, 2, 2, 0, 1};
    Matrix M = class_means(H, LabelSet(labels));

    std::vector<int> perm{3, 5, 0, 7, 2, 6, 1, 4};
    Matrix Hp(3, 8);
    std::vector<int> lp(8);
    for (int i = 0; i < 8; ++i) {
        Hp.col(i) = H.col(perm[i]);
        lp[i] = labels[perm[i]];
    }
    Matrix Mp = class_means(Hp, LabelSet(lp));
    CHECK((M - Mp).norm() < 1e-15);
}

TEST_CASE("orthogonal frame construction") {
    Matrix M = make_of(2, 2);
    CHECK((M - Matrix::Identity(2, 2)).norm() == 0.0);

    Matrix M2 = make_of(3, 5);
    CHECK(M2.rows() == 5);
    CHECK((M2.transpose() * M2 - Matrix::Identity(3, 3)).norm() == 0.0);
    CHECK(M2.minCoeff() >= 0.0);

    CHECK_THROWS(make_of(4, 3));
}

TEST_CASE("simplex ETF construction") {
    Matrix M2 = make_etf(2, 2);
    CHECK(M2.col(0).dot(M2.col(1)) == doctest::Approx(-1.0).epsilon(1e-12));

    Matrix M3 = make_etf(3, 3);
    for (int a = 0; a < 3; ++a) {
        CHECK(M3.col(a).norm() == doctest::Approx(1.0).epsilon(1e-12));
        for (int b = a + 1; b < 3; ++b)
            CHECK(M3.col(a).dot(M3.col(b)) == doctest::Approx(-0.5).epsilon(1e-12));
    }

    // Gram = (k/(k-1)) (I - 11^T/k)
    const int k = 5, d = 8;
    Matrix M5 = make_etf(k, d);
    Matrix target = (double(k) / (k - 1)) *
                    (Matrix::Identity(k, k) - Matrix::Constant(k, k, 1.0 / k));
    CHECK((M5.transpose() * M5 - target).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("column centering") {
    Matrix M = make_of(4, 6);
    Matrix C = center_columns(M);
    CHECK(C.rowwise().sum().norm() < 1e-12);
    // centered OF Gram is I - (1/k) 11^T
    Matrix target =
        Matrix::Identity(4, 4) - Matrix::Constant(4, 4, 0.25);
    CHECK((C.transpose() * C - target).cwiseAbs().maxCoeff() < 1e-14);

    // idempotent
    CHECK((center_columns(C) - C).norm() < 1e-15);

    Matrix same = Matrix::Ones(3, 4);
    CHECK(center_columns(same).norm() == 0.0);
}

TEST_CASE("centered orthogonal frames are simplex ETFs") {
    for (int k = 2; k <= 16; ++k) {
        for (int d = k; d <= k + 4; ++d) {
            Matrix C = center_columns(make_of(k, d));
            for (int c = 0; c < k; ++c) C.col(c) /= C.col(c).norm();
            Matrix target = (double(k) / (k - 1)) *
                            (Matrix::Identity(k, k) - Matrix::Constant(k, k, 1.0 / k));
            CHECK((C.transpose() * C - target).cwiseAbs().maxCoeff() < 1e-12);
        }
    }
}

TEST_CASE("feasible-set projection") {
    Vector v(3);
    v << 0.3, -0.4, 0.0;
    auto r = project_feasible(v, true);
    CHECK_FALSE(r.degenerate);
    CHECK((r.x - basis(3, 0)).norm() < 1e-15);

    Vector f(2);
    f << 0.6, 0.8;
    auto rf = project_feasible(f, true);
    CHECK((rf.x - f).norm() < 1e-15);

    Vector neg(2);
    neg << -1.0, -2.0;
    auto rn = project_feasible(neg, true);
    CHECK(rn.degenerate);
    CHECK((rn.x - Vector::Constant(2, 1.0 / std::sqrt(2.0))).norm() < 1e-15);
}

TEST_CASE("projection is the nearest feasible point (random-search oracle)") {
    std::mt19937_64 eng(11);
    std::normal_distribution<double> gauss;
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    for (int trial = 0; trial < 20; ++trial) {
        const int d = 2 + static_cast<int>(eng() % 2);
        Vector v(d);
        for (int i = 0; i < d; ++i) v(i) = gauss(eng);
        if (v.cwiseMax(0.0).norm() == 0.0) continue;
        auto r = project_feasible(v, true);
        const double best = (r.x - v).norm();
        for (int s = 0; s < 20000; ++s) {
            Vector c(d);
            for (int i = 0; i < d; ++i) c(i) = uni(eng);
            if (c.norm() == 0.0) continue;
            c /= c.norm();
            CHECK((c - v).norm() >= best - 1e-9);
        }
    }
}

TEST_CASE("feasibility checks") {
    Matrix M = make_of(3, 4);
    CHECK(is_feasible(M, true));
    CHECK(is_feasible(make_etf(3, 3), false));
    CHECK_FALSE(is_feasible(make_etf(3, 3), true));  // negative entries
    CHECK(is_symmetric_psd(M.transpose() * M));
}

TEST_CASE("embedding csv round trip is exact") {
    Matrix H = random_matrix(4, 7, 99);
    std::stringstream ss;
    write_embedding_csv(ss, H);
    Matrix back = read_embedding_csv(ss);
    CHECK(back.rows() == 4);
    CHECK(back.cols() == 7);
    CHECK((H - back).norm() == 0.0);
}

TEST_CASE("labels csv round trip") {
    LabelSet y({0, 2, 1, 1, 0, 2});
    std::stringstream ss;
    write_labels_csv(ss, y);
    LabelSet back = read_labels_csv(ss);
    CHECK(back.labels() == y.labels());
}
