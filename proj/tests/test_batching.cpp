#include "sclgeo/batching.hpp"

#include <doctest.h>

#include <algorithm>
#include <random>
#include <set>

using namespace sclgeo;

TEST_CASE("interaction graph from batch sets") {
    // one batch of everything: complete graph
    CHECK(build_graph(BatchSet::full(5)).is_complete());

    // singletons: no edges
    BatchSet singles(3, {{0}, {1}, {2}});
    CHECK(build_graph(singles).edge_count() == 0);

    BatchSet chain(3, {{0, 1}, {1, 2}});
    InteractionGraph g = build_graph(chain);
    CHECK(g.has_edge(0, 1));
    CHECK(g.has_edge(1, 2));
    CHECK_FALSE(g.has_edge(0, 2));
    CHECK(g.edge_count() == 2);

    CHECK_THROWS(build_graph(BatchSet(3, {{0, 7}})));
}

TEST_CASE("adding a batch never removes edges") {
    BatchSet base(6, {{0, 1, 2}, {3, 4}});
    InteractionGraph g1 = build_graph(base);
    BatchSet more = base;
    more.batches.push_back({1, 5});
    InteractionGraph g2 = build_graph(more);
    for (int u = 0; u < 6; ++u)
        for (int v = u + 1; v < 6; ++v)
            if (g1.has_edge(u, v)) CHECK(g2.has_edge(u, v));
}

TEST_CASE("condition checker: full batch satisfies everything") {
    LabelSet y({0, 0, 1, 1, 2});
    ConditionReport r = check_cor_conditions(build_graph(BatchSet::full(5)), y);
    CHECK(r.satisfied);
    CHECK(r.missing_cross_pairs.empty());
    for (bool c : r.per_class_connected) CHECK(c);
}

TEST_CASE("condition checker: disconnected class detected") {
    LabelSet y({0, 0, 0, 1, 1, 2, 2});
    BatchSet b(7, {{0, 1, 3, 4}, {2, 5, 6}});
    ConditionReport r = check_cor_conditions(build_graph(b), y);
    CHECK_FALSE(r.satisfied);
    CHECK_FALSE(r.per_class_connected[0]);  // {0,1} vs {2}
    CHECK(r.per_class_connected[1]);
    CHECK(r.per_class_connected[2]);
}

TEST_CASE("condition checker: missing cross-class edge detected") {
    LabelSet y({0, 0, 1, 1, 2, 2});
    // classes 1 and 2 never share a batch
    BatchSet b(6, {{0, 1, 2, 3}, {0, 1, 4, 5}});
    ConditionReport r = check_cor_conditions(build_graph(b), y);
    CHECK_FALSE(r.satisfied);
    REQUIRE(r.missing_cross_pairs.size() == 1);
    CHECK(r.missing_cross_pairs[0] == std::make_pair(1, 2));
}

TEST_CASE("batch binding produces a satisfying batch set") {
    LabelSet y({0, 0, 1, 1});
    BatchSet b(4, {{0, 1}, {2, 3}});
    BatchSet bound = batch_binding(b, y, std::vector<int>{0, 2});
    CHECK(bound.batches[0] == std::vector<int>{0, 1, 2});
    CHECK(bound.batches[1] == std::vector<int>{2, 3, 0});
    CHECK(check_cor_conditions(build_graph(bound), y).satisfied);
}

TEST_CASE("batch binding deduplicates and validates") {
    LabelSet y({0, 0, 1, 1});
    BatchSet b(4, {{0, 2, 1, 3}});
    BatchSet bound = batch_binding(b, y, std::vector<int>{0, 2});
    CHECK(bound.batches[0] == std::vector<int>{0, 2, 1, 3});  // unchanged

    CHECK_THROWS(batch_binding(b, y, std::vector<int>{0, 1}));     // same class twice
    CHECK_THROWS(batch_binding(b, y, std::vector<int>{0}));        // wrong size
    CHECK_THROWS(batch_binding(b, y, std::vector<int>{0, 9}));     // out of range
}

TEST_CASE("default binding is the lowest index per class; seeded mode is deterministic") {
    LabelSet y({1, 0, 1, 0, 2});
    BatchSet b(5, {{4}});
    BatchSet bound = batch_binding(b, y);
    CHECK(bound.batches[0] == std::vector<int>{4, 1, 0});

    BatchSet s1 = batch_binding(b, y, std::nullopt, 123);
    BatchSet s2 = batch_binding(b, y, std::nullopt, 123);
    CHECK(s1.batches == s2.batches);
}

TEST_CASE("binding repairs random partitions") {
    std::mt19937_64 eng(2024);
    for (int trial = 0; trial < 100; ++trial) {
        const int k = 2 + static_cast<int>(eng() % 9);
        std::vector<int> counts;
        for (int c = 0; c < k; ++c) counts.push_back(1 + static_cast<int>(eng() % 5));
        LabelSet y = LabelSet::from_counts(counts);
        const int bsz = 2 + static_cast<int>(eng() % 4);
        BatchSet part = make_partition(y, bsz, PartitionScheme::Reshuffle,
                                       trial, eng());
        BatchSet bound = batch_binding(part, y);
        CHECK(check_cor_conditions(build_graph(bound), y).satisfied);
    }
}

TEST_CASE("partition schemes") {
    LabelSet y = LabelSet::from_counts({3, 3});
    // fixed: identical across epochs
    BatchSet e0 = make_partition(y, 2, PartitionScheme::Fixed, 0, 0);
    BatchSet e5 = make_partition(y, 2, PartitionScheme::Fixed, 5, 0);
    CHECK(e0.batches == e5.batches);

    // reshuffle: epochs differ (for this seed), each is a valid partition
    BatchSet r0 = make_partition(y, 2, PartitionScheme::Reshuffle, 0, 0);
    BatchSet r1 = make_partition(y, 2, PartitionScheme::Reshuffle, 1, 0);
    CHECK(r0.batches != r1.batches);
    for (const BatchSet* p : {&r0, &r1}) {
        std::set<int> seen;
        for (const auto& b : p->batches)
            for (int i : b) CHECK(seen.insert(i).second);  // exactly once
        CHECK(seen.size() == 6);
    }

    // batch size n: one batch under both schemes
    CHECK(make_partition(y, 6, PartitionScheme::Fixed, 0, 1).batches.size() == 1);
    CHECK(make_partition(y, 6, PartitionScheme::Reshuffle, 3, 1).batches.size() == 1);

    // uneven split keeps the short tail
    BatchSet odd = make_partition(y, 4, PartitionScheme::Fixed, 0, 2);
    CHECK(odd.batches.size() == 2);
    CHECK(odd.batches[1].size() == 2);

    CHECK_THROWS(make_partition(y, 0, PartitionScheme::Fixed, 0, 0));
}

TEST_CASE("all-permutation batching yields the complete graph") {
    CHECK(all_permutation_batches(4, 2).is_complete());
    CHECK(all_permutation_batches(5, 3).is_complete());
    CHECK(all_permutation_batches(4, 4).is_complete());
    for (int n = 2; n <= 6; ++n)
        for (int b = 2; b <= n; ++b) CHECK(all_permutation_batches(n, b).is_complete());
    CHECK_THROWS(all_permutation_batches(9, 2));
    CHECK_THROWS(all_permutation_batches(4, 1));
}

TEST_CASE("complete graph satisfies the conditions for any nonempty classes") {
    for (int k : {2, 3, 4}) {
        std::vector<int> counts(k, 2);
        LabelSet y = LabelSet::from_counts(counts);
        CHECK(check_cor_conditions(build_graph(BatchSet::full(y.n())), y).satisfied);
    }
}
