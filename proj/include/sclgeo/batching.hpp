#pragma once

#include "sclgeo/geometry.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace sclgeo {

/// Ordered collection of index subsets defining the mini-batch loss terms.
struct BatchSet {
    int n = 0;  // universe size
    std::vector<std::vector<int>> batches;

    BatchSet() = default;
    BatchSet(int n_, std::vector<std::vector<int>> batches_);

    /// Single batch containing all of [n].
    static BatchSet full(int n);

    void validate() const;  // indices in range, batches non-empty
};

/// Undirected graph on example indices: u ~ v iff some batch contains both.
class InteractionGraph {
public:
    explicit InteractionGraph(int n) : n_(n), adj_(n) {}

    int n() const { return n_; }
    bool has_edge(int u, int v) const;
    void add_edge(int u, int v);
    const std::vector<std::vector<int>>& adjacency() const { return adj_; }
    std::size_t edge_count() const;
    bool is_complete() const;

private:
    int n_;
    std::vector<std::vector<int>> adj_;  // sorted, no self loops
};

InteractionGraph build_graph(const BatchSet& batches);

struct ConditionReport {
    std::vector<bool> per_class_connected;
    std::vector<std::pair<int, int>> missing_cross_pairs;
    bool satisfied = false;
};

/// Checks the two batching conditions: every per-class induced subgraph is
/// connected, and every pair of classes has at least one connecting edge.
ConditionReport check_cor_conditions(const InteractionGraph& g, const LabelSet& y);

/// Connected components of the subgraph induced on the examples of each class.
/// Result[c] is a list of components, each a sorted list of example indices.
std::vector<std::vector<std::vector<int>>> class_components(const InteractionGraph& g,
                                                            const LabelSet& y);

/// Append one binding example per class to every batch (deduplicated, original
/// order preserved). Default binding: lowest index of each class; with a seed,
/// one uniformly random representative per class.
BatchSet batch_binding(const BatchSet& batches, const LabelSet& y,
                       const std::optional<std::vector<int>>& binding = std::nullopt,
                       std::optional<std::uint64_t> seed = std::nullopt);

enum class PartitionScheme { Fixed, Reshuffle };

/// Partition [n] into consecutive blocks of batch_size after a seeded uniform
/// shuffle. Fixed: the permutation depends only on the seed (epoch ignored).
/// Reshuffle: the permutation is a function of (seed, epoch). The last block
/// may be smaller.
BatchSet make_partition(const LabelSet& y, int batch_size, PartitionScheme scheme,
                        int epoch, std::uint64_t seed);

/// Interaction graph of the batch set obtained by splitting every permutation
/// of [n] into consecutive blocks of size b. Factorial enumeration; n <= 8.
InteractionGraph all_permutation_batches(int n, int b);

}  // namespace sclgeo
