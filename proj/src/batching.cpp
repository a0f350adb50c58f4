#include "sclgeo/batching.hpp"

#include <algorithm>
#include <numeric>
#include <random>
#include <set>

namespace sclgeo {

BatchSet::BatchSet(int n_, std::vector<std::vector<int>> batches_)
    : n(n_), batches(std::move(batches_)) {
    validate();
}

BatchSet BatchSet::full(int n) {
    std::vector<int> all(n);
    std::iota(all.begin(), all.end(), 0);
    return BatchSet(n, {std::move(all)});
}

void BatchSet::validate() const {
    for (const auto& b : batches) {
        if (b.empty()) throw std::invalid_argument("BatchSet: empty batch");
        for (int i : b)
            if (i < 0 || i >= n)
                throw std::out_of_range("BatchSet: index " + std::to_string(i) +
                                        " out of range [0," + std::to_string(n) + ")");
    }
}

bool InteractionGraph::has_edge(int u, int v) const {
    const auto& a = adj_[u];
    return std::binary_search(a.begin(), a.end(), v);
}

void InteractionGraph::add_edge(int u, int v) {
    if (u == v) return;
    auto insert_sorted = [](std::vector<int>& a, int x) {
        auto it = std::lower_bound(a.begin(), a.end(), x);
        if (it == a.end() || *it != x) a.insert(it, x);
    };
    insert_sorted(adj_[u], v);
    insert_sorted(adj_[v], u);
}

std::size_t InteractionGraph::edge_count() const {
    std::size_t deg = 0;
    for (const auto& a : adj_) deg += a.size();
    return deg / 2;
}

bool InteractionGraph::is_complete() const {
    return edge_count() == static_cast<std::size_t>(n_) * (n_ - 1) / 2;
}

InteractionGraph build_graph(const BatchSet& batches) {
    batches.validate();
    InteractionGraph g(batches.n);
    for (const auto& b : batches.batches)
        for (std::size_t p = 0; p < b.size(); ++p)
            for (std::size_t q = p + 1; q < b.size(); ++q) g.add_edge(b[p], b[q]);
    return g;
}

namespace {

struct UnionFind {
    std::vector<int> parent;
    explicit UnionFind(int n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
    int find(int x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    }
    void unite(int a, int b) { parent[find(a)] = find(b); }
};

}  // namespace

std::vector<std::vector<std::vector<int>>> class_components(const InteractionGraph& g,
                                                            const LabelSet& y) {
    if (g.n() != y.n())
        throw std::invalid_argument("class_components: graph/label size mismatch");
    UnionFind uf(y.n());
    for (int u = 0; u < y.n(); ++u)
        for (int v : g.adjacency()[u])
            if (u < v && y.labels()[u] == y.labels()[v]) uf.unite(u, v);

    std::vector<std::vector<std::vector<int>>> comps(y.k());
    std::vector<int> root_slot(y.n(), -1);
    for (int i = 0; i < y.n(); ++i) {
        const int c = y.labels()[i];
        const int r = uf.find(i);
        if (root_slot[r] < 0) {
            root_slot[r] = static_cast<int>(comps[c].size());
            comps[c].emplace_back();
        }
        comps[c][root_slot[r]].push_back(i);
    }
    return comps;
}

ConditionReport check_cor_conditions(const InteractionGraph& g, const LabelSet& y) {
    ConditionReport r;
    const auto comps = class_components(g, y);
    r.per_class_connected.resize(y.k());
    for (int c = 0; c < y.k(); ++c) r.per_class_connected[c] = comps[c].size() == 1;

    for (int c1 = 0; c1 < y.k(); ++c1) {
        for (int c2 = c1 + 1; c2 < y.k(); ++c2) {
            bool found = false;
            for (int u = 0; u < y.n() && !found; ++u) {
                if (y.labels()[u] != c1) continue;
                for (int v : g.adjacency()[u]) {
                    if (y.labels()[v] == c2) {
                        found = true;
                        break;
                    }
                }
            }
            if (!found) r.missing_cross_pairs.emplace_back(c1, c2);
        }
    }
    r.satisfied = r.missing_cross_pairs.empty() &&
                  std::all_of(r.per_class_connected.begin(), r.per_class_connected.end(),
                              [](bool b) { return b; });
    return r;
}

namespace {

// Deterministic Fisher-Yates with mt19937_64 so partitions reproduce across
// platforms for a given (seed, epoch).
std::vector<int> seeded_permutation(int n, std::uint64_t seed) {
    std::mt19937_64 eng(seed);
    std::vector<int> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    for (int i = n - 1; i > 0; --i) {
        const auto j = static_cast<int>(eng() % static_cast<std::uint64_t>(i + 1));
        std::swap(perm[i], perm[j]);
    }
    return perm;
}

}  // namespace

BatchSet batch_binding(const BatchSet& batches, const LabelSet& y,
                       const std::optional<std::vector<int>>& binding,
                       std::optional<std::uint64_t> seed) {
    batches.validate();
    if (batches.n != y.n())
        throw std::invalid_argument("batch_binding: batch/label size mismatch");

    std::vector<int> bind;
    if (binding) {
        bind = *binding;
        if (static_cast<int>(bind.size()) != y.k())
            throw std::invalid_argument("batch_binding: need exactly one index per class");
        std::vector<bool> seen(y.k(), false);
        for (int i : bind) {
            if (i < 0 || i >= y.n()) throw std::out_of_range("batch_binding: bad index");
            const int c = y.labels()[i];
            if (seen[c])
                throw std::invalid_argument("batch_binding: duplicate class in binding set");
            seen[c] = true;
        }
    } else {
        const auto idx = y.class_indices();
        if (seed) {
            std::mt19937_64 eng(*seed);
            for (int c = 0; c < y.k(); ++c)
                bind.push_back(idx[c][eng() % idx[c].size()]);
        } else {
            for (int c = 0; c < y.k(); ++c) bind.push_back(idx[c].front());
        }
    }

    BatchSet out;
    out.n = batches.n;
    for (const auto& b : batches.batches) {
        std::vector<int> nb = b;
        std::set<int> present(b.begin(), b.end());
        for (int i : bind)
            if (present.insert(i).second) nb.push_back(i);
        out.batches.push_back(std::move(nb));
    }
    return out;
}

BatchSet make_partition(const LabelSet& y, int batch_size, PartitionScheme scheme,
                        int epoch, std::uint64_t seed) {
    const int n = y.n();
    if (batch_size < 1) throw std::invalid_argument("make_partition: batch_size < 1");
    if (batch_size > n) batch_size = n;

    std::uint64_t eff = seed;
    if (scheme == PartitionScheme::Reshuffle)
        eff = seed * 0x9E3779B97F4A7C15ULL + static_cast<std::uint64_t>(epoch) + 1;
    const auto perm = seeded_permutation(n, eff);

    BatchSet out;
    out.n = n;
    for (int start = 0; start < n; start += batch_size) {
        const int end = std::min(start + batch_size, n);
        out.batches.emplace_back(perm.begin() + start, perm.begin() + end);
    }
    return out;
}

InteractionGraph all_permutation_batches(int n, int b) {
    if (n < 2 || n > 8)
        throw std::invalid_argument("all_permutation_batches: requires 2 <= n <= 8");
    if (b < 2 || b > n)
        throw std::invalid_argument("all_permutation_batches: requires 2 <= b <= n");
    InteractionGraph g(n);
    std::vector<int> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    do {
        for (int start = 0; start < n; start += b) {
            const int end = std::min(start + b, n);
            for (int p = start; p < end; ++p)
                for (int q = p + 1; q < end; ++q) g.add_edge(perm[p], perm[q]);
        }
    } while (std::next_permutation(perm.begin(), perm.end()));
    return g;
}

}  // namespace sclgeo
