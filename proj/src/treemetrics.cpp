#include "troptree/treemetrics.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <random>
#include <set>

#include "troptree/error.hpp"
#include "troptree/topology.hpp"

namespace troptree {

namespace {

// Largest value attained at least twice among `values`, within tol.
template <std::size_t K>
bool max_attained_twice(std::array<double, K> values, double tol) {
    std::sort(values.begin(), values.end());
    return values[K - 1] - values[K - 2] <= tol;
}


// Whether w lies within `slack` of its subdominant ultrametric, the minimax path
// distance over a minimum spanning tree. O(N^2) via Prim.
bool near_subdominant(const PairVector& w, double slack) {
    const int n = w.leaf_count();
    constexpr double inf = std::numeric_limits<double>::infinity();
    std::vector<std::vector<std::pair<int, double>>> mst(static_cast<std::size_t>(n));
    std::vector<double> best(static_cast<std::size_t>(n), inf);
    std::vector<int> link(static_cast<std::size_t>(n), -1);
    std::vector<bool> done(static_cast<std::size_t>(n), false);
    best[0] = 0.0;
    for (int step = 0; step < n; ++step) {
        int u = -1;
        for (int v = 0; v < n; ++v) {
            if (!done[static_cast<std::size_t>(v)] && (u < 0 || best[static_cast<std::size_t>(v)] < best[static_cast<std::size_t>(u)])) u = v;
        }
        done[static_cast<std::size_t>(u)] = true;
        if (const int parent = link[static_cast<std::size_t>(u)]; parent >= 0) {
            const double d = w.at(parent + 1, u + 1);
            mst[static_cast<std::size_t>(u)].push_back({parent, d});
            mst[static_cast<std::size_t>(parent)].push_back({u, d});
        }
        for (int v = 0; v < n; ++v) {
            if (done[static_cast<std::size_t>(v)]) continue;
            const double d = w.at(u + 1, v + 1);
            if (d < best[static_cast<std::size_t>(v)]) {
                best[static_cast<std::size_t>(v)] = d;
                link[static_cast<std::size_t>(v)] = u;
            }
        }
    }

    std::vector<double> minimax(static_cast<std::size_t>(n));
    std::vector<int> stack;
    for (int root = 0; root < n; ++root) {
        std::fill(minimax.begin(), minimax.end(), -inf);
        minimax[static_cast<std::size_t>(root)] = 0.0;
        stack.assign(1, root);
        while (!stack.empty()) {
            const int u = stack.back();
            stack.pop_back();
            for (const auto& [v, d] : mst[static_cast<std::size_t>(u)]) {
                if (v == root || minimax[static_cast<std::size_t>(v)] != -inf) continue;
                minimax[static_cast<std::size_t>(v)] = std::max(minimax[static_cast<std::size_t>(u)], d);
                stack.push_back(v);
            }
        }
        for (int v = root + 1; v < n; ++v) {
            if (std::abs(w.at(root + 1, v + 1) - minimax[static_cast<std::size_t>(v)]) > slack) return false;
        }
    }
    return true;
}

}  // namespace

std::vector<std::string> default_labels(int leaf_count) {
    std::vector<std::string> labels;
    labels.reserve(static_cast<std::size_t>(leaf_count));
    for (int i = 1; i <= leaf_count; ++i) labels.push_back(std::to_string(i));
    return labels;
}

EquidistantTree::EquidistantTree(int leaf_count, std::map<Clade, double> internal_edges, double height,
                                 std::vector<std::string> labels)
    : leaf_count_(leaf_count),
      internal_edges_(std::move(internal_edges)),
      height_(height),
      labels_(labels.empty() ? default_labels(leaf_count) : std::move(labels)) {
    if (leaf_count_ < 2) throw InvalidArgument("an equidistant tree needs at least 2 leaves");
    if (static_cast<int>(labels_.size()) != leaf_count_) {
        throw InvalidArgument("expected " + std::to_string(leaf_count_) + " leaf labels");
    }
    if (std::set<std::string>(labels_.begin(), labels_.end()).size() != labels_.size()) {
        throw InvalidArgument("duplicate leaf labels");
    }
    if (!std::isfinite(height_) || height_ < 0.0) throw InvalidArgument("tree height must be finite and >= 0");

    // Validates the nested-set structure of the keys.
    Topology(leaf_count_, clades());

    external_edges_.assign(static_cast<std::size_t>(leaf_count_), height_);
    for (const auto& [clade, length] : internal_edges_) {
        if (!std::isfinite(length) || length <= 0.0) {
            throw InvalidArgument("internal edge lengths must be positive");
        }
        for (int leaf : clade) external_edges_[static_cast<std::size_t>(leaf - 1)] -= length;
    }
    const double slack = 1e-12 * std::max(1.0, height_);
    for (double& ext : external_edges_) {
        if (ext < -slack) throw InvalidArgument("internal edges exceed the tree height");
        ext = std::max(ext, 0.0);
    }
}

EquidistantTree EquidistantTree::star(int leaf_count, double height, std::vector<std::string> labels) {
    return EquidistantTree(leaf_count, {}, height, std::move(labels));
}

std::vector<Clade> EquidistantTree::clades() const {
    std::vector<Clade> out;
    out.reserve(internal_edges_.size());
    for (const auto& entry : internal_edges_) out.push_back(entry.first);
    return out;
}

const char* to_string(ValidationReport::Kind kind) noexcept {
    switch (kind) {
        case ValidationReport::Kind::TreeMetric: return "tree metric";
        case ValidationReport::Kind::Ultrametric: return "ultrametric";
        case ValidationReport::Kind::Neither: return "neither";
    }
    return "neither";
}

ValidationReport is_tree_metric(const PairVector& w, double tol) {
    const int n = w.leaf_count();
    for (int i = 1; i <= n; ++i)
        for (int j = i + 1; j <= n; ++j)
            for (int k = j + 1; k <= n; ++k)
                for (int l = k + 1; l <= n; ++l) {
                    const std::array<double, 3> sums{w.at(i, j) + w.at(k, l), w.at(i, k) + w.at(j, l),
                                                     w.at(i, l) + w.at(j, k)};
                    if (!max_attained_twice(sums, tol)) {
                        return {ValidationReport::Kind::Neither, {i, j, k, l}};
                    }
                }
    return {ValidationReport::Kind::TreeMetric, {}};
}

ValidationReport is_ultrametric(const PairVector& w, double tol) {
    // Within tol/2 of an ultrametric, every triple's two largest entries differ by
    // at most tol, so the cubic scan below is only needed to find a witness.
    if (near_subdominant(w, tol / 2.0)) return {ValidationReport::Kind::Ultrametric, {}};
    const int n = w.leaf_count();
    for (int i = 1; i <= n; ++i)
        for (int j = i + 1; j <= n; ++j)
            for (int k = j + 1; k <= n; ++k) {
                const std::array<double, 3> d{w.at(i, j), w.at(i, k), w.at(j, k)};
                if (!max_attained_twice(d, tol)) return {ValidationReport::Kind::Neither, {i, j, k}};
            }
    return {ValidationReport::Kind::Ultrametric, {}};
}

PairVector tree_to_vector(const EquidistantTree& tree) {
    const int n = tree.leaf_count();
    std::vector<double> coords(pair_count(n), 2.0 * tree.height());
    for (const auto& [clade, length] : tree.internal_edges()) {
        for (std::size_t a = 0; a < clade.size(); ++a)
            for (std::size_t b = a + 1; b < clade.size(); ++b)
                coords[pair_index(n, clade[a], clade[b])] -= 2.0 * length;
    }
    return PairVector(n, std::move(coords));
}

EquidistantTree vector_to_tree(const PairVector& w, std::optional<double> height, double tol,
                               std::vector<std::string> labels) {
    const auto report = is_ultrametric(w, tol);
    if (!report.ok()) throw NotUltrametric("vector_to_tree: input is not an ultrametric");

    const int n = w.leaf_count();
    const Topology topology = topology_of(w, tol);
    const ClosureTable table(topology);

    // Level of each node: mean of the coordinates whose closure it is.
    std::vector<double> level_sum(static_cast<std::size_t>(table.node_count()), 0.0);
    std::vector<int> level_count(static_cast<std::size_t>(table.node_count()), 0);
    for (std::size_t p = 0; p < w.size(); ++p) {
        const auto node = static_cast<std::size_t>(table.closure(p));
        level_sum[node] += w[p];
        ++level_count[node];
    }
    std::vector<double> level(level_sum.size());
    for (std::size_t k = 0; k < level.size(); ++k) level[k] = level_sum[k] / level_count[k];

    std::map<Clade, double> internal;
    for (int node = 0; node < table.root(); ++node) {
        const double up = level[static_cast<std::size_t>(table.parent(node))];
        internal.emplace(table.node_set(node), (up - level[static_cast<std::size_t>(node)]) / 2.0);
    }

    // External edge of leaf i is h - (root level - level of its smallest clade) / 2,
    // so the shortest one is h - (root level - lowest level) / 2.
    const double root_level = level[static_cast<std::size_t>(table.root())];
    const double lowest = *std::min_element(level.begin(), level.end());
    const double needed = (root_level - lowest) / 2.0;
    double h = std::max(root_level / 2.0, needed);
    if (height) {
        if (*height < needed - tol) {
            throw InvalidArgument("requested height " + std::to_string(*height) + " is below the minimum " +
                                  std::to_string(needed));
        }
        h = std::max(*height, needed);
    }
    return EquidistantTree(n, std::move(internal), h, std::move(labels));
}

EquidistantTree random_coalescent_tree(int leaf_count, std::uint64_t seed) {
    if (leaf_count < 2) throw InvalidArgument("random_coalescent_tree needs at least 2 leaves");
    std::mt19937_64 rng(seed);

    std::vector<Clade> active;
    for (int i = 1; i <= leaf_count; ++i) active.push_back({i});

    struct Merge {
        Clade clade;
        double born;
        std::size_t parent;  // index into merges, filled when it merges again
    };
    std::vector<Merge> merges;
    std::vector<long> active_merge(active.size(), -1);

    double t = 0.0;
    while (active.size() > 1) {
        const double k = static_cast<double>(active.size());
        t += std::exponential_distribution<double>(k * (k - 1.0) / 2.0)(rng);
        std::uniform_int_distribution<std::size_t> pick(0, active.size() - 1);
        std::size_t a = pick(rng);
        std::size_t b = pick(rng);
        while (b == a) b = pick(rng);
        if (a > b) std::swap(a, b);

        Clade merged;
        std::merge(active[a].begin(), active[a].end(), active[b].begin(), active[b].end(),
                   std::back_inserter(merged));
        const std::size_t id = merges.size();
        for (std::size_t child : {a, b}) {
            if (active_merge[child] >= 0) merges[static_cast<std::size_t>(active_merge[child])].parent = id;
        }
        merges.push_back({merged, t, id});

        active.erase(active.begin() + static_cast<long>(b));
        active_merge.erase(active_merge.begin() + static_cast<long>(b));
        active[a] = std::move(merged);
        active_merge[a] = static_cast<long>(id);
    }

    const double root_time = t;
    std::map<Clade, double> internal;
    for (const auto& m : merges) {
        if (static_cast<int>(m.clade.size()) == leaf_count) continue;
        internal.emplace(m.clade, (merges[m.parent].born - m.born) / root_time);
    }
    return EquidistantTree(leaf_count, std::move(internal), 1.0);
}

}  // namespace troptree
