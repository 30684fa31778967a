#include "troptree/topology.hpp"

#include <algorithm>
#include <bit>
#include <map>
#include <numeric>
#include <set>
#include <string>

#include "troptree/error.hpp"

namespace troptree {

namespace {

void check_pair(int leaf_count, LeafPair p) {
    if (p.first == p.second || p.first < 1 || p.second < 1 || p.first > leaf_count || p.second > leaf_count) {
        throw InvalidArgument("invalid pair {" + std::to_string(p.first) + "," + std::to_string(p.second) + "}");
    }
}

bool contains_leaf(const Clade& clade, int leaf) { return std::binary_search(clade.begin(), clade.end(), leaf); }

// Children of `parent` in the tree drawn by `clades`: maximal proper sub-clades
// plus leaves covered by none of them.
std::size_t child_count(const std::vector<Clade>& by_size_desc, const Clade& parent) {
    std::size_t count = 0;
    std::set<int> covered;
    for (const Clade& c : by_size_desc) {
        if (c.size() >= parent.size() || !is_subset(c, parent) || covered.contains(c.front())) continue;
        covered.insert(c.begin(), c.end());
        ++count;
    }
    return count + (parent.size() - covered.size());
}

using Mask = std::uint32_t;
using MaskFamily = std::vector<Mask>;

// Every partition of `mask` into nonempty blocks, each block listed once.
void partitions(Mask mask, std::vector<Mask>& current, std::vector<std::vector<Mask>>& out, std::size_t max_blocks) {
    if (mask == 0) {
        out.push_back(current);
        return;
    }
    if (current.size() == max_blocks) return;
    const Mask lowest = mask & (~mask + 1);
    const Mask rest = mask & ~lowest;
    // Blocks containing the lowest element: lowest | every subset of rest.
    for (Mask sub = rest;; sub = (sub - 1) & rest) {
        current.push_back(lowest | sub);
        partitions(rest & ~sub, current, out, max_blocks);
        current.pop_back();
        if (sub == 0) break;
    }
}

class ShapeEnumerator {
public:
    explicit ShapeEnumerator(bool binary_only) : binary_only_(binary_only) {}

    // Clade families strictly below `mask` for every tree on that leaf set.
    const std::vector<MaskFamily>& below(Mask mask) {
        if (auto it = memo_.find(mask); it != memo_.end()) return it->second;
        std::vector<MaskFamily> result;
        if (std::popcount(mask) == 1) {
            result.push_back({});
        } else {
            std::vector<std::vector<Mask>> parts;
            std::vector<Mask> scratch;
            partitions(mask, scratch, parts, binary_only_ ? 2 : 64);
            for (const auto& blocks : parts) {
                if (blocks.size() < 2) continue;
                std::vector<MaskFamily> acc{{}};
                for (Mask block : blocks) {
                    const auto& subs = below(block);
                    std::vector<MaskFamily> next;
                    next.reserve(acc.size() * subs.size());
                    for (const auto& a : acc) {
                        for (const auto& s : subs) {
                            MaskFamily f = a;
                            f.insert(f.end(), s.begin(), s.end());
                            if (std::popcount(block) >= 2) f.push_back(block);
                            next.push_back(std::move(f));
                        }
                    }
                    acc = std::move(next);
                }
                for (auto& f : acc) result.push_back(std::move(f));
            }
        }
        return memo_.emplace(mask, std::move(result)).first->second;
    }

private:
    bool binary_only_;
    std::map<Mask, std::vector<MaskFamily>> memo_;
};

Clade mask_to_clade(Mask mask) {
    Clade c;
    for (int leaf = 1; mask != 0; ++leaf, mask >>= 1) {
        if (mask & 1U) c.push_back(leaf);
    }
    return c;
}

}  // namespace

bool is_subset(const Clade& inner, const Clade& outer) {
    return std::includes(outer.begin(), outer.end(), inner.begin(), inner.end());
}

bool is_disjoint(const Clade& a, const Clade& b) {
    auto i = a.begin();
    auto j = b.begin();
    while (i != a.end() && j != b.end()) {
        if (*i == *j) return false;
        if (*i < *j) ++i; else ++j;
    }
    return true;
}

Topology::Topology(int leaf_count, std::vector<Clade> clades) : leaf_count_(leaf_count), clades_(std::move(clades)) {
    if (leaf_count_ < 2) throw InvalidArgument("a topology needs at least 2 leaves");
    for (Clade& c : clades_) {
        std::sort(c.begin(), c.end());
        if (std::adjacent_find(c.begin(), c.end()) != c.end()) throw InvalidArgument("clade repeats a leaf");
        if (c.size() < 2 || static_cast<int>(c.size()) > leaf_count_ - 1) {
            throw InvalidArgument("clade size must lie in [2, N-1]");
        }
        if (c.front() < 1 || c.back() > leaf_count_) throw InvalidArgument("clade leaf out of range");
    }
    std::sort(clades_.begin(), clades_.end());
    if (std::adjacent_find(clades_.begin(), clades_.end()) != clades_.end()) {
        throw InvalidArgument("duplicate clade");
    }
    for (std::size_t a = 0; a < clades_.size(); ++a)
        for (std::size_t b = a + 1; b < clades_.size(); ++b) {
            const Clade& x = clades_[a];
            const Clade& y = clades_[b];
            if (!is_subset(x, y) && !is_subset(y, x) && !is_disjoint(x, y)) {
                throw InvalidArgument("clades are neither nested nor disjoint");
            }
        }
    if (static_cast<int>(clades_.size()) > leaf_count_ - 2) {
        throw InvalidArgument("a topology on N leaves has at most N-2 clades");
    }
}

bool Topology::contains(const Clade& clade) const {
    Clade sorted = clade;
    std::sort(sorted.begin(), sorted.end());
    return std::binary_search(clades_.begin(), clades_.end(), sorted);
}

Clade Topology::ground_set() const {
    Clade all(static_cast<std::size_t>(leaf_count_));
    std::iota(all.begin(), all.end(), 1);
    return all;
}

const char* to_string(PairRelation relation) noexcept {
    switch (relation) {
        case PairRelation::Equal: return "equal";
        case PairRelation::Less: return "less";
        case PairRelation::Greater: return "greater";
        case PairRelation::Incomparable: return "incomparable";
    }
    return "incomparable";
}

ClosureTable::ClosureTable(const Topology& topology) : leaf_count_(topology.leaf_count()) {
    nodes_ = topology.clades();
    nodes_.push_back(topology.ground_set());
    const int count = node_count();

    std::vector<int> by_size(static_cast<std::size_t>(count));
    std::iota(by_size.begin(), by_size.end(), 0);
    std::stable_sort(by_size.begin(), by_size.end(),
                     [&](int a, int b) { return node_set(a).size() < node_set(b).size(); });

    parent_.assign(static_cast<std::size_t>(count), -1);
    for (std::size_t a = 0; a < by_size.size(); ++a) {
        for (std::size_t b = a + 1; b < by_size.size(); ++b) {
            if (node_set(by_size[b]).size() > node_set(by_size[a]).size() &&
                is_subset(node_set(by_size[a]), node_set(by_size[b]))) {
                parent_[static_cast<std::size_t>(by_size[a])] = by_size[b];
                break;
            }
        }
    }

    closure_.assign(pair_count(leaf_count_), -1);
    for (int node : by_size) {
        const Clade& s = node_set(node);
        for (std::size_t a = 0; a < s.size(); ++a)
            for (std::size_t b = a + 1; b < s.size(); ++b) {
                int& slot = closure_[pair_index(leaf_count_, s[a], s[b])];
                if (slot < 0) slot = node;
            }
    }
}

bool ClosureTable::strictly_contains(int outer, int inner) const {
    for (int up = parent(inner); up >= 0; up = parent(up)) {
        if (up == outer) return true;
    }
    return false;
}

Clade closure(const Topology& topology, LeafPair p) {
    check_pair(topology.leaf_count(), p);
    const Clade* best = nullptr;
    for (const Clade& c : topology.clades()) {
        if (contains_leaf(c, p.first) && contains_leaf(c, p.second) && (!best || c.size() < best->size())) best = &c;
    }
    return best ? *best : topology.ground_set();
}

PairRelation compare(const Topology& topology, LeafPair p, LeafPair q) {
    const Clade cp = closure(topology, p);
    const Clade cq = closure(topology, q);
    if (cp == cq) return PairRelation::Equal;
    if (is_subset(cp, cq)) return PairRelation::Less;
    if (is_subset(cq, cp)) return PairRelation::Greater;
    return PairRelation::Incomparable;
}

bool is_full_dimensional(const Topology& topology) {
    return static_cast<int>(topology.size()) == topology.leaf_count() - 2;
}

bool is_bifurcated(const Topology& topology) {
    const auto& clades = topology.clades();
    std::vector<Clade> targets;
    for (const Clade& c : clades) {
        if (c.size() >= 3) targets.push_back(c);
    }
    targets.push_back(topology.ground_set());

    for (const Clade& s : targets) {
        std::vector<const Clade*> proper;
        for (const Clade& c : clades) {
            if (c.size() < s.size() && is_subset(c, s)) proper.push_back(&c);
        }
        const bool drop_one = std::any_of(proper.begin(), proper.end(),
                                          [&](const Clade* c) { return c->size() + 1 == s.size(); });
        bool split_two = false;
        for (std::size_t a = 0; a < proper.size() && !split_two; ++a)
            for (std::size_t b = a + 1; b < proper.size() && !split_two; ++b) {
                split_two = proper[a]->size() + proper[b]->size() == s.size() && is_disjoint(*proper[a], *proper[b]);
            }
        if (drop_one == split_two) return false;
    }
    return true;
}

bool is_binary(const EquidistantTree& tree) {
    std::vector<Clade> clades = tree.clades();
    std::sort(clades.begin(), clades.end(), [](const Clade& a, const Clade& b) { return a.size() > b.size(); });
    Clade all(static_cast<std::size_t>(tree.leaf_count()));
    std::iota(all.begin(), all.end(), 1);
    if (child_count(clades, all) != 2) return false;
    return std::all_of(clades.begin(), clades.end(), [&](const Clade& c) { return child_count(clades, c) == 2; });
}

bool ut_membership(const Topology& topology, const PairVector& w, double tol) {
    if (topology.leaf_count() != w.leaf_count()) throw DimensionMismatch("topology and vector leaf counts differ");
    if (!is_ultrametric(w, tol).ok()) throw NotUltrametric("ut_membership: vector is not an ultrametric");

    const ClosureTable table(topology);
    const auto count = static_cast<std::size_t>(table.node_count());
    std::vector<double> lo(count, 0.0);
    std::vector<double> hi(count, 0.0);
    std::vector<bool> seen(count, false);
    for (std::size_t p = 0; p < w.size(); ++p) {
        const auto node = static_cast<std::size_t>(table.closure(p));
        if (!seen[node]) {
            lo[node] = hi[node] = w[p];
            seen[node] = true;
        } else {
            lo[node] = std::min(lo[node], w[p]);
            hi[node] = std::max(hi[node], w[p]);
        }
    }
    for (int node = 0; node < table.node_count(); ++node) {
        const auto k = static_cast<std::size_t>(node);
        if (hi[k] - lo[k] > tol) return false;
        for (int up = table.parent(node); up >= 0; up = table.parent(up)) {
            if (!(hi[k] < lo[static_cast<std::size_t>(up)] - tol)) return false;
        }
    }
    return true;
}

Topology topology_of(const PairVector& w, double tol) {
    if (!is_ultrametric(w, tol).ok()) throw NotUltrametric("topology_of: vector is not an ultrametric");
    const int n = w.leaf_count();

    std::vector<std::size_t> order(w.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return w[a] < w[b]; });

    // Union-find with explicit member lists; labels are 1-based.
    std::vector<int> root_of(static_cast<std::size_t>(n) + 1);
    std::vector<Clade> members(static_cast<std::size_t>(n) + 1);
    for (int i = 1; i <= n; ++i) {
        root_of[static_cast<std::size_t>(i)] = i;
        members[static_cast<std::size_t>(i)] = {i};
    }

    std::set<Clade> clades;
    std::size_t start = 0;
    while (start < order.size()) {
        std::size_t end = start + 1;
        while (end < order.size() && w[order[end]] - w[order[end - 1]] <= tol) ++end;

        std::set<int> touched;
        for (std::size_t k = start; k < end; ++k) {
            const auto [i, j] = pair_at(n, order[k]);
            int a = root_of[static_cast<std::size_t>(i)];
            int b = root_of[static_cast<std::size_t>(j)];
            if (a == b) {
                touched.insert(a);
                continue;
            }
            if (members[static_cast<std::size_t>(a)].size() < members[static_cast<std::size_t>(b)].size()) std::swap(a, b);
            for (int leaf : members[static_cast<std::size_t>(b)]) root_of[static_cast<std::size_t>(leaf)] = a;
            auto& into = members[static_cast<std::size_t>(a)];
            into.insert(into.end(), members[static_cast<std::size_t>(b)].begin(), members[static_cast<std::size_t>(b)].end());
            members[static_cast<std::size_t>(b)].clear();
            touched.erase(b);
            touched.insert(a);
        }
        for (int r : touched) {
            Clade c = members[static_cast<std::size_t>(r)];
            if (static_cast<int>(c.size()) >= n) continue;
            std::sort(c.begin(), c.end());
            clades.insert(std::move(c));
        }
        start = end;
    }
    return Topology(n, std::vector<Clade>(clades.begin(), clades.end()));
}

Topology topology_of(const EquidistantTree& tree) { return Topology(tree.leaf_count(), tree.clades()); }

std::vector<Topology> enumerate_topologies(int leaf_count, bool full_dim_only) {
    if (leaf_count < 3) throw InvalidArgument("enumerate_topologies needs at least 3 leaves");
    if (leaf_count > kMaxEnumerationLeaves) {
        throw BoundExceeded("enumerate_topologies supports at most " + std::to_string(kMaxEnumerationLeaves) +
                            " leaves");
    }
    ShapeEnumerator shapes(full_dim_only);
    const Mask all = (Mask{1} << leaf_count) - 1;
    std::vector<Topology> out;
    for (const MaskFamily& family : shapes.below(all)) {
        std::vector<Clade> clades;
        clades.reserve(family.size());
        for (Mask m : family) clades.push_back(mask_to_clade(m));
        out.emplace_back(leaf_count, std::move(clades));
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::uint64_t binary_topology_count(int leaf_count) {
    std::uint64_t count = 1;
    for (int k = 2 * leaf_count - 3; k > 1; k -= 2) count *= static_cast<std::uint64_t>(k);
    return count;
}

EquidistantTree random_tree_with_topology(const Topology& topology, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> length(0.1, 1.0);
    std::map<Clade, double> internal;
    std::vector<double> depth(static_cast<std::size_t>(topology.leaf_count()), 0.0);
    for (const Clade& c : topology.clades()) {
        const double l = length(rng);
        internal.emplace(c, l);
        for (int leaf : c) depth[static_cast<std::size_t>(leaf - 1)] += l;
    }
    const double height = *std::max_element(depth.begin(), depth.end()) + length(rng);
    return EquidistantTree(topology.leaf_count(), std::move(internal), height);
}

PairVector random_member(const Topology& topology, std::mt19937_64& rng) {
    return tree_to_vector(random_tree_with_topology(topology, rng));
}

}  // namespace troptree
