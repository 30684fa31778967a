#pragma once

// Tree topologies as nested families of clades, and the closure calculus on pairs.

#include <compare>
#include <cstdint>
#include <cstddef>
#include <random>
#include <utility>
#include <vector>

#include "troptree/torus.hpp"
#include "troptree/treemetrics.hpp"

namespace troptree {

/// Unordered pair of distinct leaves, 1-based.
using LeafPair = std::pair<int, int>;

bool is_subset(const Clade& inner, const Clade& outer);
bool is_disjoint(const Clade& a, const Clade& b);

/// A nested set of clades on [N]: any two clades are nested or disjoint, and
/// each clade has between 2 and N-1 leaves. Stored canonically (each clade
/// sorted, clades sorted lexicographically) so equality is structural.
class Topology {
public:
    Topology() = default;
    explicit Topology(int leaf_count, std::vector<Clade> clades = {});

    int leaf_count() const noexcept { return leaf_count_; }
    const std::vector<Clade>& clades() const noexcept { return clades_; }
    std::size_t size() const noexcept { return clades_.size(); }
    bool contains(const Clade& clade) const;

    /// The full leaf set [N].
    Clade ground_set() const;

    friend bool operator==(const Topology&, const Topology&) = default;
    friend auto operator<=>(const Topology&, const Topology&) = default;

private:
    int leaf_count_ = 0;
    std::vector<Clade> clades_;
};

enum class PairRelation { Equal, Less, Greater, Incomparable };

const char* to_string(PairRelation relation) noexcept;

/// Closures of every pair in a topology, precomputed.
///
/// Nodes 0..size-1 are the clades of the topology in canonical order; node
/// `root()` stands for [N]. Every node is the closure of at least one pair.
class ClosureTable {
public:
    explicit ClosureTable(const Topology& topology);

    int node_count() const noexcept { return static_cast<int>(nodes_.size()); }
    int root() const noexcept { return node_count() - 1; }
    const Clade& node_set(int node) const { return nodes_[static_cast<std::size_t>(node)]; }
    /// Smallest node strictly containing `node`; -1 for the root.
    int parent(int node) const { return parent_[static_cast<std::size_t>(node)]; }
    /// Closure node of the pair at lexicographic index `pair`.
    int closure(std::size_t pair) const { return closure_[pair]; }
    bool strictly_contains(int outer, int inner) const;

private:
    int leaf_count_;
    std::vector<Clade> nodes_;
    std::vector<int> parent_;
    std::vector<int> closure_;
};

/// Smallest clade containing both leaves of `p`, or [N] if there is none.
Clade closure(const Topology& topology, LeafPair p);

/// Compares pairs through their closures. Pairs sharing a leaf are never Incomparable.
PairRelation compare(const Topology& topology, LeafPair p, LeafPair q);

bool is_full_dimensional(const Topology& topology);

/// Every clade of size >= 3, and [N] itself, splits as either a clade missing
/// exactly one leaf, or two disjoint clades covering it.
bool is_bifurcated(const Topology& topology);

/// Every internal vertex has exactly two children (trivalent once the edge to
/// the root, or to the virtual root leaf, is counted).
bool is_binary(const EquidistantTree& tree);

/// Whether w lies in the open cone of `topology`: equal on pairs with equal
/// closure, strictly smaller (by more than tol) on pairs with smaller closure.
/// Throws NotUltrametric if w fails the three-point condition.
bool ut_membership(const Topology& topology, const PairVector& w, double tol = kDefaultTol);

/// The topology of an ultrametric, read off by single-linkage merging at each
/// distinct coordinate level. Coordinates within tol are treated as one level.
Topology topology_of(const PairVector& w, double tol = kDefaultTol);

Topology topology_of(const EquidistantTree& tree);

inline constexpr int kMaxEnumerationLeaves = 8;

/// All topologies on [N] (or only the full-dimensional ones), sorted canonically.
/// N must lie in [3, 8].
std::vector<Topology> enumerate_topologies(int leaf_count, bool full_dim_only);

/// (2N-3)!!, the number of rooted binary topologies on N leaves.
std::uint64_t binary_topology_count(int leaf_count);

/// A random equidistant tree with the given topology: internal edges are drawn
/// uniformly from (0.1, 1], height leaves every external edge positive.
EquidistantTree random_tree_with_topology(const Topology& topology, std::mt19937_64& rng);

/// Cophenetic vector of random_tree_with_topology, a generic point of ut(topology).
PairVector random_member(const Topology& topology, std::mt19937_64& rng);

}  // namespace troptree
