#pragma once

// Tree metrics, ultrametrics and equidistant trees.

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "troptree/torus.hpp"

namespace troptree {

/// A set of leaves, 1-based, sorted ascending without repeats.
using Clade = std::vector<int>;

/// "1".."N".
std::vector<std::string> default_labels(int leaf_count);

/// Rooted tree with all leaves at distance `height` from the root.
///
/// The root is implicit: clades never contain it, and internal edges are keyed
/// by the clade of leaves below them. External edge lengths are derived from
/// the height so that every root-to-leaf path sums to exactly `height`.
class EquidistantTree {
public:
    /// Labels default to "1".."N" when `labels` is empty.
    EquidistantTree(int leaf_count, std::map<Clade, double> internal_edges, double height,
                    std::vector<std::string> labels = {});

    /// Tree without internal edges.
    static EquidistantTree star(int leaf_count, double height, std::vector<std::string> labels = {});

    int leaf_count() const noexcept { return leaf_count_; }
    const std::vector<std::string>& labels() const noexcept { return labels_; }
    const std::map<Clade, double>& internal_edges() const noexcept { return internal_edges_; }
    const std::vector<double>& external_edges() const noexcept { return external_edges_; }
    double height() const noexcept { return height_; }

    /// Clade keys of the internal edges.
    std::vector<Clade> clades() const;

private:
    int leaf_count_;
    std::map<Clade, double> internal_edges_;
    double height_;
    std::vector<std::string> labels_;
    std::vector<double> external_edges_;
};

struct ValidationReport {
    enum class Kind { TreeMetric, Ultrametric, Neither };

    Kind kind = Kind::Neither;
    /// Violating triple or quadruple (1-based, ascending); empty when the check passed.
    std::vector<int> witness;

    bool ok() const noexcept { return kind != Kind::Neither; }
};

const char* to_string(ValidationReport::Kind kind) noexcept;

/// Four-point condition: for every quadruple the largest of
/// w_ij + w_kl, w_ik + w_jl, w_il + w_jk is attained at least twice.
ValidationReport is_tree_metric(const PairVector& w, double tol = kDefaultTol);

/// Three-point condition: in every triple the largest distance is attained at least twice.
ValidationReport is_ultrametric(const PairVector& w, double tol = kDefaultTol);

/// Cophenetic vector: w_ij = 2h - 2 * (sum of internal edges above both i and j).
PairVector tree_to_vector(const EquidistantTree& tree);

/// Rebuilds the equidistant tree of an ultrametric.
///
/// Without `height` the tree height is max_p(w_p)/2, raised when needed so that
/// no external edge is negative. An explicit height is honoured exactly and
/// rejected when it would make an external edge negative.
EquidistantTree vector_to_tree(const PairVector& w, std::optional<double> height = std::nullopt,
                               double tol = kDefaultTol, std::vector<std::string> labels = {});

/// Kingman coalescent on `leaf_count` leaves, rescaled to height 1. Deterministic in `seed`.
EquidistantTree random_coalescent_tree(int leaf_count, std::uint64_t seed);

}  // namespace troptree
