#pragma once

#include <string>
#include <string_view>

#include "troptree/treemetrics.hpp"

namespace troptree {

/// Relative tolerance on root-to-leaf path sums accepted by parse_newick.
inline constexpr double kNewickEquidistanceTol = 1e-6;

/// Parses one Newick tree with mandatory branch lengths.
///
/// Leaves are numbered 1..N in order of appearance. Internal edges of length
/// zero are contracted; a unary root is unwrapped. Throws ParseError (with a
/// byte offset) on syntax errors, on unary internal vertices and duplicate
/// labels, and InvalidArgument when the tree is not equidistant.
EquidistantTree parse_newick(std::string_view text);

/// Writes the tree with six fixed decimals, children ordered by their smallest leaf.
std::string write_newick(const EquidistantTree& tree);

}  // namespace troptree
