#pragma once

// JSON and DOT serialization for vectors, topologies, segments and compat reports.

#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "troptree/compat.hpp"
#include "troptree/segment.hpp"
#include "troptree/topology.hpp"
#include "troptree/torus.hpp"

namespace troptree {

using Json = nlohmann::json;

/// A vector with leaf labels; labels default to "1".."N".
struct LabeledVector {
    PairVector vector;
    std::vector<std::string> labels;
};

Json vector_to_json(const PairVector& w, const std::vector<std::string>& labels = {});
LabeledVector vector_from_json(const Json& j);

Json topology_to_json(const Topology& topology);
Topology topology_from_json(const Json& j);

Json segment_to_json(const TropicalSegment& segment, double tol = kDefaultTol);
/// Rebuilds the segment from its endpoints; throws InvalidArgument when the stored
/// lambdas or bend points disagree with the recomputation.
TropicalSegment segment_from_json(const Json& j, const SegmentOptions& options = {});

Json compat_report_to_json(const CompatReport& report);
CompatReport compat_report_from_json(const Json& j);

/// Reads a Newick tree or a vector JSON object, chosen by the first
/// non-blank character ('{' for JSON, anything else for Newick).
LabeledVector read_vector_text(std::string_view text);

/// Reads `{"leaf_count", "clades"}`.
Topology read_topology_text(std::string_view text);

/// Rooted tree diagram of the topology. With a member vector, internal
/// vertices are annotated with their height (half the pair distance).
std::string topology_to_dot(const Topology& topology, const PairVector* member = nullptr,
                            const std::vector<std::string>& labels = {});

/// One cluster per bending point, each drawn as its tree.
std::string segment_to_dot(const TropicalSegment& segment, double tol = kDefaultTol,
                           const std::vector<std::string>& labels = {});

}  // namespace troptree
