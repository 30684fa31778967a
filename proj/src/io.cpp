#include "troptree/io.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "troptree/error.hpp"
#include "troptree/newick.hpp"

namespace troptree {

namespace {

// Field-level problems in otherwise well-formed JSON are invalid input, not syntax errors.
template <typename F>
auto guarded(F&& f) -> decltype(f()) {
    try {
        return f();
    } catch (const Json::parse_error& e) {
        throw ParseError(e.what(), e.byte);
    } catch (const Json::exception& e) {
        throw InvalidArgument(std::string("malformed JSON document: ") + e.what());
    }
}

Json parse_json(std::string_view text) {
    return guarded([&] { return Json::parse(text.begin(), text.end()); });
}

bool close(double a, double b, double tol) { return std::abs(a - b) <= tol * std::max(1.0, std::abs(a)); }

std::string quote(const std::string& s) {
    std::string out = "\"";
    for (char c : s) {
        if (c == '"' || c == '\\') out += '\\';
        out += c;
    }
    return out + '"';
}

std::string format_height(double h) {
    std::ostringstream out;
    out << h;
    return out.str();
}

// Emits vertices and edges of one tree; ids are prefixed so several trees can share a graph.
void emit_tree(std::ostringstream& out, const std::string& prefix, const Topology& topology, const PairVector* member,
               const std::vector<std::string>& labels, const std::string& indent) {
    const ClosureTable table(topology);
    const int n = topology.leaf_count();
    std::vector<double> heights(static_cast<std::size_t>(table.node_count()), std::nan(""));
    if (member != nullptr) {
        for (std::size_t p = 0; p < pair_count(n); ++p) {
            heights[static_cast<std::size_t>(table.closure(p))] = (*member)[p] / 2.0;
        }
    }
    auto node_id = [&](int node) { return prefix + (node == table.root() ? "root" : "c" + std::to_string(node)); };

    for (int node = 0; node < table.node_count(); ++node) {
        std::string label;
        const double h = heights[static_cast<std::size_t>(node)];
        if (!std::isnan(h)) label = "h=" + format_height(h);
        out << indent << node_id(node) << " [shape=point, xlabel=" << quote(label) << "];\n";
        if (table.parent(node) >= 0) out << indent << node_id(table.parent(node)) << " -> " << node_id(node) << ";\n";
    }
    for (int leaf = 1; leaf <= n; ++leaf) {
        // Attach to the smallest node containing the leaf.
        int owner = table.root();
        for (int node = 0; node < table.root(); ++node) {
            const Clade& set = table.node_set(node);
            if (std::binary_search(set.begin(), set.end(), leaf) &&
                set.size() < table.node_set(owner).size()) {
                owner = node;
            }
        }
        const std::string leaf_id = prefix + "l" + std::to_string(leaf);
        out << indent << leaf_id << " [shape=plaintext, label=" << quote(labels[static_cast<std::size_t>(leaf - 1)])
            << "];\n";
        out << indent << node_id(owner) << " -> " << leaf_id << ";\n";
    }
}

}  // namespace

Json vector_to_json(const PairVector& w, const std::vector<std::string>& labels) {
    return Json{{"leaf_count", w.leaf_count()},
                {"labels", labels.empty() ? default_labels(w.leaf_count()) : labels},
                {"coords", std::vector<double>(w.coords().begin(), w.coords().end())}};
}

LabeledVector vector_from_json(const Json& j) {
    return guarded([&] {
        const int n = j.at("leaf_count").get<int>();
        auto coords = j.at("coords").get<std::vector<double>>();
        std::vector<std::string> labels =
            j.contains("labels") ? j.at("labels").get<std::vector<std::string>>() : default_labels(n);
        if (static_cast<int>(labels.size()) != n) {
            throw InvalidArgument("expected " + std::to_string(n) + " labels, got " + std::to_string(labels.size()));
        }
        return LabeledVector{PairVector(n, std::move(coords)), std::move(labels)};
    });
}

Json topology_to_json(const Topology& topology) {
    return Json{{"leaf_count", topology.leaf_count()}, {"clades", topology.clades()}};
}

Topology topology_from_json(const Json& j) {
    return guarded([&] {
        return Topology(j.at("leaf_count").get<int>(), j.at("clades").get<std::vector<Clade>>());
    });
}

Json segment_to_json(const TropicalSegment& segment, double tol) {
    Json bends = Json::array();
    for (const PairVector& y : segment.bend_points()) bends.push_back(std::vector<double>(y.coords().begin(), y.coords().end()));

    Json pieces = Json::array();
    for (const SegmentPiece& piece : segment_topologies(segment, tol)) {
        pieces.push_back(Json{{"lambda_lo", piece.lambda_lo},
                              {"lambda_hi", piece.lambda_hi},
                              {"bend_point", piece.is_bend_point},
                              {"clades", piece.topology.clades()},
                              {"constant", piece.constant}});
    }
    return Json{{"leaf_count", segment.from().leaf_count()},
                {"from", vector_to_json(segment.from())},
                {"to", vector_to_json(segment.to())},
                {"normalized", segment.options().normalize},
                {"target_diameter", segment.options().target_diameter},
                {"lambdas", segment.lambdas()},
                {"bend_points", std::move(bends)},
                {"topologies", std::move(pieces)}};
}

TropicalSegment segment_from_json(const Json& j, const SegmentOptions& options) {
    return guarded([&] {
        SegmentOptions opts = options;
        opts.normalize = j.value("normalized", options.normalize);
        opts.target_diameter = j.value("target_diameter", options.target_diameter);
        TropicalSegment segment =
            tropical_segment(vector_from_json(j.at("from")).vector, vector_from_json(j.at("to")).vector, opts);

        if (j.contains("lambdas")) {
            const auto lambdas = j.at("lambdas").get<std::vector<double>>();
            bool same = lambdas.size() == segment.lambdas().size();
            for (std::size_t k = 0; same && k < lambdas.size(); ++k) same = close(lambdas[k], segment.lambdas()[k], 1e-9);
            if (!same) throw InvalidArgument("stored lambdas disagree with the endpoints");
        }
        if (j.contains("bend_points")) {
            const auto bends = j.at("bend_points").get<std::vector<std::vector<double>>>();
            bool same = bends.size() == segment.bend_count();
            for (std::size_t k = 0; same && k < bends.size(); ++k) {
                const PairVector y = segment.bend_point(k);
                same = bends[k].size() == y.size();
                for (std::size_t p = 0; same && p < y.size(); ++p) same = close(bends[k][p], y[p], 1e-9);
            }
            if (!same) throw InvalidArgument("stored bend points disagree with the endpoints");
        }
        return segment;
    });
}

Json compat_report_to_json(const CompatReport& report) {
    Json j{{"candidate", topology_to_json(report.candidate)},
           {"passes_necessary", report.passes_necessary},
           {"decided", report.decided},
           {"member", report.member},
           {"witness", nullptr}};
    if (report.witness) {
        j["witness"] = Json{{"w1", vector_to_json(report.witness->w1)}, {"w2", vector_to_json(report.witness->w2)}};
    }
    return j;
}

CompatReport compat_report_from_json(const Json& j) {
    return guarded([&] {
        CompatReport report;
        report.candidate = topology_from_json(j.at("candidate"));
        report.passes_necessary = j.at("passes_necessary").get<bool>();
        report.decided = j.at("decided").get<bool>();
        report.member = j.at("member").get<bool>();
        const Json& w = j.at("witness");
        if (!w.is_null()) report.witness = CompatWitness{vector_from_json(w.at("w1")).vector, vector_from_json(w.at("w2")).vector};
        return report;
    });
}

LabeledVector read_vector_text(std::string_view text) {
    const auto first = text.find_first_not_of(" \t\r\n");
    if (first != std::string_view::npos && text[first] == '{') return vector_from_json(parse_json(text));
    EquidistantTree tree = parse_newick(text);
    return LabeledVector{tree_to_vector(tree), tree.labels()};
}

Topology read_topology_text(std::string_view text) { return topology_from_json(parse_json(text)); }

std::string topology_to_dot(const Topology& topology, const PairVector* member, const std::vector<std::string>& labels) {
    if (member != nullptr && member->leaf_count() != topology.leaf_count()) {
        throw DimensionMismatch("member vector and topology on different leaf sets");
    }
    std::ostringstream out;
    out << "digraph topology {\n";
    emit_tree(out, "", topology, member, labels.empty() ? default_labels(topology.leaf_count()) : labels, "  ");
    out << "}\n";
    return out.str();
}

std::string segment_to_dot(const TropicalSegment& segment, double tol, const std::vector<std::string>& labels) {
    const auto& names = labels.empty() ? default_labels(segment.from().leaf_count()) : labels;
    std::ostringstream out;
    out << "digraph segment {\n";
    for (std::size_t k = 0; k < segment.bend_count(); ++k) {
        const PairVector y = segment.bend_point(k);
        const std::string prefix = "b" + std::to_string(k) + "_";
        out << "  subgraph cluster_" << k << " {\n";
        out << "    label=" << quote("lambda=" + format_height(segment.lambdas()[k])) << ";\n";
        emit_tree(out, prefix, topology_of(y, tol), &y, names, "    ");
        out << "  }\n";
    }
    out << "}\n";
    return out.str();
}

}  // namespace troptree
