#include "cli/commands.hpp"

#include <algorithm>
#include <fstream>
#include <iostream>
#include <iterator>
#include <map>
#include <random>
#include <sstream>

#include <CLI11.hpp>

#include "cli/repro.hpp"
#include "troptree/compat.hpp"
#include "troptree/error.hpp"
#include "troptree/io.hpp"
#include "troptree/newick.hpp"
#include "troptree/segment.hpp"
#include "troptree/topology.hpp"

namespace troptree::cli {

namespace {

class IoError : public Error {
public:
    using Error::Error;
};

std::string read_file(const std::string& path) {
    if (path == "-") return {std::istreambuf_iterator<char>(std::cin), std::istreambuf_iterator<char>()};
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

LabeledVector load_vector(const std::string& path) {
    try {
        return read_vector_text(read_file(path));
    } catch (const ParseError& e) {
        throw ParseError(path + ": " + e.what(), e.offset());
    }
}

Topology load_topology(const std::string& path) { return read_topology_text(read_file(path)); }

// Renumbers `v` so its leaves follow the label order of `reference`.
LabeledVector align_labels(const LabeledVector& v, const std::vector<std::string>& reference) {
    if (v.labels == reference) return v;
    std::map<std::string, int> position;
    for (std::size_t i = 0; i < v.labels.size(); ++i) position[v.labels[i]] = static_cast<int>(i) + 1;
    std::vector<int> mapping;
    for (const auto& label : reference) {
        const auto it = position.find(label);
        if (it == position.end()) throw InvalidArgument("leaf label '" + label + "' missing from the second input");
        mapping.push_back(it->second);
    }
    return {apply_permutation(v.vector, LeafPermutation(mapping)), reference};
}

std::pair<LabeledVector, LabeledVector> load_pair(const std::string& a, const std::string& b) {
    LabeledVector first = load_vector(a);
    LabeledVector second = load_vector(b);
    if (first.vector.leaf_count() != second.vector.leaf_count()) {
        throw DimensionMismatch("inputs have " + std::to_string(first.vector.leaf_count()) + " and " +
                                std::to_string(second.vector.leaf_count()) + " leaves");
    }
    second = align_labels(second, first.labels);
    return {std::move(first), std::move(second)};
}

std::string clades_text(const Topology& t) {
    std::ostringstream out;
    out << '{';
    for (std::size_t k = 0; k < t.clades().size(); ++k) {
        out << (k ? "," : "") << '{';
        for (std::size_t i = 0; i < t.clades()[k].size(); ++i) out << (i ? "," : "") << t.clades()[k][i];
        out << '}';
    }
    return out.str() + '}';
}

std::string vector_text(const PairVector& w) {
    std::ostringstream out;
    out << '(';
    for (std::size_t p = 0; p < w.size(); ++p) out << (p ? "," : "") << w[p];
    return out.str() + ')';
}

void print_json(std::ostream& out, const Json& j) { out << j.dump(2) << '\n'; }

void reject_dot(const RunConfig& config, const char* command) {
    if (config.output_format == OutputFormat::Dot) throw InvalidArgument(std::string(command) + " has no DOT output");
}

int cmd_validate(const std::string& path, const RunConfig& config, std::ostream& out) {
    reject_dot(config, "validate");
    const LabeledVector input = load_vector(path);
    const auto report = is_ultrametric(input.vector, config.tolerance);
    const bool four_point = is_tree_metric(input.vector, config.tolerance).ok();
    if (config.output_format == OutputFormat::Json) {
        print_json(out, Json{{"kind", to_string(report.kind)}, {"witness", report.witness}, {"tree_metric", four_point}});
    } else {
        out << to_string(report.kind);
        if (!report.witness.empty()) {
            out << " witness";
            for (int leaf : report.witness) out << ' ' << leaf;
        }
        out << '\n';
    }
    return report.ok() ? kExitOk : kExitNegative;
}

// Bend points plus interior samples of every interval must stay ultrametric.
bool verify_segment(const TropicalSegment& segment, double tol, std::ostream& err) {
    const auto& lambdas = segment.lambdas();
    bool ok = true;
    for (std::size_t k = 0; k < lambdas.size(); ++k) {
        std::vector<double> samples{lambdas[k]};
        if (k + 1 < lambdas.size()) {
            for (int s = 1; s <= 5; ++s) samples.push_back(lambdas[k] + (lambdas[k + 1] - lambdas[k]) * s / 6.0);
        }
        for (double lambda : samples) {
            if (!is_ultrametric(point_at(segment, lambda), tol).ok()) {
                err << "verify: point at lambda=" << lambda << " is not an ultrametric\n";
                ok = false;
            }
        }
    }
    return ok;
}

int cmd_segment(const std::string& from_path, const std::string& to_path, bool verify, const RunConfig& config,
                std::ostream& out, std::ostream& err) {
    const auto [from, to] = load_pair(from_path, to_path);
    SegmentOptions options;
    options.normalize = config.normalize;
    options.tol = config.tolerance;
    const TropicalSegment segment = tropical_segment(from.vector, to.vector, options);

    switch (config.output_format) {
        case OutputFormat::Json: {
            Json j = segment_to_json(segment, config.tolerance);
            j["from"]["labels"] = from.labels;
            j["to"]["labels"] = from.labels;
            print_json(out, j);
            break;
        }
        case OutputFormat::Dot:
            out << segment_to_dot(segment, config.tolerance, from.labels);
            break;
        case OutputFormat::Text:
            for (const SegmentPiece& piece : segment_topologies(segment, config.tolerance)) {
                if (piece.is_bend_point) {
                    const auto k = static_cast<std::size_t>(
                        std::find(segment.lambdas().begin(), segment.lambdas().end(), piece.lambda_lo) -
                        segment.lambdas().begin());
                    out << "lambda=" << piece.lambda_lo << "  " << vector_text(segment.bend_point(k)) << "  "
                        << clades_text(piece.topology) << '\n';
                } else {
                    out << "  (" << piece.lambda_lo << ", " << piece.lambda_hi << ")  " << clades_text(piece.topology)
                        << (piece.constant ? "" : "  [not constant]") << '\n';
                }
            }
            break;
    }
    if (verify && !verify_segment(segment, config.tolerance, err)) return kExitNegative;
    return kExitOk;
}

int cmd_topologies(const std::vector<std::string>& paths, const RunConfig& config, std::ostream& out) {
    if (paths.size() == 2) {
        const auto [from, to] = load_pair(paths[0], paths[1]);
        SegmentOptions options;
        options.normalize = config.normalize;
        options.tol = config.tolerance;
        const TropicalSegment segment = tropical_segment(from.vector, to.vector, options);
        if (config.output_format == OutputFormat::Dot) {
            out << segment_to_dot(segment, config.tolerance, from.labels);
        } else if (config.output_format == OutputFormat::Json) {
            print_json(out, segment_to_json(segment, config.tolerance)["topologies"]);
        } else {
            for (const SegmentPiece& piece : segment_topologies(segment, config.tolerance)) {
                out << (piece.is_bend_point ? "bend " : "open ") << piece.lambda_lo << ' ' << piece.lambda_hi << ' '
                    << clades_text(piece.topology) << '\n';
            }
        }
        return kExitOk;
    }

    const LabeledVector input = load_vector(paths.at(0));
    const Topology topology = topology_of(input.vector, config.tolerance);
    switch (config.output_format) {
        case OutputFormat::Json: {
            Json j = topology_to_json(topology);
            j["full_dimensional"] = is_full_dimensional(topology);
            j["bifurcated"] = is_bifurcated(topology);
            print_json(out, j);
            break;
        }
        case OutputFormat::Dot:
            out << topology_to_dot(topology, &input.vector, input.labels);
            break;
        case OutputFormat::Text:
            out << clades_text(topology) << (is_full_dimensional(topology) ? "  full-dimensional" : "") << '\n';
            break;
    }
    return kExitOk;
}

void print_report(const CompatReport& report, const RunConfig& config, std::ostream& out) {
    if (config.output_format == OutputFormat::Json) {
        print_json(out, compat_report_to_json(report));
        return;
    }
    const char* verdict = !report.decided ? "undecided" : report.member ? "member" : "non-member";
    out << verdict << "  necessary=" << (report.passes_necessary ? "yes" : "no") << "  "
        << clades_text(report.candidate) << '\n';
}

int cmd_compatible(const std::string& f1_path, const std::string& f2_path, const std::string& candidate_path,
                   bool necessary_only, bool all_topologies, const RunConfig& config, std::ostream& out) {
    reject_dot(config, "compatible");
    const Topology f1 = load_topology(f1_path);
    const Topology f2 = load_topology(f2_path);

    if (!candidate_path.empty()) {
        const Topology f = load_topology(candidate_path);
        CompatReport report;
        if (necessary_only) {
            report.candidate = f;
            report.passes_necessary = necessary_condition(f1, f2, f);
            // A failed filter is a sound negative only for full-dimensional triples.
            report.decided = !report.passes_necessary && is_full_dimensional(f1) && is_full_dimensional(f2) &&
                             is_full_dimensional(f);
        } else {
            report = decide_membership(f1, f2, f);
        }
        print_report(report, config, out);
        const bool positive = necessary_only ? report.passes_necessary : report.member;
        return positive ? kExitOk : kExitNegative;
    }

    std::vector<CompatReport> reports;
    if (necessary_only) {
        if (f1.leaf_count() > kMaxCompatibilitySetLeaves) {
            throw BoundExceeded("candidate enumeration is bounded to " + std::to_string(kMaxCompatibilitySetLeaves) +
                                " leaves");
        }
        for (const Topology& f : enumerate_topologies(f1.leaf_count(), !all_topologies)) {
            CompatReport report;
            report.candidate = f;
            report.passes_necessary = necessary_condition(f1, f2, f);
            report.decided = !report.passes_necessary && is_full_dimensional(f1) && is_full_dimensional(f2) &&
                             is_full_dimensional(f);
            reports.push_back(std::move(report));
        }
    } else {
        reports = compatibility_set(f1, f2, !all_topologies);
    }

    if (config.output_format == OutputFormat::Json) {
        Json list = Json::array();
        std::size_t members = 0;
        for (const auto& report : reports) {
            list.push_back(compat_report_to_json(report));
            if (report.member) ++members;
        }
        print_json(out, Json{{"leaf_count", f1.leaf_count()}, {"member_count", members}, {"reports", list}});
    } else {
        for (const auto& report : reports) print_report(report, config, out);
    }
    return kExitOk;
}

int cmd_distance(const std::string& a, const std::string& b, const RunConfig& config, std::ostream& out) {
    reject_dot(config, "distance");
    const auto [u, v] = load_pair(a, b);
    const double d = trop_distance(u.vector, v.vector);
    if (config.output_format == OutputFormat::Json) {
        print_json(out, Json{{"distance", d}});
    } else {
        out << d << '\n';
    }
    return kExitOk;
}

LeafPermutation parse_permutation(const std::string& text) {
    std::vector<int> mapping;
    std::stringstream in(text);
    std::string item;
    while (std::getline(in, item, ',')) {
        try {
            std::size_t used = 0;
            mapping.push_back(std::stoi(item, &used));
            if (used != item.size()) throw std::invalid_argument(item);
        } catch (const std::logic_error&) {
            throw InvalidArgument("bad permutation entry '" + item + "'");
        }
    }
    return LeafPermutation(std::move(mapping));
}

int cmd_permute(const std::string& path, const std::string& sigma_text, const RunConfig& config, std::ostream& out) {
    reject_dot(config, "permute");
    const LabeledVector input = load_vector(path);
    const LeafPermutation sigma = parse_permutation(sigma_text);
    if (sigma.size() != input.vector.leaf_count()) {
        throw DimensionMismatch("permutation of " + std::to_string(sigma.size()) + " leaves applied to " +
                                std::to_string(input.vector.leaf_count()));
    }
    PairVector w = apply_permutation(input.vector, sigma);
    if (config.normalize) w = rescale_to_height(w);
    if (config.output_format == OutputFormat::Json) {
        print_json(out, vector_to_json(w, input.labels));
    } else {
        out << vector_text(w) << '\n';
    }
    return kExitOk;
}

int cmd_random(int leaf_count, const RunConfig& config, std::ostream& out) {
    reject_dot(config, "random");
    const std::uint64_t seed = config.seed ? *config.seed : std::random_device{}();
    const EquidistantTree tree = random_coalescent_tree(leaf_count, seed);
    if (config.output_format == OutputFormat::Json) {
        PairVector w = tree_to_vector(tree);
        if (config.normalize) w = rescale_to_height(w);
        Json j = vector_to_json(w, tree.labels());
        j["seed"] = seed;
        print_json(out, j);
    } else {
        out << write_newick(tree) << '\n';
    }
    return kExitOk;
}

int cmd_enumerate(int leaf_count, bool all_topologies, const RunConfig& config, std::ostream& out) {
    reject_dot(config, "enumerate");
    const auto topologies = enumerate_topologies(leaf_count, !all_topologies);
    if (config.output_format == OutputFormat::Json) {
        Json list = Json::array();
        for (const auto& t : topologies) list.push_back(t.clades());
        print_json(out, Json{{"leaf_count", leaf_count},
                             {"full_dim_only", !all_topologies},
                             {"count", topologies.size()},
                             {"topologies", list}});
    } else {
        out << topologies.size() << '\n';
        for (const auto& t : topologies) out << clades_text(t) << '\n';
    }
    return kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Tropical line segments between equidistant trees", "troptree"};
    app.require_subcommand(1);
    app.fallthrough();

    RunConfig config;
    std::string format = "json";
    std::uint64_t seed = 0;
    app.add_option("--tol", config.tolerance, "Tolerance for metric conditions and lambda merging")
        ->check(CLI::PositiveNumber);
    app.add_flag("--normalize", config.normalize, "Shift points so the largest coordinate is 2");
    app.add_option("--format", format, "Output format")->check(CLI::IsMember({"json", "text", "dot"}));
    auto* seed_option = app.add_option("--seed", seed, "Random seed");

    std::string path_a;
    std::string path_b;
    std::string candidate;
    std::string sigma;
    std::vector<std::string> paths;
    int leaf_count = 0;
    bool verify = false;
    bool necessary_only = false;
    bool all_topologies = false;

    auto* validate = app.add_subcommand("validate", "Check the three- and four-point conditions");
    validate->add_option("input", path_a, "Newick or vector JSON")->required();

    auto* segment = app.add_subcommand("segment", "Tropical segment between two ultrametrics");
    segment->add_option("from", path_a)->required();
    segment->add_option("to", path_b)->required();
    segment->add_flag("--verify", verify, "Re-check that every reported point is an ultrametric");

    auto* topologies = app.add_subcommand("topologies", "Topology of a vector, or of every piece of a segment");
    topologies->add_option("inputs", paths, "One vector, or the two endpoints of a segment")->required()->expected(1, 2);

    auto* compatible = app.add_subcommand("compatible", "Topologies compatible with two topology cones");
    compatible->add_option("f1", path_a, "Topology JSON")->required();
    compatible->add_option("f2", path_b, "Topology JSON")->required();
    compatible->add_option("--candidate", candidate, "Decide a single candidate topology");
    compatible->add_flag("--necessary-only", necessary_only, "Only evaluate the necessary condition");
    compatible->add_flag("--all", all_topologies, "Include topologies that are not full dimensional");

    auto* distance = app.add_subcommand("distance", "Tropical distance between two vectors");
    distance->add_option("a", path_a)->required();
    distance->add_option("b", path_b)->required();

    auto* permute = app.add_subcommand("permute", "Relabel leaves: w'_ij = w_(sigma i, sigma j)");
    permute->add_option("input", path_a)->required();
    permute->add_option("sigma", sigma, "Comma separated images of 1..N")->required();

    auto* random = app.add_subcommand("random", "Random coalescent tree of height 1");
    random->add_option("leaves", leaf_count)->required()->check(CLI::Range(2, 100000));

    auto* enumerate = app.add_subcommand("enumerate", "Enumerate topologies on N leaves");
    enumerate->add_option("leaves", leaf_count)->required();
    enumerate->add_flag("--all", all_topologies, "Include topologies that are not full dimensional");

    auto* repro = app.add_subcommand("repro", "Recompute the worked examples");

    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << '\n';
        return kExitInputError;
    }

    config.output_format = format == "text" ? OutputFormat::Text : format == "dot" ? OutputFormat::Dot : OutputFormat::Json;
    if (seed_option->count() > 0) config.seed = seed;

    try {
        if (validate->parsed()) return cmd_validate(path_a, config, out);
        if (segment->parsed()) return cmd_segment(path_a, path_b, verify, config, out, err);
        if (topologies->parsed()) return cmd_topologies(paths, config, out);
        if (compatible->parsed()) {
            return cmd_compatible(path_a, path_b, candidate, necessary_only, all_topologies, config, out);
        }
        if (distance->parsed()) return cmd_distance(path_a, path_b, config, out);
        if (permute->parsed()) return cmd_permute(path_a, sigma, config, out);
        if (random->parsed()) return cmd_random(leaf_count, config, out);
        if (enumerate->parsed()) return cmd_enumerate(leaf_count, all_topologies, config, out);
        if (repro->parsed()) {
            const auto cases = run_repro();
            print_repro_table(cases, out);
            return std::all_of(cases.begin(), cases.end(), [](const ReproCase& c) { return c.passed; }) ? kExitOk
                                                                                                        : kExitNegative;
        }
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return kExitInputError;
    }
    return kExitInputError;
}

}  // namespace troptree::cli
