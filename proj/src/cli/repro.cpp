#include "cli/repro.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <iomanip>
#include <sstream>

#include "troptree/compat.hpp"
#include "troptree/newick.hpp"
#include "troptree/segment.hpp"
#include "troptree/topology.hpp"

namespace troptree::cli {

namespace {

constexpr double kTol = 1e-9;

bool near(const PairVector& w, const std::vector<double>& expected) {
    if (w.size() != expected.size()) return false;
    for (std::size_t p = 0; p < w.size(); ++p) {
        if (std::abs(w[p] - expected[p]) > kTol) return false;
    }
    return true;
}

std::string show(const PairVector& w) {
    std::ostringstream out;
    out << '(';
    for (std::size_t p = 0; p < w.size(); ++p) out << (p ? "," : "") << w[p];
    return out.str() + ')';
}

const PairVector kW1(4, {0.4, 0.8, 2, 0.8, 2, 2});
const PairVector kW2(4, {2, 2, 2, 0.8, 0.8, 0.4});

TropicalSegment normalized_segment() {
    SegmentOptions options;
    options.normalize = true;
    return tropical_segment(kW1, kW2, options);
}

ReproCase check(std::string name, const std::function<std::string()>& body) {
    ReproCase c{std::move(name), false, {}};
    try {
        c.detail = body();
        c.passed = c.detail.empty();
        if (c.passed) c.detail = "ok";
    } catch (const std::exception& e) {
        c.detail = std::string("threw: ") + e.what();
    }
    return c;
}

}  // namespace

std::vector<ReproCase> run_repro() {
    std::vector<ReproCase> cases;

    cases.push_back(check("newick/five-leaf-tree", [] {
        const auto tree = parse_newick("((A:8,B:8):12,(C:10,(D:5,E:5):5):10);");
        const PairVector w = tree_to_vector(tree);
        if (!near(w, {16, 40, 40, 40, 40, 40, 40, 20, 20, 10})) return "vector " + show(w);
        if (!is_ultrametric(w).ok()) return std::string("not ultrametric");
        return std::string();
    }));

    cases.push_back(check("segment/lambdas", [] {
        const auto segment = normalized_segment();
        const std::vector<double> expected{-1.6, -1.2, 0, 1.2, 1.6};
        if (segment.lambdas().size() != expected.size()) return std::string("wrong bend count");
        for (std::size_t k = 0; k < expected.size(); ++k) {
            if (std::abs(segment.lambdas()[k] - expected[k]) > kTol) return "lambda " + std::to_string(k);
        }
        return std::string();
    }));

    cases.push_back(check("segment/bend-points", [] {
        const auto segment = normalized_segment();
        const std::vector<std::vector<double>> expected{{2, 2, 2, 0.8, 0.8, 0.4},
                                                        {2, 2, 2, 0.8, 0.8, 0.8},
                                                        {2, 2, 2, 0.8, 2, 2},
                                                        {0.8, 0.8, 2, 0.8, 2, 2},
                                                        {0.4, 0.8, 2, 0.8, 2, 2}};
        for (std::size_t k = 0; k < expected.size(); ++k) {
            if (!near(segment.bend_point(k), expected[k])) return "y" + std::to_string(k + 1) + " = " + show(segment.bend_point(k));
        }
        return std::string();
    }));

    cases.push_back(check("segment/bend-point-topologies", [] {
        const auto segment = normalized_segment();
        const std::vector<Topology> expected{Topology(4, {{3, 4}, {2, 3, 4}}), Topology(4, {{2, 3, 4}}),
                                             Topology(4, {{2, 3}}), Topology(4, {{1, 2, 3}}),
                                             Topology(4, {{1, 2}, {1, 2, 3}})};
        for (std::size_t k = 0; k < expected.size(); ++k) {
            if (topology_of(segment.bend_point(k)) != expected[k]) return "topology of y" + std::to_string(k + 1);
        }
        return std::string();
    }));

    cases.push_back(check("segment/avoids-origin", [] {
        return contains_origin(normalized_segment()) ? std::string("segment meets the origin") : std::string();
    }));

    cases.push_back(check("permute/cyclic", [] {
        const PairVector relabeled(4, {0.8, 0.8, 2, 0.4, 2, 2});
        const PairVector w = apply_permutation(relabeled, LeafPermutation({2, 3, 1, 4}));
        return torus_eq(w, kW1) ? std::string() : "got " + show(w);
    }));

    cases.push_back(check("permute/reversal", [] {
        const PairVector w = apply_permutation(kW1, LeafPermutation({4, 3, 2, 1}));
        return near(w, {2, 2, 2, 0.8, 0.8, 0.4}) ? std::string() : "got " + show(w);
    }));

    cases.push_back(check("segment/equivariance-reversal", [] {
        return check_equivariance(kW1, kW2, LeafPermutation({4, 3, 2, 1})) ? std::string()
                                                                              : std::string("bend points differ");
    }));

    cases.push_back(check("distance/segment-endpoints", [] {
        const double d = trop_distance(kW1, kW2);
        return std::abs(d - 3.2) <= kTol ? std::string() : "got " + std::to_string(d);
    }));

    cases.push_back(check("enumerate/binary-counts", [] {
        const std::vector<std::size_t> expected{3, 15, 105};
        for (int n = 3; n <= 5; ++n) {
            const auto count = enumerate_topologies(n, true).size();
            if (count != expected[static_cast<std::size_t>(n - 3)]) {
                return "N=" + std::to_string(n) + " gave " + std::to_string(count);
            }
        }
        return std::string();
    }));

    cases.push_back(check("compatible/five-leaf-set", [] {
        const Topology f1(5, {{1, 2, 3}, {1, 2}, {4, 5}});
        const Topology f2(5, {{1, 3, 4, 5}, {1, 3, 5}, {1, 5}});
        const std::vector<Topology> expected{f1, f2, Topology(5, {{1, 3, 4, 5}, {1, 3, 5}, {1, 3}}),
                                             Topology(5, {{1, 3, 4, 5}, {4, 5}, {1, 3}}),
                                             Topology(5, {{1, 2, 3}, {1, 3}, {4, 5}})};
        std::vector<Topology> members;
        for (const auto& report : compatibility_set(f1, f2)) {
            if (report.member) members.push_back(report.candidate);
        }
        if (members.size() != expected.size()) return std::to_string(members.size()) + " members";
        for (const auto& t : expected) {
            if (std::find(members.begin(), members.end(), t) == members.end()) return std::string("missing member");
        }
        const Topology excluded(5, {{1, 2, 3}, {2, 3}, {4, 5}});
        if (std::find(members.begin(), members.end(), excluded) != members.end()) return std::string("{{1,2,3},{2,3},{4,5}} admitted");
        return std::string();
    }));

    cases.push_back(check("compatible/twelve-leaf-necessary-not-sufficient", [] {
        const Topology f1(12, {{1, 2, 7, 8, 9, 12}, {1, 7, 9}, {2, 8, 12}, {1, 7}, {2, 8},
                               {3, 4, 5, 6, 10, 11}, {3, 5, 11}, {4, 6, 10}, {3, 5}, {4, 6}});
        const Topology f2(12, {{1, 2, 3, 4, 9, 10}, {2, 3, 4, 9, 10}, {2, 3, 4, 10}, {3, 4, 10}, {3, 10},
                               {5, 6, 7, 8, 11, 12}, {5, 7, 12}, {6, 8, 11}, {5, 7}, {6, 8}});
        const Topology f(12, {{1, 2, 3, 4, 9, 10}, {1, 2, 9}, {3, 4, 10}, {1, 9}, {3, 10},
                              {5, 6, 7, 8, 11, 12}, {5, 6, 11}, {7, 8, 12}, {5, 11}, {7, 12}});
        if (!necessary_condition(f1, f2, f)) return std::string("necessary condition failed");
        DecideOptions options;
        options.max_leaves = 12;
        if (decide_membership(f1, f2, f, options).member) return std::string("reported as member");
        return std::string();
    }));

    cases.push_back(check("compatible/five-leaf-necessary-not-sufficient", [] {
        const Topology f1(5, {{3, 4}});
        const Topology f2(5, {{1, 4}, {2, 3}, {1, 2, 3, 4}});
        const Topology f(5, {{1, 4}, {1, 3, 4}, {2, 5}});
        if (!necessary_condition(f1, f2, f)) return std::string("necessary condition failed");
        if (decide_membership(f1, f2, f).member) return std::string("reported as member");
        return std::string();
    }));

    return cases;
}

void print_repro_table(const std::vector<ReproCase>& cases, std::ostream& out) {
    std::size_t width = 0;
    for (const auto& c : cases) width = std::max(width, c.name.size());
    std::size_t passed = 0;
    for (const auto& c : cases) {
        out << (c.passed ? "PASS  " : "FAIL  ") << std::left << std::setw(static_cast<int>(width)) << c.name << "  "
            << c.detail << '\n';
        if (c.passed) ++passed;
    }
    out << passed << "/" << cases.size() << " passed\n";
}

}  // namespace troptree::cli
