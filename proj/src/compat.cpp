#include "troptree/compat.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>
#include <string>
#include <tuple>

#include "troptree/error.hpp"

namespace troptree {

namespace {

void require_same_leaves(const Topology& f1, const Topology& f2, const Topology& f) {
    if (f1.leaf_count() != f2.leaf_count() || f1.leaf_count() != f.leaf_count()) {
        throw DimensionMismatch("topologies on different leaf sets");
    }
}

struct Edge {
    int from;
    int to;
    bool strict;  // from < to, otherwise from <= to
};

// Tarjan's algorithm; components are numbered in reverse topological order.
class Components {
public:
    Components(int vertex_count, const std::vector<Edge>& edges)
        : adjacency_(static_cast<std::size_t>(vertex_count)),
          index_(static_cast<std::size_t>(vertex_count), -1),
          low_(static_cast<std::size_t>(vertex_count), 0),
          on_stack_(static_cast<std::size_t>(vertex_count), false),
          component_(static_cast<std::size_t>(vertex_count), -1) {
        for (const Edge& e : edges) adjacency_[static_cast<std::size_t>(e.from)].push_back(e.to);
        for (int v = 0; v < vertex_count; ++v) {
            if (index_[static_cast<std::size_t>(v)] < 0) visit(v);
        }
    }

    int of(int v) const { return component_[static_cast<std::size_t>(v)]; }
    int count() const { return count_; }

private:
    void visit(int v) {
        const auto sv = static_cast<std::size_t>(v);
        index_[sv] = low_[sv] = next_index_++;
        stack_.push_back(v);
        on_stack_[sv] = true;
        for (int w : adjacency_[sv]) {
            const auto sw = static_cast<std::size_t>(w);
            if (index_[sw] < 0) {
                visit(w);
                low_[sv] = std::min(low_[sv], low_[sw]);
            } else if (on_stack_[sw]) {
                low_[sv] = std::min(low_[sv], index_[sw]);
            }
        }
        if (low_[sv] == index_[sv]) {
            int w;
            do {
                w = stack_.back();
                stack_.pop_back();
                on_stack_[static_cast<std::size_t>(w)] = false;
                component_[static_cast<std::size_t>(w)] = count_;
            } while (w != v);
            ++count_;
        }
    }

    std::vector<std::vector<int>> adjacency_;
    std::vector<int> index_;
    std::vector<int> low_;
    std::vector<bool> on_stack_;
    std::vector<int> component_;
    std::vector<int> stack_;
    int next_index_ = 0;
    int count_ = 0;
};

// Unknowns: class values of F1's nodes, then F2's, then F's.
class MembershipSearch {
public:
    MembershipSearch(const Topology& f1, const Topology& f2, const Topology& f)
        : t1_(f1), t2_(f2), t_(f), offset2_(t1_.node_count()), offset_(offset2_ + t2_.node_count()),
          vertex_count_(offset_ + t_.node_count()) {
        add_cone(t1_, 0);
        add_cone(t2_, offset2_);
        add_cone(t_, offset_);

        std::set<std::tuple<int, int, int>> seen;
        for (std::size_t p = 0; p < pair_count(f.leaf_count()); ++p) {
            const auto triple = std::make_tuple(t_.closure(p) + offset_, t1_.closure(p), t2_.closure(p) + offset2_);
            if (seen.insert(triple).second) triples_.push_back(triple);
        }
    }

    // Returns the satisfying choice vector (0: F1 side attains the max, 1: F2 side), if any.
    std::optional<std::vector<int>> solve() {
        std::vector<int> choices(triples_.size(), -1);
        if (!search(choices)) return std::nullopt;
        return choices;
    }

    CompatWitness witness(const std::vector<int>& choices, int leaf_count) const {
        const auto edges = edges_for(choices);
        const Components comps(vertex_count_, edges);

        // Longest path over the condensation, strict edges weigh 1. Tarjan numbers
        // sinks first, so sources have the highest component ids.
        std::vector<std::vector<std::pair<int, int>>> incoming(static_cast<std::size_t>(comps.count()));
        for (const Edge& e : edges) {
            const int a = comps.of(e.from);
            const int b = comps.of(e.to);
            if (a != b) incoming[static_cast<std::size_t>(b)].push_back({a, e.strict ? 1 : 0});
        }
        std::vector<int> level(static_cast<std::size_t>(comps.count()), 0);
        for (int c = comps.count() - 1; c >= 0; --c) {
            for (const auto& [src, weight] : incoming[static_cast<std::size_t>(c)]) {
                level[static_cast<std::size_t>(c)] =
                    std::max(level[static_cast<std::size_t>(c)], level[static_cast<std::size_t>(src)] + weight);
            }
        }
        auto value = [&](int vertex) { return static_cast<double>(level[static_cast<std::size_t>(comps.of(vertex))]); };

        std::vector<double> w1(pair_count(leaf_count));
        std::vector<double> w2(w1.size());
        for (std::size_t p = 0; p < w1.size(); ++p) {
            w1[p] = value(t1_.closure(p));
            w2[p] = value(t2_.closure(p) + offset2_);
        }
        return {PairVector(leaf_count, std::move(w1)), PairVector(leaf_count, std::move(w2))};
    }

private:
    void add_cone(const ClosureTable& table, int offset) {
        for (int node = 0; node < table.node_count(); ++node) {
            if (table.parent(node) >= 0) base_.push_back({node + offset, table.parent(node) + offset, true});
        }
    }

    void add_choice(std::vector<Edge>& edges, std::size_t t, int choice) const {
        const auto [c, a, b] = triples_[t];
        const int winner = choice == 0 ? a : b;
        const int loser = choice == 0 ? b : a;
        edges.push_back({c, winner, false});
        edges.push_back({winner, c, false});
        edges.push_back({loser, winner, false});
    }

    std::vector<Edge> edges_for(const std::vector<int>& choices) const {
        std::vector<Edge> edges = base_;
        for (std::size_t t = 0; t < choices.size(); ++t) {
            if (choices[t] >= 0) add_choice(edges, t, choices[t]);
        }
        return edges;
    }

    bool feasible(const std::vector<int>& choices) const {
        const auto edges = edges_for(choices);
        const Components comps(vertex_count_, edges);
        return std::none_of(edges.begin(), edges.end(),
                            [&](const Edge& e) { return e.strict && comps.of(e.from) == comps.of(e.to); });
    }

    bool search(std::vector<int>& choices) const {
        if (!feasible(choices)) return false;
        bool changed = true;
        while (changed) {
            changed = false;
            for (std::size_t t = 0; t < choices.size(); ++t) {
                if (choices[t] >= 0) continue;
                choices[t] = 0;
                const bool first_ok = feasible(choices);
                choices[t] = 1;
                const bool second_ok = feasible(choices);
                choices[t] = -1;
                if (!first_ok && !second_ok) return false;
                if (first_ok != second_ok) {
                    choices[t] = first_ok ? 0 : 1;
                    changed = true;
                }
            }
        }
        const auto open = std::find(choices.begin(), choices.end(), -1);
        if (open == choices.end()) return feasible(choices);
        for (int option : {0, 1}) {
            std::vector<int> trial = choices;
            trial[static_cast<std::size_t>(open - choices.begin())] = option;
            if (search(trial)) {
                choices = std::move(trial);
                return true;
            }
        }
        return false;
    }

    ClosureTable t1_;
    ClosureTable t2_;
    ClosureTable t_;
    int offset2_;
    int offset_;
    int vertex_count_;
    std::vector<Edge> base_;
    std::vector<std::tuple<int, int, int>> triples_;
};

}  // namespace

bool necessary_condition(const Topology& f1, const Topology& f2, const Topology& f) {
    require_same_leaves(f1, f2, f);
    const ClosureTable t1(f1);
    const ClosureTable t2(f2);
    const ClosureTable t(f);

    const auto classes = static_cast<std::size_t>(t.node_count());
    std::vector<int> first1(classes, -1);
    std::vector<int> first2(classes, -1);
    std::vector<bool> same1(classes, true);
    std::vector<bool> same2(classes, true);
    for (std::size_t p = 0; p < pair_count(f.leaf_count()); ++p) {
        const auto k = static_cast<std::size_t>(t.closure(p));
        if (first1[k] < 0) {
            first1[k] = t1.closure(p);
            first2[k] = t2.closure(p);
            continue;
        }
        if (first1[k] != t1.closure(p)) same1[k] = false;
        if (first2[k] != t2.closure(p)) same2[k] = false;
    }
    for (std::size_t k = 0; k < classes; ++k) {
        if (!same1[k] && !same2[k]) return false;
    }
    return true;
}

CompatReport decide_membership(const Topology& f1, const Topology& f2, const Topology& f, const DecideOptions& options) {
    require_same_leaves(f1, f2, f);
    const int n = f.leaf_count();
    if (n > options.max_leaves) {
        throw BoundExceeded("decide_membership is bounded to " + std::to_string(options.max_leaves) + " leaves, got " +
                            std::to_string(n));
    }

    CompatReport report;
    report.candidate = f;
    report.passes_necessary = necessary_condition(f1, f2, f);
    report.decided = true;

    MembershipSearch search(f1, f2, f);
    const auto choices = search.solve();
    if (!choices) return report;

    CompatWitness witness = search.witness(*choices, n);
    const bool verified = ut_membership(f1, witness.w1) && ut_membership(f2, witness.w2) &&
                          ut_membership(f, trop_sum(witness.w1, witness.w2));
    if (!verified) throw std::logic_error("decide_membership produced a witness outside the cones");
    report.member = true;
    report.witness = std::move(witness);
    return report;
}

std::vector<CompatReport> compatibility_set(const Topology& f1, const Topology& f2, bool full_dim_only) {
    if (f1.leaf_count() != f2.leaf_count()) throw DimensionMismatch("topologies on different leaf sets");
    const int n = f1.leaf_count();
    if (n > kMaxCompatibilitySetLeaves) {
        throw BoundExceeded("compatibility_set enumerates at most " + std::to_string(kMaxCompatibilitySetLeaves) +
                            " leaves, got " + std::to_string(n));
    }
    const bool endpoints_full = is_full_dimensional(f1) && is_full_dimensional(f2);

    std::vector<CompatReport> reports;
    for (const Topology& candidate : enumerate_topologies(n, full_dim_only)) {
        if (endpoints_full && is_full_dimensional(candidate) && !necessary_condition(f1, f2, candidate)) {
            CompatReport rejected;
            rejected.candidate = candidate;
            rejected.decided = true;
            reports.push_back(std::move(rejected));
            continue;
        }
        reports.push_back(decide_membership(f1, f2, candidate));
    }
    return reports;
}

}  // namespace troptree
