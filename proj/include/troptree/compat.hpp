#pragma once

// Compatible topologies: which topologies F admit w1 in ut(F1), w2 in ut(F2)
// with w1 [+] w2 in ut(F).

#include <optional>
#include <vector>

#include "troptree/topology.hpp"

namespace troptree {

struct CompatWitness {
    PairVector w1;
    PairVector w2;
};

struct CompatReport {
    Topology candidate;
    bool passes_necessary = false;
    /// The exact search (or a sound filter rejection) settled membership.
    bool decided = false;
    bool member = false;
    std::optional<CompatWitness> witness;
};

inline constexpr int kMaxDecideLeaves = 8;
inline constexpr int kMaxCompatibilitySetLeaves = 6;

struct DecideOptions {
    int max_leaves = kMaxDecideLeaves;
};

/// Every =_F class of pairs lies inside a single =_F1 class or a single =_F2 class.
/// Necessary for membership when F1, F2 and F are all full dimensional.
bool necessary_condition(const Topology& f1, const Topology& f2, const Topology& f);

/// Exact decision of F in C(F1, F2).
///
/// Class values of the three topologies are unknowns ordered by the strict
/// inclusion constraints of each cone. Each distinct closure triple
/// (cl_F(p), cl_F1(p), cl_F2(p)) chooses which summand attains the maximum,
/// adding equalities and a non-strict inequality. A choice set is feasible iff
/// no strongly connected component of the constraint digraph holds a strict
/// edge. The search probes every open choice, fixes forced ones, and branches
/// on the rest. Feasible sets yield an integer-levelled witness that is
/// verified against all three cones.
CompatReport decide_membership(const Topology& f1, const Topology& f2, const Topology& f,
                               const DecideOptions& options = {});

/// Decides every candidate topology on [N] (N <= 6). Candidates failing the
/// necessary condition are rejected without search when all three topologies
/// are full dimensional; otherwise they are searched like the rest.
std::vector<CompatReport> compatibility_set(const Topology& f1, const Topology& f2, bool full_dim_only = true);

}  // namespace troptree
