#include <doctest.h>

#include <random>

#include "oracles.hpp"
#include "troptree/error.hpp"
#include "troptree/newick.hpp"
#include "troptree/treemetrics.hpp"

using namespace troptree;

namespace {

const std::vector<double> kFiveLeafVector{16, 40, 40, 40, 40, 40, 40, 20, 20, 10};

EquidistantTree five_leaf_tree() { return EquidistantTree(5, {{{1, 2}, 12.0}, {{3, 4, 5}, 10.0}, {{4, 5}, 5.0}}, 20.0); }

void check_coords(const PairVector& w, const std::vector<double>& expected, double eps = 1e-12) {
    REQUIRE(w.size() == expected.size());
    for (std::size_t p = 0; p < expected.size(); ++p) CHECK(w[p] == doctest::Approx(expected[p]).epsilon(eps));
}

// Cophenetic distance by walking up from each leaf: 2 * (height - depth of the lowest common clade).
PairVector walk_distances(const EquidistantTree& t) {
    std::vector<double> coords;
    for (const auto& [i, j] : oracle::pairs(t.leaf_count())) {
        double depth = 0;
        for (const auto& [clade, length] : t.internal_edges()) {
            if (oracle::contains(clade, i) && oracle::contains(clade, j)) depth += length;
        }
        coords.push_back(2 * (t.height() - depth));
    }
    return PairVector(t.leaf_count(), coords);
}

}  // namespace

TEST_CASE("tree metric and ultrametric checks") {
    const PairVector fig(5, kFiveLeafVector);
    CHECK(is_tree_metric(fig).kind == ValidationReport::Kind::TreeMetric);
    CHECK(is_tree_metric(PairVector(5)).ok());
    const auto bad = is_tree_metric(PairVector(4, {1, 1, 1, 1, 1, 3}));
    CHECK(bad.kind == ValidationReport::Kind::Neither);
    CHECK(bad.witness == std::vector<int>{1, 2, 3, 4});

    CHECK(is_ultrametric(fig).kind == ValidationReport::Kind::Ultrametric);
    CHECK(is_ultrametric(PairVector(6, std::vector<double>(15, 3.0))).ok());
    const auto scalene = is_ultrametric(PairVector(3, {1, 2, 3}));
    CHECK(scalene.kind == ValidationReport::Kind::Neither);
    CHECK(scalene.witness == std::vector<int>{1, 2, 3});
}

TEST_CASE("ultrametric check agrees with a direct triple scan") {
    std::mt19937_64 rng(3);
    std::uniform_int_distribution<int> level(0, 3);
    int positives = 0;
    for (int trial = 0; trial < 2000; ++trial) {
        const int n = 3 + trial % 4;
        std::vector<double> c(pair_count(n));
        for (double& x : c) x = level(rng);
        const PairVector w(n, c);
        const bool expected = oracle::ultrametric(w, 1e-9);
        CHECK(is_ultrametric(w).ok() == expected);
        if (expected) ++positives;
    }
    CHECK(positives > 0);

    for (int trial = 0; trial < 200; ++trial) {
        const PairVector w = tree_to_vector(random_coalescent_tree(3 + trial % 8, 100 + trial));
        CHECK(oracle::ultrametric(w, 1e-9));
        CHECK(is_ultrametric(w).ok());
        // Every ultrametric satisfies the four-point condition.
        CHECK(is_tree_metric(w).ok());
    }
}

TEST_CASE("tree to vector") {
    check_coords(tree_to_vector(five_leaf_tree()), kFiveLeafVector);
    check_coords(tree_to_vector(EquidistantTree::star(4, 1.5)), {3, 3, 3, 3, 3, 3});
    check_coords(tree_to_vector(EquidistantTree(4, {{{1, 2, 3}, 0.6}, {{1, 2}, 0.2}}, 1.0)), {0.4, 0.8, 2, 0.8, 2, 2});
    const auto& ext = five_leaf_tree().external_edges();
    CHECK(ext == std::vector<double>{8, 8, 10, 5, 5});
}

TEST_CASE("tree construction rejects invalid data") {
    CHECK_THROWS_AS(EquidistantTree(4, {{{1, 2}, 3.0}}, 1.0), InvalidArgument);
    CHECK_THROWS_AS(EquidistantTree(4, {{{1, 2}, -1.0}}, 5.0), InvalidArgument);
    CHECK_THROWS_AS(EquidistantTree(4, {{{1, 2}, 1.0}, {{2, 3}, 1.0}}, 5.0), InvalidArgument);
    CHECK_THROWS_AS(EquidistantTree(3, {}, -1.0), InvalidArgument);
    CHECK_THROWS_AS(EquidistantTree(3, {}, 1.0, {"a", "a", "b"}), InvalidArgument);
}

TEST_CASE("vector to tree") {
    const EquidistantTree t = vector_to_tree(PairVector(5, kFiveLeafVector), 20.0);
    CHECK(t.height() == doctest::Approx(20));
    REQUIRE(t.internal_edges().size() == 3);
    CHECK(t.internal_edges().at({1, 2}) == doctest::Approx(12));
    CHECK(t.internal_edges().at({3, 4, 5}) == doctest::Approx(10));
    CHECK(t.internal_edges().at({4, 5}) == doctest::Approx(5));

    const EquidistantTree star = vector_to_tree(PairVector(4, {3, 3, 3, 3, 3, 3}));
    CHECK(star.internal_edges().empty());
    CHECK(star.height() == doctest::Approx(1.5));

    CHECK_THROWS_AS(vector_to_tree(PairVector(3, {1, 2, 3})), NotUltrametric);
    CHECK_THROWS_AS(vector_to_tree(PairVector(5, kFiveLeafVector), 1.0), InvalidArgument);
}

TEST_CASE("vector to tree inverts tree to vector on the torus") {
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> shift(-3, 3);
    for (int trial = 0; trial < 200; ++trial) {
        const EquidistantTree t = random_coalescent_tree(3 + trial % 7, 900 + trial);
        const PairVector w = tree_to_vector(t);
        CHECK(oracle::topology_of(w, 1e-9).clades() == t.clades());
        check_coords(walk_distances(t), {w.coords().begin(), w.coords().end()}, 1e-9);

        const PairVector shifted = trop_scalar(shift(rng), w);
        const EquidistantTree back = vector_to_tree(shifted);
        CHECK(torus_eq(tree_to_vector(back), shifted, 1e-9));
        for (double e : back.external_edges()) CHECK(e >= 0);
        check_coords(tree_to_vector(vector_to_tree(w, t.height())), {w.coords().begin(), w.coords().end()}, 1e-9);
    }
}

TEST_CASE("random coalescent trees") {
    const EquidistantTree two = random_coalescent_tree(2, 1);
    check_coords(tree_to_vector(two), {2});
    CHECK(two.internal_edges().empty());

    const PairVector w = tree_to_vector(random_coalescent_tree(5, 7));
    CHECK(is_ultrametric(w).ok());
    CHECK(w == tree_to_vector(random_coalescent_tree(5, 7)));
    CHECK_FALSE(w == tree_to_vector(random_coalescent_tree(5, 8)));

    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        const EquidistantTree t = random_coalescent_tree(8, seed);
        CHECK(t.height() == doctest::Approx(1));
        CHECK(t.internal_edges().size() == 6);
        CHECK(tree_to_vector(t).max() == doctest::Approx(2));
    }
}

TEST_CASE("newick parsing") {
    const EquidistantTree t = parse_newick("((A:8,B:8):12,(C:10,(D:5,E:5):5):10);");
    CHECK(t.labels() == std::vector<std::string>{"A", "B", "C", "D", "E"});
    CHECK(t.height() == doctest::Approx(20));
    check_coords(tree_to_vector(t), kFiveLeafVector);

    const EquidistantTree two = parse_newick("(A:1,B:1);");
    CHECK(two.leaf_count() == 2);
    CHECK(two.height() == doctest::Approx(1));
    CHECK(two.internal_edges().empty());

    CHECK_THROWS_AS(parse_newick("((A:1,B:2):1,C:3);"), InvalidArgument);
    CHECK_THROWS_AS(parse_newick("((A:1,B:1):1,C:2)"), ParseError);
    CHECK_THROWS_AS(parse_newick("((A,B):1,C:2);"), ParseError);
    CHECK_THROWS_AS(parse_newick("((A:1,A:1):1,C:2);"), ParseError);
    CHECK_THROWS_AS(parse_newick("((A:1,B:-1):1,C:2);"), ParseError);

    const EquidistantTree quoted = parse_newick(" ( 'it''s':1 , [note] B:1 ) ;");
    CHECK(quoted.labels() == std::vector<std::string>{"it's", "B"});

    try {
        parse_newick("((A:1,B:1):1,C:x);");
        FAIL("expected a parse error");
    } catch (const ParseError& e) {
        CHECK(e.offset() > 10);
    }
}

TEST_CASE("newick writing") {
    const EquidistantTree named(5, five_leaf_tree().internal_edges(), 20.0, {"A", "B", "C", "D", "E"});
    CHECK(write_newick(named) ==
          "((A:8.000000,B:8.000000):12.000000,(C:10.000000,(D:5.000000,E:5.000000):5.000000):10.000000);");
    CHECK(write_newick(EquidistantTree::star(3, 1.0)) == "(1:1.000000,2:1.000000,3:1.000000);");

    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        const EquidistantTree t = random_coalescent_tree(2 + static_cast<int>(seed % 9), seed);
        const EquidistantTree back = parse_newick(write_newick(t));
        // Leaves are renumbered in order of appearance; map them back through the labels.
        std::vector<int> original;
        for (const auto& label : back.labels()) original.push_back(std::stoi(label));
        const PairVector expected = apply_permutation(tree_to_vector(t), LeafPermutation(original));
        CHECK(torus_eq(tree_to_vector(back), expected, 1e-5));
    }
}
