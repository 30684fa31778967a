#include <doctest.h>

#include <algorithm>
#include <numeric>
#include <random>

#include "oracles.hpp"
#include "troptree/error.hpp"
#include "troptree/torus.hpp"

using namespace troptree;

namespace {

const PairVector w1(4, {0.4, 0.8, 2, 0.8, 2, 2});
const PairVector w2(4, {2, 2, 2, 0.8, 0.8, 0.4});

void check_coords(const PairVector& w, const std::vector<double>& expected) {
    REQUIRE(w.size() == expected.size());
    for (std::size_t p = 0; p < expected.size(); ++p) CHECK(w[p] == doctest::Approx(expected[p]).epsilon(1e-12));
}

PairVector random_vector(int n, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> coord(-5.0, 5.0);
    std::vector<double> c(pair_count(n));
    for (double& x : c) x = coord(rng);
    return PairVector(n, c);
}

LeafPermutation random_permutation(int n, std::mt19937_64& rng) {
    std::vector<int> m(static_cast<std::size_t>(n));
    std::iota(m.begin(), m.end(), 1);
    std::shuffle(m.begin(), m.end(), rng);
    return LeafPermutation(m);
}

}  // namespace

TEST_CASE("pair indexing follows lexicographic order") {
    for (int n = 2; n <= 9; ++n) {
        const auto all = oracle::pairs(n);
        REQUIRE(all.size() == pair_count(n));
        for (std::size_t k = 0; k < all.size(); ++k) {
            CHECK(pair_index(n, all[k].first, all[k].second) == k);
            CHECK(pair_index(n, all[k].second, all[k].first) == k);
            CHECK(pair_at(n, k) == all[k]);
        }
    }
    CHECK_THROWS_AS(pair_index(4, 2, 2), InvalidArgument);
    CHECK_THROWS_AS(pair_index(4, 0, 2), InvalidArgument);
    CHECK_THROWS_AS(pair_index(4, 1, 5), InvalidArgument);
}

TEST_CASE("pair vector construction validates length and values") {
    CHECK(PairVector(4).size() == 6);
    CHECK_THROWS_AS(PairVector(4, {1, 2, 3}), DimensionMismatch);
    CHECK_THROWS_AS(PairVector(1, {}), InvalidArgument);
    CHECK_THROWS_AS(PairVector(3, {1, 2, std::numeric_limits<double>::infinity()}), InvalidArgument);
    CHECK(w1.at(3, 4) == 2);
    CHECK(w1.at(2, 1) == 0.4);
}

TEST_CASE("tropical scalar multiplication shifts every coordinate") {
    check_coords(trop_scalar(0, w2), {2, 2, 2, 0.8, 0.8, 0.4});
    check_coords(trop_scalar(-1.6, w1), {-1.2, -0.8, 0.4, -0.8, 0.4, 0.4});
    check_coords(trop_scalar(1.2, w1), {1.6, 2, 3.2, 2, 3.2, 3.2});
}

TEST_CASE("tropical sum is the coordinatewise max") {
    check_coords(trop_sum(PairVector(4, {-1.2, -0.8, 0.4, -0.8, 0.4, 0.4}), w2), {2, 2, 2, 0.8, 0.8, 0.4});
    check_coords(trop_sum(w1, w1), {0.4, 0.8, 2, 0.8, 2, 2});
    check_coords(trop_sum(PairVector(4, {1.6, 2, 3.2, 2, 3.2, 3.2}), w2), {2, 2, 3.2, 2, 3.2, 3.2});
    CHECK_THROWS_AS(trop_sum(w1, PairVector(3)), DimensionMismatch);
}

TEST_CASE("canonical representative zeroes the first coordinate") {
    check_coords(canonical_rep(PairVector(4, {2, 2, 3.2, 2, 3.2, 3.2})), {0, 0, 1.2, 0, 1.2, 1.2});
    check_coords(canonical_rep(PairVector(4)), {0, 0, 0, 0, 0, 0});
    check_coords(canonical_rep(PairVector(5, {16, 40, 40, 40, 40, 40, 40, 20, 20, 10})),
                 {0, 24, 24, 24, 24, 24, 24, 4, 4, -6});
}

TEST_CASE("torus equality ignores constant shifts") {
    CHECK(torus_eq(PairVector(4, {2, 2, 3.2, 2, 3.2, 3.2}), PairVector(4, {0.8, 0.8, 2, 0.8, 2, 2}), 1e-9));
    CHECK(torus_eq(w1, w1, 0));
    CHECK_FALSE(torus_eq(PairVector(4, {0, 0, 0, 0, 0, 1}), PairVector(4), 1e-9));
}

TEST_CASE("tropical distance") {
    CHECK(trop_distance(w1, w2) == doctest::Approx(3.2).epsilon(1e-12));
    CHECK(trop_distance(w1, w1) == 0);
    CHECK(trop_distance(PairVector(4), PairVector(4, {7, 7, 7, 7, 7, 7})) == 0);
}

TEST_CASE("tropical distance is a metric on the torus") {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 300; ++trial) {
        const int n = 3 + trial % 4;
        const PairVector u = random_vector(n, rng);
        const PairVector v = random_vector(n, rng);
        const PairVector x = random_vector(n, rng);
        CHECK(trop_distance(u, v) >= 0);
        CHECK(trop_distance(u, v) == doctest::Approx(trop_distance(v, u)));
        CHECK(trop_distance(u, x) <= trop_distance(u, v) + trop_distance(v, x) + 1e-12);
        CHECK(trop_distance(u, trop_scalar(3.5, u)) == doctest::Approx(0).epsilon(1e-12));
        CHECK(torus_eq(u, canonical_rep(u)));
        CHECK(canonical_rep(u)[0] == 0);
    }
}

TEST_CASE("relabeling examples") {
    const PairVector relabeled(4, {0.8, 0.8, 2, 0.4, 2, 2});
    const LeafPermutation sigma({2, 3, 1, 4});
    check_coords(apply_permutation(relabeled, sigma), {0.4, 0.8, 2, 0.8, 2, 2});
    CHECK(sigma.inverse() == LeafPermutation({3, 1, 2, 4}));
    check_coords(apply_permutation(w1, sigma.inverse()), {0.8, 0.8, 2, 0.4, 2, 2});
    CHECK(apply_permutation(w1, LeafPermutation::identity(4)) == w1);
    CHECK_THROWS_AS(apply_permutation(w1, LeafPermutation::identity(5)), DimensionMismatch);
    CHECK_THROWS_AS(LeafPermutation({1, 1, 2}), InvalidArgument);
    CHECK_THROWS_AS(LeafPermutation({0, 1, 2}), InvalidArgument);
}

TEST_CASE("relabeling is a group action that preserves the tropical structure") {
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 200; ++trial) {
        const int n = 3 + trial % 5;
        const PairVector u = random_vector(n, rng);
        const PairVector v = random_vector(n, rng);
        const LeafPermutation s = random_permutation(n, rng);
        const LeafPermutation t = random_permutation(n, rng);

        // Sigma(Sigma(w, s), t) reads w at s(t(i)), i.e. the action of s o t.
        CHECK(apply_permutation(apply_permutation(u, s), t) == apply_permutation(u, compose(s, t)));
        CHECK(apply_permutation(apply_permutation(u, s), s.inverse()) == u);
        CHECK(compose(s, s.inverse()) == LeafPermutation::identity(n));

        // Direct evaluation of w'_ij = w_(s i, s j).
        const PairVector r = apply_permutation(u, s);
        for (const auto& [i, j] : oracle::pairs(n)) CHECK(r.at(i, j) == u.at(s(i), s(j)));

        CHECK(apply_permutation(trop_sum(u, v), s) == trop_sum(apply_permutation(u, s), apply_permutation(v, s)));
        CHECK(apply_permutation(trop_scalar(1.25, u), s) == trop_scalar(1.25, apply_permutation(u, s)));
        CHECK(trop_distance(apply_permutation(u, s), apply_permutation(v, s)) ==
              doctest::Approx(trop_distance(u, v)));
    }
}
