#include "troptree/torus.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "troptree/error.hpp"

namespace troptree {

namespace {

void require_same_space(const PairVector& u, const PairVector& v) {
    if (u.leaf_count() != v.leaf_count()) {
        throw DimensionMismatch("pair vectors on " + std::to_string(u.leaf_count()) + " and " +
                                std::to_string(v.leaf_count()) + " leaves");
    }
}

std::pair<double, double> difference_range(const PairVector& u, const PairVector& v) {
    require_same_space(u, v);
    if (u.size() == 0) return {0.0, 0.0};
    double lo = u[0] - v[0];
    double hi = lo;
    for (std::size_t p = 1; p < u.size(); ++p) {
        const double d = u[p] - v[p];
        lo = std::min(lo, d);
        hi = std::max(hi, d);
    }
    return {lo, hi};
}

}  // namespace

std::size_t pair_index(int leaf_count, int i, int j) {
    if (i > j) std::swap(i, j);
    if (i < 1 || j > leaf_count || i == j) {
        throw InvalidArgument("invalid pair {" + std::to_string(i) + "," + std::to_string(j) +
                              "} on " + std::to_string(leaf_count) + " leaves");
    }
    // Zero-based: rows before i contribute (N-1) + (N-2) + ... + (N-i+1) entries.
    const auto n = static_cast<std::size_t>(leaf_count);
    const auto a = static_cast<std::size_t>(i - 1);
    const auto b = static_cast<std::size_t>(j - 1);
    return a * (2 * n - a - 1) / 2 + (b - a - 1);
}

std::pair<int, int> pair_at(int leaf_count, std::size_t index) {
    if (index >= pair_count(leaf_count)) throw InvalidArgument("pair index out of range");
    int i = 1;
    std::size_t row = static_cast<std::size_t>(leaf_count - 1);
    while (index >= row) {
        index -= row;
        --row;
        ++i;
    }
    return {i, i + 1 + static_cast<int>(index)};
}

PairVector::PairVector(int leaf_count) : PairVector(leaf_count, std::vector<double>(pair_count(leaf_count), 0.0)) {}

PairVector::PairVector(int leaf_count, std::vector<double> coords)
    : leaf_count_(leaf_count), coords_(std::move(coords)) {
    if (leaf_count < 2) throw InvalidArgument("a pair vector needs at least 2 leaves");
    if (coords_.size() != pair_count(leaf_count)) {
        throw DimensionMismatch("expected " + std::to_string(pair_count(leaf_count)) +
                                " coordinates for " + std::to_string(leaf_count) + " leaves, got " +
                                std::to_string(coords_.size()));
    }
    for (double c : coords_) {
        if (!std::isfinite(c)) throw InvalidArgument("pair vector coordinates must be finite");
    }
}

double PairVector::max() const { return *std::max_element(coords_.begin(), coords_.end()); }

double PairVector::min() const { return *std::min_element(coords_.begin(), coords_.end()); }

LeafPermutation::LeafPermutation(std::vector<int> mapping) : mapping_(std::move(mapping)) {
    const int n = size();
    std::vector<bool> seen(static_cast<std::size_t>(n), false);
    for (int image : mapping_) {
        if (image < 1 || image > n || seen[static_cast<std::size_t>(image - 1)]) {
            throw InvalidArgument("leaf permutation is not a bijection on [" + std::to_string(n) + "]");
        }
        seen[static_cast<std::size_t>(image - 1)] = true;
    }
}

LeafPermutation LeafPermutation::identity(int leaf_count) {
    std::vector<int> mapping(static_cast<std::size_t>(leaf_count));
    for (int i = 0; i < leaf_count; ++i) mapping[static_cast<std::size_t>(i)] = i + 1;
    return LeafPermutation(std::move(mapping));
}

LeafPermutation LeafPermutation::inverse() const {
    std::vector<int> inv(mapping_.size());
    for (std::size_t i = 0; i < mapping_.size(); ++i) {
        inv[static_cast<std::size_t>(mapping_[i] - 1)] = static_cast<int>(i) + 1;
    }
    return LeafPermutation(std::move(inv));
}

LeafPermutation compose(const LeafPermutation& sigma, const LeafPermutation& tau) {
    if (sigma.size() != tau.size()) throw DimensionMismatch("permutations of different sizes");
    std::vector<int> out(static_cast<std::size_t>(sigma.size()));
    for (int i = 1; i <= sigma.size(); ++i) out[static_cast<std::size_t>(i - 1)] = sigma(tau(i));
    return LeafPermutation(std::move(out));
}

PairVector trop_scalar(double a, const PairVector& w) {
    std::vector<double> out(w.coords().begin(), w.coords().end());
    for (double& c : out) c += a;
    return PairVector(w.leaf_count(), std::move(out));
}

PairVector trop_sum(const PairVector& u, const PairVector& v) {
    require_same_space(u, v);
    std::vector<double> out(u.size());
    for (std::size_t p = 0; p < u.size(); ++p) out[p] = std::max(u[p], v[p]);
    return PairVector(u.leaf_count(), std::move(out));
}

PairVector canonical_rep(const PairVector& w) {
    if (w.size() == 0) return w;
    return trop_scalar(-w[0], w);
}

double trop_distance(const PairVector& u, const PairVector& v) {
    const auto [lo, hi] = difference_range(u, v);
    return hi - lo;
}

bool torus_eq(const PairVector& u, const PairVector& v, double tol) {
    return trop_distance(u, v) <= tol;
}

PairVector apply_permutation(const PairVector& w, const LeafPermutation& sigma) {
    const int n = w.leaf_count();
    if (sigma.size() != n) {
        throw DimensionMismatch("permutation on " + std::to_string(sigma.size()) +
                                " leaves applied to a vector on " + std::to_string(n));
    }
    std::vector<double> out;
    out.reserve(w.size());
    for (int i = 1; i <= n; ++i) {
        for (int j = i + 1; j <= n; ++j) out.push_back(w.at(sigma(i), sigma(j)));
    }
    return PairVector(n, std::move(out));
}

}  // namespace troptree
