#pragma once

// Max-plus arithmetic on the tropical projective torus R^n / R(1,...,1).
//
// Points are pair-indexed vectors: for N leaves there is one coordinate per
// unordered pair {i,j}, 1 <= i < j <= N, stored in lexicographic order
// (1,2),(1,3),...,(1,N),(2,3),...,(N-1,N). Leaf labels are 1-based throughout
// the public interface.

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

namespace troptree {

inline constexpr double kDefaultTol = 1e-9;

/// Number of unordered pairs on `leaf_count` leaves.
constexpr std::size_t pair_count(int leaf_count) noexcept {
    return leaf_count < 2 ? 0 : static_cast<std::size_t>(leaf_count) * (leaf_count - 1) / 2;
}

/// Lexicographic index of the pair {i,j} (1-based, i != j, order irrelevant).
std::size_t pair_index(int leaf_count, int i, int j);

/// Inverse of pair_index: the 1-based pair (i,j), i < j, at position `index`.
std::pair<int, int> pair_at(int leaf_count, std::size_t index);

class PairVector {
public:
    PairVector() = default;
    /// All-zero vector (the origin class) on `leaf_count` leaves.
    explicit PairVector(int leaf_count);
    PairVector(int leaf_count, std::vector<double> coords);

    int leaf_count() const noexcept { return leaf_count_; }
    std::size_t size() const noexcept { return coords_.size(); }
    std::span<const double> coords() const noexcept { return coords_; }

    double operator[](std::size_t index) const { return coords_[index]; }
    /// Coordinate of the pair {i,j}, 1-based.
    double at(int i, int j) const { return coords_[pair_index(leaf_count_, i, j)]; }

    double max() const;
    double min() const;

    friend bool operator==(const PairVector&, const PairVector&) = default;

private:
    int leaf_count_ = 0;
    std::vector<double> coords_;
};

/// A bijection on [N], stored 1-based: mapping()[i-1] is the image of leaf i.
class LeafPermutation {
public:
    explicit LeafPermutation(std::vector<int> mapping);
    static LeafPermutation identity(int leaf_count);

    int size() const noexcept { return static_cast<int>(mapping_.size()); }
    int operator()(int leaf) const { return mapping_[leaf - 1]; }
    std::span<const int> mapping() const noexcept { return mapping_; }

    LeafPermutation inverse() const;

    friend bool operator==(const LeafPermutation&, const LeafPermutation&) = default;

private:
    std::vector<int> mapping_;
};

/// (sigma o tau)(i) = sigma(tau(i)). With this convention
/// apply_permutation(apply_permutation(w, sigma), tau) == apply_permutation(w, compose(sigma, tau)).
LeafPermutation compose(const LeafPermutation& sigma, const LeafPermutation& tau);

/// a (.) w: adds `a` to every coordinate.
PairVector trop_scalar(double a, const PairVector& w);

/// u [+] v: coordinatewise maximum.
PairVector trop_sum(const PairVector& u, const PairVector& v);

/// Representative with first coordinate zero.
PairVector canonical_rep(const PairVector& w);

/// max_p(u_p - v_p) - min_p(u_p - v_p).
double trop_distance(const PairVector& u, const PairVector& v);

bool torus_eq(const PairVector& u, const PairVector& v, double tol = kDefaultTol);

/// Relabels leaves: result_{i,j} = w_{sigma(i), sigma(j)}.
PairVector apply_permutation(const PairVector& w, const LeafPermutation& sigma);

}  // namespace troptree
