#pragma once

// Tropical line segments between ultrametrics.
//
// The segment from `from` to `to` is the set of points (lambda (.) from) [+] to
// for lambda between the smallest and largest coordinate of to - from. It is
// piecewise linear; its bending points sit at the distinct values of to - from.

#include <cstddef>
#include <vector>

#include "troptree/topology.hpp"
#include "troptree/torus.hpp"

namespace troptree {

struct SegmentOptions {
    /// Shift each reported point so its largest coordinate is `target_diameter`
    /// (unit-height trees for the default of 2) instead of zeroing the first coordinate.
    bool normalize = false;
    double target_diameter = 2.0;
    /// Accept endpoints that fail the three-point condition.
    bool allow_non_ultrametric = false;
    /// Lambdas closer than this are merged.
    double tol = kDefaultTol;
};

/// Bending points are materialized on demand; construction only sorts the
/// coordinate differences, so it runs in O(n log n).
class TropicalSegment {
public:
    TropicalSegment(PairVector from, PairVector to, std::vector<double> lambdas, SegmentOptions options);

    const PairVector& from() const noexcept { return from_; }
    const PairVector& to() const noexcept { return to_; }
    const SegmentOptions& options() const noexcept { return options_; }

    /// Sorted distinct values of to - from.
    const std::vector<double>& lambdas() const noexcept { return lambdas_; }
    std::size_t bend_count() const noexcept { return lambdas_.size(); }

    /// (lambda_k (.) from) [+] to, canonicalized or normalized per the options.
    /// The first is torus-equal to `to`, the last to `from`.
    PairVector bend_point(std::size_t k) const;
    std::vector<PairVector> bend_points() const;

    /// The point at lambda before canonicalization: max(lambda + from_p, to_p).
    PairVector raw_point(double lambda) const;

    /// Canonicalizes or normalizes a raw point according to the options.
    PairVector present(const PairVector& raw) const;

private:
    PairVector from_;
    PairVector to_;
    std::vector<double> lambdas_;
    SegmentOptions options_;
};

/// Throws DimensionMismatch on mismatched endpoints and NotUltrametric when an
/// endpoint fails the three-point condition (unless allowed by the options).
TropicalSegment tropical_segment(const PairVector& from, const PairVector& to, const SegmentOptions& options = {});

/// Point of the segment at `lambda`, which must lie in [lambdas.front(), lambdas.back()].
PairVector point_at(const TropicalSegment& segment, double lambda);

struct SegmentPiece {
    double lambda_lo = 0.0;
    double lambda_hi = 0.0;
    /// Bending point (lo == hi) or open interval between consecutive bending points.
    bool is_bend_point = true;
    Topology topology;
    /// False when interior samples of an interval disagree on the topology.
    bool constant = true;
};

/// Bending-point and open-interval topologies in order from `to` towards `from`.
std::vector<SegmentPiece> segment_topologies(const TropicalSegment& segment, double tol = kDefaultTol);

/// Whether some point of the segment is torus-equal (within tol) to the origin class.
/// Exact: minimizes the coordinate range over every linear piece.
bool contains_origin(const TropicalSegment& segment, double tol = kDefaultTol);

/// Subtracts max_p(w_p) - target_diameter from every coordinate.
PairVector rescale_to_height(const PairVector& w, double target_diameter = 2.0);

/// Checks that relabeling commutes with taking segments: the bending points of
/// the segment between sigma-relabeled endpoints are the sigma-relabeled bending
/// points of the original segment. Relabeled vectors are apply_permutation(w, sigma).
bool check_equivariance(const PairVector& w_tree, const PairVector& w_base, const LeafPermutation& sigma,
                        double tol = kDefaultTol);

}  // namespace troptree
