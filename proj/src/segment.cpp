#include "troptree/segment.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "troptree/error.hpp"

namespace troptree {

TropicalSegment::TropicalSegment(PairVector from, PairVector to, std::vector<double> lambdas, SegmentOptions options)
    : from_(std::move(from)), to_(std::move(to)), lambdas_(std::move(lambdas)), options_(options) {}

PairVector TropicalSegment::raw_point(double lambda) const {
    std::vector<double> out(from_.size());
    for (std::size_t p = 0; p < out.size(); ++p) out[p] = std::max(lambda + from_[p], to_[p]);
    return PairVector(from_.leaf_count(), std::move(out));
}

PairVector TropicalSegment::present(const PairVector& raw) const {
    return options_.normalize ? rescale_to_height(raw, options_.target_diameter) : canonical_rep(raw);
}

PairVector TropicalSegment::bend_point(std::size_t k) const { return present(raw_point(lambdas_.at(k))); }

std::vector<PairVector> TropicalSegment::bend_points() const {
    std::vector<PairVector> out;
    out.reserve(lambdas_.size());
    for (std::size_t k = 0; k < lambdas_.size(); ++k) out.push_back(bend_point(k));
    return out;
}

TropicalSegment tropical_segment(const PairVector& from, const PairVector& to, const SegmentOptions& options) {
    if (from.leaf_count() != to.leaf_count()) {
        throw DimensionMismatch("segment endpoints on " + std::to_string(from.leaf_count()) + " and " +
                                std::to_string(to.leaf_count()) + " leaves");
    }
    if (!options.allow_non_ultrametric) {
        if (!is_ultrametric(from, options.tol).ok()) throw NotUltrametric("segment start is not an ultrametric");
        if (!is_ultrametric(to, options.tol).ok()) throw NotUltrametric("segment end is not an ultrametric");
    }

    std::vector<double> diffs(from.size());
    for (std::size_t p = 0; p < diffs.size(); ++p) diffs[p] = to[p] - from[p];
    std::sort(diffs.begin(), diffs.end());

    std::vector<double> lambdas;
    lambdas.reserve(diffs.size());
    for (double d : diffs) {
        if (lambdas.empty() || d - lambdas.back() > options.tol) lambdas.push_back(d);
    }
    // Keep the exact extremes so the end bend points reproduce the endpoints.
    lambdas.back() = diffs.back();
    return TropicalSegment(from, to, std::move(lambdas), options);
}

PairVector point_at(const TropicalSegment& segment, double lambda) {
    const auto& lambdas = segment.lambdas();
    const double slack = segment.options().tol;
    if (lambda < lambdas.front() - slack || lambda > lambdas.back() + slack) {
        throw InvalidArgument("lambda " + std::to_string(lambda) + " outside [" + std::to_string(lambdas.front()) +
                              ", " + std::to_string(lambdas.back()) + "]");
    }
    return segment.present(segment.raw_point(lambda));
}

std::vector<SegmentPiece> segment_topologies(const TropicalSegment& segment, double tol) {
    const auto& lambdas = segment.lambdas();
    std::vector<SegmentPiece> pieces;
    for (std::size_t k = 0; k < lambdas.size(); ++k) {
        pieces.push_back({lambdas[k], lambdas[k], true, topology_of(segment.bend_point(k), tol), true});
        if (k + 1 == lambdas.size()) break;

        const double lo = lambdas[k];
        const double hi = lambdas[k + 1];
        SegmentPiece interval{lo, hi, false, topology_of(point_at(segment, (lo + hi) / 2.0), tol), true};
        for (double t : {0.25, 0.75}) {
            if (topology_of(point_at(segment, lo + t * (hi - lo)), tol) != interval.topology) interval.constant = false;
        }
        pieces.push_back(std::move(interval));
    }
    return pieces;
}

bool contains_origin(const TropicalSegment& segment, double tol) {
    const PairVector& from = segment.from();
    const PairVector& to = segment.to();
    const std::size_t n = from.size();

    // Coordinates ordered by activation lambda d_p = to_p - from_p. For lambda in
    // [d_(a), d_(a+1)] the first a+1 are "active" (equal to lambda + from_p) and
    // the rest still read to_p, so on that piece the coordinate range is
    //   max(lambda + MA, MI) - min(lambda + mA, mI),
    // a convex function minimized at a piece end or where one of its terms switches.
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return to[a] - from[a] < to[b] - from[b]; });
    auto diff = [&](std::size_t k) { return to[order[k]] - from[order[k]]; };

    constexpr double inf = std::numeric_limits<double>::infinity();
    std::vector<double> suffix_max(n + 1, -inf);
    std::vector<double> suffix_min(n + 1, inf);
    for (std::size_t k = n; k-- > 0;) {
        suffix_max[k] = std::max(suffix_max[k + 1], to[order[k]]);
        suffix_min[k] = std::min(suffix_min[k + 1], to[order[k]]);
    }

    auto range_at = [](double lambda, double ma, double mi_active, double mx_inactive, double mn_inactive) {
        const double top = std::max(lambda + ma, mx_inactive);
        const double bottom = std::min(lambda + mi_active, mn_inactive);
        return top - bottom;
    };

    double active_max = -inf;
    double active_min = inf;
    std::size_t k = 0;
    while (k < n) {
        // Activate every coordinate whose switch point equals this lambda.
        const double lo = diff(k);
        while (k < n && diff(k) == lo) {
            active_max = std::max(active_max, from[order[k]]);
            active_min = std::min(active_min, from[order[k]]);
            ++k;
        }
        const double hi = k < n ? diff(k) : lo;
        const double mx = suffix_max[k];
        const double mn = suffix_min[k];
        std::array<double, 4> candidates{lo, hi, mx - active_max, mn - active_min};
        for (double lambda : candidates) {
            if (!std::isfinite(lambda)) continue;
            lambda = std::clamp(lambda, lo, hi);
            if (range_at(lambda, active_max, active_min, mx, mn) <= tol) return true;
        }
    }
    return false;
}

PairVector rescale_to_height(const PairVector& w, double target_diameter) {
    return trop_scalar(target_diameter - w.max(), w);
}

bool check_equivariance(const PairVector& w_tree, const PairVector& w_base, const LeafPermutation& sigma,
                        double tol) {
    SegmentOptions options;
    options.tol = tol;
    const TropicalSegment original = tropical_segment(w_tree, w_base, options);
    const TropicalSegment relabeled =
        tropical_segment(apply_permutation(w_tree, sigma), apply_permutation(w_base, sigma), options);
    if (original.bend_count() != relabeled.bend_count()) return false;
    for (std::size_t k = 0; k < original.bend_count(); ++k) {
        if (std::abs(original.lambdas()[k] - relabeled.lambdas()[k]) > tol) return false;
        if (!torus_eq(apply_permutation(original.bend_point(k), sigma), relabeled.bend_point(k), tol)) return false;
    }
    return true;
}

}  // namespace troptree
