#pragma once

// Achievable rate regions of the degraded Gaussian multiple-access wiretap
// channel under a required secrecy level delta, together with the TDMA
// region, the secrecy sum capacity, and the entropy-gap bound that proves
// the converse.
//
// Regions are stored as one linear bound b_S per nonempty user subset S:
//   individual: R_S <= min{ C_S, (C_S - sum_{k in S} Cw_k) / delta }
//   collective: R_S <= min{ C_S, (C_S - Cw~_S) / delta }
// where C_S is the receiver capacity, Cw the eavesdropper capacity and Cw~
// the eavesdropper capacity with the complement acting as interference.
// Negative secrecy terms clamp to zero (the region degenerates in that
// direction); delta = 0 drops the secrecy term entirely and reproduces the
// plain multiple-access region.

#include <algorithm>
#include <cmath>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "gmacwt/channel.hpp"
#include "gmacwt/errors.hpp"
#include "gmacwt/geometry.hpp"
#include "gmacwt/rates.hpp"

namespace gmacwt {

struct RatePoint {
    std::vector<double> rates;

    RatePoint() = default;
    explicit RatePoint(std::vector<double> r) : rates(std::move(r)) {
        for (double v : rates)
            if (!(v >= 0.0)) throw std::invalid_argument("rates must be nonnegative");
    }

    int num_users() const { return static_cast<int>(rates.size()); }
    double subset_sum(UserSet s) const {
        double sum = 0.0;
        s.for_each_user([&](int k) { sum += rates[static_cast<std::size_t>(k)]; });
        return sum;
    }
};

enum class RegionKind { individual, collective, gmac_baseline };

inline std::string to_string(RegionKind kind) {
    switch (kind) {
        case RegionKind::individual: return "individual";
        case RegionKind::collective: return "collective";
        case RegionKind::gmac_baseline: return "gmac-baseline";
    }
    return "unknown";
}

// A delta-secret rate region as subset-indexed bounds, stored for all
// nonempty S in increasing bitmask order (index mask-1). Clamped bounds
// define the region; the unclamped values are kept for diagnostics.
class RegionSpec {
public:
    RegionSpec(RegionKind kind, int num_users, double delta, std::vector<double> clamped,
               std::vector<double> unclamped)
        : kind_(kind),
          num_users_(num_users),
          delta_(delta),
          clamped_(std::move(clamped)),
          unclamped_(std::move(unclamped)) {
        const std::size_t expected = (1u << num_users_) - 1u;
        if (clamped_.size() != expected || unclamped_.size() != expected)
            throw DimensionError("region bounds must cover all nonempty subsets");
    }

    RegionKind kind() const { return kind_; }
    int num_users() const { return num_users_; }
    double delta() const { return delta_; }

    double bound(UserSet s) const { return clamped_[index(s)]; }
    double unclamped_bound(UserSet s) const { return unclamped_[index(s)]; }
    const std::vector<double>& bounds() const { return clamped_; }

private:
    std::size_t index(UserSet s) const {
        if (s.empty() || !s.is_subset_of(UserSet::all(num_users_)))
            throw DimensionError("bound queried for an invalid user subset");
        return s.mask() - 1u;
    }

    RegionKind kind_;
    int num_users_;
    double delta_;
    std::vector<double> clamped_;
    std::vector<double> unclamped_;
};

namespace detail {
template <typename SecrecyTerm>
RegionSpec build_region(const StandardChannel& ch, RegionKind kind, double delta,
                        SecrecyTerm&& secrecy_term) {
    std::vector<double> clamped, unclamped;
    const auto subsets = nonempty_subsets(ch.num_users());
    clamped.reserve(subsets.size());
    unclamped.reserve(subsets.size());
    for (UserSet s : subsets) {
        const double cm = main_capacity(ch, s);
        double raw = cm;
        if (delta > 0.0) raw = std::min(cm, (cm - secrecy_term(s)) / delta);
        unclamped.push_back(raw);
        clamped.push_back(std::max(0.0, raw));
    }
    return RegionSpec(kind, ch.num_users(), delta, std::move(clamped), std::move(unclamped));
}
}  // namespace detail

// Baseline multiple-access region with no secrecy constraint.
inline RegionSpec gmac_region(const StandardChannel& ch) {
    return detail::build_region(ch, RegionKind::gmac_baseline, 0.0, [](UserSet) { return 0.0; });
}

// Superposition-coding region under individual secrecy constraints: each
// subset's secrecy term is the sum of its members' single-user eavesdropper
// capacities.
inline RegionSpec individual_region(const StandardChannel& ch, SecrecyLevel delta) {
    return detail::build_region(ch, RegionKind::individual, delta.value(), [&](UserSet s) {
        double sum = 0.0;
        s.for_each_user([&](int k) { sum += wiretap_capacity(ch, UserSet::single(k)); });
        return sum;
    });
}

// Superposition-coding region under collective secrecy constraints.
inline RegionSpec collective_region(const StandardChannel& ch, SecrecyLevel delta) {
    return detail::build_region(ch, RegionKind::collective, delta.value(), [&](UserSet s) {
        return wiretap_capacity_interference(ch, s);
    });
}

// True iff R_S <= b_S + tol for every nonempty subset S.
inline bool region_contains(const RegionSpec& region, const RatePoint& point, double tol) {
    if (point.num_users() != region.num_users())
        throw DimensionError("rate point has " + std::to_string(point.num_users()) +
                             " users, region has " + std::to_string(region.num_users()));
    for (UserSet s : nonempty_subsets(region.num_users()))
        if (point.subset_sum(s) > region.bound(s) + tol) return false;
    return true;
}

// ---------------------------------------------------------------------------
// TDMA: user k transmits a fraction alpha_k of the time with boosted power
// P_k / alpha_k, running a single-user wiretap code.
// ---------------------------------------------------------------------------

struct TdmaSchedule {
    std::vector<double> fractions;

    explicit TdmaSchedule(std::vector<double> f) : fractions(std::move(f)) {
        double sum = 0.0;
        for (double a : fractions) {
            if (!(a >= 0.0 && a <= 1.0))
                throw std::invalid_argument("time-share fractions must lie in [0,1]");
            sum += a;
        }
        if (std::abs(sum - 1.0) > 1e-12)
            throw std::invalid_argument("time-share fractions must sum to 1, got " +
                                        std::to_string(sum));
    }
};

// Maximum rate of user k under time share alpha: the smaller of the secrecy
// bound (alpha/2delta) log2((alpha+P)/(alpha+hP)) and the decodability bound
// (alpha/2) log2(1+P/alpha). alpha = 0 yields 0 (continuity limit); delta = 0
// leaves only the decodability bound.
inline double tdma_user_bound(const StandardChannel& ch, SecrecyLevel delta, double alpha,
                              int user) {
    if (!(alpha >= 0.0 && alpha <= 1.0))
        throw std::invalid_argument("alpha must lie in [0,1], got " + std::to_string(alpha));
    if (alpha == 0.0) return 0.0;
    const double p = ch.power(user);
    const double decode = 0.5 * alpha * std::log2(1.0 + p / alpha);
    if (delta.value() == 0.0) return decode;
    const double secrecy = alpha / (2.0 * delta.value()) *
                           std::log2((alpha + p) / (alpha + ch.wiretap_gain() * p));
    return std::min(secrecy, decode);
}

inline double tdma_sum_rate(const StandardChannel& ch, SecrecyLevel delta,
                            const TdmaSchedule& schedule) {
    if (static_cast<int>(schedule.fractions.size()) != ch.num_users())
        throw DimensionError("schedule size does not match the number of users");
    double sum = 0.0;
    for (int k = 0; k < ch.num_users(); ++k)
        sum += tdma_user_bound(ch, delta, schedule.fractions[static_cast<std::size_t>(k)], k);
    return sum;
}

// Optimal time shares are proportional to power: alpha_k = P_k / P_total.
inline TdmaSchedule tdma_optimal_schedule(const StandardChannel& ch) {
    const double total = ch.total_power();
    std::vector<double> fractions;
    fractions.reserve(static_cast<std::size_t>(ch.num_users()));
    for (double p : ch.powers()) fractions.push_back(p / total);
    return TdmaSchedule(std::move(fractions));
}

// Maximum TDMA sum rate: min{ C_K, (C_K - Cw_K) / delta }.
inline double tdma_max_sum_rate(const StandardChannel& ch, SecrecyLevel delta) {
    const UserSet all = UserSet::all(ch.num_users());
    const double cm = main_capacity(ch, all);
    if (delta.value() == 0.0) return cm;
    return std::min(cm, (cm - wiretap_capacity(ch, all)) / delta.value());
}

inline constexpr double tdma_bisection_tolerance = 1e-10;

// Membership in the union over schedules. The per-user bound is strictly
// increasing in alpha (P_k > 0, h < 1), so the minimal alpha_k achieving R_k
// is found by bisection; the point is a member iff the minimal fractions fit
// into one time unit.
inline bool tdma_contains(const StandardChannel& ch, SecrecyLevel delta, const RatePoint& point,
                          double tol) {
    if (point.num_users() != ch.num_users())
        throw DimensionError("rate point dimension does not match the channel");
    double fraction_sum = 0.0;
    for (int k = 0; k < ch.num_users(); ++k) {
        const double target = point.rates[static_cast<std::size_t>(k)];
        if (target <= 0.0) continue;
        const double full = tdma_user_bound(ch, delta, 1.0, k);
        if (target > full + tol) return false;  // full airtime is not enough
        if (target >= full) {
            fraction_sum += 1.0;
            continue;
        }
        double lo = 0.0, hi = 1.0;
        while (hi - lo > tdma_bisection_tolerance) {
            const double mid = 0.5 * (lo + hi);
            (tdma_user_bound(ch, delta, mid, k) >= target ? hi : lo) = mid;
        }
        fraction_sum += hi;
    }
    return fraction_sum <= 1.0 + tol;
}

// ---------------------------------------------------------------------------
// Secrecy sum capacity and its piecewise form.
// ---------------------------------------------------------------------------

enum class SumCapacityBranch { decodability, secrecy };

struct SumCapacityResult {
    double value;
    SumCapacityBranch branch;
    double threshold;  // delta* below which decodability is the binding term
};

// C_sum = min{ C_K, (C_K - Cw_K)/delta }, written as a piecewise function of
// delta with breakpoint delta* = 1 - log2(1+hP_K)/log2(1+P_K).
inline SumCapacityResult sum_capacity(const StandardChannel& ch, SecrecyLevel delta) {
    const double pk = ch.total_power();
    const double h = ch.wiretap_gain();
    const double threshold = 1.0 - std::log2(1.0 + h * pk) / std::log2(1.0 + pk);
    if (delta.value() <= threshold)
        return {0.5 * std::log2(1.0 + pk), SumCapacityBranch::decodability, threshold};
    return {0.5 / delta.value() * std::log2((1.0 + pk) / (1.0 + h * pk)),
            SumCapacityBranch::secrecy, threshold};
}

// ---------------------------------------------------------------------------
// Entropy-gap bound (converse machinery, per-symbol form).
// ---------------------------------------------------------------------------

// Lower bound on the per-symbol eavesdropper entropy given a per-symbol
// receiver entropy xi: 1/2 log2(2 pi e (1-h) + h 2^(2 xi)). Requires
// 0 < h < 1.
inline double wiretap_entropy_floor(double xi, double h) {
    if (!(h > 0.0 && h < 1.0))
        throw std::invalid_argument("entropy floor requires h in (0,1), got " + std::to_string(h));
    const double two_pi_e = 2.0 * std::numbers::pi * std::numbers::e;
    return 0.5 * std::log2(two_pi_e * (1.0 - h) + h * std::exp2(2.0 * xi));
}

// Per-symbol bound on h(Y) - h(Z) when h(Y) = xi per symbol. Nondecreasing
// in xi; at xi = 1/2 log2(2 pi e (1+P_K)) it equals C_K - Cw_K.
inline double entropy_gap(double xi, double h) { return xi - wiretap_entropy_floor(xi, h); }

inline double entropy_gap_bound(const StandardChannel& ch) {
    const UserSet all = UserSet::all(ch.num_users());
    return main_capacity(ch, all) - wiretap_capacity(ch, all);
}

// ---------------------------------------------------------------------------
// 2-D polygons (K = 2 only).
// ---------------------------------------------------------------------------

namespace detail {
inline void require_two_users(int num_users, const char* what) {
    if (num_users != 2)
        throw DimensionError(std::string(what) + " supports K = 2 only, got K = " +
                             std::to_string(num_users));
}
}  // namespace detail

// The polygon {R >= 0, R1 <= b1, R2 <= b2, R1+R2 <= b12} in counterclockwise
// order. Degenerate vertices merge; an all-zero region is the origin point.
inline Polygon2D boundary_polygon_2d(const RegionSpec& region) {
    detail::require_two_users(region.num_users(), "boundary_polygon_2d");
    const double b1 = region.bound(UserSet(0b01));
    const double b2 = region.bound(UserSet(0b10));
    const double b12 = region.bound(UserSet(0b11));

    std::vector<Point2> v;
    v.push_back({0.0, 0.0});
    if (b12 >= b1 + b2) {  // sum constraint inactive: rectangle
        v.push_back({b1, 0.0});
        v.push_back({b1, b2});
        v.push_back({0.0, b2});
    } else {
        v.push_back({std::min(b1, b12), 0.0});
        if (b1 < b12) v.push_back({b1, b12 - b1});
        if (b2 < b12) v.push_back({b12 - b2, b2});
        v.push_back({0.0, std::min(b2, b12)});
    }

    std::vector<Point2> merged;
    for (const Point2& p : v)
        if (merged.empty() || distance(merged.back(), p) > vertex_merge_tolerance)
            merged.push_back(p);
    while (merged.size() > 1 && distance(merged.front(), merged.back()) <= vertex_merge_tolerance)
        merged.pop_back();
    return Polygon2D{std::move(merged)};
}

inline constexpr int default_alpha_resolution = 2048;

// Samples of the TDMA boundary curve (R1max(alpha), R2max(1-alpha)) over a
// uniform alpha grid, including both endpoints.
inline std::vector<Point2> tdma_boundary_samples(const StandardChannel& ch, SecrecyLevel delta,
                                                 int resolution = default_alpha_resolution) {
    detail::require_two_users(ch.num_users(), "tdma_boundary_samples");
    if (resolution < 2) throw std::invalid_argument("resolution must be >= 2");
    std::vector<Point2> pts;
    pts.reserve(static_cast<std::size_t>(resolution));
    for (int i = 0; i < resolution; ++i) {
        const double alpha = static_cast<double>(i) / (resolution - 1);
        pts.push_back({tdma_user_bound(ch, delta, alpha, 0),
                       tdma_user_bound(ch, delta, 1.0 - alpha, 1)});
    }
    return pts;
}

// TDMA region polygon: convex hull of the boundary curve closed with the
// origin. (The per-user bound is concave in alpha, so the region is convex
// and the hull only canonicalizes the sample list.)
inline Polygon2D tdma_polygon_2d(const StandardChannel& ch, SecrecyLevel delta,
                                 int resolution = default_alpha_resolution) {
    auto pts = tdma_boundary_samples(ch, delta, resolution);
    pts.push_back({0.0, 0.0});
    return convex_hull(std::move(pts));
}

// Convex closure of the union of the individual-constraint region and the
// TDMA region: hull of the individual polygon's vertices together with a
// dense sampling of the TDMA boundary, closed with the axes.
inline Polygon2D union_region_hull_2d(const StandardChannel& ch, SecrecyLevel delta,
                                      int resolution = default_alpha_resolution) {
    detail::require_two_users(ch.num_users(), "union_region_hull_2d");
    auto pts = tdma_boundary_samples(ch, delta, resolution);
    const Polygon2D individual = boundary_polygon_2d(individual_region(ch, delta));
    pts.insert(pts.end(), individual.vertices.begin(), individual.vertices.end());
    pts.push_back({0.0, 0.0});
    return convex_hull(std::move(pts));
}

}  // namespace gmacwt
