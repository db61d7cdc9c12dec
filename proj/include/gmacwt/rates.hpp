#pragma once

// Subset-indexed capacity quantities that every rate region is built from:
// receiver capacity C_S = 1/2 log2(1 + P_S), eavesdropper capacity
// 1/2 log2(1 + h P_S), and the eavesdropper capacity of a subset when the
// complement's signals act as interference. Logarithms are base 2
// throughout; all quantities are in bits per channel use.

#include <bit>
#include <cmath>
#include <cstdint>
#include <vector>

#include "gmacwt/channel.hpp"
#include "gmacwt/errors.hpp"

namespace gmacwt {

// A subset of the user indices {0, ..., K-1} as a bitmask (bit k <-> user k).
// Subsets are enumerated in increasing bitmask order everywhere, which fixes
// the serialization order of region bounds.
class UserSet {
public:
    static constexpr int max_users = 16;  // cap for exhaustive 2^K enumerations

    constexpr UserSet() = default;
    constexpr explicit UserSet(std::uint32_t mask) : mask_(mask) {}

    static constexpr UserSet all(int num_users) {
        return UserSet((num_users >= 32 ? 0u : (1u << num_users)) - 1u);
    }
    static constexpr UserSet single(int user) { return UserSet(1u << user); }

    constexpr std::uint32_t mask() const { return mask_; }
    constexpr bool empty() const { return mask_ == 0; }
    constexpr int count() const { return std::popcount(mask_); }
    constexpr bool contains(int user) const { return (mask_ >> user) & 1u; }
    constexpr bool is_subset_of(UserSet other) const { return (mask_ & ~other.mask_) == 0; }
    constexpr UserSet complement(int num_users) const {
        return UserSet(all(num_users).mask_ & ~mask_);
    }
    constexpr bool operator==(const UserSet&) const = default;

    std::vector<int> users() const {
        std::vector<int> out;
        out.reserve(static_cast<std::size_t>(count()));
        for_each_user([&](int k) { out.push_back(k); });
        return out;
    }

    template <typename Fn>
    void for_each_user(Fn&& fn) const {
        for (std::uint32_t m = mask_; m != 0; m &= m - 1) fn(std::countr_zero(m));
    }

private:
    std::uint32_t mask_ = 0;
};

// All nonempty subsets of {0, ..., K-1} in increasing bitmask order.
inline std::vector<UserSet> nonempty_subsets(int num_users) {
    if (num_users < 1 || num_users > UserSet::max_users)
        throw DimensionError("subset enumeration supports 1 <= K <= 16, got K = " +
                             std::to_string(num_users));
    std::vector<UserSet> out;
    out.reserve((1u << num_users) - 1u);
    for (std::uint32_t m = 1; m < (1u << num_users); ++m) out.emplace_back(m);
    return out;
}

// Required secrecy level delta in [0,1]: 1 is perfect secrecy, 0 disables
// the secrecy constraint.
class SecrecyLevel {
public:
    explicit SecrecyLevel(double value) : value_(value) {
        if (!(value >= 0.0 && value <= 1.0))
            throw std::invalid_argument("secrecy level must lie in [0,1], got " +
                                        std::to_string(value));
    }
    double value() const { return value_; }

private:
    double value_;
};

namespace detail {
inline void check_subset(const StandardChannel& ch, UserSet s) {
    if (!s.is_subset_of(UserSet::all(ch.num_users())))
        throw DimensionError("user set mask " + std::to_string(s.mask()) +
                             " is not a subset of {0.." + std::to_string(ch.num_users() - 1) + "}");
}
}  // namespace detail

inline double subset_power(const StandardChannel& ch, UserSet s) {
    detail::check_subset(ch, s);
    double sum = 0.0;
    s.for_each_user([&](int k) { sum += ch.power(k); });
    return sum;
}

// Receiver-side capacity of a subset, 1/2 log2(1 + P_S).
inline double main_capacity(const StandardChannel& ch, UserSet s) {
    return 0.5 * std::log2(1.0 + subset_power(ch, s));
}

// Eavesdropper-side capacity of a subset, 1/2 log2(1 + h P_S).
inline double wiretap_capacity(const StandardChannel& ch, UserSet s) {
    return 0.5 * std::log2(1.0 + ch.wiretap_gain() * subset_power(ch, s));
}

// Eavesdropper-side capacity of a subset when the complement's signals are
// treated as noise: 1/2 log2(1 + h P_S / (1 + h P_{S^c})).
inline double wiretap_capacity_interference(const StandardChannel& ch, UserSet s) {
    detail::check_subset(ch, s);
    const double h = ch.wiretap_gain();
    const double ps = subset_power(ch, s);
    const double pc = subset_power(ch, s.complement(ch.num_users()));
    return 0.5 * std::log2(1.0 + h * ps / (1.0 + h * pc));
}

}  // namespace gmacwt
