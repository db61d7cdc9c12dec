#pragma once

// Physical channel description of the Gaussian multiple-access wiretap
// channel and its reduction to standard form: unit-gain, unit-noise main
// channel with per-user powers P_k and a single wiretap gain h. All
// downstream rate formulas assume the standard form with 0 < h < 1
// (degraded eavesdropper), in which the wiretap signal is equivalent to
// Z = sqrt(h) * Y + noise of variance 1 - h.

#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "gmacwt/errors.hpp"

namespace gmacwt {

struct RawUser {
    double main_gain = 1.0;     // power gain towards the intended receiver
    double wiretap_gain = 0.0;  // power gain towards the eavesdropper
    double power = 1.0;         // average transmit power constraint
};

struct RawChannelConfig {
    std::vector<RawUser> users;
    double main_noise_var = 1.0;
    double wiretap_noise_var = 1.0;

    int num_users() const { return static_cast<int>(users.size()); }

    void validate() const {
        if (users.empty())
            throw std::invalid_argument("channel config: \"users\" must contain at least one user");
        if (!(main_noise_var > 0.0))
            throw std::invalid_argument("channel config: \"sigma2M\" must be > 0");
        if (!(wiretap_noise_var > 0.0))
            throw std::invalid_argument("channel config: \"sigma2W\" must be > 0");
        for (std::size_t k = 0; k < users.size(); ++k) {
            const std::string at = "channel config: \"users[" + std::to_string(k) + "].";
            if (!(users[k].main_gain > 0.0)) throw std::invalid_argument(at + "hM\" must be > 0");
            if (!(users[k].wiretap_gain >= 0.0)) throw std::invalid_argument(at + "hW\" must be >= 0");
            if (!(users[k].power > 0.0)) throw std::invalid_argument(at + "power\" must be > 0");
        }
    }
};

// Per-user result of the standard-form reduction. Codewords of the raw
// channel are multiplied by `scale` to obtain standard-form codewords.
struct StandardizedUser {
    double scale;         // sqrt(hM_k / sigma2M)
    double power;         // P_k = hM_k * raw power / sigma2M
    double wiretap_gain;  // h_k = hW_k * sigma2M / (hM_k * sigma2W)
};

inline std::vector<StandardizedUser> standardize(const RawChannelConfig& raw) {
    raw.validate();
    std::vector<StandardizedUser> out;
    out.reserve(raw.users.size());
    for (const RawUser& u : raw.users) {
        const double ratio = u.main_gain / raw.main_noise_var;
        out.push_back({std::sqrt(ratio), ratio * u.power,
                       u.wiretap_gain * raw.main_noise_var / (u.main_gain * raw.wiretap_noise_var)});
    }
    return out;
}

// Standard-form channel. Immutable after construction; safe to share across
// threads. The default constructor path requires 0 < h < 1; h = 0 (no
// eavesdropper baseline) is representable only via without_eavesdropper().
class StandardChannel {
public:
    StandardChannel(std::vector<double> powers, double wiretap_gain)
        : powers_(std::move(powers)), wiretap_gain_(wiretap_gain) {
        validate_powers();
        if (wiretap_gain_ >= 1.0)
            throw NotDegradableError("wiretap gain h = " + std::to_string(wiretap_gain_) +
                                     " >= 1: eavesdropper is not degraded");
        if (!(wiretap_gain_ > 0.0))
            throw std::invalid_argument(
                "wiretap gain must be in (0,1); use without_eavesdropper() for h = 0");
    }

    static StandardChannel without_eavesdropper(std::vector<double> powers) {
        return StandardChannel(std::move(powers), no_eavesdropper_tag{});
    }

    int num_users() const { return static_cast<int>(powers_.size()); }
    double power(int user) const { return powers_[static_cast<std::size_t>(user)]; }
    std::span<const double> powers() const { return powers_; }
    double wiretap_gain() const { return wiretap_gain_; }

    double total_power() const {
        double sum = 0.0;
        for (double p : powers_) sum += p;
        return sum;
    }

private:
    struct no_eavesdropper_tag {};
    StandardChannel(std::vector<double> powers, no_eavesdropper_tag)
        : powers_(std::move(powers)), wiretap_gain_(0.0) {
        validate_powers();
    }

    void validate_powers() const {
        if (powers_.empty()) throw std::invalid_argument("channel must have at least one user");
        for (double p : powers_)
            if (!(p > 0.0)) throw std::invalid_argument("standard-form powers must be > 0");
    }

    std::vector<double> powers_;
    double wiretap_gain_;
};

// Equal-gains check tolerance, relative to the common gain. Degradedness is
// a structural assumption, not a fit.
inline constexpr double default_gain_tolerance = 1e-9;

// Merges the per-user standardized triples into a degraded standard channel.
// All wiretap gains must agree within `tolerance` (relative); the common
// value must be < 1. A common gain of zero yields the no-eavesdropper
// baseline channel.
inline StandardChannel to_degraded_standard(std::span<const StandardizedUser> users,
                                            double tolerance = default_gain_tolerance) {
    if (users.empty()) throw std::invalid_argument("no users to merge");
    double lo = users[0].wiretap_gain, hi = users[0].wiretap_gain;
    std::vector<double> powers;
    powers.reserve(users.size());
    double gain_sum = 0.0;
    for (const StandardizedUser& u : users) {
        lo = std::min(lo, u.wiretap_gain);
        hi = std::max(hi, u.wiretap_gain);
        gain_sum += u.wiretap_gain;
        powers.push_back(u.power);
    }
    if (hi - lo > tolerance * std::max(hi, 1.0))
        throw NotDegradedError("wiretap gains differ (" + std::to_string(lo) + " .. " +
                               std::to_string(hi) + "): channel is not degraded");
    const double h = gain_sum / static_cast<double>(users.size());
    if (h >= 1.0)
        throw NotDegradableError("common wiretap gain h = " + std::to_string(h) +
                                 " >= 1: secret communication impossible");
    if (h <= 0.5 * tolerance) return StandardChannel::without_eavesdropper(std::move(powers));
    return StandardChannel(std::move(powers), h);
}

}  // namespace gmacwt
