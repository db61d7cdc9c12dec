#pragma once

// Desk-scale realization of the superposition coding schemes: every user
// splits its rate into secret, open and randomization components, draws one
// Gaussian codebook per component, and transmits the sum of the three
// selected codewords. Decoding is exact maximum-likelihood by exhaustive
// search and equivocation is measured from the exact posterior over message
// tuples, so instances are capped at a small composite codebook size.
//
// Rate-to-size rounding is conservative: M = 2^ceil(n R), never below one
// codeword. The asymptotic guarantees (vanishing error, equivocation ->
// delta) are not reproducible at desk scale; only finite-n trends and
// orderings are meaningful here.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "gmacwt/channel.hpp"
#include "gmacwt/errors.hpp"
#include "gmacwt/parallel.hpp"
#include "gmacwt/rates.hpp"
#include "gmacwt/regions.hpp"
#include "gmacwt/rng.hpp"

namespace gmacwt {

inline constexpr int enumeration_cap = 4096;  // max composite codewords for exact paths

enum class SecrecyMode { individual, collective };

inline std::string to_string(SecrecyMode mode) {
    return mode == SecrecyMode::individual ? "individual" : "collective";
}

// ---------------------------------------------------------------------------
// Rate splitting.
// ---------------------------------------------------------------------------

struct UserSplit {
    double rate = 0.0;             // R_k, the user's message rate
    double secret_fraction = 0.0;  // mu_k in [delta, 1]
    double secret_rate = 0.0;      // mu_k R_k
    double open_rate = 0.0;        // (1 - mu_k) R_k
    double randomization_rate = 0.0;
};

struct SplitRates {
    SecrecyMode mode = SecrecyMode::collective;
    double delta = 0.0;
    std::vector<UserSplit> users;

    double total_rate(int k) const {
        const UserSplit& u = users[static_cast<std::size_t>(k)];
        return u.rate + u.randomization_rate;  // R_k + R_kx = R_ks + R_k0 + R_kx
    }
};

namespace detail {

// Greedy maximal filling of x >= 0 subject to sum_{k in S} x_k <= caps(S)
// for every nonempty S. caps must be submodular (here: C_S - R_S), which
// makes the greedy total the maximum attainable.
inline std::vector<double> greedy_fill(int num_users, const std::vector<double>& caps,
                                       std::uint32_t* binding_subset) {
    std::vector<double> x(static_cast<std::size_t>(num_users), 0.0);
    for (int k = 0; k < num_users; ++k) {
        double room = caps[(1u << k) - 1u];
        *binding_subset = 1u << k;
        for (std::uint32_t m = 1; m < (1u << num_users); ++m) {
            if (!((m >> k) & 1u)) continue;
            double used = 0.0;
            UserSet(m).for_each_user([&](int j) {
                if (j != k) used += x[static_cast<std::size_t>(j)];
            });
            const double slack = caps[m - 1u] - used;
            if (slack < room) {
                room = slack;
                *binding_subset = m;
            }
        }
        x[static_cast<std::size_t>(k)] = std::max(0.0, room);
    }
    return x;
}

}  // namespace detail

// Splits a rate point strictly inside the chosen region into per-user
// secret/open/randomization rates. The secret fraction mu is uniform across
// users: it starts at delta and is raised just enough to keep every
// randomization rate nonnegative under the scheme's equality constraints
// (per-user open+randomization = Cw_k in individual mode; summed over users
// = Cw_K in collective mode). Collective mode distributes the randomization
// budget by greedy maximal filling against the per-subset decodability caps,
// scaled back to the exact budget.
inline SplitRates split_rates(const StandardChannel& ch, SecrecyLevel delta,
                              const RatePoint& point, SecrecyMode mode) {
    if (point.num_users() != ch.num_users())
        throw DimensionError("rate point dimension does not match the channel");
    const int num_users = ch.num_users();
    const UserSet all = UserSet::all(num_users);
    const RegionSpec region = mode == SecrecyMode::individual ? individual_region(ch, delta)
                                                              : collective_region(ch, delta);
    constexpr double margin = 1e-6;
    for (UserSet s : nonempty_subsets(num_users))
        if (point.subset_sum(s) > region.bound(s) - margin)
            throw InfeasibleRateError(
                "rate point is not strictly inside the " + to_string(region.kind()) +
                    " region: subset mask " + std::to_string(s.mask()) + " has sum " +
                    std::to_string(point.subset_sum(s)) + " vs bound " +
                    std::to_string(region.bound(s)),
                s.mask());

    std::vector<double> single_cw(static_cast<std::size_t>(num_users));
    for (int k = 0; k < num_users; ++k)
        single_cw[static_cast<std::size_t>(k)] = wiretap_capacity(ch, UserSet::single(k));
    const double cw_all = wiretap_capacity(ch, all);
    const double rate_all = point.subset_sum(all);

    // Uniform secret fraction, raised until the equality constraints admit
    // nonnegative randomization rates.
    double mu = delta.value();
    if (mode == SecrecyMode::individual) {
        for (int k = 0; k < num_users; ++k) {
            const double r = point.rates[static_cast<std::size_t>(k)];
            if (r > 0.0) mu = std::max(mu, 1.0 - single_cw[static_cast<std::size_t>(k)] / r);
        }
    } else if (rate_all > 0.0) {
        mu = std::max(mu, 1.0 - cw_all / rate_all);
    }
    mu = std::min(mu, 1.0);

    SplitRates split{mode, delta.value(), {}};
    split.users.resize(static_cast<std::size_t>(num_users));
    for (int k = 0; k < num_users; ++k) {
        UserSplit& u = split.users[static_cast<std::size_t>(k)];
        u.rate = point.rates[static_cast<std::size_t>(k)];
        u.secret_fraction = mu;
        u.secret_rate = mu * u.rate;
        u.open_rate = (1.0 - mu) * u.rate;
    }

    constexpr double check_tol = 1e-9;
    if (mode == SecrecyMode::individual) {
        for (int k = 0; k < num_users; ++k) {
            UserSplit& u = split.users[static_cast<std::size_t>(k)];
            u.randomization_rate = std::max(0.0, single_cw[static_cast<std::size_t>(k)] - u.open_rate);
        }
        // Secret-rate constraints per subset; the total-rate constraints
        // follow from these and the per-user equalities.
        for (UserSet s : nonempty_subsets(num_users)) {
            double lhs = 0.0, cw_sum = 0.0;
            s.for_each_user([&](int k) {
                lhs += split.users[static_cast<std::size_t>(k)].secret_rate;
                cw_sum += single_cw[static_cast<std::size_t>(k)];
            });
            if (lhs > main_capacity(ch, s) - cw_sum + check_tol)
                throw InfeasibleRateError(
                    "no uniform secret fraction in [delta,1] satisfies the individual "
                    "secret-rate constraint of subset mask " +
                        std::to_string(s.mask()),
                    s.mask());
        }
    } else {
        double open_sum = 0.0;
        for (const UserSplit& u : split.users) open_sum += u.open_rate;
        const double budget = std::max(0.0, cw_all - open_sum);

        std::vector<double> caps;
        caps.reserve((1u << num_users) - 1u);
        for (UserSet s : nonempty_subsets(num_users))
            caps.push_back(main_capacity(ch, s) - point.subset_sum(s));
        std::uint32_t binding = all.mask();
        std::vector<double> fill = detail::greedy_fill(num_users, caps, &binding);
        double fill_total = 0.0;
        for (double v : fill) fill_total += v;
        if (fill_total < budget - check_tol)
            throw InfeasibleRateError(
                "randomization budget " + std::to_string(budget) +
                    " does not fit the decodability caps (limited by subset mask " +
                    std::to_string(binding) + ")",
                binding);
        const double scale = fill_total > 0.0 ? budget / fill_total : 0.0;
        for (int k = 0; k < num_users; ++k)
            split.users[static_cast<std::size_t>(k)].randomization_rate =
                fill[static_cast<std::size_t>(k)] * scale;

        for (UserSet s : nonempty_subsets(num_users)) {
            double secret_sum = 0.0, total_sum = 0.0;
            s.for_each_user([&](int k) {
                secret_sum += split.users[static_cast<std::size_t>(k)].secret_rate;
                total_sum += split.total_rate(k);
            });
            if (secret_sum > main_capacity(ch, s) - wiretap_capacity_interference(ch, s) + check_tol)
                throw InfeasibleRateError(
                    "no uniform secret fraction in [delta,1] satisfies the collective "
                    "secret-rate constraint of subset mask " +
                        std::to_string(s.mask()),
                    s.mask());
            if (total_sum > main_capacity(ch, s) + check_tol)
                throw InfeasibleRateError(
                    "total rates exceed the decodability bound of subset mask " +
                        std::to_string(s.mask()),
                    s.mask());
        }
    }
    return split;
}

// ---------------------------------------------------------------------------
// Codebooks.
// ---------------------------------------------------------------------------

struct PowerSplit {
    double secret = 0.0;
    double open = 0.0;
    double randomization = 0.0;
};

struct Codebook {
    int size = 1;                 // number of codewords M
    int block_length = 0;         // n
    double power_share = 0.0;     // lambda
    double power_margin = 0.0;    // back-off subtracted from lambda P_k
    std::vector<double> samples;  // size x block_length, row-major

    const double* codeword(int index) const {
        return samples.data() + static_cast<std::size_t>(index) * block_length;
    }
};

struct UserCodebooks {
    Codebook secret, open, randomization;
    std::vector<double> composite;  // (Ms*M0*Mx) x n sums of the three books

    int composite_size() const { return secret.size * open.size * randomization.size; }
    int composite_index(int s, int o, int x) const {
        return (s * open.size + o) * randomization.size + x;
    }
    int message_part(int composite_idx) const { return composite_idx / randomization.size; }

    const double* composite_codeword(int index) const {
        return composite.data() + static_cast<std::size_t>(index) * secret.block_length;
    }
};

struct CodebookSet {
    int block_length = 0;
    std::uint64_t seed = 0;
    std::vector<UserCodebooks> users;
    int power_violations = 0;  // codewords whose empirical mean square exceeds lambda P_k

    // Exhaustive-enumeration caches; valid when `enumerable`.
    bool enumerable = false;
    std::uint64_t composite_total = 0;            // product of per-user composite sizes
    std::vector<double> tuple_codewords;          // composite_total x n, user 0 most significant

    int num_users() const { return static_cast<int>(users.size()); }

    // Rebuilds the per-user composite matrices and, when the product of the
    // composite sizes fits the enumeration cap, the global tuple matrix.
    // Must be called after hand-editing any codebook.
    void rebuild() {
        composite_total = 1;
        bool overflow = false;
        for (UserCodebooks& u : users) {
            const int n = block_length;
            u.secret.block_length = u.open.block_length = u.randomization.block_length = n;
            const int mt = u.composite_size();
            u.composite.assign(static_cast<std::size_t>(mt) * n, 0.0);
            for (int s = 0; s < u.secret.size; ++s)
                for (int o = 0; o < u.open.size; ++o)
                    for (int x = 0; x < u.randomization.size; ++x) {
                        double* dst = u.composite.data() +
                                      static_cast<std::size_t>(u.composite_index(s, o, x)) * n;
                        const double* cs = u.secret.codeword(s);
                        const double* co = u.open.codeword(o);
                        const double* cx = u.randomization.codeword(x);
                        for (int i = 0; i < n; ++i) dst[i] = cs[i] + co[i] + cx[i];
                    }
            if (composite_total > (1ull << 62) / static_cast<std::uint64_t>(mt)) overflow = true;
            if (!overflow) composite_total *= static_cast<std::uint64_t>(mt);
        }
        if (overflow) composite_total = std::uint64_t{1} << 62;
        enumerable = !overflow && composite_total <= enumeration_cap;
        tuple_codewords.clear();
        if (!enumerable) return;

        tuple_codewords.assign(composite_total * static_cast<std::size_t>(block_length), 0.0);
        for (std::uint64_t g = 0; g < composite_total; ++g) {
            double* dst = tuple_codewords.data() + g * static_cast<std::size_t>(block_length);
            std::uint64_t rem = g;
            for (int k = num_users() - 1; k >= 0; --k) {
                const UserCodebooks& u = users[static_cast<std::size_t>(k)];
                const int idx = static_cast<int>(rem % static_cast<std::uint64_t>(u.composite_size()));
                rem /= static_cast<std::uint64_t>(u.composite_size());
                const double* src = u.composite_codeword(idx);
                for (int i = 0; i < block_length; ++i) dst[i] += src[i];
            }
        }
    }

    // Per-user composite indices of a global tuple index (user 0 most
    // significant).
    std::vector<int> decompose(std::uint64_t tuple_index) const {
        std::vector<int> idx(users.size());
        for (int k = num_users() - 1; k >= 0; --k) {
            const std::uint64_t mt =
                static_cast<std::uint64_t>(users[static_cast<std::size_t>(k)].composite_size());
            idx[static_cast<std::size_t>(k)] = static_cast<int>(tuple_index % mt);
            tuple_index /= mt;
        }
        return idx;
    }
};

namespace detail {

inline int size_bits(int block_length, double rate) {
    const int bits = static_cast<int>(std::ceil(block_length * rate - 1e-9));
    return std::max(0, bits);
}

inline std::array<double, 3> default_power_shares(const std::array<double, 3>& rates,
                                                  const std::array<bool, 3>& populated) {
    constexpr double floor = 0.05;
    std::array<double, 3> shares{0.0, 0.0, 0.0};
    std::array<bool, 3> floored{false, false, false};
    int active = 0;
    for (bool p : populated) active += p;
    if (active == 0) return shares;
    for (;;) {
        int floored_count = 0;
        double rate_sum = 0.0;
        for (int c = 0; c < 3; ++c) {
            if (!populated[c]) continue;
            if (floored[c])
                ++floored_count;
            else
                rate_sum += rates[c];
        }
        const double remaining = 1.0 - floor * floored_count;
        bool changed = false;
        for (int c = 0; c < 3; ++c) {
            if (!populated[c]) continue;
            if (floored[c]) {
                shares[c] = floor;
                continue;
            }
            shares[c] = rate_sum > 0.0 ? remaining * rates[c] / rate_sum
                                       : remaining / (active - floored_count);
            if (shares[c] < floor) {
                floored[c] = true;
                changed = true;
            }
        }
        if (!changed) return shares;
    }
}

}  // namespace detail

// Draws the three Gaussian codebooks per user. Codeword components are
// i.i.d. N(0, lambda P_k - margin) with margin = 0.01 lambda P_k; empirical
// per-codeword power above lambda P_k is counted, not resampled (the
// constraint is an average). Identical seeds give bitwise-identical books.
inline CodebookSet generate_codebooks(
    const StandardChannel& ch, const SplitRates& split, int block_length,
    const std::optional<std::vector<PowerSplit>>& power_splits, std::uint64_t seed) {
    if (block_length < 1) throw std::invalid_argument("block length must be >= 1");
    if (static_cast<int>(split.users.size()) != ch.num_users())
        throw DimensionError("split does not match the channel's number of users");
    if (power_splits && static_cast<int>(power_splits->size()) != ch.num_users())
        throw DimensionError("power splits do not match the number of users");

    CodebookSet cb;
    cb.block_length = block_length;
    cb.seed = seed;
    cb.users.resize(split.users.size());
    for (int k = 0; k < ch.num_users(); ++k) {
        const UserSplit& us = split.users[static_cast<std::size_t>(k)];
        UserCodebooks& ucb = cb.users[static_cast<std::size_t>(k)];
        const std::array<double, 3> rates{us.secret_rate, us.open_rate, us.randomization_rate};
        std::array<Codebook*, 3> books{&ucb.secret, &ucb.open, &ucb.randomization};

        std::array<bool, 3> populated{};
        for (int c = 0; c < 3; ++c) {
            const int bits = detail::size_bits(block_length, rates[static_cast<std::size_t>(c)]);
            if (bits > 30) throw CapExceededError("codebook size 2^" + std::to_string(bits) +
                                                  " is beyond any practical enumeration");
            books[static_cast<std::size_t>(c)]->size = 1 << bits;
            populated[static_cast<std::size_t>(c)] = bits > 0;
        }

        std::array<double, 3> shares;
        if (power_splits) {
            const PowerSplit& ps = (*power_splits)[static_cast<std::size_t>(k)];
            shares = {ps.secret, ps.open, ps.randomization};
            double sum = 0.0;
            for (double v : shares) {
                if (!(v >= 0.0)) throw std::invalid_argument("power shares must be nonnegative");
                sum += v;
            }
            if (std::abs(sum - 1.0) > 1e-9)
                throw std::invalid_argument("power shares must sum to 1");
        } else {
            shares = detail::default_power_shares(rates, populated);
        }

        for (int c = 0; c < 3; ++c) {
            Codebook& book = *books[static_cast<std::size_t>(c)];
            book.block_length = block_length;
            book.power_share = shares[static_cast<std::size_t>(c)];
            const double budget = book.power_share * ch.power(k);
            book.power_margin = 0.01 * budget;
            const double stddev = std::sqrt(std::max(0.0, budget - book.power_margin));
            book.samples.assign(static_cast<std::size_t>(book.size) * block_length, 0.0);
            Rng rng(seed, RngStream::codebook, static_cast<std::uint64_t>(k) * 3 + c);
            for (double& v : book.samples) v = rng.normal(stddev);
            for (int m = 0; m < book.size; ++m) {
                double energy = 0.0;
                const double* cw = book.codeword(m);
                for (int i = 0; i < block_length; ++i) energy += cw[i] * cw[i];
                if (energy / block_length > budget) ++cb.power_violations;
            }
        }
    }
    cb.rebuild();
    return cb;
}

// ---------------------------------------------------------------------------
// Transmission and decoding.
// ---------------------------------------------------------------------------

struct UserMessage {
    int secret = 0;
    int open = 0;
    bool operator==(const UserMessage&) const = default;
};

// Uniform message draw for every user (secret then open, user order).
inline std::vector<UserMessage> draw_messages(const CodebookSet& cb, Rng& message_rng) {
    std::vector<UserMessage> msgs(cb.users.size());
    for (std::size_t k = 0; k < cb.users.size(); ++k) {
        msgs[k].secret = static_cast<int>(
            message_rng.below(static_cast<std::uint64_t>(cb.users[k].secret.size)));
        msgs[k].open = static_cast<int>(
            message_rng.below(static_cast<std::uint64_t>(cb.users[k].open.size)));
    }
    return msgs;
}

struct Transmission {
    std::vector<double> received_main;     // Y = sum_k X_k + N(0,1)
    std::vector<double> received_wiretap;  // Z = sqrt(h) Y + N(0,1-h)
    std::vector<int> composite_indices;    // realized per-user composite codeword
    std::vector<int> randomization_indices;
};

// Sends one block: each user adds the codewords selected by its message and
// a uniformly drawn randomization codeword. Randomization indices come from
// `message_rng` (user order), then `noise_rng` supplies the receiver noise
// (n draws) followed by the extra wiretap noise (n draws). `noise_scale`
// scales both noise standard deviations; zero gives a noiseless channel.
inline Transmission transmit(const CodebookSet& cb, const StandardChannel& ch,
                             const std::vector<UserMessage>& messages, Rng& message_rng,
                             Rng& noise_rng, double noise_scale = 1.0) {
    if (static_cast<int>(messages.size()) != cb.num_users() || cb.num_users() != ch.num_users())
        throw DimensionError("message tuple does not match the codebook set");
    const int n = cb.block_length;
    Transmission tx;
    tx.received_main.assign(static_cast<std::size_t>(n), 0.0);
    tx.composite_indices.resize(messages.size());
    tx.randomization_indices.resize(messages.size());

    for (std::size_t k = 0; k < messages.size(); ++k) {
        const UserCodebooks& u = cb.users[k];
        const UserMessage& m = messages[k];
        if (m.secret < 0 || m.secret >= u.secret.size || m.open < 0 || m.open >= u.open.size)
            throw std::out_of_range("message index out of range for user " + std::to_string(k));
        const int r =
            static_cast<int>(message_rng.below(static_cast<std::uint64_t>(u.randomization.size)));
        tx.randomization_indices[k] = r;
        tx.composite_indices[k] = u.composite_index(m.secret, m.open, r);
        const double* cw = u.composite_codeword(tx.composite_indices[k]);
        for (int i = 0; i < n; ++i) tx.received_main[static_cast<std::size_t>(i)] += cw[i];
    }

    for (int i = 0; i < n; ++i)
        tx.received_main[static_cast<std::size_t>(i)] += noise_rng.normal(noise_scale);
    const double h = ch.wiretap_gain();
    const double sqrt_h = std::sqrt(h);
    const double extra_std = noise_scale * std::sqrt(1.0 - h);
    tx.received_wiretap.resize(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i)
        tx.received_wiretap[static_cast<std::size_t>(i)] =
            sqrt_h * tx.received_main[static_cast<std::size_t>(i)] + noise_rng.normal(extra_std);
    return tx;
}

// Exact ML decoding: the message tuple whose composite codeword minimizes
// the distance to the received block; ties go to the lowest tuple index.
inline std::vector<UserMessage> ml_decode(const CodebookSet& cb, std::span<const double> received) {
    if (!cb.enumerable)
        throw CapExceededError("composite codebook exceeds the enumeration cap of " +
                               std::to_string(enumeration_cap));
    if (static_cast<int>(received.size()) != cb.block_length)
        throw DimensionError("received block length does not match the codebooks");
    std::uint64_t best = 0;
    double best_dist = std::numeric_limits<double>::infinity();
    for (std::uint64_t g = 0; g < cb.composite_total; ++g) {
        const double* cw = cb.tuple_codewords.data() + g * static_cast<std::size_t>(cb.block_length);
        double dist = 0.0;
        for (int i = 0; i < cb.block_length; ++i) {
            const double d = received[static_cast<std::size_t>(i)] - cw[i];
            dist += d * d;
        }
        if (dist < best_dist) {
            best_dist = dist;
            best = g;
        }
    }
    const std::vector<int> composite = cb.decompose(best);
    std::vector<UserMessage> out(cb.users.size());
    for (std::size_t k = 0; k < cb.users.size(); ++k) {
        const UserCodebooks& u = cb.users[k];
        const int msg = u.message_part(composite[k]);
        out[k] = {msg / u.open.size, msg % u.open.size};
    }
    return out;
}

// ---------------------------------------------------------------------------
// Equivocation.
// ---------------------------------------------------------------------------

struct EquivocationEstimate {
    double estimate = 1.0;
    double ci_half_width = 0.0;  // 95% normal-approximation half width
    int samples = 0;
    double message_entropy = 0.0;  // H(W_S) in bits
    bool degenerate = false;       // H(W_S) = 0; estimate is 1 by convention
    double max_normalization_error = 0.0;
    std::vector<double> sample_values;
};

namespace detail {

struct PosteriorLayout {
    std::vector<std::uint64_t> indices;  // enumerated tuple indices (subset users only
                                         // in individual mode, all users in collective)
    std::vector<int> bucket_of;          // tuple -> W_S bucket
    std::size_t bucket_count = 0;
    std::vector<int> member_users;
    std::vector<int> other_users;
};

inline PosteriorLayout make_layout(const CodebookSet& cb, UserSet subset, SecrecyMode mode) {
    PosteriorLayout layout;
    for (int k = 0; k < cb.num_users(); ++k)
        (subset.contains(k) ? layout.member_users : layout.other_users).push_back(k);

    const auto& enumerated =
        mode == SecrecyMode::collective ? [&] {
            std::vector<int> v(static_cast<std::size_t>(cb.num_users()));
            for (int k = 0; k < cb.num_users(); ++k) v[static_cast<std::size_t>(k)] = k;
            return v;
        }()
                                        : layout.member_users;

    std::uint64_t total = 1;
    for (int k : enumerated)
        total *= static_cast<std::uint64_t>(cb.users[static_cast<std::size_t>(k)].composite_size());

    layout.bucket_count = 1;
    for (int k : layout.member_users) {
        const UserCodebooks& u = cb.users[static_cast<std::size_t>(k)];
        layout.bucket_count *= static_cast<std::size_t>(u.secret.size * u.open.size);
    }

    layout.indices.resize(total);
    layout.bucket_of.resize(total);
    for (std::uint64_t g = 0; g < total; ++g) {
        layout.indices[g] = g;
        std::uint64_t rem = g;
        std::vector<int> comp(enumerated.size());
        for (std::size_t j = enumerated.size(); j-- > 0;) {
            const UserCodebooks& u = cb.users[static_cast<std::size_t>(enumerated[j])];
            comp[j] = static_cast<int>(rem % static_cast<std::uint64_t>(u.composite_size()));
            rem /= static_cast<std::uint64_t>(u.composite_size());
        }
        int bucket = 0;
        for (std::size_t j = 0; j < enumerated.size(); ++j) {
            const int k = enumerated[j];
            if (!subset.contains(k)) continue;
            const UserCodebooks& u = cb.users[static_cast<std::size_t>(k)];
            bucket = bucket * (u.secret.size * u.open.size) + u.message_part(comp[j]);
        }
        layout.bucket_of[g] = bucket;
    }
    return layout;
}

}  // namespace detail

// Empirical equivocation of a user subset: the mean over channel samples of
// H(posterior over W_S) / H(W_S), with the posterior computed exactly by
// summing Gaussian likelihoods over all message/randomization tuples
// consistent with each W_S value. Individual mode conditions on the realized
// codewords of the complement; collective mode marginalizes them. Z samples
// are produced by simulating the channel with the documented message and
// noise streams; the same seed therefore reuses identical samples across
// subsets and modes.
inline EquivocationEstimate estimate_equivocation(const CodebookSet& cb, const StandardChannel& ch,
                                                  UserSet subset, SecrecyMode mode, int num_samples,
                                                  std::uint64_t seed) {
    if (!subset.is_subset_of(UserSet::all(cb.num_users())))
        throw DimensionError("subset is not contained in the user set");
    if (!cb.enumerable)
        throw CapExceededError("composite codebook exceeds the enumeration cap of " +
                               std::to_string(enumeration_cap));

    EquivocationEstimate est;
    subset.for_each_user([&](int k) {
        const UserCodebooks& u = cb.users[static_cast<std::size_t>(k)];
        est.message_entropy += std::log2(static_cast<double>(u.secret.size)) +
                               std::log2(static_cast<double>(u.open.size));
    });
    if (est.message_entropy == 0.0) {
        est.degenerate = true;  // no message randomness to protect
        return est;
    }
    if (num_samples <= 0) return est;

    const detail::PosteriorLayout layout = detail::make_layout(cb, subset, mode);
    const int n = cb.block_length;
    const double sqrt_h = std::sqrt(ch.wiretap_gain());

    std::vector<double> deltas(static_cast<std::size_t>(num_samples));
    std::vector<double> norm_errors(static_cast<std::size_t>(num_samples));

    parallel_for(static_cast<std::size_t>(num_samples), [&](std::size_t sample) {
        Rng message_rng(seed, RngStream::messages, sample);
        Rng noise_rng(seed, RngStream::noise, sample);
        const auto msgs = draw_messages(cb, message_rng);
        const Transmission tx = transmit(cb, ch, msgs, message_rng, noise_rng);
        const std::vector<double>& z = tx.received_wiretap;

        // Fixed contribution of the conditioned-on complement codewords.
        std::vector<double> offset(static_cast<std::size_t>(n), 0.0);
        if (mode == SecrecyMode::individual) {
            for (int k : layout.other_users) {
                const double* cw = cb.users[static_cast<std::size_t>(k)].composite_codeword(
                    tx.composite_indices[static_cast<std::size_t>(k)]);
                for (int i = 0; i < n; ++i) offset[static_cast<std::size_t>(i)] += cw[i];
            }
        }

        std::vector<double> loglik(layout.indices.size());
        std::vector<double> scratch(static_cast<std::size_t>(n));
        for (std::size_t g = 0; g < layout.indices.size(); ++g) {
            if (mode == SecrecyMode::collective) {
                const double* cw = cb.tuple_codewords.data() + g * static_cast<std::size_t>(n);
                double dist = 0.0;
                for (int i = 0; i < n; ++i) {
                    const double d = z[static_cast<std::size_t>(i)] - sqrt_h * cw[i];
                    dist += d * d;
                }
                loglik[g] = -0.5 * dist;
            } else {
                std::fill(scratch.begin(), scratch.end(), 0.0);
                std::uint64_t rem = layout.indices[g];
                for (std::size_t j = layout.member_users.size(); j-- > 0;) {
                    const UserCodebooks& u =
                        cb.users[static_cast<std::size_t>(layout.member_users[j])];
                    const int idx =
                        static_cast<int>(rem % static_cast<std::uint64_t>(u.composite_size()));
                    rem /= static_cast<std::uint64_t>(u.composite_size());
                    const double* cw = u.composite_codeword(idx);
                    for (int i = 0; i < n; ++i) scratch[static_cast<std::size_t>(i)] += cw[i];
                }
                double dist = 0.0;
                for (int i = 0; i < n; ++i) {
                    const double d = z[static_cast<std::size_t>(i)] -
                                     sqrt_h * (scratch[static_cast<std::size_t>(i)] +
                                               offset[static_cast<std::size_t>(i)]);
                    dist += d * d;
                }
                loglik[g] = -0.5 * dist;
            }
        }

        // Log-sum-exp per W_S bucket, then normalize across buckets.
        std::vector<double> bucket_max(layout.bucket_count,
                                       -std::numeric_limits<double>::infinity());
        for (std::size_t g = 0; g < loglik.size(); ++g)
            bucket_max[static_cast<std::size_t>(layout.bucket_of[g])] =
                std::max(bucket_max[static_cast<std::size_t>(layout.bucket_of[g])], loglik[g]);
        std::vector<double> bucket_sum(layout.bucket_count, 0.0);
        for (std::size_t g = 0; g < loglik.size(); ++g) {
            const auto b = static_cast<std::size_t>(layout.bucket_of[g]);
            bucket_sum[b] += std::exp(loglik[g] - bucket_max[b]);
        }
        std::vector<double> bucket_log(layout.bucket_count);
        double total_max = -std::numeric_limits<double>::infinity();
        for (std::size_t b = 0; b < layout.bucket_count; ++b) {
            bucket_log[b] = bucket_max[b] + std::log(bucket_sum[b]);
            total_max = std::max(total_max, bucket_log[b]);
        }
        double total_sum = 0.0;
        for (double v : bucket_log) total_sum += std::exp(v - total_max);
        const double log_total = total_max + std::log(total_sum);

        double entropy = 0.0, prob_sum = 0.0;
        for (double v : bucket_log) {
            const double p = std::exp(v - log_total);
            prob_sum += p;
            if (p > 0.0) entropy -= p * std::log2(p);
        }
        deltas[sample] = entropy / est.message_entropy;
        norm_errors[sample] = std::abs(prob_sum - 1.0);
    });

    est.samples = num_samples;
    est.sample_values = std::move(deltas);
    double mean = 0.0;
    for (double v : est.sample_values) mean += v;
    mean /= num_samples;
    double var = 0.0;
    for (double v : est.sample_values) var += (v - mean) * (v - mean);
    if (num_samples > 1) var /= (num_samples - 1);
    est.estimate = mean;
    est.ci_half_width = num_samples > 1 ? 1.96 * std::sqrt(var / num_samples) : 0.0;
    for (double e : norm_errors) est.max_normalization_error = std::max(est.max_normalization_error, e);
    return est;
}

// ---------------------------------------------------------------------------
// Experiment runner.
// ---------------------------------------------------------------------------

struct ExperimentConfig {
    StandardChannel channel;
    double delta = 1.0;
    RatePoint rates;
    SecrecyMode mode = SecrecyMode::collective;
    int block_length = 4;
    int trials = 0;
    int z_samples = 0;
    std::uint64_t seed = 0;
    std::optional<std::vector<PowerSplit>> power_splits;
};

struct ErrorEstimate {
    double estimate = 0.0;
    double ci_half_width = 0.0;
    int trials = 0;
    int errors = 0;
};

struct SubsetEquivocation {
    std::uint32_t subset_mask = 0;
    EquivocationEstimate individual;
    EquivocationEstimate collective;
};

struct SimulationReport {
    SecrecyMode mode = SecrecyMode::collective;
    double delta = 0.0;
    int block_length = 0;
    int trials = 0;
    int z_samples = 0;
    std::uint64_t seed = 0;
    SplitRates split;
    std::vector<std::array<int, 3>> codebook_sizes;  // per user: secret, open, randomization
    std::vector<std::array<double, 3>> power_shares;
    int power_violations = 0;
    std::optional<ErrorEstimate> error;
    std::vector<SubsetEquivocation> equivocations;  // nonempty subsets, increasing mask
};

// Runs the full pipeline: rate split, codebook generation, Monte Carlo
// decoding-error trials and exact-posterior equivocation per subset (both
// measures). Trials run in parallel with per-index seeds; the report is
// identical for any thread count. trials = 0 / z_samples = 0 skip the
// corresponding estimates but keep the metadata.
inline SimulationReport run_experiment(const ExperimentConfig& config) {
    if (config.trials < 0 || config.z_samples < 0)
        throw std::invalid_argument("trial counts must be nonnegative");
    const StandardChannel& ch = config.channel;
    const SplitRates split =
        split_rates(ch, SecrecyLevel(config.delta), config.rates, config.mode);
    const CodebookSet cb =
        generate_codebooks(ch, split, config.block_length, config.power_splits, config.seed);

    SimulationReport report;
    report.mode = config.mode;
    report.delta = config.delta;
    report.block_length = config.block_length;
    report.trials = config.trials;
    report.z_samples = config.z_samples;
    report.seed = config.seed;
    report.split = split;
    report.power_violations = cb.power_violations;
    for (const UserCodebooks& u : cb.users) {
        report.codebook_sizes.push_back({u.secret.size, u.open.size, u.randomization.size});
        report.power_shares.push_back(
            {u.secret.power_share, u.open.power_share, u.randomization.power_share});
    }

    if (config.trials > 0) {
        if (!cb.enumerable)
            throw CapExceededError("composite codebook exceeds the enumeration cap of " +
                                   std::to_string(enumeration_cap));
        const std::uint64_t trial_seed = derive_seed(config.seed, RngStream::experiment, 1);
        std::vector<char> failed(static_cast<std::size_t>(config.trials), 0);
        parallel_for(static_cast<std::size_t>(config.trials), [&](std::size_t trial) {
            Rng message_rng(trial_seed, RngStream::messages, trial);
            Rng noise_rng(trial_seed, RngStream::noise, trial);
            const auto msgs = draw_messages(cb, message_rng);
            const Transmission tx = transmit(cb, ch, msgs, message_rng, noise_rng);
            const auto decoded = ml_decode(cb, tx.received_main);
            failed[trial] = decoded != msgs;  // randomization-index errors do not count
        });
        ErrorEstimate err;
        err.trials = config.trials;
        for (char f : failed) err.errors += f;
        err.estimate = static_cast<double>(err.errors) / config.trials;
        err.ci_half_width = 1.96 * std::sqrt(err.estimate * (1.0 - err.estimate) / config.trials);
        report.error = err;
    }

    if (config.z_samples > 0) {
        const std::uint64_t eq_seed = derive_seed(config.seed, RngStream::experiment, 2);
        for (UserSet s : nonempty_subsets(ch.num_users())) {
            SubsetEquivocation entry;
            entry.subset_mask = s.mask();
            entry.individual = estimate_equivocation(cb, ch, s, SecrecyMode::individual,
                                                     config.z_samples, eq_seed);
            entry.collective = estimate_equivocation(cb, ch, s, SecrecyMode::collective,
                                                     config.z_samples, eq_seed);
            report.equivocations.push_back(std::move(entry));
        }
    }
    return report;
}

}  // namespace gmacwt
