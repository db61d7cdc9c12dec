#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace gmacwt {

// Standardized wiretap gains differ between users beyond tolerance.
struct NotDegradedError : std::runtime_error {
    explicit NotDegradedError(const std::string& what) : std::runtime_error(what) {}
};

// Common wiretap gain is >= 1: the eavesdropper is at least as strong as the
// intended receiver and secret communication is impossible.
struct NotDegradableError : std::runtime_error {
    explicit NotDegradableError(const std::string& what) : std::runtime_error(what) {}
};

// Operation requested for an unsupported number of users (e.g. 2-D polygon
// exports for K != 2, or exhaustive subset enumeration beyond the K cap).
struct DimensionError : std::runtime_error {
    explicit DimensionError(const std::string& what) : std::runtime_error(what) {}
};

// Exact enumeration (ML decoding, posterior equivocation) requested for a
// codebook set whose composite size exceeds the enumeration cap.
struct CapExceededError : std::runtime_error {
    explicit CapExceededError(const std::string& what) : std::runtime_error(what) {}
};

// A rate point cannot be split into secret/open/randomization components.
// `violated_subset` is the bitmask of the user subset whose constraint failed.
struct InfeasibleRateError : std::runtime_error {
    std::uint32_t violated_subset;
    InfeasibleRateError(const std::string& what, std::uint32_t subset)
        : std::runtime_error(what), violated_subset(subset) {}
};

}  // namespace gmacwt
