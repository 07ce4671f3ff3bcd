#pragma once

#include <cstdint>

namespace rwt {

/// Counter-based generator: output i of stream s is a SplitMix64-style
/// finaliser applied to (key(seed, s), i). Streams are independent of the
/// order in which they are consumed, which keeps parallel simulations
/// reproducible.
class CounterRng {
public:
    CounterRng(std::uint64_t seed, std::uint64_t stream);

    std::uint64_t next_u64();
    /// Uniform on the open interval (0, 1).
    double uniform();
    /// Uniform integer in [0, n).
    std::uint64_t below(std::uint64_t n);

    std::uint64_t counter() const { return counter_; }

private:
    std::uint64_t key_;
    std::uint64_t counter_ = 0;
};

std::uint64_t mix64(std::uint64_t z);

}  // namespace rwt
