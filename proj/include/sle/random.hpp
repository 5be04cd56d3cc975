#pragma once

#include <cstdint>
#include <limits>

namespace sle {

/// splitmix64 finalizer; a bijective 64-bit mixer.
constexpr std::uint64_t mix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// Order-sensitive combination of two keys.
constexpr std::uint64_t combine_keys(std::uint64_t a, std::uint64_t b) {
    return mix64(a ^ mix64(b + 0x632be59bd9b4e019ULL));
}

/// Seed for the index-th independent stream derived from a base seed.
constexpr std::uint64_t stream_seed(std::uint64_t seed, std::uint64_t index) {
    return combine_keys(mix64(seed), index);
}

/// Counter-based generator: the output sequence is a pure function of the key,
/// so a variate can be regenerated from its key alone.
class CounterRng {
public:
    using result_type = std::uint64_t;

    explicit CounterRng(std::uint64_t key) : key_(key) {}

    static constexpr result_type min() { return 0; }
    static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

    result_type operator()() { return mix64(key_ + 0x9e3779b97f4a7c15ULL * ++counter_); }

private:
    std::uint64_t key_;
    std::uint64_t counter_ = 0;
};

/// Standard normal variate determined entirely by key.
double standard_normal(std::uint64_t key);

} // namespace sle
