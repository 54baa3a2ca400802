#pragma once

#include <complex>
#include <cstdint>
#include <limits>
#include <random>

namespace risnet {

std::uint64_t splitmix64_mix(std::uint64_t z);

// Counter-based generator: output i is mix(key + i * golden). Substreams for
// distinct (seed, index) pairs get unrelated keys, so trial results do not
// depend on which worker ran them.
class RandomStream {
public:
    using result_type = std::uint64_t;

    explicit RandomStream(std::uint64_t seed) : key_(splitmix64_mix(seed)) {}
    static RandomStream substream(std::uint64_t master_seed, std::uint64_t index);

    static constexpr result_type min() { return 0; }
    static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }
    result_type operator()();

    // uniform on [0, 1)
    double uniform();
    // uniform on (0, 1]
    double uniform_open_zero() { return 1.0 - uniform(); }
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
    double normal();
    // CN(0, 1): independent real and imaginary parts with variance 1/2
    std::complex<double> complex_gaussian();

private:
    std::uint64_t key_;
    std::uint64_t counter_ = 0;
    std::normal_distribution<double> normal_;
};

}  // namespace risnet
