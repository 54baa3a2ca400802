#include "risnet/random_stream.hpp"

#include <cmath>
#include <numbers>

namespace risnet {

namespace {
constexpr std::uint64_t golden = 0x9e3779b97f4a7c15ULL;
}

std::uint64_t splitmix64_mix(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

RandomStream RandomStream::substream(std::uint64_t master_seed, std::uint64_t index) {
    return RandomStream(splitmix64_mix(master_seed + golden) ^ splitmix64_mix(index * golden + 1));
}

RandomStream::result_type RandomStream::operator()() {
    ++counter_;
    return splitmix64_mix(key_ + counter_ * golden);
}

double RandomStream::uniform() {
    return static_cast<double>((*this)() >> 11) * 0x1.0p-53;
}

double RandomStream::normal() { return normal_(*this); }

std::complex<double> RandomStream::complex_gaussian() {
    const double scale = std::numbers::sqrt2 / 2.0;
    double re = normal();
    double im = normal();
    return {scale * re, scale * im};
}

}  // namespace risnet
