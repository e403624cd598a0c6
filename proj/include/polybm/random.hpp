#pragma once

#include <cstdint>
#include <random>

namespace polybm {

/// Independent Gaussian stream identified by (seed, stream, substream).
/// Two streams with the same triple produce identical sequences, so a
/// Monte Carlo path's randomness depends only on its index, never on which
/// worker ran it.
class RandomStream {
public:
    RandomStream(std::uint64_t seed, std::uint64_t stream, std::uint64_t substream = 0);

    double normal() { return normal_(engine_); }
    double normal(double stddev) { return stddev * normal_(engine_); }

private:
    std::mt19937_64 engine_;
    std::normal_distribution<double> normal_{0.0, 1.0};
};

}  // namespace polybm
