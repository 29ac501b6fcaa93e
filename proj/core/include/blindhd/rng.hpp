#pragma once

#include <cstdint>
#include <random>

#include <Eigen/Dense>

namespace blindhd {

// Seeded draws with a fully specified uniform-to-normal transform.
// std::mt19937_64 output is pinned by the standard; the distributions in
// <random> are not, so Box-Muller is done by hand to keep identical seeds
// producing identical streams everywhere.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    // [0, 1), 53-bit resolution
    double uniform() {
        return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    // standard normal
    double normal();

    Eigen::VectorXd normal_vector(int n);

    // Deterministic sub-stream derivation (splitmix64 finalizer).
    static std::uint64_t mix(std::uint64_t seed, std::uint64_t stream);

private:
    std::mt19937_64 engine_;
    double cached_ = 0.0;
    bool has_cached_ = false;
};

} // namespace blindhd
