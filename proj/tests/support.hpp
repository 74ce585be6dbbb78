// Shared fixtures for the unit suites: benchmark priors and a random prior generator.

#pragma once

#include "nullmeas/distribution.hpp"
#include "nullmeas/threshold.hpp"

#include <cstddef>
#include <random>
#include <vector>

namespace nullmeas::test {

/// The eight benchmark priors (four qubit, four qutrit).
inline std::vector<LevelDistribution> benchmark_priors() {
    auto all = qubit_benchmark_priors();
    for (auto &p : qutrit_benchmark_priors()) {
        all.push_back(p);
    }
    return all;
}

/// Random prior with the given number of levels; occasionally zeroes an entry
/// so degenerate supports are exercised.
inline LevelDistribution random_prior(std::mt19937_64 &rng, std::size_t levels, bool allow_zeros = true) {
    std::exponential_distribution<double> expo{1.0};
    std::bernoulli_distribution zero{allow_zeros ? 0.15 : 0.0};
    std::vector<double> w(levels);
    double sum = 0.0;
    while (sum == 0.0) {
        sum = 0.0;
        for (double &x : w) {
            x = zero(rng) ? 0.0 : expo(rng);
            sum += x;
        }
    }
    for (double &x : w) {
        x /= sum;
    }
    return LevelDistribution{w};
}

/// Random prior together with a random number of levels in [2, max_levels].
inline LevelDistribution random_prior(std::mt19937_64 &rng) {
    std::uniform_int_distribution<std::size_t> levels{2, 8};
    return random_prior(rng, levels(rng));
}

inline std::vector<double> increasing_grid(double lo, double hi, std::size_t points) {
    std::vector<double> g(points);
    for (std::size_t i = 0; i < points; ++i) {
        g[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(points - 1);
    }
    return g;
}

}  // namespace nullmeas::test
