/**
 * @file
 * @brief Validated value types shared by every part of the library: the
 *        photon-number distribution and the dimensionless scaled time.
 */

#pragma once

#include <cmath>      // std::isfinite, std::abs
#include <cstddef>    // std::size_t
#include <initializer_list>
#include <numeric>    // std::accumulate
#include <span>
#include <stdexcept>  // std::invalid_argument, std::domain_error
#include <string>
#include <vector>

namespace nullmeas {

/// Raised when an input distribution or time violates its invariants.
class ValidationError : public std::invalid_argument {
  public:
    using std::invalid_argument::invalid_argument;
};

/// Raised when a requested outcome branch has probability zero.
class DegenerateOutcomeError : public std::domain_error {
  public:
    using std::domain_error::domain_error;
};

/// Raised when a derived quantity needed as a reference vanishes (e.g. I_max <= 0).
class DegenerateInputError : public std::domain_error {
  public:
    using std::domain_error::domain_error;
};

/// Tolerance on the sum of a user-supplied distribution before renormalization.
inline constexpr double ingest_sum_tolerance = 1e-9;

/// Probabilities below this are treated as exact zeros inside log sums.
inline constexpr double log_guard = 1e-300;

/**
 * @brief Probability vector p(x_n) over photon numbers n = 0..N.
 *
 * Construction validates (finite, non-negative, at least two levels, sum
 * within ::ingest_sum_tolerance of one) and then renormalizes so the stored
 * entries sum to one at machine precision.
 */
class LevelDistribution {
  public:
    explicit LevelDistribution(std::vector<double> probs) : probs_{std::move(probs)} {
        if (probs_.size() < 2) {
            throw ValidationError{"distribution needs at least two levels, got " + std::to_string(probs_.size())};
        }
        double sum = 0.0;
        for (std::size_t n = 0; n < probs_.size(); ++n) {
            const double p = probs_[n];
            if (!std::isfinite(p) || p < 0.0) {
                throw ValidationError{"entry " + std::to_string(n) + " is negative or not finite"};
            }
            sum += p;
        }
        if (std::abs(sum - 1.0) > ingest_sum_tolerance) {
            throw ValidationError{"entries sum to " + std::to_string(sum) + ", expected 1"};
        }
        // already normalized to rounding: keep the bits so re-ingestion is the identity
        if (std::abs(sum - 1.0) > 4.0 * static_cast<double>(probs_.size()) * 0x1.0p-53) {
            for (double &p : probs_) {
                p /= sum;
            }
        }
    }

    LevelDistribution(std::initializer_list<double> probs) : LevelDistribution{std::vector<double>(probs)} {}

    [[nodiscard]] std::span<const double> probs() const noexcept { return probs_; }
    [[nodiscard]] const std::vector<double> &values() const noexcept { return probs_; }
    [[nodiscard]] double operator[](std::size_t n) const { return probs_[n]; }

    /// Number of levels, N + 1.
    [[nodiscard]] std::size_t levels() const noexcept { return probs_.size(); }
    /// Maximum excitation number N of the declared truncation (top entry may be zero).
    [[nodiscard]] std::size_t max_excitation() const noexcept { return probs_.size() - 1; }

    /// Index of the lowest level carrying non-zero weight.
    [[nodiscard]] std::size_t lowest_occupied() const noexcept {
        std::size_t n = 0;
        while (n + 1 < probs_.size() && probs_[n] == 0.0) {
            ++n;
        }
        return n;
    }

    [[nodiscard]] double mean() const noexcept {
        double m = 0.0;
        for (std::size_t n = 0; n < probs_.size(); ++n) {
            m += static_cast<double>(n) * probs_[n];
        }
        return m;
    }

    [[nodiscard]] static LevelDistribution uniform(std::size_t levels) {
        if (levels < 2) {
            throw ValidationError{"distribution needs at least two levels"};
        }
        return LevelDistribution{std::vector<double>(levels, 1.0 / static_cast<double>(levels))};
    }

    friend bool operator==(const LevelDistribution &, const LevelDistribution &) = default;

  private:
    struct normalized_tag {};
    LevelDistribution(normalized_tag, std::vector<double> probs) : probs_{std::move(probs)} {}

    // Internal constructor for already-normalized weights produced by the
    // measurement update; skips the ingestion tolerance but still renormalizes.
    friend LevelDistribution normalize_weights(std::vector<double> weights);

    std::vector<double> probs_;
};

/// Normalizes a non-negative weight vector with a positive sum into a distribution.
inline LevelDistribution normalize_weights(std::vector<double> weights) {
    const double sum = std::accumulate(weights.begin(), weights.end(), 0.0);
    if (!(sum > 0.0) || !std::isfinite(sum)) {
        throw DegenerateOutcomeError{"weights have no positive mass"};
    }
    for (double &w : weights) {
        w /= sum;
    }
    return LevelDistribution{LevelDistribution::normalized_tag{}, std::move(weights)};
}

/// Dimensionless scaled time tau = 2 * gamma * t; finite and non-negative.
class ScaledTime {
  public:
    constexpr ScaledTime() noexcept = default;

    explicit ScaledTime(double tau) : tau_{tau} {
        if (!std::isfinite(tau) || tau < 0.0) {
            throw ValidationError{"scaled time must be finite and non-negative, got " + std::to_string(tau)};
        }
    }

    [[nodiscard]] constexpr double value() const noexcept { return tau_; }

    friend constexpr auto operator<=>(const ScaledTime &, const ScaledTime &) = default;

  private:
    double tau_{0.0};
};

}  // namespace nullmeas
