/**
 * @file
 * @brief Null-result conditioning of a photon-number distribution.
 *
 * A null record over scaled time tau has likelihood exp(-n tau) for level n.
 * The complementary "click by tau" record has likelihood 1 - exp(-n tau).
 */

#pragma once

#include "nullmeas/distribution.hpp"

#include <cmath>
#include <cstddef>
#include <optional>
#include <vector>

namespace nullmeas {

namespace detail {

/// Null weights shifted by the lowest occupied level n0: p_n exp(-(n - n0) tau).
/// The shift keeps the sum O(1) for arbitrarily large tau.
struct ShiftedNullWeights {
    std::vector<double> weights;
    double sum{0.0};
    std::size_t shift{0};
};

[[nodiscard]] inline ShiftedNullWeights shifted_null_weights(const LevelDistribution &prior, ScaledTime tau) {
    ShiftedNullWeights out;
    out.shift = prior.lowest_occupied();
    out.weights.resize(prior.levels(), 0.0);
    for (std::size_t n = out.shift; n < prior.levels(); ++n) {
        const double w = prior[n] * std::exp(-static_cast<double>(n - out.shift) * tau.value());
        out.weights[n] = w;
        out.sum += w;
    }
    return out;
}

}  // namespace detail

/// Probability of a null record: sum_n p(x_n) exp(-n tau).
[[nodiscard]] inline double null_probability(const LevelDistribution &prior, ScaledTime tau) {
    const auto w = detail::shifted_null_weights(prior, tau);
    return std::exp(-static_cast<double>(w.shift) * tau.value()) * w.sum;
}

/// Probability of at least one click by tau, 1 - null_probability, evaluated without cancellation.
[[nodiscard]] inline double click_probability(const LevelDistribution &prior, ScaledTime tau) {
    double p = 0.0;
    for (std::size_t n = 1; n < prior.levels(); ++n) {
        p += prior[n] * -std::expm1(-static_cast<double>(n) * tau.value());
    }
    return p;
}

/// Posterior p(x_n | y0) after a null record of duration tau.
[[nodiscard]] inline LevelDistribution posterior_null(const LevelDistribution &prior, ScaledTime tau) {
    return normalize_weights(detail::shifted_null_weights(prior, tau).weights);
}

/// Mean photon number of the null posterior, sum_m m p(x_m) e^{-m tau} / p(y0).
[[nodiscard]] inline double posterior_null_mean(const LevelDistribution &prior, ScaledTime tau) {
    const auto w = detail::shifted_null_weights(prior, tau);
    double m = 0.0;
    for (std::size_t n = 0; n < w.weights.size(); ++n) {
        m += static_cast<double>(n) * w.weights[n];
    }
    return m / w.sum;
}

/**
 * @brief Posterior after a click record, p(x_n) (1 - e^{-n tau}) / p_click.
 * @throws DegenerateOutcomeError when tau == 0 or the prior has no weight above n = 0.
 */
[[nodiscard]] inline LevelDistribution posterior_click(const LevelDistribution &prior, ScaledTime tau) {
    if (tau.value() == 0.0) {
        throw DegenerateOutcomeError{"click branch has probability zero at tau = 0"};
    }
    std::vector<double> w(prior.levels(), 0.0);
    double sum = 0.0;
    for (std::size_t n = 1; n < prior.levels(); ++n) {
        w[n] = prior[n] * -std::expm1(-static_cast<double>(n) * tau.value());
        sum += w[n];
    }
    if (!(sum > 0.0)) {
        throw DegenerateOutcomeError{"click branch has probability zero for a prior supported on n = 0"};
    }
    return normalize_weights(std::move(w));
}

/// Binary outcome ensemble {null, click} at a fixed tau.
struct OutcomeEnsemble {
    double p_null{1.0};
    double p_click{0.0};
    LevelDistribution posterior_null;
    /// Absent when the click branch has zero probability.
    std::optional<LevelDistribution> posterior_click;
};

[[nodiscard]] inline OutcomeEnsemble outcome_ensemble(const LevelDistribution &prior, ScaledTime tau) {
    const double p_click = click_probability(prior, tau);
    std::optional<LevelDistribution> click;
    if (p_click > 0.0) {
        click = posterior_click(prior, tau);
    }
    return OutcomeEnsemble{null_probability(prior, tau), p_click, posterior_null(prior, tau), std::move(click)};
}

}  // namespace nullmeas
