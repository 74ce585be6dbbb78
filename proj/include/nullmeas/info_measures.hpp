/**
 * @file
 * @brief Static information quantities of a null-result record at one scaled time.
 *
 * All entropies are in bits. The conventions 0 log 0 = 0 and 0 log(0/0) = 0
 * apply; probabilities below ::nullmeas::log_guard count as zero.
 */

#pragma once

#include "nullmeas/distribution.hpp"
#include "nullmeas/measurement.hpp"

#include <algorithm>  // std::max
#include <cmath>
#include <cstddef>
#include <span>

namespace nullmeas {

/// Shannon entropy -sum p log2 p.
[[nodiscard]] inline double shannon_entropy(std::span<const double> probs) noexcept {
    double h = 0.0;
    for (const double p : probs) {
        if (p > log_guard) {
            h -= p * std::log2(p);
        }
    }
    return h;
}

[[nodiscard]] inline double shannon_entropy(const LevelDistribution &dist) noexcept {
    return shannon_entropy(dist.probs());
}

/// D(p || q) in bits over the support of p; q must cover that support.
[[nodiscard]] inline double kl_divergence(std::span<const double> p, std::span<const double> q) noexcept {
    double d = 0.0;
    for (std::size_t n = 0; n < p.size(); ++n) {
        if (p[n] > log_guard && q[n] > 0.0) {
            d += p[n] * std::log2(p[n] / q[n]);
        }
    }
    // rounding floor; the exact value is non-negative
    return std::max(d, 0.0);
}

/// Information gain of the null record, H(X) - H(X | y0). May be negative.
[[nodiscard]] inline double info_gain(const LevelDistribution &prior, ScaledTime tau) {
    return shannon_entropy(prior) - shannon_entropy(posterior_null(prior, tau));
}

/**
 * Outcome-averaged information gain I(X:Y) over the binary {null, click}
 * ensemble, written as p_null D(post_null || prior) + p_click D(post_click || prior)
 * so each term is non-negative. Zero at tau = 0 by continuity.
 */
[[nodiscard]] inline double mutual_information(const LevelDistribution &prior, ScaledTime tau) {
    if (tau.value() == 0.0) {
        return 0.0;
    }
    const auto ensemble = outcome_ensemble(prior, tau);
    double mi = ensemble.p_null * kl_divergence(ensemble.posterior_null.probs(), prior.probs());
    if (ensemble.posterior_click) {
        mi += ensemble.p_click * kl_divergence(ensemble.posterior_click->probs(), prior.probs());
    }
    return mi;
}

/// Bhattacharyya overlap sum_n sqrt(p(x_n) p(x_n | y0)).
[[nodiscard]] inline double fidelity(const LevelDistribution &prior, ScaledTime tau) {
    const auto post = posterior_null(prior, tau);
    double f = 0.0;
    for (std::size_t n = 0; n < prior.levels(); ++n) {
        f += std::sqrt(prior[n] * post[n]);
    }
    return std::min(f, 1.0);
}

/**
 * Success probability of undoing the null record, e^{-N tau} / p(y0), where
 * N is the declared truncation (vector length minus one) even if its entry is 0.
 */
[[nodiscard]] inline double reversal_probability(const LevelDistribution &prior, ScaledTime tau) {
    const auto w = detail::shifted_null_weights(prior, tau);
    const auto gap = static_cast<double>(prior.max_excitation() - w.shift);
    return std::exp(-gap * tau.value()) / w.sum;
}

/// D(p(x | y0) || p(x)) in bits.
[[nodiscard]] inline double relative_entropy(const LevelDistribution &prior, ScaledTime tau) {
    return kl_divergence(posterior_null(prior, tau).probs(), prior.probs());
}

/// Every static quantity evaluated at one tau.
struct InfoSnapshot {
    ScaledTime tau;
    double p_null{1.0};
    double entropy_prior{0.0};
    double entropy_posterior_null{0.0};
    double info_gain{0.0};
    double mutual_info{0.0};
    double fidelity{1.0};
    double p_rev{1.0};
    double rel_entropy{0.0};
};

[[nodiscard]] inline InfoSnapshot snapshot(const LevelDistribution &prior, ScaledTime tau) {
    const auto post = posterior_null(prior, tau);
    InfoSnapshot s;
    s.tau = tau;
    s.p_null = null_probability(prior, tau);
    s.entropy_prior = shannon_entropy(prior);
    s.entropy_posterior_null = shannon_entropy(post);
    s.info_gain = s.entropy_prior - s.entropy_posterior_null;
    s.mutual_info = mutual_information(prior, tau);
    s.fidelity = fidelity(prior, tau);
    s.p_rev = reversal_probability(prior, tau);
    s.rel_entropy = kl_divergence(post.probs(), prior.probs());
    return s;
}

}  // namespace nullmeas
