/**
 * @file
 * @brief Analytic d/dtau of information gain, fidelity and reversal probability,
 *        their tau -> 0 limits, and a finite-difference oracle over the static quantities.
 */

#pragma once

#include "nullmeas/distribution.hpp"
#include "nullmeas/info_measures.hpp"
#include "nullmeas/measurement.hpp"

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>

namespace nullmeas {

/// Selects a static quantity of info_measures.hpp as a scalar function of tau.
enum class Quantity { p_null, info_gain, mutual_info, fidelity, p_rev, rel_entropy };

[[nodiscard]] inline std::string_view to_string(Quantity q) noexcept {
    switch (q) {
        case Quantity::p_null: return "p_null";
        case Quantity::info_gain: return "info_gain";
        case Quantity::mutual_info: return "mutual_info";
        case Quantity::fidelity: return "fidelity";
        case Quantity::p_rev: return "p_rev";
        case Quantity::rel_entropy: return "rel_entropy";
    }
    return "unknown";
}

[[nodiscard]] inline double evaluate(Quantity q, const LevelDistribution &prior, ScaledTime tau) {
    switch (q) {
        case Quantity::p_null: return null_probability(prior, tau);
        case Quantity::info_gain: return info_gain(prior, tau);
        case Quantity::mutual_info: return mutual_information(prior, tau);
        case Quantity::fidelity: return fidelity(prior, tau);
        case Quantity::p_rev: return reversal_probability(prior, tau);
        case Quantity::rel_entropy: return relative_entropy(prior, tau);
    }
    throw std::invalid_argument{"unknown quantity"};
}

/// d I(0) / d tau = -sum_n q_n (n - <n>_q) log2 q_n with q the null posterior.
[[nodiscard]] inline double rate_info_gain(const LevelDistribution &prior, ScaledTime tau) {
    const auto post = posterior_null(prior, tau);
    const double mean = post.mean();
    double rate = 0.0;
    for (std::size_t n = 0; n < post.levels(); ++n) {
        if (post[n] > log_guard) {
            rate -= post[n] * (static_cast<double>(n) - mean) * std::log2(post[n]);
        }
    }
    return rate;
}

/// dF/dtau = (1/2) [F <n>_q - sum_n n sqrt(p_n q_n)]; non-positive.
[[nodiscard]] inline double rate_fidelity(const LevelDistribution &prior, ScaledTime tau) {
    const auto post = posterior_null(prior, tau);
    double overlap = 0.0;
    double weighted_overlap = 0.0;
    for (std::size_t n = 0; n < prior.levels(); ++n) {
        const double term = std::sqrt(prior[n] * post[n]);
        overlap += term;
        weighted_overlap += static_cast<double>(n) * term;
    }
    return 0.5 * (overlap * post.mean() - weighted_overlap);
}

/// dP_rev/dtau = P_rev (<n>_q - N).
[[nodiscard]] inline double rate_reversal(const LevelDistribution &prior, ScaledTime tau) {
    return reversal_probability(prior, tau) *
           (posterior_null_mean(prior, tau) - static_cast<double>(prior.max_excitation()));
}

struct RateSnapshot {
    ScaledTime tau;
    double d_info_gain{0.0};
    double d_fidelity{0.0};
    double d_p_rev{0.0};
};

[[nodiscard]] inline RateSnapshot rate_snapshot(const LevelDistribution &prior, ScaledTime tau) {
    return RateSnapshot{tau, rate_info_gain(prior, tau), rate_fidelity(prior, tau), rate_reversal(prior, tau)};
}

/// Closed-form tau -> 0 limits of the three rates.
struct RateLimits {
    double d_info_gain_0{0.0};
    double d_fidelity_0{0.0};
    double d_p_rev_0{0.0};
};

/// General-N limit: d_info_gain_0 = -sum_n p_n (n - <n>) log2 p_n, d_p_rev_0 = <n> - N.
[[nodiscard]] inline RateLimits rate_limits(const LevelDistribution &prior) {
    const double mean = prior.mean();
    RateLimits out;
    for (std::size_t n = 0; n < prior.levels(); ++n) {
        if (prior[n] > log_guard) {
            out.d_info_gain_0 -= prior[n] * (static_cast<double>(n) - mean) * std::log2(prior[n]);
        }
    }
    out.d_fidelity_0 = 0.0;
    out.d_p_rev_0 = mean - static_cast<double>(prior.max_excitation());
    return out;
}

/// Qubit specialization of the initial information rate: -p0 p1 log2(p1 / p0).
[[nodiscard]] inline double initial_info_rate_qubit(double p0, double p1) {
    if (p0 <= 0.0 || p1 <= 0.0) {
        return 0.0;
    }
    return -p0 * p1 * std::log2(p1 / p0);
}

/// Qutrit specialization: <n> p0 log2 p0 - (1 - <n>) p1 log2 p1 - (2 - <n>) p2 log2 p2.
[[nodiscard]] inline double initial_info_rate_qutrit(double p0, double p1, double p2) {
    const double mean = p1 + 2.0 * p2;
    auto plogp = [](double p) { return p > log_guard ? p * std::log2(p) : 0.0; };
    return mean * plogp(p0) - (1.0 - mean) * plogp(p1) - (2.0 - mean) * plogp(p2);
}

/// Central difference [Q(tau + h) - Q(tau - h)] / (2h). Requires h > 0 and tau - h >= 0.
[[nodiscard]] inline double central_difference(Quantity q, const LevelDistribution &prior, double tau, double step) {
    if (!(step > 0.0)) {
        throw std::invalid_argument{"finite-difference step must be positive"};
    }
    if (tau - step < 0.0) {
        throw std::invalid_argument{"central difference needs tau - step >= 0 (tau = " + std::to_string(tau) + ")"};
    }
    return (evaluate(q, prior, ScaledTime{tau + step}) - evaluate(q, prior, ScaledTime{tau - step})) / (2.0 * step);
}

/// Forward difference [Q(tau + h) - Q(tau)] / h for use at the tau = 0 boundary.
[[nodiscard]] inline double forward_difference(Quantity q, const LevelDistribution &prior, double tau, double step) {
    if (!(step > 0.0)) {
        throw std::invalid_argument{"finite-difference step must be positive"};
    }
    return (evaluate(q, prior, ScaledTime{tau + step}) - evaluate(q, prior, ScaledTime{tau})) / step;
}

inline constexpr double default_fd_step = 1e-5;
inline constexpr double boundary_fd_step = 1e-6;

/// Central difference with the default step, switching to a forward difference within the step of tau = 0.
[[nodiscard]] inline double finite_difference_oracle(Quantity q, const LevelDistribution &prior, double tau) {
    if (tau < default_fd_step) {
        return forward_difference(q, prior, tau, boundary_fd_step);
    }
    return central_difference(q, prior, tau, default_fd_step);
}

}  // namespace nullmeas
