/**
 * @file
 * @brief Monte Carlo trajectories of the null/click record, used as an
 *        independent check of the analytic conditioning.
 *
 * Trajectories are grouped into fixed-size chunks. Chunk c draws from a
 * generator seeded by (seed, c) only, so the counts (and every estimate
 * derived from them) do not depend on how many workers share the chunks.
 */

#pragma once

#include "nullmeas/distribution.hpp"
#include "nullmeas/info_measures.hpp"
#include "nullmeas/measurement.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace nullmeas {

struct McConfig {
    LevelDistribution prior;
    ScaledTime tau;
    std::uint64_t samples{1};
    std::uint64_t seed{0};
    unsigned workers{1};

    void validate() const {
        if (samples < 1) {
            throw ValidationError{"mc samples must be >= 1"};
        }
        if (workers < 1) {
            throw ValidationError{"mc workers must be >= 1"};
        }
    }
};

struct McEstimate {
    std::uint64_t samples{0};
    std::uint64_t n_null{0};
    double p_null_hat{0.0};
    double p_null_se{0.0};
    /// Empirical level frequencies over all trajectories.
    std::vector<double> prior_hat;
    /// Empty when n_null == 0 (insufficient conditioning).
    std::vector<double> posterior_null_hat;
    std::vector<double> posterior_null_se;
    /// Plug-in H(prior_hat) - H(posterior_null_hat).
    double info_gain_hat{0.0};
    /// Delta-method standard error of info_gain_hat.
    double info_gain_se{0.0};

    [[nodiscard]] bool insufficient_conditioning() const noexcept { return n_null == 0; }
};

namespace detail {

inline constexpr std::uint64_t mc_chunk_size = 1u << 14;

/// SplitMix64 finalizer; maps (seed, chunk) to a well-mixed 64-bit key.
[[nodiscard]] constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

[[nodiscard]] inline std::mt19937_64 chunk_engine(std::uint64_t seed, std::uint64_t chunk) {
    return std::mt19937_64{splitmix64(splitmix64(seed) ^ splitmix64(~chunk))};
}

/// Uniform double in [0, 1) from the top 53 bits; identical on every platform.
[[nodiscard]] inline double unit_uniform(std::mt19937_64 &eng) {
    return static_cast<double>(eng() >> 11) * 0x1.0p-53;
}

struct McCounts {
    std::vector<std::uint64_t> drawn;
    std::vector<std::uint64_t> null;

    explicit McCounts(std::size_t levels) : drawn(levels, 0), null(levels, 0) {}

    McCounts &operator+=(const McCounts &other) {
        for (std::size_t n = 0; n < drawn.size(); ++n) {
            drawn[n] += other.drawn[n];
            null[n] += other.null[n];
        }
        return *this;
    }
};

inline void simulate_chunk(const std::vector<double> &cumulative, const std::vector<double> &survival,
                           std::uint64_t seed, std::uint64_t chunk, std::uint64_t count, McCounts &counts) {
    auto eng = chunk_engine(seed, chunk);
    const std::size_t top = cumulative.size() - 1;
    for (std::uint64_t i = 0; i < count; ++i) {
        const double u = unit_uniform(eng);
        const auto level = std::min<std::size_t>(
            static_cast<std::size_t>(std::upper_bound(cumulative.begin(), cumulative.end(), u) - cumulative.begin()),
            top);
        ++counts.drawn[level];
        if (unit_uniform(eng) < survival[level]) {
            ++counts.null[level];
        }
    }
}

}  // namespace detail

/// Simulates config.samples trajectories and returns frequency estimates.
[[nodiscard]] inline McEstimate run_mc(const McConfig &config) {
    config.validate();
    const std::size_t levels = config.prior.levels();

    std::vector<double> cumulative(levels);
    double acc = 0.0;
    for (std::size_t n = 0; n < levels; ++n) {
        acc += config.prior[n];
        cumulative[n] = acc;
    }
    // levels with zero mass must never be selected, so the last occupied
    // level absorbs the rounding tail
    std::size_t last_occupied = levels - 1;
    while (last_occupied > 0 && config.prior[last_occupied] == 0.0) {
        --last_occupied;
    }
    for (std::size_t n = last_occupied; n < levels; ++n) {
        cumulative[n] = 1.0;
    }
    std::vector<double> survival(levels);
    for (std::size_t n = 0; n < levels; ++n) {
        survival[n] = std::exp(-static_cast<double>(n) * config.tau.value());
    }

    const std::uint64_t chunks = (config.samples + detail::mc_chunk_size - 1) / detail::mc_chunk_size;
    const unsigned workers = static_cast<unsigned>(std::min<std::uint64_t>(config.workers, chunks));
    std::vector<detail::McCounts> per_chunk(chunks, detail::McCounts{levels});
    std::atomic<std::uint64_t> next{0};
    auto work = [&] {
        for (std::uint64_t c = next.fetch_add(1); c < chunks; c = next.fetch_add(1)) {
            const std::uint64_t begin = c * detail::mc_chunk_size;
            const std::uint64_t count = std::min(detail::mc_chunk_size, config.samples - begin);
            detail::simulate_chunk(cumulative, survival, config.seed, c, count, per_chunk[c]);
        }
    };
    {
        std::vector<std::jthread> pool;
        for (unsigned w = 1; w < workers; ++w) {
            pool.emplace_back(work);
        }
        work();
    }
    detail::McCounts total{levels};
    for (const auto &c : per_chunk) {
        total += c;
    }

    McEstimate est;
    est.samples = config.samples;
    const auto n_samples = static_cast<double>(config.samples);
    est.prior_hat.resize(levels);
    for (std::size_t n = 0; n < levels; ++n) {
        est.prior_hat[n] = static_cast<double>(total.drawn[n]) / n_samples;
        est.n_null += total.null[n];
    }
    est.p_null_hat = static_cast<double>(est.n_null) / n_samples;
    est.p_null_se = std::sqrt(est.p_null_hat * (1.0 - est.p_null_hat) / n_samples);
    if (est.n_null == 0) {
        return est;
    }
    const auto n_null = static_cast<double>(est.n_null);
    est.posterior_null_hat.resize(levels);
    est.posterior_null_se.resize(levels);
    for (std::size_t n = 0; n < levels; ++n) {
        const double q = static_cast<double>(total.null[n]) / n_null;
        est.posterior_null_hat[n] = q;
        est.posterior_null_se[n] = std::sqrt(q * (1.0 - q) / n_null);
    }
    const double h_post = shannon_entropy(est.posterior_null_hat);
    est.info_gain_hat = shannon_entropy(est.prior_hat) - h_post;

    // Delta method over the 2 x levels multinomial of (level, record) cells.
    // Gradient of H(p) - H(q): -log2 p_n on every cell of level n, plus
    // (log2 q_n + H(q)) / p_null on the null cell. Constant shifts cancel.
    double mean = 0.0;
    double second = 0.0;
    auto accumulate_cell = [&](std::uint64_t count, double gradient) {
        if (count == 0) {
            return;
        }
        const double pi = static_cast<double>(count) / n_samples;
        mean += pi * gradient;
        second += pi * gradient * gradient;
    };
    for (std::size_t n = 0; n < levels; ++n) {
        if (total.drawn[n] == 0) {
            continue;
        }
        const double log_p = std::log2(est.prior_hat[n]);
        const double q = est.posterior_null_hat[n];
        const double null_gradient = q > 0.0 ? -log_p + (std::log2(q) + h_post) / est.p_null_hat : -log_p;
        accumulate_cell(total.null[n], null_gradient);
        accumulate_cell(total.drawn[n] - total.null[n], -log_p);
    }
    est.info_gain_se = std::sqrt(std::max(second - mean * mean, 0.0) / n_samples);
    return est;
}

struct TolerancePolicy {
    /// Each estimate must sit within this many standard errors of its analytic value.
    double sigma_multiple{4.0};
    /// Optional bound on the total-variation distance of the null posterior.
    std::optional<double> max_total_variation;
};

struct QuantityCheck {
    std::string name;
    double estimate{0.0};
    double expected{0.0};
    double standard_error{0.0};
    double allowed{0.0};
    bool passed{false};
};

struct McValidation {
    McEstimate estimate;
    std::vector<QuantityCheck> checks;
    bool insufficient_conditioning{false};

    [[nodiscard]] bool passed() const noexcept {
        if (insufficient_conditioning) {
            return false;
        }
        return std::all_of(checks.begin(), checks.end(), [](const QuantityCheck &c) { return c.passed; });
    }
};

[[nodiscard]] inline double total_variation(std::span<const double> p, std::span<const double> q) {
    if (p.size() != q.size()) {
        throw std::invalid_argument{"total_variation: size mismatch"};
    }
    double tv = 0.0;
    for (std::size_t n = 0; n < p.size(); ++n) {
        tv += std::abs(p[n] - q[n]);
    }
    return 0.5 * tv;
}

/// Runs the simulation and compares each estimate against the analytic value.
[[nodiscard]] inline McValidation mc_validate(const McConfig &config, const TolerancePolicy &policy = {}) {
    McValidation v;
    v.estimate = run_mc(config);
    const auto &est = v.estimate;

    auto check = [&](std::string name, double estimate, double expected, double se) {
        // exact agreement passes even when the standard error collapses to zero
        const double allowed = policy.sigma_multiple * se + 1e-12;
        v.checks.push_back({std::move(name), estimate, expected, se, allowed, std::abs(estimate - expected) <= allowed});
    };

    check("p_null", est.p_null_hat, null_probability(config.prior, config.tau), est.p_null_se);
    if (est.insufficient_conditioning()) {
        v.insufficient_conditioning = true;
        return v;
    }
    const auto post = posterior_null(config.prior, config.tau);
    for (std::size_t n = 0; n < post.levels(); ++n) {
        check("posterior_null[" + std::to_string(n) + "]", est.posterior_null_hat[n], post[n],
              est.posterior_null_se[n]);
    }
    check("info_gain", est.info_gain_hat, info_gain(config.prior, config.tau), est.info_gain_se);
    if (policy.max_total_variation) {
        const double tv = total_variation(est.posterior_null_hat, post.probs());
        v.checks.push_back({"posterior_null_tv", tv, 0.0, 0.0, *policy.max_total_variation,
                            tv <= *policy.max_total_variation});
    }
    return v;
}

}  // namespace nullmeas
