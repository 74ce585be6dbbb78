/**
 * @file
 * @brief First-crossing times of the static quantities by a fixed-step
 *        bracketing scan followed by bisection.
 */

#pragma once

#include "nullmeas/distribution.hpp"
#include "nullmeas/info_measures.hpp"
#include "nullmeas/rates.hpp"

#include <cmath>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace nullmeas {

/**
 * @brief Bisection on a bracket [lo, hi] where @p pred(lo) is false and @p pred(hi) is true.
 *
 * Returns the boundary point to within @p tolerance (or one ulp, whichever is
 * reached first). Works on a predicate instead of a sign so that the
 * "first time the inequality holds" semantics carry through unchanged.
 */
template <typename Predicate>
[[nodiscard]] double bisect_boundary(Predicate &&pred, double lo, double hi, double tolerance) {
    while (hi - lo > tolerance) {
        const double mid = lo + 0.5 * (hi - lo);
        if (mid <= lo || mid >= hi) {
            break;
        }
        if (pred(mid)) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    return lo + 0.5 * (hi - lo);
}

/// Sign-change bisection for a continuous f with f(lo) and f(hi) of opposite sign.
template <typename Function>
[[nodiscard]] double bisect_root(Function &&f, double lo, double hi, double tolerance) {
    const double f_lo = f(lo);
    const double f_hi = f(hi);
    if (f_lo == 0.0) {
        return lo;
    }
    if (f_hi == 0.0) {
        return hi;
    }
    if ((f_lo > 0.0) == (f_hi > 0.0)) {
        throw std::invalid_argument{"bisect_root: interval does not bracket a sign change"};
    }
    const bool rising = f_lo < 0.0;
    return bisect_boundary([&](double x) { return rising ? f(x) >= 0.0 : f(x) <= 0.0; }, lo, hi, tolerance);
}

enum class Direction { below, above };

inline constexpr double threshold_scan_step = 1e-3;
inline constexpr double threshold_tolerance = 1e-12;

/**
 * First tau in (0, tau_max] where the scalar function satisfies the crossing
 * inequality (f < target for ::Direction::below, f >= target for ::Direction::above).
 *
 * Scans a uniform grid with step ::threshold_scan_step, then bisects the first
 * bracketing cell. Returns std::nullopt if the inequality never holds on the grid.
 * @throws std::invalid_argument if the inequality already holds at tau = 0.
 */
template <typename Function>
[[nodiscard]] std::optional<double> first_crossing(Function &&f, double target, Direction direction, double tau_max) {
    if (!(tau_max > 0.0) || !std::isfinite(tau_max)) {
        throw std::invalid_argument{"tau_max must be positive and finite"};
    }
    if (!std::isfinite(target)) {
        throw std::invalid_argument{"threshold target must be finite"};
    }
    auto crossed = [&](double tau) {
        const double v = f(tau);
        return direction == Direction::below ? v < target : v >= target;
    };
    if (crossed(0.0)) {
        throw std::invalid_argument{"threshold target " + std::to_string(target) + " is already satisfied at tau = 0"};
    }
    const auto cells = static_cast<std::size_t>(std::ceil(tau_max / threshold_scan_step - 1e-9));
    double previous = 0.0;
    for (std::size_t i = 1; i <= cells; ++i) {
        const double tau = i == cells ? tau_max : static_cast<double>(i) * threshold_scan_step;
        if (crossed(tau)) {
            return bisect_boundary(crossed, previous, tau, threshold_tolerance);
        }
        previous = tau;
    }
    return std::nullopt;
}

/// First crossing of a static quantity; std::nullopt means "not reached in window".
[[nodiscard]] inline std::optional<double> find_threshold(Quantity q, const LevelDistribution &prior, double target,
                                                          Direction direction, double tau_max) {
    return first_crossing([&](double tau) { return evaluate(q, prior, ScaledTime{tau}); }, target, direction, tau_max);
}

/// Reference value I_max for the information-gain column.
enum class IMaxMode {
    window,     ///< I_max = I(0, tau_max)
    asymptotic  ///< I_max = H(X), the tau -> infinity limit
};

[[nodiscard]] inline std::string_view to_string(IMaxMode mode) noexcept {
    return mode == IMaxMode::window ? "window" : "asymptotic";
}

[[nodiscard]] inline IMaxMode parse_i_max_mode(std::string_view text) {
    if (text == "window") {
        return IMaxMode::window;
    }
    if (text == "asymptotic") {
        return IMaxMode::asymptotic;
    }
    throw ValidationError{"i_max_mode must be 'window' or 'asymptotic', got '" + std::string{text} + "'"};
}

[[nodiscard]] inline double info_gain_reference(const LevelDistribution &prior, IMaxMode mode, double tau_max) {
    return mode == IMaxMode::window ? info_gain(prior, ScaledTime{tau_max}) : shannon_entropy(prior);
}

/// First tau with I(0, tau) >= fraction * I_max.
[[nodiscard]] inline std::optional<double> info_gain_threshold(const LevelDistribution &prior, double fraction,
                                                               IMaxMode mode, double tau_max) {
    if (!(fraction > 0.0 && fraction < 1.0)) {
        throw std::invalid_argument{"fraction must lie in (0, 1)"};
    }
    if (!(tau_max > 0.0)) {
        throw std::invalid_argument{"tau_max must be positive"};
    }
    const double i_max = info_gain_reference(prior, mode, tau_max);
    if (!(i_max > 0.0)) {
        throw DegenerateInputError{"I_max is not positive; information gain never accumulates for this prior"};
    }
    return find_threshold(Quantity::info_gain, prior, fraction * i_max, Direction::above, tau_max);
}

struct ThresholdReport {
    LevelDistribution prior;
    std::optional<double> tau_fidelity_90;
    std::optional<double> tau_prev_50;
    std::optional<double> tau_info_90;
    IMaxMode i_max_mode{IMaxMode::window};
    double tau_max{5.0};
    double i_max{0.0};
};

inline constexpr double default_tau_max = 5.0;

[[nodiscard]] inline ThresholdReport threshold_report(const LevelDistribution &prior, IMaxMode mode = IMaxMode::window,
                                                      double tau_max = default_tau_max) {
    ThresholdReport r{prior, {}, {}, {}, mode, tau_max, info_gain_reference(prior, mode, tau_max)};
    r.tau_fidelity_90 = find_threshold(Quantity::fidelity, prior, 0.9, Direction::below, tau_max);
    r.tau_prev_50 = find_threshold(Quantity::p_rev, prior, 0.5, Direction::below, tau_max);
    if (r.i_max > 0.0) {
        r.tau_info_90 = info_gain_threshold(prior, 0.9, mode, tau_max);
    }
    return r;
}

/// The four qubit priors of the first table, panels (a)-(d).
[[nodiscard]] inline std::vector<LevelDistribution> qubit_benchmark_priors() {
    return {LevelDistribution{0.5, 0.5}, LevelDistribution{0.6, 0.4}, LevelDistribution{0.2, 0.8},
            LevelDistribution{0.3, 0.7}};
}

/// The four qutrit priors of the second table, panels (a)-(d).
[[nodiscard]] inline std::vector<LevelDistribution> qutrit_benchmark_priors() {
    return {LevelDistribution::uniform(3), LevelDistribution{0.2, 0.4, 0.4}, LevelDistribution{0.5, 0.3, 0.2},
            LevelDistribution{0.2, 0.2, 0.6}};
}

struct ThresholdTables {
    std::vector<ThresholdReport> qubit;
    std::vector<ThresholdReport> qutrit;
};

[[nodiscard]] inline ThresholdTables reproduce_tables(const std::vector<LevelDistribution> &qubit_priors,
                                                      const std::vector<LevelDistribution> &qutrit_priors,
                                                      IMaxMode mode = IMaxMode::window,
                                                      double tau_max = default_tau_max) {
    ThresholdTables tables;
    for (const auto &p : qubit_priors) {
        tables.qubit.push_back(threshold_report(p, mode, tau_max));
    }
    for (const auto &p : qutrit_priors) {
        tables.qutrit.push_back(threshold_report(p, mode, tau_max));
    }
    return tables;
}

[[nodiscard]] inline ThresholdTables reproduce_tables() {
    return reproduce_tables(qubit_benchmark_priors(), qutrit_benchmark_priors());
}

/// Reference threshold times, one row per panel: {F < 90%, P_rev < 50%, I(0) > 90% I_max}.
struct ReferenceRow {
    char panel;
    double fidelity_90;
    double prev_50;
    double info_90;
};

inline constexpr ReferenceRow reference_qubit_table[] = {
    {'a', 2.124, 1.104, 3.813}, {'b', 2.475, 0.987, 3.562}, {'c', 1.923, 1.806, 4.649}, {'d', 1.873, 1.472, 4.348}};

inline constexpr ReferenceRow reference_qutrit_table[] = {
    {'a', 1.254, 0.585, 3.445}, {'b', 1.237, 0.702, 3.913}, {'c', 1.555, 0.485, 3.127}, {'d', 1.070, 0.786, 3.662}};

/// Agreement tolerances against the reference columns.
inline constexpr double reference_time_tolerance = 0.02;
inline constexpr double reference_info_tolerance = 0.05;

}  // namespace nullmeas
