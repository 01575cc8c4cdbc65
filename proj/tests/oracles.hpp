// Independent test oracles. Everything here is deliberately naive (brute
// force, enumeration) and must stay decoupled from the library's own
// implementation paths.
#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <vector>

namespace oracles {

/// O(P*N) pairwise AUC with half credit for ties.
inline double brute_force_auc(const std::vector<double>& scores,
                              const std::vector<double>& labels) {
    double wins = 0.0;
    std::size_t pairs = 0;
    for (std::size_t i = 0; i < scores.size(); ++i) {
        if (labels[i] != 1.0) continue;
        for (std::size_t j = 0; j < scores.size(); ++j) {
            if (labels[j] != 0.0) continue;
            ++pairs;
            if (scores[i] > scores[j])
                wins += 1.0;
            else if (scores[i] == scores[j])
                wins += 0.5;
        }
    }
    return wins / static_cast<double>(pairs);
}

/// Exact Shapley attribution of |marginal| by full subset enumeration.
/// `value(mask)` evaluates the coalition game; n <= ~20.
inline std::vector<double> exact_shapley_abs(
    std::size_t n, const std::function<double(std::uint32_t)>& value) {
    std::vector<double> fact(n + 1, 1.0);
    for (std::size_t i = 1; i <= n; ++i) fact[i] = fact[i - 1] * static_cast<double>(i);
    std::vector<double> phi(n, 0.0);
    const std::uint32_t full = (1u << n) - 1u;
    std::vector<double> cache(full + 1u);
    for (std::uint32_t mask = 0; mask <= full; ++mask) cache[mask] = value(mask);
    for (std::size_t i = 0; i < n; ++i) {
        const std::uint32_t bit = 1u << i;
        for (std::uint32_t mask = 0; mask <= full; ++mask) {
            if (mask & bit) continue;
            const std::size_t s = static_cast<std::size_t>(__builtin_popcount(mask));
            const double w = fact[s] * fact[n - s - 1] / fact[n];
            phi[i] += w * std::abs(cache[mask | bit] - cache[mask]);
        }
    }
    return phi;
}

/// Signed exact Shapley (efficiency axiom checks).
inline std::vector<double> exact_shapley_signed(
    std::size_t n, const std::function<double(std::uint32_t)>& value) {
    std::vector<double> fact(n + 1, 1.0);
    for (std::size_t i = 1; i <= n; ++i) fact[i] = fact[i - 1] * static_cast<double>(i);
    std::vector<double> phi(n, 0.0);
    const std::uint32_t full = (1u << n) - 1u;
    for (std::size_t i = 0; i < n; ++i) {
        const std::uint32_t bit = 1u << i;
        for (std::uint32_t mask = 0; mask <= full; ++mask) {
            if (mask & bit) continue;
            const std::size_t s = static_cast<std::size_t>(__builtin_popcount(mask));
            const double w = fact[s] * fact[n - s - 1] / fact[n];
            phi[i] += w * (value(mask | bit) - value(mask));
        }
    }
    return phi;
}

}  // namespace oracles
