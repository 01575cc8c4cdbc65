#pragma once

#include <algorithm>
#include <cmath>

namespace monoctr {

inline constexpr double kProbClamp = 1e-7;

inline double sigmoid(double z) { return 1.0 / (1.0 + std::exp(-z)); }

inline double clamp_prob(double p) {
    return std::clamp(p, kProbClamp, 1.0 - kProbClamp);
}

/// Binary cross-entropy on a clamped probability.
inline double pointwise_loss(double p, double y) {
    const double pc = clamp_prob(p);
    return -y * std::log(pc) - (1.0 - y) * std::log(1.0 - pc);
}

/// d pointwise_loss / d logit, where p = sigmoid(logit). Zero in the
/// clamped region, matching the loss actually computed.
inline double pointwise_dlogit(double p, double y) {
    if (p <= kProbClamp || p >= 1.0 - kProbClamp) return 0.0;
    return p - y;
}

/// Hinge on the expected ordering: penalizes hi not exceeding lo by margin m.
inline double pairwise_hinge(double p_hi, double p_lo, double margin) {
    return std::max(0.0, margin - (p_hi - p_lo));
}

/// Active-side indicator of the hinge (subgradient selector).
inline bool hinge_active(double p_hi, double p_lo, double margin) {
    return margin - (p_hi - p_lo) > 0.0;
}

}  // namespace monoctr
