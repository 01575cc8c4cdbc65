#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "monoctr/backbones.hpp"

namespace monoctr {

struct ShapleyConfig {
    std::size_t n_permutations = 64;
    std::size_t n_probe_samples = 256;
    // per-numerical-field reference raw values; empty -> training means
    // derived from the fitted transform are not available, so callers must
    // fill this (the CLI uses the mean of the probe set)
    std::vector<double> reference_raw;
    std::uint64_t seed = 0;
};

/// Per-numerical-field importance and the disturb distribution built from it.
struct ImportanceProfile {
    std::vector<std::string> field_names;  // numerical fields, schema order
    std::vector<double> q;
    std::vector<double> p;
    std::vector<bool> eligible;
};

/// Castro-style permutation sampling of Shapley values on the logit.
/// Out-of-coalition numerical fields sit at their reference values;
/// categorical fields keep their true values. q_i is the mean absolute
/// marginal contribution of field i.
std::vector<double> estimate_shapley(const Model& model, const FittedFeatures& feats,
                                     const std::vector<EncodedSample>& probe,
                                     const ShapleyConfig& config);

/// Normalize q into the disturb distribution over eligible fields; an
/// all-zero q falls back to uniform over eligible fields.
std::vector<double> disturb_distribution(const std::vector<double>& q,
                                         const std::vector<bool>& eligible);

ImportanceProfile build_importance_profile(const Model& model, const FittedFeatures& feats,
                                           const std::vector<EncodedSample>& probe,
                                           const ShapleyConfig& config);

/// Eligibility of each numerical field: direction declared and >= 2 buckets.
std::vector<bool> field_eligibility(const FittedFeatures& feats);

std::string importance_to_json(const ImportanceProfile& profile);
ImportanceProfile importance_from_json(const std::string& text);

}  // namespace monoctr
