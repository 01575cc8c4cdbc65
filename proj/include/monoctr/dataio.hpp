#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "monoctr/backbones.hpp"
#include "monoctr/featurespace.hpp"
#include "monoctr/rng.hpp"

namespace monoctr {

struct Dataset {
    std::vector<std::string> columns;
    std::vector<RawRecord> records;

    std::size_t size() const { return records.size(); }
};

/// Load a comma-separated file with header. When a schema is given, its
/// columns must all be present; numerical columns and the label are
/// validated row by row.
Dataset load_csv(const std::string& path, const FeatureSchema* schema = nullptr);

void save_csv(const std::string& path, const Dataset& data);

// ---- synthetic data -------------------------------------------------------

/// One numerical field of the generator: direction plus a strictly monotone
/// piecewise-linear shape in log1p(x) with the given segment slopes.
struct SyntheticNumField {
    Direction direction = Direction::Increasing;
    double amplitude = 1.0;                      // overall scale of the shape
    std::vector<double> segment_slopes;          // positive; filled at generation
    std::vector<double> knots;                   // in log1p domain
};

struct SyntheticSpec {
    std::vector<std::size_t> cat_vocab_sizes;
    std::vector<SyntheticNumField> num_fields;
    double noise_sigma = 0.5;
    std::size_t n_samples = 1000;

    FeatureSchema schema(std::size_t n_buckets = 10) const;
};

/// Ground truth behind a generated dataset: the exact numerical part of the
/// logit, per-category effects, and the Monte-Carlo positive-rate estimate.
struct SyntheticTruth {
    std::vector<SyntheticNumField> num_fields;   // with slopes/knots resolved
    std::vector<std::vector<double>> cat_effects;
    double bias = 0.0;
    double mc_mean_prob = 0.0;     // mean sigmoid(logit) over generated rows
    double mc_prob_var_sum = 0.0;  // sum of p(1-p), for the binomial bound

    double numeric_logit(const std::vector<double>& raw_num) const;
    double shape_value(std::size_t field, double x) const;
};

struct SyntheticResult {
    Dataset data;
    SyntheticTruth truth;
};

/// Heavy-tailed positive numerical draws; label ~ Bernoulli(sigmoid(logit))
/// where the logit is a strictly monotone shape per field plus categorical
/// effects plus Gaussian noise. Deterministic given (spec, seed).
SyntheticResult generate_synthetic(const SyntheticSpec& spec, std::uint64_t seed);

// ---- checkpoints ----------------------------------------------------------

inline constexpr int kCheckpointVersion = 1;

struct Checkpoint {
    FittedFeatures features;
    ModelSpec model_spec;
    ParamStore params;
    std::uint64_t seed = 0;
    std::string config_echo;  // JSON text of the training config, if any

    Model to_model() const;
};

void save_checkpoint(const std::string& path, const Model& model, const FittedFeatures& feats,
                     std::uint64_t seed, const std::string& config_echo = "");
Checkpoint load_checkpoint(const std::string& path);

// FittedFeatures <-> JSON (also used inside checkpoints)
std::string features_to_json(const FittedFeatures& feats);
FittedFeatures features_from_json(const std::string& text);

/// KuaiRand-Pure column preset: is_click label, user/video id categoricals,
/// behavior-count numerical columns declared increasing.
FeatureSchema kuairand_pure_schema();

}  // namespace monoctr
