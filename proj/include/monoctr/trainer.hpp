#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "monoctr/backbones.hpp"
#include "monoctr/importance.hpp"
#include "monoctr/loss.hpp"
#include "monoctr/metrics.hpp"
#include "monoctr/synthesizer.hpp"

namespace monoctr {

struct TrainConfig {
    double alpha = 1.0;    // pairwise weight
    double margin = 0.05;  // hinge margin on probabilities
    double lr = 0.05;
    double lr_decay = 0.9;  // multiplicative, per epoch
    std::size_t batch_size = 1024;
    std::size_t epochs = 1;
    std::uint64_t seed = 1;
    bool shuffle = true;

    // ablation switches
    bool ccss_enabled = true;
    bool factual_pairwise = true;
    bool counterfactual_pairwise = true;
    bool factual_pointwise = true;
    bool uniform_disturb = false;
};

struct EpochStats {
    double pointwise = 0.0;  // mean over batches
    double pairwise = 0.0;   // weighted pairwise part (alpha included)
    double lr = 0.0;
};

struct TrainReport {
    std::vector<EpochStats> epochs;
    std::optional<MetricsReport> final_metrics;
};

struct TrainResult {
    Model model;
    TrainReport report;
};

/// Per-triple prediction bundle; factual/counterfactual absent at boundaries.
struct TriplePreds {
    double y_original = 0.0;
    std::optional<double> y_factual;
    std::optional<double> y_counterfactual;
};

struct CompositeBreakdown {
    double total = 0.0;
    double pointwise = 0.0;
    double pairwise = 0.0;  // alpha-weighted
};

/// The CCSS objective for one triple: pointwise BCE on the original (and the
/// factual, when enabled) plus alpha-weighted hinge terms whose ordering
/// depends on the original's label.
CompositeBreakdown composite_loss(const TriplePreds& preds, double label,
                                  const TrainConfig& config);

/// Composite loss and exact gradients over a batch of triples. The batch
/// loss is the mean of per-triple composite losses.
struct CompositeBatch {
    double total = 0.0;
    double pointwise = 0.0;
    double pairwise = 0.0;
    GradMap grads;
};
CompositeBatch composite_batch_gradients(const Model& model,
                                         const std::vector<SynthTriple>& triples,
                                         const TrainConfig& config);

/// Batch composite loss only (no gradients); shares the code path of the
/// value side of composite_batch_gradients.
CompositeBreakdown composite_batch_loss(const Model& model,
                                        const std::vector<SynthTriple>& triples,
                                        const TrainConfig& config);

/// Mini-batch CCSS training. When ccss_enabled is false this is a plain BCE
/// trainer: no triples are synthesized and no disturb randomness is drawn.
TrainResult train(const TrainConfig& config, const ModelSpec& model_spec,
                  const std::vector<EncodedSample>& samples, const FittedFeatures& feats,
                  const ImportanceProfile* importance,
                  const std::vector<EncodedSample>* eval_samples = nullptr);

/// Reorder an importance profile (e.g. loaded from JSON) into the schema's
/// numerical field order.
ImportanceProfile align_importance(const ImportanceProfile& profile,
                                   const FittedFeatures& feats);

}  // namespace monoctr
