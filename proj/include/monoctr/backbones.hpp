#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "monoctr/featurespace.hpp"
#include "monoctr/params.hpp"

namespace monoctr {

enum class BackboneKind { Dnn, WideDeep, Dcn };

BackboneKind backbone_from_string(const std::string& s);
std::string to_string(BackboneKind k);

struct ModelSpec {
    BackboneKind kind = BackboneKind::Dnn;
    std::size_t embed_dim = 32;
    std::vector<std::size_t> hidden = {512, 255, 127, 127};
    std::size_t cross_depth = 3;
};

/// A backbone bound to a fitted feature space with its parameter store.
/// Parameter names: emb_cat_<i>, emb_num_<j>, mlp_w<l>/mlp_b<l>,
/// head_w/head_b (dnn, wide_deep), wide_cat_<i>/wide_dense/wide_b
/// (wide_deep), cross_w<l>/cross_b<l>, comb_w/comb_b (dcn).
struct Model {
    ModelSpec spec;
    std::vector<std::size_t> cat_vocab_sizes;   // per categorical field
    std::vector<std::size_t> num_bucket_counts; // per numerical field
    ParamStore params;

    std::size_t n_cat() const { return cat_vocab_sizes.size(); }
    std::size_t n_num() const { return num_bucket_counts.size(); }
    std::size_t input_width() const {
        return (n_cat() + n_num()) * spec.embed_dim + n_num();
    }
};

Model build_model(const ModelSpec& spec, const FittedFeatures& feats, std::uint64_t seed);

/// Everything the backward pass needs from a forward pass.
struct ForwardCache {
    std::size_t batch = 0;
    Tensor z0;                      // [B, input_width]
    std::vector<Tensor> pre;        // MLP pre-activations
    std::vector<Tensor> act;        // MLP ReLU outputs
    std::vector<Tensor> cross_x;    // dcn: x_0..x_L
    std::vector<std::vector<double>> cross_dot;  // dcn: w_l . x_l per sample
    std::vector<double> logits;
};

ForwardCache forward(const Model& model, const std::vector<EncodedSample>& batch);

std::vector<double> predict(const Model& model, const std::vector<EncodedSample>& batch);

/// Backpropagate per-sample dL/dlogit through the cached forward pass.
/// Returns zero-initialized gradients for every parameter, filled in.
GradMap backward(const Model& model, const std::vector<EncodedSample>& batch,
                 const ForwardCache& cache, const std::vector<double>& dlogits);

/// Mean BCE loss over the batch plus its exact gradients.
struct LossAndGrads {
    double loss = 0.0;
    GradMap grads;
};
LossAndGrads model_gradients(const Model& model, const std::vector<EncodedSample>& batch,
                             const std::vector<double>& labels);

}  // namespace monoctr
