#include "monoctr/trainer.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "monoctr/rng.hpp"

namespace monoctr {

CompositeBreakdown composite_loss(const TriplePreds& preds, double label,
                                  const TrainConfig& config) {
    const bool positive = label == 1.0;
    CompositeBreakdown out;
    out.pointwise = pointwise_loss(preds.y_original, label);
    if (config.factual_pointwise && preds.y_factual)
        out.pointwise += pointwise_loss(*preds.y_factual, label);
    if (config.factual_pairwise && preds.y_factual) {
        out.pairwise += positive ? pairwise_hinge(*preds.y_factual, preds.y_original, config.margin)
                                 : pairwise_hinge(preds.y_original, *preds.y_factual, config.margin);
    }
    if (config.counterfactual_pairwise && preds.y_counterfactual) {
        out.pairwise +=
            positive ? pairwise_hinge(preds.y_original, *preds.y_counterfactual, config.margin)
                     : pairwise_hinge(*preds.y_counterfactual, preds.y_original, config.margin);
    }
    out.pairwise *= config.alpha;
    out.total = out.pointwise + out.pairwise;
    return out;
}

ImportanceProfile align_importance(const ImportanceProfile& profile,
                                   const FittedFeatures& feats) {
    ImportanceProfile out;
    for (const auto& f : feats.schema.fields) {
        if (f.kind != FieldKind::Numerical) continue;
        auto it = std::find(profile.field_names.begin(), profile.field_names.end(), f.name);
        if (it == profile.field_names.end())
            throw ConfigError("importance profile is missing field: " + f.name);
        const std::size_t i = static_cast<std::size_t>(it - profile.field_names.begin());
        out.field_names.push_back(f.name);
        out.q.push_back(profile.q[i]);
        out.p.push_back(profile.p[i]);
        out.eligible.push_back(profile.eligible[i]);
    }
    return out;
}

namespace {

struct TripleSlots {
    std::size_t o = 0;
    int f = -1;  // index into the joint batch, -1 when absent
    int c = -1;
};

struct JointBatch {
    std::vector<EncodedSample> samples;
    std::vector<TripleSlots> slots;
};

JointBatch assemble_joint(const std::vector<SynthTriple>& triples) {
    JointBatch jb;
    jb.slots.resize(triples.size());
    for (std::size_t i = 0; i < triples.size(); ++i) {
        jb.slots[i].o = jb.samples.size();
        jb.samples.push_back(triples[i].original);
        if (triples[i].factual) {
            jb.slots[i].f = static_cast<int>(jb.samples.size());
            jb.samples.push_back(*triples[i].factual);
        }
        if (triples[i].counterfactual) {
            jb.slots[i].c = static_cast<int>(jb.samples.size());
            jb.samples.push_back(*triples[i].counterfactual);
        }
    }
    return jb;
}

TriplePreds preds_for(const std::vector<double>& probs, const TripleSlots& slot) {
    TriplePreds preds;
    preds.y_original = probs[slot.o];
    if (slot.f >= 0) preds.y_factual = probs[slot.f];
    if (slot.c >= 0) preds.y_counterfactual = probs[slot.c];
    return preds;
}

}  // namespace

CompositeBatch composite_batch_gradients(const Model& model,
                                         const std::vector<SynthTriple>& triples,
                                         const TrainConfig& config) {
    if (triples.empty()) throw EmptyDataset("composite_batch_gradients: no triples");
    JointBatch jb = assemble_joint(triples);
    ForwardCache fc = forward(model, jb.samples);
    std::vector<double> probs(fc.logits.size());
    for (std::size_t i = 0; i < probs.size(); ++i) probs[i] = sigmoid(fc.logits[i]);

    const double inv_b = 1.0 / static_cast<double>(triples.size());
    std::vector<double> dlogits(jb.samples.size(), 0.0);
    CompositeBatch out;
    for (std::size_t i = 0; i < triples.size(); ++i) {
        const TripleSlots& slot = jb.slots[i];
        const double y = triples[i].original.label;
        const bool positive = y == 1.0;
        CompositeBreakdown bd = composite_loss(preds_for(probs, slot), y, config);
        out.pointwise += bd.pointwise * inv_b;
        out.pairwise += bd.pairwise * inv_b;

        dlogits[slot.o] += pointwise_dlogit(probs[slot.o], y) * inv_b;
        if (config.factual_pointwise && slot.f >= 0)
            dlogits[slot.f] += pointwise_dlogit(probs[slot.f], y) * inv_b;

        // hinge subgradients through the sigmoid
        auto add_hinge = [&](int hi, int lo) {
            const double p_hi = probs[hi], p_lo = probs[lo];
            if (!hinge_active(p_hi, p_lo, config.margin)) return;
            const double a = config.alpha * inv_b;
            dlogits[hi] += -a * p_hi * (1.0 - p_hi);
            dlogits[lo] += a * p_lo * (1.0 - p_lo);
        };
        const int o = static_cast<int>(slot.o);
        if (config.factual_pairwise && slot.f >= 0) {
            if (positive)
                add_hinge(slot.f, o);
            else
                add_hinge(o, slot.f);
        }
        if (config.counterfactual_pairwise && slot.c >= 0) {
            if (positive)
                add_hinge(o, slot.c);
            else
                add_hinge(slot.c, o);
        }
    }
    out.total = out.pointwise + out.pairwise;
    if (!std::isfinite(out.total)) throw NonFiniteLoss("non-finite batch loss");
    out.grads = backward(model, jb.samples, fc, dlogits);
    return out;
}

CompositeBreakdown composite_batch_loss(const Model& model,
                                        const std::vector<SynthTriple>& triples,
                                        const TrainConfig& config) {
    if (triples.empty()) throw EmptyDataset("composite_batch_loss: no triples");
    JointBatch jb = assemble_joint(triples);
    std::vector<double> probs = predict(model, jb.samples);
    const double inv_b = 1.0 / static_cast<double>(triples.size());
    CompositeBreakdown out;
    for (std::size_t i = 0; i < triples.size(); ++i) {
        CompositeBreakdown bd =
            composite_loss(preds_for(probs, jb.slots[i]), triples[i].original.label, config);
        out.pointwise += bd.pointwise * inv_b;
        out.pairwise += bd.pairwise * inv_b;
    }
    out.total = out.pointwise + out.pairwise;
    return out;
}

TrainResult train(const TrainConfig& config, const ModelSpec& model_spec,
                  const std::vector<EncodedSample>& samples, const FittedFeatures& feats,
                  const ImportanceProfile* importance,
                  const std::vector<EncodedSample>* eval_samples) {
    if (samples.empty()) throw EmptyDataset("train: no samples");

    TrainResult result{build_model(model_spec, feats, config.seed), {}};
    Model& model = result.model;

    // numerical field specs/discretizers in schema order
    std::vector<const FieldSpec*> num_specs;
    for (const auto& f : feats.schema.fields)
        if (f.kind == FieldKind::Numerical) num_specs.push_back(&f);

    std::vector<double> disturb_p;
    if (config.ccss_enabled) {
        const std::vector<bool> eligible = field_eligibility(feats);
        if (config.uniform_disturb) {
            disturb_p = disturb_distribution(std::vector<double>(eligible.size(), 0.0), eligible);
        } else {
            if (!importance)
                throw ConfigError("CCSS training needs an importance profile "
                                  "(or uniform_disturb)");
            ImportanceProfile aligned = align_importance(*importance, feats);
            disturb_p = disturb_distribution(aligned.q, eligible);
        }
    }

    Rng shuffle_rng(Rng::derive(config.seed, 1));
    Rng disturb_rng(Rng::derive(config.seed, 2));
    AdamConfig adam;
    adam.lr = config.lr;

    std::vector<std::size_t> order(samples.size());
    std::iota(order.begin(), order.end(), 0);

    for (std::size_t epoch = 0; epoch < config.epochs; ++epoch) {
        adam.lr = config.lr * std::pow(config.lr_decay, static_cast<double>(epoch));
        if (config.shuffle) shuffle_rng.shuffle(order);

        double ep_point = 0.0, ep_pair = 0.0;
        for (std::size_t start = 0; start < order.size(); start += config.batch_size) {
            const std::size_t end = std::min(order.size(), start + config.batch_size);
            const std::size_t bsz = end - start;

            if (!config.ccss_enabled) {
                std::vector<EncodedSample> batch;
                std::vector<double> labels;
                batch.reserve(bsz);
                for (std::size_t k = start; k < end; ++k) {
                    batch.push_back(samples[order[k]]);
                    labels.push_back(samples[order[k]].label);
                }
                LossAndGrads lg = model_gradients(model, batch, labels);
                if (!std::isfinite(lg.loss)) throw NonFiniteLoss("non-finite batch loss");
                adam_step(model.params, lg.grads, adam);
                ep_point += lg.loss * static_cast<double>(bsz);
                continue;
            }

            // synthesize one triple per sample and run the joint batch
            std::vector<SynthTriple> triples;
            triples.reserve(bsz);
            for (std::size_t k = start; k < end; ++k) {
                const EncodedSample& o = samples[order[k]];
                const std::size_t field = disturb_rng.categorical(disturb_p);
                triples.push_back(
                    synthesize_triple(o, field, feats.discretizers[field], *num_specs[field]));
            }
            CompositeBatch cb = composite_batch_gradients(model, triples, config);
            adam_step(model.params, cb.grads, adam);
            ep_point += cb.pointwise * static_cast<double>(bsz);
            ep_pair += cb.pairwise * static_cast<double>(bsz);
        }

        EpochStats stats;
        stats.pointwise = ep_point / static_cast<double>(samples.size());
        stats.pairwise = ep_pair / static_cast<double>(samples.size());
        stats.lr = adam.lr;
        result.report.epochs.push_back(stats);
    }

    if (eval_samples && !eval_samples->empty()) {
        MetricsReport mr;
        std::vector<double> scores = predict(model, *eval_samples);
        std::vector<double> labels;
        for (const auto& s : *eval_samples) labels.push_back(s.label);
        mr.auc = auc(scores, labels);
        std::size_t ni = 0;
        for (const auto& f : feats.schema.fields) {
            if (f.kind != FieldKind::Numerical) continue;
            if (f.direction != Direction::None && feats.discretizers[ni].n_buckets() >= 2) {
                MonoRateResult r =
                    mono_rate(model, *eval_samples, ni, feats.discretizers[ni], f);
                mr.mono_rate[f.name] = r.rate();
            }
            ++ni;
        }
        result.report.final_metrics = mr;
    }
    return result;
}

}  // namespace monoctr
