#include "monoctr/backbones.hpp"

#include <cmath>

#include "monoctr/loss.hpp"

namespace monoctr {

BackboneKind backbone_from_string(const std::string& s) {
    if (s == "dnn") return BackboneKind::Dnn;
    if (s == "wide_deep") return BackboneKind::WideDeep;
    if (s == "dcn") return BackboneKind::Dcn;
    if (s == "deepfm" || s == "pnn")
        throw UnsupportedKind("backbone '" + s + "' is not enabled in this build");
    throw UnsupportedKind("unknown backbone: " + s);
}

std::string to_string(BackboneKind k) {
    switch (k) {
        case BackboneKind::Dnn: return "dnn";
        case BackboneKind::WideDeep: return "wide_deep";
        default: return "dcn";
    }
}

Model build_model(const ModelSpec& spec, const FittedFeatures& feats, std::uint64_t seed) {
    Model model;
    model.spec = spec;
    for (const auto& f : feats.schema.fields) {
        if (f.kind == FieldKind::Categorical)
            model.cat_vocab_sizes.push_back(f.vocab_size);
        else
            model.num_bucket_counts.push_back(f.n_buckets);
    }

    const std::size_t d = spec.embed_dim;
    std::vector<ParamLayoutEntry> layout;
    for (std::size_t i = 0; i < model.n_cat(); ++i)
        layout.push_back({"emb_cat_" + std::to_string(i),
                          {model.cat_vocab_sizes[i], d},
                          InitKind::XavierUniform});
    for (std::size_t j = 0; j < model.n_num(); ++j)
        layout.push_back({"emb_num_" + std::to_string(j),
                          {model.num_bucket_counts[j], d},
                          InitKind::XavierUniform});

    std::size_t in = model.input_width();
    for (std::size_t l = 0; l < spec.hidden.size(); ++l) {
        layout.push_back({"mlp_w" + std::to_string(l), {in, spec.hidden[l]}, InitKind::XavierUniform});
        layout.push_back({"mlp_b" + std::to_string(l), {spec.hidden[l]}, InitKind::Zeros});
        in = spec.hidden[l];
    }

    if (spec.kind == BackboneKind::Dnn || spec.kind == BackboneKind::WideDeep) {
        layout.push_back({"head_w", {in, 1}, InitKind::XavierUniform});
        layout.push_back({"head_b", {1}, InitKind::Zeros});
    }
    if (spec.kind == BackboneKind::WideDeep) {
        for (std::size_t i = 0; i < model.n_cat(); ++i)
            layout.push_back({"wide_cat_" + std::to_string(i),
                              {model.cat_vocab_sizes[i]},
                              InitKind::Zeros});
        if (model.n_num() > 0)
            layout.push_back({"wide_dense", {model.n_num()}, InitKind::Zeros});
        layout.push_back({"wide_b", {1}, InitKind::Zeros});
    }
    if (spec.kind == BackboneKind::Dcn) {
        const std::size_t z0dim = model.input_width();
        for (std::size_t l = 0; l < spec.cross_depth; ++l) {
            layout.push_back({"cross_w" + std::to_string(l), {z0dim}, InitKind::XavierUniform});
            layout.push_back({"cross_b" + std::to_string(l), {z0dim}, InitKind::Zeros});
        }
        layout.push_back({"comb_w", {z0dim + in, 1}, InitKind::XavierUniform});
        layout.push_back({"comb_b", {1}, InitKind::Zeros});
    }

    model.params = init_params(layout, seed);
    return model;
}

namespace {

// z0 layout: [cat embeddings | num embeddings | dense values]
Tensor assemble_input(const Model& model, const std::vector<EncodedSample>& batch) {
    const std::size_t d = model.spec.embed_dim;
    const std::size_t width = model.input_width();
    Tensor z0 = Tensor::zeros({batch.size(), width});
    for (std::size_t b = 0; b < batch.size(); ++b) {
        const EncodedSample& s = batch[b];
        if (s.cat_ids.size() != model.n_cat() || s.bucket_ids.size() != model.n_num() ||
            s.dense.size() != model.n_num())
            throw ShapeMismatch("sample does not match model schema");
        std::size_t off = 0;
        for (std::size_t i = 0; i < model.n_cat(); ++i) {
            const int id = s.cat_ids[i];
            if (id < 0 || static_cast<std::size_t>(id) >= model.cat_vocab_sizes[i])
                throw IndexOutOfRange("categorical id out of range");
            const Tensor& table = model.params.at("emb_cat_" + std::to_string(i));
            for (std::size_t c = 0; c < d; ++c) z0.at(b, off + c) = table.at(id, c);
            off += d;
        }
        for (std::size_t j = 0; j < model.n_num(); ++j) {
            const int id = s.bucket_ids[j];
            if (id < 0 || static_cast<std::size_t>(id) >= model.num_bucket_counts[j])
                throw IndexOutOfRange("bucket id out of range");
            const Tensor& table = model.params.at("emb_num_" + std::to_string(j));
            for (std::size_t c = 0; c < d; ++c) z0.at(b, off + c) = table.at(id, c);
            off += d;
        }
        for (std::size_t j = 0; j < model.n_num(); ++j) z0.at(b, off + j) = s.dense[j];
    }
    return z0;
}

// out[b,:] = in[b,:] * W + bias
Tensor affine(const Tensor& in, const Tensor& w, const Tensor& bias) {
    const std::size_t B = in.rows(), I = in.cols(), O = w.cols();
    Tensor out = Tensor::zeros({B, O});
    for (std::size_t b = 0; b < B; ++b) {
        for (std::size_t o = 0; o < O; ++o) out.at(b, o) = bias.v[o];
        for (std::size_t i = 0; i < I; ++i) {
            const double x = in.at(b, i);
            if (x == 0.0) continue;
            for (std::size_t o = 0; o < O; ++o) out.at(b, o) += x * w.at(i, o);
        }
    }
    return out;
}

}  // namespace

ForwardCache forward(const Model& model, const std::vector<EncodedSample>& batch) {
    if (batch.empty()) throw EmptyDataset("forward: empty batch");
    ForwardCache cache;
    cache.batch = batch.size();
    cache.z0 = assemble_input(model, batch);

    // deep tower (all backbones)
    const Tensor* cur = &cache.z0;
    for (std::size_t l = 0; l < model.spec.hidden.size(); ++l) {
        Tensor pre = affine(*cur, model.params.at("mlp_w" + std::to_string(l)),
                            model.params.at("mlp_b" + std::to_string(l)));
        Tensor act = pre;
        for (double& x : act.v) x = std::max(0.0, x);
        cache.pre.push_back(std::move(pre));
        cache.act.push_back(std::move(act));
        cur = &cache.act.back();
    }
    const Tensor& deep_out = *cur;

    const std::size_t B = batch.size();
    cache.logits.assign(B, 0.0);

    if (model.spec.kind == BackboneKind::Dcn) {
        const std::size_t z0dim = model.input_width();
        cache.cross_x.push_back(cache.z0);
        for (std::size_t l = 0; l < model.spec.cross_depth; ++l) {
            const Tensor& w = model.params.at("cross_w" + std::to_string(l));
            const Tensor& bias = model.params.at("cross_b" + std::to_string(l));
            const Tensor& xl = cache.cross_x.back();
            Tensor xn = Tensor::zeros({B, z0dim});
            std::vector<double> dots(B, 0.0);
            for (std::size_t b = 0; b < B; ++b) {
                double s = 0.0;
                for (std::size_t i = 0; i < z0dim; ++i) s += w.v[i] * xl.at(b, i);
                dots[b] = s;
                for (std::size_t i = 0; i < z0dim; ++i)
                    xn.at(b, i) = cache.z0.at(b, i) * s + bias.v[i] + xl.at(b, i);
            }
            cache.cross_dot.push_back(std::move(dots));
            cache.cross_x.push_back(std::move(xn));
        }
        const Tensor& comb_w = model.params.at("comb_w");
        const double comb_b = model.params.at("comb_b").v[0];
        const Tensor& xL = cache.cross_x.back();
        const std::size_t hdim = deep_out.cols();
        for (std::size_t b = 0; b < B; ++b) {
            double z = comb_b;
            for (std::size_t i = 0; i < z0dim; ++i) z += comb_w.v[i] * xL.at(b, i);
            for (std::size_t i = 0; i < hdim; ++i) z += comb_w.v[z0dim + i] * deep_out.at(b, i);
            cache.logits[b] = z;
        }
    } else {
        const Tensor& head_w = model.params.at("head_w");
        const double head_b = model.params.at("head_b").v[0];
        for (std::size_t b = 0; b < B; ++b) {
            double z = head_b;
            for (std::size_t i = 0; i < deep_out.cols(); ++i)
                z += head_w.v[i] * deep_out.at(b, i);
            cache.logits[b] = z;
        }
        if (model.spec.kind == BackboneKind::WideDeep) {
            const Tensor& wd = model.params.at("wide_dense");
            const double wb = model.params.at("wide_b").v[0];
            for (std::size_t b = 0; b < B; ++b) {
                double z = wb;
                for (std::size_t i = 0; i < model.n_cat(); ++i)
                    z += model.params.at("wide_cat_" + std::to_string(i)).v[batch[b].cat_ids[i]];
                for (std::size_t j = 0; j < model.n_num(); ++j)
                    z += wd.v[j] * batch[b].dense[j];
                cache.logits[b] += z;
            }
        }
    }
    for (double z : cache.logits)
        if (!std::isfinite(z)) throw NonFiniteValue("non-finite logit in forward pass");
    return cache;
}

std::vector<double> predict(const Model& model, const std::vector<EncodedSample>& batch) {
    ForwardCache cache = forward(model, batch);
    std::vector<double> out(cache.logits.size());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = sigmoid(cache.logits[i]);
    return out;
}

GradMap backward(const Model& model, const std::vector<EncodedSample>& batch,
                 const ForwardCache& cache, const std::vector<double>& dlogits) {
    if (dlogits.size() != batch.size()) throw ShapeMismatch("dlogits size mismatch");
    GradMap grads;
    for (const auto& [name, p] : model.params.params) grads[name] = Tensor::zeros(p.shape);

    const std::size_t B = batch.size();
    const std::size_t z0dim = model.input_width();
    const Tensor& deep_out = model.spec.hidden.empty() ? cache.z0 : cache.act.back();
    const std::size_t hdim = deep_out.cols();

    Tensor d_deep = Tensor::zeros({B, hdim});
    Tensor d_z0 = Tensor::zeros({B, z0dim});

    if (model.spec.kind == BackboneKind::Dcn) {
        const Tensor& comb_w = model.params.at("comb_w");
        Tensor& d_comb_w = grads.at("comb_w");
        Tensor& d_comb_b = grads.at("comb_b");
        const Tensor& xL = cache.cross_x.back();
        Tensor dx = Tensor::zeros({B, z0dim});  // dL/dx_L
        for (std::size_t b = 0; b < B; ++b) {
            const double g = dlogits[b];
            d_comb_b.v[0] += g;
            for (std::size_t i = 0; i < z0dim; ++i) {
                d_comb_w.v[i] += g * xL.at(b, i);
                dx.at(b, i) = g * comb_w.v[i];
            }
            for (std::size_t i = 0; i < hdim; ++i) {
                d_comb_w.v[z0dim + i] += g * deep_out.at(b, i);
                d_deep.at(b, i) = g * comb_w.v[z0dim + i];
            }
        }
        // x_{l+1} = z0 * (w_l . x_l) + b_l + x_l
        for (std::size_t l = model.spec.cross_depth; l-- > 0;) {
            const Tensor& w = model.params.at("cross_w" + std::to_string(l));
            Tensor& dw = grads.at("cross_w" + std::to_string(l));
            Tensor& db = grads.at("cross_b" + std::to_string(l));
            const Tensor& xl = cache.cross_x[l];
            for (std::size_t b = 0; b < B; ++b) {
                double ds = 0.0;
                for (std::size_t i = 0; i < z0dim; ++i) ds += dx.at(b, i) * cache.z0.at(b, i);
                const double s = cache.cross_dot[l][b];
                for (std::size_t i = 0; i < z0dim; ++i) {
                    const double dxi = dx.at(b, i);
                    dw.v[i] += ds * xl.at(b, i);
                    db.v[i] += dxi;
                    d_z0.at(b, i) += dxi * s;  // direct z0 factor
                    dx.at(b, i) = dxi + ds * w.v[i];
                }
            }
        }
        for (std::size_t i = 0; i < B * z0dim; ++i) d_z0.v[i] += dx.v[i];
    } else {
        const Tensor& head_w = model.params.at("head_w");
        Tensor& d_head_w = grads.at("head_w");
        Tensor& d_head_b = grads.at("head_b");
        for (std::size_t b = 0; b < B; ++b) {
            const double g = dlogits[b];
            d_head_b.v[0] += g;
            for (std::size_t i = 0; i < hdim; ++i) {
                d_head_w.v[i] += g * deep_out.at(b, i);
                d_deep.at(b, i) = g * head_w.v[i];
            }
        }
        if (model.spec.kind == BackboneKind::WideDeep) {
            Tensor& d_wide_dense = grads.at("wide_dense");
            Tensor& d_wide_b = grads.at("wide_b");
            for (std::size_t b = 0; b < B; ++b) {
                const double g = dlogits[b];
                d_wide_b.v[0] += g;
                for (std::size_t i = 0; i < model.n_cat(); ++i)
                    grads.at("wide_cat_" + std::to_string(i)).v[batch[b].cat_ids[i]] += g;
                for (std::size_t j = 0; j < model.n_num(); ++j)
                    d_wide_dense.v[j] += g * batch[b].dense[j];
            }
        }
    }

    // MLP tower
    Tensor d_cur = std::move(d_deep);
    for (std::size_t l = model.spec.hidden.size(); l-- > 0;) {
        const Tensor& pre = cache.pre[l];
        const Tensor& below = (l == 0) ? cache.z0 : cache.act[l - 1];
        const Tensor& w = model.params.at("mlp_w" + std::to_string(l));
        Tensor& dw = grads.at("mlp_w" + std::to_string(l));
        Tensor& db = grads.at("mlp_b" + std::to_string(l));
        const std::size_t I = below.cols(), O = pre.cols();
        Tensor d_below = Tensor::zeros({B, I});
        for (std::size_t b = 0; b < B; ++b) {
            for (std::size_t o = 0; o < O; ++o) {
                if (pre.at(b, o) <= 0.0) continue;  // ReLU gate
                const double g = d_cur.at(b, o);
                if (g == 0.0) continue;
                db.v[o] += g;
                for (std::size_t i = 0; i < I; ++i) {
                    dw.at(i, o) += g * below.at(b, i);
                    d_below.at(b, i) += g * w.at(i, o);
                }
            }
        }
        d_cur = std::move(d_below);
    }
    for (std::size_t i = 0; i < B * z0dim; ++i) d_z0.v[i] += d_cur.v[i];

    // scatter z0 gradient into embedding tables (dense slots have no params)
    const std::size_t d = model.spec.embed_dim;
    for (std::size_t b = 0; b < B; ++b) {
        std::size_t off = 0;
        for (std::size_t i = 0; i < model.n_cat(); ++i) {
            Tensor& g = grads.at("emb_cat_" + std::to_string(i));
            const int id = batch[b].cat_ids[i];
            for (std::size_t c = 0; c < d; ++c) g.at(id, c) += d_z0.at(b, off + c);
            off += d;
        }
        for (std::size_t j = 0; j < model.n_num(); ++j) {
            Tensor& g = grads.at("emb_num_" + std::to_string(j));
            const int id = batch[b].bucket_ids[j];
            for (std::size_t c = 0; c < d; ++c) g.at(id, c) += d_z0.at(b, off + c);
            off += d;
        }
    }
    return grads;
}

LossAndGrads model_gradients(const Model& model, const std::vector<EncodedSample>& batch,
                             const std::vector<double>& labels) {
    if (labels.size() != batch.size()) throw ShapeMismatch("labels size mismatch");
    ForwardCache cache = forward(model, batch);
    const double inv_b = 1.0 / static_cast<double>(batch.size());
    double loss = 0.0;
    std::vector<double> dlogits(batch.size());
    for (std::size_t b = 0; b < batch.size(); ++b) {
        const double p = sigmoid(cache.logits[b]);
        loss += pointwise_loss(p, labels[b]) * inv_b;
        dlogits[b] = pointwise_dlogit(p, labels[b]) * inv_b;
    }
    return {loss, backward(model, batch, cache, dlogits)};
}

}  // namespace monoctr
