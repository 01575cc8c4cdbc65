#include "monoctr/importance.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <json.hpp>

#include "monoctr/rng.hpp"

namespace monoctr {

namespace {

// replace one numerical field with a raw value (bucket id + dense + raw)
void set_field(EncodedSample& s, std::size_t field, double raw, const Discretizer& disc,
               const FieldSpec& spec) {
    s.bucket_ids[field] = static_cast<int>(disc.bucketize(raw));
    s.dense[field] = dense_transform(spec, raw);
    s.raw_num[field] = raw;
}

}  // namespace

std::vector<bool> field_eligibility(const FittedFeatures& feats) {
    std::vector<bool> out;
    std::size_t ni = 0;
    for (const auto& f : feats.schema.fields) {
        if (f.kind != FieldKind::Numerical) continue;
        out.push_back(f.direction != Direction::None &&
                      feats.discretizers[ni].n_buckets() >= 2);
        ++ni;
    }
    return out;
}

std::vector<double> estimate_shapley(const Model& model, const FittedFeatures& feats,
                                     const std::vector<EncodedSample>& probe,
                                     const ShapleyConfig& config) {
    if (probe.empty()) throw EmptyProbeSet("estimate_shapley: no probe samples");
    const std::size_t n_num = model.n_num();
    if (config.reference_raw.size() != n_num)
        throw ShapeMismatch("reference_raw must have one value per numerical field");

    std::vector<const FieldSpec*> num_specs;
    for (const auto& f : feats.schema.fields)
        if (f.kind == FieldKind::Numerical) num_specs.push_back(&f);

    const std::size_t n_samples = std::min(config.n_probe_samples, probe.size());
    Rng rng(Rng::derive(config.seed, 0));

    std::vector<double> q(n_num, 0.0);
    std::vector<std::size_t> perm(n_num);
    for (std::size_t si = 0; si < n_samples; ++si) {
        const EncodedSample& truth = probe[si];
        EncodedSample base = truth;
        for (std::size_t j = 0; j < n_num; ++j)
            set_field(base, j, config.reference_raw[j], feats.discretizers[j], *num_specs[j]);

        for (std::size_t pi = 0; pi < config.n_permutations; ++pi) {
            std::iota(perm.begin(), perm.end(), 0);
            rng.shuffle(perm);

            // the chain of coalition states along the permutation, plus the
            // all-reference start; one batched forward per chain
            std::vector<EncodedSample> chain;
            chain.reserve(n_num + 1);
            EncodedSample state = base;
            chain.push_back(state);
            for (std::size_t j : perm) {
                set_field(state, j, truth.raw_num[j], feats.discretizers[j], *num_specs[j]);
                chain.push_back(state);
            }
            ForwardCache fc = forward(model, chain);
            for (std::size_t step = 0; step < n_num; ++step)
                q[perm[step]] += std::abs(fc.logits[step + 1] - fc.logits[step]);
        }
    }
    const double norm = static_cast<double>(n_samples) * static_cast<double>(config.n_permutations);
    for (double& x : q) x /= norm;
    return q;
}

std::vector<double> disturb_distribution(const std::vector<double>& q,
                                         const std::vector<bool>& eligible) {
    if (q.size() != eligible.size()) throw ShapeMismatch("q/eligibility size mismatch");
    std::size_t n_elig = 0;
    double total = 0.0;
    for (std::size_t i = 0; i < q.size(); ++i) {
        if (q[i] < 0.0) throw NonFiniteValue("negative importance score");
        if (eligible[i]) {
            ++n_elig;
            total += q[i];
        }
    }
    if (n_elig == 0) throw NoEligibleFields("no field is eligible for disturbance");
    std::vector<double> p(q.size(), 0.0);
    for (std::size_t i = 0; i < q.size(); ++i) {
        if (!eligible[i]) continue;
        p[i] = total > 0.0 ? q[i] / total : 1.0 / static_cast<double>(n_elig);
    }
    return p;
}

ImportanceProfile build_importance_profile(const Model& model, const FittedFeatures& feats,
                                           const std::vector<EncodedSample>& probe,
                                           const ShapleyConfig& config) {
    ImportanceProfile profile;
    for (const auto& f : feats.schema.fields)
        if (f.kind == FieldKind::Numerical) profile.field_names.push_back(f.name);
    profile.eligible = field_eligibility(feats);
    profile.q = estimate_shapley(model, feats, probe, config);
    profile.p = disturb_distribution(profile.q, profile.eligible);
    return profile;
}

std::string importance_to_json(const ImportanceProfile& profile) {
    nlohmann::json j = nlohmann::json::object();
    for (std::size_t i = 0; i < profile.field_names.size(); ++i) {
        j[profile.field_names[i]] = {{"q", profile.q[i]},
                                     {"p", profile.p[i]},
                                     {"eligible", static_cast<bool>(profile.eligible[i])}};
    }
    return j.dump(2);
}

ImportanceProfile importance_from_json(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw CorruptFile(std::string("importance file: ") + e.what());
    }
    ImportanceProfile profile;
    for (const auto& [name, entry] : j.items()) {
        profile.field_names.push_back(name);
        profile.q.push_back(entry.at("q").get<double>());
        profile.p.push_back(entry.at("p").get<double>());
        profile.eligible.push_back(entry.at("eligible").get<bool>());
    }
    return profile;
}

}  // namespace monoctr
