#include "monoctr/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "monoctr/loss.hpp"

namespace monoctr {

double auc(const std::vector<double>& scores, const std::vector<double>& labels) {
    if (scores.size() != labels.size()) throw ShapeMismatch("auc: size mismatch");
    std::size_t n_pos = 0, n_neg = 0;
    for (double y : labels) (y == 1.0 ? n_pos : n_neg) += 1;
    if (n_pos == 0 || n_neg == 0) throw SingleClass("auc needs both label classes");

    std::vector<std::size_t> order(scores.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });

    // rank-sum with average ranks over tie groups
    double pos_rank_sum = 0.0;
    std::size_t i = 0;
    while (i < order.size()) {
        std::size_t j = i;
        while (j < order.size() && scores[order[j]] == scores[order[i]]) ++j;
        const double avg_rank = 0.5 * static_cast<double>(i + 1 + j);  // ranks are 1-based
        for (std::size_t k = i; k < j; ++k)
            if (labels[order[k]] == 1.0) pos_rank_sum += avg_rank;
        i = j;
    }
    const double u = pos_rank_sum - 0.5 * static_cast<double>(n_pos) * (n_pos + 1);
    return u / (static_cast<double>(n_pos) * static_cast<double>(n_neg));
}

double gauc(const std::vector<UserGroup>& users) {
    double num = 0.0, den = 0.0;
    for (const auto& u : users) {
        bool has_pos = false, has_neg = false;
        for (double y : u.labels) (y == 1.0 ? has_pos : has_neg) = true;
        if (!has_pos || !has_neg) continue;
        const double w = static_cast<double>(u.scores.size());
        num += w * auc(u.scores, u.labels);
        den += w;
    }
    if (den == 0.0) throw NoComparableUsers("no user has both label classes");
    return num / den;
}

double rela_impr(double measured, double base) {
    if (std::abs(base - 0.5) < 1e-12) throw RandomBase("base model is a random guesser");
    return ((measured - 0.5) / (base - 0.5) - 1.0) * 100.0;
}

MonoRateResult mono_rate_scored(const std::vector<SynthTriple>& triples, const Scorer& score) {
    if (triples.empty()) throw EmptyDataset("mono_rate: no triples");
    MonoRateResult r;
    for (const auto& t : triples) {
        const bool positive = t.original.label == 1.0;
        const double s_o = score(t.original);
        if (t.factual) {
            const double s_f = score(*t.factual);
            r.comparable += 1;
            if (positive ? s_f > s_o : s_f < s_o) r.valid += 1;
        }
        if (t.counterfactual) {
            const double s_c = score(*t.counterfactual);
            r.comparable += 1;
            if (positive ? s_c < s_o : s_c > s_o) r.valid += 1;
        }
    }
    return r;
}

MonoRateResult mono_rate(const Model& model, const std::vector<EncodedSample>& samples,
                         std::size_t field, const Discretizer& disc, const FieldSpec& spec) {
    if (samples.empty()) throw EmptyDataset("mono_rate: empty dataset");
    auto triples = synthesize_eval_pairs(samples, field, disc, spec);

    // score all originals and perturbations in one forward pass per role
    std::vector<EncodedSample> batch;
    batch.reserve(3 * triples.size());
    for (const auto& t : triples) {
        batch.push_back(t.original);
        if (t.factual) batch.push_back(*t.factual);
        if (t.counterfactual) batch.push_back(*t.counterfactual);
    }
    std::vector<double> probs = predict(model, batch);

    MonoRateResult r;
    std::size_t idx = 0;
    for (const auto& t : triples) {
        const bool positive = t.original.label == 1.0;
        const double s_o = probs[idx++];
        if (t.factual) {
            const double s_f = probs[idx++];
            r.comparable += 1;
            if (positive ? s_f > s_o : s_f < s_o) r.valid += 1;
        }
        if (t.counterfactual) {
            const double s_c = probs[idx++];
            r.comparable += 1;
            if (positive ? s_c < s_o : s_c > s_o) r.valid += 1;
        }
    }
    return r;
}

}  // namespace monoctr
