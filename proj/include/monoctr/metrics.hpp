#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "monoctr/backbones.hpp"
#include "monoctr/synthesizer.hpp"

namespace monoctr {

/// Mann-Whitney AUC; tied scores contribute half credit per tied pair.
double auc(const std::vector<double>& scores, const std::vector<double>& labels);

struct UserGroup {
    std::vector<double> scores;
    std::vector<double> labels;
};

/// Impression-weighted mean of per-user AUC. Users with a single label class
/// are excluded from both numerator and denominator.
double gauc(const std::vector<UserGroup>& users);

/// Relative improvement over a base model against the 0.5 random floor, in percent.
double rela_impr(double measured, double base);

struct MonoRateResult {
    std::size_t valid = 0;
    std::size_t comparable = 0;
    double rate() const {
        return comparable == 0 ? 0.0 : static_cast<double>(valid) / static_cast<double>(comparable);
    }
};

using Scorer = std::function<double(const EncodedSample&)>;

/// Fraction of synthesized neighbor-bucket pairs whose scores are ordered
/// consistently with the monotone prior. Strict inequalities; ties are
/// violations.
MonoRateResult mono_rate_scored(const std::vector<SynthTriple>& triples, const Scorer& score);

MonoRateResult mono_rate(const Model& model, const std::vector<EncodedSample>& samples,
                         std::size_t field, const Discretizer& disc, const FieldSpec& spec);

struct MetricsReport {
    double auc = 0.0;
    std::optional<double> gauc;
    std::map<std::string, double> mono_rate;  // field name -> rate
    std::optional<double> rela_impr_auc;
    std::optional<double> rela_impr_gauc;
};

}  // namespace monoctr
