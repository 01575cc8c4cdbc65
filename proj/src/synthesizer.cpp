#include "monoctr/synthesizer.hpp"

namespace monoctr {

namespace {

EncodedSample move_to_bucket(const EncodedSample& o, std::size_t field, int target,
                             const Discretizer& disc, const FieldSpec& spec, bool keep_label) {
    EncodedSample s = o;
    const double center = disc.bucket_center(static_cast<std::size_t>(target));
    s.bucket_ids[field] = target;
    s.raw_num[field] = center;
    s.dense[field] = dense_transform(spec, center);
    if (!keep_label) {
        s.has_label = false;
        s.label = 0.0;
    }
    return s;
}

}  // namespace

SynthTriple synthesize_triple(const EncodedSample& original, std::size_t field,
                              const Discretizer& disc, const FieldSpec& spec) {
    if (spec.direction == Direction::None)
        throw IneligibleField("field '" + spec.name + "' has no monotonic direction");
    const std::size_t w = disc.n_buckets();
    if (w < 2) throw DegenerateFeature("field '" + spec.name + "' has fewer than 2 buckets");
    if (field >= original.bucket_ids.size())
        throw IndexOutOfRange("numerical field index out of range");
    if (!original.has_label) throw MissingValue("original sample has no label");

    const bool positive = original.label == 1.0;
    const bool increasing = spec.direction == Direction::Increasing;
    // increasing & positive: counterfactual moves left, factual moves right;
    // flipping either the label or the direction swaps the two moves.
    const int c_off = (increasing == positive) ? -1 : +1;
    const int f_off = -c_off;

    SynthTriple t;
    t.original = original;
    t.field = field;
    t.direction = spec.direction;

    const int k = original.bucket_ids[field];
    const int f_target = k + f_off;
    const int c_target = k + c_off;
    if (f_target >= 0 && f_target < static_cast<int>(w)) {
        t.factual = move_to_bucket(original, field, f_target, disc, spec, /*keep_label=*/true);
        t.factual_offset = f_off;
    }
    if (c_target >= 0 && c_target < static_cast<int>(w)) {
        t.counterfactual =
            move_to_bucket(original, field, c_target, disc, spec, /*keep_label=*/false);
        t.counterfactual_offset = c_off;
    }
    return t;
}

std::vector<SynthTriple> synthesize_eval_pairs(const std::vector<EncodedSample>& samples,
                                               std::size_t field, const Discretizer& disc,
                                               const FieldSpec& spec) {
    if (spec.direction == Direction::None)
        throw IneligibleField("field '" + spec.name + "' has no monotonic direction");
    std::vector<SynthTriple> out;
    out.reserve(samples.size());
    for (const auto& s : samples) out.push_back(synthesize_triple(s, field, disc, spec));
    return out;
}

}  // namespace monoctr
