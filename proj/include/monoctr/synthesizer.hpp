#pragma once

#include <optional>
#include <vector>

#include "monoctr/featurespace.hpp"

namespace monoctr {

/// An original sample with its one-bucket perturbations. Factual carries the
/// original's label; counterfactual has no label. Either may be absent when
/// the move would leave the bucket range.
struct SynthTriple {
    EncodedSample original;
    std::optional<EncodedSample> factual;
    std::optional<EncodedSample> counterfactual;
    std::size_t field = 0;  // numerical field index
    Direction direction = Direction::None;
    int factual_offset = 0;         // ±1, or 0 when absent
    int counterfactual_offset = 0;  // ±1, or 0 when absent
};

/// Move one numerical feature of `original` to a neighbor bucket's center in
/// both directions. `spec` is the FieldSpec of the disturbed numerical field
/// (supplies direction and the dense transform).
SynthTriple synthesize_triple(const EncodedSample& original, std::size_t field,
                              const Discretizer& disc, const FieldSpec& spec);

/// One triple per dataset sample, deterministic and exhaustive (no random
/// field selection); the Mono_rate denominator is built from these.
std::vector<SynthTriple> synthesize_eval_pairs(const std::vector<EncodedSample>& samples,
                                               std::size_t field, const Discretizer& disc,
                                               const FieldSpec& spec);

}  // namespace monoctr
