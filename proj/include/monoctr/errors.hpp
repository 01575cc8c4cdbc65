#pragma once

#include <stdexcept>
#include <string>

namespace monoctr {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

#define MONOCTR_DEFINE_ERROR(Name) \
    struct Name final : Error {    \
        using Error::Error;        \
    }

MONOCTR_DEFINE_ERROR(DuplicateName);
MONOCTR_DEFINE_ERROR(EmptyShape);
MONOCTR_DEFINE_ERROR(ShapeMismatch);
MONOCTR_DEFINE_ERROR(NonFiniteValue);
MONOCTR_DEFINE_ERROR(InvalidBucketCount);
MONOCTR_DEFINE_ERROR(DegenerateFeature);
MONOCTR_DEFINE_ERROR(IndexOutOfRange);
MONOCTR_DEFINE_ERROR(ZeroVariance);
MONOCTR_DEFINE_ERROR(MissingValue);
MONOCTR_DEFINE_ERROR(ParseError);
MONOCTR_DEFINE_ERROR(UnsupportedKind);
MONOCTR_DEFINE_ERROR(EmptyProbeSet);
MONOCTR_DEFINE_ERROR(NoEligibleFields);
MONOCTR_DEFINE_ERROR(IneligibleField);
MONOCTR_DEFINE_ERROR(SingleClass);
MONOCTR_DEFINE_ERROR(NoComparableUsers);
MONOCTR_DEFINE_ERROR(RandomBase);
MONOCTR_DEFINE_ERROR(EmptyDataset);
MONOCTR_DEFINE_ERROR(SchemaMismatch);
MONOCTR_DEFINE_ERROR(EmptyFile);
MONOCTR_DEFINE_ERROR(VersionMismatch);
MONOCTR_DEFINE_ERROR(CorruptFile);
MONOCTR_DEFINE_ERROR(NonFiniteLoss);
MONOCTR_DEFINE_ERROR(ConfigError);

#undef MONOCTR_DEFINE_ERROR

}  // namespace monoctr
