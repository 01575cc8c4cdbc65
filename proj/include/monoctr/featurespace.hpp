#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "monoctr/errors.hpp"

namespace monoctr {

enum class FieldKind { Categorical, Numerical };
enum class Direction { Increasing, Decreasing, None };

std::string to_string(Direction d);
Direction direction_from_string(const std::string& s);

/// Declaration of one input column. For numerical fields, mu/sigma are the
/// fitted parameters of the log1p z-score transform (filled at fit time).
struct FieldSpec {
    std::string name;
    FieldKind kind = FieldKind::Categorical;
    std::size_t vocab_size = 0;   // categorical, id 0 reserved for OOV
    std::size_t n_buckets = 10;   // numerical, requested bucket count
    Direction direction = Direction::None;
    double mu = 0.0;
    double sigma = 1.0;
    bool log_transform = true;    // false: raw pass-through z-score
};

struct FeatureSchema {
    std::vector<FieldSpec> fields;  // categorical block first, then numerical
    std::string label_column;

    std::vector<std::size_t> categorical_indices() const;
    std::vector<std::size_t> numerical_indices() const;
    const FieldSpec* find(const std::string& name) const;
};

/// Equal-frequency discretizer for one numerical field: w-1 strictly
/// increasing cut points and w per-bucket median centers. A value equal to a
/// cut point falls into the bucket on the right.
struct Discretizer {
    std::vector<double> cuts;
    std::vector<double> centers;

    std::size_t n_buckets() const { return centers.size(); }
    std::size_t bucketize(double x) const;
    double bucket_center(std::size_t i) const;
};

Discretizer fit_discretizer(std::vector<double> values, std::size_t n_buckets);

/// Fit mu/sigma of the dense transform on training values; mutates spec.
void fit_dense_transform(FieldSpec& spec, const std::vector<double>& values);
double dense_transform(const FieldSpec& spec, double x);

/// One model-ready record: categorical ids, numerical bucket ids, the
/// transformed dense vector, plus the raw numerical values they came from.
struct EncodedSample {
    std::vector<int> cat_ids;
    std::vector<int> bucket_ids;
    std::vector<double> dense;
    std::vector<double> raw_num;
    double label = 0.0;
    bool has_label = false;
};

/// Schema plus everything learned at fit time: categorical vocabularies,
/// discretizers and dense-transform parameters. Immutable after fit.
struct FittedFeatures {
    FeatureSchema schema;
    // one vocab map per categorical field (in schema categorical order)
    std::vector<std::map<std::string, int>> vocabs;
    // one discretizer per numerical field (in schema numerical order)
    std::vector<Discretizer> discretizers;

    std::size_t n_categorical() const { return vocabs.size(); }
    std::size_t n_numerical() const { return discretizers.size(); }
};

/// Raw record: column name -> cell text.
using RawRecord = std::map<std::string, std::string>;

/// Fit vocabularies, discretizers and dense transforms from raw records.
FittedFeatures fit_features(const FeatureSchema& schema,
                            const std::vector<RawRecord>& records);

EncodedSample encode_sample(const FittedFeatures& feats, const RawRecord& record);

}  // namespace monoctr
