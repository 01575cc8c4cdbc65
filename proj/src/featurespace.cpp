#include "monoctr/featurespace.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <set>

namespace monoctr {

std::string to_string(Direction d) {
    switch (d) {
        case Direction::Increasing: return "increasing";
        case Direction::Decreasing: return "decreasing";
        default: return "none";
    }
}

Direction direction_from_string(const std::string& s) {
    if (s == "increasing") return Direction::Increasing;
    if (s == "decreasing") return Direction::Decreasing;
    if (s == "none" || s.empty()) return Direction::None;
    throw ConfigError("unknown direction: " + s);
}

std::vector<std::size_t> FeatureSchema::categorical_indices() const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < fields.size(); ++i)
        if (fields[i].kind == FieldKind::Categorical) out.push_back(i);
    return out;
}

std::vector<std::size_t> FeatureSchema::numerical_indices() const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < fields.size(); ++i)
        if (fields[i].kind == FieldKind::Numerical) out.push_back(i);
    return out;
}

const FieldSpec* FeatureSchema::find(const std::string& name) const {
    for (const auto& f : fields)
        if (f.name == name) return &f;
    return nullptr;
}

std::size_t Discretizer::bucketize(double x) const {
    if (!std::isfinite(x)) throw NonFiniteValue("bucketize: non-finite value");
    // bucket index = number of cut points <= x (a value on a cut goes right)
    auto it = std::upper_bound(cuts.begin(), cuts.end(), x);
    return static_cast<std::size_t>(it - cuts.begin());
}

double Discretizer::bucket_center(std::size_t i) const {
    if (i >= centers.size()) throw IndexOutOfRange("bucket index out of range");
    return centers[i];
}

Discretizer fit_discretizer(std::vector<double> values, std::size_t n_buckets) {
    if (n_buckets < 2) throw InvalidBucketCount("n_buckets must be >= 2");
    if (values.empty()) throw EmptyDataset("fit_discretizer: no values");
    for (double x : values)
        if (!std::isfinite(x)) throw NonFiniteValue("fit_discretizer: non-finite value");
    std::sort(values.begin(), values.end());
    const std::size_t n = values.size();

    // distinct values with cumulative counts
    std::vector<double> distinct;
    std::vector<std::size_t> cum;
    for (std::size_t i = 0; i < n; ++i) {
        if (distinct.empty() || values[i] != distinct.back()) {
            distinct.push_back(values[i]);
            cum.push_back(i + 1);
        } else {
            cum.back() = i + 1;
        }
    }
    if (distinct.size() < 2) throw DegenerateFeature("fewer than 2 distinct values");

    // Equal-frequency targets; each cut lands on a distinct value boundary,
    // collapsing duplicates naturally.
    std::set<double> cut_set;
    for (std::size_t k = 1; k < n_buckets; ++k) {
        const double target = static_cast<double>(k * n) / static_cast<double>(n_buckets);
        std::size_t best = 0;
        double best_gap = std::abs(static_cast<double>(cum[0]) - target);
        for (std::size_t i = 1; i + 1 < distinct.size(); ++i) {
            double gap = std::abs(static_cast<double>(cum[i]) - target);
            if (gap < best_gap) {
                best_gap = gap;
                best = i;
            }
        }
        cut_set.insert(distinct[best + 1]);
    }
    Discretizer disc;
    disc.cuts.assign(cut_set.begin(), cut_set.end());
    if (disc.cuts.empty()) throw DegenerateFeature("no cut points survived collapse");

    // center = lower median of the training values assigned to each bucket
    const std::size_t w = disc.cuts.size() + 1;
    std::size_t lo = 0;
    for (std::size_t b = 0; b < w; ++b) {
        std::size_t hi = (b + 1 < w)
                             ? static_cast<std::size_t>(
                                   std::lower_bound(values.begin(), values.end(), disc.cuts[b]) -
                                   values.begin())
                             : n;
        disc.centers.push_back(values[lo + (hi - lo - 1) / 2]);
        lo = hi;
    }
    return disc;
}

void fit_dense_transform(FieldSpec& spec, const std::vector<double>& values) {
    if (values.empty()) throw EmptyDataset("fit_dense_transform: no values");
    double sum = 0.0, sum2 = 0.0;
    for (double x : values) {
        double t = spec.log_transform ? std::log1p(x) : x;
        sum += t;
        sum2 += t * t;
    }
    const double n = static_cast<double>(values.size());
    spec.mu = sum / n;
    double var = std::max(0.0, sum2 / n - spec.mu * spec.mu);
    spec.sigma = std::sqrt(var);
    if (spec.sigma < 1e-12) throw ZeroVariance("constant numerical column: " + spec.name);
}

double dense_transform(const FieldSpec& spec, double x) {
    const double t = spec.log_transform ? std::log1p(x) : x;
    return (t - spec.mu) / spec.sigma;
}

namespace {

double parse_double(const std::string& cell, const std::string& col, std::size_t row) {
    const char* s = cell.c_str();
    char* end = nullptr;
    double x = std::strtod(s, &end);
    if (end == s || *end != '\0' || !std::isfinite(x))
        throw ParseError("non-numeric value '" + cell + "' in column '" + col + "' at row " +
                         std::to_string(row));
    return x;
}

const std::string& cell_of(const RawRecord& record, const std::string& col) {
    auto it = record.find(col);
    if (it == record.end()) throw MissingValue("missing value for column: " + col);
    return it->second;
}

}  // namespace

FittedFeatures fit_features(const FeatureSchema& schema,
                            const std::vector<RawRecord>& records) {
    if (records.empty()) throw EmptyDataset("fit_features: no records");
    FittedFeatures out;
    out.schema = schema;
    for (auto& spec : out.schema.fields) {
        if (spec.kind == FieldKind::Categorical) {
            std::map<std::string, int> vocab;
            int next_id = 1;  // 0 reserved for OOV
            for (const auto& r : records) {
                const std::string& cell = cell_of(r, spec.name);
                if (vocab.emplace(cell, next_id).second) ++next_id;
            }
            spec.vocab_size = static_cast<std::size_t>(next_id);
            out.vocabs.push_back(std::move(vocab));
        } else {
            std::vector<double> values;
            values.reserve(records.size());
            std::size_t row = 0;
            for (const auto& r : records) {
                values.push_back(parse_double(cell_of(r, spec.name), spec.name, row));
                ++row;
            }
            Discretizer disc = fit_discretizer(values, spec.n_buckets);
            spec.n_buckets = disc.n_buckets();
            fit_dense_transform(spec, values);
            out.discretizers.push_back(std::move(disc));
        }
    }
    return out;
}

EncodedSample encode_sample(const FittedFeatures& feats, const RawRecord& record) {
    EncodedSample s;
    std::size_t ci = 0, ni = 0;
    for (const auto& spec : feats.schema.fields) {
        if (spec.kind == FieldKind::Categorical) {
            const std::string& cell = cell_of(record, spec.name);
            const auto& vocab = feats.vocabs[ci++];
            auto it = vocab.find(cell);
            s.cat_ids.push_back(it == vocab.end() ? 0 : it->second);
        } else {
            double x = parse_double(cell_of(record, spec.name), spec.name, 0);
            const Discretizer& disc = feats.discretizers[ni++];
            s.bucket_ids.push_back(static_cast<int>(disc.bucketize(x)));
            s.dense.push_back(dense_transform(spec, x));
            s.raw_num.push_back(x);
        }
    }
    const std::string& lc = feats.schema.label_column;
    if (!lc.empty()) {
        auto it = record.find(lc);
        if (it != record.end()) {
            double y = parse_double(it->second, lc, 0);
            if (y != 0.0 && y != 1.0) throw ParseError("label must be 0 or 1, got " + it->second);
            s.label = y;
            s.has_label = true;
        }
    }
    return s;
}

}  // namespace monoctr
