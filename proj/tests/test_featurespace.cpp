#include <doctest.h>

#include <algorithm>

#include "monoctr/featurespace.hpp"

using namespace monoctr;

namespace {

FeatureSchema tiny_schema() {
    FeatureSchema s;
    FieldSpec c;
    c.name = "color";
    c.kind = FieldKind::Categorical;
    s.fields.push_back(c);
    FieldSpec n;
    n.name = "count";
    n.kind = FieldKind::Numerical;
    n.n_buckets = 4;
    n.direction = Direction::Increasing;
    s.fields.push_back(n);
    s.label_column = "y";
    return s;
}

}  // namespace

TEST_CASE("quantile discretizer on 1..100 with 4 buckets") {
    std::vector<double> values(100);
    for (int i = 0; i < 100; ++i) values[i] = i + 1;
    Discretizer d = fit_discretizer(values, 4);
    REQUIRE(d.n_buckets() == 4);
    CHECK(d.centers == std::vector<double>{13, 38, 63, 88});
    // bucket populations 25/25/25/25
    std::vector<int> pop(4, 0);
    for (double x : values) pop[d.bucketize(x)] += 1;
    CHECK(pop == std::vector<int>{25, 25, 25, 25});
}

TEST_CASE("discretizer collapses duplicate quantiles") {
    Discretizer d = fit_discretizer({0, 0, 0, 1}, 2);
    REQUIRE(d.n_buckets() == 2);
    CHECK(d.centers == std::vector<double>{0, 1});
    CHECK(d.bucketize(0) == 0);
    CHECK(d.bucketize(1) == 1);
}

TEST_CASE("constant column is degenerate") {
    CHECK_THROWS_AS(fit_discretizer({5, 5, 5, 5}, 2), DegenerateFeature);
    CHECK_THROWS_AS(fit_discretizer({1, 2, 3}, 1), InvalidBucketCount);
}

TEST_CASE("bucketize clamps and sends cut values right") {
    Discretizer d;
    d.cuts = {25.5, 50.5, 75.5};
    d.centers = {10, 40, 60, 90};
    CHECK(d.bucketize(-100) == 0);
    CHECK(d.bucketize(1000) == 3);
    CHECK(d.bucketize(50.5) == 2);
    CHECK(d.bucketize(50.4999) == 1);
}

TEST_CASE("bucket_center bounds") {
    std::vector<double> values(100);
    for (int i = 0; i < 100; ++i) values[i] = i + 1;
    Discretizer d = fit_discretizer(values, 4);
    CHECK(d.bucket_center(0) == 13);
    CHECK(d.bucket_center(3) == 88);
    CHECK_THROWS_AS(d.bucket_center(4), IndexOutOfRange);
}

TEST_CASE("bucketize of bucket_center is the identity") {
    // heavily tied, skewed data
    std::vector<double> values;
    for (int i = 0; i < 50; ++i) values.push_back(0);
    for (int i = 0; i < 30; ++i) values.push_back(i % 5);
    for (int i = 0; i < 20; ++i) values.push_back(i * i);
    Discretizer d = fit_discretizer(values, 8);
    for (std::size_t i = 0; i < d.n_buckets(); ++i)
        CHECK(d.bucketize(d.bucket_center(i)) == i);
}

TEST_CASE("dense transform is strictly increasing and centered") {
    FieldSpec spec;
    spec.kind = FieldKind::Numerical;
    spec.mu = 0.0;
    spec.sigma = 1.0;
    CHECK(dense_transform(spec, 0.0) == 0.0);
    double prev = dense_transform(spec, 0.0);
    for (double x = 0.5; x < 100; x *= 2) {
        double z = dense_transform(spec, x);
        CHECK(z > prev);
        prev = z;
    }
}

TEST_CASE("zero variance at fit time") {
    FieldSpec spec;
    spec.kind = FieldKind::Numerical;
    CHECK_THROWS_AS(fit_dense_transform(spec, {3, 3, 3}), ZeroVariance);
}

TEST_CASE("fit and encode round trip") {
    std::vector<RawRecord> records;
    for (int i = 0; i < 40; ++i) {
        RawRecord r;
        r["color"] = (i % 2) ? "red" : "blue";
        r["count"] = std::to_string(i + 1);
        r["y"] = (i % 3) ? "0" : "1";
        records.push_back(r);
    }
    FittedFeatures feats = fit_features(tiny_schema(), records);
    CHECK(feats.n_categorical() == 1);
    CHECK(feats.n_numerical() == 1);
    CHECK(feats.schema.fields[0].vocab_size == 3);  // OOV + 2 seen

    EncodedSample s = encode_sample(feats, records[0]);
    CHECK(s.cat_ids.size() == 1);
    CHECK(s.bucket_ids.size() == 1);
    CHECK(s.dense.size() == 1);
    CHECK(s.has_label);
    CHECK(s.label == 1.0);

    RawRecord unseen = records[0];
    unseen["color"] = "green";
    CHECK(encode_sample(feats, unseen).cat_ids[0] == 0);

    RawRecord missing = records[0];
    missing.erase("count");
    CHECK_THROWS_AS(encode_sample(feats, missing), MissingValue);

    RawRecord garbage = records[0];
    garbage["count"] = "abc";
    CHECK_THROWS_AS(encode_sample(feats, garbage), ParseError);
}

TEST_CASE("bucket index is non-decreasing in the raw value") {
    std::vector<double> values;
    for (int i = 0; i < 500; ++i) values.push_back((i * 37) % 91 + 0.25 * (i % 4));
    Discretizer d = fit_discretizer(values, 10);
    std::sort(values.begin(), values.end());
    std::size_t prev = 0;
    for (double x : values) {
        std::size_t b = d.bucketize(x);
        CHECK(b >= prev);
        prev = b;
    }
}
