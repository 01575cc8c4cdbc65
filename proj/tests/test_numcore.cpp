#include <doctest.h>

#include <cmath>

#include "monoctr/params.hpp"
#include "monoctr/rng.hpp"

using namespace monoctr;

TEST_CASE("init_params zero init") {
    ParamStore s = init_params({{"w", {2, 2}, InitKind::Zeros}}, 42);
    for (double x : s.at("w").v) CHECK(x == 0.0);
    CHECK(s.t == 0);
}

TEST_CASE("init_params is deterministic") {
    std::vector<ParamLayoutEntry> layout = {{"a", {3, 4}, InitKind::XavierUniform},
                                            {"b", {4}, InitKind::Zeros}};
    ParamStore s1 = init_params(layout, 7);
    ParamStore s2 = init_params(layout, 7);
    CHECK(s1.at("a").v == s2.at("a").v);
    ParamStore s3 = init_params(layout, 8);
    CHECK(s1.at("a").v != s3.at("a").v);
}

TEST_CASE("xavier bound for fan_in=fan_out=4") {
    ParamStore s = init_params({{"w", {4, 4}, InitKind::XavierUniform}}, 1);
    const double bound = std::sqrt(6.0 / 8.0);
    bool any_nonzero = false;
    for (double x : s.at("w").v) {
        CHECK(std::abs(x) <= bound);
        if (x != 0.0) any_nonzero = true;
    }
    CHECK(any_nonzero);
}

TEST_CASE("init_params rejects duplicate names and empty shapes") {
    CHECK_THROWS_AS(init_params({{"w", {2}, InitKind::Zeros}, {"w", {2}, InitKind::Zeros}}, 1),
                    DuplicateName);
    CHECK_THROWS_AS(init_params({{"w", {}, InitKind::Zeros}}, 1), EmptyShape);
    CHECK_THROWS_AS(init_params({{"w", {2, 0}, InitKind::Zeros}}, 1), EmptyShape);
}

TEST_CASE("adam zero gradient is identity on parameters") {
    ParamStore s = init_params({{"w", {3, 3}, InitKind::XavierUniform}}, 5);
    const auto before = s.at("w").v;
    GradMap g{{"w", Tensor::zeros({3, 3})}};
    adam_step(s, g, {});
    CHECK(s.at("w").v == before);
    CHECK(s.t == 1);
}

TEST_CASE("adam first step matches hand evaluation") {
    // scalar param 0, grad 1, lr 0.1: m_hat = 1, v_hat = 1, update = -0.1*1/(1+eps)
    ParamStore s = init_params({{"p", {1}, InitKind::Zeros}}, 0);
    GradMap g{{"p", Tensor::scalar(1.0)}};
    AdamConfig cfg;
    cfg.lr = 0.1;
    adam_step(s, g, cfg);
    CHECK(s.t == 1);
    CHECK(s.at("p").v[0] == doctest::Approx(-0.1).epsilon(1e-6));
}

TEST_CASE("adam is stateful: two steps differ from one with doubled lr") {
    ParamStore s1 = init_params({{"p", {1}, InitKind::Zeros}}, 0);
    ParamStore s2 = init_params({{"p", {1}, InitKind::Zeros}}, 0);
    GradMap g{{"p", Tensor::scalar(0.5)}};
    AdamConfig cfg1;
    cfg1.lr = 0.1;
    adam_step(s1, g, cfg1);
    adam_step(s1, g, cfg1);
    AdamConfig cfg2;
    cfg2.lr = 0.2;
    adam_step(s2, g, cfg2);
    CHECK(s1.at("p").v[0] != s2.at("p").v[0]);
}

TEST_CASE("adam rejects bad gradients") {
    ParamStore s = init_params({{"p", {2}, InitKind::Zeros}}, 0);
    GradMap wrong_shape{{"p", Tensor::zeros({3})}};
    CHECK_THROWS_AS(adam_step(s, wrong_shape, {}), ShapeMismatch);
    GradMap nan_grad{{"p", Tensor::zeros({2})}};
    nan_grad.at("p").v[0] = std::nan("");
    CHECK_THROWS_AS(adam_step(s, nan_grad, {}), NonFiniteValue);
}

TEST_CASE("finite_diff_check on a quadratic") {
    ParamStore s = init_params({{"p", {2}, InitKind::Zeros}}, 0);
    s.params.at("p").v = {1.0, 2.0};
    auto loss = [](ParamStore& st) {
        double acc = 0.0;
        for (double x : st.at("p").v) acc += x * x;
        return acc;
    };
    GradMap analytic{{"p", Tensor::zeros({2})}};
    analytic.at("p").v = {2.0, 4.0};
    CHECK(finite_diff_check(loss, s, analytic, 1e-6) < 1e-7);
}

TEST_CASE("finite_diff_check flags a wrong gradient") {
    ParamStore s = init_params({{"p", {1}, InitKind::Zeros}}, 0);
    s.params.at("p").v = {1.0};
    auto loss = [](ParamStore& st) { return st.at("p").v[0] * st.at("p").v[0]; };
    GradMap analytic{{"p", Tensor::scalar(3.0)}};  // true gradient is 2
    CHECK(finite_diff_check(loss, s, analytic, 1e-6) > 0.1);
}

TEST_CASE("constant loss has zero gradient") {
    ParamStore s = init_params({{"p", {4}, InitKind::XavierUniform}}, 3);
    auto loss = [](ParamStore&) { return 1.25; };
    GradMap analytic{{"p", Tensor::zeros({4})}};
    CHECK(finite_diff_check(loss, s, analytic, 1e-6) < 1e-12);
}

TEST_CASE("rng determinism and categorical sampling") {
    Rng a(123), b(123);
    for (int i = 0; i < 100; ++i) CHECK(a.uniform() == b.uniform());

    Rng c(9);
    for (int i = 0; i < 50; ++i) CHECK(c.categorical({0.0, 1.0, 0.0}) == 1);
}
