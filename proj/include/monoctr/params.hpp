#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "monoctr/tensor.hpp"

namespace monoctr {

enum class InitKind { Zeros, XavierUniform };

struct ParamLayoutEntry {
    std::string name;
    std::vector<std::size_t> shape;
    InitKind init = InitKind::Zeros;
};

/// Named parameter tensors plus the Adam moment state that shadows them.
struct ParamStore {
    std::map<std::string, Tensor> params;
    std::map<std::string, Tensor> m;  // first moments
    std::map<std::string, Tensor> v;  // second moments
    std::uint64_t t = 0;              // optimizer step counter

    Tensor& operator[](const std::string& name) { return params.at(name); }
    const Tensor& at(const std::string& name) const { return params.at(name); }
    bool has(const std::string& name) const { return params.count(name) != 0; }
};

using GradMap = std::map<std::string, Tensor>;

struct AdamConfig {
    double lr = 0.001;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double eps = 1e-8;
};

/// Deterministic initialization. Xavier-uniform bound uses fan_in/fan_out
/// from the first two dimensions (a 1-D shape uses its length for both).
ParamStore init_params(const std::vector<ParamLayoutEntry>& layout, std::uint64_t seed);

/// One bias-corrected Adam update over every parameter in `grads`.
void adam_step(ParamStore& store, const GradMap& grads, const AdamConfig& cfg);

/// Central-difference gradient check. Returns the worst relative error over
/// all parameter elements, comparing `analytic` against (L(p+eps)-L(p-eps))/2eps.
double finite_diff_check(const std::function<double(ParamStore&)>& loss_fn,
                         ParamStore store, const GradMap& analytic, double eps);

}  // namespace monoctr
