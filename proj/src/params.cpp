#include "monoctr/params.hpp"

#include <cmath>
#include <functional>
#include <set>

#include "monoctr/errors.hpp"
#include "monoctr/rng.hpp"

namespace monoctr {

ParamStore init_params(const std::vector<ParamLayoutEntry>& layout, std::uint64_t seed) {
    ParamStore store;
    std::set<std::string> seen;
    // One derived stream per entry, keyed by declaration order, so adding a
    // parameter does not reshuffle the values of the ones before it.
    std::uint64_t idx = 0;
    for (const auto& entry : layout) {
        if (!seen.insert(entry.name).second)
            throw DuplicateName("duplicate parameter name: " + entry.name);
        Tensor t = Tensor::zeros(entry.shape);
        if (entry.init == InitKind::XavierUniform) {
            std::size_t fan_in = entry.shape[0];
            std::size_t fan_out = entry.shape.size() > 1 ? entry.shape[1] : entry.shape[0];
            double bound = std::sqrt(6.0 / static_cast<double>(fan_in + fan_out));
            Rng rng(Rng::derive(seed, idx));
            for (double& x : t.v) x = rng.uniform(-bound, bound);
        }
        store.m[entry.name] = Tensor::zeros(entry.shape);
        store.v[entry.name] = Tensor::zeros(entry.shape);
        store.params[entry.name] = std::move(t);
        ++idx;
    }
    store.t = 0;
    return store;
}

void adam_step(ParamStore& store, const GradMap& grads, const AdamConfig& cfg) {
    for (const auto& [name, g] : grads) {
        if (!store.has(name)) throw ShapeMismatch("gradient for unknown parameter: " + name);
        if (!g.same_shape(store.at(name)))
            throw ShapeMismatch("gradient shape mismatch for parameter: " + name);
        if (!g.all_finite()) throw NonFiniteValue("non-finite gradient for parameter: " + name);
    }
    store.t += 1;
    const double bc1 = 1.0 - std::pow(cfg.beta1, static_cast<double>(store.t));
    const double bc2 = 1.0 - std::pow(cfg.beta2, static_cast<double>(store.t));
    for (const auto& [name, g] : grads) {
        Tensor& p = store.params.at(name);
        Tensor& m = store.m.at(name);
        Tensor& v = store.v.at(name);
        for (std::size_t i = 0; i < p.numel(); ++i) {
            m.v[i] = cfg.beta1 * m.v[i] + (1.0 - cfg.beta1) * g.v[i];
            v.v[i] = cfg.beta2 * v.v[i] + (1.0 - cfg.beta2) * g.v[i] * g.v[i];
            double m_hat = m.v[i] / bc1;
            double v_hat = v.v[i] / bc2;
            p.v[i] -= cfg.lr * m_hat / (std::sqrt(v_hat) + cfg.eps);
        }
    }
}

double finite_diff_check(const std::function<double(ParamStore&)>& loss_fn,
                         ParamStore store, const GradMap& analytic, double eps) {
    double worst = 0.0;
    for (const auto& [name, g] : analytic) {
        Tensor& p = store.params.at(name);
        if (!g.same_shape(p)) throw ShapeMismatch("analytic gradient shape mismatch: " + name);
        for (std::size_t i = 0; i < p.numel(); ++i) {
            const double orig = p.v[i];
            p.v[i] = orig + eps;
            double lp = loss_fn(store);
            p.v[i] = orig - eps;
            double lm = loss_fn(store);
            p.v[i] = orig;
            if (!std::isfinite(lp) || !std::isfinite(lm))
                throw NonFiniteLoss("non-finite loss during finite-difference check");
            double numeric = (lp - lm) / (2.0 * eps);
            double denom = std::max({std::abs(numeric), std::abs(g.v[i]), 1.0});
            worst = std::max(worst, std::abs(numeric - g.v[i]) / denom);
        }
    }
    return worst;
}

}  // namespace monoctr
