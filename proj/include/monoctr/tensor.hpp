#pragma once

#include <cmath>
#include <cstddef>
#include <numeric>
#include <vector>

#include "monoctr/errors.hpp"

namespace monoctr {

/// Dense row-major tensor of 64-bit floats.
struct Tensor {
    std::vector<std::size_t> shape;
    std::vector<double> v;

    Tensor() = default;

    static Tensor zeros(std::vector<std::size_t> shape) {
        Tensor t;
        t.shape = std::move(shape);
        t.v.assign(t.numel_from_shape(), 0.0);
        return t;
    }

    static Tensor scalar(double x) {
        Tensor t;
        t.shape = {1};
        t.v = {x};
        return t;
    }

    std::size_t numel() const { return v.size(); }

    std::size_t numel_from_shape() const {
        if (shape.empty()) throw EmptyShape("tensor shape is empty");
        std::size_t n = 1;
        for (std::size_t s : shape) {
            if (s == 0) throw EmptyShape("tensor shape has zero dimension");
            n *= s;
        }
        return n;
    }

    // 2-D accessors, shape = [rows, cols]
    double& at(std::size_t r, std::size_t c) { return v[r * shape[1] + c]; }
    double at(std::size_t r, std::size_t c) const { return v[r * shape[1] + c]; }

    std::size_t rows() const { return shape[0]; }
    std::size_t cols() const { return shape.size() > 1 ? shape[1] : 1; }

    bool same_shape(const Tensor& o) const { return shape == o.shape; }

    bool all_finite() const {
        for (double x : v)
            if (!std::isfinite(x)) return false;
        return true;
    }
};

}  // namespace monoctr
