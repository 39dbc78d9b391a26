#pragma once

#include <numeric>
#include <vector>

#include "ts2img/errors.hpp"

namespace ts2img {

// Row-major dense array of doubles.
struct Tensor {
    std::vector<int> shape;
    std::vector<double> data;

    Tensor() = default;
    explicit Tensor(std::vector<int> s) : shape(std::move(s)) {
        data.assign(element_count(shape), 0.0);
    }

    static std::size_t element_count(const std::vector<int>& s) {
        std::size_t n = 1;
        for (int d : s) {
            if (d <= 0) throw DataError("tensor dimensions must be positive");
            n *= static_cast<std::size_t>(d);
        }
        return n;
    }
};

} // namespace ts2img
