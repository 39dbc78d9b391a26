#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ts2img/errors.hpp"

namespace ts2img {

// Square 8-bit grayscale raster, row-major. Unwritten pixels stay 0.
struct GrayImage {
    int edge = 0;
    std::vector<std::uint8_t> pixels;
    std::string label;

    GrayImage() = default;
    GrayImage(int e, std::string lbl)
        : edge(e), pixels(static_cast<std::size_t>(e) * e, 0), label(std::move(lbl)) {}

    std::uint8_t& at(int row, int col) {
        return pixels[static_cast<std::size_t>(row) * edge + col];
    }
    std::uint8_t at(int row, int col) const {
        return pixels[static_cast<std::size_t>(row) * edge + col];
    }

    std::size_t nonzero_count() const {
        std::size_t n = 0;
        for (auto p : pixels) n += (p != 0);
        return n;
    }

    bool operator==(const GrayImage& o) const {
        return edge == o.edge && pixels == o.pixels;
    }
};

} // namespace ts2img
