#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "ts2img/errors.hpp"
#include "ts2img/image.hpp"
#include "ts2img/rng.hpp"

namespace ts2img {

struct AugmentConfig {
    int ma_window = 3;                              // moving-average span
    double re_probability = 0.5;                    // chance a patch is applied
    std::pair<double, double> re_area_range = {0.02, 0.2};   // fraction of area
    std::pair<double, double> re_aspect_range = {0.3, 3.33}; // patch h/w ratio
    std::uint64_t rng_seed = 0;

    void validate() const {
        if (ma_window < 1) throw ConfigError("ma_window must be positive");
        if (re_probability < 0.0 || re_probability > 1.0)
            throw ConfigError("re_probability must lie in [0, 1]");
        if (!(re_area_range.first > 0.0 && re_area_range.first <= re_area_range.second &&
              re_area_range.second <= 1.0))
            throw ConfigError("re_area_range must satisfy 0 < low <= high <= 1");
        if (!(re_aspect_range.first > 0.0 &&
              re_aspect_range.first <= re_aspect_range.second))
            throw ConfigError("re_aspect_range must satisfy 0 < low <= high");
    }
};

// Series-level smoothing; output shrinks to length - window + 1.
std::vector<double> moving_average(const std::vector<double>& samples, int window);

// Black-patch random erasing: with re_probability, zeroes one rectangle whose
// area and aspect ratio are drawn from the configured ranges. Up to 10 draw
// attempts to fit the rectangle inside the raster; on failure the image is
// returned untouched.
GrayImage random_erase_black(const GrayImage& image, const AugmentConfig& config,
                             Rng& rng);

GrayImage flip_horizontal(const GrayImage& image); // reverses columns
GrayImage flip_vertical(const GrayImage& image);   // reverses rows

// Translation with black fill; |dx|, |dy| must be < edge. dx moves columns,
// dy moves rows.
GrayImage shift(const GrayImage& image, int dx, int dy);

// Random crop_edge x crop_edge sub-image, scaled back to full size by
// nearest neighbor.
GrayImage random_crop(const GrayImage& image, int crop_edge, Rng& rng);

} // namespace ts2img
