#include "ts2img/augment.hpp"

#include <algorithm>
#include <cmath>

namespace ts2img {

std::vector<double> moving_average(const std::vector<double>& samples, int window) {
    if (window < 1) throw ConfigError("ma_window must be positive");
    if (samples.size() < static_cast<std::size_t>(window))
        throw DataError("series shorter than moving-average window");
    const std::size_t n = samples.size() - window + 1;
    std::vector<double> out(n);
    double acc = 0.0;
    for (int i = 0; i < window; ++i) acc += samples[i];
    out[0] = acc / window;
    for (std::size_t t = 1; t < n; ++t) {
        acc += samples[t + window - 1] - samples[t - 1];
        out[t] = acc / window;
    }
    return out;
}

GrayImage random_erase_black(const GrayImage& image, const AugmentConfig& config,
                             Rng& rng) {
    config.validate();
    if (rng.uniform() >= config.re_probability) return image;

    const int edge = image.edge;
    const double area = static_cast<double>(edge) * edge;
    for (int attempt = 0; attempt < 10; ++attempt) {
        const double target =
            area * rng.uniform(config.re_area_range.first, config.re_area_range.second);
        const double aspect =
            rng.uniform(config.re_aspect_range.first, config.re_aspect_range.second);
        const int h = static_cast<int>(std::lround(std::sqrt(target * aspect)));
        const int w = static_cast<int>(std::lround(std::sqrt(target / aspect)));
        if (h < 1 || w < 1 || h > edge || w > edge) continue;
        const int top = static_cast<int>(rng.below(edge - h + 1));
        const int left = static_cast<int>(rng.below(edge - w + 1));
        GrayImage out = image;
        for (int r = top; r < top + h; ++r)
            for (int c = left; c < left + w; ++c) out.at(r, c) = 0;
        return out;
    }
    return image;
}

GrayImage flip_horizontal(const GrayImage& image) {
    GrayImage out = image;
    for (int r = 0; r < image.edge; ++r)
        for (int c = 0; c < image.edge; ++c)
            out.at(r, c) = image.at(r, image.edge - 1 - c);
    return out;
}

GrayImage flip_vertical(const GrayImage& image) {
    GrayImage out = image;
    for (int r = 0; r < image.edge; ++r)
        for (int c = 0; c < image.edge; ++c)
            out.at(r, c) = image.at(image.edge - 1 - r, c);
    return out;
}

GrayImage shift(const GrayImage& image, int dx, int dy) {
    const int edge = image.edge;
    if (std::abs(dx) >= edge || std::abs(dy) >= edge)
        throw DataError("shift exceeds image edge");
    GrayImage out(edge, image.label);
    for (int r = 0; r < edge; ++r) {
        const int sr = r - dy;
        if (sr < 0 || sr >= edge) continue;
        for (int c = 0; c < edge; ++c) {
            const int sc = c - dx;
            if (sc < 0 || sc >= edge) continue;
            out.at(r, c) = image.at(sr, sc);
        }
    }
    return out;
}

GrayImage random_crop(const GrayImage& image, int crop_edge, Rng& rng) {
    const int edge = image.edge;
    if (crop_edge < 1 || crop_edge > edge)
        throw DataError("crop_edge must lie in [1, edge]");
    const int top = static_cast<int>(rng.below(edge - crop_edge + 1));
    const int left = static_cast<int>(rng.below(edge - crop_edge + 1));
    GrayImage out(edge, image.label);
    for (int r = 0; r < edge; ++r) {
        // nearest-neighbor upscale of the crop back to edge x edge
        const int sr = top + std::min(crop_edge - 1, r * crop_edge / edge);
        for (int c = 0; c < edge; ++c) {
            const int sc = left + std::min(crop_edge - 1, c * crop_edge / edge);
            out.at(r, c) = image.at(sr, sc);
        }
    }
    return out;
}

} // namespace ts2img
