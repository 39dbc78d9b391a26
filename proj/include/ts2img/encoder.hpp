#pragma once

#include <cstddef>
#include <vector>

#include "ts2img/errors.hpp"
#include "ts2img/image.hpp"
#include "ts2img/series.hpp"

namespace ts2img {

struct EncodingConfig {
    int image_edge = 64;     // pixels, even
    int window_length = 50;  // timesteps per image
    int stencil_points = 3;  // 3, 5 or 7
    int pixel_max = 255;

    void validate() const {
        if (image_edge < 2 || image_edge % 2 != 0)
            throw ConfigError("image_edge must be even and >= 2");
        if (window_length < 2)
            throw ConfigError("window_length must be >= 2");
        if (stencil_points != 3 && stencil_points != 5 && stencil_points != 7)
            throw ConfigError("stencil_points must be 3, 5 or 7");
        if (pixel_max != 255)
            throw ConfigError("pixel_max must be 255 for 8-bit grayscale");
    }
};

// Per-series quantities the pixel mapping consumes: the [0,255]-normalized
// signal, its first derivative (radius before remap) and its second
// derivative (angle before remap). All three share the series length.
struct DerivedSeries {
    std::vector<double> normalized;
    std::vector<double> rho;
    std::vector<double> theta;
    bool constant_series = false; // min == max in the raw signal
};

struct PolarPoint {
    double rho_px;    // radius in [0, image_edge - 1]
    double theta_rad; // angle in [0, 2*pi]
};

struct NormalizedSeries {
    std::vector<double> values;
    bool constant = false;
};

// Min-max scaling into [0, pixel_max]. A constant series maps to all zeros
// with the `constant` flag raised.
NormalizedSeries minmax_normalize(const std::vector<double>& samples, int pixel_max);

DerivedSeries derive_series(const TimeSeries& series, const EncodingConfig& config);

// Min-max remap of rho into [0, image_edge - 1] and of |theta| into
// [0, 2*pi], each over the full series so overlapping windows agree on
// where a timestep lands.
std::vector<PolarPoint> polar_remap(const DerivedSeries& derived,
                                    const EncodingConfig& config);

// Writes one window of timesteps into a fresh black raster. Pixel position
// follows floor(rho*cos(theta) + edge/2), floor(rho*sin(theta) + edge/2),
// clamped into bounds; collisions resolve last-timestep-wins.
GrayImage map_window_to_image(const DerivedSeries& derived,
                              const std::vector<PolarPoint>& polar,
                              std::size_t window_start,
                              const EncodingConfig& config);

// All stride-1 windows of a series: length T input yields T - l_w + 1 images,
// each carrying the series label. Windows are independent; the default entry
// point encodes them in parallel, the _serial variant is the reference.
std::vector<GrayImage> encode_series(const TimeSeries& series,
                                     const EncodingConfig& config);
std::vector<GrayImage> encode_series_serial(const TimeSeries& series,
                                            const EncodingConfig& config);

} // namespace ts2img
