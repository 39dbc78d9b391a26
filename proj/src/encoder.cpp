#include "ts2img/encoder.hpp"

#include <algorithm>
#include <cmath>

#include "ts2img/stencil.hpp"

namespace ts2img {

namespace {
constexpr double kTwoPi = 6.283185307179586476925286766559;

// Remaps v into [0, hi] by min-max over the whole vector; constant input
// maps to all zeros (same convention as minmax_normalize). Constancy is
// judged with a relative tolerance: derivative series carry rounding noise,
// and a strict min<max test would blow a ~1e-13 span up to the full range.
std::vector<double> remap(const std::vector<double>& v, double hi) {
    const auto [mn_it, mx_it] = std::minmax_element(v.begin(), v.end());
    const double mn = *mn_it, mx = *mx_it;
    std::vector<double> out(v.size(), 0.0);
    const double tol = 1e-12 * std::max({std::fabs(mn), std::fabs(mx), 1.0});
    if (mx - mn > tol) {
        for (std::size_t i = 0; i < v.size(); ++i)
            out[i] = (v[i] - mn) / (mx - mn) * hi;
    }
    return out;
}
} // namespace

NormalizedSeries minmax_normalize(const std::vector<double>& samples, int pixel_max) {
    if (samples.empty()) throw DataError("cannot normalize an empty series");
    const auto [mn_it, mx_it] = std::minmax_element(samples.begin(), samples.end());
    const double mn = *mn_it, mx = *mx_it;
    NormalizedSeries out;
    out.values.assign(samples.size(), 0.0);
    if (mx == mn) {
        out.constant = true;
        return out;
    }
    for (std::size_t i = 0; i < samples.size(); ++i)
        out.values[i] = (samples[i] - mn) / (mx - mn) * pixel_max;
    return out;
}

DerivedSeries derive_series(const TimeSeries& series, const EncodingConfig& config) {
    series.validate();
    config.validate();
    DerivedSeries d;
    auto norm = minmax_normalize(series.samples, config.pixel_max);
    d.normalized = std::move(norm.values);
    d.constant_series = norm.constant;
    d.rho = central_difference(d.normalized, config.stencil_points);
    d.theta = central_difference(d.rho, config.stencil_points);
    return d;
}

std::vector<PolarPoint> polar_remap(const DerivedSeries& derived,
                                    const EncodingConfig& config) {
    if (derived.normalized.empty()) throw DataError("empty derived series");
    std::vector<double> abs_theta(derived.theta.size());
    for (std::size_t i = 0; i < derived.theta.size(); ++i)
        abs_theta[i] = std::fabs(derived.theta[i]);

    const auto rho_px = remap(derived.rho, config.image_edge - 1.0);
    const auto theta_rad = remap(abs_theta, kTwoPi);

    std::vector<PolarPoint> out(derived.normalized.size());
    for (std::size_t i = 0; i < out.size(); ++i)
        out[i] = {rho_px[i], theta_rad[i]};
    return out;
}

GrayImage map_window_to_image(const DerivedSeries& derived,
                              const std::vector<PolarPoint>& polar,
                              std::size_t window_start,
                              const EncodingConfig& config) {
    const std::size_t lw = static_cast<std::size_t>(config.window_length);
    if (window_start + lw > derived.normalized.size())
        throw DataError("window out of range");

    const int edge = config.image_edge;
    const double half = edge / 2.0;
    GrayImage img(edge, "");
    for (std::size_t t = window_start; t < window_start + lw; ++t) {
        const auto& p = polar[t];
        int i = static_cast<int>(std::floor(p.rho_px * std::cos(p.theta_rad) + half));
        int j = static_cast<int>(std::floor(p.rho_px * std::sin(p.theta_rad) + half));
        i = std::clamp(i, 0, edge - 1);
        j = std::clamp(j, 0, edge - 1);
        img.at(i, j) = static_cast<std::uint8_t>(std::lround(derived.normalized[t]));
    }
    return img;
}

std::vector<GrayImage> encode_series_serial(const TimeSeries& series,
                                            const EncodingConfig& config) {
    config.validate();
    if (series.samples.size() < static_cast<std::size_t>(config.window_length))
        throw DataError("series '" + series.id + "' shorter than window_length");

    const auto derived = derive_series(series, config);
    const auto polar = polar_remap(derived, config);
    const std::size_t count = series.samples.size() - config.window_length + 1;

    std::vector<GrayImage> images(count);
    for (std::size_t w = 0; w < count; ++w) {
        images[w] = map_window_to_image(derived, polar, w, config);
        images[w].label = series.label;
    }
    return images;
}

std::vector<GrayImage> encode_series(const TimeSeries& series,
                                     const EncodingConfig& config) {
    config.validate();
    if (series.samples.size() < static_cast<std::size_t>(config.window_length))
        throw DataError("series '" + series.id + "' shorter than window_length");

    const auto derived = derive_series(series, config);
    const auto polar = polar_remap(derived, config);
    const std::ptrdiff_t count =
        static_cast<std::ptrdiff_t>(series.samples.size()) - config.window_length + 1;

    std::vector<GrayImage> images(count);
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t w = 0; w < count; ++w) {
        images[w] = map_window_to_image(derived, polar, static_cast<std::size_t>(w), config);
        images[w].label = series.label;
    }
    return images;
}

} // namespace ts2img
