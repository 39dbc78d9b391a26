#include "ts2img/stencil.hpp"

#include <cstddef>

#include "ts2img/errors.hpp"

namespace ts2img {

namespace {

// Unit step size: the time axis is the sample index.
double central(const std::vector<double>& f, std::size_t t, int points) {
    switch (points) {
    case 3:
        return (f[t + 1] - f[t - 1]) / 2.0;
    case 5:
        return (-f[t + 2] + 8.0 * f[t + 1] - 8.0 * f[t - 1] + f[t - 2]) / 12.0;
    default: // 7
        return (f[t + 3] - 9.0 * f[t + 2] + 45.0 * f[t + 1] -
                45.0 * f[t - 1] + 9.0 * f[t - 2] - f[t - 3]) / 60.0;
    }
}

double forward2(const std::vector<double>& f, std::size_t t) {
    return (-3.0 * f[t] + 4.0 * f[t + 1] - f[t + 2]) / 2.0;
}

double backward2(const std::vector<double>& f, std::size_t t) {
    return (3.0 * f[t] - 4.0 * f[t - 1] + f[t - 2]) / 2.0;
}

} // namespace

std::vector<double> central_difference(const std::vector<double>& values,
                                       int stencil_points) {
    if (stencil_points != 3 && stencil_points != 5 && stencil_points != 7)
        throw ConfigError("stencil_points must be 3, 5 or 7");
    const std::size_t n = values.size();
    if (n < static_cast<std::size_t>(stencil_points))
        throw DataError("series too short for the requested stencil");

    const int half = stencil_points / 2;
    std::vector<double> out(n);
    for (std::size_t t = 0; t < n; ++t) {
        const std::size_t from_end = n - 1 - t;
        const int fit = static_cast<int>(t < from_end ? t : from_end);
        const int width = fit < half ? fit : half;
        if (width >= 1) {
            out[t] = central(values, t, 2 * width + 1);
        } else if (t == 0) {
            out[t] = forward2(values, t);
        } else {
            out[t] = backward2(values, t);
        }
    }
    return out;
}

} // namespace ts2img
