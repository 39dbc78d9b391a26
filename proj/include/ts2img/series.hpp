#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "ts2img/errors.hpp"

namespace ts2img {

// A raw labeled signal-level recording (samples in dBm).
struct TimeSeries {
    std::vector<double> samples;
    std::string label;
    std::string id;

    void validate() const {
        if (samples.empty()) throw DataError("time series '" + id + "' is empty");
        for (double v : samples) {
            if (!std::isfinite(v))
                throw DataError("time series '" + id + "' contains a non-finite sample");
        }
    }
};

} // namespace ts2img
