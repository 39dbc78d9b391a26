#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ts2img/series.hpp"

namespace ts2img {

struct SinusoidComponent {
    double amplitude = 0.0;
    double period = 1.0; // timesteps
};

// Recipe for one synthetic signal-level series: a base level with an optional
// linear trend, additive sinusoids and gaussian noise.
struct SyntheticSpec {
    std::string class_name;
    std::string id;
    int length = 0;
    double base_level = -80.0; // dBm
    double trend = 0.0;        // per timestep
    std::vector<SinusoidComponent> sinusoids;
    double noise_std = 0.0;
    std::uint64_t rng_seed = 0;

    void validate() const {
        if (length < 1) throw ConfigError("synthetic length must be >= 1");
        if (noise_std < 0.0) throw ConfigError("noise_std must be >= 0");
        for (const auto& s : sinusoids)
            if (s.period <= 0.0) throw ConfigError("sinusoid period must be > 0");
    }
};

TimeSeries generate_synthetic(const SyntheticSpec& spec);

// Three built-in class recipes standing in for the unavailable field data:
// a high-variance wandering "changeable" class (~960 steps) and two shorter
// rain classes (~140 / ~120 steps) with increasing attenuation and
// oscillation. Seeds derive from base_seed.
std::vector<SyntheticSpec> default_corpus_specs(std::uint64_t base_seed);

} // namespace ts2img
