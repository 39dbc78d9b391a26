#include "ts2img/synth.hpp"

#include <cmath>

#include "ts2img/rng.hpp"

namespace ts2img {

TimeSeries generate_synthetic(const SyntheticSpec& spec) {
    spec.validate();
    constexpr double two_pi = 6.283185307179586476925286766559;
    Rng rng(spec.rng_seed);
    TimeSeries out;
    out.label = spec.class_name;
    out.id = spec.id.empty() ? spec.class_name : spec.id;
    out.samples.resize(spec.length);
    for (int t = 0; t < spec.length; ++t) {
        double v = spec.base_level + spec.trend * t;
        for (const auto& s : spec.sinusoids)
            v += s.amplitude * std::sin(two_pi * t / s.period);
        if (spec.noise_std > 0.0) v += rng.normal(0.0, spec.noise_std);
        out.samples[t] = v;
    }
    return out;
}

std::vector<SyntheticSpec> default_corpus_specs(std::uint64_t base_seed) {
    std::vector<SyntheticSpec> specs(3);

    specs[0].class_name = "changeable";
    specs[0].id = "changeable_0";
    specs[0].length = 960;
    specs[0].base_level = -75.0;
    specs[0].trend = 0.0;
    specs[0].sinusoids = {{5.0, 60.0}, {2.0, 9.0}};
    specs[0].noise_std = 0.02;
    specs[0].rng_seed = Rng::derive(base_seed, 0);

    specs[1].class_name = "weak_rain";
    specs[1].id = "weak_rain_0";
    specs[1].length = 140;
    specs[1].base_level = -82.0;
    specs[1].trend = -0.04;
    specs[1].sinusoids = {{3.0, 28.0}};
    specs[1].noise_std = 0.02;
    specs[1].rng_seed = Rng::derive(base_seed, 1);

    specs[2].class_name = "moderate_rain";
    specs[2].id = "moderate_rain_0";
    specs[2].length = 120;
    specs[2].base_level = -88.0;
    specs[2].trend = -0.12;
    specs[2].sinusoids = {{4.0, 11.0}, {2.0, 35.0}};
    specs[2].noise_std = 0.02;
    specs[2].rng_seed = Rng::derive(base_seed, 2);

    return specs;
}

} // namespace ts2img
