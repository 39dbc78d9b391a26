#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "ts2img/encoder.hpp"
#include "ts2img/network.hpp"
#include "ts2img/rng.hpp"
#include "ts2img/series.hpp"

using namespace ts2img;

// The OpenMP kernels must be bit-identical to their serial references at any
// thread count.

namespace {

TimeSeries random_series(std::size_t n, std::uint64_t seed) {
    Rng rng(seed);
    TimeSeries s;
    s.label = "c";
    s.id = "par";
    s.samples.resize(n);
    for (auto& v : s.samples) v = -85.0 + 10.0 * rng.uniform() + rng.normal();
    return s;
}

} // namespace

TEST_CASE("parallel window encoding matches the serial reference") {
    EncodingConfig cfg;
    cfg.image_edge = 32;
    for (int lw : {5, 20, 41}) {
        cfg.window_length = lw;
        for (std::uint64_t seed = 0; seed < 5; ++seed) {
            const auto s = random_series(150, seed);
            const auto par = encode_series(s, cfg);
            const auto ser = encode_series_serial(s, cfg);
            REQUIRE(par.size() == ser.size());
            for (std::size_t i = 0; i < par.size(); ++i) CHECK(par[i] == ser[i]);
        }
    }
}

TEST_CASE("parallel batch forward matches the serial reference") {
    NetworkSpec spec = NetworkSpec::standard(16, 3);
    Network net(spec);
    net.init_weights(5);
    Rng rng(6);
    Tensor batch({24, 1, 16, 16});
    for (auto& v : batch.data) v = rng.uniform();

    const auto par = net.forward(batch);
    const auto ser = net.forward_serial(batch);
    CHECK(par.data == ser.data);
}

TEST_CASE("parallel loss/gradient matches the serial reference bit-for-bit") {
    NetworkSpec spec = NetworkSpec::standard(16, 3);
    Network net(spec);
    net.init_weights(7);
    Rng rng(8);
    Tensor batch({17, 1, 16, 16});
    for (auto& v : batch.data) v = rng.uniform();
    std::vector<int> labels(17);
    for (auto& l : labels) l = static_cast<int>(rng.below(3));

    std::vector<double> gp, gs;
    const double lp = net.loss_and_grad(batch, labels, gp);
    const double ls = net.loss_and_grad_serial(batch, labels, gs);
    CHECK(lp == ls);
    CHECK(gp == gs);
}
