#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <map>
#include <vector>

#include "ts2img/encoder.hpp"
#include "ts2img/pgm.hpp"
#include "ts2img/rng.hpp"

using namespace ts2img;

namespace {

constexpr double kPi = 3.14159265358979323846;

TimeSeries make_series(std::vector<double> samples, const std::string& label = "c0") {
    TimeSeries s;
    s.samples = std::move(samples);
    s.label = label;
    s.id = "test";
    return s;
}

TimeSeries random_series(std::size_t n, std::uint64_t seed) {
    Rng rng(seed);
    std::vector<double> v(n);
    for (auto& x : v) x = -90.0 + 20.0 * rng.uniform() + 3.0 * rng.normal();
    return make_series(std::move(v));
}

} // namespace

TEST_CASE("minmax_normalize maps endpoints and midpoint linearly") {
    const auto r = minmax_normalize({0.0, 5.0, 10.0}, 255);
    CHECK_FALSE(r.constant);
    CHECK(r.values[0] == doctest::Approx(0.0));
    CHECK(r.values[1] == doctest::Approx(127.5));
    CHECK(r.values[2] == doctest::Approx(255.0));
}

TEST_CASE("minmax_normalize flags a constant series and returns zeros") {
    const auto r = minmax_normalize({7.0, 7.0, 7.0}, 255);
    CHECK(r.constant);
    for (double v : r.values) CHECK(v == 0.0);
}

TEST_CASE("minmax_normalize on a two-point dBm-like series") {
    const auto r = minmax_normalize({-90.0, -80.0}, 255);
    CHECK(r.values[0] == doctest::Approx(0.0));
    CHECK(r.values[1] == doctest::Approx(255.0));
}

TEST_CASE("polar_remap degenerate and endpoint behavior") {
    EncodingConfig cfg;
    cfg.image_edge = 64;
    cfg.window_length = 3;
    DerivedSeries d;

    SUBCASE("equal rho values collapse to zero radius") {
        d.normalized = {1, 2, 3};
        d.rho = {5.0, 5.0, 5.0};
        d.theta = {0.0, 1.0, 2.0};
        const auto polar = polar_remap(d, cfg);
        for (const auto& p : polar) CHECK(p.rho_px == doctest::Approx(0.0));
    }
    SUBCASE("rho endpoints stretch to [0, edge-1]") {
        d.normalized = {1, 2};
        d.rho = {0.0, 1.0};
        d.theta = {0.0, 0.0};
        const auto polar = polar_remap(d, cfg);
        CHECK(polar[0].rho_px == doctest::Approx(0.0));
        CHECK(polar[1].rho_px == doctest::Approx(63.0));
    }
    SUBCASE("absolute second derivative remaps onto [0, 2pi]") {
        d.normalized = {1, 2, 3};
        d.rho = {0, 0, 0};
        d.theta = {0.0, -2.0, 4.0}; // |theta| = 0, 2, 4
        const auto polar = polar_remap(d, cfg);
        CHECK(polar[0].theta_rad == doctest::Approx(0.0));
        CHECK(polar[1].theta_rad == doctest::Approx(kPi));
        CHECK(polar[2].theta_rad == doctest::Approx(2.0 * kPi));
    }
}

TEST_CASE("map_window_to_image pixel arithmetic") {
    EncodingConfig cfg;
    cfg.image_edge = 64;

    SUBCASE("exact right angle lands at (32, 42)") {
        cfg.window_length = 1;
        DerivedSeries d;
        d.normalized = {200.0};
        d.rho = d.theta = {0.0};
        const std::vector<PolarPoint> polar{{10.0, kPi / 2.0}};
        const auto img = map_window_to_image(d, polar, 0, cfg);
        CHECK(img.at(32, 42) == 200);
        CHECK(img.nonzero_count() == 1);
    }
    SUBCASE("overflow clamps to the last row") {
        cfg.window_length = 1;
        DerivedSeries d;
        d.normalized = {100.0};
        d.rho = d.theta = {0.0};
        const std::vector<PolarPoint> polar{{63.0, 0.0}};
        const auto img = map_window_to_image(d, polar, 0, cfg);
        CHECK(img.at(63, 32) == 100); // raw row floor(63+32)=95, clamped
    }
    SUBCASE("window out of range is rejected") {
        cfg.window_length = 4;
        DerivedSeries d;
        d.normalized = {1, 2, 3};
        d.rho = d.theta = {0, 0, 0};
        const std::vector<PolarPoint> polar(3, PolarPoint{0, 0});
        CHECK_THROWS_AS(map_window_to_image(d, polar, 0, cfg), DataError);
    }
}

TEST_CASE("constant series collapses onto a single center pixel") {
    EncodingConfig cfg;
    cfg.image_edge = 64;
    cfg.window_length = 5;
    const auto images = encode_series(make_series(std::vector<double>(12, -70.0)), cfg);
    REQUIRE(images.size() == 8);
    for (const auto& img : images) {
        CHECK(img.nonzero_count() == 0); // normalized constant is 0 everywhere
        // pixel value is 0 here, so check the write location via a near-constant ramp
    }
    // a tiny two-level series: all derivatives still 0 at the flat run's interior
    // is covered by the superposition acceptance check; here assert the mapping
    // location directly with a nonzero brightness
    DerivedSeries d;
    d.normalized = std::vector<double>(5, 255.0);
    d.rho = d.theta = std::vector<double>(5, 0.0);
    const std::vector<PolarPoint> polar(5, PolarPoint{0.0, 0.0});
    const auto img = map_window_to_image(d, polar, 0, cfg);
    CHECK(img.nonzero_count() == 1);
    CHECK(img.at(32, 32) == 255);
}

TEST_CASE("encode_series window count follows T - l_w + 1") {
    EncodingConfig cfg;
    cfg.image_edge = 64;

    cfg.window_length = 5;
    CHECK(encode_series(random_series(10, 1), cfg).size() == 6);
    cfg.window_length = 50;
    CHECK(encode_series(random_series(962, 2), cfg).size() == 913);
    cfg.window_length = 20;
    CHECK(encode_series(random_series(20, 3), cfg).size() == 1);

    cfg.window_length = 30;
    CHECK_THROWS_AS(encode_series(random_series(29, 4), cfg), DataError);
}

TEST_CASE("encoding is deterministic and labels propagate") {
    EncodingConfig cfg;
    cfg.image_edge = 64;
    cfg.window_length = 12;
    const auto s = random_series(80, 99);
    const auto a = encode_series(s, cfg);
    const auto b = encode_series(s, cfg);
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(a[i] == b[i]);
        CHECK(a[i].label == s.label);
    }
}

TEST_CASE("pixel-write oracle: dictionary replay matches the image") {
    // naive re-simulation: record the last write per coordinate, compare
    EncodingConfig cfg;
    cfg.image_edge = 32;
    cfg.window_length = 15;
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const auto s = random_series(60, 500 + seed);
        const auto derived = derive_series(s, cfg);
        const auto polar = polar_remap(derived, cfg);
        Rng rng(seed);
        const std::size_t w = rng.below(s.samples.size() - cfg.window_length + 1);
        const auto img = map_window_to_image(derived, polar, w, cfg);

        std::map<std::pair<int, int>, std::uint8_t> expected;
        const double half = cfg.image_edge / 2.0;
        for (std::size_t t = w; t < w + cfg.window_length; ++t) {
            int i = static_cast<int>(
                std::floor(polar[t].rho_px * std::cos(polar[t].theta_rad) + half));
            int j = static_cast<int>(
                std::floor(polar[t].rho_px * std::sin(polar[t].theta_rad) + half));
            i = std::clamp(i, 0, cfg.image_edge - 1);
            j = std::clamp(j, 0, cfg.image_edge - 1);
            expected[{i, j}] =
                static_cast<std::uint8_t>(std::lround(derived.normalized[t]));
        }
        for (int i = 0; i < cfg.image_edge; ++i)
            for (int j = 0; j < cfg.image_edge; ++j) {
                const auto it = expected.find({i, j});
                CHECK(img.at(i, j) == (it == expected.end() ? 0 : it->second));
            }
    }
}

TEST_CASE("PGM round trip preserves pixels") {
    EncodingConfig cfg;
    cfg.image_edge = 16;
    cfg.window_length = 8;
    const auto images = encode_series(random_series(30, 7), cfg);
    const auto tmp = std::filesystem::temp_directory_path() / "ts2img_pgm_test.pgm";
    write_pgm(images[0], tmp);
    const auto back = read_pgm(tmp);
    CHECK(back == images[0]);
    std::filesystem::remove(tmp);
}
