#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <vector>

#include "ts2img/augment.hpp"

using namespace ts2img;

namespace {

GrayImage random_image(int edge, std::uint64_t seed) {
    Rng rng(seed);
    GrayImage img(edge, "c");
    for (auto& p : img.pixels) p = static_cast<std::uint8_t>(rng.below(256));
    return img;
}

} // namespace

TEST_CASE("moving_average basics") {
    CHECK(moving_average({1, 2, 3, 4}, 3) == std::vector<double>{2.0, 3.0});
    CHECK(moving_average({0, 3, 0, 3, 0}, 3) == std::vector<double>{1.0, 2.0, 1.0});

    const auto flat = moving_average(std::vector<double>(6, 4.2), 3);
    CHECK(flat.size() == 4);
    for (double v : flat) CHECK(v == doctest::Approx(4.2));

    CHECK_THROWS_AS(moving_average({1.0, 2.0}, 3), DataError);
}

TEST_CASE("moving_average stays inside the input range") {
    for (std::uint64_t seed = 0; seed < 30; ++seed) {
        Rng rng(seed);
        std::vector<double> v(40);
        for (auto& x : v) x = rng.uniform(-100.0, -60.0);
        const auto [mn, mx] = std::minmax_element(v.begin(), v.end());
        for (double m : moving_average(v, 3)) {
            CHECK(m >= *mn);
            CHECK(m <= *mx);
        }
    }
}

TEST_CASE("random_erase_black probability-0 branch leaves the image alone") {
    AugmentConfig cfg;
    cfg.re_probability = 0.0;
    Rng rng(1);
    const auto img = random_image(32, 5);
    CHECK(random_erase_black(img, cfg, rng) == img);
}

TEST_CASE("full-cover rectangle blacks out everything") {
    AugmentConfig cfg;
    cfg.re_probability = 1.0;
    cfg.re_area_range = {1.0, 1.0};
    cfg.re_aspect_range = {1.0, 1.0};
    Rng rng(2);
    const auto out = random_erase_black(random_image(16, 6), cfg, rng);
    for (auto p : out.pixels) CHECK(p == 0);
}

TEST_CASE("random erasing is reproducible and never raises a pixel") {
    AugmentConfig cfg;
    cfg.re_probability = 1.0;
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        const auto img = random_image(24, 100 + seed);
        Rng a(seed), b(seed);
        const auto out1 = random_erase_black(img, cfg, a);
        const auto out2 = random_erase_black(img, cfg, b);
        CHECK(out1 == out2);
        for (std::size_t i = 0; i < img.pixels.size(); ++i)
            CHECK(out1.pixels[i] <= img.pixels[i]);
    }
}

TEST_CASE("flips are involutions and match the 2x2 definition") {
    const auto img = random_image(20, 9);
    CHECK(flip_horizontal(flip_horizontal(img)) == img);
    CHECK(flip_vertical(flip_vertical(img)) == img);

    GrayImage tiny(2, "c");
    tiny.at(0, 0) = 1;
    tiny.at(0, 1) = 2;
    tiny.at(1, 0) = 3;
    tiny.at(1, 1) = 4;
    const auto h = flip_horizontal(tiny);
    CHECK(h.at(0, 0) == 2);
    CHECK(h.at(0, 1) == 1);
    CHECK(h.at(1, 0) == 4);
    CHECK(h.at(1, 1) == 3);

    GrayImage sym(2, "c");
    sym.at(0, 0) = sym.at(0, 1) = 5;
    sym.at(1, 0) = sym.at(1, 1) = 8;
    CHECK(flip_horizontal(sym) == sym);
}

TEST_CASE("shift moves pixels and fills with black") {
    const auto img = random_image(16, 11);
    CHECK(shift(img, 0, 0) == img);

    GrayImage dot(16, "c");
    dot.at(8, 8) = 200;
    const auto moved = shift(dot, 1, 0);
    CHECK(moved.at(8, 9) == 200);
    CHECK(moved.nonzero_count() == 1);

    const auto vacated = shift(img, 15, 0);
    for (int r = 0; r < 16; ++r)
        for (int c = 0; c < 15; ++c) CHECK(vacated.at(r, c) == 0);

    CHECK_THROWS_AS(shift(img, 16, 0), DataError);
}

TEST_CASE("random_crop identity, constant and determinism cases") {
    const auto img = random_image(16, 12);
    Rng rng(3);
    CHECK(random_crop(img, 16, rng) == img);

    GrayImage black(16, "c");
    Rng rng2(4);
    CHECK(random_crop(black, 7, rng2).nonzero_count() == 0);

    Rng a(5), b(5);
    CHECK(random_crop(img, 9, a) == random_crop(img, 9, b));

    Rng c(6);
    CHECK_THROWS_AS(random_crop(img, 17, c), DataError);
}

TEST_CASE("augmented outputs keep valid shape and range") {
    AugmentConfig cfg;
    cfg.re_probability = 1.0;
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        const auto img = random_image(32, 200 + seed);
        Rng rng(seed);
        for (const auto& out :
             {random_erase_black(img, cfg, rng), flip_horizontal(img), shift(img, 3, -2),
              random_crop(img, 20, rng)}) {
            CHECK(out.edge == img.edge);
            CHECK(out.pixels.size() == img.pixels.size());
        }
    }
}
