#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "ts2img/errors.hpp"
#include "ts2img/stencil.hpp"

using ts2img::central_difference;

namespace {

std::vector<double> sample_poly(const std::vector<double>& coeffs, int n) {
    std::vector<double> out(n);
    for (int t = 0; t < n; ++t) {
        double v = 0.0, p = 1.0;
        for (double c : coeffs) {
            v += c * p;
            p *= t;
        }
        out[t] = v;
    }
    return out;
}

std::vector<double> poly_derivative(const std::vector<double>& coeffs) {
    std::vector<double> d;
    for (std::size_t k = 1; k < coeffs.size(); ++k)
        d.push_back(coeffs[k] * static_cast<double>(k));
    return d;
}

} // namespace

TEST_CASE("3-point stencil on a quadratic hits 2t at interior points") {
    const std::vector<double> f{0, 1, 4, 9}; // t^2
    const auto d = central_difference(f, 3);
    REQUIRE(d.size() == f.size());
    CHECK(d[1] == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(d[2] == doctest::Approx(4.0).epsilon(1e-12));
}

TEST_CASE("5-point stencil on a quadratic") {
    const std::vector<double> f{0, 1, 4, 9, 16};
    const auto d = central_difference(f, 5);
    CHECK(d[2] == doctest::Approx(4.0).epsilon(1e-12));
}

TEST_CASE("constant input differentiates to zero for every stencil") {
    const std::vector<double> f(20, 7.5);
    for (int pts : {3, 5, 7}) {
        for (double v : central_difference(f, pts)) CHECK(v == doctest::Approx(0.0));
    }
}

TEST_CASE("interior exactness on polynomials of degree stencil-1") {
    struct Case {
        int pts;
        std::vector<double> coeffs;
    };
    // degree = stencil order - 1: 2 for 3pt, 4 for 5pt, 6 for 7pt
    const std::vector<Case> cases = {
        {3, {1.0, -2.0, 0.5}},
        {5, {0.3, 1.0, -0.2, 0.05, -0.01}},
        {7, {1.0, 0.5, -0.1, 0.02, 0.004, -0.0006, 0.00002}},
    };
    for (const auto& c : cases) {
        const int n = 25;
        const auto f = sample_poly(c.coeffs, n);
        const auto expect = sample_poly(poly_derivative(c.coeffs), n);
        const auto d = central_difference(f, c.pts);
        const int half = c.pts / 2;
        for (int t = half; t < n - half; ++t)
            CHECK(std::fabs(d[t] - expect[t]) <= 1e-9);
    }
}

TEST_CASE("second derivative of a quadratic is constant everywhere") {
    const int n = 30;
    const auto f = sample_poly({2.0, -1.0, 0.75}, n); // f'' = 1.5
    for (int pts : {3, 5, 7}) {
        const auto second = central_difference(central_difference(f, pts), pts);
        for (double v : second) CHECK(std::fabs(v - 1.5) <= 1e-9);
    }
}

TEST_CASE("too-short input and bad stencil order are rejected") {
    CHECK_THROWS_AS(central_difference({1.0, 2.0}, 3), ts2img::DataError);
    CHECK_THROWS_AS(central_difference({1, 2, 3, 4}, 5), ts2img::DataError);
    CHECK_THROWS_AS(central_difference({1, 2, 3, 4}, 4), ts2img::ConfigError);
}
