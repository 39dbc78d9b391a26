// Timing comparison of the OpenMP kernels against their serial references:
// window encoding and batch forward/backward. Prints per-op times and the
// speedup; with one core the two should be near parity.

#include <chrono>
#include <cstdio>
#include <functional>

#include <omp.h>

#include "ts2img/encoder.hpp"
#include "ts2img/network.hpp"
#include "ts2img/rng.hpp"

using namespace ts2img;

namespace {

double time_best_of(int reps, const std::function<void()>& fn) {
    double best = 1e300;
    for (int r = 0; r < reps; ++r) {
        const auto t0 = std::chrono::steady_clock::now();
        fn();
        const auto t1 = std::chrono::steady_clock::now();
        best = std::min(best, std::chrono::duration<double>(t1 - t0).count());
    }
    return best;
}

void row(const char* name, double serial, double parallel) {
    std::printf("%-28s %10.3f ms %10.3f ms %8.2fx\n", name, serial * 1e3,
                parallel * 1e3, serial / parallel);
}

} // namespace

int main() {
    std::printf("threads: %d\n", omp_get_max_threads());
    std::printf("%-28s %13s %13s %9s\n", "kernel", "serial", "parallel", "speedup");

    // encode: one long series, many overlapping windows
    Rng rng(1);
    TimeSeries series;
    series.id = "bench";
    series.label = "c";
    series.samples.resize(2000);
    for (auto& v : series.samples) v = -85.0 + 5.0 * rng.uniform() + rng.normal();

    EncodingConfig enc;
    enc.image_edge = 64;
    enc.window_length = 40;
    row("encode 2000x lw=40 e=64",
        time_best_of(5, [&] { encode_series_serial(series, enc); }),
        time_best_of(5, [&] { encode_series(series, enc); }));

    // forward + gradient on the standard net
    Network net(NetworkSpec::standard(64, 3));
    net.init_weights(2);
    Tensor batch({32, 1, 64, 64});
    for (auto& v : batch.data) v = rng.uniform();
    std::vector<int> labels(32);
    for (auto& l : labels) l = static_cast<int>(rng.below(3));

    row("forward batch=32 e=64",
        time_best_of(5, [&] { net.forward_serial(batch); }),
        time_best_of(5, [&] { net.forward(batch); }));

    std::vector<double> grad;
    row("loss+grad batch=32 e=64",
        time_best_of(3, [&] { net.loss_and_grad_serial(batch, labels, grad); }),
        time_best_of(3, [&] { net.loss_and_grad(batch, labels, grad); }));

    return 0;
}
