#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ts2img/tensor.hpp"

namespace ts2img {

struct LayerSpec {
    enum class Kind { Conv, Relu, MaxPool, Flatten, Dense, Softmax };
    Kind kind = Kind::Relu;
    int out_channels = 0; // conv
    int kernel = 0;       // conv
    int stride = 1;       // conv
    int pool = 2;         // maxpool
    int out_features = 0; // dense

    static LayerSpec conv(int out_channels, int kernel, int stride = 1) {
        return {Kind::Conv, out_channels, kernel, stride, 0, 0};
    }
    static LayerSpec relu() { return {Kind::Relu, 0, 0, 1, 0, 0}; }
    static LayerSpec maxpool(int pool) { return {Kind::MaxPool, 0, 0, 1, pool, 0}; }
    static LayerSpec flatten() { return {Kind::Flatten, 0, 0, 1, 0, 0}; }
    static LayerSpec dense(int out_features) {
        return {Kind::Dense, 0, 0, 1, 0, out_features};
    }
    static LayerSpec softmax() { return {Kind::Softmax, 0, 0, 1, 0, 0}; }
};

struct NetworkSpec {
    std::vector<LayerSpec> layers;
    int input_edge = 64;
    int num_classes = 3;

    // conv8-relu-pool2-conv16-relu-pool2-flatten-dense32-relu-dense(C)-softmax
    static NetworkSpec standard(int input_edge, int num_classes);
};

// A small CNN over single-channel square inputs with hand-derived gradients.
// The parameter store is one flat vector; gradients use the same layout.
class Network {
public:
    explicit Network(NetworkSpec spec);

    const NetworkSpec& spec() const { return spec_; }
    std::size_t param_count() const { return params_.size(); }
    std::vector<double>& params() { return params_; }
    const std::vector<double>& params() const { return params_; }

    // He-style scaled uniform weights, zero biases.
    void init_weights(std::uint64_t seed);

    // batch shape [N, 1, E, E] with values already scaled into [0, 1];
    // returns [N, C] softmax probabilities. The default entry point runs
    // samples in parallel; the _serial variant is the reference.
    Tensor forward(const Tensor& batch) const;
    Tensor forward_serial(const Tensor& batch) const;

    // Mean cross-entropy over the batch plus the full parameter gradient
    // (same layout as params()). Per-sample contributions are summed in
    // sample order so the result is bit-identical at any thread count.
    double loss_and_grad(const Tensor& batch, const std::vector<int>& labels,
                         std::vector<double>& grad) const;
    double loss_and_grad_serial(const Tensor& batch, const std::vector<int>& labels,
                                std::vector<double>& grad) const;

    // argmax with lowest-index tie break
    std::vector<int> predict(const Tensor& batch) const;

private:
    struct Shape {
        int c = 0, h = 0, w = 0;
        std::size_t count() const {
            return static_cast<std::size_t>(c) * h * w;
        }
    };

    void check_batch(const Tensor& batch) const;
    void forward_sample(const double* input, double* acts) const;
    // accumulates d(per-sample loss)/d(params) into grad (not scaled by 1/N)
    void backward_sample(const double* input, const double* acts, int label,
                         double* grad) const;

    NetworkSpec spec_;
    std::vector<double> params_;
    std::vector<Shape> in_shapes_, out_shapes_;
    std::vector<std::size_t> param_offsets_;  // per layer, into params_
    std::vector<std::size_t> act_offsets_;    // per layer output, into the act buffer
    std::size_t act_size_ = 0;
};

} // namespace ts2img
