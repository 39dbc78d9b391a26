#include "ts2img/network.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>

#include "ts2img/rng.hpp"

namespace ts2img {

NetworkSpec NetworkSpec::standard(int input_edge, int num_classes) {
    NetworkSpec s;
    s.input_edge = input_edge;
    s.num_classes = num_classes;
    s.layers = {LayerSpec::conv(8, 3),  LayerSpec::relu(), LayerSpec::maxpool(2),
                LayerSpec::conv(16, 3), LayerSpec::relu(), LayerSpec::maxpool(2),
                LayerSpec::flatten(),   LayerSpec::dense(32), LayerSpec::relu(),
                LayerSpec::dense(num_classes), LayerSpec::softmax()};
    return s;
}

Network::Network(NetworkSpec spec) : spec_(std::move(spec)) {
    if (spec_.layers.empty() || spec_.layers.back().kind != LayerSpec::Kind::Softmax)
        throw ConfigError("network must end with a softmax layer");
    if (spec_.input_edge < 1 || spec_.num_classes < 2)
        throw ConfigError("invalid network input edge or class count");

    Shape cur{1, spec_.input_edge, spec_.input_edge};
    std::size_t params = 0;
    for (const auto& l : spec_.layers) {
        in_shapes_.push_back(cur);
        param_offsets_.push_back(params);
        switch (l.kind) {
        case LayerSpec::Kind::Conv: {
            if (l.kernel < 1 || l.stride < 1 || l.out_channels < 1)
                throw ConfigError("invalid conv layer");
            const int oh = (cur.h - l.kernel) / l.stride + 1;
            const int ow = (cur.w - l.kernel) / l.stride + 1;
            if (oh < 1 || ow < 1) throw ConfigError("conv output collapses to zero");
            params += static_cast<std::size_t>(l.out_channels) * cur.c * l.kernel * l.kernel +
                      l.out_channels;
            cur = {l.out_channels, oh, ow};
            break;
        }
        case LayerSpec::Kind::Relu:
            break;
        case LayerSpec::Kind::MaxPool: {
            if (l.pool < 1) throw ConfigError("invalid pool size");
            const int oh = cur.h / l.pool, ow = cur.w / l.pool;
            if (oh < 1 || ow < 1) throw ConfigError("pool output collapses to zero");
            cur = {cur.c, oh, ow};
            break;
        }
        case LayerSpec::Kind::Flatten:
            cur = {static_cast<int>(cur.count()), 1, 1};
            break;
        case LayerSpec::Kind::Dense:
            if (cur.h != 1 || cur.w != 1)
                throw ConfigError("dense layer requires flattened input");
            if (l.out_features < 1) throw ConfigError("invalid dense layer");
            params += static_cast<std::size_t>(l.out_features) * cur.c + l.out_features;
            cur = {l.out_features, 1, 1};
            break;
        case LayerSpec::Kind::Softmax:
            break;
        }
        out_shapes_.push_back(cur);
        act_offsets_.push_back(act_size_);
        act_size_ += cur.count();
    }
    if (cur.c != spec_.num_classes || cur.h != 1 || cur.w != 1)
        throw ConfigError("network output shape does not match num_classes");
    params_.assign(params, 0.0);
}

void Network::init_weights(std::uint64_t seed) {
    Rng rng(seed);
    std::size_t last_dense = spec_.layers.size();
    for (std::size_t li = 0; li < spec_.layers.size(); ++li)
        if (spec_.layers[li].kind == LayerSpec::Kind::Dense) last_dense = li;

    for (std::size_t li = 0; li < spec_.layers.size(); ++li) {
        const auto& l = spec_.layers[li];
        double* p = params_.data() + param_offsets_[li];
        if (l.kind == LayerSpec::Kind::Conv) {
            const std::size_t fan_in =
                static_cast<std::size_t>(in_shapes_[li].c) * l.kernel * l.kernel;
            const std::size_t nw = fan_in * l.out_channels;
            const double bound = std::sqrt(6.0 / static_cast<double>(fan_in));
            for (std::size_t i = 0; i < nw; ++i) p[i] = rng.uniform(-bound, bound);
            for (int i = 0; i < l.out_channels; ++i) p[nw + i] = 0.0;
        } else if (l.kind == LayerSpec::Kind::Dense) {
            const std::size_t fan_in = in_shapes_[li].count();
            const std::size_t nw = fan_in * l.out_features;
            // small classifier head keeps the initial logits near zero, so the
            // starting cross-entropy sits at ~ln(num_classes)
            const double scale = li == last_dense ? 0.1 : 1.0;
            const double bound = scale * std::sqrt(6.0 / static_cast<double>(fan_in));
            for (std::size_t i = 0; i < nw; ++i) p[i] = rng.uniform(-bound, bound);
            for (int i = 0; i < l.out_features; ++i) p[nw + i] = 0.0;
        }
    }
}

void Network::check_batch(const Tensor& batch) const {
    if (batch.shape.size() != 4 || batch.shape[1] != 1 ||
        batch.shape[2] != spec_.input_edge || batch.shape[3] != spec_.input_edge)
        throw DataError("batch shape does not match network input");
}

void Network::forward_sample(const double* input, double* acts) const {
    const double* in = input;
    for (std::size_t li = 0; li < spec_.layers.size(); ++li) {
        const auto& l = spec_.layers[li];
        const Shape& is = in_shapes_[li];
        const Shape& os = out_shapes_[li];
        double* out = acts + act_offsets_[li];
        const double* p = params_.data() + param_offsets_[li];

        switch (l.kind) {
        case LayerSpec::Kind::Conv: {
            const int K = l.kernel, S = l.stride;
            const double* bias = p + static_cast<std::size_t>(os.c) * is.c * K * K;
            for (int oc = 0; oc < os.c; ++oc) {
                const double* wc = p + static_cast<std::size_t>(oc) * is.c * K * K;
                for (int y = 0; y < os.h; ++y) {
                    for (int x = 0; x < os.w; ++x) {
                        double acc = bias[oc];
                        for (int ic = 0; ic < is.c; ++ic) {
                            const double* iplane = in + static_cast<std::size_t>(ic) * is.h * is.w;
                            const double* wk = wc + static_cast<std::size_t>(ic) * K * K;
                            for (int ky = 0; ky < K; ++ky) {
                                const double* irow = iplane + static_cast<std::size_t>(y * S + ky) * is.w + x * S;
                                const double* wrow = wk + static_cast<std::size_t>(ky) * K;
                                for (int kx = 0; kx < K; ++kx) acc += wrow[kx] * irow[kx];
                            }
                        }
                        out[(static_cast<std::size_t>(oc) * os.h + y) * os.w + x] = acc;
                    }
                }
            }
            break;
        }
        case LayerSpec::Kind::Relu: {
            const std::size_t n = is.count();
            for (std::size_t i = 0; i < n; ++i) out[i] = in[i] > 0.0 ? in[i] : 0.0;
            break;
        }
        case LayerSpec::Kind::MaxPool: {
            const int P = l.pool;
            for (int c = 0; c < os.c; ++c) {
                const double* iplane = in + static_cast<std::size_t>(c) * is.h * is.w;
                for (int y = 0; y < os.h; ++y) {
                    for (int x = 0; x < os.w; ++x) {
                        double best = iplane[static_cast<std::size_t>(y * P) * is.w + x * P];
                        for (int py = 0; py < P; ++py)
                            for (int px = 0; px < P; ++px) {
                                const double v = iplane[static_cast<std::size_t>(y * P + py) * is.w + x * P + px];
                                if (v > best) best = v;
                            }
                        out[(static_cast<std::size_t>(c) * os.h + y) * os.w + x] = best;
                    }
                }
            }
            break;
        }
        case LayerSpec::Kind::Flatten:
            std::memcpy(out, in, is.count() * sizeof(double));
            break;
        case LayerSpec::Kind::Dense: {
            const int F = is.c, O = os.c;
            const double* bias = p + static_cast<std::size_t>(O) * F;
            for (int o = 0; o < O; ++o) {
                const double* w = p + static_cast<std::size_t>(o) * F;
                double acc = bias[o];
                for (int f = 0; f < F; ++f) acc += w[f] * in[f];
                out[o] = acc;
            }
            break;
        }
        case LayerSpec::Kind::Softmax: {
            const int C = is.c;
            double mx = in[0];
            for (int c = 1; c < C; ++c) mx = std::max(mx, in[c]);
            double sum = 0.0;
            for (int c = 0; c < C; ++c) {
                out[c] = std::exp(in[c] - mx);
                sum += out[c];
            }
            for (int c = 0; c < C; ++c) out[c] /= sum;
            break;
        }
        }
        in = out;
    }
}

void Network::backward_sample(const double* input, const double* acts, int label,
                              double* grad) const {
    const std::size_t L = spec_.layers.size();
    std::size_t max_act = static_cast<std::size_t>(spec_.input_edge) * spec_.input_edge;
    for (const auto& s : out_shapes_) max_act = std::max(max_act, s.count());
    std::vector<double> dout(max_act), din(max_act);

    // softmax + cross-entropy: d(logits) = p - onehot
    {
        const Shape& os = out_shapes_[L - 1];
        const double* probs = acts + act_offsets_[L - 1];
        for (int c = 0; c < os.c; ++c) dout[c] = probs[c] - (c == label ? 1.0 : 0.0);
    }

    for (std::size_t li = L - 1; li-- > 0;) {
        const auto& l = spec_.layers[li];
        const Shape& is = in_shapes_[li];
        const Shape& os = out_shapes_[li];
        const double* in = li == 0 ? input : acts + act_offsets_[li - 1];
        const double* p = params_.data() + param_offsets_[li];
        double* g = grad + param_offsets_[li];

        switch (l.kind) {
        case LayerSpec::Kind::Conv: {
            const int K = l.kernel, S = l.stride;
            std::fill(din.begin(), din.begin() + is.count(), 0.0);
            double* gbias = g + static_cast<std::size_t>(os.c) * is.c * K * K;
            for (int oc = 0; oc < os.c; ++oc) {
                const double* wc = p + static_cast<std::size_t>(oc) * is.c * K * K;
                double* gc = g + static_cast<std::size_t>(oc) * is.c * K * K;
                for (int y = 0; y < os.h; ++y) {
                    for (int x = 0; x < os.w; ++x) {
                        const double d = dout[(static_cast<std::size_t>(oc) * os.h + y) * os.w + x];
                        if (d == 0.0) continue;
                        gbias[oc] += d;
                        for (int ic = 0; ic < is.c; ++ic) {
                            const double* iplane = in + static_cast<std::size_t>(ic) * is.h * is.w;
                            double* dplane = din.data() + static_cast<std::size_t>(ic) * is.h * is.w;
                            const double* wk = wc + static_cast<std::size_t>(ic) * K * K;
                            double* gk = gc + static_cast<std::size_t>(ic) * K * K;
                            for (int ky = 0; ky < K; ++ky) {
                                const std::size_t row = static_cast<std::size_t>(y * S + ky) * is.w + x * S;
                                for (int kx = 0; kx < K; ++kx) {
                                    gk[static_cast<std::size_t>(ky) * K + kx] += d * iplane[row + kx];
                                    dplane[row + kx] += d * wk[static_cast<std::size_t>(ky) * K + kx];
                                }
                            }
                        }
                    }
                }
            }
            break;
        }
        case LayerSpec::Kind::Relu: {
            const std::size_t n = is.count();
            for (std::size_t i = 0; i < n; ++i) din[i] = in[i] > 0.0 ? dout[i] : 0.0;
            break;
        }
        case LayerSpec::Kind::MaxPool: {
            const int P = l.pool;
            std::fill(din.begin(), din.begin() + is.count(), 0.0);
            for (int c = 0; c < os.c; ++c) {
                const double* iplane = in + static_cast<std::size_t>(c) * is.h * is.w;
                double* dplane = din.data() + static_cast<std::size_t>(c) * is.h * is.w;
                for (int y = 0; y < os.h; ++y) {
                    for (int x = 0; x < os.w; ++x) {
                        // first max in scan order receives the gradient
                        int by = 0, bx = 0;
                        double best = iplane[static_cast<std::size_t>(y * P) * is.w + x * P];
                        for (int py = 0; py < P; ++py)
                            for (int px = 0; px < P; ++px) {
                                const double v = iplane[static_cast<std::size_t>(y * P + py) * is.w + x * P + px];
                                if (v > best) { best = v; by = py; bx = px; }
                            }
                        dplane[static_cast<std::size_t>(y * P + by) * is.w + x * P + bx] +=
                            dout[(static_cast<std::size_t>(c) * os.h + y) * os.w + x];
                    }
                }
            }
            break;
        }
        case LayerSpec::Kind::Flatten:
            std::memcpy(din.data(), dout.data(), is.count() * sizeof(double));
            break;
        case LayerSpec::Kind::Dense: {
            const int F = is.c, O = os.c;
            double* gbias = g + static_cast<std::size_t>(O) * F;
            std::fill(din.begin(), din.begin() + F, 0.0);
            for (int o = 0; o < O; ++o) {
                const double d = dout[o];
                gbias[o] += d;
                const double* w = p + static_cast<std::size_t>(o) * F;
                double* gw = g + static_cast<std::size_t>(o) * F;
                for (int f = 0; f < F; ++f) {
                    gw[f] += d * in[f];
                    din[f] += d * w[f];
                }
            }
            break;
        }
        case LayerSpec::Kind::Softmax:
            // folded into the cross-entropy seed above; nothing here
            continue;
        }
        std::swap(dout, din);
    }
}

Tensor Network::forward_serial(const Tensor& batch) const {
    check_batch(batch);
    const int n = batch.shape[0];
    const std::size_t in_sz = static_cast<std::size_t>(spec_.input_edge) * spec_.input_edge;
    Tensor out({n, spec_.num_classes});
    std::vector<double> acts(act_size_);
    for (int i = 0; i < n; ++i) {
        forward_sample(batch.data.data() + i * in_sz, acts.data());
        const double* probs = acts.data() + act_offsets_.back();
        std::copy(probs, probs + spec_.num_classes,
                  out.data.data() + static_cast<std::size_t>(i) * spec_.num_classes);
    }
    return out;
}

Tensor Network::forward(const Tensor& batch) const {
    check_batch(batch);
    const int n = batch.shape[0];
    const std::size_t in_sz = static_cast<std::size_t>(spec_.input_edge) * spec_.input_edge;
    Tensor out({n, spec_.num_classes});
#pragma omp parallel
    {
        std::vector<double> acts(act_size_);
#pragma omp for schedule(static)
        for (int i = 0; i < n; ++i) {
            forward_sample(batch.data.data() + i * in_sz, acts.data());
            const double* probs = acts.data() + act_offsets_.back();
            std::copy(probs, probs + spec_.num_classes,
                      out.data.data() + static_cast<std::size_t>(i) * spec_.num_classes);
        }
    }
    return out;
}

double Network::loss_and_grad_serial(const Tensor& batch, const std::vector<int>& labels,
                                     std::vector<double>& grad) const {
    check_batch(batch);
    const int n = batch.shape[0];
    if (labels.size() != static_cast<std::size_t>(n))
        throw DataError("label count does not match batch size");
    for (int l : labels)
        if (l < 0 || l >= spec_.num_classes) throw DataError("label out of range");

    const std::size_t in_sz = static_cast<std::size_t>(spec_.input_edge) * spec_.input_edge;
    // same per-sample-buffer reduction order as the parallel path, so the two
    // entry points agree bit-for-bit
    grad.assign(params_.size(), 0.0);
    std::vector<double> acts(act_size_);
    std::vector<double> sample_grad(params_.size());
    double loss = 0.0;
    for (int i = 0; i < n; ++i) {
        const double* input = batch.data.data() + i * in_sz;
        forward_sample(input, acts.data());
        const double* probs = acts.data() + act_offsets_.back();
        loss += -std::log(std::max(probs[labels[i]], 1e-300));
        std::fill(sample_grad.begin(), sample_grad.end(), 0.0);
        backward_sample(input, acts.data(), labels[i], sample_grad.data());
        for (std::size_t k = 0; k < sample_grad.size(); ++k) grad[k] += sample_grad[k];
    }
    const double inv = 1.0 / n;
    for (auto& g : grad) g *= inv;
    return loss * inv;
}

double Network::loss_and_grad(const Tensor& batch, const std::vector<int>& labels,
                              std::vector<double>& grad) const {
    check_batch(batch);
    const int n = batch.shape[0];
    if (labels.size() != static_cast<std::size_t>(n))
        throw DataError("label count does not match batch size");
    for (int l : labels)
        if (l < 0 || l >= spec_.num_classes) throw DataError("label out of range");

    const std::size_t in_sz = static_cast<std::size_t>(spec_.input_edge) * spec_.input_edge;
    const std::size_t P = params_.size();

    // per-sample gradients, reduced sequentially afterwards so the result is
    // independent of the thread count
    std::vector<double> sample_grads(static_cast<std::size_t>(n) * P, 0.0);
    std::vector<double> sample_loss(n, 0.0);
#pragma omp parallel
    {
        std::vector<double> acts(act_size_);
#pragma omp for schedule(static)
        for (int i = 0; i < n; ++i) {
            const double* input = batch.data.data() + i * in_sz;
            forward_sample(input, acts.data());
            const double* probs = acts.data() + act_offsets_.back();
            sample_loss[i] = -std::log(std::max(probs[labels[i]], 1e-300));
            backward_sample(input, acts.data(), labels[i], sample_grads.data() + i * P);
        }
    }
    grad.assign(P, 0.0);
    double loss = 0.0;
    for (int i = 0; i < n; ++i) {
        loss += sample_loss[i];
        const double* sg = sample_grads.data() + i * P;
        for (std::size_t k = 0; k < P; ++k) grad[k] += sg[k];
    }
    const double inv = 1.0 / n;
    for (auto& g : grad) g *= inv;
    return loss * inv;
}

std::vector<int> Network::predict(const Tensor& batch) const {
    const Tensor probs = forward(batch);
    const int n = batch.shape[0], C = spec_.num_classes;
    std::vector<int> out(n);
    for (int i = 0; i < n; ++i) {
        const double* row = probs.data.data() + static_cast<std::size_t>(i) * C;
        int best = 0;
        for (int c = 1; c < C; ++c)
            if (row[c] > row[best]) best = c;
        out[i] = best;
    }
    return out;
}

} // namespace ts2img
