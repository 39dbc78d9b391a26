#include "ts2img/train.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "ts2img/metrics.hpp"
#include "ts2img/rng.hpp"

namespace ts2img {

std::vector<int> labels_to_indices(const LabeledImageSet& dataset,
                                   const std::vector<std::string>& classes) {
    std::vector<int> out;
    out.reserve(dataset.size());
    for (const auto& e : dataset.manifest) {
        const auto it = std::find(classes.begin(), classes.end(), e.label);
        if (it == classes.end()) throw DataError("unknown class label: " + e.label);
        out.push_back(static_cast<int>(it - classes.begin()));
    }
    return out;
}

Tensor to_tensor(const LabeledImageSet& dataset, int expected_edge) {
    if (dataset.size() == 0) throw DataError("empty dataset");
    Tensor t({static_cast<int>(dataset.size()), 1, expected_edge, expected_edge});
    const std::size_t sz = static_cast<std::size_t>(expected_edge) * expected_edge;
    for (std::size_t i = 0; i < dataset.size(); ++i) {
        const GrayImage& img = dataset.images[i];
        if (img.edge != expected_edge) throw DataError("image edge mismatch");
        for (std::size_t k = 0; k < sz; ++k)
            t.data[i * sz + k] = img.pixels[k] / 255.0;
    }
    return t;
}

namespace {

struct AdamState {
    std::vector<double> m, v;
    std::int64_t step = 0;
};

void apply_update(Network& net, const std::vector<double>& grad,
                  const TrainConfig& cfg, AdamState& adam) {
    auto& p = net.params();
    if (cfg.optimizer == TrainConfig::Optimizer::Sgd) {
        for (std::size_t i = 0; i < p.size(); ++i) p[i] -= cfg.learning_rate * grad[i];
        return;
    }
    if (adam.m.empty()) {
        adam.m.assign(p.size(), 0.0);
        adam.v.assign(p.size(), 0.0);
    }
    adam.step++;
    const double b1 = cfg.adam.beta1, b2 = cfg.adam.beta2;
    const double bc1 = 1.0 - std::pow(b1, static_cast<double>(adam.step));
    const double bc2 = 1.0 - std::pow(b2, static_cast<double>(adam.step));
    for (std::size_t i = 0; i < p.size(); ++i) {
        adam.m[i] = b1 * adam.m[i] + (1.0 - b1) * grad[i];
        adam.v[i] = b2 * adam.v[i] + (1.0 - b2) * grad[i] * grad[i];
        const double mhat = adam.m[i] / bc1;
        const double vhat = adam.v[i] / bc2;
        p[i] -= cfg.learning_rate * mhat / (std::sqrt(vhat) + cfg.adam.epsilon);
    }
}

double accuracy_of(const std::vector<int>& pred, const std::vector<int>& truth) {
    std::size_t ok = 0;
    for (std::size_t i = 0; i < pred.size(); ++i) ok += pred[i] == truth[i];
    return pred.empty() ? 0.0 : static_cast<double>(ok) / pred.size();
}

} // namespace

TrainResult train(const NetworkSpec& spec, const LabeledImageSet& train_set,
                  const std::vector<std::string>& classes, const TrainConfig& config,
                  const LabeledImageSet* eval_set) {
    config.validate();
    if (train_set.size() == 0) throw DataError("empty training set");

    const int edge = spec.input_edge;
    const std::size_t in_sz = static_cast<std::size_t>(edge) * edge;
    Tensor all = to_tensor(train_set, edge);
    const std::vector<int> all_labels = labels_to_indices(train_set, classes);

    // optional validation holdout, carved off a seeded shuffle
    std::vector<std::size_t> order(train_set.size());
    std::iota(order.begin(), order.end(), 0);
    Rng split_rng(Rng::derive(config.rng_seed, 0xa11));
    split_rng.shuffle(order);
    const std::size_t n_val = static_cast<std::size_t>(
        std::llround(config.validation_fraction * static_cast<double>(order.size())));
    std::vector<std::size_t> val_idx(order.begin(), order.begin() + n_val);
    std::vector<std::size_t> train_idx(order.begin() + n_val, order.end());
    std::sort(train_idx.begin(), train_idx.end());
    if (train_idx.empty()) throw DataError("validation fraction leaves no training data");

    Tensor eval_tensor;
    std::vector<int> eval_labels;
    if (eval_set && eval_set->size() > 0) {
        eval_tensor = to_tensor(*eval_set, edge);
        eval_labels = labels_to_indices(*eval_set, classes);
    }

    TrainResult result{Network(spec), {}};
    result.net.init_weights(Rng::derive(config.rng_seed, 1));
    AdamState adam;
    std::vector<double> grad;
    std::vector<double> best_params;
    double best_val_acc = -1.0;

    Rng shuffle_rng(Rng::derive(config.rng_seed, 2));

    for (int epoch = 0; epoch < config.epochs; ++epoch) {
        auto epoch_order = train_idx;
        shuffle_rng.shuffle(epoch_order);

        double loss_sum = 0.0;
        std::size_t loss_batches = 0, correct = 0;
        for (std::size_t b = 0; b < epoch_order.size(); b += config.batch_size) {
            const std::size_t bn =
                std::min<std::size_t>(config.batch_size, epoch_order.size() - b);
            Tensor batch({static_cast<int>(bn), 1, edge, edge});
            std::vector<int> labels(bn);
            for (std::size_t k = 0; k < bn; ++k) {
                const std::size_t src = epoch_order[b + k];
                labels[k] = all_labels[src];
                const double* from = all.data.data() + src * in_sz;
                double* to = batch.data.data() + k * in_sz;
                std::copy(from, from + in_sz, to);
                if (config.loader_random_erase) {
                    // regenerate the image view with a per-(epoch, sample) stream
                    Rng re_rng(Rng::derive(Rng::derive(config.loader_augment.rng_seed,
                                                       static_cast<std::uint64_t>(epoch)),
                                           src));
                    GrayImage erased = random_erase_black(train_set.images[src],
                                                          config.loader_augment, re_rng);
                    for (std::size_t i = 0; i < in_sz; ++i) to[i] = erased.pixels[i] / 255.0;
                }
            }
            const double loss = result.net.loss_and_grad(batch, labels, grad);
            apply_update(result.net, grad, config, adam);
            loss_sum += loss;
            loss_batches++;
            const auto pred = result.net.predict(batch);
            for (std::size_t k = 0; k < bn; ++k) correct += pred[k] == labels[k];
        }

        EpochStats stats;
        stats.epoch = epoch;
        stats.loss = loss_batches ? loss_sum / static_cast<double>(loss_batches) : 0.0;
        stats.train_accuracy = static_cast<double>(correct) /
                               static_cast<double>(epoch_order.size());

        if (!eval_labels.empty()) {
            const auto pred = result.net.predict(eval_tensor);
            const auto cm = confusion(eval_labels, pred, static_cast<int>(classes.size()));
            const auto sc = scores(cm);
            stats.has_eval = true;
            stats.eval_accuracy = sc.accuracy;
            double p = 0.0, r = 0.0;
            for (const auto& c : sc.per_class) {
                p += c.precision;
                r += c.recall;
            }
            stats.eval_macro_precision = p / static_cast<double>(sc.per_class.size());
            stats.eval_macro_recall = r / static_cast<double>(sc.per_class.size());
            stats.eval_macro_f1 = sc.macro_f1;
        }
        result.history.push_back(stats);

        if (!val_idx.empty()) {
            Tensor vb({static_cast<int>(val_idx.size()), 1, edge, edge});
            std::vector<int> vl(val_idx.size());
            for (std::size_t k = 0; k < val_idx.size(); ++k) {
                const std::size_t src = val_idx[k];
                vl[k] = all_labels[src];
                const double* from = all.data.data() + src * in_sz;
                std::copy(from, from + in_sz, vb.data.data() + k * in_sz);
            }
            const double acc = accuracy_of(result.net.predict(vb), vl);
            if (acc > best_val_acc) {
                best_val_acc = acc;
                best_params = result.net.params();
            }
        }
    }

    if (!best_params.empty()) result.net.params() = best_params;
    return result;
}

std::vector<int> predict(const Network& net, const LabeledImageSet& dataset) {
    return net.predict(to_tensor(dataset, net.spec().input_edge));
}

} // namespace ts2img
