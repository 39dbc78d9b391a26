#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ts2img/augment.hpp"
#include "ts2img/dataset.hpp"
#include "ts2img/network.hpp"

namespace ts2img {

struct AdamParams {
    double beta1 = 0.9;
    double beta2 = 0.999;
    double epsilon = 1e-8;
};

struct TrainConfig {
    int epochs = 60;
    int batch_size = 32;
    double learning_rate = 1e-3;
    enum class Optimizer { Sgd, Adam } optimizer = Optimizer::Adam;
    AdamParams adam;
    std::uint64_t rng_seed = 0;
    double validation_fraction = 0.0; // > 0: keep the best-epoch snapshot
    bool loader_random_erase = false; // black-patch erasing applied per batch
    AugmentConfig loader_augment;

    void validate() const {
        if (epochs < 1) throw ConfigError("epochs must be >= 1");
        if (batch_size < 1) throw ConfigError("batch_size must be >= 1");
        if (learning_rate < 0.0) throw ConfigError("learning_rate must be >= 0");
        if (validation_fraction < 0.0 || validation_fraction >= 1.0)
            throw ConfigError("validation_fraction must lie in [0, 1)");
        if (loader_random_erase) loader_augment.validate();
    }
};

struct EpochStats {
    int epoch = 0;
    double loss = 0.0;
    double train_accuracy = 0.0;
    bool has_eval = false;
    double eval_accuracy = 0.0;
    double eval_macro_precision = 0.0;
    double eval_macro_recall = 0.0;
    double eval_macro_f1 = 0.0;
};

struct TrainResult {
    Network net;
    std::vector<EpochStats> history;
};

// Maps string labels to indices into `classes`; unknown labels throw.
std::vector<int> labels_to_indices(const LabeledImageSet& dataset,
                                   const std::vector<std::string>& classes);

// Pixels scaled into [0, 1], batch-major [N, 1, E, E].
Tensor to_tensor(const LabeledImageSet& dataset, int expected_edge);

// Seeded mini-batch training with a fixed shuffle order. When `eval_set` is
// given, each epoch's test-side accuracy/precision/recall/F1 land in the
// history. With validation_fraction > 0 the returned net is the best-epoch
// snapshot by validation accuracy, otherwise the final-epoch weights.
TrainResult train(const NetworkSpec& spec, const LabeledImageSet& train_set,
                  const std::vector<std::string>& classes, const TrainConfig& config,
                  const LabeledImageSet* eval_set = nullptr);

std::vector<int> predict(const Network& net, const LabeledImageSet& dataset);

} // namespace ts2img
