#pragma once

#include <cstdint>
#include <vector>

#include "ts2img/errors.hpp"

namespace ts2img {

// Rows are true classes, columns predicted classes.
struct ConfusionMatrix {
    std::vector<std::vector<std::int64_t>> counts;

    int num_classes() const { return static_cast<int>(counts.size()); }
    std::int64_t total() const {
        std::int64_t n = 0;
        for (const auto& row : counts)
            for (auto c : row) n += c;
        return n;
    }
};

struct ClassScores {
    double precision = 0.0;
    double recall = 0.0;
    double f1 = 0.0;
    bool degenerate = false; // a zero-division fallback was applied
};

struct Scores {
    double accuracy = 0.0;
    std::vector<ClassScores> per_class;
    double macro_f1 = 0.0;
};

ConfusionMatrix confusion(const std::vector<int>& true_labels,
                          const std::vector<int>& predicted_labels, int num_classes);

// Accuracy = trace/total; per-class precision/recall/F1 with the 0-on-empty
// convention; macro F1 = unweighted mean of per-class F1.
Scores scores(const ConfusionMatrix& cm);

} // namespace ts2img
