#include "ts2img/metrics.hpp"

namespace ts2img {

ConfusionMatrix confusion(const std::vector<int>& true_labels,
                          const std::vector<int>& predicted_labels, int num_classes) {
    if (true_labels.size() != predicted_labels.size())
        throw DataError("label lists differ in length");
    ConfusionMatrix cm;
    cm.counts.assign(num_classes, std::vector<std::int64_t>(num_classes, 0));
    for (std::size_t i = 0; i < true_labels.size(); ++i) {
        const int t = true_labels[i], p = predicted_labels[i];
        if (t < 0 || t >= num_classes || p < 0 || p >= num_classes)
            throw DataError("class index out of range");
        cm.counts[t][p]++;
    }
    return cm;
}

Scores scores(const ConfusionMatrix& cm) {
    const std::int64_t total = cm.total();
    if (total == 0) throw DataError("empty confusion matrix");
    const int n = cm.num_classes();

    Scores s;
    std::int64_t trace = 0;
    for (int c = 0; c < n; ++c) trace += cm.counts[c][c];
    s.accuracy = static_cast<double>(trace) / static_cast<double>(total);

    s.per_class.resize(n);
    for (int c = 0; c < n; ++c) {
        std::int64_t col = 0, row = 0;
        for (int k = 0; k < n; ++k) {
            col += cm.counts[k][c];
            row += cm.counts[c][k];
        }
        const std::int64_t diag = cm.counts[c][c];
        ClassScores& cs = s.per_class[c];
        cs.degenerate = (col == 0 || row == 0);
        cs.precision = col == 0 ? 0.0 : static_cast<double>(diag) / col;
        cs.recall = row == 0 ? 0.0 : static_cast<double>(diag) / row;
        const double pr = cs.precision + cs.recall;
        cs.f1 = pr == 0.0 ? 0.0 : 2.0 * cs.precision * cs.recall / pr;
        s.macro_f1 += cs.f1;
    }
    s.macro_f1 /= n;
    return s;
}

} // namespace ts2img
