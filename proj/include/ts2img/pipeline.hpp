#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "ts2img/dataset.hpp"
#include "ts2img/metrics.hpp"
#include "ts2img/synth.hpp"
#include "ts2img/train.hpp"

namespace ts2img {

// One row of the experiment grid: window length, image edge, stencil order
// and the two augmentation switches (series-level moving average, loader
// random erasing).
struct ExperimentRowSpec {
    int id = 0;
    int window_length = 50;
    int image_edge = 64;
    int stencil_points = 3;
    bool ma = false;
    bool re = false;
};

struct PipelineConfig {
    std::vector<SyntheticSpec> synthetic; // empty: use the built-in corpus
    EncodingConfig encoding;
    AugmentConfig augment;
    BalanceConfig balance;
    double test_fraction = 0.25;
    TrainConfig train;
    std::vector<ExperimentRowSpec> rows;
    int repetitions = 3;
    std::uint64_t master_seed = 42;
};

// Single JSON document with sections {synthetic, encoding, augment, balance,
// train, experiment}; absent sections keep their defaults.
PipelineConfig load_pipeline_config(const std::filesystem::path& path);

// Generates the corpus for one repetition (built-in recipes unless the
// config supplies its own, reseeded per repetition).
std::vector<TimeSeries> build_corpus(const PipelineConfig& config,
                                     std::uint64_t corpus_seed);

// Encode the whole corpus (plus MA-smoothed copies when requested) into one
// labeled set with provenance.
LabeledImageSet encode_corpus(const std::vector<TimeSeries>& corpus,
                              const EncodingConfig& encoding, bool with_ma,
                              int ma_window);

struct RunOutcome {
    double accuracy = 0.0;
    double macro_f1 = 0.0;
    std::vector<EpochStats> history;
};

// One full pipeline pass: encode, balance, block-split, train, evaluate.
RunOutcome run_single(const PipelineConfig& config, const ExperimentRowSpec& row,
                      std::uint64_t rep_seed);

struct ExperimentRowResult {
    ExperimentRowSpec spec;
    std::vector<RunOutcome> repetitions;
    double accuracy_mean = 0.0, accuracy_std = 0.0;
    double macro_f1_mean = 0.0, macro_f1_std = 0.0;
};

// Runs one grid row over config.repetitions seeds (derived from master seed
// and row id; streams never overlap across rows).
ExperimentRowResult run_experiment_row(const PipelineConfig& config,
                                       const ExperimentRowSpec& row);

std::vector<ExperimentRowResult> run_experiment(const PipelineConfig& config);

// Result CSV in grid-row order: id, window length, augmentation tags, image
// edge, accuracy (mean, std), macro F1 (mean, std).
void write_results_csv(const std::vector<ExperimentRowResult>& results,
                       const std::filesystem::path& path);

// Epoch-indexed convergence data: loss + accuracies in one file, test-side
// precision/recall/F1 in the other.
void write_history_csv(const std::vector<EpochStats>& history,
                       const std::filesystem::path& path);
void write_prf_csv(const std::vector<EpochStats>& history,
                   const std::filesystem::path& path);

// Full per-epoch record as written by `ts2img train` / `experiment`; the
// plot-data subcommand splits it back into the two plot CSVs above.
void write_combined_history_csv(const std::vector<EpochStats>& history,
                                const std::filesystem::path& path);
std::vector<EpochStats> load_combined_history_csv(const std::filesystem::path& path);

// Evaluation report emitted by `ts2img eval`.
void write_report_json(const Scores& scores, const ConfusionMatrix& cm,
                       const std::vector<std::string>& classes,
                       const std::filesystem::path& path);

} // namespace ts2img
