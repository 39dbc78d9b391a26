#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "ts2img/augment.hpp"
#include "ts2img/encoder.hpp"
#include "ts2img/image.hpp"
#include "ts2img/series.hpp"

namespace ts2img {

// One augmentation step in an image's provenance. `seed` drives the op's
// private RNG stream; `params` holds op-specific scalars (for "re" the
// probability/area/aspect ranges, for "ma" the window, for "shift" dx/dy,
// for "crop" the crop edge).
struct LineageOp {
    std::string op;
    std::uint64_t seed = 0;
    std::vector<double> params;
};

struct ManifestEntry {
    std::string image_path; // empty while the set lives in memory
    std::string label;
    std::string source_id;   // root series id (lineage-independent)
    int window_start = 0;    // in the encoded series' own coordinates
    int window_length = 0;
    int source_lo = 0;       // covered raw timestep range [source_lo, source_hi)
    int source_hi = 0;
    std::vector<LineageOp> lineage;
};

struct LabeledImageSet {
    std::vector<GrayImage> images;
    std::vector<ManifestEntry> manifest;

    std::size_t size() const { return images.size(); }
    void push(GrayImage img, ManifestEntry entry) {
        images.push_back(std::move(img));
        manifest.push_back(std::move(entry));
    }
    void append(const LabeledImageSet& other) {
        images.insert(images.end(), other.images.begin(), other.images.end());
        manifest.insert(manifest.end(), other.manifest.begin(), other.manifest.end());
    }
};

struct BalanceConfig {
    int target_per_class = 1;
    std::uint64_t rng_seed = 0;
    AugmentConfig augment;

    void validate() const {
        if (target_per_class < 1) throw ConfigError("target_per_class must be >= 1");
        augment.validate();
    }
};

// Encodes every stride-1 window of `series` into a labeled set with manifest
// entries. `prior_lineage` carries series-level ops already applied (e.g. a
// moving average); `raw_offset` says where smoothed index 0 sits in raw
// coordinates and `raw_span` how many raw timesteps one smoothed step covers.
LabeledImageSet encode_to_set(const TimeSeries& series, const EncodingConfig& config,
                              std::span<const LineageOp> prior_lineage = {},
                              int raw_offset = 0, int raw_span = 1);

// Equalizes per-class counts to exactly target_per_class: majority classes
// are subsampled uniformly at random, minority classes filled with seeded
// augmented variants (black-patch erasing and flips) of existing members.
LabeledImageSet balance(const LabeledImageSet& dataset, const BalanceConfig& config);

struct SplitResult {
    LabeledImageSet train;
    LabeledImageSet test;
};

// Contiguous block split per source series: one cut timestep per series,
// train keeps windows entirely on one side, test the other, and windows
// straddling the cut are dropped so no train/test pair shares a raw
// timestep. Augmented variants follow their source window's side.
SplitResult split_dataset(const LabeledImageSet& dataset, double test_fraction,
                          std::uint64_t rng_seed);

// Applies the image-level ops of a lineage in order ("ma" entries are
// series-level and skipped here).
GrayImage replay_image_ops(GrayImage base, std::span<const LineageOp> ops,
                           const AugmentConfig& augment_defaults = {});

// Full recipe replay: smooth the raw source per the lineage's "ma" op if
// present, encode the entry's window, then apply the image-level ops.
GrayImage replay_entry(const ManifestEntry& entry, const TimeSeries& source,
                       const EncodingConfig& config);

// JSON-lines manifest + PGM files on disk. save_image_set writes one PGM per
// image into `dir` (pattern <sourceId>_<windowStart>[_aug<k>].pgm), fills
// image_path and writes <dir>/manifest.jsonl.
void save_image_set(LabeledImageSet& dataset, const std::filesystem::path& dir);
LabeledImageSet load_image_set(const std::filesystem::path& manifest_path);

// Series corpus serialization: a JSON array of {id, label, samples}.
void save_series_json(const std::vector<TimeSeries>& corpus,
                      const std::filesystem::path& path);
std::vector<TimeSeries> load_series_json(const std::filesystem::path& path);

std::vector<std::string> class_names(const LabeledImageSet& dataset);
std::vector<std::size_t> class_counts(const LabeledImageSet& dataset,
                                      const std::vector<std::string>& classes);

} // namespace ts2img
