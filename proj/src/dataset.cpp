#include "ts2img/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <numeric>

#include <json.hpp>

#include "ts2img/pgm.hpp"
#include "ts2img/rng.hpp"

namespace ts2img {

namespace {

std::uint64_t fnv1a(const std::string& s) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

bool has_ma(const std::vector<LineageOp>& lineage) {
    return std::any_of(lineage.begin(), lineage.end(),
                       [](const LineageOp& op) { return op.op == "ma"; });
}

AugmentConfig re_config_from_params(const std::vector<double>& p,
                                    const AugmentConfig& defaults) {
    AugmentConfig cfg = defaults;
    if (p.size() >= 5) {
        cfg.re_probability = p[0];
        cfg.re_area_range = {p[1], p[2]};
        cfg.re_aspect_range = {p[3], p[4]};
    }
    return cfg;
}

LineageOp make_re_op(std::uint64_t seed, const AugmentConfig& cfg, double probability) {
    return {"re", seed,
            {probability, cfg.re_area_range.first, cfg.re_area_range.second,
             cfg.re_aspect_range.first, cfg.re_aspect_range.second}};
}

} // namespace

LabeledImageSet encode_to_set(const TimeSeries& series, const EncodingConfig& config,
                              std::span<const LineageOp> prior_lineage,
                              int raw_offset, int raw_span) {
    auto images = encode_series(series, config);
    LabeledImageSet out;
    out.images = std::move(images);
    out.manifest.resize(out.images.size());
    for (std::size_t w = 0; w < out.images.size(); ++w) {
        ManifestEntry& e = out.manifest[w];
        e.label = series.label;
        e.source_id = series.id;
        e.window_start = static_cast<int>(w);
        e.window_length = config.window_length;
        e.source_lo = raw_offset + static_cast<int>(w);
        e.source_hi = e.source_lo + config.window_length + raw_span - 1;
        e.lineage.assign(prior_lineage.begin(), prior_lineage.end());
    }
    return out;
}

GrayImage replay_image_ops(GrayImage base, std::span<const LineageOp> ops,
                           const AugmentConfig& augment_defaults) {
    for (const auto& op : ops) {
        if (op.op == "ma") continue; // series-level, handled before encoding
        if (op.op == "re") {
            Rng rng(op.seed);
            base = random_erase_black(base, re_config_from_params(op.params, augment_defaults), rng);
        } else if (op.op == "flip_h") {
            base = flip_horizontal(base);
        } else if (op.op == "flip_v") {
            base = flip_vertical(base);
        } else if (op.op == "shift") {
            if (op.params.size() < 2) throw DataError("shift lineage op missing dx/dy");
            base = shift(base, static_cast<int>(op.params[0]), static_cast<int>(op.params[1]));
        } else if (op.op == "crop") {
            if (op.params.empty()) throw DataError("crop lineage op missing crop_edge");
            Rng rng(op.seed);
            base = random_crop(base, static_cast<int>(op.params[0]), rng);
        } else {
            throw DataError("unknown lineage op: " + op.op);
        }
    }
    return base;
}

GrayImage replay_entry(const ManifestEntry& entry, const TimeSeries& source,
                       const EncodingConfig& config) {
    TimeSeries input = source;
    for (const auto& op : entry.lineage) {
        if (op.op == "ma") {
            const int win = op.params.empty() ? 3 : static_cast<int>(op.params[0]);
            input.samples = moving_average(input.samples, win);
        }
    }
    const auto derived = derive_series(input, config);
    const auto polar = polar_remap(derived, config);
    GrayImage img = map_window_to_image(derived, polar,
                                        static_cast<std::size_t>(entry.window_start), config);
    img.label = entry.label;
    img = replay_image_ops(std::move(img), entry.lineage);
    img.label = entry.label;
    return img;
}

LabeledImageSet balance(const LabeledImageSet& dataset, const BalanceConfig& config) {
    config.validate();
    const auto classes = class_names(dataset);
    std::map<std::string, std::vector<std::size_t>> by_class;
    for (std::size_t i = 0; i < dataset.size(); ++i)
        by_class[dataset.manifest[i].label].push_back(i);
    for (const auto& c : classes)
        if (by_class[c].empty()) throw DataError("class '" + c + "' has no samples");

    const std::size_t target = static_cast<std::size_t>(config.target_per_class);
    LabeledImageSet out;
    for (std::size_t ci = 0; ci < classes.size(); ++ci) {
        auto indices = by_class[classes[ci]];
        if (indices.size() > target) {
            Rng rng(Rng::derive(config.rng_seed, 2 * ci));
            rng.shuffle(indices);
            indices.resize(target);
            std::sort(indices.begin(), indices.end());
        }
        for (auto i : indices)
            out.push(dataset.images[i], dataset.manifest[i]);

        // minority fill: cycle the originals, one seeded op per variant
        const std::size_t have = indices.size();
        for (std::size_t k = 0; have + k < target; ++k) {
            const std::size_t src = indices[k % have];
            Rng chooser(Rng::derive(Rng::derive(config.rng_seed, 2 * ci + 1), k));
            const std::uint64_t pick = chooser.below(3);
            LineageOp op;
            if (pick == 0) {
                // force the patch so the variant actually differs
                op = make_re_op(chooser.next_u64(), config.augment, 1.0);
            } else if (pick == 1) {
                op = {"flip_h", 0, {}};
            } else {
                op = {"flip_v", 0, {}};
            }
            GrayImage img = replay_image_ops(dataset.images[src], std::span(&op, 1));
            ManifestEntry entry = dataset.manifest[src];
            entry.image_path.clear();
            entry.lineage.push_back(op);
            out.push(std::move(img), std::move(entry));
        }
    }
    return out;
}

SplitResult split_dataset(const LabeledImageSet& dataset, double test_fraction,
                          std::uint64_t rng_seed) {
    if (!(test_fraction > 0.0 && test_fraction < 1.0))
        throw ConfigError("test_fraction must lie in (0, 1)");

    std::map<std::string, std::vector<std::size_t>> by_source;
    for (std::size_t i = 0; i < dataset.size(); ++i)
        by_source[dataset.manifest[i].source_id].push_back(i);

    SplitResult result;
    std::vector<char> side(dataset.size(), 'd'); // 't'rain / 's'test / 'd'ropped
    for (auto& [source, indices] : by_source) {
        const std::size_t n = indices.size();
        const std::size_t want_test = static_cast<std::size_t>(
            std::llround(static_cast<double>(n) * test_fraction));
        if (want_test == 0 || want_test >= n) {
            for (auto i : indices) side[i] = want_test == 0 ? 't' : 's';
            continue;
        }
        Rng rng(Rng::derive(rng_seed, fnv1a(source)));
        const bool test_at_tail = rng.below(2) == 0;

        auto sorted = indices;
        if (test_at_tail) {
            // test block = highest source ranges; cut at the lo of the first
            // test-side image, drop windows straddling the cut
            std::sort(sorted.begin(), sorted.end(), [&](std::size_t a, std::size_t b) {
                return dataset.manifest[a].source_lo < dataset.manifest[b].source_lo;
            });
            const int cut = dataset.manifest[sorted[n - want_test]].source_lo;
            for (auto i : indices) {
                const auto& e = dataset.manifest[i];
                if (e.source_lo >= cut) side[i] = 's';
                else if (e.source_hi <= cut) side[i] = 't';
            }
        } else {
            std::sort(sorted.begin(), sorted.end(), [&](std::size_t a, std::size_t b) {
                return dataset.manifest[a].source_hi < dataset.manifest[b].source_hi;
            });
            const int cut = dataset.manifest[sorted[want_test - 1]].source_hi;
            for (auto i : indices) {
                const auto& e = dataset.manifest[i];
                if (e.source_hi <= cut) side[i] = 's';
                else if (e.source_lo >= cut) side[i] = 't';
            }
        }
    }
    for (std::size_t i = 0; i < dataset.size(); ++i) {
        if (side[i] == 't') result.train.push(dataset.images[i], dataset.manifest[i]);
        else if (side[i] == 's') result.test.push(dataset.images[i], dataset.manifest[i]);
    }
    return result;
}

void save_image_set(LabeledImageSet& dataset, const std::filesystem::path& dir) {
    std::filesystem::create_directories(dir);
    std::map<std::string, int> aug_counters;
    std::ofstream manifest(dir / "manifest.jsonl");
    if (!manifest) throw DataError("cannot write manifest in " + dir.string());

    for (std::size_t i = 0; i < dataset.size(); ++i) {
        ManifestEntry& e = dataset.manifest[i];
        std::string stem = e.source_id + (has_ma(e.lineage) ? "_ma" : "") + "_" +
                           std::to_string(e.window_start);
        const bool augmented = std::any_of(
            e.lineage.begin(), e.lineage.end(),
            [](const LineageOp& op) { return op.op != "ma"; });
        if (augmented) stem += "_aug" + std::to_string(aug_counters[stem]++);
        e.image_path = stem + ".pgm";
        write_pgm(dataset.images[i], dir / e.image_path);

        nlohmann::json lineage = nlohmann::json::array();
        for (const auto& op : e.lineage)
            lineage.push_back({{"op", op.op}, {"seed", op.seed}, {"params", op.params}});
        nlohmann::json rec = {
            {"image_path", e.image_path},   {"label", e.label},
            {"source_id", e.source_id},     {"window_start", e.window_start},
            {"window_length", e.window_length}, {"source_lo", e.source_lo},
            {"source_hi", e.source_hi},     {"lineage", lineage}};
        manifest << rec.dump() << "\n";
    }
}

LabeledImageSet load_image_set(const std::filesystem::path& manifest_path) {
    std::ifstream in(manifest_path);
    if (!in) throw DataError("cannot open manifest: " + manifest_path.string());
    const auto dir = manifest_path.parent_path();
    LabeledImageSet out;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        nlohmann::json rec = nlohmann::json::parse(line);
        ManifestEntry e;
        e.image_path = rec.at("image_path").get<std::string>();
        e.label = rec.at("label").get<std::string>();
        e.source_id = rec.at("source_id").get<std::string>();
        e.window_start = rec.at("window_start").get<int>();
        e.window_length = rec.at("window_length").get<int>();
        e.source_lo = rec.value("source_lo", e.window_start);
        e.source_hi = rec.value("source_hi", e.window_start + e.window_length);
        for (const auto& j : rec.at("lineage")) {
            LineageOp op;
            op.op = j.at("op").get<std::string>();
            op.seed = j.at("seed").get<std::uint64_t>();
            op.params = j.at("params").get<std::vector<double>>();
            e.lineage.push_back(std::move(op));
        }
        GrayImage img = read_pgm(dir / e.image_path);
        img.label = e.label;
        out.push(std::move(img), std::move(e));
    }
    return out;
}

void save_series_json(const std::vector<TimeSeries>& corpus,
                      const std::filesystem::path& path) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& s : corpus)
        arr.push_back({{"id", s.id}, {"label", s.label}, {"samples", s.samples}});
    std::ofstream out(path);
    if (!out) throw DataError("cannot write " + path.string());
    out << arr.dump(2) << "\n";
}

std::vector<TimeSeries> load_series_json(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open " + path.string());
    nlohmann::json arr = nlohmann::json::parse(in);
    std::vector<TimeSeries> out;
    for (const auto& j : arr) {
        TimeSeries s;
        s.id = j.at("id").get<std::string>();
        s.label = j.at("label").get<std::string>();
        s.samples = j.at("samples").get<std::vector<double>>();
        s.validate();
        out.push_back(std::move(s));
    }
    return out;
}

std::vector<std::string> class_names(const LabeledImageSet& dataset) {
    std::vector<std::string> classes;
    for (const auto& e : dataset.manifest)
        if (std::find(classes.begin(), classes.end(), e.label) == classes.end())
            classes.push_back(e.label);
    return classes;
}

std::vector<std::size_t> class_counts(const LabeledImageSet& dataset,
                                      const std::vector<std::string>& classes) {
    std::vector<std::size_t> counts(classes.size(), 0);
    for (const auto& e : dataset.manifest) {
        const auto it = std::find(classes.begin(), classes.end(), e.label);
        if (it != classes.end()) counts[it - classes.begin()]++;
    }
    return counts;
}

} // namespace ts2img
