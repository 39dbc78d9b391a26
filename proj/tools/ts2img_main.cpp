#include <cstdlib>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "ts2img/checkpoint.hpp"
#include "ts2img/pgm.hpp"
#include "ts2img/pipeline.hpp"
#include "ts2img/rng.hpp"

namespace {

using namespace ts2img;

constexpr int kExitConfig = 2;
constexpr int kExitData = 3;
constexpr int kExitRuntime = 4;

PipelineConfig load_config_or_default(const std::string& path) {
    if (path.empty()) return PipelineConfig{};
    return load_pipeline_config(path);
}

// TS2IMG_SEED, when set, overrides the master seed from config/flags.
void apply_env_seed(std::uint64_t& seed) {
    if (const char* env = std::getenv("TS2IMG_SEED")) {
        try {
            seed = std::stoull(env);
        } catch (const std::exception&) {
            throw ConfigError("TS2IMG_SEED is not an integer");
        }
    }
}

int cmd_synth(const std::string& config_path, const std::string& out_path,
              std::uint64_t seed) {
    auto cfg = load_config_or_default(config_path);
    apply_env_seed(seed);
    const auto corpus = build_corpus(cfg, seed);
    save_series_json(corpus, out_path);
    std::cout << "wrote " << corpus.size() << " series to " << out_path << "\n";
    return 0;
}

int cmd_encode(const std::string& config_path, const std::string& series_path,
               const std::string& out_dir, int window_length, int image_edge,
               int stencil_points, bool with_ma) {
    auto cfg = load_config_or_default(config_path);
    if (window_length > 0) cfg.encoding.window_length = window_length;
    if (image_edge > 0) cfg.encoding.image_edge = image_edge;
    if (stencil_points > 0) cfg.encoding.stencil_points = stencil_points;
    cfg.encoding.validate();

    const auto corpus = load_series_json(series_path);
    auto set = encode_corpus(corpus, cfg.encoding, with_ma, cfg.augment.ma_window);
    save_image_set(set, out_dir);
    std::cout << "encoded " << set.size() << " images into " << out_dir << "\n";
    return 0;
}

int cmd_augment(const std::string& config_path, const std::string& manifest_path,
                const std::string& out_dir, const std::vector<std::string>& ops,
                int per_image, std::uint64_t seed) {
    auto cfg = load_config_or_default(config_path);
    apply_env_seed(seed);
    auto set = load_image_set(manifest_path);

    LabeledImageSet out = set;
    std::uint64_t stream = 0;
    for (std::size_t i = 0; i < set.size(); ++i) {
        for (int k = 0; k < per_image; ++k) {
            for (const auto& name : ops) {
                LineageOp op;
                if (name == "re") {
                    op = {"re", Rng::derive(seed, stream++),
                          {cfg.augment.re_probability, cfg.augment.re_area_range.first,
                           cfg.augment.re_area_range.second,
                           cfg.augment.re_aspect_range.first,
                           cfg.augment.re_aspect_range.second}};
                } else if (name == "flip_h" || name == "flip_v") {
                    op = {name, 0, {}};
                } else if (name == "crop") {
                    op = {"crop", Rng::derive(seed, stream++),
                          {static_cast<double>(set.images[i].edge * 3 / 4)}};
                } else {
                    throw ConfigError("unknown augment op: " + name);
                }
                GrayImage img = replay_image_ops(set.images[i], std::span(&op, 1));
                ManifestEntry entry = set.manifest[i];
                entry.image_path.clear();
                entry.lineage.push_back(op);
                out.push(std::move(img), std::move(entry));
            }
        }
    }
    save_image_set(out, out_dir);
    std::cout << "wrote " << out.size() << " images (" << out.size() - set.size()
              << " augmented) into " << out_dir << "\n";
    return 0;
}

int cmd_balance(const std::string& config_path, const std::string& manifest_path,
                const std::string& out_dir, int target, std::uint64_t seed) {
    auto cfg = load_config_or_default(config_path);
    apply_env_seed(seed);
    BalanceConfig bal = cfg.balance;
    if (target > 0) bal.target_per_class = target;
    bal.rng_seed = seed;
    bal.augment = cfg.augment;

    auto set = load_image_set(manifest_path);
    auto balanced = balance(set, bal);
    save_image_set(balanced, out_dir);

    const auto classes = class_names(balanced);
    const auto counts = class_counts(balanced, classes);
    for (std::size_t c = 0; c < classes.size(); ++c)
        std::cout << classes[c] << ": " << counts[c] << "\n";
    return 0;
}

int cmd_split(const std::string& manifest_path, const std::string& out_dir,
              double test_fraction, std::uint64_t seed) {
    apply_env_seed(seed);
    auto set = load_image_set(manifest_path);
    auto result = split_dataset(set, test_fraction, seed);
    save_image_set(result.train, std::filesystem::path(out_dir) / "train");
    save_image_set(result.test, std::filesystem::path(out_dir) / "test");
    std::cout << "train " << result.train.size() << " / test " << result.test.size()
              << " (dropped " << set.size() - result.train.size() - result.test.size()
              << " straddling the cut)\n";
    return 0;
}

int cmd_train(const std::string& config_path, const std::string& data_path,
              const std::string& model_path) {
    auto cfg = load_config_or_default(config_path);
    auto set = load_image_set(data_path);
    if (set.size() == 0) throw DataError("training manifest is empty");
    const auto classes = class_names(set);
    const int edge = set.images.front().edge;
    const auto spec = NetworkSpec::standard(edge, static_cast<int>(classes.size()));

    auto result = train(spec, set, classes, cfg.train);
    save_checkpoint(result.net, classes, model_path);
    write_combined_history_csv(result.history, model_path + ".history.csv");
    std::cout << "final loss " << result.history.back().loss << ", train accuracy "
              << result.history.back().train_accuracy << "\n"
              << "model: " << model_path << "\n";
    return 0;
}

int cmd_eval(const std::string& model_path, const std::string& data_path,
             const std::string& report_path, const std::string& csv_path,
             int experiment_id, const std::string& aug_tags) {
    auto loaded = load_checkpoint(model_path);
    auto set = load_image_set(data_path);
    if (set.size() == 0) throw DataError("evaluation manifest is empty");

    const auto& classes = loaded.classes;
    const auto truth = labels_to_indices(set, classes);
    const auto pred = predict(loaded.net, set);
    const auto cm = confusion(truth, pred, static_cast<int>(classes.size()));
    const auto sc = scores(cm);
    write_report_json(sc, cm, classes, report_path);
    std::cout << "accuracy " << sc.accuracy << ", macro F1 " << sc.macro_f1 << "\n";

    if (!csv_path.empty()) {
        std::ofstream out(csv_path);
        out << "experiment,window_length,data_augmentation,image_edge,"
               "accuracy_test,f1_score\n";
        out << experiment_id << "," << set.manifest.front().window_length << ","
            << (aug_tags.empty() ? "-" : aug_tags) << ","
            << loaded.net.spec().input_edge << "," << sc.accuracy << ","
            << sc.macro_f1 << "\n";
    }
    return 0;
}

int cmd_experiment(const std::string& config_path, const std::string& out_dir) {
    auto cfg = load_pipeline_config(config_path);
    apply_env_seed(cfg.master_seed);
    std::filesystem::create_directories(out_dir);

    const auto results = run_experiment(cfg);
    write_results_csv(results, std::filesystem::path(out_dir) / "results.csv");
    for (const auto& r : results) {
        for (std::size_t rep = 0; rep < r.repetitions.size(); ++rep) {
            const auto stem = "history_row" + std::to_string(r.spec.id) + "_rep" +
                              std::to_string(rep) + ".csv";
            write_combined_history_csv(r.repetitions[rep].history,
                                       std::filesystem::path(out_dir) / stem);
        }
        std::cout << "row " << r.spec.id << ": accuracy " << r.accuracy_mean << " +- "
                  << r.accuracy_std << ", macro F1 " << r.macro_f1_mean << " +- "
                  << r.macro_f1_std << "\n";
    }
    std::cout << "results: " << (std::filesystem::path(out_dir) / "results.csv").string()
              << "\n";
    return 0;
}

int cmd_plot_data(const std::string& history_path, const std::string& out_dir) {
    const auto history = load_combined_history_csv(history_path);
    std::filesystem::create_directories(out_dir);
    write_history_csv(history, std::filesystem::path(out_dir) / "accuracy.csv");
    write_prf_csv(history, std::filesystem::path(out_dir) / "prf.csv");
    std::cout << "wrote accuracy.csv and prf.csv to " << out_dir << "\n";
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"time-series-to-image encoding, augmentation and CNN pipeline"};
    app.require_subcommand(1);

    std::string config_path, series_path, manifest_path, out_path, model_path;
    std::string report_path = "report.json", csv_path, history_path, aug_tags;
    std::vector<std::string> aug_ops{"re"};
    std::uint64_t seed = 0;
    int window_length = 0, image_edge = 0, stencil_points = 0;
    int target = 0, per_image = 1, experiment_id = 0;
    double test_fraction = 0.25;
    bool with_ma = false;

    auto* synth = app.add_subcommand("synth", "generate a synthetic series corpus");
    synth->add_option("--spec,--config", config_path, "pipeline config JSON");
    synth->add_option("--out", out_path, "output series JSON")->required();
    synth->add_option("--seed", seed, "corpus seed");

    auto* encode = app.add_subcommand("encode", "encode series into PGM images");
    encode->add_option("--config", config_path, "pipeline config JSON");
    encode->add_option("--series", series_path, "series JSON")->required();
    encode->add_option("--out", out_path, "output directory")->required();
    encode->add_option("--window-length", window_length, "override window length");
    encode->add_option("--image-edge", image_edge, "override image edge");
    encode->add_option("--stencil-points", stencil_points, "override stencil order");
    encode->add_flag("--ma", with_ma, "also encode a moving-averaged copy");

    auto* augment = app.add_subcommand("augment", "write augmented image variants");
    augment->add_option("--config", config_path, "pipeline config JSON");
    augment->add_option("--manifest", manifest_path, "input manifest.jsonl")->required();
    augment->add_option("--out", out_path, "output directory")->required();
    augment->add_option("--ops", aug_ops, "ops: re, flip_h, flip_v, crop");
    augment->add_option("--per-image", per_image, "variants per image per op");
    augment->add_option("--seed", seed, "augmentation seed");

    auto* balance_cmd = app.add_subcommand("balance", "equalize per-class counts");
    balance_cmd->add_option("--config", config_path, "pipeline config JSON");
    balance_cmd->add_option("--manifest", manifest_path, "input manifest.jsonl")->required();
    balance_cmd->add_option("--out", out_path, "output directory")->required();
    balance_cmd->add_option("--target", target, "target per class");
    balance_cmd->add_option("--seed", seed, "balance seed");

    auto* split_cmd = app.add_subcommand("split", "leak-free train/test block split");
    split_cmd->add_option("--manifest", manifest_path, "input manifest.jsonl")->required();
    split_cmd->add_option("--out", out_path, "output directory")->required();
    split_cmd->add_option("--test-fraction", test_fraction, "test fraction in (0,1)");
    split_cmd->add_option("--seed", seed, "split seed");

    auto* train_cmd = app.add_subcommand("train", "train the CNN on a manifest");
    train_cmd->add_option("--config", config_path, "pipeline config JSON");
    train_cmd->add_option("--data", manifest_path, "training manifest.jsonl")->required();
    train_cmd->add_option("--out", model_path, "model checkpoint path")->required();

    auto* eval_cmd = app.add_subcommand("eval", "evaluate a model on a manifest");
    eval_cmd->add_option("--model", model_path, "model checkpoint")->required();
    eval_cmd->add_option("--data", manifest_path, "evaluation manifest.jsonl")->required();
    eval_cmd->add_option("--report", report_path, "output report JSON");
    eval_cmd->add_option("--csv", csv_path, "optional result-row CSV");
    eval_cmd->add_option("--experiment-id", experiment_id, "id for the CSV row");
    eval_cmd->add_option("--aug-tags", aug_tags, "augmentation tags for the CSV row");

    auto* experiment = app.add_subcommand("experiment", "run the configured grid");
    experiment->add_option("--config", config_path, "pipeline config JSON")->required();
    experiment->add_option("--out", out_path, "output directory")->required();

    auto* plot = app.add_subcommand("plot-data", "split a history CSV into plot CSVs");
    plot->add_option("--history", history_path, "combined history CSV")->required();
    plot->add_option("--out", out_path, "output directory")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        // usage problems count as configuration errors; --help stays 0
        return app.exit(e) == 0 ? 0 : kExitConfig;
    }

    try {
        if (synth->parsed()) return cmd_synth(config_path, out_path, seed);
        if (encode->parsed())
            return cmd_encode(config_path, series_path, out_path, window_length,
                              image_edge, stencil_points, with_ma);
        if (augment->parsed())
            return cmd_augment(config_path, manifest_path, out_path, aug_ops, per_image, seed);
        if (balance_cmd->parsed())
            return cmd_balance(config_path, manifest_path, out_path, target, seed);
        if (split_cmd->parsed())
            return cmd_split(manifest_path, out_path, test_fraction, seed);
        if (train_cmd->parsed()) return cmd_train(config_path, manifest_path, model_path);
        if (eval_cmd->parsed())
            return cmd_eval(model_path, manifest_path, report_path, csv_path,
                            experiment_id, aug_tags);
        if (experiment->parsed()) return cmd_experiment(config_path, out_path);
        if (plot->parsed()) return cmd_plot_data(history_path, out_path);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const DataError& e) {
        std::cerr << "data error: " << e.what() << "\n";
        return kExitData;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitRuntime;
    }
    return kExitRuntime;
}
