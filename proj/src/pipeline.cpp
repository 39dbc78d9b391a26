#include "ts2img/pipeline.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>

#include <json.hpp>

#include "ts2img/rng.hpp"

namespace ts2img {

namespace {

using nlohmann::json;

std::pair<double, double> pair_from(const json& j) {
    return {j.at(0).get<double>(), j.at(1).get<double>()};
}

void parse_encoding(const json& j, EncodingConfig& cfg) {
    cfg.image_edge = j.value("image_edge", cfg.image_edge);
    cfg.window_length = j.value("window_length", cfg.window_length);
    cfg.stencil_points = j.value("stencil_points", cfg.stencil_points);
    cfg.pixel_max = j.value("pixel_max", cfg.pixel_max);
}

void parse_augment(const json& j, AugmentConfig& cfg) {
    cfg.ma_window = j.value("ma_window", cfg.ma_window);
    cfg.re_probability = j.value("re_probability", cfg.re_probability);
    if (j.contains("re_area_range")) cfg.re_area_range = pair_from(j["re_area_range"]);
    if (j.contains("re_aspect_range"))
        cfg.re_aspect_range = pair_from(j["re_aspect_range"]);
    cfg.rng_seed = j.value("rng_seed", cfg.rng_seed);
}

void parse_train(const json& j, TrainConfig& cfg) {
    cfg.epochs = j.value("epochs", cfg.epochs);
    cfg.batch_size = j.value("batch_size", cfg.batch_size);
    cfg.learning_rate = j.value("learning_rate", cfg.learning_rate);
    if (j.contains("optimizer")) {
        const auto name = j["optimizer"].get<std::string>();
        if (name == "sgd") cfg.optimizer = TrainConfig::Optimizer::Sgd;
        else if (name == "adam") cfg.optimizer = TrainConfig::Optimizer::Adam;
        else throw ConfigError("unknown optimizer: " + name);
    }
    cfg.adam.beta1 = j.value("beta1", cfg.adam.beta1);
    cfg.adam.beta2 = j.value("beta2", cfg.adam.beta2);
    cfg.adam.epsilon = j.value("epsilon", cfg.adam.epsilon);
    cfg.rng_seed = j.value("rng_seed", cfg.rng_seed);
    cfg.validation_fraction = j.value("validation_fraction", cfg.validation_fraction);
}

SyntheticSpec parse_synth_spec(const json& j) {
    SyntheticSpec s;
    s.class_name = j.at("class_name").get<std::string>();
    s.id = j.value("id", s.class_name);
    s.length = j.at("length").get<int>();
    s.base_level = j.value("base_level", s.base_level);
    s.trend = j.value("trend", s.trend);
    if (j.contains("sinusoids"))
        for (const auto& c : j["sinusoids"])
            s.sinusoids.push_back({c.at(0).get<double>(), c.at(1).get<double>()});
    s.noise_std = j.value("noise_std", s.noise_std);
    s.rng_seed = j.value("rng_seed", s.rng_seed);
    return s;
}

double mean_of(const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x;
    return v.empty() ? 0.0 : s / static_cast<double>(v.size());
}

double std_of(const std::vector<double>& v, double mean) {
    if (v.size() < 2) return 0.0;
    double s = 0.0;
    for (double x : v) s += (x - mean) * (x - mean);
    return std::sqrt(s / static_cast<double>(v.size() - 1));
}

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.6f", v);
    return buf;
}

} // namespace

PipelineConfig load_pipeline_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config: " + path.string());
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::parse_error& e) {
        throw ConfigError("config parse error: " + std::string(e.what()));
    }

    PipelineConfig cfg;
    try {
        if (doc.contains("synthetic"))
            for (const auto& j : doc["synthetic"]) cfg.synthetic.push_back(parse_synth_spec(j));
        if (doc.contains("encoding")) parse_encoding(doc["encoding"], cfg.encoding);
        if (doc.contains("augment")) parse_augment(doc["augment"], cfg.augment);
        if (doc.contains("balance")) {
            const auto& j = doc["balance"];
            cfg.balance.target_per_class = j.value("target_per_class", cfg.balance.target_per_class);
            cfg.balance.rng_seed = j.value("rng_seed", cfg.balance.rng_seed);
        }
        cfg.balance.augment = cfg.augment;
        if (doc.contains("train")) parse_train(doc["train"], cfg.train);
        if (doc.contains("experiment")) {
            const auto& j = doc["experiment"];
            cfg.repetitions = j.value("repetitions", cfg.repetitions);
            cfg.master_seed = j.value("master_seed", cfg.master_seed);
            cfg.test_fraction = j.value("test_fraction", cfg.test_fraction);
            if (j.contains("rows")) {
                int next_id = 1;
                for (const auto& r : j["rows"]) {
                    ExperimentRowSpec row;
                    row.id = r.value("id", next_id);
                    row.window_length = r.value("window_length", cfg.encoding.window_length);
                    row.image_edge = r.value("image_edge", cfg.encoding.image_edge);
                    row.stencil_points = r.value("stencil_points", cfg.encoding.stencil_points);
                    row.ma = r.value("ma", false);
                    row.re = r.value("re", false);
                    next_id = row.id + 1;
                    cfg.rows.push_back(row);
                }
            }
        }
    } catch (const json::exception& e) {
        throw ConfigError("config field error: " + std::string(e.what()));
    }
    return cfg;
}

std::vector<TimeSeries> build_corpus(const PipelineConfig& config,
                                     std::uint64_t corpus_seed) {
    std::vector<SyntheticSpec> specs =
        config.synthetic.empty() ? default_corpus_specs(corpus_seed) : config.synthetic;
    std::vector<TimeSeries> out;
    for (std::size_t i = 0; i < specs.size(); ++i) {
        if (!config.synthetic.empty())
            specs[i].rng_seed = Rng::derive(corpus_seed, i);
        out.push_back(generate_synthetic(specs[i]));
    }
    return out;
}

LabeledImageSet encode_corpus(const std::vector<TimeSeries>& corpus,
                              const EncodingConfig& encoding, bool with_ma,
                              int ma_window) {
    LabeledImageSet out;
    for (const auto& series : corpus) {
        out.append(encode_to_set(series, encoding));
        if (with_ma) {
            TimeSeries smoothed = series;
            smoothed.samples = moving_average(series.samples, ma_window);
            const LineageOp op{"ma", 0, {static_cast<double>(ma_window)}};
            out.append(encode_to_set(smoothed, encoding, std::span(&op, 1),
                                     /*raw_offset=*/0, /*raw_span=*/ma_window));
        }
    }
    return out;
}

RunOutcome run_single(const PipelineConfig& config, const ExperimentRowSpec& row,
                      std::uint64_t rep_seed) {
    EncodingConfig encoding = config.encoding;
    encoding.window_length = row.window_length;
    encoding.image_edge = row.image_edge;
    encoding.stencil_points = row.stencil_points;
    encoding.validate();

    const auto corpus = build_corpus(config, Rng::derive(rep_seed, 10));
    for (const auto& s : corpus)
        if (s.samples.size() < static_cast<std::size_t>(row.window_length))
            throw DataError("series '" + s.id + "' shorter than window length " +
                            std::to_string(row.window_length));

    LabeledImageSet full = encode_corpus(corpus, encoding, row.ma, config.augment.ma_window);
    const auto classes = class_names(full);

    BalanceConfig bal = config.balance;
    bal.rng_seed = Rng::derive(rep_seed, 11);
    LabeledImageSet balanced = balance(full, bal);

    const auto split = split_dataset(balanced, config.test_fraction, Rng::derive(rep_seed, 12));
    if (split.train.size() == 0 || split.test.size() == 0)
        throw DataError("degenerate train/test split");

    TrainConfig train_cfg = config.train;
    train_cfg.rng_seed = Rng::derive(rep_seed, 13);
    train_cfg.loader_random_erase = row.re;
    train_cfg.loader_augment = config.augment;
    train_cfg.loader_augment.rng_seed = Rng::derive(rep_seed, 14);

    const auto spec = NetworkSpec::standard(row.image_edge, static_cast<int>(classes.size()));
    auto trained = train(spec, split.train, classes, train_cfg, &split.test);

    const auto pred = predict(trained.net, split.test);
    const auto truth = labels_to_indices(split.test, classes);
    const auto sc = scores(confusion(truth, pred, static_cast<int>(classes.size())));

    RunOutcome out;
    out.accuracy = sc.accuracy;
    out.macro_f1 = sc.macro_f1;
    out.history = std::move(trained.history);
    return out;
}

ExperimentRowResult run_experiment_row(const PipelineConfig& config,
                                       const ExperimentRowSpec& row) {
    ExperimentRowResult result;
    result.spec = row;
    const std::uint64_t row_seed =
        Rng::derive(config.master_seed, static_cast<std::uint64_t>(row.id));
    std::vector<double> accs, f1s;
    for (int rep = 0; rep < config.repetitions; ++rep) {
        auto outcome = run_single(config, row, Rng::derive(row_seed, rep));
        accs.push_back(outcome.accuracy);
        f1s.push_back(outcome.macro_f1);
        result.repetitions.push_back(std::move(outcome));
    }
    result.accuracy_mean = mean_of(accs);
    result.accuracy_std = std_of(accs, result.accuracy_mean);
    result.macro_f1_mean = mean_of(f1s);
    result.macro_f1_std = std_of(f1s, result.macro_f1_mean);
    return result;
}

std::vector<ExperimentRowResult> run_experiment(const PipelineConfig& config) {
    if (config.rows.empty()) throw ConfigError("experiment grid has no rows");
    std::vector<ExperimentRowResult> results;
    for (const auto& row : config.rows)
        results.push_back(run_experiment_row(config, row));
    return results;
}

void write_results_csv(const std::vector<ExperimentRowResult>& results,
                       const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw DataError("cannot write " + path.string());
    out << "experiment,window_length,data_augmentation,image_edge,"
           "accuracy_test,accuracy_std,f1_score,f1_std\n";
    for (const auto& r : results) {
        std::string aug;
        if (r.spec.ma) aug = "MA";
        if (r.spec.re) aug += aug.empty() ? "RE" : " RE";
        if (aug.empty()) aug = "-";
        out << r.spec.id << "," << r.spec.window_length << "," << aug << ","
            << r.spec.image_edge << "," << fmt(r.accuracy_mean) << ","
            << fmt(r.accuracy_std) << "," << fmt(r.macro_f1_mean) << ","
            << fmt(r.macro_f1_std) << "\n";
    }
}

void write_history_csv(const std::vector<EpochStats>& history,
                       const std::filesystem::path& path) {
    if (history.empty()) throw DataError("empty history");
    std::ofstream out(path);
    if (!out) throw DataError("cannot write " + path.string());
    out << "epoch,loss,train_accuracy,eval_accuracy\n";
    for (const auto& h : history) {
        out << h.epoch << "," << fmt(h.loss) << "," << fmt(h.train_accuracy) << ","
            << (h.has_eval ? fmt(h.eval_accuracy) : std::string()) << "\n";
    }
}

void write_prf_csv(const std::vector<EpochStats>& history,
                   const std::filesystem::path& path) {
    if (history.empty()) throw DataError("empty history");
    std::ofstream out(path);
    if (!out) throw DataError("cannot write " + path.string());
    out << "epoch,precision,recall,f1\n";
    for (const auto& h : history) {
        if (!h.has_eval) continue;
        out << h.epoch << "," << fmt(h.eval_macro_precision) << ","
            << fmt(h.eval_macro_recall) << "," << fmt(h.eval_macro_f1) << "\n";
    }
}

void write_combined_history_csv(const std::vector<EpochStats>& history,
                                const std::filesystem::path& path) {
    if (history.empty()) throw DataError("empty history");
    std::ofstream out(path);
    if (!out) throw DataError("cannot write " + path.string());
    out << "epoch,loss,train_accuracy,has_eval,eval_accuracy,precision,recall,f1\n";
    for (const auto& h : history) {
        out << h.epoch << "," << fmt(h.loss) << "," << fmt(h.train_accuracy) << ","
            << (h.has_eval ? 1 : 0) << "," << fmt(h.eval_accuracy) << ","
            << fmt(h.eval_macro_precision) << "," << fmt(h.eval_macro_recall) << ","
            << fmt(h.eval_macro_f1) << "\n";
    }
}

std::vector<EpochStats> load_combined_history_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open history: " + path.string());
    std::string line;
    if (!std::getline(in, line)) throw DataError("empty history file: " + path.string());
    std::vector<EpochStats> out;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        EpochStats h;
        int has_eval = 0;
        if (std::sscanf(line.c_str(), "%d,%lf,%lf,%d,%lf,%lf,%lf,%lf", &h.epoch,
                        &h.loss, &h.train_accuracy, &has_eval, &h.eval_accuracy,
                        &h.eval_macro_precision, &h.eval_macro_recall,
                        &h.eval_macro_f1) != 8)
            throw DataError("malformed history row: " + line);
        h.has_eval = has_eval != 0;
        out.push_back(h);
    }
    if (out.empty()) throw DataError("history file has no rows: " + path.string());
    return out;
}

void write_report_json(const Scores& sc, const ConfusionMatrix& cm,
                       const std::vector<std::string>& classes,
                       const std::filesystem::path& path) {
    json per_class = json::array();
    for (std::size_t c = 0; c < sc.per_class.size(); ++c) {
        per_class.push_back({{"class", c < classes.size() ? classes[c] : std::to_string(c)},
                             {"precision", sc.per_class[c].precision},
                             {"recall", sc.per_class[c].recall},
                             {"f1", sc.per_class[c].f1},
                             {"degenerate", sc.per_class[c].degenerate}});
    }
    const json report = {{"accuracy", sc.accuracy},
                         {"per_class", per_class},
                         {"macro_f1", sc.macro_f1},
                         {"confusion", cm.counts}};
    std::ofstream out(path);
    if (!out) throw DataError("cannot write " + path.string());
    out << report.dump(2) << "\n";
}

} // namespace ts2img
