#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <filesystem>

#include "ts2img/checkpoint.hpp"
#include "ts2img/network.hpp"
#include "ts2img/rng.hpp"
#include "ts2img/train.hpp"

using namespace ts2img;

namespace {

// small verification net: conv(2, 3x3) -> relu -> maxpool(2) -> flatten -> dense(3)
NetworkSpec tiny_spec(int edge = 8) {
    NetworkSpec s;
    s.input_edge = edge;
    s.num_classes = 3;
    s.layers = {LayerSpec::conv(2, 3), LayerSpec::relu(), LayerSpec::maxpool(2),
                LayerSpec::flatten(), LayerSpec::dense(3), LayerSpec::softmax()};
    return s;
}

Tensor random_batch(int n, int edge, std::uint64_t seed) {
    Rng rng(seed);
    Tensor t({n, 1, edge, edge});
    for (auto& v : t.data) v = rng.uniform();
    return t;
}

LabeledImageSet toy_image_set(int n_per_class, int edge, std::uint64_t seed) {
    // two classes with obviously different spatial patterns
    Rng rng(seed);
    LabeledImageSet set;
    for (int c = 0; c < 2; ++c) {
        for (int i = 0; i < n_per_class; ++i) {
            GrayImage img(edge, c == 0 ? "left" : "right");
            for (int r = 0; r < edge; ++r)
                for (int col = 0; col < edge; ++col) {
                    const bool lit = c == 0 ? col < edge / 2 : col >= edge / 2;
                    img.at(r, col) =
                        lit ? static_cast<std::uint8_t>(150 + rng.below(100)) : 0;
                }
            ManifestEntry e;
            e.label = img.label;
            e.source_id = "toy" + std::to_string(c);
            e.window_start = i;
            set.push(std::move(img), std::move(e));
        }
    }
    return set;
}

} // namespace

TEST_CASE("zero-weight network outputs uniform probabilities") {
    Network net(tiny_spec());
    const auto probs = net.forward(random_batch(4, 8, 1));
    for (int i = 0; i < 4; ++i)
        for (int c = 0; c < 3; ++c)
            CHECK(probs.data[i * 3 + c] == doctest::Approx(1.0 / 3.0).epsilon(1e-9));
}

TEST_CASE("softmax rows are valid distributions") {
    Network net(tiny_spec());
    net.init_weights(3);
    const auto probs = net.forward(random_batch(16, 8, 2));
    for (int i = 0; i < 16; ++i) {
        double sum = 0.0;
        for (int c = 0; c < 3; ++c) {
            CHECK(probs.data[i * 3 + c] >= 0.0);
            sum += probs.data[i * 3 + c];
        }
        CHECK(std::fabs(sum - 1.0) <= 1e-6);
    }
}

TEST_CASE("duplicated input rows give duplicated output rows") {
    Network net(tiny_spec());
    net.init_weights(5);
    Tensor batch({2, 1, 8, 8});
    const auto one = random_batch(1, 8, 7);
    std::copy(one.data.begin(), one.data.end(), batch.data.begin());
    std::copy(one.data.begin(), one.data.end(), batch.data.begin() + 64);
    const auto probs = net.forward(batch);
    for (int c = 0; c < 3; ++c) CHECK(probs.data[c] == probs.data[3 + c]);
}

TEST_CASE("cross-entropy endpoints") {
    Network net(tiny_spec());
    std::vector<double> grad;

    // zero weights -> uniform prediction -> loss = ln 3
    const double loss = net.loss_and_grad(random_batch(6, 8, 9), {0, 1, 2, 0, 1, 2}, grad);
    CHECK(loss == doctest::Approx(std::log(3.0)).epsilon(1e-9));
}

TEST_CASE("initial loss on balanced data sits near ln 3") {
    Network net(NetworkSpec::standard(16, 3));
    net.init_weights(17);
    std::vector<int> labels;
    for (int i = 0; i < 12; ++i) labels.push_back(i % 3);
    std::vector<double> grad;
    const double loss = net.loss_and_grad(random_batch(12, 16, 18), labels, grad);
    CHECK(loss >= 0.9);
    CHECK(loss <= 1.3);
}

TEST_CASE("analytic gradients match central finite differences") {
    Network net(tiny_spec());
    net.init_weights(23);
    const auto batch = random_batch(3, 8, 24);
    const std::vector<int> labels{0, 2, 1};

    std::vector<double> grad;
    net.loss_and_grad(batch, labels, grad);

    const double eps = 1e-4;
    auto& params = net.params();
    std::vector<double> dummy;
    for (std::size_t k = 0; k < params.size(); ++k) {
        const double keep = params[k];
        params[k] = keep + eps;
        const double up = net.loss_and_grad_serial(batch, labels, dummy);
        params[k] = keep - eps;
        const double down = net.loss_and_grad_serial(batch, labels, dummy);
        params[k] = keep;
        const double fd = (up - down) / (2.0 * eps);
        const double denom = std::max({std::fabs(fd), std::fabs(grad[k]), 1e-8});
        CHECK(std::fabs(fd - grad[k]) / denom <= 1e-4);
    }
}

TEST_CASE("predict breaks ties toward the lowest class index") {
    Network net(tiny_spec()); // zero weights: exact three-way tie
    const auto pred = net.predict(random_batch(5, 8, 31));
    for (int p : pred) CHECK(p == 0);
}

TEST_CASE("learning rate zero leaves weights untouched") {
    const auto set = toy_image_set(6, 8, 41);
    TrainConfig cfg;
    cfg.epochs = 3;
    cfg.batch_size = 4;
    cfg.learning_rate = 0.0;
    cfg.rng_seed = 42;
    NetworkSpec spec = tiny_spec();
    spec.num_classes = 2;
    spec.layers[4] = LayerSpec::dense(2);

    Network reference(spec);
    reference.init_weights(Rng::derive(cfg.rng_seed, 1)); // same stream train() uses
    const auto result = train(spec, set, {"left", "right"}, cfg);
    CHECK(result.net.params() == reference.params());
}

TEST_CASE("training overfits a trivially separable set") {
    const auto set = toy_image_set(4, 8, 51);
    TrainConfig cfg;
    cfg.epochs = 50;
    cfg.batch_size = 8;
    cfg.learning_rate = 5e-3;
    cfg.rng_seed = 52;
    NetworkSpec spec = tiny_spec();
    spec.num_classes = 2;
    spec.layers[4] = LayerSpec::dense(2);

    const auto result = train(spec, set, {"left", "right"}, cfg);
    bool reached = false;
    for (const auto& h : result.history) reached |= h.train_accuracy == 1.0;
    CHECK(reached);

    // loss drops over the first epochs
    CHECK(result.history[4].loss < result.history[0].loss + 1e-6);
}

TEST_CASE("training is bit-deterministic under a fixed seed") {
    const auto set = toy_image_set(5, 8, 61);
    TrainConfig cfg;
    cfg.epochs = 4;
    cfg.batch_size = 4;
    cfg.rng_seed = 62;
    NetworkSpec spec = tiny_spec();
    spec.num_classes = 2;
    spec.layers[4] = LayerSpec::dense(2);

    const auto a = train(spec, set, {"left", "right"}, cfg);
    const auto b = train(spec, set, {"left", "right"}, cfg);
    REQUIRE(a.history.size() == b.history.size());
    for (std::size_t i = 0; i < a.history.size(); ++i) {
        CHECK(a.history[i].loss == b.history[i].loss);
        CHECK(a.history[i].train_accuracy == b.history[i].train_accuracy);
    }
    CHECK(a.net.params() == b.net.params());
}

TEST_CASE("shape mismatches are rejected") {
    Network net(tiny_spec());
    std::vector<double> grad;
    CHECK_THROWS_AS(net.forward(random_batch(2, 9, 71)), DataError);
    CHECK_THROWS_AS(net.loss_and_grad(random_batch(2, 8, 72), {0}, grad), DataError);
    CHECK_THROWS_AS(net.loss_and_grad(random_batch(2, 8, 73), {0, 9}, grad), DataError);
}

TEST_CASE("checkpoint round trip preserves behavior") {
    Network net(tiny_spec());
    net.init_weights(81);
    const auto path = std::filesystem::temp_directory_path() / "ts2img_ckpt_test.bin";
    save_checkpoint(net, {"a", "b", "c"}, path);
    const auto loaded = load_checkpoint(path);
    CHECK(loaded.classes == std::vector<std::string>{"a", "b", "c"});
    CHECK(loaded.net.param_count() == net.param_count());

    const auto batch = random_batch(4, 8, 82);
    CHECK(loaded.net.predict(batch) == net.predict(batch));
    std::filesystem::remove(path);
}
