#include "ts2img/checkpoint.hpp"

#include <cstdint>
#include <fstream>

#include <json.hpp>

#include "ts2img/errors.hpp"

namespace ts2img {

namespace {

constexpr char kMagic[8] = {'T', 'S', '2', 'I', 'M', 'G', 'N', 'N'};
constexpr std::uint32_t kVersion = 1;

const char* kind_name(LayerSpec::Kind k) {
    switch (k) {
    case LayerSpec::Kind::Conv: return "conv";
    case LayerSpec::Kind::Relu: return "relu";
    case LayerSpec::Kind::MaxPool: return "maxpool";
    case LayerSpec::Kind::Flatten: return "flatten";
    case LayerSpec::Kind::Dense: return "dense";
    default: return "softmax";
    }
}

LayerSpec::Kind kind_from_name(const std::string& s) {
    if (s == "conv") return LayerSpec::Kind::Conv;
    if (s == "relu") return LayerSpec::Kind::Relu;
    if (s == "maxpool") return LayerSpec::Kind::MaxPool;
    if (s == "flatten") return LayerSpec::Kind::Flatten;
    if (s == "dense") return LayerSpec::Kind::Dense;
    if (s == "softmax") return LayerSpec::Kind::Softmax;
    throw DataError("unknown layer kind in checkpoint: " + s);
}

} // namespace

void save_checkpoint(const Network& net, const std::vector<std::string>& classes,
                     const std::filesystem::path& path) {
    nlohmann::json layers = nlohmann::json::array();
    for (const auto& l : net.spec().layers) {
        nlohmann::json j = {{"kind", kind_name(l.kind)}};
        if (l.kind == LayerSpec::Kind::Conv) {
            j["out_channels"] = l.out_channels;
            j["kernel"] = l.kernel;
            j["stride"] = l.stride;
        } else if (l.kind == LayerSpec::Kind::MaxPool) {
            j["pool"] = l.pool;
        } else if (l.kind == LayerSpec::Kind::Dense) {
            j["out_features"] = l.out_features;
        }
        layers.push_back(j);
    }
    const nlohmann::json header = {{"input_edge", net.spec().input_edge},
                                   {"num_classes", net.spec().num_classes},
                                   {"classes", classes},
                                   {"layers", layers}};
    const std::string header_str = header.dump();

    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot write checkpoint: " + path.string());
    out.write(kMagic, sizeof(kMagic));
    const std::uint32_t version = kVersion;
    const std::uint32_t hlen = static_cast<std::uint32_t>(header_str.size());
    out.write(reinterpret_cast<const char*>(&version), sizeof(version));
    out.write(reinterpret_cast<const char*>(&hlen), sizeof(hlen));
    out.write(header_str.data(), hlen);
    for (double p : net.params()) {
        const float f = static_cast<float>(p);
        out.write(reinterpret_cast<const char*>(&f), sizeof(f));
    }
    if (!out) throw DataError("checkpoint write failed: " + path.string());
}

LoadedCheckpoint load_checkpoint(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open checkpoint: " + path.string());
    char magic[8];
    in.read(magic, sizeof(magic));
    if (!in || std::string(magic, 8) != std::string(kMagic, 8))
        throw DataError("not a model checkpoint: " + path.string());
    std::uint32_t version = 0, hlen = 0;
    in.read(reinterpret_cast<char*>(&version), sizeof(version));
    in.read(reinterpret_cast<char*>(&hlen), sizeof(hlen));
    if (!in || version != kVersion) throw DataError("unsupported checkpoint version");
    std::string header_str(hlen, '\0');
    in.read(header_str.data(), hlen);
    const nlohmann::json header = nlohmann::json::parse(header_str);

    NetworkSpec spec;
    spec.input_edge = header.at("input_edge").get<int>();
    spec.num_classes = header.at("num_classes").get<int>();
    for (const auto& j : header.at("layers")) {
        LayerSpec l;
        l.kind = kind_from_name(j.at("kind").get<std::string>());
        if (l.kind == LayerSpec::Kind::Conv) {
            l.out_channels = j.at("out_channels").get<int>();
            l.kernel = j.at("kernel").get<int>();
            l.stride = j.at("stride").get<int>();
        } else if (l.kind == LayerSpec::Kind::MaxPool) {
            l.pool = j.at("pool").get<int>();
        } else if (l.kind == LayerSpec::Kind::Dense) {
            l.out_features = j.at("out_features").get<int>();
        }
        spec.layers.push_back(l);
    }

    LoadedCheckpoint loaded{Network(spec), {}};
    if (header.contains("classes"))
        loaded.classes = header["classes"].get<std::vector<std::string>>();
    for (auto& p : loaded.net.params()) {
        float f = 0.0f;
        in.read(reinterpret_cast<char*>(&f), sizeof(f));
        p = static_cast<double>(f);
    }
    if (!in) throw DataError("truncated checkpoint: " + path.string());
    return loaded;
}

} // namespace ts2img
