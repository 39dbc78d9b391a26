#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "ts2img/network.hpp"

namespace ts2img {

// Versioned binary model file: magic bytes, a JSON header describing the
// layer stack and the class-name order used at training time, then the
// parameters as little-endian float32.
void save_checkpoint(const Network& net, const std::vector<std::string>& classes,
                     const std::filesystem::path& path);

struct LoadedCheckpoint {
    Network net;
    std::vector<std::string> classes;
};
LoadedCheckpoint load_checkpoint(const std::filesystem::path& path);

} // namespace ts2img
