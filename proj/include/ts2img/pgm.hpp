#pragma once

#include <filesystem>

#include "ts2img/image.hpp"

namespace ts2img {

// Binary PGM (P5, maxval 255, row-major).
void write_pgm(const GrayImage& image, const std::filesystem::path& path);
GrayImage read_pgm(const std::filesystem::path& path);

} // namespace ts2img
