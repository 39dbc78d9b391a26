#include "ts2img/pgm.hpp"

#include <fstream>

#include "ts2img/errors.hpp"

namespace ts2img {

void write_pgm(const GrayImage& image, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot open for writing: " + path.string());
    out << "P5\n" << image.edge << " " << image.edge << "\n255\n";
    out.write(reinterpret_cast<const char*>(image.pixels.data()),
              static_cast<std::streamsize>(image.pixels.size()));
    if (!out) throw DataError("write failed: " + path.string());
}

GrayImage read_pgm(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open: " + path.string());
    std::string magic;
    int width = 0, height = 0, maxval = 0;
    in >> magic >> width >> height >> maxval;
    if (magic != "P5" || maxval != 255)
        throw DataError("not a maxval-255 P5 PGM: " + path.string());
    if (width != height || width <= 0)
        throw DataError("non-square PGM: " + path.string());
    in.get(); // single whitespace byte after the header
    GrayImage img(width, "");
    in.read(reinterpret_cast<char*>(img.pixels.data()),
            static_cast<std::streamsize>(img.pixels.size()));
    if (in.gcount() != static_cast<std::streamsize>(img.pixels.size()))
        throw DataError("truncated PGM: " + path.string());
    return img;
}

} // namespace ts2img
