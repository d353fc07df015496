#include "malvis/image.hpp"

#include <cctype>
#include <cstring>
#include <fstream>
#include <string>

namespace malvis {

GrayImage encode(std::span<const std::uint8_t> bytes, int width) {
    if (bytes.empty()) throw ConfigError("encode: input binary is empty");
    if (width < 1) throw ConfigError("encode: width must be >= 1");

    GrayImage image;
    image.width = width;
    image.height = static_cast<int>((bytes.size() + width - 1) / width);
    image.payload_len = bytes.size();
    image.pixels.assign(static_cast<std::size_t>(image.width) * image.height,
                        0);
    std::memcpy(image.pixels.data(), bytes.data(), bytes.size());
    return image;
}

std::vector<std::uint8_t> decode(const GrayImage& image) {
    const std::size_t area =
        static_cast<std::size_t>(image.width) * image.height;
    if (image.pixels.size() != area)
        throw StageError("decode: pixel buffer does not match dimensions");
    if (image.payload_len > area)
        throw StageError("decode: payload_len " +
                         std::to_string(image.payload_len) +
                         " exceeds image area " + std::to_string(area));
    return {image.pixels.begin(),
            image.pixels.begin() + static_cast<std::ptrdiff_t>(image.payload_len)};
}

GrayImage resize(const GrayImage& image, int target_width,
                 int target_height) {
    if (target_width < 1 || target_height < 1)
        throw ConfigError("resize: target dimensions must be >= 1");
    if (image.width < 1 || image.height < 1)
        throw StageError("resize: source image is empty");

    GrayImage out;
    out.width = target_width;
    out.height = target_height;
    out.payload_len =
        static_cast<std::size_t>(target_width) * target_height;
    out.pixels.resize(out.payload_len);
    for (int r = 0; r < target_height; ++r) {
        const int src_r = static_cast<int>(
            static_cast<std::int64_t>(r) * image.height / target_height);
        for (int c = 0; c < target_width; ++c) {
            const int src_c = static_cast<int>(
                static_cast<std::int64_t>(c) * image.width / target_width);
            out.pixels[static_cast<std::size_t>(r) * target_width + c] =
                image.at(src_r, src_c);
        }
    }
    return out;
}

void write_pgm(const GrayImage& image, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw StageError("cannot open for writing: " + path.string());
    out << "P5\n" << image.width << " " << image.height << "\n255\n";
    out.write(reinterpret_cast<const char*>(image.pixels.data()),
              static_cast<std::streamsize>(image.pixels.size()));
    if (!out) throw StageError("failed writing PGM: " + path.string());
}

namespace {

// Reads one whitespace-delimited PNM header token, skipping '#' comments.
int read_header_value(std::istream& in, const std::filesystem::path& path) {
    int c = in.get();
    while (c != EOF) {
        if (c == '#') {
            while (c != EOF && c != '\n') c = in.get();
        } else if (std::isspace(c)) {
            c = in.get();
        } else {
            break;
        }
    }
    if (c == EOF || !std::isdigit(c))
        throw StageError("malformed PGM header: " + path.string());
    int value = 0;
    while (c != EOF && std::isdigit(c)) {
        value = value * 10 + (c - '0');
        c = in.get();
    }
    return value;
}

}  // namespace

GrayImage read_pgm(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw StageError("cannot open for reading: " + path.string());

    char magic[2] = {0, 0};
    in.read(magic, 2);
    if (magic[0] != 'P' || magic[1] != '5')
        throw StageError("not a binary PGM (P5): " + path.string());

    GrayImage image;
    image.width = read_header_value(in, path);
    image.height = read_header_value(in, path);
    const int maxval = read_header_value(in, path);
    if (image.width < 1 || image.height < 1)
        throw StageError("bad PGM dimensions: " + path.string());
    if (maxval != 255)
        throw StageError("unsupported PGM maxval (expected 255): " +
                         path.string());

    // Exactly one whitespace byte separates the header from the raster;
    // read_header_value already consumed it.
    image.payload_len =
        static_cast<std::size_t>(image.width) * image.height;
    image.pixels.resize(image.payload_len);
    in.read(reinterpret_cast<char*>(image.pixels.data()),
            static_cast<std::streamsize>(image.pixels.size()));
    if (in.gcount() != static_cast<std::streamsize>(image.pixels.size()))
        throw StageError("truncated PGM raster: " + path.string());
    return image;
}

}  // namespace malvis
