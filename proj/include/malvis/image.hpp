#ifndef MALVIS_IMAGE_HPP
#define MALVIS_IMAGE_HPP

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "malvis/common.hpp"

namespace malvis {

inline constexpr int kDefaultImageWidth = 256;

// Row-major 8-bit grayscale raster. Byte value k maps directly to pixel
// value k; 0 renders white and 255 black under the usual viewing
// convention, but no remapping is ever applied to the data.
struct GrayImage {
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> pixels;  // width * height, row-major
    // Number of meaningful leading pixels. Pixels past payload_len are
    // zero padding from the encoder; a resized image has payload_len
    // equal to width * height and is no longer decodable.
    std::size_t payload_len = 0;

    std::size_t size() const { return pixels.size(); }
    std::uint8_t at(int row, int col) const {
        return pixels[static_cast<std::size_t>(row) * width + col];
    }
};

// Lays out bytes row-major at the given width. Height is
// ceil(len / width); the tail of the last row is zero padded.
GrayImage encode(std::span<const std::uint8_t> bytes,
                 int width = kDefaultImageWidth);

// Inverse of encode: returns the first payload_len pixels.
std::vector<std::uint8_t> decode(const GrayImage& image);

// Nearest-neighbor resampling. Integer-exact: every output pixel is a
// copy of some input pixel.
GrayImage resize(const GrayImage& image, int target_width,
                 int target_height);

// Binary PGM ("P5", maxval 255). The writer emits exactly
// "P5\n<w> <h>\n255\n" followed by the raw pixel rows.
void write_pgm(const GrayImage& image, const std::filesystem::path& path);
GrayImage read_pgm(const std::filesystem::path& path);

}  // namespace malvis

#endif  // MALVIS_IMAGE_HPP
