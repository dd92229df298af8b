#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>

#include "ctsev/imaging/gray_image.hpp"

namespace ctsev::imaging {

enum class ImageFormat { unknown, pgm, png, jpeg };

// Identifies a container from its leading bytes.
ImageFormat sniff_format(std::span<const std::uint8_t> head);

// Decodes binary PGM (P5), PNG or JPEG into grayscale. Color sources are
// reduced with round(0.299 R + 0.587 G + 0.114 B). Throws DataError when the
// bytes are not a supported image.
GrayImage decode_image(std::span<const std::uint8_t> bytes);
GrayImage read_image(const std::filesystem::path& path);

// Writes 8-bit binary PGM (P5, maxval 255). Each line of `comment` becomes a
// "# " header line.
void write_pgm(const std::filesystem::path& path, const GrayImage& img, const std::string& comment = {});

inline std::uint8_t luminance(std::uint8_t r, std::uint8_t g, std::uint8_t b) {
    return static_cast<std::uint8_t>((299u * r + 587u * g + 114u * b + 500u) / 1000u);
}

}  // namespace ctsev::imaging
