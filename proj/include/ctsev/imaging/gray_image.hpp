#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace ctsev::imaging {

// Row-major 8-bit grayscale raster. Always at least 1x1.
class GrayImage {
public:
    GrayImage(int height, int width, std::uint8_t fill = 0);
    GrayImage(int height, int width, std::vector<std::uint8_t> data);

    int height() const noexcept { return height_; }
    int width() const noexcept { return width_; }
    std::size_t size() const noexcept { return data_.size(); }

    std::uint8_t at(int y, int x) const { return data_[index(y, x)]; }
    std::uint8_t& at(int y, int x) { return data_[index(y, x)]; }

    std::span<const std::uint8_t> row(int y) const {
        return {data_.data() + static_cast<std::size_t>(y) * width_, static_cast<std::size_t>(width_)};
    }
    std::span<std::uint8_t> row(int y) {
        return {data_.data() + static_cast<std::size_t>(y) * width_, static_cast<std::size_t>(width_)};
    }

    std::span<const std::uint8_t> pixels() const noexcept { return data_; }
    std::span<std::uint8_t> pixels() noexcept { return data_; }

    friend bool operator==(const GrayImage&, const GrayImage&) = default;

private:
    std::size_t index(int y, int x) const noexcept {
        return static_cast<std::size_t>(y) * static_cast<std::size_t>(width_) + static_cast<std::size_t>(x);
    }

    int height_;
    int width_;
    std::vector<std::uint8_t> data_;
};

// Round-half-up conversion of a non-negative blend result to a byte, clamped
// to [0, 255]. Shared by every stage that turns a real value into a pixel.
inline std::uint8_t round_to_u8(double v) {
    const double r = v + 0.5;
    if (!(r >= 1.0)) return 0;  // also catches NaN
    if (r >= 255.0) return 255;
    return static_cast<std::uint8_t>(static_cast<int>(r));
}

// Round-half-up of the exact non-negative ratio num / den, clamped to 255.
inline std::uint8_t round_ratio_u8(std::int64_t num, std::int64_t den) {
    const std::int64_t r = (2 * num + den) / (2 * den);
    return static_cast<std::uint8_t>(r > 255 ? 255 : r);
}

}  // namespace ctsev::imaging
