#include "ctsev/imaging/gray_image.hpp"

#include <stdexcept>
#include <string>

namespace ctsev::imaging {
namespace {

void check_dims(int height, int width) {
    if (height < 1 || width < 1) {
        throw std::invalid_argument("GrayImage: dimensions must be positive, got " +
                                    std::to_string(height) + "x" + std::to_string(width));
    }
}

}  // namespace

GrayImage::GrayImage(int height, int width, std::uint8_t fill)
    : height_(height), width_(width) {
    check_dims(height, width);
    data_.assign(static_cast<std::size_t>(height) * static_cast<std::size_t>(width), fill);
}

GrayImage::GrayImage(int height, int width, std::vector<std::uint8_t> data)
    : height_(height), width_(width), data_(std::move(data)) {
    check_dims(height, width);
    if (data_.size() != static_cast<std::size_t>(height) * static_cast<std::size_t>(width)) {
        throw std::invalid_argument("GrayImage: data length " + std::to_string(data_.size()) +
                                    " does not match " + std::to_string(height) + "x" +
                                    std::to_string(width));
    }
}

}  // namespace ctsev::imaging
