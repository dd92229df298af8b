#include "ctsev/cnn/tensor.hpp"

#include <stdexcept>

namespace ctsev::cnn {

std::string Shape3::str() const {
    return "(" + std::to_string(channels) + "," + std::to_string(height) + "," + std::to_string(width) + ")";
}

Tensor3::Tensor3(Shape3 shape, float fill) : shape_(shape) {
    if (shape.channels < 1 || shape.height < 1 || shape.width < 1) {
        throw std::invalid_argument("Tensor3: dimensions must be positive, got " + shape.str());
    }
    data_.assign(shape.count(), fill);
}

Tensor3::Tensor3(Shape3 shape, std::vector<float> data) : shape_(shape), data_(std::move(data)) {
    if (shape.channels < 1 || shape.height < 1 || shape.width < 1) {
        throw std::invalid_argument("Tensor3: dimensions must be positive, got " + shape.str());
    }
    if (data_.size() != shape.count()) {
        throw std::invalid_argument("Tensor3: data length does not match shape " + shape.str());
    }
}

}  // namespace ctsev::cnn
