#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace ctsev::cnn {

struct Shape3 {
    int channels = 0;
    int height = 0;
    int width = 0;

    std::size_t count() const noexcept {
        return static_cast<std::size_t>(channels) * static_cast<std::size_t>(height) *
               static_cast<std::size_t>(width);
    }
    std::string str() const;
    friend bool operator==(const Shape3&, const Shape3&) = default;
};

// Dense (c, h, w) float tensor.
class Tensor3 {
public:
    Tensor3() = default;
    explicit Tensor3(Shape3 shape, float fill = 0.0f);
    Tensor3(Shape3 shape, std::vector<float> data);
    Tensor3(int c, int h, int w, float fill = 0.0f) : Tensor3(Shape3{c, h, w}, fill) {}

    const Shape3& shape() const noexcept { return shape_; }
    int channels() const noexcept { return shape_.channels; }
    int height() const noexcept { return shape_.height; }
    int width() const noexcept { return shape_.width; }
    std::size_t size() const noexcept { return data_.size(); }

    float& at(int c, int y, int x) { return data_[index(c, y, x)]; }
    float at(int c, int y, int x) const { return data_[index(c, y, x)]; }

    std::span<float> plane(int c) {
        return {data_.data() + static_cast<std::size_t>(c) * plane_size(), plane_size()};
    }
    std::span<const float> plane(int c) const {
        return {data_.data() + static_cast<std::size_t>(c) * plane_size(), plane_size()};
    }

    std::span<float> values() noexcept { return data_; }
    std::span<const float> values() const noexcept { return data_; }
    std::vector<float> release() && { return std::move(data_); }

    friend bool operator==(const Tensor3&, const Tensor3&) = default;

private:
    std::size_t plane_size() const noexcept {
        return static_cast<std::size_t>(shape_.height) * static_cast<std::size_t>(shape_.width);
    }
    std::size_t index(int c, int y, int x) const noexcept {
        return (static_cast<std::size_t>(c) * static_cast<std::size_t>(shape_.height) + static_cast<std::size_t>(y)) *
                   static_cast<std::size_t>(shape_.width) +
               static_cast<std::size_t>(x);
    }

    Shape3 shape_;
    std::vector<float> data_;
};

}  // namespace ctsev::cnn
