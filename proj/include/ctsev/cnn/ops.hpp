#pragma once

#include <cstddef>
#include <vector>

#include "ctsev/cnn/tensor.hpp"

namespace ctsev::cnn {

// 3x3 convolution weights, kernel laid out (out, in, 3, 3).
struct ConvWeights {
    int out_channels = 0;
    int in_channels = 0;
    std::vector<float> kernel;
    std::vector<float> bias;

    void validate() const;
};

// 3x3, stride 1, zero "same" padding convolution evaluated as im2col + packed
// GEMM. Products are summed in float inside 256-deep slices of the reduction
// and the slices are accumulated in double, so each output is bitwise
// reproducible regardless of how work is split across threads.
class Conv2d {
public:
    explicit Conv2d(ConvWeights weights);

    int in_channels() const noexcept { return weights_.in_channels; }
    int out_channels() const noexcept { return weights_.out_channels; }
    const ConvWeights& weights() const noexcept { return weights_; }

    // Throws std::invalid_argument on a channel mismatch.
    Tensor3 forward(const Tensor3& input, std::size_t workers = 1) const;

private:
    ConvWeights weights_;
    std::vector<float> packed_;  // kernel rows regrouped into MR-wide panels
};

Tensor3 conv2d(const Tensor3& input, const ConvWeights& weights, std::size_t workers = 1);

Tensor3 relu(Tensor3 t);
void relu_inplace(Tensor3& t);

// 2x2 window, stride 2. Throws std::invalid_argument on odd height or width.
Tensor3 maxpool2d(const Tensor3& t);

// One value per channel: the mean over its plane.
std::vector<float> global_average_pool(const Tensor3& t);

}  // namespace ctsev::cnn
