#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "ctsev/cnn/ops.hpp"
#include "ctsev/cnn/tensor.hpp"
#include "ctsev/cnn/weights.hpp"
#include "ctsev/imaging/gray_image.hpp"

namespace ctsev::cnn {

using FeatureVector = std::vector<float>;

inline constexpr int kInputSize = 224;
inline constexpr std::size_t kVggFeatureLength = 512 * 7 * 7;

enum class LayerKind { conv, relu, maxpool };
enum class Padding { same, valid };

struct LayerSpec {
    LayerKind kind;
    int kernel = 0;
    int stride = 0;
    Padding padding = Padding::valid;
    int out_channels = 0;  // conv only
    std::string name;
};

// The VGG-16 convolutional base: 13 conv+relu pairs in blocks of 2-2-3-3-3,
// each block closed by a 2x2/2 max pool.
std::vector<LayerSpec> vgg16_layers();

// Gray raster -> (3, 224, 224) float tensor: the channel replicated as R, G, B
// with the ImageNet channel means (123.68, 116.779, 103.939) subtracted.
Tensor3 to_input_tensor(const imaging::GrayImage& img);

// Called after each max pool with the block name and resulting shape.
using BlockObserver = std::function<void(const std::string& block, const Shape3& shape)>;

// A sequential conv/relu/maxpool stack. Built from any weight store whose
// tensors follow the blockB_convI_{w,b} naming; each block ends in a pool.
class ConvNet {
public:
    static ConvNet from_store(const WeightStore& store);

    const std::vector<LayerSpec>& layers() const noexcept { return specs_; }
    int input_channels() const;
    Shape3 output_shape(Shape3 input) const;

    Tensor3 forward(Tensor3 input, std::size_t workers = 1, const BlockObserver& observer = {}) const;

private:
    std::vector<LayerSpec> specs_;
    std::vector<std::optional<Conv2d>> convs_;  // parallel to specs_
};

enum class FeatureHead { flatten, global_average };

// Frozen VGG-16 base used as a feature extractor. Validates the store on
// construction and the shape after every block while running.
class Vgg16Extractor {
public:
    explicit Vgg16Extractor(const WeightStore& store, FeatureHead head = FeatureHead::flatten);

    std::size_t feature_length() const noexcept;
    FeatureVector extract(const Tensor3& input, std::size_t workers = 1) const;

private:
    ConvNet net_;
    FeatureHead head_;
};

// One-shot convenience over Vgg16Extractor with the flatten head: returns the
// 25088 (512x7x7, c-h-w order) activations for a (3,224,224) input.
FeatureVector extract_features(const WeightStore& weights, const Tensor3& input, std::size_t workers = 1);

}  // namespace ctsev::cnn
