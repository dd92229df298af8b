#pragma once

#include <cstddef>
#include <filesystem>
#include <memory>
#include <string>

#include "ctsev/cnn/network.hpp"
#include "ctsev/imaging/gray_image.hpp"

namespace ctsev::pipeline {

// Maps a preprocessed image to a fixed-length feature vector.
class FeatureExtractor {
public:
    virtual ~FeatureExtractor() = default;

    virtual std::size_t feature_length() const = 0;
    virtual cnn::FeatureVector extract(const imaging::GrayImage& img, std::size_t workers = 1) const = 0;
    // Stable text identifying the extractor and its weights; part of the cache fingerprint.
    virtual std::string describe() const = 0;
};

enum class ExtractorKind { vgg16, convnet, downsample };

struct ExtractorSpec {
    ExtractorKind kind = ExtractorKind::vgg16;
    std::filesystem::path weights;                   // vgg16, convnet
    cnn::FeatureHead head = cnn::FeatureHead::flatten;  // vgg16
    int grid = 16;                                   // downsample: grid x grid cells
};

// Parses "vgg16", "convnet" or "downsample"; throws std::invalid_argument.
ExtractorKind parse_extractor_kind(const std::string& name);
std::string to_string(ExtractorKind kind);

// VGG-16 base on a 224x224 image.
std::unique_ptr<FeatureExtractor> make_vgg16_extractor(const cnn::WeightStore& store, cnn::FeatureHead head);

// Any blockB_convI stack; flattened output. Three-channel nets take the
// ImageNet-style input tensor, single-channel nets take pixel - 128.
std::unique_ptr<FeatureExtractor> make_convnet_extractor(const cnn::WeightStore& store, int height, int width);

// Area average over a grid x grid partition, scaled to [0, 1].
std::unique_ptr<FeatureExtractor> make_downsample_extractor(int grid, int height, int width);

// Loads weights as needed. Image size is the preprocessed size.
std::unique_ptr<FeatureExtractor> make_extractor(const ExtractorSpec& spec, int height, int width);

cnn::Tensor3 to_single_channel_tensor(const imaging::GrayImage& img);

}  // namespace ctsev::pipeline
