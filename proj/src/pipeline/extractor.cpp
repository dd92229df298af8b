#include "ctsev/pipeline/extractor.hpp"

#include <cstdio>
#include <stdexcept>

#include "ctsev/error.hpp"

namespace ctsev::pipeline {
namespace {

std::string hex32(std::uint32_t v) {
    char buf[16];
    std::snprintf(buf, sizeof buf, "%08x", v);
    return buf;
}

class VggExtractor final : public FeatureExtractor {
public:
    VggExtractor(const cnn::WeightStore& store, cnn::FeatureHead head)
        : net_(store, head), head_(head), checksum_(store.checksum()) {}

    std::size_t feature_length() const override { return net_.feature_length(); }

    cnn::FeatureVector extract(const imaging::GrayImage& img, std::size_t workers) const override {
        if (img.height() != cnn::kInputSize || img.width() != cnn::kInputSize) {
            throw DataError("vgg16 extractor needs a 224x224 image, got " + std::to_string(img.height()) + "x" +
                            std::to_string(img.width()));
        }
        return net_.extract(cnn::to_input_tensor(img), workers);
    }

    std::string describe() const override {
        return std::string("vgg16 head=") + (head_ == cnn::FeatureHead::flatten ? "flatten" : "gap") +
               " weights=" + hex32(checksum_);
    }

private:
    cnn::Vgg16Extractor net_;
    cnn::FeatureHead head_;
    std::uint32_t checksum_;
};

class ConvNetExtractor final : public FeatureExtractor {
public:
    ConvNetExtractor(const cnn::WeightStore& store, int height, int width)
        : net_(cnn::ConvNet::from_store(store)), checksum_(store.checksum()), height_(height), width_(width) {
        const int c = net_.input_channels();
        if (c != 1 && c != 3) throw FormatError("convnet extractor: input channels must be 1 or 3");
        out_ = net_.output_shape({c, height, width});
    }

    std::size_t feature_length() const override { return out_.count(); }

    cnn::FeatureVector extract(const imaging::GrayImage& img, std::size_t workers) const override {
        if (img.height() != height_ || img.width() != width_) throw DataError("convnet extractor: unexpected image size");
        cnn::Tensor3 x = net_.input_channels() == 1 ? to_single_channel_tensor(img) : cnn::to_input_tensor(img);
        return net_.forward(std::move(x), workers).release();
    }

    std::string describe() const override {
        return "convnet " + out_.str() + " weights=" + hex32(checksum_);
    }

private:
    cnn::ConvNet net_;
    std::uint32_t checksum_;
    int height_;
    int width_;
    cnn::Shape3 out_{};
};

class DownsampleExtractor final : public FeatureExtractor {
public:
    DownsampleExtractor(int grid, int height, int width) : grid_(grid), height_(height), width_(width) {
        if (grid < 1 || grid > height || grid > width) throw std::invalid_argument("downsample grid out of range");
    }

    std::size_t feature_length() const override { return static_cast<std::size_t>(grid_) * grid_; }

    cnn::FeatureVector extract(const imaging::GrayImage& img, std::size_t) const override {
        if (img.height() != height_ || img.width() != width_) throw DataError("downsample extractor: unexpected image size");
        cnn::FeatureVector out(feature_length());
        for (int gy = 0; gy < grid_; ++gy) {
            const int y0 = gy * height_ / grid_, y1 = (gy + 1) * height_ / grid_;
            for (int gx = 0; gx < grid_; ++gx) {
                const int x0 = gx * width_ / grid_, x1 = (gx + 1) * width_ / grid_;
                std::uint64_t sum = 0;
                for (int y = y0; y < y1; ++y) {
                    for (int x = x0; x < x1; ++x) sum += img.at(y, x);
                }
                const double n = static_cast<double>(y1 - y0) * (x1 - x0);
                out[static_cast<std::size_t>(gy * grid_ + gx)] = static_cast<float>(static_cast<double>(sum) / (n * 255.0));
            }
        }
        return out;
    }

    std::string describe() const override { return "downsample grid=" + std::to_string(grid_); }

private:
    int grid_;
    int height_;
    int width_;
};

}  // namespace

ExtractorKind parse_extractor_kind(const std::string& name) {
    if (name == "vgg16") return ExtractorKind::vgg16;
    if (name == "convnet") return ExtractorKind::convnet;
    if (name == "downsample") return ExtractorKind::downsample;
    throw std::invalid_argument("unknown extractor '" + name + "'");
}

std::string to_string(ExtractorKind kind) {
    switch (kind) {
        case ExtractorKind::vgg16: return "vgg16";
        case ExtractorKind::convnet: return "convnet";
        case ExtractorKind::downsample: return "downsample";
    }
    return "?";
}

cnn::Tensor3 to_single_channel_tensor(const imaging::GrayImage& img) {
    cnn::Tensor3 t(1, img.height(), img.width());
    auto v = t.values();
    const auto px = img.pixels();
    for (std::size_t i = 0; i < px.size(); ++i) v[i] = static_cast<float>(px[i]) - 128.0f;
    return t;
}

std::unique_ptr<FeatureExtractor> make_vgg16_extractor(const cnn::WeightStore& store, cnn::FeatureHead head) {
    return std::make_unique<VggExtractor>(store, head);
}

std::unique_ptr<FeatureExtractor> make_convnet_extractor(const cnn::WeightStore& store, int height, int width) {
    return std::make_unique<ConvNetExtractor>(store, height, width);
}

std::unique_ptr<FeatureExtractor> make_downsample_extractor(int grid, int height, int width) {
    return std::make_unique<DownsampleExtractor>(grid, height, width);
}

std::unique_ptr<FeatureExtractor> make_extractor(const ExtractorSpec& spec, int height, int width) {
    switch (spec.kind) {
        case ExtractorKind::vgg16:
            return make_vgg16_extractor(cnn::load_weights(spec.weights), spec.head);
        case ExtractorKind::convnet:
            return make_convnet_extractor(cnn::read_weight_file(spec.weights), height, width);
        case ExtractorKind::downsample:
            return make_downsample_extractor(spec.grid, height, width);
    }
    throw std::invalid_argument("make_extractor: bad kind");
}

}  // namespace ctsev::pipeline
