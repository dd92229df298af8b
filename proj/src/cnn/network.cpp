#include "ctsev/cnn/network.hpp"

#include <array>
#include <map>
#include <regex>
#include <stdexcept>

#include "ctsev/error.hpp"

namespace ctsev::cnn {
namespace {

constexpr std::array<float, 3> kChannelMeans = {123.68f, 116.779f, 103.939f};

ConvWeights conv_from(const NamedTensor& w, const NamedTensor& b) {
    if (w.dims.size() != 4 || w.dims[2] != 3 || w.dims[3] != 3) {
        throw ShapeError(w.name + ": expected a (out, in, 3, 3) kernel");
    }
    if (b.dims.size() != 1 || b.dims[0] != w.dims[0]) {
        throw ShapeError(b.name + ": bias length does not match " + w.name);
    }
    return ConvWeights{static_cast<int>(w.dims[0]), static_cast<int>(w.dims[1]), w.data, b.data};
}

}  // namespace

std::vector<LayerSpec> vgg16_layers() {
    constexpr std::array<std::array<int, 2>, 5> blocks = {{{2, 64}, {2, 128}, {3, 256}, {3, 512}, {3, 512}}};
    std::vector<LayerSpec> layers;
    for (std::size_t b = 0; b < blocks.size(); ++b) {
        const std::string block = "block" + std::to_string(b + 1);
        for (int c = 1; c <= blocks[b][0]; ++c) {
            const std::string name = block + "_conv" + std::to_string(c);
            layers.push_back({LayerKind::conv, 3, 1, Padding::same, blocks[b][1], name});
            layers.push_back({LayerKind::relu, 0, 0, Padding::valid, 0, name + "_relu"});
        }
        layers.push_back({LayerKind::maxpool, 2, 2, Padding::valid, 0, block + "_pool"});
    }
    return layers;
}

Tensor3 to_input_tensor(const imaging::GrayImage& img) {
    if (img.height() != kInputSize || img.width() != kInputSize) {
        throw std::invalid_argument("to_input_tensor: expected a 224x224 image, got " + std::to_string(img.height()) +
                                    "x" + std::to_string(img.width()));
    }
    Tensor3 t(Shape3{3, kInputSize, kInputSize});
    for (int c = 0; c < 3; ++c) {
        auto plane = t.plane(c);
        const auto pixels = img.pixels();
        for (std::size_t i = 0; i < plane.size(); ++i) plane[i] = static_cast<float>(pixels[i]) - kChannelMeans[static_cast<std::size_t>(c)];
    }
    return t;
}

ConvNet ConvNet::from_store(const WeightStore& store) {
    static const std::regex pattern(R"(block(\d+)_conv(\d+)_w)");
    if (store.size() == 0 || store.size() % 2 != 0) {
        throw ShapeError("conv net: expected weight/bias pairs, found " + std::to_string(store.size()) + " tensors");
    }
    ConvNet net;
    int prev_block = -1;
    int prev_out = -1;
    for (std::size_t i = 0; i < store.size(); i += 2) {
        const NamedTensor& w = store[i];
        const NamedTensor& b = store[i + 1];
        std::smatch m;
        if (!std::regex_match(w.name, m, pattern)) throw FormatError("conv net: unexpected tensor name " + w.name);
        const std::string stem = w.name.substr(0, w.name.size() - 2);
        if (b.name != stem + "_b") throw FormatError("conv net: expected " + stem + "_b after " + w.name);
        const int block = std::stoi(m[1]);
        if (prev_block != -1 && block != prev_block) {
            if (block < prev_block) throw FormatError("conv net: blocks out of order at " + w.name);
            net.specs_.push_back({LayerKind::maxpool, 2, 2, Padding::valid, 0, "block" + std::to_string(prev_block) + "_pool"});
            net.convs_.emplace_back();
        }
        ConvWeights cw = conv_from(w, b);
        if (prev_out != -1 && cw.in_channels != prev_out) {
            throw ShapeError("shape chain broken at " + w.name + ": expects " + std::to_string(cw.in_channels) +
                             " input channels, previous layer produces " + std::to_string(prev_out));
        }
        prev_out = cw.out_channels;
        prev_block = block;
        net.specs_.push_back({LayerKind::conv, 3, 1, Padding::same, cw.out_channels, stem});
        net.convs_.emplace_back(Conv2d(std::move(cw)));
        net.specs_.push_back({LayerKind::relu, 0, 0, Padding::valid, 0, stem + "_relu"});
        net.convs_.emplace_back();
    }
    net.specs_.push_back({LayerKind::maxpool, 2, 2, Padding::valid, 0, "block" + std::to_string(prev_block) + "_pool"});
    net.convs_.emplace_back();
    return net;
}

int ConvNet::input_channels() const {
    for (const auto& c : convs_) {
        if (c) return c->in_channels();
    }
    return 0;
}

Shape3 ConvNet::output_shape(Shape3 input) const {
    for (const auto& spec : specs_) {
        if (spec.kind == LayerKind::conv) input.channels = spec.out_channels;
        if (spec.kind == LayerKind::maxpool) {
            input.height /= 2;
            input.width /= 2;
        }
    }
    return input;
}

Tensor3 ConvNet::forward(Tensor3 x, std::size_t workers, const BlockObserver& observer) const {
    for (std::size_t i = 0; i < specs_.size(); ++i) {
        switch (specs_[i].kind) {
            case LayerKind::conv: x = convs_[i]->forward(x, workers); break;
            case LayerKind::relu: relu_inplace(x); break;
            case LayerKind::maxpool:
                x = maxpool2d(x);
                if (observer) observer(specs_[i].name.substr(0, specs_[i].name.size() - 5), x.shape());
                break;
        }
    }
    return x;
}

Vgg16Extractor::Vgg16Extractor(const WeightStore& store, FeatureHead head) : head_(head) {
    validate_vgg16(store);
    net_ = ConvNet::from_store(store);
}

std::size_t Vgg16Extractor::feature_length() const noexcept {
    return head_ == FeatureHead::flatten ? kVggFeatureLength : 512;
}

FeatureVector Vgg16Extractor::extract(const Tensor3& input, std::size_t workers) const {
    if (input.shape() != Shape3{3, kInputSize, kInputSize}) {
        throw ShapeError("VGG-16 input must be (3,224,224), got " + input.shape().str());
    }
    static const std::map<std::string, Shape3> expected = {
        {"block1", {64, 112, 112}}, {"block2", {128, 56, 56}}, {"block3", {256, 28, 28}},
        {"block4", {512, 14, 14}}, {"block5", {512, 7, 7}}};
    Tensor3 out = net_.forward(input, workers, [](const std::string& block, const Shape3& shape) {
        const Shape3& want = expected.at(block);
        if (shape != want) {
            throw ShapeError(block + " produced " + shape.str() + ", expected " + want.str());
        }
    });
    if (head_ == FeatureHead::global_average) return global_average_pool(out);
    return std::move(out).release();
}

FeatureVector extract_features(const WeightStore& weights, const Tensor3& input, std::size_t workers) {
    return Vgg16Extractor(weights).extract(input, workers);
}

}  // namespace ctsev::cnn
