#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

namespace ctsev::cnn {

struct NamedTensor {
    std::string name;
    std::vector<std::uint32_t> dims;
    std::vector<float> data;

    std::size_t element_count() const;
};

// Ordered tensors of a VGGW weight file. Immutable once loaded.
class WeightStore {
public:
    WeightStore() = default;
    explicit WeightStore(std::vector<NamedTensor> tensors) : tensors_(std::move(tensors)) {}

    const std::vector<NamedTensor>& tensors() const noexcept { return tensors_; }
    std::size_t size() const noexcept { return tensors_.size(); }
    const NamedTensor& operator[](std::size_t i) const { return tensors_.at(i); }

    // Throws std::out_of_range if absent.
    const NamedTensor& find(const std::string& name) const;

    // CRC-32 over the per-tensor CRCs in order; identifies a weight set.
    std::uint32_t checksum() const;

private:
    std::vector<NamedTensor> tensors_;
};

// IEEE CRC-32 of the little-endian float payload.
std::uint32_t payload_crc32(std::span<const float> data);

// VGGW container:
//   "VGGW" | version u32 (=1) | tensor_count u32 |
//   per tensor: name_len u16 | name | ndim u8 | dims u32 x ndim | crc32 u32 | f32 payload
// All little-endian.
void write_weight_file(const std::filesystem::path& path, const WeightStore& store);

// Parses a VGGW file and verifies every payload CRC. Does not impose any
// network topology. Throws FormatError, TruncatedError or ChecksumError.
WeightStore read_weight_file(const std::filesystem::path& path);

// Names of the 26 VGG-16 convolutional tensors in network order.
std::vector<std::string> vgg16_tensor_names();

// Checks the 13 conv weight/bias pairs: names, 4-D (out, in, 3, 3) kernels,
// 1-D biases and the 3->64->...->512 channel chain. Throws ShapeError or
// FormatError.
void validate_vgg16(const WeightStore& store);

// read_weight_file + validate_vgg16.
WeightStore load_weights(const std::filesystem::path& path);

}  // namespace ctsev::cnn
