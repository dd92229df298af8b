#pragma once

#include <cstdint>
#include <cstring>
#include <istream>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "ctsev/error.hpp"

namespace ctsev::io {

// Little-endian primitive writer over an ostream.
class BinaryWriter {
public:
    explicit BinaryWriter(std::ostream& out) : out_(out) {}

    void bytes(const void* data, std::size_t size);
    void u8(std::uint8_t v) { bytes(&v, 1); }
    void u16(std::uint16_t v);
    void u32(std::uint32_t v);
    void u64(std::uint64_t v);
    void f32(float v);
    void f64(double v);
    void f32s(std::span<const float> values);
    void f64s(std::span<const double> values);
    void magic(const char (&tag)[5]) { bytes(tag, 4); }

private:
    std::ostream& out_;
};

// Little-endian primitive reader. Every short read throws TruncatedError
// naming `context` so callers can tell which file failed.
class BinaryReader {
public:
    BinaryReader(std::istream& in, std::string context)
        : in_(in), context_(std::move(context)) {}

    void bytes(void* data, std::size_t size);
    std::uint8_t u8();
    std::uint16_t u16();
    std::uint32_t u32();
    std::uint64_t u64();
    float f32();
    double f64();
    void f32s(std::span<float> out);
    void f64s(std::span<double> out);
    std::string string(std::size_t size);

    // Reads four bytes and throws FormatError unless they equal `tag`.
    void expect_magic(const char (&tag)[5]);

    // True once the stream has no further bytes.
    bool at_end();

    const std::string& context() const { return context_; }

private:
    std::istream& in_;
    std::string context_;
};

}  // namespace ctsev::io
