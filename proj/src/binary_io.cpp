#include "ctsev/binary_io.hpp"

#include <bit>

namespace ctsev::io {
namespace {

template <typename T>
T to_little(T v) {
    if constexpr (std::endian::native == std::endian::little) {
        return v;
    } else {
        unsigned char buf[sizeof(T)];
        std::memcpy(buf, &v, sizeof(T));
        for (std::size_t i = 0; i < sizeof(T) / 2; ++i) std::swap(buf[i], buf[sizeof(T) - 1 - i]);
        std::memcpy(&v, buf, sizeof(T));
        return v;
    }
}

template <typename T>
void put(BinaryWriter& w, T v) {
    v = to_little(v);
    w.bytes(&v, sizeof(T));
}

template <typename T>
T get(BinaryReader& r) {
    T v;
    r.bytes(&v, sizeof(T));
    return to_little(v);
}

}  // namespace

void BinaryWriter::bytes(const void* data, std::size_t size) {
    out_.write(static_cast<const char*>(data), static_cast<std::streamsize>(size));
    if (!out_) throw DataError("write failed");
}

void BinaryWriter::u16(std::uint16_t v) { put(*this, v); }
void BinaryWriter::u32(std::uint32_t v) { put(*this, v); }
void BinaryWriter::u64(std::uint64_t v) { put(*this, v); }
void BinaryWriter::f32(float v) { put(*this, std::bit_cast<std::uint32_t>(v)); }
void BinaryWriter::f64(double v) { put(*this, std::bit_cast<std::uint64_t>(v)); }

void BinaryWriter::f32s(std::span<const float> values) {
    if constexpr (std::endian::native == std::endian::little) {
        bytes(values.data(), values.size_bytes());
    } else {
        for (float v : values) f32(v);
    }
}

void BinaryWriter::f64s(std::span<const double> values) {
    if constexpr (std::endian::native == std::endian::little) {
        bytes(values.data(), values.size_bytes());
    } else {
        for (double v : values) f64(v);
    }
}

void BinaryReader::bytes(void* data, std::size_t size) {
    in_.read(static_cast<char*>(data), static_cast<std::streamsize>(size));
    if (static_cast<std::size_t>(in_.gcount()) != size) {
        throw TruncatedError(context_ + ": unexpected end of file");
    }
}

std::uint8_t BinaryReader::u8() { return get<std::uint8_t>(*this); }
std::uint16_t BinaryReader::u16() { return get<std::uint16_t>(*this); }
std::uint32_t BinaryReader::u32() { return get<std::uint32_t>(*this); }
std::uint64_t BinaryReader::u64() { return get<std::uint64_t>(*this); }
float BinaryReader::f32() { return std::bit_cast<float>(get<std::uint32_t>(*this)); }
double BinaryReader::f64() { return std::bit_cast<double>(get<std::uint64_t>(*this)); }

void BinaryReader::f32s(std::span<float> out) {
    if constexpr (std::endian::native == std::endian::little) {
        bytes(out.data(), out.size_bytes());
    } else {
        for (float& v : out) v = f32();
    }
}

void BinaryReader::f64s(std::span<double> out) {
    if constexpr (std::endian::native == std::endian::little) {
        bytes(out.data(), out.size_bytes());
    } else {
        for (double& v : out) v = f64();
    }
}

std::string BinaryReader::string(std::size_t size) {
    std::string s(size, '\0');
    bytes(s.data(), size);
    return s;
}

void BinaryReader::expect_magic(const char (&tag)[5]) {
    char got[4];
    in_.read(got, 4);
    if (in_.gcount() != 4 || std::memcmp(got, tag, 4) != 0) {
        throw FormatError(context_ + ": bad magic, expected \"" + std::string(tag, 4) + "\"");
    }
}

bool BinaryReader::at_end() {
    return in_.peek() == std::char_traits<char>::eof();
}

}  // namespace ctsev::io
