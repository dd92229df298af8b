#include "ctsev/imaging/image_io.hpp"

#include <algorithm>
#include <cctype>
#include <csetjmp>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <iterator>
#include <string>
#include <vector>

#include <jpeglib.h>
#include <png.h>

#include "ctsev/error.hpp"

namespace ctsev::imaging {
namespace {

GrayImage decode_pgm(std::span<const std::uint8_t> bytes) {
    std::size_t pos = 2;
    auto skip_space = [&] {
        while (pos < bytes.size()) {
            if (bytes[pos] == '#') {
                while (pos < bytes.size() && bytes[pos] != '\n') ++pos;
            } else if (std::isspace(bytes[pos])) {
                ++pos;
            } else {
                break;
            }
        }
    };
    auto read_int = [&]() -> long {
        skip_space();
        long v = 0;
        const std::size_t start = pos;
        while (pos < bytes.size() && bytes[pos] >= '0' && bytes[pos] <= '9') {
            v = v * 10 + (bytes[pos] - '0');
            if (v > 1'000'000) throw DataError("pgm: header value out of range");
            ++pos;
        }
        if (pos == start) throw DataError("pgm: malformed header");
        return v;
    };
    const long width = read_int();
    const long height = read_int();
    const long maxval = read_int();
    if (width < 1 || height < 1) throw DataError("pgm: empty image");
    if (maxval < 1 || maxval > 255) throw DataError("pgm: only 8-bit maxval is supported");
    if (pos >= bytes.size() || !std::isspace(bytes[pos])) throw DataError("pgm: malformed header");
    ++pos;

    const auto count = static_cast<std::size_t>(width) * static_cast<std::size_t>(height);
    if (bytes.size() - pos < count) throw DataError("pgm: truncated pixel data");
    std::vector<std::uint8_t> data(bytes.begin() + static_cast<std::ptrdiff_t>(pos),
                                   bytes.begin() + static_cast<std::ptrdiff_t>(pos + count));
    if (maxval != 255) {
        for (auto& v : data) {
            const long clamped = std::min<long>(v, maxval);
            v = static_cast<std::uint8_t>((clamped * 255 * 2 + maxval) / (2 * maxval));
        }
    }
    return GrayImage(static_cast<int>(height), static_cast<int>(width), std::move(data));
}

GrayImage decode_png(std::span<const std::uint8_t> bytes) {
    png_image image;
    std::memset(&image, 0, sizeof(image));
    image.version = PNG_IMAGE_VERSION;
    if (!png_image_begin_read_from_memory(&image, bytes.data(), bytes.size())) {
        throw DataError(std::string("png: ") + image.message);
    }
    const bool gray = (image.format & PNG_FORMAT_FLAG_COLOR) == 0;
    image.format = gray ? PNG_FORMAT_GRAY : PNG_FORMAT_RGB;
    std::vector<std::uint8_t> buffer(PNG_IMAGE_SIZE(image));
    if (!png_image_finish_read(&image, nullptr, buffer.data(), 0, nullptr)) {
        const std::string message = image.message;
        png_image_free(&image);
        throw DataError("png: " + message);
    }
    const int h = static_cast<int>(image.height);
    const int w = static_cast<int>(image.width);
    if (gray) return GrayImage(h, w, std::move(buffer));

    std::vector<std::uint8_t> out(static_cast<std::size_t>(h) * static_cast<std::size_t>(w));
    for (std::size_t i = 0; i < out.size(); ++i) {
        out[i] = luminance(buffer[3 * i], buffer[3 * i + 1], buffer[3 * i + 2]);
    }
    return GrayImage(h, w, std::move(out));
}

struct JpegErrorManager {
    jpeg_error_mgr base;
    std::jmp_buf jump;
    char message[JMSG_LENGTH_MAX];
};

void jpeg_error_exit(j_common_ptr cinfo) {
    auto* err = reinterpret_cast<JpegErrorManager*>(cinfo->err);
    (*cinfo->err->format_message)(cinfo, err->message);
    std::longjmp(err->jump, 1);
}

// Decodes into `pixels` (resized by the caller after reading the header).
// Kept free of non-trivial locals because of setjmp.
bool decode_jpeg_raw(std::span<const std::uint8_t> bytes, JpegErrorManager& err,
                     std::vector<std::uint8_t>& pixels, int& height, int& width, int& components) {
    jpeg_decompress_struct cinfo;
    cinfo.err = jpeg_std_error(&err.base);
    err.base.error_exit = jpeg_error_exit;
    if (setjmp(err.jump)) {
        jpeg_destroy_decompress(&cinfo);
        return false;
    }
    jpeg_create_decompress(&cinfo);
    jpeg_mem_src(&cinfo, bytes.data(), static_cast<unsigned long>(bytes.size()));
    jpeg_read_header(&cinfo, TRUE);
    cinfo.out_color_space = cinfo.num_components == 1 ? JCS_GRAYSCALE : JCS_RGB;
    jpeg_start_decompress(&cinfo);
    height = static_cast<int>(cinfo.output_height);
    width = static_cast<int>(cinfo.output_width);
    components = cinfo.output_components;
    pixels.resize(static_cast<std::size_t>(height) * static_cast<std::size_t>(width) *
                  static_cast<std::size_t>(components));
    while (cinfo.output_scanline < cinfo.output_height) {
        JSAMPROW row = pixels.data() + static_cast<std::size_t>(cinfo.output_scanline) *
                                           static_cast<std::size_t>(width) * static_cast<std::size_t>(components);
        jpeg_read_scanlines(&cinfo, &row, 1);
    }
    jpeg_finish_decompress(&cinfo);
    jpeg_destroy_decompress(&cinfo);
    return true;
}

GrayImage decode_jpeg(std::span<const std::uint8_t> bytes) {
    JpegErrorManager err{};
    std::vector<std::uint8_t> pixels;
    int h = 0, w = 0, comps = 0;
    if (!decode_jpeg_raw(bytes, err, pixels, h, w, comps)) {
        throw DataError(std::string("jpeg: ") + err.message);
    }
    if (comps == 1) return GrayImage(h, w, std::move(pixels));
    std::vector<std::uint8_t> out(static_cast<std::size_t>(h) * static_cast<std::size_t>(w));
    for (std::size_t i = 0; i < out.size(); ++i) {
        out[i] = luminance(pixels[3 * i], pixels[3 * i + 1], pixels[3 * i + 2]);
    }
    return GrayImage(h, w, std::move(out));
}

}  // namespace

ImageFormat sniff_format(std::span<const std::uint8_t> head) {
    static constexpr std::uint8_t png_sig[8] = {0x89, 'P', 'N', 'G', '\r', '\n', 0x1A, '\n'};
    if (head.size() >= 3 && head[0] == 'P' && head[1] == '5' && std::isspace(head[2])) return ImageFormat::pgm;
    if (head.size() >= 8 && std::memcmp(head.data(), png_sig, 8) == 0) return ImageFormat::png;
    if (head.size() >= 3 && head[0] == 0xFF && head[1] == 0xD8 && head[2] == 0xFF) return ImageFormat::jpeg;
    return ImageFormat::unknown;
}

GrayImage decode_image(std::span<const std::uint8_t> bytes) {
    switch (sniff_format(bytes)) {
        case ImageFormat::pgm: return decode_pgm(bytes);
        case ImageFormat::png: return decode_png(bytes);
        case ImageFormat::jpeg: return decode_jpeg(bytes);
        case ImageFormat::unknown: break;
    }
    throw DataError("unrecognized image format");
}

GrayImage read_image(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError(path.string() + ": cannot open");
    const std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    try {
        return decode_image(bytes);
    } catch (const DataError& e) {
        throw DataError(path.string() + ": " + e.what());
    }
}

void write_pgm(const std::filesystem::path& path, const GrayImage& img, const std::string& comment) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError(path.string() + ": cannot open for writing");
    out << "P5\n";
    std::size_t start = 0;
    while (start < comment.size()) {
        const auto end = std::min(comment.find('\n', start), comment.size());
        out << "# " << comment.substr(start, end - start) << '\n';
        start = end + 1;
    }
    out << img.width() << ' ' << img.height() << "\n255\n";
    out.write(reinterpret_cast<const char*>(img.pixels().data()), static_cast<std::streamsize>(img.size()));
    if (!out) throw DataError(path.string() + ": write failed");
}

}  // namespace ctsev::imaging
