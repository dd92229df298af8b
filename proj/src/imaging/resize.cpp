#include "ctsev/imaging/resize.hpp"

#include <algorithm>
#include <cstdint>
#include <stdexcept>
#include <vector>

namespace ctsev::imaging {
namespace {

// Source position of a destination index is (lo + num / den), with
// den = 2 * out shared by the whole axis.
struct AxisTap {
    int lo;
    int hi;
    std::int64_t num;
};

std::vector<AxisTap> axis_taps(int in, int out) {
    const std::int64_t den = 2 * static_cast<std::int64_t>(out);
    std::vector<AxisTap> taps(static_cast<std::size_t>(out));
    for (int d = 0; d < out; ++d) {
        // src = (d + 0.5) * in / out - 0.5 = ((2d + 1) * in - out) / (2 * out)
        const std::int64_t pos = (2 * static_cast<std::int64_t>(d) + 1) * in - out;
        AxisTap t{0, 0, 0};
        if (pos > 0) {
            t.lo = static_cast<int>(pos / den);
            t.num = pos % den;
            if (t.lo >= in - 1) {
                t.lo = in - 1;
                t.num = 0;
            }
        }
        t.hi = std::min(t.lo + 1, in - 1);
        taps[static_cast<std::size_t>(d)] = t;
    }
    return taps;
}

}  // namespace

GrayImage resize_bilinear(const GrayImage& img, int out_h, int out_w) {
    if (out_h < 1 || out_w < 1) {
        throw std::invalid_argument("resize_bilinear: target dimensions must be positive");
    }
    if (out_h == img.height() && out_w == img.width()) return img;

    const auto rows = axis_taps(img.height(), out_h);
    const auto cols = axis_taps(img.width(), out_w);

    const std::int64_t dy = 2 * static_cast<std::int64_t>(out_h);
    const std::int64_t dx = 2 * static_cast<std::int64_t>(out_w);
    GrayImage out(out_h, out_w);
    for (int y = 0; y < out_h; ++y) {
        const AxisTap& ty = rows[static_cast<std::size_t>(y)];
        const auto top = img.row(ty.lo);
        const auto bottom = img.row(ty.hi);
        auto dst = out.row(y);
        for (int x = 0; x < out_w; ++x) {
            const AxisTap& tx = cols[static_cast<std::size_t>(x)];
            const std::int64_t upper = (dx - tx.num) * top[tx.lo] + tx.num * top[tx.hi];
            const std::int64_t lower = (dx - tx.num) * bottom[tx.lo] + tx.num * bottom[tx.hi];
            dst[x] = round_ratio_u8((dy - ty.num) * upper + ty.num * lower, dy * dx);
        }
    }
    return out;
}

}  // namespace ctsev::imaging
