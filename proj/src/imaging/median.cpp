#include "ctsev/imaging/median.hpp"

#include <algorithm>
#include <array>
#include <stdexcept>
#include <vector>

namespace ctsev::imaging {

GrayImage median_filter(const GrayImage& img, int radius) {
    if (radius < 1) throw std::invalid_argument("median_filter: radius must be >= 1");

    const int h = img.height();
    const int w = img.width();
    const int side = 2 * radius + 1;
    // The median is the smallest value m with count(<= m) > half.
    const int half = side * side / 2;

    // Clamped source column for each window column offset, indexed x + radius.
    std::vector<int> col_index(static_cast<std::size_t>(w + 2 * radius + 1));
    for (int i = 0; i < static_cast<int>(col_index.size()); ++i) {
        col_index[static_cast<std::size_t>(i)] = std::clamp(i - radius, 0, w - 1);
    }
    std::vector<const std::uint8_t*> window_rows(static_cast<std::size_t>(side));

    GrayImage out(h, w);
    std::array<int, 256> hist{};
    for (int y = 0; y < h; ++y) {
        for (int dy = -radius; dy <= radius; ++dy) {
            window_rows[static_cast<std::size_t>(dy + radius)] = img.row(std::clamp(y + dy, 0, h - 1)).data();
        }

        hist.fill(0);
        for (int dx = -radius; dx <= radius; ++dx) {
            const int sx = col_index[static_cast<std::size_t>(dx + radius)];
            for (const std::uint8_t* r : window_rows) ++hist[r[sx]];
        }

        int med = 0;
        int below = 0;  // count of window values < med
        auto settle = [&] {
            while (below > half) {
                --med;
                below -= hist[static_cast<std::size_t>(med)];
            }
            while (below + hist[static_cast<std::size_t>(med)] <= half) {
                below += hist[static_cast<std::size_t>(med)];
                ++med;
            }
        };
        settle();

        auto dst = out.row(y);
        dst[0] = static_cast<std::uint8_t>(med);
        for (int x = 1; x < w; ++x) {
            const int leaving = col_index[static_cast<std::size_t>(x - 1)];
            const int entering = col_index[static_cast<std::size_t>(x + 2 * radius)];
            if (leaving != entering) {
                for (const std::uint8_t* r : window_rows) {
                    const std::uint8_t out_v = r[leaving];
                    const std::uint8_t in_v = r[entering];
                    --hist[out_v];
                    if (out_v < med) --below;
                    ++hist[in_v];
                    if (in_v < med) ++below;
                }
                settle();
            }
            dst[x] = static_cast<std::uint8_t>(med);
        }
    }
    return out;
}

}  // namespace ctsev::imaging
