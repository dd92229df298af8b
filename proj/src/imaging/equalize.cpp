#include "ctsev/imaging/equalize.hpp"

#include <cmath>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

namespace ctsev::imaging {
namespace {

ToneMap identity_map() {
    ToneMap m{};
    std::iota(m.begin(), m.end(), std::uint8_t{0});
    return m;
}

int occupied_bins(const Histogram& hist) {
    int n = 0;
    for (auto c : hist) n += c != 0;
    return n;
}

// Tile boundaries along one axis. Tiles are `step` wide except the last.
std::vector<int> tile_starts(int extent, int tiles) {
    const int step = (extent + tiles - 1) / tiles;
    std::vector<int> starts;
    for (int t = 0; t < tiles && t * step < extent; ++t) starts.push_back(t * step);
    starts.push_back(extent);
    return starts;
}

// Weight of tile `hi` is num / den.
struct Blend {
    int lo;
    int hi;
    std::int64_t num;
    std::int64_t den;
};

// For every pixel coordinate, the pair of tiles whose centers bracket it.
// Centers are kept doubled so they stay integral.
std::vector<Blend> blend_table(const std::vector<int>& starts, int extent) {
    const int tiles = static_cast<int>(starts.size()) - 1;
    std::vector<std::int64_t> centers2(static_cast<std::size_t>(tiles));
    for (int t = 0; t < tiles; ++t) {
        centers2[static_cast<std::size_t>(t)] = starts[static_cast<std::size_t>(t)] +
                                                starts[static_cast<std::size_t>(t) + 1] - 1;
    }
    std::vector<Blend> table(static_cast<std::size_t>(extent));
    int t = 0;
    for (int p = 0; p < extent; ++p) {
        const std::int64_t p2 = 2 * static_cast<std::int64_t>(p);
        while (t + 1 < tiles && centers2[static_cast<std::size_t>(t) + 1] <= p2) ++t;
        const std::int64_t c0 = centers2[static_cast<std::size_t>(t)];
        if (p2 <= c0 || t + 1 == tiles) {
            table[static_cast<std::size_t>(p)] = {t, t, 0, 1};
        } else {
            const std::int64_t c1 = centers2[static_cast<std::size_t>(t) + 1];
            table[static_cast<std::size_t>(p)] = {t, t + 1, p2 - c0, c1 - c0};
        }
    }
    return table;
}

}  // namespace

void ClaheParams::validate() const {
    if (grid_rows < 1 || grid_cols < 1) throw std::invalid_argument("clahe: grid must be at least 1x1");
    if (!(clip_factor > 0.0)) throw std::invalid_argument("clahe: clip factor must be positive");
    if (bins != 256) throw std::invalid_argument("clahe: only 256 bins are supported");
}

Histogram histogram(const GrayImage& img) {
    Histogram hist{};
    for (std::uint8_t v : img.pixels()) ++hist[v];
    return hist;
}

ToneMap equalization_map(const Histogram& hist) {
    if (occupied_bins(hist) <= 1) return identity_map();

    std::uint64_t total = 0;
    for (auto c : hist) total += c;
    std::uint64_t cdf_min = 0;
    for (auto c : hist) {
        if (c != 0) {
            cdf_min = c;
            break;
        }
    }
    const std::uint64_t den = total - cdf_min;

    ToneMap map{};
    std::uint64_t cdf = 0;
    for (std::size_t v = 0; v < 256; ++v) {
        cdf += hist[v];
        if (cdf < cdf_min) {
            map[v] = 0;
            continue;
        }
        // round-half-up of (cdf - cdf_min) * 255 / den, in exact integers
        const std::uint64_t num = (cdf - cdf_min) * 255;
        map[v] = static_cast<std::uint8_t>((2 * num + den) / (2 * den));
    }
    return map;
}

std::uint64_t clip_limit(double clip_factor, std::uint64_t tile_pixels) {
    const double raw = std::floor(clip_factor * static_cast<double>(tile_pixels) / 256.0);
    if (!std::isfinite(raw) || raw >= static_cast<double>(std::numeric_limits<std::uint64_t>::max() / 2)) {
        return std::numeric_limits<std::uint64_t>::max();
    }
    return std::max<std::uint64_t>(1, static_cast<std::uint64_t>(raw));
}

void clip_and_redistribute(Histogram& hist, std::uint64_t limit) {
    std::uint64_t excess = 0;
    for (auto& c : hist) {
        if (c > limit) {
            excess += c - limit;
            c = limit;
        }
    }
    if (excess == 0) return;
    const std::uint64_t share = excess / 256;
    const std::uint64_t remainder = excess % 256;
    for (std::size_t v = 0; v < 256; ++v) hist[v] += share + (v < remainder ? 1 : 0);
}

GrayImage equalize_global(const GrayImage& img) {
    const ToneMap map = equalization_map(histogram(img));
    GrayImage out = img;
    for (auto& v : out.pixels()) v = map[v];
    return out;
}

GrayImage clahe(const GrayImage& img, const ClaheParams& params) {
    params.validate();
    const int h = img.height();
    const int w = img.width();
    if (h < params.grid_rows || w < params.grid_cols) {
        throw std::invalid_argument("clahe: image " + std::to_string(h) + "x" + std::to_string(w) +
                                    " is smaller than the " + std::to_string(params.grid_rows) + "x" +
                                    std::to_string(params.grid_cols) + " grid");
    }

    const auto row_starts = tile_starts(h, params.grid_rows);
    const auto col_starts = tile_starts(w, params.grid_cols);
    const int tile_rows = static_cast<int>(row_starts.size()) - 1;
    const int tile_cols = static_cast<int>(col_starts.size()) - 1;

    std::vector<int> col_tile(static_cast<std::size_t>(w));
    for (int t = 0; t < tile_cols; ++t) {
        for (int x = col_starts[static_cast<std::size_t>(t)]; x < col_starts[static_cast<std::size_t>(t) + 1]; ++x) {
            col_tile[static_cast<std::size_t>(x)] = t;
        }
    }

    std::vector<Histogram> hists(static_cast<std::size_t>(tile_rows * tile_cols), Histogram{});
    for (int ty = 0; ty < tile_rows; ++ty) {
        Histogram* band = hists.data() + static_cast<std::size_t>(ty * tile_cols);
        for (int y = row_starts[static_cast<std::size_t>(ty)]; y < row_starts[static_cast<std::size_t>(ty) + 1]; ++y) {
            const auto src = img.row(y);
            for (int x = 0; x < w; ++x) ++band[col_tile[static_cast<std::size_t>(x)]][src[x]];
        }
    }

    std::vector<ToneMap> maps(hists.size());
    for (int ty = 0; ty < tile_rows; ++ty) {
        for (int tx = 0; tx < tile_cols; ++tx) {
            const auto idx = static_cast<std::size_t>(ty * tile_cols + tx);
            Histogram& hist = hists[idx];
            if (occupied_bins(hist) <= 1) {
                maps[idx] = identity_map();
                continue;
            }
            const auto pixels = static_cast<std::uint64_t>(row_starts[static_cast<std::size_t>(ty) + 1] -
                                                           row_starts[static_cast<std::size_t>(ty)]) *
                                static_cast<std::uint64_t>(col_starts[static_cast<std::size_t>(tx) + 1] -
                                                           col_starts[static_cast<std::size_t>(tx)]);
            clip_and_redistribute(hist, clip_limit(params.clip_factor, pixels));
            maps[idx] = equalization_map(hist);
        }
    }

    const auto row_blend = blend_table(row_starts, h);
    const auto col_blend = blend_table(col_starts, w);

    GrayImage out(h, w);
    for (int y = 0; y < h; ++y) {
        const Blend& by = row_blend[static_cast<std::size_t>(y)];
        const ToneMap* top = maps.data() + static_cast<std::size_t>(by.lo * tile_cols);
        const ToneMap* bottom = maps.data() + static_cast<std::size_t>(by.hi * tile_cols);
        const auto src = img.row(y);
        auto dst = out.row(y);
        for (int x = 0; x < w; ++x) {
            const Blend& bx = col_blend[static_cast<std::size_t>(x)];
            const std::uint8_t v = src[x];
            const std::int64_t upper = (bx.den - bx.num) * top[bx.lo][v] + bx.num * top[bx.hi][v];
            const std::int64_t lower = (bx.den - bx.num) * bottom[bx.lo][v] + bx.num * bottom[bx.hi][v];
            dst[x] = round_ratio_u8((by.den - by.num) * upper + by.num * lower, by.den * bx.den);
        }
    }
    return out;
}

}  // namespace ctsev::imaging
