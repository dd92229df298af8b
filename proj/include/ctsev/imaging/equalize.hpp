#pragma once

#include <array>
#include <cstdint>
#include <limits>

#include "ctsev/imaging/gray_image.hpp"

namespace ctsev::imaging {

using Histogram = std::array<std::uint64_t, 256>;
using ToneMap = std::array<std::uint8_t, 256>;

struct ClaheParams {
    int grid_rows = 8;
    int grid_cols = 8;
    // Clip limit as a multiple of the mean bin count. +infinity disables clipping.
    double clip_factor = 2.0;
    int bins = 256;

    void validate() const;
};

Histogram histogram(const GrayImage& img);

// Histogram equalization map normalized by the smallest nonzero CDF value:
// v -> round((cdf(v) - cdf_min) / (N - cdf_min) * 255). A histogram with a
// single occupied bin yields the identity map.
ToneMap equalization_map(const Histogram& hist);

// Clips every bin at `limit` and spreads the removed counts: an equal share
// to all 256 bins, then the remainder one count per bin from bin 0 upward.
void clip_and_redistribute(Histogram& hist, std::uint64_t limit);

// Per-tile clip limit max(1, floor(clip_factor * pixels / 256)); returns
// the maximum representable count when clipping is disabled.
std::uint64_t clip_limit(double clip_factor, std::uint64_t tile_pixels);

GrayImage equalize_global(const GrayImage& img);

// Contrast limited adaptive histogram equalization.
//
// The image is cut into grid_rows x grid_cols tiles of ceil(H/rows) x
// ceil(W/cols) pixels (trailing tiles may be smaller; tiles that would start
// past the image edge are dropped). Each tile's histogram is clipped and
// redistributed, then equalized; a tile holding a single gray value maps to
// the identity. Output pixels blend the maps of the four nearest tile centers
// bilinearly, replicating the outermost maps beyond the outer centers.
//
// Throws std::invalid_argument if the image is smaller than the grid.
GrayImage clahe(const GrayImage& img, const ClaheParams& params);

}  // namespace ctsev::imaging
