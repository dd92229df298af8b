#pragma once

#include "ctsev/imaging/gray_image.hpp"

namespace ctsev::imaging {

// Median over the (2r+1)x(2r+1) window centered on each pixel, with edge
// replication at the borders. Uses a sliding 256-bin histogram so the cost
// per pixel is O(r) rather than O(r^2 log r). Requires radius >= 1.
GrayImage median_filter(const GrayImage& img, int radius);

}  // namespace ctsev::imaging
