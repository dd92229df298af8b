#pragma once

#include "ctsev/imaging/gray_image.hpp"

namespace ctsev::imaging {

// Bilinear resampling with half-pixel centers: the source coordinate of output
// pixel d is (d + 0.5) * in / out - 0.5, clamped to the image. Results are
// rounded half-up. Throws std::invalid_argument for a non-positive target.
GrayImage resize_bilinear(const GrayImage& img, int out_h, int out_w);

}  // namespace ctsev::imaging
