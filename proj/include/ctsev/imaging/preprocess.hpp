#pragma once

#include "ctsev/imaging/equalize.hpp"
#include "ctsev/imaging/gray_image.hpp"

namespace ctsev::imaging {

struct PreprocessParams {
    int target_h = 224;
    int target_w = 224;
    int median_radius = 1;
    bool apply_clahe = true;
    ClaheParams clahe;

    void validate() const;
};

// resize -> median -> CLAHE, in that order.
GrayImage preprocess(const GrayImage& img, const PreprocessParams& params);

}  // namespace ctsev::imaging
