#include "ctsev/imaging/preprocess.hpp"

#include <stdexcept>

#include "ctsev/imaging/median.hpp"
#include "ctsev/imaging/resize.hpp"

namespace ctsev::imaging {

void PreprocessParams::validate() const {
    if (target_h < 1 || target_w < 1) throw std::invalid_argument("preprocess: target size must be positive");
    if (median_radius < 1) throw std::invalid_argument("preprocess: median radius must be >= 1");
    if (apply_clahe) clahe.validate();
}

GrayImage preprocess(const GrayImage& img, const PreprocessParams& params) {
    params.validate();
    GrayImage out = median_filter(resize_bilinear(img, params.target_h, params.target_w), params.median_radius);
    if (params.apply_clahe) out = clahe(out, params.clahe);
    return out;
}

}  // namespace ctsev::imaging
