#include <algorithm>
#include <stdexcept>

#include "ctsev/cnn/ops.hpp"

namespace ctsev::cnn {

void relu_inplace(Tensor3& t) {
    for (float& v : t.values()) v = std::max(v, 0.0f);
}

Tensor3 relu(Tensor3 t) {
    relu_inplace(t);
    return t;
}

Tensor3 maxpool2d(const Tensor3& t) {
    if (t.height() % 2 != 0 || t.width() % 2 != 0) {
        throw std::invalid_argument("maxpool2d: spatial dims must be even, got " + t.shape().str());
    }
    const int oh = t.height() / 2;
    const int ow = t.width() / 2;
    Tensor3 out(Shape3{t.channels(), oh, ow});
    for (int c = 0; c < t.channels(); ++c) {
        for (int y = 0; y < oh; ++y) {
            for (int x = 0; x < ow; ++x) {
                out.at(c, y, x) = std::max(std::max(t.at(c, 2 * y, 2 * x), t.at(c, 2 * y, 2 * x + 1)),
                                           std::max(t.at(c, 2 * y + 1, 2 * x), t.at(c, 2 * y + 1, 2 * x + 1)));
            }
        }
    }
    return out;
}

std::vector<float> global_average_pool(const Tensor3& t) {
    std::vector<float> out(static_cast<std::size_t>(t.channels()));
    for (int c = 0; c < t.channels(); ++c) {
        double sum = 0.0;
        for (float v : t.plane(c)) sum += v;
        out[static_cast<std::size_t>(c)] = static_cast<float>(sum / static_cast<double>(t.plane(c).size()));
    }
    return out;
}

}  // namespace ctsev::cnn
