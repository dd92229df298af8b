#include "ctsev/cnn/ops.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

#include "ctsev/parallel.hpp"

namespace ctsev::cnn {
namespace {

constexpr int kTaps = 9;
constexpr int MR = 8;     // kernel rows per register tile
constexpr int NR = 32;    // output pixels per register tile
constexpr int KC = 256;   // reduction slice summed in float
constexpr int NB = 256;   // output pixels per work item

static_assert(NB % NR == 0);

// acc[MR][NR] = A_panel(kc x MR)^T * B_panel(kc x NR)
inline void micro_kernel(int kc, const float* __restrict a, const float* __restrict b, float* __restrict out) {
    float acc[MR][NR] = {};
    for (int k = 0; k < kc; ++k) {
        const float* bk = b + k * NR;
        const float* ak = a + k * MR;
#pragma GCC unroll 8
        for (int i = 0; i < MR; ++i) {
            const float av = ak[i];
#pragma GCC unroll 32
            for (int j = 0; j < NR; ++j) acc[i][j] += av * bk[j];
        }
    }
    for (int i = 0; i < MR; ++i) {
        for (int j = 0; j < NR; ++j) out[i * NR + j] = acc[i][j];
    }
}

}  // namespace

void ConvWeights::validate() const {
    if (out_channels < 1 || in_channels < 1) throw std::invalid_argument("conv2d: channel counts must be positive");
    if (kernel.size() != static_cast<std::size_t>(out_channels) * static_cast<std::size_t>(in_channels) * kTaps) {
        throw std::invalid_argument("conv2d: kernel size does not match (out, in, 3, 3)");
    }
    if (bias.size() != static_cast<std::size_t>(out_channels)) {
        throw std::invalid_argument("conv2d: bias length does not match out channels");
    }
}

Conv2d::Conv2d(ConvWeights weights) : weights_(std::move(weights)) {
    weights_.validate();
    const int m = weights_.out_channels;
    const int k = weights_.in_channels * kTaps;
    const int panels = (m + MR - 1) / MR;
    packed_.assign(static_cast<std::size_t>(panels) * static_cast<std::size_t>(k) * MR, 0.0f);
    for (int p = 0; p < panels; ++p) {
        float* dst = packed_.data() + static_cast<std::size_t>(p) * static_cast<std::size_t>(k) * MR;
        for (int kk = 0; kk < k; ++kk) {
            for (int i = 0; i < MR; ++i) {
                const int row = p * MR + i;
                if (row < m) {
                    dst[kk * MR + i] = weights_.kernel[static_cast<std::size_t>(row) * static_cast<std::size_t>(k) +
                                                       static_cast<std::size_t>(kk)];
                }
            }
        }
    }
}

Tensor3 Conv2d::forward(const Tensor3& input, std::size_t workers) const {
    if (input.channels() != weights_.in_channels) {
        throw std::invalid_argument("conv2d: input has " + std::to_string(input.channels()) +
                                    " channels, kernel expects " + std::to_string(weights_.in_channels));
    }
    const int h = input.height();
    const int w = input.width();
    const int m = weights_.out_channels;
    const int k = weights_.in_channels * kTaps;
    const int n = h * w;
    const int panels = (m + MR - 1) / MR;
    const int blocks = (n + NB - 1) / NB;
    const float* src = input.values().data();

    Tensor3 out(Shape3{m, h, w});
    float* dst = out.values().data();

    parallel_for(static_cast<std::size_t>(blocks), workers, [&](std::size_t block) {
        const int n0 = static_cast<int>(block) * NB;
        const int nb = std::min(NB, n - n0);
        const int col_panels = (nb + NR - 1) / NR;

        std::vector<int> ys(static_cast<std::size_t>(col_panels) * NR, -1000);
        std::vector<int> xs(ys.size(), -1000);
        for (int j = 0; j < nb; ++j) {
            ys[static_cast<std::size_t>(j)] = (n0 + j) / w;
            xs[static_cast<std::size_t>(j)] = (n0 + j) % w;
        }

        std::vector<float> bpack(static_cast<std::size_t>(col_panels) * KC * NR);
        std::vector<double> accum(static_cast<std::size_t>(panels) * MR * static_cast<std::size_t>(col_panels) * NR, 0.0);
        float tile[MR * NR];

        for (int k0 = 0; k0 < k; k0 += KC) {
            const int kc = std::min(KC, k - k0);
            // im2col of this slice straight into NR-wide column panels
            for (int kk = 0; kk < kc; ++kk) {
                const int tap = k0 + kk;
                const int c = tap / kTaps;
                const int dy = (tap % kTaps) / 3 - 1;
                const int dx = tap % 3 - 1;
                const float* plane = src + static_cast<std::size_t>(c) * static_cast<std::size_t>(n);
                for (int jp = 0; jp < col_panels; ++jp) {
                    float* bp = bpack.data() + (static_cast<std::size_t>(jp) * KC + kk) * NR;
                    for (int j = 0; j < NR; ++j) {
                        const int col = jp * NR + j;
                        const int sy = ys[static_cast<std::size_t>(col)] + dy;
                        const int sx = xs[static_cast<std::size_t>(col)] + dx;
                        bp[j] = (sy >= 0 && sy < h && sx >= 0 && sx < w)
                                    ? plane[static_cast<std::size_t>(sy) * static_cast<std::size_t>(w) + sx]
                                    : 0.0f;
                    }
                }
            }

            for (int p = 0; p < panels; ++p) {
                const float* ap = packed_.data() + (static_cast<std::size_t>(p) * static_cast<std::size_t>(k) + k0) * MR;
                for (int jp = 0; jp < col_panels; ++jp) {
                    micro_kernel(kc, ap, bpack.data() + static_cast<std::size_t>(jp) * KC * NR, tile);
                    double* acc = accum.data() + (static_cast<std::size_t>(p) * col_panels + jp) * MR * NR;
                    for (int t = 0; t < MR * NR; ++t) acc[t] += tile[t];
                }
            }
        }

        for (int p = 0; p < panels; ++p) {
            for (int i = 0; i < MR; ++i) {
                const int row = p * MR + i;
                if (row >= m) break;
                const double b = weights_.bias[static_cast<std::size_t>(row)];
                float* out_row = dst + static_cast<std::size_t>(row) * static_cast<std::size_t>(n) + n0;
                for (int j = 0; j < nb; ++j) {
                    const int jp = j / NR;
                    const double* acc = accum.data() + (static_cast<std::size_t>(p) * col_panels + jp) * MR * NR;
                    out_row[j] = static_cast<float>(b + acc[i * NR + j % NR]);
                }
            }
        }
    });
    return out;
}

Tensor3 conv2d(const Tensor3& input, const ConvWeights& weights, std::size_t workers) {
    return Conv2d(weights).forward(input, workers);
}

}  // namespace ctsev::cnn
