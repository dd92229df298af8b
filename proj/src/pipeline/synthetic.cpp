#include "ctsev/pipeline/synthetic.hpp"

#include <cmath>
#include <cstdio>
#include <random>
#include <vector>

#include "ctsev/imaging/image_io.hpp"

namespace ctsev::pipeline {
namespace {

struct Ellipse {
    double cy, cx, ry, rx;

    double level(double y, double x) const {
        const double dy = (y - cy) / ry, dx = (x - cx) / rx;
        return dy * dy + dx * dx;
    }
};

double uniform(std::mt19937_64& rng, double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(rng);
}

}  // namespace

imaging::GrayImage synthetic_slice(int label, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    const int h = static_cast<int>(uniform(rng, 160, 320));
    const int w = static_cast<int>(uniform(rng, 160, 320));

    const Ellipse body{h * uniform(rng, 0.49, 0.51), w * uniform(rng, 0.49, 0.51), h * uniform(rng, 0.42, 0.45),
                       w * uniform(rng, 0.43, 0.46)};
    std::vector<Ellipse> lungs;
    for (int side : {-1, 1}) {
        lungs.push_back({body.cy + h * uniform(rng, -0.015, 0.015), body.cx + side * w * uniform(rng, 0.19, 0.21),
                         h * uniform(rng, 0.28, 0.31), w * uniform(rng, 0.14, 0.16)});
    }

    // Lesions live inside a lung, positioned in lung-relative coordinates.
    // Nodules scatter over the whole lung; consolidations sit in its lower half.
    std::vector<Ellipse> lesions;
    auto place = [&](double rmin, double rmax, bool lower) {
        const Ellipse& lung = lungs[rng() % 2];
        const double pi = std::acos(-1.0);
        const double a = lower ? uniform(rng, 0.15 * pi, 0.85 * pi) : uniform(rng, 0, 2 * pi);
        const double r = std::sqrt(uniform(rng, lower ? 0.1 : 0.0, 0.55));
        const double size = std::min(h, w) * uniform(rng, rmin, rmax);
        lesions.push_back({lung.cy + r * lung.ry * std::sin(a), lung.cx + r * lung.rx * std::cos(a),
                           size * uniform(rng, 0.8, 1.2), size * uniform(rng, 0.8, 1.2)});
    };
    if (label == 1) {
        const int n = 30 + static_cast<int>(rng() % 16);
        for (int i = 0; i < n; ++i) place(0.016, 0.028, false);
    } else if (label == 2) {
        const int n = 2 + static_cast<int>(rng() % 2);
        for (int i = 0; i < n; ++i) place(0.08, 0.12, true);
    }

    const double body_level = uniform(rng, 140, 170);
    const double lung_level = uniform(rng, 25, 45);
    const double lesion_level = uniform(rng, 200, 235);
    std::normal_distribution<double> noise(0.0, 8.0);
    std::uniform_real_distribution<double> unit(0.0, 1.0);

    imaging::GrayImage img(h, w);
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            double v = 5.0;
            if (body.level(y, x) <= 1.0) {
                v = body_level;
                for (const auto& lung : lungs) {
                    if (lung.level(y, x) <= 1.0) v = lung_level + 10.0 * std::sin(0.35 * y) * std::sin(0.29 * x);
                }
                for (const auto& les : lesions) {
                    const double l = les.level(y, x);
                    if (l <= 1.0) v = std::max(v, lesion_level * (1.0 - 0.3 * l));
                }
            }
            v += noise(rng);
            if (unit(rng) < 0.004) v = 255.0;
            img.at(y, x) = imaging::round_to_u8(v);
        }
    }
    return img;
}

std::array<std::size_t, kNumClasses> generate_synthetic_dataset(const std::filesystem::path& dir,
                                                                std::size_t per_class, std::uint64_t seed) {
    std::array<std::size_t, kNumClasses> counts{};
    for (int c = 0; c < kNumClasses; ++c) {
        const std::string name(kClassNames[static_cast<std::size_t>(c)]);
        std::filesystem::create_directories(dir / name);
        for (std::size_t i = 0; i < per_class; ++i) {
            // one independent stream per image
            const std::uint64_t s = seed * 0x9E3779B97F4A7C15ull + static_cast<std::uint64_t>(c) * 1'000'003ull + i;
            char file[64];
            std::snprintf(file, sizeof file, "%s_%04zu.pgm", name.c_str(), i);
            imaging::write_pgm(dir / name / file, synthetic_slice(c, s));
            ++counts[static_cast<std::size_t>(c)];
        }
    }
    return counts;
}

}  // namespace ctsev::pipeline
