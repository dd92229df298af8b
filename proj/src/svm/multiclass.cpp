#include "ctsev/svm/multiclass.hpp"

#include <fstream>
#include <string>

#include "ctsev/binary_io.hpp"
#include "ctsev/error.hpp"
#include "ctsev/parallel.hpp"

namespace ctsev::svm {
namespace {

constexpr std::uint32_t kModelVersion = 1;

}  // namespace

int argmax(std::span<const double> scores) {
    int best = 0;
    for (std::size_t i = 1; i < scores.size(); ++i) {
        if (scores[i] > scores[static_cast<std::size_t>(best)]) best = static_cast<int>(i);
    }
    return best;
}

MulticlassSvm train_multiclass(const Matrix& x, std::span<const int> labels, int num_classes,
                               const MulticlassParams& params) {
    if (labels.size() != x.rows()) throw std::invalid_argument("train_multiclass: label count does not match rows");
    if (num_classes < 2) throw std::invalid_argument("train_multiclass: need at least two classes");
    std::vector<std::size_t> counts(static_cast<std::size_t>(num_classes), 0);
    for (int l : labels) {
        if (l < 0 || l >= num_classes) throw std::invalid_argument("train_multiclass: label out of range");
        ++counts[static_cast<std::size_t>(l)];
    }
    for (int c = 0; c < num_classes; ++c) {
        if (counts[static_cast<std::size_t>(c)] < 2) {
            throw std::invalid_argument("train_multiclass: class " + std::to_string(c) + " has " +
                                        std::to_string(counts[static_cast<std::size_t>(c)]) +
                                        " examples, need at least 2");
        }
    }

    MulticlassSvm model;
    model.standardizer = Standardizer::fit(x);
    const Matrix z = model.standardizer.transform(x);
    SmoParams smo = params.smo;
    smo.kernel = smo.kernel.resolved(z.cols());
    const Gram gram(z, smo.kernel, params.workers);

    model.models.resize(static_cast<std::size_t>(num_classes));
    parallel_for(static_cast<std::size_t>(num_classes), params.workers, [&](std::size_t c) {
        std::vector<int> y(labels.size());
        for (std::size_t i = 0; i < y.size(); ++i) y[i] = labels[i] == static_cast<int>(c) ? 1 : -1;
        try {
            model.models[c] = smo_solve(gram, z, y, smo).model;
        } catch (const SmoNotConverged& e) {
            throw SmoNotConverged("class " + std::to_string(c) + ": " + e.what(), e.best());
        }
    });
    return model;
}

Prediction predict(const MulticlassSvm& model, std::span<const float> x) {
    if (x.size() != model.dim()) {
        throw std::invalid_argument("predict: feature length " + std::to_string(x.size()) + " does not match model dim " +
                                    std::to_string(model.dim()));
    }
    const std::vector<double> z = model.standardizer.apply(x);
    Prediction p;
    p.scores.reserve(model.models.size());
    for (const auto& m : model.models) p.scores.push_back(m.decision_value(std::span<const double>(z)));
    p.label = argmax(p.scores);
    return p;
}

void save_model(const std::filesystem::path& path, const MulticlassSvm& model) {
    if (model.models.empty()) throw std::invalid_argument("save_model: empty model");
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError(path.string() + ": cannot open for writing");
    io::BinaryWriter w(out);
    const BinarySvm& first = model.models.front();
    w.magic("SVMM");
    w.u32(kModelVersion);
    w.u8(static_cast<std::uint8_t>(first.kernel().kind));
    w.f64(first.kernel().gamma);
    w.f64(first.penalty());
    w.u8(static_cast<std::uint8_t>(model.models.size()));
    w.u32(static_cast<std::uint32_t>(model.dim()));
    w.f64s(model.standardizer.mean);
    w.f64s(model.standardizer.stddev);
    for (const auto& m : model.models) {
        w.u32(static_cast<std::uint32_t>(m.support_vectors().rows()));
        w.u32(static_cast<std::uint32_t>(model.dim()));
        w.f64s(m.dual_coeffs());
        w.f64(m.bias());
        w.f32s(m.support_vectors().values());
    }
}

MulticlassSvm load_model(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError(path.string() + ": cannot open");
    io::BinaryReader r(in, path.string());
    r.expect_magic("SVMM");
    const std::uint32_t version = r.u32();
    if (version != kModelVersion) throw FormatError(path.string() + ": unsupported SVMM version " + std::to_string(version));
    const std::uint8_t kind = r.u8();
    if (kind > static_cast<std::uint8_t>(KernelKind::rbf)) throw FormatError(path.string() + ": unknown kernel tag");
    const KernelSpec kernel{static_cast<KernelKind>(kind), r.f64()};
    const double c = r.f64();
    const std::uint8_t classes = r.u8();
    const std::uint32_t dim = r.u32();
    if (dim > (1u << 26)) throw FormatError(path.string() + ": implausible feature dimension");

    MulticlassSvm model;
    model.standardizer.mean.resize(dim);
    model.standardizer.stddev.resize(dim);
    r.f64s(model.standardizer.mean);
    r.f64s(model.standardizer.stddev);
    for (std::uint8_t k = 0; k < classes; ++k) {
        const std::uint32_t count = r.u32();
        const std::uint32_t sv_dim = r.u32();
        if (sv_dim != dim) throw FormatError(path.string() + ": support vector dim does not match standardizer");
        if (static_cast<std::uint64_t>(count) * sv_dim > (std::uint64_t{1} << 32)) {
            throw FormatError(path.string() + ": implausible support vector count");
        }
        std::vector<double> coeffs(count);
        r.f64s(coeffs);
        const double bias = r.f64();
        std::vector<float> svs(static_cast<std::size_t>(count) * sv_dim);
        r.f32s(svs);
        model.models.emplace_back(kernel, c, Matrix(count, sv_dim, std::move(svs)), std::move(coeffs), bias);
    }
    if (!r.at_end()) throw FormatError(path.string() + ": trailing bytes after last class");
    return model;
}

}  // namespace ctsev::svm
