#include <fstream>
#include <random>
#include <sstream>

#include <gtest/gtest.h>

#include "ctsev/error.hpp"
#include "ctsev/imaging/image_io.hpp"
#include "ctsev/pipeline/extract.hpp"
#include "ctsev/pipeline/extractor.hpp"
#include "ctsev/pipeline/feature_store.hpp"
#include "ctsev/pipeline/manifest.hpp"
#include "ctsev/pipeline/synthetic.hpp"
#include "oracles.hpp"

using namespace ctsev::pipeline;
using ctsev::imaging::GrayImage;

namespace {

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_text(const std::filesystem::path& p, const std::string& text) {
    std::filesystem::create_directories(p.parent_path());
    std::ofstream(p, std::ios::binary) << text;
}

// Three random images per class under <root>/<class>/.
void small_dataset(const std::filesystem::path& root, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    for (auto name : kClassNames) {
        for (int i = 0; i < 3; ++i) {
            const auto path = root / std::string(name) / (std::string(name) + "_" + std::to_string(i) + ".pgm");
            std::filesystem::create_directories(path.parent_path());
            ctsev::imaging::write_pgm(path, oracle::random_image(rng, 40 + i, 50));
        }
    }
}

ctsev::imaging::PreprocessParams small_params() {
    ctsev::imaging::PreprocessParams p;
    p.target_h = p.target_w = 16;
    p.clahe.grid_rows = p.clahe.grid_cols = 2;
    return p;
}

// Dyadic weights on integer inputs: float and double agree exactly.
struct TinyNet {
    ctsev::cnn::WeightStore store;
    std::vector<oracle::ScalarLayer> layers;
};

TinyNet tiny_net(std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    auto dyadic = [&](std::size_t n) {
        std::vector<float> v(n);
        for (auto& x : v) x = static_cast<float>(static_cast<int>(rng() % 9) - 4) / 8.0f;
        return v;
    };
    TinyNet t;
    const auto k1 = dyadic(2 * 1 * 9), b1 = dyadic(2), k2 = dyadic(3 * 2 * 9), b2 = dyadic(3);
    t.store = ctsev::cnn::WeightStore({{"block1_conv1_w", {2, 1, 3, 3}, k1}, {"block1_conv1_b", {2}, b1},
                                       {"block1_conv2_w", {3, 2, 3, 3}, k2}, {"block1_conv2_b", {3}, b2}});
    t.layers = {{2, 1, k1, b1, false}, {3, 2, k2, b2, true}};
    return t;
}

}  // namespace

TEST(Manifest, LabelsByNameOrIndex) {
    EXPECT_EQ(parse_label("severe"), 2);
    EXPECT_EQ(parse_label("0"), 0);
    EXPECT_FALSE(parse_label("3").has_value());
    EXPECT_FALSE(parse_label("covid").has_value());
}

TEST(Manifest, DirectoryLayoutSkipsNonImages) {
    oracle::TempDir dir("manifest");
    small_dataset(dir.path(), 1);
    write_text(dir / "severe/notes.txt", "not an image");
    const auto m = ingest(dir.path());
    EXPECT_EQ(m.counts(), (std::array<std::size_t, 3>{3, 3, 3}));
    ASSERT_EQ(m.skipped.size(), 1u);
    EXPECT_EQ(m.skipped[0].path.filename(), "notes.txt");
    EXPECT_TRUE(m.warnings.empty());
    EXPECT_NE(format_class_counts(m.counts()).find("total"), std::string::npos);
}

TEST(Manifest, EmptyClassWarnsAndEmptyDatasetFails) {
    oracle::TempDir dir("manifest");
    small_dataset(dir.path(), 2);
    std::filesystem::remove_all(dir / "non_severe");
    const auto m = ingest(dir.path());
    EXPECT_EQ(m.entries.size(), 6u);
    ASSERT_EQ(m.warnings.size(), 1u);
    EXPECT_NE(m.warnings[0].find("non_severe"), std::string::npos);

    oracle::TempDir empty("manifest");
    EXPECT_THROW(ingest(empty.path()), ctsev::DataError);
    EXPECT_THROW(ingest(empty / "missing"), ctsev::DataError);
}

TEST(Manifest, CsvWithHeaderAndRelativePaths) {
    oracle::TempDir dir("manifest");
    small_dataset(dir.path(), 3);
    write_text(dir / "list.csv",
               "path,label\n# comment\nsevere/severe_0.pgm,severe\nnon_covid/non_covid_1.pgm,0\n"
               "non_severe/non_severe_2.pgm,non_severe\n");
    const auto m = ingest(dir / "list.csv");
    ASSERT_EQ(m.entries.size(), 3u);
    EXPECT_EQ(m.entries[0].label, 2);
    EXPECT_TRUE(std::filesystem::exists(m.entries[0].path));
    EXPECT_EQ(m.counts(), (std::array<std::size_t, 3>{1, 1, 1}));
}

TEST(Manifest, CsvBadLabelNamesTheLine) {
    oracle::TempDir dir("manifest");
    small_dataset(dir.path(), 4);
    write_text(dir / "list.csv", "severe/severe_0.pgm,severe\nsevere/severe_1.pgm,mild\n");
    try {
        ingest(dir / "list.csv");
        FAIL() << "expected DataError";
    } catch (const ctsev::DataError& e) {
        const std::string what = e.what();
        EXPECT_NE(what.find(":2:"), std::string::npos) << what;
        EXPECT_NE(what.find("mild"), std::string::npos) << what;
    }
    write_text(dir / "dup.csv", "severe/severe_0.pgm,severe\nsevere/severe_0.pgm,severe\n");
    EXPECT_THROW(ingest(dir / "dup.csv"), ctsev::DataError);
}

TEST(FeatureStore, RoundTripAndTruncation) {
    oracle::TempDir dir("fstr");
    FeatureStore s{3, 0x1234, {{"a/1.pgm", 2, {1.0f, -2.0f, 0.5f}}, {"b", 0, {0.0f, 0.0f, 7.0f}}}};
    write_feature_store(dir / "f.fstr", s);
    const auto back = read_feature_store(dir / "f.fstr");
    EXPECT_EQ(back.dim, 3u);
    EXPECT_EQ(back.fingerprint, 0x1234u);
    EXPECT_EQ(back.rows, s.rows);
    const auto head = peek_feature_store(dir / "f.fstr");
    ASSERT_TRUE(head.has_value());
    EXPECT_EQ(head->rows, 2u);
    EXPECT_FALSE(peek_feature_store(dir / "none.fstr").has_value());

    const auto bytes = slurp(dir / "f.fstr");
    write_text(dir / "short.fstr", bytes.substr(0, bytes.size() - 2));
    EXPECT_THROW(read_feature_store(dir / "short.fstr"), ctsev::TruncatedError);
    write_text(dir / "long.fstr", bytes + "x");
    EXPECT_THROW(read_feature_store(dir / "long.fstr"), ctsev::FormatError);
}

TEST(FeatureStore, UncommittedWriterLeavesNothing) {
    oracle::TempDir dir("fstr");
    {
        FeatureStoreWriter w(dir / "f.fstr", 1, 9);
        w.append({"x", 1, {3.0f}});
        w.flush();
        EXPECT_TRUE(std::filesystem::exists(dir / "f.fstr.partial"));
        EXPECT_EQ(peek_feature_store(dir / "f.fstr.partial")->rows, 1u);
    }
    EXPECT_FALSE(std::filesystem::exists(dir / "f.fstr.partial"));
    EXPECT_FALSE(std::filesystem::exists(dir / "f.fstr"));
}

TEST(FeatureStore, Fnv1aKnownValues) {
    EXPECT_EQ(fnv1a(""), 0xcbf29ce484222325ull);
    EXPECT_EQ(fnv1a("a"), 0xaf63dc4c8601ec8cull);
}

TEST(Extractor, DownsampleAveragesCells) {
    GrayImage img(4, 4);
    for (int y = 0; y < 4; ++y) {
        for (int x = 0; x < 4; ++x) img.at(y, x) = static_cast<std::uint8_t>(x < 2 ? 0 : 255);
    }
    img.at(3, 3) = 51;
    const auto ex = make_downsample_extractor(2, 4, 4);
    EXPECT_EQ(ex->feature_length(), 4u);
    const auto f = ex->extract(img);
    EXPECT_FLOAT_EQ(f[0], 0.0f);
    EXPECT_FLOAT_EQ(f[1], 1.0f);
    EXPECT_FLOAT_EQ(f[3], (3 * 255 + 51) / 4.0f / 255.0f);
    EXPECT_EQ(ex->describe(), "downsample grid=2");
    EXPECT_EQ(parse_extractor_kind("convnet"), ExtractorKind::convnet);
    EXPECT_THROW(parse_extractor_kind("resnet"), std::invalid_argument);
}

TEST(Extract, TinyConvNetRowsMatchOracle) {
    oracle::TempDir dir("extract");
    small_dataset(dir / "data", 5);
    const auto manifest = ingest(dir / "data");
    const auto params = small_params();
    const auto net = tiny_net(6);
    const auto ex = make_convnet_extractor(net.store, 16, 16);
    EXPECT_EQ(ex->feature_length(), 3u * 8 * 8);

    const auto r = extract_all(manifest, params, *ex, dir / "f.fstr");
    EXPECT_FALSE(r.cache_hit);
    EXPECT_EQ(r.computed, 9u);
    ASSERT_EQ(r.store.rows.size(), 9u);
    EXPECT_EQ(r.store.fingerprint, pipeline_fingerprint(params, *ex));
    for (std::size_t i = 0; i < 9; ++i) {
        const auto& e = manifest.entries[i];
        EXPECT_EQ(r.store.rows[i].id, e.id);
        EXPECT_EQ(r.store.rows[i].label, e.label);
        const auto pre = oracle::clahe(oracle::median(oracle::resize(ctsev::imaging::read_image(e.path), 16, 16), 1),
                                       2, 2, 2.0);
        ctsev::cnn::Tensor3 input(1, 16, 16);
        for (int y = 0; y < 16; ++y) {
            for (int x = 0; x < 16; ++x) input.at(0, y, x) = static_cast<float>(pre.at(y, x)) - 128.0f;
        }
        const auto want = oracle::scalar_forward(input, net.layers);
        ASSERT_EQ(r.store.rows[i].features.size(), want.size());
        for (std::size_t k = 0; k < want.size(); ++k) ASSERT_EQ(r.store.rows[i].features[k], want[k]) << e.id;
    }
}

TEST(Extract, CacheHitAndInvalidation) {
    oracle::TempDir dir("extract");
    small_dataset(dir / "data", 7);
    const auto manifest = ingest(dir / "data");
    auto params = small_params();
    const auto ex = make_downsample_extractor(4, 16, 16);

    const auto first = extract_all(manifest, params, *ex, dir / "f.fstr");
    const auto bytes = slurp(dir / "f.fstr");
    const auto second = extract_all(manifest, params, *ex, dir / "f.fstr", {.workers = 3});
    EXPECT_TRUE(second.cache_hit);
    EXPECT_EQ(second.computed, 0u);
    EXPECT_EQ(second.store.rows, first.store.rows);
    EXPECT_EQ(slurp(dir / "f.fstr"), bytes);

    params.clahe.clip_factor = 3.0;
    const auto third = extract_all(manifest, params, *ex, dir / "f.fstr");
    EXPECT_FALSE(third.cache_hit);
    EXPECT_EQ(third.computed, 9u);
    EXPECT_NE(third.store.fingerprint, first.store.fingerprint);

    const auto other = make_downsample_extractor(2, 16, 16);
    EXPECT_FALSE(extract_all(manifest, params, *other, dir / "f.fstr").cache_hit);
}

TEST(Extract, WorkerCountDoesNotChangeBytes) {
    oracle::TempDir dir("extract");
    small_dataset(dir / "data", 8);
    const auto manifest = ingest(dir / "data");
    const auto ex = make_downsample_extractor(4, 16, 16);
    extract_all(manifest, small_params(), *ex, dir / "one.fstr", {.workers = 1});
    extract_all(manifest, small_params(), *ex, dir / "four.fstr", {.workers = 4, .batch = 2});
    EXPECT_EQ(slurp(dir / "one.fstr"), slurp(dir / "four.fstr"));
}

TEST(Extract, FailureBudget) {
    oracle::TempDir dir("extract");
    small_dataset(dir / "data", 9);
    const std::string broken = "P5\n30 30\n255\nshort";
    write_text(dir / "data/severe/broken_a.pgm", broken);
    const auto ex = make_downsample_extractor(4, 16, 16);

    const auto r = extract_all(ingest(dir / "data"), small_params(), *ex, dir / "f.fstr");
    ASSERT_EQ(r.failures.size(), 1u);
    EXPECT_EQ(r.failures[0].id, "severe/broken_a.pgm");
    EXPECT_EQ(r.store.rows.size(), 9u);

    write_text(dir / "data/severe/broken_b.pgm", broken);
    std::filesystem::remove(dir / "f.fstr");
    EXPECT_THROW(extract_all(ingest(dir / "data"), small_params(), *ex, dir / "f.fstr"), ctsev::DataError);
    EXPECT_FALSE(std::filesystem::exists(dir / "f.fstr"));
    EXPECT_FALSE(std::filesystem::exists(dir / "f.fstr.partial"));
}

TEST(Synthetic, DeterministicAndLabelled) {
    EXPECT_EQ(synthetic_slice(1, 99), synthetic_slice(1, 99));
    EXPECT_NE(synthetic_slice(1, 99), synthetic_slice(1, 100));
    oracle::TempDir dir("synth");
    const auto counts = generate_synthetic_dataset(dir.path(), 2, 5);
    EXPECT_EQ(counts, (std::array<std::size_t, 3>{2, 2, 2}));
    EXPECT_EQ(ingest(dir.path()).counts(), counts);
}
