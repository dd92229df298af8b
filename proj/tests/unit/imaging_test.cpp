#include <cmath>
#include <fstream>
#include <limits>
#include <random>

#include <gtest/gtest.h>

#include "ctsev/error.hpp"
#include "ctsev/imaging/equalize.hpp"
#include "ctsev/imaging/image_io.hpp"
#include "ctsev/imaging/median.hpp"
#include "ctsev/imaging/preprocess.hpp"
#include "ctsev/imaging/resize.hpp"
#include "oracles.hpp"

using namespace ctsev::imaging;

namespace {

GrayImage from_rows(std::vector<std::vector<int>> rows) {
    GrayImage img(static_cast<int>(rows.size()), static_cast<int>(rows[0].size()));
    for (int y = 0; y < img.height(); ++y) {
        for (int x = 0; x < img.width(); ++x) img.at(y, x) = static_cast<std::uint8_t>(rows[y][x]);
    }
    return img;
}

GrayImage ramp256() {
    GrayImage img(256, 256);
    for (int y = 0; y < 256; ++y) {
        for (int x = 0; x < 256; ++x) img.at(y, x) = static_cast<std::uint8_t>(x);
    }
    return img;
}

}  // namespace

TEST(GrayImage, RejectsEmptyDimensions) {
    EXPECT_THROW(GrayImage(0, 3), std::invalid_argument);
    EXPECT_THROW(GrayImage(2, 2, std::vector<std::uint8_t>(3)), std::invalid_argument);
}

TEST(Resize, IdentityWhenSizeUnchanged) {
    std::mt19937_64 rng(1);
    const auto img = oracle::random_image(rng, 17, 23);
    EXPECT_EQ(resize_bilinear(img, 17, 23), img);
}

TEST(Resize, TwoByTwoToOnePixel) {
    EXPECT_EQ(resize_bilinear(from_rows({{0, 100}, {100, 200}}), 1, 1), from_rows({{100}}));
}

TEST(Resize, UpsampleRow) {
    EXPECT_EQ(resize_bilinear(from_rows({{0, 255}}), 1, 4), from_rows({{0, 64, 191, 255}}));
}

TEST(Resize, ZeroTargetThrows) {
    EXPECT_THROW(resize_bilinear(GrayImage(2, 2), 0, 3), std::invalid_argument);
}

TEST(Resize, MatchesOracleOnRandomShapes) {
    std::mt19937_64 rng(7);
    for (int i = 0; i < 40; ++i) {
        const int h = 1 + static_cast<int>(rng() % 40), w = 1 + static_cast<int>(rng() % 40);
        const int oh = 1 + static_cast<int>(rng() % 60), ow = 1 + static_cast<int>(rng() % 60);
        const auto img = oracle::random_image(rng, h, w);
        ASSERT_EQ(resize_bilinear(img, oh, ow), oracle::resize(img, oh, ow)) << h << "x" << w << " -> " << oh << "x" << ow;
    }
}

TEST(Median, ConstantImageUnchanged) {
    const GrayImage img(9, 7, 42);
    EXPECT_EQ(median_filter(img, 2), img);
}

TEST(Median, RemovesSaltPixel) {
    GrayImage img(3, 3, 10);
    img.at(1, 1) = 255;
    EXPECT_EQ(median_filter(img, 1).at(1, 1), 10);
}

TEST(Median, MatchesSortOracle) {
    std::mt19937_64 rng(3);
    for (int r = 1; r <= 3; ++r) {
        for (int i = 0; i < 6; ++i) {
            const auto img = oracle::random_image(rng, 1 + static_cast<int>(rng() % 20), 1 + static_cast<int>(rng() % 20));
            ASSERT_EQ(median_filter(img, r), oracle::median(img, r));
        }
    }
    const auto small = oracle::random_image(rng, 4, 4);
    EXPECT_EQ(median_filter(small, 1), oracle::median(small, 1));
}

TEST(Median, OutputValuesComeFromInput) {
    std::mt19937_64 rng(4);
    GrayImage img(12, 12);
    for (auto& p : img.pixels()) p = static_cast<std::uint8_t>(10 * (rng() % 5));
    const auto out = median_filter(img, 2);
    for (auto p : out.pixels()) EXPECT_EQ(p % 10, 0);
}

TEST(Median, RejectsZeroRadius) { EXPECT_THROW(median_filter(GrayImage(3, 3), 0), std::invalid_argument); }

TEST(EqualizeGlobal, RampIsFixedPoint) {
    const auto ramp = ramp256();
    EXPECT_EQ(equalize_global(ramp), ramp);
}

TEST(EqualizeGlobal, ConstantUnchanged) {
    const GrayImage img(5, 5, 77);
    EXPECT_EQ(equalize_global(img), img);
}

TEST(EqualizeGlobal, TwoValueImage) {
    const auto img = from_rows({{0, 0}, {0, 255}});
    EXPECT_EQ(equalize_global(img), img);
}

TEST(EqualizeGlobal, MatchesOracle) {
    std::mt19937_64 rng(5);
    for (int i = 0; i < 10; ++i) {
        GrayImage img(30, 41);
        const int lo = static_cast<int>(rng() % 100), span = 1 + static_cast<int>(rng() % 120);
        for (auto& p : img.pixels()) p = static_cast<std::uint8_t>(lo + static_cast<int>(rng() % span));
        ASSERT_EQ(equalize_global(img), oracle::equalize_global(img));
    }
}

TEST(ClipAndRedistribute, EqualShareThenRemainderFromZero) {
    Histogram h{};
    h[10] = 600;
    h[20] = 3;
    clip_and_redistribute(h, 100);
    // excess 500 = 256 * 1 + 244
    EXPECT_EQ(h[10], 100u + 1 + 1);
    EXPECT_EQ(h[20], 3u + 1 + 1);
    EXPECT_EQ(h[243], 2u);
    EXPECT_EQ(h[244], 1u);
    std::uint64_t total = 0;
    for (auto c : h) total += c;
    EXPECT_EQ(total, 603u);
}

TEST(ClipLimit, FloorWithFloorOfOne) {
    EXPECT_EQ(clip_limit(2.0, 256), 2u);
    EXPECT_EQ(clip_limit(2.0, 1000), 7u);
    EXPECT_EQ(clip_limit(0.01, 100), 1u);
    EXPECT_EQ(clip_limit(std::numeric_limits<double>::infinity(), 100), std::numeric_limits<std::uint64_t>::max());
}

TEST(Clahe, SingleTileWithoutClippingIsGlobalEqualization) {
    std::mt19937_64 rng(6);
    ClaheParams p;
    p.grid_rows = p.grid_cols = 1;
    p.clip_factor = std::numeric_limits<double>::infinity();
    for (int i = 0; i < 5; ++i) {
        const auto img = oracle::random_image(rng, 33, 20);
        EXPECT_EQ(clahe(img, p), equalize_global(img));
    }
}

TEST(Clahe, ConstantImageUnchanged) {
    for (int v : {0, 13, 255}) {
        const GrayImage img(64, 48, static_cast<std::uint8_t>(v));
        EXPECT_EQ(clahe(img, {}), img);
    }
}

TEST(Clahe, MatchesStepOracle) {
    std::mt19937_64 rng(8);
    for (int i = 0; i < 12; ++i) {
        const int h = 8 + static_cast<int>(rng() % 60), w = 8 + static_cast<int>(rng() % 60);
        ClaheParams p;
        p.grid_rows = 1 + static_cast<int>(rng() % 8);
        p.grid_cols = 1 + static_cast<int>(rng() % 8);
        p.clip_factor = 0.5 + static_cast<double>(rng() % 40) / 10.0;
        auto img = oracle::random_image(rng, h, w);
        for (auto& px : img.pixels()) px = static_cast<std::uint8_t>(px / 3 + 40);
        ASSERT_EQ(clahe(img, p), oracle::clahe(img, p.grid_rows, p.grid_cols, p.clip_factor))
            << h << "x" << w << " grid " << p.grid_rows << "x" << p.grid_cols << " clip " << p.clip_factor;
    }
}

TEST(Clahe, DropsTilesPastTheEdge) {
    // 9 rows in tiles of ceil(9/4) = 3 rows: only three tile rows exist.
    std::mt19937_64 rng(9);
    const auto img = oracle::random_image(rng, 9, 12);
    ClaheParams p;
    p.grid_rows = 4;
    p.grid_cols = 4;
    EXPECT_EQ(clahe(img, p), oracle::clahe(img, 4, 4, 2.0));
}

TEST(Clahe, RejectsImageSmallerThanGrid) { EXPECT_THROW(clahe(GrayImage(4, 4), {}), std::invalid_argument); }

TEST(ClaheParams, Validation) {
    ClaheParams p;
    p.clip_factor = 0;
    EXPECT_THROW(p.validate(), std::invalid_argument);
    p = {};
    p.bins = 128;
    EXPECT_THROW(p.validate(), std::invalid_argument);
    p = {};
    p.grid_cols = 0;
    EXPECT_THROW(p.validate(), std::invalid_argument);
}

TEST(Preprocess, ConstantImageStaysConstant) {
    const auto out = preprocess(GrayImage(512, 512, 90), {});
    EXPECT_EQ(out, GrayImage(224, 224, 90));
}

TEST(Preprocess, ComposesStageOracles) {
    std::mt19937_64 rng(10);
    const auto img = oracle::random_image(rng, 300, 400);
    const auto expected = oracle::clahe(oracle::median(oracle::resize(img, 224, 224), 1), 8, 8, 2.0);
    EXPECT_EQ(preprocess(img, {}), expected);
}

TEST(Preprocess, SkipsClaheWhenDisabled) {
    std::mt19937_64 rng(11);
    const auto img = oracle::random_image(rng, 50, 70);
    PreprocessParams p;
    p.apply_clahe = false;
    EXPECT_EQ(preprocess(img, p), oracle::median(oracle::resize(img, 224, 224), 1));
}

TEST(ImageIo, PgmRoundTripWithComment) {
    oracle::TempDir dir("pgm");
    std::mt19937_64 rng(12);
    const auto img = oracle::random_image(rng, 13, 29);
    write_pgm(dir / "a.pgm", img, "seed: 1\nnote: x");
    EXPECT_EQ(read_image(dir / "a.pgm"), img);
}

TEST(ImageIo, PgmMaxvalRescaled) {
    const std::vector<std::uint8_t> data = {'P', '5', '\n', '2', ' ', '1', '\n', '1', '5', '\n', 0x0f, 0x00};
    const auto img = decode_image(data);
    EXPECT_EQ(img.at(0, 0), 255);
    EXPECT_EQ(img.at(0, 1), 0);
}

TEST(ImageIo, RejectsGarbage) {
    const std::vector<std::uint8_t> junk = {'h', 'e', 'l', 'l', 'o'};
    EXPECT_THROW(decode_image(junk), ctsev::DataError);
    const std::vector<std::uint8_t> truncated = {'P', '5', '\n', '4', ' ', '4', '\n', '2', '5', '5', '\n', 1, 2};
    EXPECT_THROW(decode_image(truncated), ctsev::DataError);
}

TEST(ImageIo, ReadsPngAsLuminance) {
    const std::filesystem::path file = CTSEV_TEST_DATA "/red_blue.png";
    const auto img = read_image(file);
    ASSERT_EQ(img.height(), 1);
    ASSERT_EQ(img.width(), 2);
    EXPECT_EQ(img.at(0, 0), luminance(255, 0, 0));
    EXPECT_EQ(img.at(0, 1), luminance(0, 0, 255));
}

TEST(ImageIo, ReadsGrayAndColorJpeg) {
    const auto gray = read_image(CTSEV_TEST_DATA "/gray200.jpg");
    ASSERT_EQ(gray.height(), 8);
    for (auto p : gray.pixels()) EXPECT_EQ(p, 200);

    // 16x8 flat (40, 160, 90), lossy: allow a couple of levels of codec error.
    const auto color = read_image(CTSEV_TEST_DATA "/color.jpg");
    ASSERT_EQ(color.height(), 8);
    ASSERT_EQ(color.width(), 16);
    for (auto p : color.pixels()) EXPECT_NEAR(p, luminance(40, 160, 90), 2);
}

TEST(ImageIo, SniffsContainers) {
    const std::uint8_t png[] = {0x89, 'P', 'N', 'G', 0x0d, 0x0a, 0x1a, 0x0a};
    const std::uint8_t jpg[] = {0xff, 0xd8, 0xff, 0xe0};
    const std::uint8_t pgm[] = {'P', '5', '\n'};
    const std::uint8_t ascii_pgm[] = {'P', '2', '\n'};
    EXPECT_EQ(sniff_format(png), ImageFormat::png);
    EXPECT_EQ(sniff_format(jpg), ImageFormat::jpeg);
    EXPECT_EQ(sniff_format(pgm), ImageFormat::pgm);
    EXPECT_EQ(sniff_format(ascii_pgm), ImageFormat::unknown);
}

TEST(ImageIo, LuminanceWeights) {
    EXPECT_EQ(luminance(255, 255, 255), 255);
    EXPECT_EQ(luminance(255, 0, 0), 76);   // 76.245
    EXPECT_EQ(luminance(0, 255, 0), 150);  // 149.685
    EXPECT_EQ(luminance(0, 0, 255), 29);   // 29.07
}
