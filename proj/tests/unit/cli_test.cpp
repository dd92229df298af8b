#include <fstream>
#include <sstream>

#include <gtest/gtest.h>

#include "cli.hpp"
#include "ctsev/eval/report.hpp"
#include "oracles.hpp"

using namespace ctsev::cli;

namespace {

struct Run {
    int code;
    std::string out;
    std::string err;
};

Run run(std::vector<std::string> args) {
    args.insert(args.begin(), "ctsev");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    const int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::size_t count_lines_starting(const std::string& text, const std::string& prefix) {
    std::size_t n = 0;
    std::istringstream in(text);
    for (std::string line; std::getline(in, line);) n += line.rfind(prefix, 0) == 0;
    return n;
}

// Synthetic data set shared by the tests below; 8 images per class.
class CliData : public ::testing::Test {
protected:
    static void SetUpTestSuite() {
        dir_ = new oracle::TempDir("cli");
        ASSERT_EQ(run({"synth", "--out", (*dir_ / "data").string(), "--per-class", "8", "--seed", "3"}).code, kExitOk);
    }
    static void TearDownTestSuite() {
        delete dir_;
        dir_ = nullptr;
    }
    static std::string path(const std::string& name) { return (*dir_ / name).string(); }

    static inline oracle::TempDir* dir_ = nullptr;
};

}  // namespace

TEST(Cli, UsageErrors) {
    EXPECT_EQ(run({}).code, kExitUsage);
    EXPECT_EQ(run({"crossval", "--bogus"}).code, kExitUsage);
    EXPECT_EQ(run({"crossval", "--folds", "many"}).code, kExitUsage);
    EXPECT_EQ(run({"--help"}).code, kExitOk);
}

TEST(Cli, MissingDataIsADataError) {
    oracle::TempDir dir("cli");
    const auto r = run({"crossval", "--data", (dir / "nowhere").string(), "--extractor", "downsample"});
    EXPECT_EQ(r.code, kExitData);
    EXPECT_NE(r.err.find("nowhere"), std::string::npos);
}

TEST(Cli, UnknownConfigKeyNamesTheLine) {
    oracle::TempDir dir("cli");
    std::ofstream(dir / "c.ini") << "folds = 3\ncolour = blue\n";
    const auto r = run({"crossval", "--config", (dir / "c.ini").string()});
    EXPECT_EQ(r.code, kExitUsage);
    EXPECT_NE(r.err.find("colour"), std::string::npos);
    EXPECT_NE(r.err.find(":2"), std::string::npos);
}

TEST_F(CliData, CrossvalWritesReportAndFlagsBeatConfig) {
    std::ofstream(path("c.ini")) << "# shared settings\nextractor = downsample\nfolds = 4\nclip_factor = 2.0\n";
    const auto r = run({"crossval", "--config", path("c.ini"), "--data", path("data"), "--cache", path("a.fstr"),
                        "--out", path("report"), "--folds", "3", "--workers", "2"});
    ASSERT_EQ(r.code, kExitOk) << r.err;
    const auto folds = slurp(path("report/folds.csv"));
    EXPECT_EQ(count_lines_starting(folds, "0,") + count_lines_starting(folds, "1,") +
                  count_lines_starting(folds, "2,") + count_lines_starting(folds, "3,"),
              3u);
    EXPECT_NE(folds.find("# extractor: downsample grid=16"), std::string::npos);
    EXPECT_NE(folds.find("# command: crossval"), std::string::npos);
    EXPECT_EQ(folds.find("workers"), std::string::npos);
    const auto svg = slurp(path("report/roc.svg"));
    EXPECT_EQ(count_lines_starting(svg, "<polyline"), 3u);

    // Regenerating from predictions reproduces the tables byte for byte.
    ASSERT_EQ(run({"report", "--predictions", path("report/predictions.csv"), "--out", path("again")}).code, kExitOk);
    for (const char* f : {"folds.csv", "classes.csv", "confusion.txt", "roc_severe.csv", "roc.svg"}) {
        EXPECT_EQ(slurp(path(std::string("report/") + f)), slurp(path(std::string("again/") + f))) << f;
    }
}

TEST_F(CliData, TrainThenPredict) {
    const auto t = run({"train", "--data", path("data"), "--extractor", "downsample", "--cache", path("b.fstr"),
                        "--model", path("m.svmm")});
    ASSERT_EQ(t.code, kExitOk) << t.err;
    EXPECT_TRUE(std::filesystem::exists(path("m.svmm")));
    EXPECT_NE(slurp(path("m.svmm.txt")).find("# svm:"), std::string::npos);

    const auto image = path("data/severe/severe_0000.pgm");
    const auto p = run({"predict", "--model", path("m.svmm"), "--extractor", "downsample", image});
    ASSERT_EQ(p.code, kExitOk) << p.err;
    EXPECT_NE(p.out.find("path,label,score_non_covid,score_non_severe,score_severe"), std::string::npos);
    EXPECT_NE(p.out.find(image), std::string::npos);

    std::ofstream(path("junk.pgm")) << "junk";
    const auto bad = run({"predict", "--model", path("m.svmm"), "--extractor", "downsample", path("junk.pgm")});
    EXPECT_EQ(bad.code, kExitData);
    EXPECT_NE(bad.err.find("junk.pgm"), std::string::npos);
}

TEST_F(CliData, UpdateBudgetIsATrainingError) {
    const auto r = run({"train", "--data", path("data"), "--extractor", "downsample", "--cache", path("c.fstr"),
                        "--model", path("x.svmm"), "--max-updates", "1"});
    EXPECT_EQ(r.code, kExitTraining);
    EXPECT_FALSE(std::filesystem::exists(path("x.svmm")));
}
