#include "cli.hpp"

#include <bit>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <CLI11.hpp>

#include "ctsev/cnn/network.hpp"
#include "ctsev/cnn/weights.hpp"
#include "ctsev/error.hpp"
#include "ctsev/eval/cross_validation.hpp"
#include "ctsev/eval/report.hpp"
#include "ctsev/imaging/image_io.hpp"
#include "ctsev/imaging/preprocess.hpp"
#include "ctsev/parallel.hpp"
#include "ctsev/pipeline/extract.hpp"
#include "ctsev/pipeline/extractor.hpp"
#include "ctsev/pipeline/manifest.hpp"
#include "ctsev/pipeline/synthetic.hpp"
#include "ctsev/svm/multiclass.hpp"

namespace ctsev::cli {
namespace {

namespace fs = std::filesystem;

constexpr const char* kVersion = "1.0.0";

class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct Options {
    std::string command;

    std::string data;
    std::string cache = "features.fstr";
    std::string out;
    std::string model;
    std::string predictions;
    std::vector<std::string> images;
    std::string image;
    std::string input_dump;

    int median_radius = 1;
    std::string clahe_grid = "8x8";
    double clip_factor = 2.0;
    bool no_clahe = false;
    bool no_preprocess = false;

    std::string extractor = "vgg16";
    std::string weights = "vgg16.vggw";
    std::string head = "flatten";
    int grid = 16;

    double c = 1.0;
    std::string kernel = "linear";
    double gamma = 0.0;
    double tol = 1e-3;
    int max_passes = 10;
    std::size_t max_updates = 1'000'000;

    int folds = 10;
    std::uint64_t seed = 42;
    std::size_t per_class = 200;
    std::size_t workers = 0;
};

std::string fmt(const char* f, double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, f, v);
    return buf;
}

std::string hex64(std::uint64_t v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
    return buf;
}

std::size_t workers(const Options& o) { return o.workers ? o.workers : default_workers(); }

imaging::PreprocessParams preprocess_params(const Options& o) {
    imaging::PreprocessParams p;
    p.median_radius = o.median_radius;
    p.apply_clahe = !o.no_clahe;
    p.clahe.clip_factor = o.clip_factor;
    int rows = 0, cols = 0;
    char tail = 0;
    if (std::sscanf(o.clahe_grid.c_str(), "%dx%d%c", &rows, &cols, &tail) != 2) {
        throw UsageError("--clahe-grid expects ROWSxCOLS, got '" + o.clahe_grid + "'");
    }
    p.clahe.grid_rows = rows;
    p.clahe.grid_cols = cols;
    try {
        p.validate();
    } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
    }
    return p;
}

pipeline::ExtractorSpec extractor_spec(const Options& o) {
    pipeline::ExtractorSpec s;
    try {
        s.kind = pipeline::parse_extractor_kind(o.extractor);
    } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
    }
    s.weights = o.weights;
    s.head = o.head == "gap" ? cnn::FeatureHead::global_average : cnn::FeatureHead::flatten;
    s.grid = o.grid;
    if (s.kind == pipeline::ExtractorKind::downsample && (o.grid < 1 || o.grid > 224)) {
        throw UsageError("--grid must lie in [1, 224]");
    }
    return s;
}

svm::SmoParams smo_params(const Options& o) {
    svm::SmoParams p;
    if (!(o.c > 0.0) || !std::isfinite(o.c)) throw UsageError("--C must be a positive number");
    if (!(o.tol > 0.0)) throw UsageError("--tol must be positive");
    if (o.max_passes < 1) throw UsageError("--max-passes must be at least 1");
    p.c = o.c;
    p.kernel.kind = o.kernel == "rbf" ? svm::KernelKind::rbf : svm::KernelKind::linear;
    p.kernel.gamma = o.gamma;
    p.tol = o.tol;
    p.max_passes = o.max_passes;
    p.max_updates = o.max_updates;
    return p;
}

std::string describe(const svm::SmoParams& p) {
    std::string s = "C=" + fmt("%.17g", p.c) + " kernel=" + (p.kernel.kind == svm::KernelKind::rbf ? "rbf" : "linear");
    if (p.kernel.kind == svm::KernelKind::rbf) s += " gamma=" + (p.kernel.gamma > 0 ? fmt("%.17g", p.kernel.gamma) : "1/dim");
    s += " tol=" + fmt("%.17g", p.tol) + " max_passes=" + std::to_string(p.max_passes);
    return s;
}

eval::ReproBlock base_repro(const Options& o) { return {{"ctsev", kVersion}, {"command", o.command}}; }

std::string render(const eval::ReproBlock& repro) {
    std::string s;
    for (const auto& [k, v] : repro) s += "# " + k + ": " + v + "\n";
    return s;
}

std::vector<std::string> class_names() { return {pipeline::kClassNames.begin(), pipeline::kClassNames.end()}; }

// Image size the preprocessing stage produces.
constexpr int kSize = cnn::kInputSize;

struct Features {
    pipeline::DatasetManifest manifest;
    pipeline::ExtractResult result;
    std::string extractor;
    eval::ReproBlock repro;
};

Features load_features(const Options& o, std::ostream& err) {
    if (o.data.empty()) throw UsageError("--data is required");
    const auto pp = preprocess_params(o);
    const auto spec = extractor_spec(o);

    Features f;
    f.manifest = pipeline::ingest(o.data);
    err << pipeline::format_class_counts(f.manifest.counts());
    for (const auto& w : f.manifest.warnings) err << "warning: " << w << "\n";
    for (const auto& s : f.manifest.skipped) err << "skipped: " << s.path.string() << ": " << s.reason << "\n";
    if (!f.manifest.skipped.empty()) err << "skipped " << f.manifest.skipped.size() << " unreadable files\n";

    const auto extractor = pipeline::make_extractor(spec, kSize, kSize);
    f.extractor = extractor->describe();
    pipeline::ExtractOptions eo;
    eo.workers = workers(o);
    f.result = pipeline::extract_all(f.manifest, pp, *extractor, o.cache, eo);
    for (const auto& fail : f.result.failures) err << "failed: " << fail.id << ": " << fail.reason << "\n";
    err << (f.result.cache_hit ? "feature cache hit: " : "extracted: ") << f.result.store.rows.size() << " rows, dim "
        << f.result.store.dim << ", " << f.result.failures.size() << " failures\n";

    f.repro = base_repro(o);
    f.repro.emplace_back("data", f.manifest.source);
    const auto n = f.manifest.counts();
    f.repro.emplace_back("images", std::to_string(n[0]) + "/" + std::to_string(n[1]) + "/" + std::to_string(n[2]));
    f.repro.emplace_back("preprocess", pipeline::describe(pp));
    f.repro.emplace_back("extractor", f.extractor);
    f.repro.emplace_back("fingerprint", hex64(f.result.store.fingerprint));
    return f;
}

void write_text(const fs::path& path, const std::string& text) {
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError(path.string() + ": cannot open for writing");
    out << text;
    if (!out) throw DataError(path.string() + ": write failed");
}

void write_f32(const fs::path& path, std::span<const float> values) {
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError(path.string() + ": cannot open for writing");
    for (float v : values) {
        const auto bits = std::bit_cast<std::uint32_t>(v);
        const char b[4] = {static_cast<char>(bits), static_cast<char>(bits >> 8), static_cast<char>(bits >> 16),
                           static_cast<char>(bits >> 24)};
        out.write(b, 4);
    }
    if (!out) throw DataError(path.string() + ": write failed");
}

int cmd_preprocess(const Options& o, std::ostream& out) {
    const auto pp = preprocess_params(o);
    if (o.out.empty()) throw UsageError("--out is required");
    auto repro = base_repro(o);
    repro.emplace_back("preprocess", pipeline::describe(pp));
    std::string comment;
    for (const auto& [k, v] : repro) comment += k + ": " + v + "\n";
    fs::create_directories(o.out);
    for (const auto& path : o.images) {
        const auto img = imaging::preprocess(imaging::read_image(path), pp);
        const fs::path dest = fs::path(o.out) / (fs::path(path).stem().string() + ".pgm");
        imaging::write_pgm(dest, img, comment);
        out << dest.string() << "\n";
    }
    return kExitOk;
}

int cmd_extract(const Options& o, std::ostream& out, std::ostream& err) {
    const auto f = load_features(o, err);
    out << render(f.repro);
    out << "cache: " << o.cache << "\n";
    out << "rows: " << f.result.store.rows.size() << "\n";
    out << "dim: " << f.result.store.dim << "\n";
    out << "failures: " << f.result.failures.size() << "\n";
    out << "cache_hit: " << (f.result.cache_hit ? "yes" : "no") << "\n";
    return kExitOk;
}

svm::Matrix feature_matrix(const pipeline::FeatureStore& store, std::vector<int>& labels, std::vector<std::string>* ids) {
    svm::Matrix x;
    for (const auto& row : store.rows) {
        if (row.label < 0 || row.label >= pipeline::kNumClasses) throw DataError("feature row " + row.id + ": bad label");
        x.append_row(row.features);
        labels.push_back(row.label);
        if (ids) ids->push_back(row.id);
    }
    return x;
}

int cmd_train(const Options& o, std::ostream& out, std::ostream& err) {
    if (o.model.empty()) throw UsageError("--model is required");
    const auto smo = smo_params(o);
    auto f = load_features(o, err);
    std::vector<int> labels;
    const auto x = feature_matrix(f.result.store, labels, nullptr);
    svm::MulticlassParams mp;
    mp.smo = smo;
    mp.workers = workers(o);
    svm::MulticlassSvm model;
    try {
        model = svm::train_multiclass(x, labels, pipeline::kNumClasses, mp);
    } catch (const std::invalid_argument& e) {
        throw DataError(e.what());
    }
    svm::save_model(o.model, model);
    f.repro.emplace_back("svm", describe(smo));
    f.repro.emplace_back("model", o.model);
    write_text(o.model + ".txt", render(f.repro));
    out << render(f.repro);
    for (std::size_t c = 0; c < model.models.size(); ++c) {
        out << pipeline::kClassNames[c] << ": " << model.models[c].support_vectors().rows() << " support vectors\n";
    }
    return kExitOk;
}

int cmd_crossval(const Options& o, std::ostream& out, std::ostream& err) {
    const auto smo = smo_params(o);
    if (o.folds < 2) throw UsageError("--folds must be at least 2");
    const fs::path dir = o.out.empty() ? fs::path("report") : fs::path(o.out);
    auto f = load_features(o, err);

    eval::CvDataset data;
    data.features = feature_matrix(f.result.store, data.labels, &data.ids);
    eval::CvParams cp;
    cp.folds = o.folds;
    cp.seed = o.seed;
    cp.num_classes = pipeline::kNumClasses;
    cp.smo = smo;
    cp.workers = workers(o);
    eval::CvReport report;
    try {
        report = eval::run_cv(data, cp);
    } catch (const std::invalid_argument& e) {
        throw DataError(e.what());
    }

    f.repro.emplace_back("svm", describe(smo));
    f.repro.emplace_back("seed", std::to_string(o.seed));
    eval::write_report(report, dir, {class_names(), f.repro});
    out << render(f.repro);
    out << eval::format_confusion(report.pooled, class_names());
    out << "pooled accuracy: " << fmt("%.4f", 100.0 * report.pooled_accuracy) << "%\n";
    out << "report: " << dir.string() << "\n";
    return kExitOk;
}

int cmd_predict(const Options& o, std::ostream& out) {
    if (o.model.empty()) throw UsageError("--model is required");
    const auto pp = preprocess_params(o);
    const auto model = svm::load_model(o.model);
    const auto extractor = pipeline::make_extractor(extractor_spec(o), kSize, kSize);
    if (extractor->feature_length() != model.dim()) {
        throw DataError(o.model + ": model expects " + std::to_string(model.dim()) + " features, extractor gives " +
                        std::to_string(extractor->feature_length()));
    }
    auto repro = base_repro(o);
    repro.emplace_back("model", o.model);
    repro.emplace_back("preprocess", pipeline::describe(pp));
    repro.emplace_back("extractor", extractor->describe());
    std::string text = render(repro) + "path,label";
    for (const auto& n : pipeline::kClassNames) text += ",score_" + std::string(n);
    text += "\n";
    for (const auto& path : o.images) {
        const auto img = imaging::preprocess(imaging::read_image(path), pp);
        const auto p = svm::predict(model, extractor->extract(img, workers(o)));
        text += path + "," + std::string(pipeline::kClassNames[static_cast<std::size_t>(p.label)]);
        for (double s : p.scores) text += "," + fmt("%.9g", s);
        text += "\n";
    }
    out << text;
    return kExitOk;
}

int cmd_report(const Options& o, std::ostream& out) {
    if (o.predictions.empty()) throw UsageError("--predictions is required");
    const auto saved = eval::read_predictions(o.predictions);
    const auto names = class_names();
    if (saved.class_names != names) throw DataError(o.predictions + ": unexpected class columns");
    for (const auto& p : saved.predictions) {
        if (p.truth < 0 || p.truth >= pipeline::kNumClasses || p.predicted < 0 || p.predicted >= pipeline::kNumClasses ||
            p.fold < 0 || p.fold >= saved.folds) {
            throw DataError(o.predictions + ": prediction " + p.id + " out of range");
        }
    }
    const fs::path dir = o.out.empty() ? fs::path(o.predictions).parent_path() : fs::path(o.out);
    const auto report = eval::summarize(saved.predictions, pipeline::kNumClasses, saved.folds);
    eval::write_report(report, dir.empty() ? fs::path(".") : dir, {names, saved.repro});
    out << eval::format_confusion(report.pooled, names);
    for (std::size_t c = 0; c < report.classes.size(); ++c) {
        const auto& roc = report.classes[c].roc;
        out << names[c] << " AUC: " << (roc ? fmt("%.6f", roc->auc) : std::string("undefined")) << "\n";
    }
    return kExitOk;
}

int cmd_synth(const Options& o, std::ostream& out) {
    if (o.out.empty()) throw UsageError("--out is required");
    if (o.per_class < 1) throw UsageError("--per-class must be at least 1");
    const auto counts = pipeline::generate_synthetic_dataset(o.out, o.per_class, o.seed);
    out << "# ctsev: " << kVersion << "\n# command: synth\n# seed: " << o.seed << "\n";
    out << pipeline::format_class_counts(counts);
    return kExitOk;
}

int cmd_embed(const Options& o, std::ostream& out) {
    if (o.image.empty() || o.out.empty()) throw UsageError("--image and --out are required");
    auto img = imaging::read_image(o.image);
    if (!o.no_preprocess) img = imaging::preprocess(img, preprocess_params(o));
    if (img.height() != kSize || img.width() != kSize) {
        throw DataError(o.image + ": expected a 224x224 image with --no-preprocess");
    }
    const auto spec = extractor_spec(o);
    const auto input = cnn::to_input_tensor(img);
    if (!o.input_dump.empty()) write_f32(o.input_dump, input.values());
    const auto extractor = pipeline::make_extractor(spec, kSize, kSize);
    const auto features = extractor->extract(img, workers(o));
    write_f32(o.out, features);
    out << "# ctsev: " << kVersion << "\n# command: embed\n# extractor: " << extractor->describe() << "\n";
    out << "features: " << features.size() << "\n";
    return kExitOk;
}

void add_preprocess_options(CLI::App* sub, Options& o) {
    sub->add_option("--median-radius", o.median_radius, "Median filter radius; window is (2r+1)x(2r+1)")->capture_default_str();
    sub->add_option("--clahe-grid", o.clahe_grid, "CLAHE tile grid, ROWSxCOLS")->capture_default_str();
    sub->add_option("--clip-factor", o.clip_factor, "CLAHE clip limit as a multiple of the mean bin count")
        ->capture_default_str();
    sub->add_flag("--no-clahe", o.no_clahe, "Skip CLAHE");
}

void add_extractor_options(CLI::App* sub, Options& o) {
    sub->add_option("--extractor", o.extractor, "vgg16, convnet or downsample")
        ->check(CLI::IsMember({"vgg16", "convnet", "downsample"}))
        ->capture_default_str();
    sub->add_option("--weights", o.weights, "VGGW weight file (vgg16, convnet)")->capture_default_str();
    sub->add_option("--head", o.head, "vgg16 feature head: flatten or gap")
        ->check(CLI::IsMember({"flatten", "gap"}))
        ->capture_default_str();
    sub->add_option("--grid", o.grid, "downsample extractor grid size")->capture_default_str();
}

void add_svm_options(CLI::App* sub, Options& o) {
    sub->add_option("--C", o.c, "SVM penalty")->capture_default_str();
    sub->add_option("--kernel", o.kernel, "linear or rbf")
        ->check(CLI::IsMember({"linear", "rbf"}))
        ->capture_default_str();
    sub->add_option("--gamma", o.gamma, "rbf width; 0 means 1/dim")->capture_default_str();
    sub->add_option("--tol", o.tol, "SMO KKT tolerance")->capture_default_str();
    sub->add_option("--max-passes", o.max_passes, "SMO quiet sweeps before stopping")->capture_default_str();
    sub->add_option("--max-updates", o.max_updates, "SMO pair update cap")->capture_default_str();
}

void add_data_options(CLI::App* sub, Options& o) {
    sub->add_option("--data", o.data, "Dataset directory or path,label CSV");
    sub->add_option("--cache", o.cache, "Feature cache file")->capture_default_str();
}

void add_common(CLI::App* sub, Options& o) {
    sub->add_option("--config", "key = value file; keys are long flag names, flags take precedence");
    sub->add_option("--workers", o.workers, "Worker threads (0: CTSEV_WORKERS or all cores)")->capture_default_str();
}

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    return s.substr(b, s.find_last_not_of(" \t\r") - b + 1);
}

// Turns the config file lines into flag arguments placed before the user's
// own, so later command-line values win.
std::vector<std::string> config_arguments(const CLI::App& app, const CLI::App& sub, const std::string& path) {
    std::ifstream in(path);
    if (!in) throw UsageError(path + ": cannot open config file");
    std::vector<std::string> args;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::string t = trim(line);
        if (t.empty() || t[0] == '#') continue;
        const std::string where = path + ":" + std::to_string(lineno);
        const auto eq = t.find('=');
        if (eq == std::string::npos) throw UsageError(where + ": expected key = value");
        std::string key = trim(t.substr(0, eq));
        std::string value = trim(t.substr(eq + 1));
        if (value.size() >= 2 && value.front() == '"' && value.back() == '"') value = value.substr(1, value.size() - 2);
        for (auto& ch : key) {
            if (ch == '_') ch = '-';
        }
        if (key == "config") throw UsageError(where + ": config files cannot nest");
        const CLI::Option* opt = sub.get_option_no_throw("--" + key);
        if (!opt) {
            bool known = false;
            for (const auto* other : app.get_subcommands({})) known = known || other->get_option_no_throw("--" + key);
            if (!known) throw UsageError(where + ": unknown key '" + key + "'");
            continue;
        }
        if (opt->get_expected_max() == 0) {
            if (value == "true" || value == "1" || value == "yes") args.push_back("--" + key);
            else if (!(value == "false" || value == "0" || value == "no")) throw UsageError(where + ": expected a boolean");
        } else {
            args.push_back("--" + key);
            args.push_back(value);
        }
    }
    return args;
}

std::optional<std::string> find_config(const std::vector<std::string>& args) {
    for (std::size_t i = 0; i < args.size(); ++i) {
        if (args[i] == "--config" && i + 1 < args.size()) return args[i + 1];
        if (args[i].rfind("--config=", 0) == 0) return args[i].substr(9);
    }
    return std::nullopt;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    Options o;
    CLI::App app{"Chest-CT severity classification: CLAHE preprocessing, VGG-16 features, one-vs-rest SVM",
                 "ctsev"};
    app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
    app.require_subcommand(1);
    app.set_version_flag("--version", kVersion);

    auto* preprocess = app.add_subcommand("preprocess", "Resize, median-filter and CLAHE images into PGM files");
    add_preprocess_options(preprocess, o);
    preprocess->add_option("--out", o.out, "Output directory")->required();
    preprocess->add_option("images", o.images, "Input images")->required()->multi_option_policy(CLI::MultiOptionPolicy::TakeAll);

    auto* extract = app.add_subcommand("extract", "Preprocess and embed a dataset into the feature cache");
    add_data_options(extract, o);
    add_preprocess_options(extract, o);
    add_extractor_options(extract, o);

    auto* train = app.add_subcommand("train", "Train the one-vs-rest SVM on the whole dataset and save an SVMM model");
    add_data_options(train, o);
    add_preprocess_options(train, o);
    add_extractor_options(train, o);
    add_svm_options(train, o);
    train->add_option("--model", o.model, "Output model file");

    auto* crossval = app.add_subcommand("crossval", "Stratified k-fold cross-validation with CSV/SVG reports");
    add_data_options(crossval, o);
    add_preprocess_options(crossval, o);
    add_extractor_options(crossval, o);
    add_svm_options(crossval, o);
    crossval->add_option("--folds", o.folds, "Number of folds")->capture_default_str();
    crossval->add_option("--seed", o.seed, "Fold assignment seed")->capture_default_str();
    crossval->add_option("--out", o.out, "Report directory (default: report)");

    auto* predict = app.add_subcommand("predict", "Classify images with a saved model");
    add_preprocess_options(predict, o);
    add_extractor_options(predict, o);
    predict->add_option("--model", o.model, "SVMM model file");
    predict->add_option("images", o.images, "Images to classify")->required()->multi_option_policy(CLI::MultiOptionPolicy::TakeAll);

    auto* report = app.add_subcommand("report", "Rebuild report files from a predictions.csv");
    report->add_option("--predictions", o.predictions, "predictions.csv written by crossval");
    report->add_option("--out", o.out, "Report directory (default: alongside the predictions)");

    auto* synth = app.add_subcommand("synth", "Generate a synthetic three-class CT-like PGM dataset");
    synth->add_option("--out", o.out, "Dataset directory");
    synth->add_option("--per-class", o.per_class, "Images per class")->capture_default_str();
    synth->add_option("--seed", o.seed, "Generator seed")->capture_default_str();

    auto* embed = app.add_subcommand("embed", "Dump the feature vector of one image as raw little-endian f32");
    add_preprocess_options(embed, o);
    add_extractor_options(embed, o);
    embed->add_option("--image", o.image, "Input image");
    embed->add_option("--out", o.out, "Feature dump path");
    embed->add_option("--input-dump", o.input_dump, "Also dump the (3,224,224) input tensor here");
    embed->add_flag("--no-preprocess", o.no_preprocess, "Feed the image as-is (must be 224x224)");

    for (auto* sub : app.get_subcommands({})) add_common(sub, o);

    std::vector<std::string> args(argv + 1, argv + argc);
    try {
        if (!args.empty()) {
            const CLI::App* sub = app.get_subcommand_no_throw(args[0]);
            if (sub) {
                if (const auto path = find_config(args)) {
                    auto extra = config_arguments(app, *sub, *path);
                    args.insert(args.begin() + 1, extra.begin(), extra.end());
                }
            }
        }
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitUsage;
    } catch (const UsageError& e) {
        err << "error: " << e.what() << "\n";
        return kExitUsage;
    }

    for (auto* sub : app.get_subcommands()) o.command = sub->get_name();
    try {
        if (o.command == "preprocess") return cmd_preprocess(o, out);
        if (o.command == "extract") return cmd_extract(o, out, err);
        if (o.command == "train") return cmd_train(o, out, err);
        if (o.command == "crossval") return cmd_crossval(o, out, err);
        if (o.command == "predict") return cmd_predict(o, out);
        if (o.command == "report") return cmd_report(o, out);
        if (o.command == "synth") return cmd_synth(o, out);
        if (o.command == "embed") return cmd_embed(o, out);
        err << "error: unknown command\n";
        return kExitUsage;
    } catch (const UsageError& e) {
        err << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const TrainingError& e) {
        err << "training failed: " << e.what() << "\n";
        return kExitTraining;
    } catch (const DataError& e) {
        err << "data error: " << e.what() << "\n";
        return kExitData;
    } catch (const fs::filesystem_error& e) {
        err << "data error: " << e.what() << "\n";
        return kExitData;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kExitData;
    }
}

}  // namespace ctsev::cli
