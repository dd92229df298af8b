#include "ctsev/eval/report.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "ctsev/error.hpp"

namespace ctsev::eval {
namespace {

std::string fixed(double v, int decimals) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", decimals, v);
    return buf;
}

std::string percent(const Metric& m) { return m ? fixed(*m * 100.0, 4) : "undefined"; }

std::string exact(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string header(const ReproBlock& repro) {
    std::string s;
    for (const auto& [k, v] : repro) s += "# " + k + ": " + v + "\n";
    return s;
}

void write_file(const std::filesystem::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError(path.string() + ": cannot open for writing");
    out << content;
    if (!out) throw DataError(path.string() + ": write failed");
}

std::vector<std::string> split(const std::string& line, char sep) {
    std::vector<std::string> parts;
    std::string cur;
    std::istringstream in(line);
    while (std::getline(in, cur, sep)) parts.push_back(cur);
    if (!line.empty() && line.back() == sep) parts.emplace_back();
    return parts;
}

}  // namespace

std::string format_confusion(const ConfusionMatrix& cm, const std::vector<std::string>& names) {
    std::size_t width = 9;  // "truth\pred"
    for (const auto& n : names) width = std::max(width, n.size());
    for (int i = 0; i < cm.classes(); ++i) {
        for (int j = 0; j < cm.classes(); ++j) width = std::max(width, std::to_string(cm(i, j)).size());
    }
    auto pad = [&](const std::string& s) { return std::string(width - s.size() + 2, ' ') + s; };
    std::string out = pad("truth\\pred");
    for (const auto& n : names) out += pad(n);
    out += "\n";
    for (int i = 0; i < cm.classes(); ++i) {
        out += pad(names[static_cast<std::size_t>(i)]);
        for (int j = 0; j < cm.classes(); ++j) out += pad(std::to_string(cm(i, j)));
        out += "\n";
    }
    return out;
}

std::string render_roc_svg(const CvReport& report, const std::vector<std::string>& names) {
    static const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"};
    constexpr double left = 60, top = 30, side = 400;
    auto px = [&](double fpr) { return fixed(left + fpr * side, 2); };
    auto py = [&](double tpr) { return fixed(top + (1.0 - tpr) * side, 2); };

    std::ostringstream svg;
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"640\" height=\"500\" viewBox=\"0 0 640 500\">\n";
    svg << "<rect x=\"0\" y=\"0\" width=\"640\" height=\"500\" fill=\"white\"/>\n";
    svg << "<rect x=\"" << left << "\" y=\"" << top << "\" width=\"" << side << "\" height=\"" << side
        << "\" fill=\"none\" stroke=\"black\"/>\n";
    svg << "<line x1=\"" << px(0) << "\" y1=\"" << py(0) << "\" x2=\"" << px(1) << "\" y2=\"" << py(1)
        << "\" stroke=\"#999999\" stroke-dasharray=\"4 4\"/>\n";
    for (int t = 0; t <= 4; ++t) {
        const double v = t / 4.0;
        svg << "<text x=\"" << px(v) << "\" y=\"" << fixed(top + side + 18, 2) << "\" font-size=\"11\" text-anchor=\"middle\">"
            << fixed(v, 2) << "</text>\n";
        svg << "<text x=\"" << fixed(left - 8, 2) << "\" y=\"" << py(v) << "\" font-size=\"11\" text-anchor=\"end\">"
            << fixed(v, 2) << "</text>\n";
    }
    svg << "<text x=\"" << fixed(left + side / 2, 2) << "\" y=\"" << fixed(top + side + 40, 2)
        << "\" font-size=\"13\" text-anchor=\"middle\">False positive rate</text>\n";
    svg << "<text x=\"15\" y=\"" << fixed(top + side / 2, 2) << "\" font-size=\"13\" text-anchor=\"middle\" transform=\"rotate(-90 15 "
        << fixed(top + side / 2, 2) << ")\">True positive rate</text>\n";

    for (std::size_t c = 0; c < report.classes.size(); ++c) {
        const auto& roc = report.classes[c].roc;
        if (!roc) continue;
        const char* color = colors[c % std::size(colors)];
        svg << "<polyline class=\"roc\" fill=\"none\" stroke=\"" << color << "\" stroke-width=\"2\" points=\"";
        for (std::size_t i = 0; i < roc->points.size(); ++i) {
            svg << (i ? " " : "") << px(roc->points[i].fpr) << "," << py(roc->points[i].tpr);
        }
        svg << "\"/>\n";
        const double ly = top + 20 + 20 * static_cast<double>(c);
        svg << "<line x1=\"470\" y1=\"" << fixed(ly, 2) << "\" x2=\"490\" y2=\"" << fixed(ly, 2) << "\" stroke=\"" << color
            << "\" stroke-width=\"2\"/>\n";
        svg << "<text x=\"495\" y=\"" << fixed(ly + 4, 2) << "\" font-size=\"11\">" << names[c] << " (AUC "
            << fixed(roc->auc, 4) << ")</text>\n";
    }
    if (report.macro_auc) {
        svg << "<text x=\"470\" y=\"" << fixed(top + 20 + 20 * static_cast<double>(report.classes.size()) + 4, 2)
            << "\" font-size=\"11\">macro AUC " << fixed(*report.macro_auc, 4) << "</text>\n";
    }
    svg << "</svg>\n";
    return svg.str();
}

void write_report(const CvReport& report, const std::filesystem::path& dir, const ReportContext& ctx) {
    const auto& names = ctx.class_names;
    if (names.size() != report.classes.size()) throw std::invalid_argument("write_report: class name count mismatch");
    std::filesystem::create_directories(dir);
    const std::string head = header(ctx.repro);

    {
        std::string s = head + "fold,support,accuracy,precision,recall,f1\n";
        for (const auto& f : report.folds) {
            s += std::to_string(f.fold + 1) + "," + std::to_string(f.support) + "," + percent(f.accuracy) + "," +
                 percent(f.precision) + "," + percent(f.recall) + "," + percent(f.f1) + "\n";
        }
        const auto& a = report.average;
        s += "average," + fixed(a.support, 1) + "," + percent(a.accuracy) + "," + percent(a.precision) + "," +
             percent(a.recall) + "," + percent(a.f1) + "\n";
        write_file(dir / "folds.csv", s);
    }
    {
        // accuracy_recall: per-class "accuracy" as tabulated in the literature, equal to recall
        std::string s = head + "class,support,accuracy_recall,precision,recall,f1,specificity,ovr_accuracy,auc\n";
        std::size_t support = 0;
        for (std::size_t c = 0; c < report.classes.size(); ++c) {
            const auto& cr = report.classes[c];
            const auto& m = cr.metrics;
            support += cr.support;
            s += names[c] + "," + std::to_string(cr.support) + "," + percent(m.sensitivity) + "," + percent(m.precision) +
                 "," + percent(m.sensitivity) + "," + percent(m.f1) + "," + percent(m.specificity) + "," +
                 percent(m.accuracy) + "," + (cr.roc ? fixed(cr.roc->auc, 6) : std::string("undefined")) + "\n";
        }
        const auto& m = report.macro;
        s += "macro," + std::to_string(support) + "," + percent(m.sensitivity) + "," + percent(m.precision) + "," +
             percent(m.sensitivity) + "," + percent(m.f1) + "," + percent(m.specificity) + "," + percent(m.accuracy) +
             "," + (report.macro_auc ? fixed(*report.macro_auc, 6) : std::string("undefined")) + "\n";
        s += "# pooled accuracy: " + percent(report.pooled_accuracy) + "\n";
        write_file(dir / "classes.csv", s);
    }
    write_file(dir / "confusion.txt", head + format_confusion(report.pooled, names));
    {
        std::string s = head + "truth";
        for (const auto& n : names) s += "," + n;
        s += "\n";
        for (int i = 0; i < report.pooled.classes(); ++i) {
            s += names[static_cast<std::size_t>(i)];
            for (int j = 0; j < report.pooled.classes(); ++j) s += "," + std::to_string(report.pooled(i, j));
            s += "\n";
        }
        write_file(dir / "confusion.csv", s);
    }
    for (std::size_t c = 0; c < report.classes.size(); ++c) {
        const auto& roc = report.classes[c].roc;
        if (!roc) continue;
        std::string s = head + "threshold,fpr,tpr\n";
        for (std::size_t i = 0; i < roc->points.size(); ++i) {
            s += (i == 0 ? std::string("inf") : exact(roc->thresholds[i - 1])) + "," + exact(roc->points[i].fpr) + "," +
                 exact(roc->points[i].tpr) + "\n";
        }
        write_file(dir / ("roc_" + names[c] + ".csv"), s);
    }
    write_file(dir / "roc.svg", render_roc_svg(report, names));
    {
        std::string s = head + "# folds: " + std::to_string(report.folds.size()) + "\nfold,id,truth,predicted";
        for (const auto& n : names) s += ",score_" + n;
        s += "\n";
        for (const auto& p : report.predictions) {
            s += std::to_string(p.fold + 1) + "," + p.id + "," + std::to_string(p.truth) + "," + std::to_string(p.predicted);
            for (double v : p.scores) s += "," + exact(v);
            s += "\n";
        }
        write_file(dir / "predictions.csv", s);
    }
}

SavedPredictions read_predictions(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw DataError(path.string() + ": cannot open");
    SavedPredictions saved;
    std::string line;
    std::size_t lineno = 0;
    bool have_header = false;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        const std::string where = path.string() + ":" + std::to_string(lineno);
        if (line[0] == '#') {
            const auto colon = line.find(": ");
            if (colon == std::string::npos || line.size() < 2) continue;
            const std::string key = line.substr(2, colon - 2);
            const std::string value = line.substr(colon + 2);
            if (key == "folds") saved.folds = std::stoi(value);
            else saved.repro.emplace_back(key, value);
            continue;
        }
        const auto cells = split(line, ',');
        if (!have_header) {
            if (cells.size() < 5 || cells[0] != "fold") throw DataError(where + ": expected predictions header");
            for (std::size_t i = 4; i < cells.size(); ++i) {
                if (cells[i].rfind("score_", 0) != 0) throw DataError(where + ": expected score_<class> column");
                saved.class_names.push_back(cells[i].substr(6));
            }
            have_header = true;
            continue;
        }
        if (cells.size() != 4 + saved.class_names.size()) throw DataError(where + ": wrong column count");
        try {
            OutOfFold p;
            p.fold = std::stoi(cells[0]) - 1;
            p.id = cells[1];
            p.truth = std::stoi(cells[2]);
            p.predicted = std::stoi(cells[3]);
            for (std::size_t i = 4; i < cells.size(); ++i) p.scores.push_back(std::stod(cells[i]));
            saved.predictions.push_back(std::move(p));
        } catch (const std::logic_error&) {
            throw DataError(where + ": malformed number");
        }
    }
    if (!have_header) throw DataError(path.string() + ": no predictions header");
    if (saved.folds <= 0) {
        for (const auto& p : saved.predictions) saved.folds = std::max(saved.folds, p.fold + 1);
    }
    return saved;
}

}  // namespace ctsev::eval
