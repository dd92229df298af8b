#include "ctsev/pipeline/manifest.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <set>

#include "ctsev/error.hpp"
#include "ctsev/imaging/image_io.hpp"

namespace ctsev::pipeline {
namespace {

namespace fs = std::filesystem;

std::string trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return std::string(s.substr(b, e - b + 1));
}

// Empty when the file looks like a decodable image.
std::string probe(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) return "cannot open";
    std::uint8_t head[8] = {};
    in.read(reinterpret_cast<char*>(head), sizeof head);
    if (imaging::sniff_format({head, static_cast<std::size_t>(in.gcount())}) == imaging::ImageFormat::unknown) {
        return "not a supported image";
    }
    return {};
}

void add(DatasetManifest& m, std::string id, fs::path path, int label) {
    if (auto reason = probe(path); !reason.empty()) {
        m.skipped.push_back({std::move(path), std::move(reason)});
        return;
    }
    m.entries.push_back({std::move(id), std::move(path), label});
}

void ingest_directory(DatasetManifest& m, const fs::path& root) {
    for (int c = 0; c < kNumClasses; ++c) {
        const fs::path dir = root / std::string(kClassNames[static_cast<std::size_t>(c)]);
        std::vector<fs::path> files;
        if (fs::is_directory(dir)) {
            for (const auto& e : fs::directory_iterator(dir)) {
                if (e.is_regular_file() && e.path().filename().string().front() != '.') files.push_back(e.path());
            }
        }
        std::sort(files.begin(), files.end());
        for (auto& f : files) {
            add(m, std::string(kClassNames[static_cast<std::size_t>(c)]) + "/" + f.filename().string(), f, c);
        }
    }
}

void ingest_csv(DatasetManifest& m, const fs::path& csv) {
    std::ifstream in(csv);
    if (!in) throw DataError(csv.string() + ": cannot open");
    const fs::path base = csv.parent_path();
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::string where = csv.string() + ":" + std::to_string(lineno);
        const std::string t = trim(line);
        if (t.empty() || t.front() == '#') continue;
        const auto comma = t.rfind(',');
        if (comma == std::string::npos) throw DataError(where + ": expected path,label");
        const std::string path = trim(std::string_view(t).substr(0, comma));
        const std::string token = trim(std::string_view(t).substr(comma + 1));
        if (lineno == 1 && path == "path" && token == "label") continue;
        if (path.empty()) throw DataError(where + ": empty path");
        const auto label = parse_label(token);
        if (!label) throw DataError(where + ": bad label '" + token + "'");
        fs::path p(path);
        add(m, fs::path(path).generic_string(), p.is_absolute() ? p : base / p, *label);
    }
}

}  // namespace

std::optional<int> parse_label(std::string_view token) {
    for (int c = 0; c < kNumClasses; ++c) {
        if (token == kClassNames[static_cast<std::size_t>(c)]) return c;
    }
    if (token.size() == 1 && token[0] >= '0' && token[0] < '0' + kNumClasses) return token[0] - '0';
    return std::nullopt;
}

std::array<std::size_t, kNumClasses> DatasetManifest::counts() const {
    std::array<std::size_t, kNumClasses> n{};
    for (const auto& e : entries) ++n[static_cast<std::size_t>(e.label)];
    return n;
}

DatasetManifest ingest(const fs::path& source) {
    DatasetManifest m;
    m.source = source.string();
    if (fs::is_directory(source)) {
        ingest_directory(m, source);
    } else if (fs::is_regular_file(source)) {
        ingest_csv(m, source);
    } else {
        throw DataError(source.string() + ": no such dataset directory or manifest");
    }

    std::set<std::string> ids;
    for (const auto& e : m.entries) {
        if (!ids.insert(e.id).second) throw DataError(m.source + ": duplicate entry " + e.id);
    }
    const auto n = m.counts();
    for (int c = 0; c < kNumClasses; ++c) {
        if (n[static_cast<std::size_t>(c)] == 0) {
            m.warnings.push_back("class " + std::string(kClassNames[static_cast<std::size_t>(c)]) + " has no images");
        }
    }
    if (m.entries.empty()) throw DataError(m.source + ": no images found");
    return m;
}

std::string format_class_counts(const std::array<std::size_t, kNumClasses>& counts) {
    std::string out;
    char buf[96];
    std::size_t total = 0;
    std::snprintf(buf, sizeof buf, "%-12s %8s\n", "class", "images");
    out += buf;
    for (int c = 0; c < kNumClasses; ++c) {
        std::snprintf(buf, sizeof buf, "%-12s %8zu\n", std::string(kClassNames[static_cast<std::size_t>(c)]).c_str(),
                      counts[static_cast<std::size_t>(c)]);
        out += buf;
        total += counts[static_cast<std::size_t>(c)];
    }
    std::snprintf(buf, sizeof buf, "%-12s %8zu\n", "total", total);
    out += buf;
    return out;
}

}  // namespace ctsev::pipeline
