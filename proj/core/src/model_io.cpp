#include "spa/model_io.hpp"

#include <cstdint>
#include <filesystem>
#include <fstream>

#include <json.hpp>

#include "spa/errors.hpp"
#include "spa/report_io.hpp"

namespace spa {

using nlohmann::json;

std::uint64_t fnv1a64_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw IoError("cannot open '" + path + "' for checksum");
    }
    std::uint64_t hash = 0xcbf29ce484222325ULL;
    char buf[4096];
    while (in.read(buf, sizeof buf) || in.gcount() > 0) {
        const std::streamsize got = in.gcount();
        for (std::streamsize i = 0; i < got; ++i) {
            hash ^= static_cast<unsigned char>(buf[i]);
            hash *= 0x100000001b3ULL;
        }
        if (!in) break;
    }
    return hash;
}

namespace {

std::string hex64(std::uint64_t value) {
    char buf[24];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(value));
    return buf;
}

std::uint64_t parse_hex64(const std::string& text) {
    return std::strtoull(text.c_str(), nullptr, 16);
}

} // namespace

void save_model(const SpaModel& model, const std::string& manifest_path,
                const std::string& train_csv_path) {
    write_file_atomic(train_csv_path, dataset_csv(model.train(), LabelColumn::first));

    json j;
    j["schema_version"] = kModelSchemaVersion;
    j["kind"] = "spa-model";
    j["label_column"] = "first";
    // store the CSV path relative to the manifest when they share a directory
    std::filesystem::path manifest_dir =
        std::filesystem::path(manifest_path).parent_path();
    std::filesystem::path csv(train_csv_path);
    std::error_code ec;
    const auto rel = std::filesystem::relative(csv, manifest_dir, ec);
    j["train_csv"] = (!ec && !rel.empty()) ? rel.string() : csv.string();
    j["checksum_fnv1a64"] = hex64(fnv1a64_file(train_csv_path));
    j["config"] = {{"k", model.config().k},
                   {"p", model.config().p},
                   {"k_clamped", model.config().k_clamped}};
    json label_map = json::array();
    for (std::size_t c = 0; c < model.class_labels().size(); ++c) {
        json entry = {{"internal", c + 1}, {"label", model.class_labels()[c]}};
        const auto& names = model.train().label_names;
        if (auto it = names.find(model.class_labels()[c]); it != names.end()) {
            entry["name"] = it->second;
        }
        label_map.push_back(entry);
    }
    j["label_map"] = label_map;

    write_file_atomic(manifest_path, j.dump(2) + "\n");
}

SpaModel load_model(const std::string& manifest_path) {
    std::ifstream in(manifest_path);
    if (!in) {
        throw IoError("cannot open model manifest '" + manifest_path + "'");
    }
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw ParseError("model manifest '" + manifest_path + "': " + e.what());
    }
    try {
        if (j.at("schema_version").get<int>() != kModelSchemaVersion) {
            throw ParseError("model manifest '" + manifest_path +
                             "': unsupported schema version");
        }
        std::filesystem::path csv = j.at("train_csv").get<std::string>();
        if (csv.is_relative()) {
            csv = std::filesystem::path(manifest_path).parent_path() / csv;
        }
        const auto want = parse_hex64(j.at("checksum_fnv1a64").get<std::string>());
        const auto got = fnv1a64_file(csv.string());
        if (want != got) {
            throw ParseError("training data checksum mismatch for '" + csv.string() +
                             "': manifest has " + hex64(want) + ", file has " +
                             hex64(got));
        }
        const auto column = j.at("label_column").get<std::string>() == "last"
                                ? LabelColumn::last
                                : LabelColumn::first;
        auto train = load_csv(csv.string(), column);

        SpaConfig config;
        config.k = j.at("config").at("k").get<int>();
        config.p = j.at("config").at("p").get<int>();
        auto model = SpaModel::fit(std::move(train), config);

        // the stored label map must match what the data reproduces
        const auto& label_map = j.at("label_map");
        if (label_map.size() != model.class_labels().size()) {
            throw ParseError("model manifest label map does not match the training data");
        }
        for (std::size_t c = 0; c < model.class_labels().size(); ++c) {
            if (label_map[c].at("label").get<int>() != model.class_labels()[c]) {
                throw ParseError("model manifest label map does not match the training data");
            }
        }
        return model;
    } catch (const json::exception& e) {
        throw ParseError("model manifest '" + manifest_path + "': " + e.what());
    }
}

} // namespace spa
