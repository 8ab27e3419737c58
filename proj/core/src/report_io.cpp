#include "spa/report_io.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>

#include <json.hpp>

#include "spa/errors.hpp"

namespace spa {

using nlohmann::json;

std::string format_double(double value) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", value);
    return buf;
}

void write_file_atomic(const std::string& path, const std::string& content) {
    const std::filesystem::path target(path);
    const std::filesystem::path tmp = target.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) {
            throw IoError("cannot open '" + tmp.string() + "' for writing");
        }
        out << content;
        if (!out) {
            throw IoError("failed writing '" + tmp.string() + "'");
        }
    }
    std::error_code ec;
    std::filesystem::rename(tmp, target, ec);
    if (ec) {
        std::filesystem::remove(tmp, ec);
        throw IoError("cannot move temporary file onto '" + path + "'");
    }
}

namespace {

json report_body(const EvalReport& report) {
    json j;
    j["schema_version"] = kReportSchemaVersion;
    j["accuracy"] = report.accuracy;
    j["n_train"] = report.n_train;
    j["n_test"] = report.n_test;
    j["k"] = report.config_used.k;
    j["p"] = report.config_used.p;
    j["labels"] = report.class_labels;
    std::vector<std::vector<int>> confusion;
    for (Index i = 0; i < report.confusion.rows(); ++i) {
        std::vector<int> row;
        for (Index jx = 0; jx < report.confusion.cols(); ++jx) {
            row.push_back(report.confusion(i, jx));
        }
        confusion.push_back(std::move(row));
    }
    j["confusion"] = confusion;
    return j;
}

} // namespace

std::string eval_report_json(const EvalReport& report) {
    return report_body(report).dump(2) + "\n";
}

std::string eval_report_csv(const EvalReport& report) {
    std::string out = "key,value\n";
    out += "schema_version," + std::to_string(kReportSchemaVersion) + "\n";
    out += "accuracy," + format_double(report.accuracy) + "\n";
    out += "n_train," + std::to_string(report.n_train) + "\n";
    out += "n_test," + std::to_string(report.n_test) + "\n";
    out += "k," + std::to_string(report.config_used.k) + "\n";
    out += "p," + std::to_string(report.config_used.p) + "\n";
    for (Index i = 0; i < report.confusion.rows(); ++i) {
        for (Index j = 0; j < report.confusion.cols(); ++j) {
            out += "confusion_" +
                   std::to_string(report.class_labels[static_cast<std::size_t>(i)]) + "_" +
                   std::to_string(report.class_labels[static_cast<std::size_t>(j)]) + "," +
                   std::to_string(report.confusion(i, j)) + "\n";
        }
    }
    return out;
}

std::string learning_curve_csv(const std::vector<LearningCurveRow>& rows) {
    std::string out = "fraction,n_train,mean_accuracy,std_accuracy\n";
    for (const auto& row : rows) {
        out += format_double(row.fraction) + "," + std::to_string(row.n_train) + "," +
               format_double(row.mean_accuracy) + "," + format_double(row.std_accuracy) +
               "\n";
    }
    return out;
}

std::string learning_curve_json(const std::vector<LearningCurveRow>& rows) {
    json j;
    j["schema_version"] = kReportSchemaVersion;
    j["rows"] = json::array();
    for (const auto& row : rows) {
        j["rows"].push_back({{"fraction", row.fraction},
                             {"n_train", row.n_train},
                             {"mean_accuracy", row.mean_accuracy},
                             {"std_accuracy", row.std_accuracy}});
    }
    return j.dump(2) + "\n";
}

std::string sweep_csv(const std::vector<SweepRow>& rows) {
    std::string out = "sigma,empirical_error,bound,bound_trivial\n";
    for (const auto& row : rows) {
        out += format_double(row.sigma) + "," + format_double(row.empirical_error) + "," +
               format_double(row.bound) + "," + (row.bound_trivial ? "1" : "0") + "\n";
    }
    return out;
}

std::string sweep_json(const std::vector<SweepRow>& rows) {
    json j;
    j["schema_version"] = kReportSchemaVersion;
    j["rows"] = json::array();
    for (const auto& row : rows) {
        j["rows"].push_back({{"sigma", row.sigma},
                             {"empirical_error", row.empirical_error},
                             {"bound", row.bound},
                             {"bound_trivial", row.bound_trivial}});
    }
    return j.dump(2) + "\n";
}

std::string predictions_csv(const std::vector<Prediction>& predictions,
                            const std::vector<int>& class_labels,
                            const std::map<int, std::string>& label_names) {
    auto label_text = [&](int label) {
        if (auto it = label_names.find(label); it != label_names.end()) return it->second;
        return std::to_string(label);
    };
    std::string out = "label";
    for (int label : class_labels) out += ",distance_" + label_text(label);
    out += "\n";
    for (const auto& pred : predictions) {
        out += label_text(pred.label);
        for (Index c = 0; c < pred.distances.size(); ++c) {
            out += "," + format_double(pred.distances[c]);
        }
        out += "\n";
    }
    return out;
}

} // namespace spa
