#include "spa/dataset.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "spa/errors.hpp"
#include "spa/rng.hpp"

namespace spa {

std::vector<int> LabeledDataset::distinct_labels() const {
    std::set<int> seen(labels.begin(), labels.end());
    return {seen.begin(), seen.end()};
}

Index LabeledDataset::class_count(int label) const {
    return static_cast<Index>(std::count(labels.begin(), labels.end(), label));
}

Index LabeledDataset::min_class_count() const {
    Index best = size();
    for (int label : distinct_labels()) best = std::min(best, class_count(label));
    return best;
}

void LabeledDataset::validate() const {
    if (features.rows() < 1 || features.cols() < 1) {
        throw DimensionError("dataset must have at least one row and one column");
    }
    if (static_cast<Index>(labels.size()) != features.rows()) {
        throw DimensionError("label count does not match feature rows");
    }
    if (!features.allFinite()) {
        throw NumericError("dataset contains non-finite feature values");
    }
}

namespace {

std::vector<std::string_view> split_line(std::string_view line) {
    std::vector<std::string_view> cells;
    std::size_t start = 0;
    while (true) {
        const std::size_t comma = line.find(',', start);
        if (comma == std::string_view::npos) {
            cells.push_back(line.substr(start));
            break;
        }
        cells.push_back(line.substr(start, comma - start));
        start = comma + 1;
    }
    return cells;
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r'))
        s.remove_suffix(1);
    return s;
}

bool parse_double(std::string_view cell, double& out) {
    cell = trim(cell);
    if (cell.empty()) return false;
    const auto* begin = cell.data();
    const auto* end = cell.data() + cell.size();
    const auto res = std::from_chars(begin, end, out);
    return res.ec == std::errc{} && res.ptr == end;
}

bool parse_int(std::string_view cell, int& out) {
    cell = trim(cell);
    if (cell.empty()) return false;
    const auto* begin = cell.data();
    const auto* end = cell.data() + cell.size();
    const auto res = std::from_chars(begin, end, out);
    return res.ec == std::errc{} && res.ptr == end;
}

struct RawCsv {
    std::vector<std::vector<std::string>> rows; // data rows, cells
    std::size_t first_data_line = 1;            // 1-based line of the first row
};

RawCsv read_rows(const std::string& path, LabelColumn label_column) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw IoError("cannot open '" + path + "' for reading");
    }
    RawCsv raw;
    std::string line;
    std::size_t lineno = 0;
    bool checked_header = false;
    while (std::getline(in, line)) {
        ++lineno;
        std::string_view view = trim(line);
        if (view.empty()) continue;
        auto cells = split_line(view);
        if (!checked_header) {
            checked_header = true;
            // Header iff any feature cell of the first row is non-numeric
            // (the label cell may legitimately be a string category).
            bool header = false;
            if (cells.size() >= 2) {
                const std::size_t label_at =
                    label_column == LabelColumn::first ? 0 : cells.size() - 1;
                for (std::size_t j = 0; j < cells.size(); ++j) {
                    if (j == label_at) continue;
                    double v;
                    if (!parse_double(cells[j], v)) {
                        header = true;
                        break;
                    }
                }
            }
            if (header) continue;
            raw.first_data_line = lineno;
        }
        std::vector<std::string> owned;
        owned.reserve(cells.size());
        for (auto c : cells) owned.emplace_back(trim(c));
        raw.rows.push_back(std::move(owned));
    }
    if (raw.rows.empty()) {
        throw ParseError("'" + path + "' has no data rows");
    }
    return raw;
}

} // namespace

LabeledDataset load_csv(const std::string& path, LabelColumn label_column) {
    RawCsv raw = read_rows(path, label_column);
    const std::size_t width = raw.rows.front().size();
    if (width < 2) {
        throw ParseError("'" + path + "' rows need a label and at least one feature");
    }
    const std::size_t dim = width - 1;
    const std::size_t label_at = label_column == LabelColumn::first ? 0 : width - 1;

    LabeledDataset data;
    data.name = std::filesystem::path(path).filename().string();
    data.features.resize(static_cast<Index>(raw.rows.size()), static_cast<Index>(dim));

    std::vector<std::string> raw_labels;
    raw_labels.reserve(raw.rows.size());
    bool labels_numeric = true;

    for (std::size_t i = 0; i < raw.rows.size(); ++i) {
        const auto& cells = raw.rows[i];
        const std::size_t rowno = i + 1;
        if (cells.size() != width) {
            throw ParseError("'" + path + "' row " + std::to_string(rowno) + " has " +
                             std::to_string(cells.size()) + " cells, expected " +
                             std::to_string(width));
        }
        std::size_t feature = 0;
        for (std::size_t j = 0; j < width; ++j) {
            if (j == label_at) continue;
            double v;
            if (!parse_double(cells[j], v)) {
                throw ParseError("'" + path + "' row " + std::to_string(rowno) +
                                 " column " + std::to_string(j + 1) +
                                 ": cannot parse '" + cells[j] + "' as a number");
            }
            if (!std::isfinite(v)) {
                throw ParseError("'" + path + "' row " + std::to_string(rowno) +
                                 " column " + std::to_string(j + 1) +
                                 ": non-finite value '" + cells[j] + "'");
            }
            data.features(static_cast<Index>(i), static_cast<Index>(feature++)) = v;
        }
        raw_labels.push_back(cells[label_at]);
        int dummy;
        if (labels_numeric && !parse_int(cells[label_at], dummy)) labels_numeric = false;
    }

    data.labels.reserve(raw_labels.size());
    if (labels_numeric) {
        for (const auto& cell : raw_labels) {
            int v = 0;
            parse_int(cell, v);
            data.labels.push_back(v);
        }
    } else {
        // String categories: codes 1..L in lexicographic order.
        std::set<std::string> names(raw_labels.begin(), raw_labels.end());
        std::map<std::string, int> codes;
        int next = 1;
        for (const auto& n : names) {
            codes[n] = next;
            data.label_names[next] = n;
            ++next;
        }
        for (const auto& cell : raw_labels) data.labels.push_back(codes.at(cell));
    }

    data.validate();
    return data;
}

std::string dataset_csv(const LabeledDataset& data, LabelColumn label_column) {
    data.validate();
    std::string out;
    out.reserve(static_cast<std::size_t>(data.size()) *
                (static_cast<std::size_t>(data.dim()) + 1) * 12);
    char buf[64];
    for (Index i = 0; i < data.size(); ++i) {
        const int label = data.labels[static_cast<std::size_t>(i)];
        std::string label_text;
        if (auto it = data.label_names.find(label); it != data.label_names.end()) {
            label_text = it->second;
        } else {
            label_text = std::to_string(label);
        }
        if (label_column == LabelColumn::first) {
            out += label_text;
        }
        for (Index j = 0; j < data.dim(); ++j) {
            if (j > 0 || label_column == LabelColumn::first) out += ',';
            std::snprintf(buf, sizeof buf, "%.17g", data.features(i, j));
            out += buf;
        }
        if (label_column == LabelColumn::last) {
            out += ',';
            out += label_text;
        }
        out += '\n';
    }
    return out;
}

void write_csv(const LabeledDataset& data, const std::string& path,
               LabelColumn label_column) {
    const std::string out = dataset_csv(data, label_column);
    std::ofstream stream(path, std::ios::binary | std::ios::trunc);
    if (!stream) {
        throw IoError("cannot open '" + path + "' for writing");
    }
    stream << out;
    if (!stream) {
        throw IoError("failed writing '" + path + "'");
    }
}

Matrix load_matrix_csv(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw IoError("cannot open '" + path + "' for reading");
    }
    std::vector<std::vector<double>> rows;
    std::string line;
    std::size_t lineno = 0;
    bool checked_header = false;
    std::size_t width = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::string_view view = trim(line);
        if (view.empty()) continue;
        const auto cells = split_line(view);
        std::vector<double> row(cells.size());
        bool numeric = true;
        for (std::size_t j = 0; j < cells.size(); ++j) {
            if (!parse_double(cells[j], row[j]) || !std::isfinite(row[j])) {
                if (!checked_header) {
                    numeric = false;
                    break;
                }
                throw ParseError("'" + path + "' row " + std::to_string(lineno) +
                                 " column " + std::to_string(j + 1) +
                                 ": cannot parse '" + std::string(cells[j]) +
                                 "' as a finite number");
            }
        }
        if (!checked_header) {
            checked_header = true;
            if (!numeric) continue; // header row
        }
        if (width == 0) width = row.size();
        if (row.size() != width) {
            throw ParseError("'" + path + "' row " + std::to_string(lineno) + " has " +
                             std::to_string(row.size()) + " cells, expected " +
                             std::to_string(width));
        }
        rows.push_back(std::move(row));
    }
    if (rows.empty()) {
        throw ParseError("'" + path + "' has no data rows");
    }
    Matrix out(static_cast<Index>(rows.size()), static_cast<Index>(width));
    for (std::size_t i = 0; i < rows.size(); ++i) {
        for (std::size_t j = 0; j < width; ++j) {
            out(static_cast<Index>(i), static_cast<Index>(j)) = rows[i][j];
        }
    }
    return out;
}

LabeledDataset load_usps(const std::string& path) {
    auto data = load_csv(path, LabelColumn::first);
    if (data.dim() != 256) {
        throw ParseError("USPS layout expects 256 pixel columns, got " +
                         std::to_string(data.dim()));
    }
    for (Index i = 0; i < data.size(); ++i) {
        const int label = data.labels[static_cast<std::size_t>(i)];
        if (label < 0 || label > 9) {
            throw ParseError("USPS row " + std::to_string(i + 1) +
                             ": label must be a digit 0..9, got " + std::to_string(label));
        }
        for (Index j = 0; j < 256; ++j) {
            const double v = data.features(i, j);
            if (v < 0.0 || v > 255.0) {
                throw ParseError("USPS row " + std::to_string(i + 1) + " pixel " +
                                 std::to_string(j + 1) + ": value " +
                                 std::to_string(v) + " outside gray-scale range [0,255]");
            }
        }
    }
    return data;
}

SplitResult stratified_split(const LabeledDataset& data, double train_fraction,
                             std::uint64_t seed) {
    data.validate();
    if (!(train_fraction > 0.0) || !(train_fraction < 1.0)) {
        throw ValueError("train fraction must lie strictly between 0 and 1");
    }
    const auto labels = data.distinct_labels();
    std::vector<std::vector<Index>> by_class(labels.size());
    for (Index i = 0; i < data.size(); ++i) {
        const int label = data.labels[static_cast<std::size_t>(i)];
        const auto at = std::lower_bound(labels.begin(), labels.end(), label) -
                        labels.begin();
        by_class[static_cast<std::size_t>(at)].push_back(i);
    }
    for (std::size_t c = 0; c < by_class.size(); ++c) {
        if (by_class[c].size() < 2) {
            throw ValueError("class " + std::to_string(labels[c]) +
                             " has fewer than 2 points");
        }
    }

    // Largest-remainder apportionment of round(fraction * n) training rows,
    // capped so the test side keeps at least one row.
    const auto total_train = std::min<Index>(
        static_cast<Index>(std::llround(train_fraction * static_cast<double>(data.size()))),
        data.size() - 1);
    std::vector<Index> take(by_class.size());
    std::vector<std::pair<double, std::size_t>> remainders;
    Index assigned = 0;
    for (std::size_t c = 0; c < by_class.size(); ++c) {
        const double quota = train_fraction * static_cast<double>(by_class[c].size());
        take[c] = static_cast<Index>(std::floor(quota));
        assigned += take[c];
        remainders.emplace_back(-(quota - std::floor(quota)), c);
    }
    std::sort(remainders.begin(), remainders.end());
    for (auto& [neg_rem, c] : remainders) {
        if (assigned >= total_train) break;
        if (take[c] < static_cast<Index>(by_class[c].size())) {
            ++take[c];
            ++assigned;
        }
    }
    for (std::size_t c = 0; c < by_class.size(); ++c) {
        if (take[c] == 0) {
            throw ValueError("class " + std::to_string(labels[c]) +
                             " would receive zero training points at fraction " +
                             std::to_string(train_fraction));
        }
    }

    std::vector<Index> train_rows, test_rows;
    for (std::size_t c = 0; c < by_class.size(); ++c) {
        auto rows = by_class[c];
        Rng rng = Rng::derive(seed, c);
        rng.shuffle(rows);
        for (std::size_t i = 0; i < rows.size(); ++i) {
            (static_cast<Index>(i) < take[c] ? train_rows : test_rows).push_back(rows[i]);
        }
    }
    std::sort(train_rows.begin(), train_rows.end());
    std::sort(test_rows.begin(), test_rows.end());

    auto select = [&](const std::vector<Index>& rows, const char* suffix) {
        LabeledDataset out;
        out.name = data.name.empty() ? std::string(suffix) : data.name + ":" + suffix;
        out.label_names = data.label_names;
        out.features.resize(static_cast<Index>(rows.size()), data.dim());
        out.labels.reserve(rows.size());
        Index at = 0;
        for (Index row : rows) {
            out.features.row(at++) = data.features.row(row);
            out.labels.push_back(data.labels[static_cast<std::size_t>(row)]);
        }
        return out;
    };
    return {select(train_rows, "train"), select(test_rows, "test")};
}

} // namespace spa
