// spa: SPherical Approximation classifier command line.
//
// Subcommands: synth, split, fit, predict, eval, tune, learning-curve, bound.
// Exit codes: 0 success, 2 flag validation, 3 I/O failure, 4 data validation,
// 1 internal error. All file outputs are written atomically.

#include <charconv>
#include <cstdio>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "spa/classifier.hpp"
#include "spa/dataset.hpp"
#include "spa/errors.hpp"
#include "spa/evaluation.hpp"
#include "spa/model_io.hpp"
#include "spa/report_io.hpp"

namespace {

constexpr int kExitUsage = 2;
constexpr int kExitIo = 3;
constexpr int kExitData = 4;

spa::LabelColumn parse_label_column(const std::string& name) {
    if (name == "first") return spa::LabelColumn::first;
    if (name == "last") return spa::LabelColumn::last;
    throw spa::ValueError("label column must be 'first' or 'last', got '" + name + "'");
}

std::optional<int> parse_int_or_auto(const std::string& text, const char* flag) {
    if (text == "auto") return std::nullopt;
    int value = 0;
    const auto res = std::from_chars(text.data(), text.data() + text.size(), value);
    if (res.ec != std::errc{} || res.ptr != text.data() + text.size()) {
        throw spa::ValueError(std::string(flag) + " must be an integer or 'auto', got '" +
                              text + "'");
    }
    return value;
}

std::vector<double> parse_double_list(const std::string& text, const char* flag) {
    std::vector<double> out;
    std::size_t start = 0;
    while (start <= text.size()) {
        const std::size_t comma = text.find(',', start);
        const std::string cell =
            text.substr(start, comma == std::string::npos ? comma : comma - start);
        double value = 0.0;
        const auto res = std::from_chars(cell.data(), cell.data() + cell.size(), value);
        if (res.ec != std::errc{} || res.ptr != cell.data() + cell.size()) {
            throw spa::ValueError(std::string(flag) + ": cannot parse '" + cell +
                                  "' as a number");
        }
        out.push_back(value);
        if (comma == std::string::npos) break;
        start = comma + 1;
    }
    if (out.empty()) throw spa::ValueError(std::string(flag) + " is empty");
    return out;
}

std::vector<int> parse_int_list(const std::string& text, const char* flag) {
    std::vector<int> out;
    for (double v : parse_double_list(text, flag)) {
        const int i = static_cast<int>(v);
        if (static_cast<double>(i) != v) {
            throw spa::ValueError(std::string(flag) + " entries must be integers");
        }
        out.push_back(i);
    }
    return out;
}

struct ConfigFlags {
    std::string k = "auto";
    std::string p = "auto";
    std::string p_grid = "1,2,3";
    int folds = 5;
    std::uint64_t cv_seed = 0;

    void attach(CLI::App* cmd) {
        cmd->add_option("--k", k, "neighborhood size (integer or 'auto')");
        cmd->add_option("--p", p, "sphere dimension (integer or 'auto')");
        cmd->add_option("--p-grid", p_grid, "candidate p values for tuning");
        cmd->add_option("--folds", folds, "cross-validation folds for tuning");
        cmd->add_option("--cv-seed", cv_seed, "seed for the tuning folds");
    }

    spa::SpaConfig build() const {
        spa::SpaConfig config;
        config.k = parse_int_or_auto(k, "--k");
        config.p = parse_int_or_auto(p, "--p");
        config.p_grid = parse_int_list(p_grid, "--p-grid");
        config.cv_folds = folds;
        config.cv_seed = cv_seed;
        return config;
    }
};

int run(int argc, char** argv) {
    CLI::App app{"SPA: classification by local spherical approximation of class supports"};
    app.require_subcommand(1);

    // ---- synth ----------------------------------------------------------
    auto* synth = app.add_subcommand("synth", "generate a synthetic dataset CSV");
    std::string synth_family;
    int synth_n = 100;
    double synth_sigma = 0.0;
    std::uint64_t synth_seed = 0;
    int synth_dim = 2;
    int synth_classes = 2;
    std::string synth_out;
    std::string synth_label_column = "first";
    synth->add_option("--family", synth_family,
                      "funky-curves | concentric-spheres | disjoint-curves")
        ->required();
    synth->add_option("--n", synth_n, "points per class")->required();
    synth->add_option("--sigma", synth_sigma, "noise standard deviation");
    synth->add_option("--seed", synth_seed, "generator seed");
    synth->add_option("--dim", synth_dim, "ambient dimension");
    synth->add_option("--classes", synth_classes, "class count (concentric-spheres)");
    synth->add_option("-o,--output", synth_out, "output CSV path")->required();
    synth->add_option("--label-column", synth_label_column, "first | last");

    // ---- split ----------------------------------------------------------
    auto* split = app.add_subcommand("split", "stratified train/test split of a CSV");
    std::string split_input, split_train_out, split_test_out;
    double split_fraction = 0.5;
    std::uint64_t split_seed = 0;
    std::string split_label_column = "first";
    split->add_option("--input", split_input, "dataset CSV")->required();
    split->add_option("--fraction", split_fraction, "training fraction in (0,1)");
    split->add_option("--seed", split_seed, "split seed");
    split->add_option("--train-out", split_train_out, "training CSV path")->required();
    split->add_option("--test-out", split_test_out, "test CSV path")->required();
    split->add_option("--label-column", split_label_column, "first | last");

    // ---- fit ------------------------------------------------------------
    auto* fit = app.add_subcommand("fit", "resolve a config and persist a model manifest");
    std::string fit_train, fit_model_out, fit_data_out;
    std::string fit_label_column = "first";
    ConfigFlags fit_config;
    fit->add_option("--train", fit_train, "training CSV")->required();
    fit->add_option("--label-column", fit_label_column, "first | last");
    fit_config.attach(fit);
    fit->add_option("--model-out", fit_model_out, "manifest JSON path")->required();
    fit->add_option("--data-out", fit_data_out,
                    "training CSV copy referenced by the manifest "
                    "(default: manifest path with .csv)");

    // ---- predict ----------------------------------------------------------
    auto* predict = app.add_subcommand("predict", "classify query rows with a saved model");
    std::string predict_model, predict_queries, predict_out;
    predict->add_option("--model", predict_model, "model manifest JSON")->required();
    predict->add_option("--queries", predict_queries, "query CSV (feature rows, no label)")
        ->required();
    predict->add_option("-o,--output", predict_out, "predictions CSV path")->required();

    // ---- eval -------------------------------------------------------------
    auto* eval = app.add_subcommand("eval", "train on one CSV, score another");
    std::string eval_train, eval_test, eval_out, eval_format = "json";
    std::string eval_label_column = "first";
    ConfigFlags eval_config;
    eval->add_option("--train", eval_train, "training CSV")->required();
    eval->add_option("--test", eval_test, "test CSV")->required();
    eval->add_option("--label-column", eval_label_column, "first | last");
    eval_config.attach(eval);
    eval->add_option("-o,--output", eval_out, "report path");
    eval->add_option("--format", eval_format, "report format: json | csv");

    // ---- tune -------------------------------------------------------------
    auto* tune = app.add_subcommand("tune", "choose p by stratified cross-validation");
    std::string tune_train, tune_out;
    std::string tune_label_column = "first";
    ConfigFlags tune_config;
    tune->add_option("--train", tune_train, "training CSV")->required();
    tune->add_option("--label-column", tune_label_column, "first | last");
    tune_config.attach(tune);
    tune->add_option("-o,--output", tune_out, "JSON summary path");

    // ---- learning-curve ----------------------------------------------------
    auto* curve = app.add_subcommand("learning-curve",
                                     "accuracy versus training size sweep");
    std::string curve_data, curve_fractions, curve_out, curve_format = "csv";
    std::string curve_label_column = "first";
    int curve_repeats = 10;
    std::uint64_t curve_seed = 0;
    ConfigFlags curve_config;
    curve->add_option("--data", curve_data, "dataset CSV")->required();
    curve->add_option("--fractions", curve_fractions,
                      "comma-separated training fractions of the training half")
        ->required();
    curve->add_option("--repeats", curve_repeats, "repeats per fraction");
    curve->add_option("--seed", curve_seed, "sweep seed");
    curve->add_option("--label-column", curve_label_column, "first | last");
    curve_config.attach(curve);
    curve->add_option("-o,--output", curve_out, "output path")->required();
    curve->add_option("--format", curve_format, "csv | json");

    // ---- bound -------------------------------------------------------------
    auto* bound = app.add_subcommand("bound", "asymptotic misclassification bound");
    double bound_delta = 0.0, bound_sigma = 0.0;
    int bound_dim = 0;
    std::string bound_out;
    bound->add_option("--delta", bound_delta, "separation scale")->required();
    bound->add_option("--sigma", bound_sigma, "noise standard deviation")->required();
    bound->add_option("--dim", bound_dim, "ambient dimension")->required();
    bound->add_option("-o,--output", bound_out, "JSON output path");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    if (synth->parsed()) {
        spa::SynthSpec spec;
        spec.family = spa::parse_family(synth_family);
        spec.n_per_class = synth_n;
        spec.sigma = synth_sigma;
        spec.seed = synth_seed;
        spec.ambient_dim = synth_dim;
        spec.classes = synth_classes;
        const auto data = spa::generate(spec);
        spa::write_file_atomic(synth_out,
                               spa::dataset_csv(data, parse_label_column(synth_label_column)));
        std::printf("n=%lld D=%lld L=%zu\n", static_cast<long long>(data.size()),
                    static_cast<long long>(data.dim()), data.distinct_labels().size());
        return 0;
    }

    if (split->parsed()) {
        const auto column = parse_label_column(split_label_column);
        const auto data = spa::load_csv(split_input, column);
        const auto parts = spa::stratified_split(data, split_fraction, split_seed);
        spa::write_file_atomic(split_train_out, spa::dataset_csv(parts.train, column));
        spa::write_file_atomic(split_test_out, spa::dataset_csv(parts.test, column));
        std::printf("train=%lld test=%lld\n", static_cast<long long>(parts.train.size()),
                    static_cast<long long>(parts.test.size()));
        return 0;
    }

    auto warn_clamped = [](const spa::ResolvedConfig& config) {
        if (config.k_clamped) {
            std::fprintf(stderr,
                         "warning: K clamped to the smallest class size (%d)\n", config.k);
        }
    };

    if (fit->parsed()) {
        const auto config = fit_config.build();
        const auto column = parse_label_column(fit_label_column);
        auto train = spa::load_csv(fit_train, column);
        const auto model = spa::SpaModel::fit(std::move(train), config);
        warn_clamped(model.config());
        if (fit_data_out.empty()) {
            fit_data_out = fit_model_out + ".csv";
        }
        spa::save_model(model, fit_model_out, fit_data_out);
        std::printf("k=%d p=%d classes=%lld\n", model.config().k, model.config().p,
                    static_cast<long long>(model.num_classes()));
        return 0;
    }

    if (predict->parsed()) {
        const auto model = spa::load_model(predict_model);
        const auto queries = spa::load_matrix_csv(predict_queries);
        const auto preds = model.classify_batch(queries);
        spa::write_file_atomic(predict_out,
                               spa::predictions_csv(preds, model.class_labels(),
                                                    model.train().label_names));
        std::printf("n=%zu\n", preds.size());
        return 0;
    }

    if (eval->parsed()) {
        const auto config = eval_config.build();
        if (eval_format != "json" && eval_format != "csv") {
            throw spa::ValueError("unknown format '" + eval_format + "'");
        }
        const auto column = parse_label_column(eval_label_column);
        auto train = spa::load_csv(eval_train, column);
        const auto test = spa::load_csv(eval_test, column);
        const auto model = spa::SpaModel::fit(std::move(train), config);
        warn_clamped(model.config());
        const auto report = spa::evaluate(model, test);
        if (!eval_out.empty()) {
            spa::write_file_atomic(eval_out, eval_format == "json"
                                                 ? spa::eval_report_json(report)
                                                 : spa::eval_report_csv(report));
        }
        std::printf("accuracy %.4f\n", report.accuracy);
        return 0;
    }

    if (tune->parsed()) {
        auto config = tune_config.build();
        config.p.reset();
        const auto train = spa::load_csv(tune_train, parse_label_column(tune_label_column));
        const int chosen = spa::tune_p(train, config);
        if (!tune_out.empty()) {
            std::string grid = "[";
            for (std::size_t i = 0; i < config.p_grid.size(); ++i) {
                grid += (i ? "," : "") + std::to_string(config.p_grid[i]);
            }
            grid += "]";
            spa::write_file_atomic(tune_out, "{\n  \"schema_version\": 1,\n  \"chosen_p\": " +
                                                 std::to_string(chosen) +
                                                 ",\n  \"p_grid\": " + grid + "\n}\n");
        }
        std::printf("p=%d\n", chosen);
        return 0;
    }

    if (curve->parsed()) {
        const auto config = curve_config.build();
        const auto fractions = parse_double_list(curve_fractions, "--fractions");
        if (curve_format != "json" && curve_format != "csv") {
            throw spa::ValueError("unknown format '" + curve_format + "'");
        }
        const auto data = spa::load_csv(curve_data, parse_label_column(curve_label_column));
        const auto rows = spa::learning_curve(data, fractions, config,
                                              curve_repeats, curve_seed);
        spa::write_file_atomic(curve_out, curve_format == "json"
                                              ? spa::learning_curve_json(rows)
                                              : spa::learning_curve_csv(rows));
        for (const auto& row : rows) {
            std::printf("fraction=%g n=%lld accuracy=%.4f std=%.4f\n", row.fraction,
                        static_cast<long long>(row.n_train), row.mean_accuracy,
                        row.std_accuracy);
        }
        return 0;
    }

    if (bound->parsed()) {
        const auto result = spa::misclassification_bound({bound_delta, bound_sigma, bound_dim});
        if (!bound_out.empty()) {
            spa::write_file_atomic(
                bound_out, "{\n  \"schema_version\": 1,\n  \"bound\": " +
                               spa::format_double(result.value) +
                               ",\n  \"trivial\": " + (result.trivial ? "true" : "false") +
                               "\n}\n");
        }
        std::printf("bound %.17g trivial=%d\n", result.value, result.trivial ? 1 : 0);
        return 0;
    }

    return kExitUsage;
}

} // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const spa::ValueError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitUsage;
    } catch (const spa::IoError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitIo;
    } catch (const spa::Error& e) {
        // parse, dimension, numeric: the data did not validate
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitData;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "internal error: %s\n", e.what());
        return 1;
    }
}
