#pragma once

#include <map>
#include <string>
#include <vector>

#include "spa/evaluation.hpp"

namespace spa {

// Report file schemas (version 1):
//   eval JSON:   {schema_version, accuracy, n_train, n_test, k, p,
//                 labels: [...], confusion: [[...]]}
//   curve CSV:   fraction,n_train,mean_accuracy,std_accuracy
//   sweep CSV:   sigma,empirical_error,bound,bound_trivial
//   predictions: label, then distance_<l> per class
// All writers are atomic (temp file + rename). CSV doubles use 17
// significant digits; JSON doubles use the shortest exact form.

inline constexpr int kReportSchemaVersion = 1;

std::string eval_report_json(const EvalReport& report);
std::string eval_report_csv(const EvalReport& report);
std::string learning_curve_csv(const std::vector<LearningCurveRow>& rows);
std::string learning_curve_json(const std::vector<LearningCurveRow>& rows);
std::string sweep_csv(const std::vector<SweepRow>& rows);
std::string sweep_json(const std::vector<SweepRow>& rows);
std::string predictions_csv(const std::vector<Prediction>& predictions,
                            const std::vector<int>& class_labels,
                            const std::map<int, std::string>& label_names = {});

// Serializes a double with 17 significant digits (%.17g), enough to
// round-trip exactly.
std::string format_double(double value);

// Writes content to path via a temp file in the same directory plus rename.
void write_file_atomic(const std::string& path, const std::string& content);

} // namespace spa
