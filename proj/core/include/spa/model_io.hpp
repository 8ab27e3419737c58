#pragma once

#include <cstdint>
#include <string>

#include "spa/classifier.hpp"

namespace spa {

// Model persistence for the lazy learner: a versioned JSON manifest holding
// the resolved config and label map next to the training matrix as CSV. The
// manifest records an FNV-1a checksum of the CSV bytes; load_model verifies
// it before rebuilding the indexes.

inline constexpr int kModelSchemaVersion = 1;

std::uint64_t fnv1a64_file(const std::string& path);

// Writes train_csv_path (label column first) and manifest_path. The manifest
// stores train_csv_path relative to the manifest's directory when possible.
void save_model(const SpaModel& model, const std::string& manifest_path,
                const std::string& train_csv_path);

SpaModel load_model(const std::string& manifest_path);

} // namespace spa
