#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "tmi/types.hpp"

namespace tmi {

enum class FileFormat { csv, binary };

/// Parses "csv" or "binary"; anything else is a UsageError.
FileFormat parse_format(const std::string& name);
std::string format_name(FileFormat format);

/// CSV: no header, one sample per line, comma-separated 64-bit floats.
/// Binary: magic "TMIF", version byte 0x01, n and d as 64-bit little-endian
/// unsigned integers, then n*d 64-bit little-endian floats, row-major.
FeatureMatrix load_features(const std::string& path, FileFormat format);
void save_features(const FeatureMatrix& features, const std::string& path, FileFormat format);

/// Plain text, one integer per line. When num_classes is not given it is
/// inferred as max(label) + 1.
LabelVector load_labels(const std::string& path,
                        std::optional<std::int32_t> num_classes = std::nullopt);
void save_labels(const LabelVector& labels, const std::string& path);

/// CSV lines of `model_id,accuracy`.
AccuracyVector load_accuracies(const std::string& path);

/// Same matrix formats as load_features, validated as row-stochastic.
SourcePredictionMatrix load_source_predictions(const std::string& path, FileFormat format);

}  // namespace tmi
