#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "tmi/io.hpp"
#include "tmi/methods.hpp"
#include "tmi/ranking.hpp"

namespace tmi {

struct ManifestEntry {
    std::string model_id;
    std::string features_path;
    std::optional<std::string> source_preds_path;
};

/// A reproducible multi-model run: which feature files to score, with which
/// methods, against which accuracies. Parsed from a single JSON document:
///
/// {
///   "labels": "labels.txt",
///   "accuracies": "acc.csv",            // optional
///   "format": "csv",                    // optional, csv|binary
///   "methods": ["tmi", "hscore"],
///   "config": {"k": "3"},               // optional KEY: VAL overrides
///   "top_k": [1, 5],                    // optional
///   "output": "report.json",
///   "allow_shared_paths": false,        // optional
///   "models": [
///     {"id": "m0", "features": "m0.csv", "source_preds": "m0_preds.csv"}
///   ]
/// }
struct RunManifest {
    std::vector<ManifestEntry> entries;
    std::string labels_path;
    std::optional<std::string> accuracies_path;
    std::vector<std::string> methods;
    std::map<std::string, std::string> config_overrides;
    std::string output_path;
    FileFormat format = FileFormat::csv;
    std::vector<int> ks = {1, 5};
    bool allow_shared_paths = false;

    static RunManifest parse_file(const std::string& path);
    void validate() const;
};

/// Scores every (model, method) pair and assembles the ranking report.
/// A model whose scoring fails for any method is dropped from the report
/// (with warnings naming the failures) so the remaining table stays
/// rectangular; the run only fails outright if no model survives.
RankingReport run_manifest(const RunManifest& manifest);

}  // namespace tmi
