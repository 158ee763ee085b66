#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "tmi/kendall.hpp"
#include "tmi/scores.hpp"
#include "tmi/types.hpp"

namespace tmi {

/// Whether a larger raw score predicts better transfer. lower_better scores
/// are negated before any ranking comparison, so downstream logic always
/// works in a "higher is better" frame.
enum class Orientation { higher_better, lower_better };

std::string orientation_name(Orientation o);

/// One method's raw scores over a model pool.
struct MethodScores {
    std::string method;
    std::vector<std::string> model_ids;
    std::vector<double> scores;
    std::vector<double> wall_times;  // seconds per model
    Orientation orientation = Orientation::higher_better;
};

struct MethodReportRow {
    std::string method;
    Orientation orientation = Orientation::higher_better;
    std::optional<double> tau;          // absent without accuracies or when degenerate
    std::map<int, bool> top_k_hits;     // empty without accuracies
    double total_time = 0.0;
    std::vector<std::string> warnings;
};

struct RankingReport {
    std::vector<std::string> model_ids;
    std::optional<AccuracyVector> accuracies;
    std::vector<int> ks;
    std::vector<MethodScores> raw;      // sorted by method name
    std::vector<MethodReportRow> rows;  // sorted by method name
    std::vector<std::string> warnings;
};

/// True iff the best-scored model (after orientation normalization; score
/// ties resolve to the lexicographically smallest id) is among the k models
/// with highest accuracy. Accuracy ties at the boundary widen the top-k set.
bool top_k_hit(const MethodScores& scores, const AccuracyVector& accuracies, int k);

/// Joins every method against the accuracies (when given): Kendall tau-b of
/// orientation-normalized scores, top-k hits for each requested k, and total
/// wall time. Methods with an undefined tau (all scores tied) get a null tau
/// and a warning instead of failing the report.
RankingReport build_report(std::vector<MethodScores> all_methods,
                           std::optional<AccuracyVector> accuracies, std::vector<int> ks);

/// Stable JSON schema; floats rounded to 12 significant digits, timing
/// isolated under "timing" keys, method rows sorted by name.
nlohmann::json report_to_json(const RankingReport& report);

/// TMI at each k in ks (sorted ascending, duplicates removed). Entries whose
/// computation fails are marked invalid instead of aborting the sweep.
struct SweepEntry {
    int k = 0;
    bool valid = false;
    double value = 0.0;
    std::vector<std::string> warnings;
};

std::vector<SweepEntry> sensitivity_sweep(const FeatureMatrix& features, const LabelVector& labels,
                                          std::vector<int> ks,
                                          NeighborBackend backend = NeighborBackend::tree);

/// Round to 12 significant digits (the report emission precision).
double round_for_report(double value);

/// JSON helpers shared by the CLI: ScoreResult with its timing subtree.
nlohmann::json score_result_to_json(const ScoreResult& result);
nlohmann::json sweep_to_json(const std::vector<SweepEntry>& entries);

}  // namespace tmi
