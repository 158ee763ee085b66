#pragma once

#include <string>
#include <vector>

#include "tmi/baselines.hpp"
#include "tmi/ranking.hpp"
#include "tmi/scores.hpp"

namespace tmi {

/// Everything a scoring run can be configured with. Flags and `--config
/// KEY=VAL` pairs both land here.
struct MethodConfig {
    int k = 3;  // entropy neighbor count
    bool standardize = false;
    NeighborBackend backend = NeighborBackend::tree;
    double snca_temperature = 1.0;
    double ms_alpha = 2.0;
    double ms_lambda = 0.5;
    BaselineConfig baselines;

    /// Applies one KEY=VAL override; unknown keys or unparseable values are
    /// UsageErrors.
    void apply(const std::string& key, const std::string& value);
    void apply_pair(const std::string& key_equals_value);
};

/// The closed method registry, in canonical order.
const std::vector<std::string>& method_names();
bool is_registered_method(const std::string& method);
bool method_needs_source_preds(const std::string& method);
Orientation method_orientation(const std::string& method);

/// Dispatch one method. source_preds may be null for methods that do not use
/// it; nce/leep without predictions is a UsageError. With config.standardize
/// the features are standardized per dimension first and the result carries a
/// warning saying so.
ScoreResult run_method(const std::string& method, const FeatureMatrix& features,
                       const LabelVector& labels, const SourcePredictionMatrix* source_preds,
                       const MethodConfig& config);

}  // namespace tmi
