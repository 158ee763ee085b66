#include "tmi/manifest.hpp"

#include <fstream>
#include <set>

#include <nlohmann/json.hpp>

namespace tmi {

namespace {

std::string require_string(const nlohmann::json& doc, const std::string& key,
                           const std::string& context) {
    if (!doc.contains(key) || !doc[key].is_string()) {
        throw ParseError("manifest: " + context + " needs a string field '" + key + "'");
    }
    return doc[key].get<std::string>();
}

}  // namespace

RunManifest RunManifest::parse_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw ParseError("cannot open manifest: " + path);
    }
    nlohmann::json doc;
    try {
        in >> doc;
    } catch (const nlohmann::json::exception& e) {
        throw ParseError("manifest " + path + ": " + e.what());
    }

    RunManifest manifest;
    manifest.labels_path = require_string(doc, "labels", "document");
    manifest.output_path = require_string(doc, "output", "document");
    if (doc.contains("accuracies")) {
        manifest.accuracies_path = require_string(doc, "accuracies", "document");
    }
    if (doc.contains("format")) {
        manifest.format = parse_format(require_string(doc, "format", "document"));
    }
    if (!doc.contains("methods") || !doc["methods"].is_array()) {
        throw ParseError("manifest: needs an array field 'methods'");
    }
    for (const auto& m : doc["methods"]) {
        if (!m.is_string()) throw ParseError("manifest: method names must be strings");
        manifest.methods.push_back(m.get<std::string>());
    }
    if (doc.contains("config")) {
        if (!doc["config"].is_object()) throw ParseError("manifest: 'config' must be an object");
        for (const auto& [key, value] : doc["config"].items()) {
            manifest.config_overrides[key] =
                value.is_string() ? value.get<std::string>() : value.dump();
        }
    }
    if (doc.contains("top_k")) {
        if (!doc["top_k"].is_array()) throw ParseError("manifest: 'top_k' must be an array");
        manifest.ks.clear();
        for (const auto& k : doc["top_k"]) {
            if (!k.is_number_integer()) throw ParseError("manifest: top_k entries are integers");
            manifest.ks.push_back(k.get<int>());
        }
    }
    if (doc.contains("allow_shared_paths")) {
        if (!doc["allow_shared_paths"].is_boolean()) {
            throw ParseError("manifest: 'allow_shared_paths' must be a boolean");
        }
        manifest.allow_shared_paths = doc["allow_shared_paths"].get<bool>();
    }
    if (!doc.contains("models") || !doc["models"].is_array()) {
        throw ParseError("manifest: needs an array field 'models'");
    }
    for (const auto& model : doc["models"]) {
        ManifestEntry entry;
        entry.model_id = require_string(model, "id", "model entry");
        entry.features_path = require_string(model, "features", "model entry");
        if (model.contains("source_preds")) {
            entry.source_preds_path = require_string(model, "source_preds", "model entry");
        }
        manifest.entries.push_back(std::move(entry));
    }
    manifest.validate();
    return manifest;
}

void RunManifest::validate() const {
    if (entries.empty()) {
        throw ValidationError("manifest: no models listed");
    }
    if (methods.empty()) {
        throw ValidationError("manifest: no methods listed");
    }
    std::set<std::string> ids;
    for (const ManifestEntry& entry : entries) {
        if (!ids.insert(entry.model_id).second) {
            throw ValidationError("manifest: duplicate model id '" + entry.model_id + "'");
        }
    }
    for (const std::string& method : methods) {
        if (!is_registered_method(method)) {
            throw ValidationError("manifest: unknown method '" + method + "'");
        }
    }
    if (!allow_shared_paths) {
        std::set<std::string> paths;
        for (const ManifestEntry& entry : entries) {
            if (!paths.insert(entry.features_path).second) {
                throw ValidationError("manifest: features path '" + entry.features_path +
                                      "' used by multiple models; set allow_shared_paths to "
                                      "share files deliberately");
            }
            if (entry.source_preds_path.has_value() &&
                !paths.insert(*entry.source_preds_path).second) {
                throw ValidationError("manifest: source_preds path '" + *entry.source_preds_path +
                                      "' used by multiple models; set allow_shared_paths to "
                                      "share files deliberately");
            }
        }
    }
    for (int k : ks) {
        if (k < 1) {
            throw ValidationError("manifest: top_k values must be >= 1");
        }
    }
}

RankingReport run_manifest(const RunManifest& manifest) {
    manifest.validate();

    MethodConfig config;
    for (const auto& [key, value] : manifest.config_overrides) {
        config.apply(key, value);
    }

    const LabelVector labels = load_labels(manifest.labels_path);
    std::optional<AccuracyVector> accuracies;
    if (manifest.accuracies_path.has_value()) {
        accuracies = load_accuracies(*manifest.accuracies_path);
    }

    std::vector<std::string> run_warnings;
    std::vector<std::string> surviving_ids;
    // scores[method][model] collected for models that score under every method
    std::map<std::string, std::vector<std::pair<double, double>>> per_method;  // (score, time)
    for (const std::string& method : manifest.methods) {
        per_method[method] = {};
    }

    for (const ManifestEntry& entry : manifest.entries) {
        std::vector<std::pair<double, double>> model_scores;
        bool ok = true;
        try {
            const FeatureMatrix features = load_features(entry.features_path, manifest.format);
            std::optional<SourcePredictionMatrix> preds;
            if (entry.source_preds_path.has_value()) {
                preds = load_source_predictions(*entry.source_preds_path, manifest.format);
            }
            for (const std::string& method : manifest.methods) {
                try {
                    const ScoreResult result = run_method(
                        method, features, labels, preds.has_value() ? &*preds : nullptr, config);
                    model_scores.emplace_back(result.value, result.wall_time);
                } catch (const Error& e) {
                    run_warnings.push_back("model '" + entry.model_id + "', method '" + method +
                                           "': " + e.what());
                    ok = false;
                    break;
                }
            }
        } catch (const Error& e) {
            run_warnings.push_back("model '" + entry.model_id + "': " + e.what());
            ok = false;
        }
        if (!ok) {
            run_warnings.push_back("model '" + entry.model_id + "' dropped from the report");
            continue;
        }
        surviving_ids.push_back(entry.model_id);
        std::size_t m = 0;
        for (const std::string& method : manifest.methods) {
            per_method[method].push_back(model_scores[m++]);
        }
    }

    if (surviving_ids.empty()) {
        throw ComputeError("manifest run: every model failed to score");
    }

    std::vector<MethodScores> all_methods;
    for (const std::string& method : manifest.methods) {
        MethodScores scores;
        scores.method = method;
        scores.orientation = method_orientation(method);
        scores.model_ids = surviving_ids;
        for (const auto& [value, time] : per_method[method]) {
            scores.scores.push_back(value);
            scores.wall_times.push_back(time);
        }
        all_methods.push_back(std::move(scores));
    }

    // Accuracies may cover more models than survived; restrict to the join.
    std::optional<AccuracyVector> joined;
    if (accuracies.has_value()) {
        std::vector<std::string> ids;
        std::vector<double> values;
        for (const std::string& id : surviving_ids) {
            const std::optional<double> a = accuracies->find(id);
            if (!a.has_value()) {
                throw ValidationError("manifest run: no accuracy for model '" + id + "'");
            }
            ids.push_back(id);
            values.push_back(*a);
        }
        joined = AccuracyVector(std::move(ids), std::move(values));
    }

    RankingReport report = build_report(std::move(all_methods), std::move(joined), manifest.ks);
    report.warnings.insert(report.warnings.end(), run_warnings.begin(), run_warnings.end());
    return report;
}

}  // namespace tmi
