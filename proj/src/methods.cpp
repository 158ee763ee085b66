#include "tmi/methods.hpp"

#include <algorithm>
#include <charconv>

namespace tmi {

namespace {

double parse_double_value(const std::string& key, const std::string& value) {
    double out = 0.0;
    auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
    if (ec != std::errc() || ptr != value.data() + value.size()) {
        throw UsageError("config " + key + ": cannot parse '" + value + "' as a number");
    }
    return out;
}

int parse_int_value(const std::string& key, const std::string& value) {
    int out = 0;
    auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
    if (ec != std::errc() || ptr != value.data() + value.size()) {
        throw UsageError("config " + key + ": cannot parse '" + value + "' as an integer");
    }
    return out;
}

}  // namespace

void MethodConfig::apply(const std::string& key, const std::string& value) {
    if (key == "k") {
        k = parse_int_value(key, value);
        if (k < 1) throw UsageError("config k: must be >= 1");
    } else if (key == "standardize") {
        if (value == "true" || value == "1") {
            standardize = true;
        } else if (value == "false" || value == "0") {
            standardize = false;
        } else {
            throw UsageError("config standardize: expected true/false, got '" + value + "'");
        }
    } else if (key == "backend") {
        backend = parse_backend(value);
    } else if (key == "snca_temperature") {
        snca_temperature = parse_double_value(key, value);
        if (!(snca_temperature > 0.0)) throw UsageError("config snca_temperature: must be > 0");
    } else if (key == "ms_alpha") {
        ms_alpha = parse_double_value(key, value);
        if (!(ms_alpha > 0.0)) throw UsageError("config ms_alpha: must be > 0");
    } else if (key == "ms_lambda") {
        ms_lambda = parse_double_value(key, value);
    } else if (key == "hscore_ridge") {
        baselines.hscore_ridge = parse_double_value(key, value);
        if (!(baselines.hscore_ridge > 0.0)) throw UsageError("config hscore_ridge: must be > 0");
    } else if (key == "logme_max_iter") {
        baselines.logme_max_iter = parse_int_value(key, value);
        if (baselines.logme_max_iter < 1) throw UsageError("config logme_max_iter: must be >= 1");
    } else if (key == "logme_tol") {
        baselines.logme_tol = parse_double_value(key, value);
        if (!(baselines.logme_tol > 0.0)) throw UsageError("config logme_tol: must be > 0");
    } else if (key == "transrate_eps") {
        baselines.transrate_eps = parse_double_value(key, value);
        if (!(baselines.transrate_eps > 0.0)) throw UsageError("config transrate_eps: must be > 0");
    } else {
        throw UsageError("unknown config key '" + key + "'");
    }
}

void MethodConfig::apply_pair(const std::string& key_equals_value) {
    const std::size_t eq = key_equals_value.find('=');
    if (eq == std::string::npos || eq == 0) {
        throw UsageError("config override '" + key_equals_value + "' is not KEY=VAL");
    }
    apply(key_equals_value.substr(0, eq), key_equals_value.substr(eq + 1));
}

const std::vector<std::string>& method_names() {
    static const std::vector<std::string> names = {"tmi",     "icv_contrast", "icv_center",
                                                   "icv_snca", "icv_ms",       "nce",
                                                   "leep",    "logme",        "hscore",
                                                   "transrate"};
    return names;
}

bool is_registered_method(const std::string& method) {
    const auto& names = method_names();
    return std::find(names.begin(), names.end(), method) != names.end();
}

bool method_needs_source_preds(const std::string& method) {
    return method == "nce" || method == "leep";
}

Orientation method_orientation(const std::string& method) {
    if (method == "icv_contrast" || method == "icv_center" || method == "icv_snca" ||
        method == "icv_ms") {
        return Orientation::lower_better;
    }
    return Orientation::higher_better;
}

ScoreResult run_method(const std::string& method, const FeatureMatrix& features,
                       const LabelVector& labels, const SourcePredictionMatrix* source_preds,
                       const MethodConfig& config) {
    if (!is_registered_method(method)) {
        std::string known;
        for (const std::string& name : method_names()) {
            if (!known.empty()) known += ", ";
            known += name;
        }
        throw UsageError("unknown method '" + method + "'; registered methods: " + known);
    }
    if (method_needs_source_preds(method) && source_preds == nullptr) {
        throw UsageError("method '" + method + "' requires --source-preds");
    }

    const FeatureMatrix* active = &features;
    FeatureMatrix standardized(Matrix::Zero(1, 1));
    if (config.standardize) {
        standardized = standardize_features(features);
        active = &standardized;
    }

    ScoreResult result;
    if (method == "tmi") {
        result = tmi_score(*active, labels, config.k, config.backend);
    } else if (method == "icv_contrast") {
        result = icv_contrast(*active, labels);
    } else if (method == "icv_center") {
        result = icv_center(*active, labels);
    } else if (method == "icv_snca") {
        result = icv_snca(*active, labels, config.snca_temperature);
    } else if (method == "icv_ms") {
        result = icv_ms(*active, labels, config.ms_alpha, config.ms_lambda);
    } else if (method == "nce") {
        result = nce(*source_preds, labels);
    } else if (method == "leep") {
        result = leep(*source_preds, labels);
    } else if (method == "logme") {
        result = logme(*active, labels, config.baselines);
    } else if (method == "hscore") {
        result = hscore(*active, labels, config.baselines);
    } else {
        result = transrate(*active, labels, config.baselines);
    }
    if (config.standardize) {
        result.warnings.push_back("features standardized per dimension before scoring");
    }
    return result;
}

}  // namespace tmi
