#include "tmi/ranking.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <set>

#include <nlohmann/json.hpp>

namespace tmi {

namespace {

std::vector<double> normalized_scores(const MethodScores& scores) {
    std::vector<double> out = scores.scores;
    if (scores.orientation == Orientation::lower_better) {
        for (double& v : out) v = -v;
    }
    return out;
}

void check_method_scores(const MethodScores& scores) {
    if (scores.model_ids.size() != scores.scores.size() ||
        scores.model_ids.size() != scores.wall_times.size()) {
        throw ValidationError("method '" + scores.method +
                              "': model ids, scores and wall times must align");
    }
    if (scores.model_ids.empty()) {
        throw ValidationError("method '" + scores.method + "': empty score vector");
    }
    std::set<std::string> ids(scores.model_ids.begin(), scores.model_ids.end());
    if (ids.size() != scores.model_ids.size()) {
        throw ValidationError("method '" + scores.method + "': duplicate model ids");
    }
    for (std::size_t i = 0; i < scores.scores.size(); ++i) {
        if (!std::isfinite(scores.scores[i])) {
            throw ValidationError("method '" + scores.method + "': non-finite score for model '" +
                                  scores.model_ids[i] + "'");
        }
    }
}

}  // namespace

std::string orientation_name(Orientation o) {
    return o == Orientation::higher_better ? "higher_better" : "lower_better";
}

bool top_k_hit(const MethodScores& scores, const AccuracyVector& accuracies, int k) {
    check_method_scores(scores);
    const auto m = static_cast<int>(scores.model_ids.size());
    if (k < 1 || k > m) {
        throw ComputeError("top_k_hit: k=" + std::to_string(k) + " outside [1, " +
                           std::to_string(m) + "]");
    }

    std::vector<std::string> unmatched;
    for (const std::string& id : scores.model_ids) {
        if (!accuracies.find(id).has_value()) unmatched.push_back(id);
    }
    for (const std::string& id : accuracies.model_ids()) {
        if (std::find(scores.model_ids.begin(), scores.model_ids.end(), id) ==
            scores.model_ids.end()) {
            unmatched.push_back(id);
        }
    }
    if (!unmatched.empty()) {
        std::string joined;
        for (const std::string& id : unmatched) {
            if (!joined.empty()) joined += ", ";
            joined += id;
        }
        throw ValidationError("top_k_hit: model ids do not match: " + joined);
    }

    const std::vector<double> normalized = normalized_scores(scores);
    std::size_t best = 0;
    for (std::size_t i = 1; i < normalized.size(); ++i) {
        if (normalized[i] > normalized[best] ||
            (normalized[i] == normalized[best] && scores.model_ids[i] < scores.model_ids[best])) {
            best = i;
        }
    }
    const std::string& best_id = scores.model_ids[best];

    // k-th highest accuracy; boundary ties widen the admitted set.
    std::vector<double> acc_sorted;
    acc_sorted.reserve(scores.model_ids.size());
    for (const std::string& id : scores.model_ids) {
        acc_sorted.push_back(*accuracies.find(id));
    }
    std::sort(acc_sorted.begin(), acc_sorted.end(), std::greater<>());
    const double threshold = acc_sorted[static_cast<std::size_t>(k - 1)];
    return *accuracies.find(best_id) >= threshold;
}

RankingReport build_report(std::vector<MethodScores> all_methods,
                           std::optional<AccuracyVector> accuracies, std::vector<int> ks) {
    if (all_methods.empty()) {
        throw ValidationError("build_report: no methods given");
    }
    for (const MethodScores& scores : all_methods) {
        check_method_scores(scores);
    }
    std::sort(all_methods.begin(), all_methods.end(),
              [](const MethodScores& x, const MethodScores& y) { return x.method < y.method; });

    const std::set<std::string> reference(all_methods.front().model_ids.begin(),
                                          all_methods.front().model_ids.end());
    for (const MethodScores& scores : all_methods) {
        const std::set<std::string> ids(scores.model_ids.begin(), scores.model_ids.end());
        if (ids != reference) {
            throw ValidationError("build_report: method '" + scores.method +
                                  "' covers a different model set than '" +
                                  all_methods.front().method + "'");
        }
    }
    std::sort(ks.begin(), ks.end());
    ks.erase(std::unique(ks.begin(), ks.end()), ks.end());

    RankingReport report;
    report.model_ids = all_methods.front().model_ids;
    report.accuracies = accuracies;

    const auto pool = static_cast<int>(report.model_ids.size());
    for (int k : ks) {
        if (k > pool) {
            report.warnings.push_back("top-k with k=" + std::to_string(k) +
                                      " dropped: only " + std::to_string(pool) + " model(s)");
        } else {
            report.ks.push_back(k);
        }
    }
    ks = report.ks;

    for (const MethodScores& scores : all_methods) {
        MethodReportRow row;
        row.method = scores.method;
        row.orientation = scores.orientation;
        for (double t : scores.wall_times) row.total_time += t;

        if (accuracies.has_value()) {
            std::vector<double> acc_aligned;
            acc_aligned.reserve(scores.model_ids.size());
            for (const std::string& id : scores.model_ids) {
                const std::optional<double> a = accuracies->find(id);
                if (!a.has_value()) {
                    throw ValidationError("build_report: no accuracy for model '" + id + "'");
                }
                acc_aligned.push_back(*a);
            }
            try {
                row.tau = kendall_tau(normalized_scores(scores), acc_aligned);
            } catch (const ComputeError& e) {
                row.warnings.push_back(std::string("tau undefined: ") + e.what());
            }
            for (int k : ks) {
                row.top_k_hits[k] = top_k_hit(scores, *accuracies, k);
            }
        }
        report.rows.push_back(std::move(row));
    }
    report.raw = std::move(all_methods);
    return report;
}

std::vector<SweepEntry> sensitivity_sweep(const FeatureMatrix& features, const LabelVector& labels,
                                          std::vector<int> ks, NeighborBackend backend) {
    if (ks.empty()) {
        throw ValidationError("sensitivity_sweep: no k values given");
    }
    std::sort(ks.begin(), ks.end());
    ks.erase(std::unique(ks.begin(), ks.end()), ks.end());

    std::vector<SweepEntry> entries;
    entries.reserve(ks.size());
    for (int k : ks) {
        SweepEntry entry;
        entry.k = k;
        try {
            const ScoreResult result = tmi_score(features, labels, k, backend);
            entry.valid = true;
            entry.value = result.value;
            entry.warnings = result.warnings;
        } catch (const Error& e) {
            entry.valid = false;
            entry.warnings.push_back(e.what());
        }
        entries.push_back(std::move(entry));
    }
    return entries;
}

double round_for_report(double value) {
    if (!std::isfinite(value)) return value;
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12g", value);
    return std::strtod(buf, nullptr);
}

nlohmann::json score_result_to_json(const ScoreResult& result) {
    nlohmann::json per_class = nlohmann::json::array();
    for (const ClassTerm& term : result.per_class) {
        per_class.push_back({{"class", term.class_id},
                             {"count", term.count},
                             {"term", round_for_report(term.term)}});
    }
    return nlohmann::json{{"method", result.method},
                          {"value", round_for_report(result.value)},
                          {"per_class", per_class},
                          {"warnings", result.warnings},
                          {"notes", result.notes},
                          {"timing", {{"wall_time_seconds", round_for_report(result.wall_time)}}}};
}

nlohmann::json sweep_to_json(const std::vector<SweepEntry>& entries) {
    nlohmann::json list = nlohmann::json::array();
    for (const SweepEntry& entry : entries) {
        nlohmann::json item{{"k", entry.k}, {"valid", entry.valid}, {"warnings", entry.warnings}};
        if (entry.valid) {
            item["value"] = round_for_report(entry.value);
        }
        list.push_back(std::move(item));
    }
    return nlohmann::json{{"method", "tmi"}, {"entries", list}};
}

nlohmann::json report_to_json(const RankingReport& report) {
    nlohmann::json methods = nlohmann::json::array();
    for (std::size_t r = 0; r < report.rows.size(); ++r) {
        const MethodReportRow& row = report.rows[r];
        const MethodScores& raw = report.raw[r];
        nlohmann::json scores = nlohmann::json::array();
        nlohmann::json times = nlohmann::json::array();
        for (const std::string& id : report.model_ids) {
            const auto it = std::find(raw.model_ids.begin(), raw.model_ids.end(), id);
            const auto idx = static_cast<std::size_t>(it - raw.model_ids.begin());
            scores.push_back(round_for_report(raw.scores[idx]));
            times.push_back(round_for_report(raw.wall_times[idx]));
        }
        nlohmann::json entry{{"method", row.method},
                             {"orientation", orientation_name(row.orientation)},
                             {"scores", scores},
                             {"warnings", row.warnings},
                             {"timing", {{"total_seconds", round_for_report(row.total_time)},
                                         {"per_model_seconds", times}}}};
        if (row.tau.has_value()) {
            entry["kendall_tau"] = round_for_report(*row.tau);
        } else if (report.accuracies.has_value()) {
            entry["kendall_tau"] = nullptr;
        }
        if (!row.top_k_hits.empty()) {
            nlohmann::json hits;
            for (const auto& [k, hit] : row.top_k_hits) {
                hits[std::to_string(k)] = hit;
            }
            entry["top_k_hits"] = hits;
        }
        methods.push_back(std::move(entry));
    }

    nlohmann::json doc{{"schema", "tmi-ranking-report/1"},
                       {"tau_variant", "kendall-tau-b"},
                       {"orientation_note",
                        "lower_better scores are negated before ranking comparisons"},
                       {"models", report.model_ids},
                       {"ks", report.ks},
                       {"methods", methods},
                       {"warnings", report.warnings}};
    if (report.accuracies.has_value()) {
        nlohmann::json acc;
        for (std::size_t i = 0; i < report.accuracies->size(); ++i) {
            acc[report.accuracies->model_ids()[i]] =
                round_for_report(report.accuracies->accuracies()[i]);
        }
        doc["accuracies"] = acc;
    }
    return doc;
}

}  // namespace tmi
