#include <fstream>

#include <doctest.h>
#include <nlohmann/json.hpp>

#include "tmi/io.hpp"
#include "tmi/manifest.hpp"
#include "tmi/methods.hpp"
#include "tmi/synthetic.hpp"
#include "test_util.hpp"

using namespace tmi;

namespace {

std::pair<FeatureMatrix, LabelVector> small_dataset(std::uint64_t seed) {
    SyntheticSpec spec;
    spec.num_classes = 3;
    spec.samples_per_class = {40, 40, 40};
    spec.dim = 3;
    spec.class_means = Matrix::Zero(3, 3);
    spec.class_means.row(1).setConstant(3.0);
    spec.class_means.row(2).setConstant(-3.0);
    spec.class_spreads = {1.0, 1.0, 1.0};
    spec.seed = seed;
    return generate_synthetic(spec);
}

SourcePredictionMatrix uniform_predictions(Eigen::Index n, Eigen::Index num_source) {
    return SourcePredictionMatrix(
        Matrix::Constant(n, num_source, 1.0 / static_cast<double>(num_source)));
}

void write_text(const std::string& path, const std::string& content) {
    std::ofstream out(path);
    out << content;
}

}  // namespace

TEST_CASE("the registry is the documented closed set") {
    const std::vector<std::string> expected = {"tmi",      "icv_contrast", "icv_center",
                                               "icv_snca", "icv_ms",       "nce",
                                               "leep",     "logme",        "hscore",
                                               "transrate"};
    CHECK(method_names() == expected);
    for (const std::string& name : expected) {
        CHECK(is_registered_method(name));
    }
    CHECK(!is_registered_method("taskonomy"));
}

TEST_CASE("orientations: icv measures are lower_better, everything else higher_better") {
    CHECK(method_orientation("tmi") == Orientation::higher_better);
    CHECK(method_orientation("nce") == Orientation::higher_better);
    CHECK(method_orientation("icv_contrast") == Orientation::lower_better);
    CHECK(method_orientation("icv_center") == Orientation::lower_better);
    CHECK(method_orientation("icv_snca") == Orientation::lower_better);
    CHECK(method_orientation("icv_ms") == Orientation::lower_better);
}

TEST_CASE("run_method dispatches every registered method") {
    const auto [features, labels] = small_dataset(1);
    const SourcePredictionMatrix preds = uniform_predictions(features.rows(), 4);
    MethodConfig config;
    config.k = 3;
    for (const std::string& method : method_names()) {
        const ScoreResult result = run_method(method, features, labels, &preds, config);
        CHECK(result.method == method);
        CHECK(std::isfinite(result.value));
        CHECK(result.wall_time >= 0.0);
    }
}

TEST_CASE("run_method rejects unknown methods and missing predictions") {
    const auto [features, labels] = small_dataset(2);
    MethodConfig config;
    CHECK_THROWS_AS(run_method("unknown", features, labels, nullptr, config), UsageError);
    CHECK_THROWS_WITH_AS(run_method("nce", features, labels, nullptr, config),
                         doctest::Contains("--source-preds"), UsageError);
    CHECK_THROWS_WITH_AS(run_method("leep", features, labels, nullptr, config),
                         doctest::Contains("--source-preds"), UsageError);
}

TEST_CASE("standardize flag transforms features and records a warning") {
    const auto [features, labels] = small_dataset(3);
    MethodConfig config;
    config.standardize = true;
    const ScoreResult result = run_method("tmi", features, labels, nullptr, config);
    bool noted = false;
    for (const std::string& w : result.warnings) {
        if (w.find("standardized") != std::string::npos) noted = true;
    }
    CHECK(noted);
    MethodConfig raw_config;
    const ScoreResult raw = run_method("tmi", features, labels, nullptr, raw_config);
    CHECK(result.value != raw.value);
}

TEST_CASE("config overrides parse and validate") {
    MethodConfig config;
    config.apply_pair("k=7");
    CHECK(config.k == 7);
    config.apply_pair("hscore_ridge=1e-6");
    CHECK(config.baselines.hscore_ridge == 1e-6);
    config.apply_pair("logme_max_iter=50");
    config.apply_pair("logme_tol=1e-8");
    config.apply_pair("transrate_eps=1e-3");
    config.apply_pair("snca_temperature=2.5");
    config.apply_pair("ms_alpha=4");
    config.apply_pair("ms_lambda=-0.25");
    config.apply_pair("backend=brute_force");
    config.apply_pair("standardize=true");
    CHECK(config.backend == NeighborBackend::brute_force);
    CHECK(config.standardize);

    CHECK_THROWS_AS(config.apply_pair("nope=1"), UsageError);
    CHECK_THROWS_AS(config.apply_pair("k=zero"), UsageError);
    CHECK_THROWS_AS(config.apply_pair("k=0"), UsageError);
    CHECK_THROWS_AS(config.apply_pair("malformed"), UsageError);
}

TEST_CASE("manifest parses, validates and runs end to end") {
    test::TempDir dir("manifest");
    const auto [features_a, labels] = small_dataset(10);
    const auto [features_b, labels_b] = small_dataset(11);
    save_features(features_a, dir.file("a.csv"), FileFormat::csv);
    save_features(features_b, dir.file("b.csv"), FileFormat::csv);
    save_labels(labels, dir.file("labels.txt"));
    write_text(dir.file("acc.csv"), "a,0.8\nb,0.9\n");

    const nlohmann::json doc{
        {"labels", dir.file("labels.txt")},
        {"accuracies", dir.file("acc.csv")},
        {"methods", {"tmi", "hscore", "icv_center"}},
        {"config", {{"k", "3"}}},
        {"top_k", {1, 2}},
        {"output", dir.file("report.json")},
        {"models",
         {{{"id", "a"}, {"features", dir.file("a.csv")}},
          {{"id", "b"}, {"features", dir.file("b.csv")}}}}};
    write_text(dir.file("manifest.json"), doc.dump());

    const RunManifest manifest = RunManifest::parse_file(dir.file("manifest.json"));
    CHECK(manifest.entries.size() == 2);
    CHECK(manifest.ks == std::vector<int>{1, 2});

    const RankingReport report = run_manifest(manifest);
    REQUIRE(report.rows.size() == 3);
    CHECK(report.model_ids == std::vector<std::string>{"a", "b"});
    for (const MethodReportRow& row : report.rows) {
        CHECK(row.tau.has_value());
        CHECK(row.top_k_hits.size() == 2);
    }
    // rows sorted by method name
    CHECK(report.rows[0].method == "hscore");
    CHECK(report.rows[1].method == "icv_center");
    CHECK(report.rows[2].method == "tmi");
}

TEST_CASE("manifest validation rejects duplicates and unknown methods") {
    RunManifest manifest;
    manifest.labels_path = "l";
    manifest.output_path = "o";
    manifest.methods = {"tmi"};
    manifest.entries = {{"m", "f1", std::nullopt}, {"m", "f2", std::nullopt}};
    CHECK_THROWS_WITH_AS(manifest.validate(), doctest::Contains("duplicate"), ValidationError);

    manifest.entries = {{"m1", "f1", std::nullopt}, {"m2", "f1", std::nullopt}};
    CHECK_THROWS_WITH_AS(manifest.validate(), doctest::Contains("allow_shared_paths"),
                         ValidationError);
    manifest.allow_shared_paths = true;
    CHECK_NOTHROW(manifest.validate());

    manifest.methods = {"tmi", "mystery"};
    CHECK_THROWS_WITH_AS(manifest.validate(), doctest::Contains("mystery"), ValidationError);
}

TEST_CASE("a model that fails to score is dropped with warnings, run continues") {
    test::TempDir dir("partial");
    const auto [features, labels] = small_dataset(12);
    save_features(features, dir.file("good.csv"), FileFormat::csv);
    save_labels(labels, dir.file("labels.txt"));
    write_text(dir.file("bad.csv"), "1.0,nan,2.0\n");
    write_text(dir.file("acc.csv"), "good,0.8\nbad,0.9\n");

    RunManifest manifest;
    manifest.labels_path = dir.file("labels.txt");
    manifest.accuracies_path = dir.file("acc.csv");
    manifest.methods = {"icv_center"};
    manifest.output_path = dir.file("report.json");
    manifest.entries = {{"good", dir.file("good.csv"), std::nullopt},
                        {"bad", dir.file("bad.csv"), std::nullopt}};

    const RankingReport report = run_manifest(manifest);
    CHECK(report.model_ids == std::vector<std::string>{"good"});
    bool dropped = false;
    for (const std::string& w : report.warnings) {
        if (w.find("'bad' dropped") != std::string::npos) dropped = true;
    }
    CHECK(dropped);
}

TEST_CASE("manifest run fails when every model fails") {
    test::TempDir dir("allfail");
    const auto [features, labels] = small_dataset(13);
    save_labels(labels, dir.file("labels.txt"));

    RunManifest manifest;
    manifest.labels_path = dir.file("labels.txt");
    manifest.methods = {"tmi"};
    manifest.output_path = dir.file("report.json");
    manifest.entries = {{"missing", dir.file("nope.csv"), std::nullopt}};
    CHECK_THROWS_AS(run_manifest(manifest), ComputeError);
}
