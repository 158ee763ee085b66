#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "tmi/io.hpp"
#include "tmi/manifest.hpp"
#include "tmi/methods.hpp"
#include "tmi/ranking.hpp"
#include "tmi/synthetic.hpp"

namespace {

// Exit codes: 0 success, 1 data/computation error, 2 usage error.
constexpr int kExitData = 1;
constexpr int kExitUsage = 2;

std::vector<double> parse_double_list(const std::string& text, const std::string& flag) {
    std::vector<double> out;
    std::size_t start = 0;
    while (start <= text.size()) {
        const std::size_t comma = text.find(',', start);
        const std::string token =
            text.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
        try {
            std::size_t used = 0;
            out.push_back(std::stod(token, &used));
            if (used != token.size()) throw std::invalid_argument(token);
        } catch (const std::exception&) {
            throw tmi::UsageError(flag + ": cannot parse '" + token + "' as a number");
        }
        if (comma == std::string::npos) break;
        start = comma + 1;
    }
    return out;
}

std::vector<int> parse_int_list(const std::string& text, const std::string& flag) {
    std::vector<int> out;
    for (double v : parse_double_list(text, flag)) {
        const int i = static_cast<int>(v);
        if (static_cast<double>(i) != v) {
            throw tmi::UsageError(flag + ": expected integers");
        }
        out.push_back(i);
    }
    return out;
}

struct ScoreArgs {
    std::string features_path;
    std::string labels_path;
    std::string method;
    std::string source_preds_path;
    std::string format = "csv";
    std::string backend = "tree";
    int k = 3;
    bool standardize = false;
    std::vector<std::string> config_pairs;
    int num_classes = 0;  // 0 = infer
};

tmi::MethodConfig build_config(const ScoreArgs& args) {
    tmi::MethodConfig config;
    config.k = args.k;
    config.standardize = args.standardize;
    config.backend = tmi::parse_backend(args.backend);
    for (const std::string& pair : args.config_pairs) {
        config.apply_pair(pair);
    }
    if (config.k < 1) {
        throw tmi::UsageError("--k must be >= 1");
    }
    return config;
}

int cmd_score(const ScoreArgs& args) {
    const tmi::MethodConfig config = build_config(args);
    const tmi::FileFormat format = tmi::parse_format(args.format);
    if (!tmi::is_registered_method(args.method)) {
        std::string known;
        for (const std::string& name : tmi::method_names()) {
            if (!known.empty()) known += ", ";
            known += name;
        }
        throw tmi::UsageError("unknown method '" + args.method +
                              "'; registered methods: " + known);
    }
    if (tmi::method_needs_source_preds(args.method) && args.source_preds_path.empty()) {
        throw tmi::UsageError("method '" + args.method + "' requires --source-preds");
    }

    const tmi::FeatureMatrix features = tmi::load_features(args.features_path, format);
    const tmi::LabelVector labels =
        args.num_classes > 0
            ? tmi::load_labels(args.labels_path, args.num_classes)
            : tmi::load_labels(args.labels_path);
    std::optional<tmi::SourcePredictionMatrix> preds;
    if (!args.source_preds_path.empty()) {
        preds = tmi::load_source_predictions(args.source_preds_path, format);
    }

    const tmi::ScoreResult result = tmi::run_method(
        args.method, features, labels, preds.has_value() ? &*preds : nullptr, config);
    std::cout << tmi::score_result_to_json(result).dump() << "\n";
    return 0;
}

int cmd_rank(const std::string& manifest_path) {
    const tmi::RunManifest manifest = tmi::RunManifest::parse_file(manifest_path);
    const tmi::RankingReport report = tmi::run_manifest(manifest);
    std::ofstream out(manifest.output_path);
    if (!out) {
        throw tmi::ParseError("cannot open report output: " + manifest.output_path);
    }
    out << tmi::report_to_json(report).dump(2) << "\n";
    if (!out) {
        throw tmi::ParseError("write failed: " + manifest.output_path);
    }
    for (const std::string& warning : report.warnings) {
        std::cerr << "warning: " << warning << "\n";
    }
    return 0;
}

struct SynthArgs {
    int num_classes = 2;
    std::string counts = "100,100";
    int dim = 2;
    std::string means;    // "m00,m01;m10,m11", defaults to zeros
    std::string spreads;  // defaults to all 1
    std::uint64_t seed = 0;
    std::string out_prefix;
    std::string format = "csv";
};

int cmd_synth(const SynthArgs& args) {
    tmi::SyntheticSpec spec;
    spec.num_classes = args.num_classes;
    spec.dim = args.dim;
    spec.seed = args.seed;
    for (int count : parse_int_list(args.counts, "--counts")) {
        spec.samples_per_class.push_back(count);
    }
    if (args.spreads.empty()) {
        spec.class_spreads.assign(static_cast<std::size_t>(args.num_classes), 1.0);
    } else {
        spec.class_spreads = parse_double_list(args.spreads, "--spreads");
    }
    spec.class_means = tmi::Matrix::Zero(args.num_classes, args.dim);
    if (!args.means.empty()) {
        std::size_t start = 0;
        int row = 0;
        while (start <= args.means.size() && row < args.num_classes) {
            const std::size_t semi = args.means.find(';', start);
            const std::string row_text = args.means.substr(
                start, semi == std::string::npos ? std::string::npos : semi - start);
            const std::vector<double> values = parse_double_list(row_text, "--means");
            if (static_cast<int>(values.size()) != args.dim) {
                throw tmi::UsageError("--means: row " + std::to_string(row) + " has " +
                                      std::to_string(values.size()) + " values, expected " +
                                      std::to_string(args.dim));
            }
            for (int t = 0; t < args.dim; ++t) {
                spec.class_means(row, t) = values[static_cast<std::size_t>(t)];
            }
            ++row;
            if (semi == std::string::npos) break;
            start = semi + 1;
        }
        if (row != args.num_classes) {
            throw tmi::UsageError("--means: expected " + std::to_string(args.num_classes) +
                                  " semicolon-separated rows");
        }
    }
    try {
        spec.validate();
    } catch (const tmi::ValidationError& e) {
        throw tmi::UsageError(e.what());
    }

    const tmi::FileFormat format = tmi::parse_format(args.format);
    const auto [features, labels] = tmi::generate_synthetic(spec);
    const std::string features_path =
        args.out_prefix + (format == tmi::FileFormat::csv ? "_features.csv" : "_features.bin");
    const std::string labels_path = args.out_prefix + "_labels.txt";
    tmi::save_features(features, features_path, format);
    tmi::save_labels(labels, labels_path);

    nlohmann::json means = nlohmann::json::array();
    for (int c = 0; c < spec.num_classes; ++c) {
        nlohmann::json row = nlohmann::json::array();
        for (int t = 0; t < spec.dim; ++t) row.push_back(spec.class_means(c, t));
        means.push_back(std::move(row));
    }
    const nlohmann::json doc{{"num_classes", spec.num_classes},
                             {"samples_per_class", spec.samples_per_class},
                             {"dim", spec.dim},
                             {"class_means", means},
                             {"class_spreads", spec.class_spreads},
                             {"seed", spec.seed},
                             {"generator", "mt19937_64 + Box-Muller"},
                             {"files", {{"features", features_path}, {"labels", labels_path}}}};
    std::cout << doc.dump() << "\n";
    return 0;
}

struct SweepArgs {
    std::string features_path;
    std::string labels_path;
    std::string ks;
    std::string format = "csv";
    std::string backend = "tree";
    bool standardize = false;
};

int cmd_sweep(const SweepArgs& args) {
    const tmi::FileFormat format = tmi::parse_format(args.format);
    const tmi::NeighborBackend backend = tmi::parse_backend(args.backend);
    const std::vector<int> ks = parse_int_list(args.ks, "--ks");

    tmi::FeatureMatrix features = tmi::load_features(args.features_path, format);
    const tmi::LabelVector labels = tmi::load_labels(args.labels_path);
    if (args.standardize) {
        features = tmi::standardize_features(features);
    }
    const std::vector<tmi::SweepEntry> entries =
        tmi::sensitivity_sweep(features, labels, ks, backend);
    std::cout << tmi::sweep_to_json(entries).dump() << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Transferability scoring for pre-trained model selection"};
    app.require_subcommand(1);

    ScoreArgs score_args;
    CLI::App* score = app.add_subcommand("score", "Score one feature matrix with one method");
    score->add_option("--features", score_args.features_path, "Feature matrix path")->required();
    score->add_option("--labels", score_args.labels_path, "Label file path")->required();
    score->add_option("--method", score_args.method, "Method name")->required();
    score->add_option("--source-preds", score_args.source_preds_path,
                      "Source prediction matrix (nce/leep)");
    score->add_option("--k", score_args.k, "Entropy neighbor count");
    score->add_flag("--standardize", score_args.standardize,
                    "Standardize features per dimension first");
    score->add_option("--format", score_args.format, "Matrix file format: csv|binary");
    score->add_option("--backend", score_args.backend, "Neighbor backend: brute_force|tree");
    score->add_option("--config", score_args.config_pairs, "KEY=VAL overrides");
    score->add_option("--num-classes", score_args.num_classes,
                      "Class count (default: infer from labels)");

    std::string manifest_path;
    CLI::App* rank = app.add_subcommand("rank", "Score a model pool from a manifest");
    rank->add_option("--manifest", manifest_path, "Run manifest JSON path")->required();

    SynthArgs synth_args;
    CLI::App* synth = app.add_subcommand("synth", "Generate a Gaussian-blob dataset");
    synth->add_option("--out-prefix", synth_args.out_prefix, "Output path prefix")->required();
    synth->add_option("--classes", synth_args.num_classes, "Number of classes");
    synth->add_option("--counts", synth_args.counts, "Samples per class, comma-separated");
    synth->add_option("--dim", synth_args.dim, "Feature dimension");
    synth->add_option("--means", synth_args.means,
                      "Class means, rows separated by ';', values by ','");
    synth->add_option("--spreads", synth_args.spreads, "Per-class standard deviations");
    synth->add_option("--seed", synth_args.seed, "Generator seed");
    synth->add_option("--format", synth_args.format, "Feature file format: csv|binary");

    SweepArgs sweep_args;
    CLI::App* sweep = app.add_subcommand("sweep", "TMI sensitivity over neighbor counts");
    sweep->add_option("--features", sweep_args.features_path, "Feature matrix path")->required();
    sweep->add_option("--labels", sweep_args.labels_path, "Label file path")->required();
    sweep->add_option("--ks", sweep_args.ks, "Comma-separated neighbor counts")->required();
    sweep->add_option("--format", sweep_args.format, "Matrix file format: csv|binary");
    sweep->add_option("--backend", sweep_args.backend, "Neighbor backend: brute_force|tree");
    sweep->add_flag("--standardize", sweep_args.standardize,
                    "Standardize features per dimension first");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    }

    try {
        if (score->parsed()) return cmd_score(score_args);
        if (rank->parsed()) return cmd_rank(manifest_path);
        if (synth->parsed()) return cmd_synth(synth_args);
        return cmd_sweep(sweep_args);
    } catch (const tmi::UsageError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const tmi::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitData;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitData;
    }
}
