#include "tmi/scores.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "tmi/stopwatch.hpp"

namespace tmi {

namespace {

void check_paired(const FeatureMatrix& features, const LabelVector& labels) {
    if (features.rows() != labels.size()) {
        throw ValidationError("feature row count (" + std::to_string(features.rows()) +
                              ") does not match label count (" + std::to_string(labels.size()) +
                              ")");
    }
}

struct ClassStats {
    std::vector<Eigen::Index> counts;
    Matrix means;                // num_classes x d, zero rows for empty classes
    std::vector<double> ssr;     // sum of squared residuals to the class mean
};

ClassStats class_stats(const FeatureMatrix& features, const LabelVector& labels) {
    ClassStats stats;
    stats.counts = labels.class_counts();
    const auto num_classes = static_cast<Eigen::Index>(stats.counts.size());
    stats.means = Matrix::Zero(num_classes, features.cols());
    stats.ssr.assign(stats.counts.size(), 0.0);
    for (Eigen::Index i = 0; i < features.rows(); ++i) {
        stats.means.row(labels[i]) += features.data().row(i);
    }
    for (Eigen::Index c = 0; c < num_classes; ++c) {
        if (stats.counts[static_cast<std::size_t>(c)] > 0) {
            stats.means.row(c) /= static_cast<double>(stats.counts[static_cast<std::size_t>(c)]);
        }
    }
    for (Eigen::Index i = 0; i < features.rows(); ++i) {
        stats.ssr[static_cast<std::size_t>(labels[i])] +=
            (features.data().row(i) - stats.means.row(labels[i])).squaredNorm();
    }
    return stats;
}

}  // namespace

ScoreResult tmi_score(const FeatureMatrix& features, const LabelVector& labels, int k,
                      NeighborBackend backend) {
    check_paired(features, labels);
    if (k < 1) {
        throw ComputeError("tmi: k must be >= 1, got " + std::to_string(k));
    }
    Stopwatch timer;
    ScoreResult result;
    result.method = "tmi";

    const std::vector<Matrix> blocks = split_by_class(features, labels);
    Eigen::Index included_total = 0;
    for (const Matrix& block : blocks) {
        if (block.rows() >= 2) included_total += block.rows();
    }
    if (included_total == 0) {
        throw ComputeError("tmi: no scorable class (every class has fewer than 2 samples)");
    }

    double value = 0.0;
    for (std::size_t c = 0; c < blocks.size(); ++c) {
        const Matrix& block = blocks[c];
        if (block.rows() < 2) {
            result.warnings.push_back("class " + std::to_string(c) + " skipped: " +
                                      std::to_string(block.rows()) + " sample(s)");
            continue;
        }
        int class_k = k;
        if (static_cast<Eigen::Index>(class_k) > block.rows() - 1) {
            class_k = static_cast<int>(block.rows() - 1);
            result.warnings.push_back("class " + std::to_string(c) + ": k clamped to " +
                                      std::to_string(class_k) + " (" +
                                      std::to_string(block.rows()) + " samples)");
        }
        EntropyEstimate est;
        try {
            est = knn_entropy(block, class_k, backend);
        } catch (const ComputeError& e) {
            throw ComputeError("tmi: class " + std::to_string(c) + ": " + e.what());
        }
        if (est.num_clamped > 0) {
            result.warnings.push_back("class " + std::to_string(c) + ": " +
                                      std::to_string(est.num_clamped) +
                                      " neighbor distance(s) clamped");
        }
        const double weight =
            static_cast<double>(block.rows()) / static_cast<double>(included_total);
        value += weight * est.value;
        result.per_class.push_back(
            {static_cast<std::int32_t>(c), block.rows(), est.value});
    }
    result.value = value;
    result.wall_time = timer.seconds();
    return result;
}

ScoreResult icv_contrast(const FeatureMatrix& features, const LabelVector& labels) {
    check_paired(features, labels);
    Stopwatch timer;
    ScoreResult result;
    result.method = "icv_contrast";

    // sum_{i<j in class} ||r_i - r_j||^2 == n_c * sum_i ||r_i - mean_c||^2
    const ClassStats stats = class_stats(features, labels);
    double pair_sum = 0.0;
    double pair_count = 0.0;
    for (std::size_t c = 0; c < stats.counts.size(); ++c) {
        const auto n_c = static_cast<double>(stats.counts[c]);
        if (n_c < 2) continue;
        const double class_pairs = n_c * (n_c - 1.0) / 2.0;
        const double class_sum = n_c * stats.ssr[c];
        pair_sum += class_sum;
        pair_count += class_pairs;
        result.per_class.push_back(
            {static_cast<std::int32_t>(c), stats.counts[c], class_sum / class_pairs});
    }
    if (pair_count == 0.0) {
        throw ComputeError("icv_contrast: no intra-class pair");
    }
    result.value = pair_sum / pair_count;
    result.notes.push_back("lower value means tighter classes");
    result.wall_time = timer.seconds();
    return result;
}

ScoreResult icv_center(const FeatureMatrix& features, const LabelVector& labels) {
    check_paired(features, labels);
    Stopwatch timer;
    ScoreResult result;
    result.method = "icv_center";

    const ClassStats stats = class_stats(features, labels);
    double total = 0.0;
    for (std::size_t c = 0; c < stats.counts.size(); ++c) {
        if (stats.counts[c] == 0) continue;
        total += stats.ssr[c];
        result.per_class.push_back({static_cast<std::int32_t>(c), stats.counts[c],
                                    stats.ssr[c] / static_cast<double>(stats.counts[c])});
    }
    result.value = total / static_cast<double>(features.rows());
    result.notes.push_back("lower value means tighter classes");
    result.wall_time = timer.seconds();
    return result;
}

ScoreResult icv_snca(const FeatureMatrix& features, const LabelVector& labels,
                     double temperature) {
    check_paired(features, labels);
    if (!(temperature > 0.0)) {
        throw ComputeError("icv_snca: temperature must be > 0");
    }
    Stopwatch timer;
    ScoreResult result;
    result.method = "icv_snca";

    const Eigen::Index n = features.rows();
    const Eigen::Index d = features.cols();
    const std::vector<Eigen::Index> counts = labels.class_counts();

    std::vector<double> class_sums(counts.size(), 0.0);
    std::vector<Eigen::Index> class_included(counts.size(), 0);
    std::vector<Eigen::Index> class_excluded(counts.size(), 0);
    std::vector<double> neg_scaled(static_cast<std::size_t>(n));

    double total = 0.0;
    Eigen::Index included = 0;
    for (Eigen::Index i = 0; i < n; ++i) {
        const auto class_i = static_cast<std::size_t>(labels[i]);
        if (counts[class_i] < 2) {
            ++class_excluded[class_i];
            continue;
        }
        double max_term = -std::numeric_limits<double>::infinity();
        for (Eigen::Index j = 0; j < n; ++j) {
            if (j == i) continue;
            const double term =
                -squared_distance(features.row_ptr(i), features.row_ptr(j), d) / temperature;
            neg_scaled[static_cast<std::size_t>(j)] = term;
            max_term = std::max(max_term, term);
        }
        // One pass over j accumulates numerator and denominator with the same
        // shift and order, so a single-class input yields exactly 0.
        double num = 0.0;
        double den = 0.0;
        for (Eigen::Index j = 0; j < n; ++j) {
            if (j == i) continue;
            const double e = std::exp(neg_scaled[static_cast<std::size_t>(j)] - max_term);
            den += e;
            if (labels[j] == labels[i]) num += e;
        }
        const double contribution = std::log(num) - std::log(den);
        total += contribution;
        class_sums[class_i] += contribution;
        ++class_included[class_i];
        ++included;
    }
    for (std::size_t c = 0; c < counts.size(); ++c) {
        if (class_excluded[c] > 0) {
            result.warnings.push_back("class " + std::to_string(c) + ": " +
                                      std::to_string(class_excluded[c]) +
                                      " sample(s) with no same-class peer excluded");
        }
        if (class_included[c] > 0) {
            result.per_class.push_back({static_cast<std::int32_t>(c), counts[c],
                                        -class_sums[c] / static_cast<double>(class_included[c])});
        }
    }
    if (included == 0) {
        throw ComputeError("icv_snca: every sample lacks a same-class peer");
    }
    result.value = -total / static_cast<double>(included);
    result.notes.push_back("lower value means tighter classes");
    result.wall_time = timer.seconds();
    return result;
}

ScoreResult icv_ms(const FeatureMatrix& features, const LabelVector& labels, double alpha,
                   double lambda) {
    check_paired(features, labels);
    if (!(alpha > 0.0)) {
        throw ComputeError("icv_ms: alpha must be > 0");
    }
    Stopwatch timer;
    ScoreResult result;
    result.method = "icv_ms";

    const Eigen::Index n = features.rows();
    Matrix unit = features.data();
    for (Eigen::Index i = 0; i < n; ++i) {
        const double norm = unit.row(i).norm();
        if (norm == 0.0) {
            throw ValidationError("icv_ms: zero-norm feature row " + std::to_string(i));
        }
        unit.row(i) /= norm;
    }

    const std::vector<Eigen::Index> counts = labels.class_counts();
    std::vector<double> class_sums(counts.size(), 0.0);
    std::vector<Eigen::Index> class_no_peer(counts.size(), 0);

    double total = 0.0;
    std::vector<double> terms;
    for (Eigen::Index i = 0; i < n; ++i) {
        const auto class_i = static_cast<std::size_t>(labels[i]);
        terms.clear();
        double max_term = 0.0;  // ln(1 + S) form: the implicit 1 is exp(0)
        for (Eigen::Index j = 0; j < n; ++j) {
            if (j == i || labels[j] != labels[i]) continue;
            const double t = -alpha * (unit.row(i).dot(unit.row(j)) - lambda);
            terms.push_back(t);
            max_term = std::max(max_term, t);
        }
        if (terms.empty()) {
            ++class_no_peer[class_i];
            continue;  // contributes 0
        }
        double shifted = std::exp(-max_term);  // the leading 1
        for (double t : terms) {
            shifted += std::exp(t - max_term);
        }
        const double contribution = (max_term + std::log(shifted)) / alpha;
        total += contribution;
        class_sums[class_i] += contribution;
    }
    for (std::size_t c = 0; c < counts.size(); ++c) {
        if (class_no_peer[c] > 0) {
            result.warnings.push_back("class " + std::to_string(c) + ": " +
                                      std::to_string(class_no_peer[c]) +
                                      " sample(s) with no same-class peer contribute 0");
        }
        if (counts[c] > 0) {
            result.per_class.push_back({static_cast<std::int32_t>(c), counts[c],
                                        class_sums[c] / static_cast<double>(counts[c])});
        }
    }
    result.value = total / static_cast<double>(n);
    result.notes.push_back("lower value means tighter classes");
    result.wall_time = timer.seconds();
    return result;
}

FeatureMatrix standardize_features(const FeatureMatrix& features) {
    const Eigen::Index n = features.rows();
    Matrix out = features.data();
    for (Eigen::Index j = 0; j < out.cols(); ++j) {
        const double mean = out.col(j).mean();
        out.col(j).array() -= mean;
        const double sd = std::sqrt(out.col(j).squaredNorm() / static_cast<double>(n));
        if (sd > 0.0) {
            out.col(j) /= sd;
        }
    }
    return FeatureMatrix(std::move(out));
}

}  // namespace tmi
