#include "tmi/types.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_set>

namespace tmi {

FeatureMatrix::FeatureMatrix(Matrix data) : data_(std::move(data)) {
    if (data_.rows() < 1 || data_.cols() < 1) {
        throw ValidationError("feature matrix must have at least 1 row and 1 column, got " +
                              std::to_string(data_.rows()) + "x" + std::to_string(data_.cols()));
    }
    for (Eigen::Index i = 0; i < data_.rows(); ++i) {
        for (Eigen::Index j = 0; j < data_.cols(); ++j) {
            if (!std::isfinite(data_(i, j))) {
                throw ValidationError("non-finite feature value at row " + std::to_string(i) +
                                      ", column " + std::to_string(j));
            }
        }
    }
}

LabelVector::LabelVector(std::vector<std::int32_t> labels, std::int32_t num_classes)
    : labels_(std::move(labels)), num_classes_(num_classes) {
    if (labels_.empty()) {
        throw ValidationError("label vector must not be empty");
    }
    if (num_classes_ < 1) {
        throw ValidationError("num_classes must be >= 1, got " + std::to_string(num_classes_));
    }
    for (std::size_t i = 0; i < labels_.size(); ++i) {
        if (labels_[i] < 0 || labels_[i] >= num_classes_) {
            throw ValidationError("label " + std::to_string(labels_[i]) + " at index " +
                                  std::to_string(i) + " outside [0, " +
                                  std::to_string(num_classes_) + ")");
        }
    }
}

LabelVector LabelVector::infer(std::vector<std::int32_t> labels) {
    if (labels.empty()) {
        throw ValidationError("label vector must not be empty");
    }
    std::int32_t max_label = *std::max_element(labels.begin(), labels.end());
    std::int32_t min_label = *std::min_element(labels.begin(), labels.end());
    if (min_label < 0) {
        throw ValidationError("negative label " + std::to_string(min_label));
    }
    return LabelVector(std::move(labels), max_label + 1);
}

std::vector<Eigen::Index> LabelVector::class_counts() const {
    std::vector<Eigen::Index> counts(static_cast<std::size_t>(num_classes_), 0);
    for (std::int32_t label : labels_) {
        ++counts[static_cast<std::size_t>(label)];
    }
    return counts;
}

SourcePredictionMatrix::SourcePredictionMatrix(Matrix probs) : probs_(std::move(probs)) {
    if (probs_.rows() < 1 || probs_.cols() < 1) {
        throw ValidationError("prediction matrix must have at least 1 row and 1 column");
    }
    constexpr double kRowSumTolerance = 1e-6;
    for (Eigen::Index i = 0; i < probs_.rows(); ++i) {
        double row_sum = 0.0;
        for (Eigen::Index j = 0; j < probs_.cols(); ++j) {
            const double p = probs_(i, j);
            if (!std::isfinite(p) || p < 0.0 || p > 1.0) {
                throw ValidationError("prediction entry at row " + std::to_string(i) +
                                      ", column " + std::to_string(j) + " outside [0, 1]");
            }
            row_sum += p;
        }
        if (std::abs(row_sum - 1.0) > kRowSumTolerance) {
            throw ValidationError("prediction row " + std::to_string(i) + " sums to " +
                                  std::to_string(row_sum) + ", expected 1 within 1e-6");
        }
    }
}

AccuracyVector::AccuracyVector(std::vector<std::string> model_ids, std::vector<double> accuracies)
    : model_ids_(std::move(model_ids)), accuracies_(std::move(accuracies)) {
    if (model_ids_.size() != accuracies_.size()) {
        throw ValidationError("model id count (" + std::to_string(model_ids_.size()) +
                              ") does not match accuracy count (" +
                              std::to_string(accuracies_.size()) + ")");
    }
    if (model_ids_.empty()) {
        throw ValidationError("accuracy vector must not be empty");
    }
    std::unordered_set<std::string> seen;
    for (const std::string& id : model_ids_) {
        if (!seen.insert(id).second) {
            throw ValidationError("duplicate model id '" + id + "'");
        }
    }
    for (std::size_t i = 0; i < accuracies_.size(); ++i) {
        if (!std::isfinite(accuracies_[i]) || accuracies_[i] < 0.0 || accuracies_[i] > 1.0) {
            throw ValidationError("accuracy for model '" + model_ids_[i] +
                                  "' outside [0, 1]: " + std::to_string(accuracies_[i]));
        }
    }
}

std::optional<double> AccuracyVector::find(const std::string& model_id) const {
    for (std::size_t i = 0; i < model_ids_.size(); ++i) {
        if (model_ids_[i] == model_id) {
            return accuracies_[i];
        }
    }
    return std::nullopt;
}

std::vector<Matrix> split_by_class(const FeatureMatrix& features, const LabelVector& labels) {
    if (features.rows() != labels.size()) {
        throw ValidationError("feature row count (" + std::to_string(features.rows()) +
                              ") does not match label count (" + std::to_string(labels.size()) +
                              ")");
    }
    const std::vector<Eigen::Index> counts = labels.class_counts();
    std::vector<Matrix> blocks(counts.size());
    for (std::size_t c = 0; c < counts.size(); ++c) {
        blocks[c].resize(counts[c], features.cols());
    }
    std::vector<Eigen::Index> next(counts.size(), 0);
    for (Eigen::Index i = 0; i < features.rows(); ++i) {
        const auto c = static_cast<std::size_t>(labels[i]);
        blocks[c].row(next[c]++) = features.data().row(i);
    }
    return blocks;
}

}  // namespace tmi
