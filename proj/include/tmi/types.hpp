#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "tmi/error.hpp"

namespace tmi {

// Row-major so that one sample occupies one contiguous block of memory.
using Matrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

/// n x d matrix of embedding coordinates, one sample per row.
/// Immutable after construction; every entry is finite, n >= 1, d >= 1.
class FeatureMatrix {
public:
    explicit FeatureMatrix(Matrix data);

    Eigen::Index rows() const { return data_.rows(); }
    Eigen::Index cols() const { return data_.cols(); }
    const Matrix& data() const { return data_; }
    const double* row_ptr(Eigen::Index i) const { return data_.data() + i * data_.cols(); }

private:
    Matrix data_;
};

/// Length-n sequence of class ids in [0, num_classes). Classes may be empty:
/// num_classes is an upper bound on the ids present, not a census.
class LabelVector {
public:
    LabelVector(std::vector<std::int32_t> labels, std::int32_t num_classes);

    // num_classes = max(label) + 1
    static LabelVector infer(std::vector<std::int32_t> labels);

    Eigen::Index size() const { return static_cast<Eigen::Index>(labels_.size()); }
    std::int32_t num_classes() const { return num_classes_; }
    std::int32_t operator[](Eigen::Index i) const { return labels_[static_cast<std::size_t>(i)]; }
    const std::vector<std::int32_t>& values() const { return labels_; }

    /// Number of samples per class, length num_classes.
    std::vector<Eigen::Index> class_counts() const;

private:
    std::vector<std::int32_t> labels_;
    std::int32_t num_classes_;
};

/// n x C_s matrix of source-classifier probabilities; each row sums to 1
/// within 1e-6 and every entry lies in [0, 1].
class SourcePredictionMatrix {
public:
    explicit SourcePredictionMatrix(Matrix probs);

    Eigen::Index rows() const { return probs_.rows(); }
    Eigen::Index num_source_classes() const { return probs_.cols(); }
    const Matrix& probs() const { return probs_; }

private:
    Matrix probs_;
};

/// Fine-tuned test accuracies keyed by model id. Ids are unique; accuracies
/// are finite and in [0, 1].
class AccuracyVector {
public:
    AccuracyVector(std::vector<std::string> model_ids, std::vector<double> accuracies);

    std::size_t size() const { return model_ids_.size(); }
    const std::vector<std::string>& model_ids() const { return model_ids_; }
    const std::vector<double>& accuracies() const { return accuracies_; }

    /// Accuracy for one id, or nullopt if absent.
    std::optional<double> find(const std::string& model_id) const;

private:
    std::vector<std::string> model_ids_;
    std::vector<double> accuracies_;
};

/// Partition features by class. Element c holds the rows labelled c in their
/// original relative order; classes that never occur yield 0-row matrices.
std::vector<Matrix> split_by_class(const FeatureMatrix& features, const LabelVector& labels);

}  // namespace tmi
