#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "tmi/entropy.hpp"
#include "tmi/types.hpp"

namespace tmi {

/// One per-class diagnostic: class id, sample count, and the class's
/// contribution term (entropy for tmi, the per-class average term for the
/// other measures).
struct ClassTerm {
    std::int32_t class_id = 0;
    Eigen::Index count = 0;
    double term = 0.0;
};

struct ScoreResult {
    std::string method;
    double value = 0.0;
    double wall_time = 0.0;  // seconds, computation only (no file I/O)
    std::vector<ClassTerm> per_class;
    std::vector<std::string> warnings;  // skipped classes, clamps, floors
    std::vector<std::string> notes;     // fixed conventions, e.g. sign direction
};

/// Class-prior-weighted sum of per-class differential entropies, i.e. the
/// conditional entropy H(features | label) estimated with knn_entropy.
/// Classes with fewer than 2 samples are skipped and the weights renormalize
/// over the included classes; k is clamped to n_c - 1 per class. Larger
/// values mean more intra-class variance.
ScoreResult tmi_score(const FeatureMatrix& features, const LabelVector& labels, int k,
                      NeighborBackend backend = NeighborBackend::tree);

/// Mean squared Euclidean distance over all intra-class sample pairs.
ScoreResult icv_contrast(const FeatureMatrix& features, const LabelVector& labels);

/// Mean squared distance of each sample to its class centroid.
ScoreResult icv_center(const FeatureMatrix& features, const LabelVector& labels);

/// Soft-neighborhood loss: negative mean log of the within-class share of
/// each sample's softmax neighborhood (Gaussian kernel over squared
/// distances at the given temperature). Lower means tighter classes.
ScoreResult icv_snca(const FeatureMatrix& features, const LabelVector& labels,
                     double temperature);

/// Positive-pair term of the multi-similarity loss on cosine similarities;
/// rows are L2-normalized internally. Lower means tighter classes.
ScoreResult icv_ms(const FeatureMatrix& features, const LabelVector& labels, double alpha,
                   double lambda);

/// Per-dimension (x - mean) / stddev transform; constant dimensions are
/// only centered. Opt-in preprocessing for any score.
FeatureMatrix standardize_features(const FeatureMatrix& features);

}  // namespace tmi
