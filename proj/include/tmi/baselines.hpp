#pragma once

#include <vector>

#include "tmi/scores.hpp"
#include "tmi/types.hpp"

namespace tmi {

struct BaselineConfig {
    // Covariance regularizer, relative: ridge = hscore_ridge * trace(cov) / d.
    double hscore_ridge = 1e-8;
    int logme_max_iter = 100;
    double logme_tol = 1e-6;
    double transrate_eps = 1e-4;

    void validate() const;
};

/// Negative conditional entropy -H(Y|Z) of target labels given hard source
/// pseudo-labels (row argmax, ties to the lowest class index). Always <= 0;
/// 0 exactly when Z determines Y.
ScoreResult nce(const SourcePredictionMatrix& source_preds, const LabelVector& labels);

/// Mean log-likelihood of target labels under the empirical label-transfer
/// distribution built from soft source predictions. Always <= 0.
ScoreResult leep(const SourcePredictionMatrix& source_preds, const LabelVector& labels);

/// Mean (over classes) maximized Bayesian-linear-regression log-evidence per
/// sample, fitting each one-hot class indicator from the features.
ScoreResult logme(const FeatureMatrix& features, const LabelVector& labels,
                  const BaselineConfig& config = {});

/// trace(cov(features)^-1 * between_class_cov): how much of the feature
/// variance lies along class-mean directions.
ScoreResult hscore(const FeatureMatrix& features, const LabelVector& labels,
                   const BaselineConfig& config = {});

/// Coding-rate gap R(Z) - R(Z|Y), a log-determinant surrogate for the
/// label/feature mutual information. R(Z) uses globally centered features;
/// the per-class rates center each class block at its own mean so that the
/// class-mean offsets carry signal into the gap.
ScoreResult transrate(const FeatureMatrix& features, const LabelVector& labels,
                      const BaselineConfig& config = {});

/// One class's evidence maximization, exposed for direct testing.
struct LogmeClassFit {
    double evidence = 0.0;  // final log-evidence
    double alpha = 1.0;
    double beta = 1.0;
    int iterations = 0;
    bool converged = false;
    std::vector<double> trajectory;  // accepted evidence per step, non-decreasing
};

/// Alternating fixed point on (alpha, beta) over the eigendecomposition of
/// the feature Gram matrix. sigma holds the eigenvalues of X^T X and z the
/// projection of X^T y onto the eigenbasis; y_squared_norm = y^T y. A step
/// that would lower the evidence is rejected and the loop stops, so the
/// recorded trajectory never decreases.
LogmeClassFit logme_fit_class(const Eigen::VectorXd& sigma, const Eigen::VectorXd& z,
                              double y_squared_norm, Eigen::Index n,
                              const BaselineConfig& config);

}  // namespace tmi
