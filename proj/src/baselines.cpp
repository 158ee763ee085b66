#include "tmi/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "tmi/stopwatch.hpp"

namespace tmi {

namespace {

constexpr double kPrecisionFloor = 1e-12;
constexpr double kPrecisionCeil = 1e12;
constexpr double kLeepFloor = 1e-30;

void check_pred_paired(const SourcePredictionMatrix& preds, const LabelVector& labels) {
    if (preds.rows() != labels.size()) {
        throw ValidationError("prediction row count (" + std::to_string(preds.rows()) +
                              ") does not match label count (" + std::to_string(labels.size()) +
                              ")");
    }
}

void check_feature_paired(const FeatureMatrix& features, const LabelVector& labels) {
    if (features.rows() != labels.size()) {
        throw ValidationError("feature row count (" + std::to_string(features.rows()) +
                              ") does not match label count (" + std::to_string(labels.size()) +
                              ")");
    }
}

double clamp_precision(double x) {
    if (!std::isfinite(x) || x > kPrecisionCeil) return kPrecisionCeil;
    if (x < kPrecisionFloor) return kPrecisionFloor;
    return x;
}

// Log-evidence of the Bayesian linear model at fixed prior/noise precisions,
// evaluated through the Gram eigendecomposition.
double log_evidence(const Eigen::VectorXd& sigma, const Eigen::VectorXd& z, double y_squared_norm,
                    double n, double alpha, double beta) {
    const auto d = static_cast<double>(sigma.size());
    double log_det = 0.0;
    double fit = 0.0;       // y^T F m / beta terms
    double curvature = 0.0; // m^T F^T F m
    double m_sq = 0.0;
    for (Eigen::Index j = 0; j < sigma.size(); ++j) {
        const double t = alpha + beta * sigma[j];
        const double zj2 = z[j] * z[j];
        log_det += std::log(t);
        fit += zj2 / t;
        curvature += sigma[j] * zj2 / (t * t);
        m_sq += zj2 / (t * t);
    }
    m_sq *= beta * beta;
    const double residual =
        std::max(0.0, y_squared_norm - 2.0 * beta * fit + beta * beta * curvature);
    return 0.5 * (d * std::log(alpha) + n * std::log(beta) - n * std::log(2.0 * std::numbers::pi) -
                  beta * residual - alpha * m_sq - log_det);
}

}  // namespace

void BaselineConfig::validate() const {
    if (!(hscore_ridge > 0.0)) throw ValidationError("hscore_ridge must be > 0");
    if (logme_max_iter < 1) throw ValidationError("logme_max_iter must be >= 1");
    if (!(logme_tol > 0.0)) throw ValidationError("logme_tol must be > 0");
    if (!(transrate_eps > 0.0)) throw ValidationError("transrate_eps must be > 0");
}

ScoreResult nce(const SourcePredictionMatrix& source_preds, const LabelVector& labels) {
    check_pred_paired(source_preds, labels);
    Stopwatch timer;
    ScoreResult result;
    result.method = "nce";

    const Eigen::Index n = source_preds.rows();
    const Eigen::Index num_source = source_preds.num_source_classes();
    const auto num_target = static_cast<std::size_t>(labels.num_classes());

    // Hard pseudo-labels: row argmax, ties to the lowest class index.
    std::vector<std::vector<std::int64_t>> joint(
        num_target, std::vector<std::int64_t>(static_cast<std::size_t>(num_source), 0));
    std::vector<std::int64_t> z_counts(static_cast<std::size_t>(num_source), 0);
    for (Eigen::Index i = 0; i < n; ++i) {
        Eigen::Index best = 0;
        for (Eigen::Index j = 1; j < num_source; ++j) {
            if (source_preds.probs()(i, j) > source_preds.probs()(i, best)) best = j;
        }
        ++joint[static_cast<std::size_t>(labels[i])][static_cast<std::size_t>(best)];
        ++z_counts[static_cast<std::size_t>(best)];
    }

    const std::vector<Eigen::Index> y_counts = labels.class_counts();
    double value = 0.0;
    for (std::size_t y = 0; y < num_target; ++y) {
        double class_term = 0.0;
        for (std::size_t z = 0; z < static_cast<std::size_t>(num_source); ++z) {
            const std::int64_t count = joint[y][z];
            if (count == 0) continue;
            class_term += (static_cast<double>(count) / static_cast<double>(n)) *
                          std::log(static_cast<double>(count) / static_cast<double>(z_counts[z]));
        }
        value += class_term;
        if (y_counts[y] > 0) {
            result.per_class.push_back({static_cast<std::int32_t>(y), y_counts[y], class_term});
        }
    }
    result.value = value;
    result.wall_time = timer.seconds();
    return result;
}

ScoreResult leep(const SourcePredictionMatrix& source_preds, const LabelVector& labels) {
    check_pred_paired(source_preds, labels);
    Stopwatch timer;
    ScoreResult result;
    result.method = "leep";

    const Eigen::Index n = source_preds.rows();
    const Eigen::Index num_source = source_preds.num_source_classes();
    const Eigen::Index num_target = labels.num_classes();
    const Matrix& theta = source_preds.probs();

    // Empirical joint over (target label, source class) from soft predictions.
    Matrix joint = Matrix::Zero(num_target, num_source);
    for (Eigen::Index i = 0; i < n; ++i) {
        joint.row(labels[i]) += theta.row(i) / static_cast<double>(n);
    }
    const Eigen::RowVectorXd marginal = joint.colwise().sum();

    const std::vector<Eigen::Index> y_counts = labels.class_counts();
    std::vector<double> class_sums(static_cast<std::size_t>(num_target), 0.0);
    Eigen::Index floored = 0;
    double total = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
        double inner = 0.0;
        for (Eigen::Index z = 0; z < num_source; ++z) {
            if (marginal[z] <= 0.0) continue;  // empty source column carries no mass
            inner += (joint(labels[i], z) / marginal[z]) * theta(i, z);
        }
        if (inner < kLeepFloor) {
            inner = kLeepFloor;
            ++floored;
        }
        const double ll = std::log(inner);
        total += ll;
        class_sums[static_cast<std::size_t>(labels[i])] += ll;
    }
    if (floored > 0) {
        result.warnings.push_back(std::to_string(floored) +
                                  " sample(s) with zero transfer likelihood floored at 1e-30");
    }
    for (std::size_t y = 0; y < static_cast<std::size_t>(num_target); ++y) {
        if (y_counts[y] > 0) {
            result.per_class.push_back({static_cast<std::int32_t>(y), y_counts[y],
                                        class_sums[y] / static_cast<double>(y_counts[y])});
        }
    }
    result.value = total / static_cast<double>(n);
    result.wall_time = timer.seconds();
    return result;
}

LogmeClassFit logme_fit_class(const Eigen::VectorXd& sigma, const Eigen::VectorXd& z,
                              double y_squared_norm, Eigen::Index n,
                              const BaselineConfig& config) {
    const auto n_real = static_cast<double>(n);
    LogmeClassFit fit;
    fit.evidence = log_evidence(sigma, z, y_squared_norm, n_real, fit.alpha, fit.beta);
    fit.trajectory.push_back(fit.evidence);

    for (int it = 0; it < config.logme_max_iter; ++it) {
        double gamma = 0.0;
        double m_sq = 0.0;
        double fit_term = 0.0;
        double curvature = 0.0;
        for (Eigen::Index j = 0; j < sigma.size(); ++j) {
            const double t = fit.alpha + fit.beta * sigma[j];
            const double zj2 = z[j] * z[j];
            gamma += fit.beta * sigma[j] / t;
            m_sq += zj2 / (t * t);
            fit_term += zj2 / t;
            curvature += sigma[j] * zj2 / (t * t);
        }
        m_sq *= fit.beta * fit.beta;
        const double residual = std::max(
            0.0, y_squared_norm - 2.0 * fit.beta * fit_term + fit.beta * fit.beta * curvature);

        const double alpha_next = clamp_precision(m_sq > 0.0 ? gamma / m_sq : kPrecisionCeil);
        const double beta_next =
            clamp_precision(residual > 0.0 ? (n_real - gamma) / residual : kPrecisionCeil);
        const double evidence_next =
            log_evidence(sigma, z, y_squared_norm, n_real, alpha_next, beta_next);

        ++fit.iterations;
        if (evidence_next < fit.evidence) {
            break;  // reject a non-improving step; keeps the trajectory monotone
        }
        const double change = std::abs(evidence_next - fit.evidence);
        fit.alpha = alpha_next;
        fit.beta = beta_next;
        fit.evidence = evidence_next;
        fit.trajectory.push_back(evidence_next);
        if (change <= config.logme_tol * std::max(1.0, std::abs(fit.evidence))) {
            fit.converged = true;
            break;
        }
    }
    return fit;
}

ScoreResult logme(const FeatureMatrix& features, const LabelVector& labels,
                  const BaselineConfig& config) {
    check_feature_paired(features, labels);
    config.validate();
    Stopwatch timer;
    ScoreResult result;
    result.method = "logme";

    const Eigen::Index n = features.rows();
    const Eigen::Index d = features.cols();
    if (n < 2) {
        throw ComputeError("logme: need at least 2 samples");
    }
    const Matrix& feats = features.data();

    const Eigen::MatrixXd gram = feats.transpose() * feats;
    const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eigen(gram);
    if (eigen.info() != Eigen::Success) {
        throw ComputeError("logme: eigendecomposition of the feature Gram matrix failed");
    }
    const Eigen::VectorXd sigma = eigen.eigenvalues().cwiseMax(0.0);

    // X^T y for the one-hot target of class c is the sum of class-c rows.
    const std::vector<Eigen::Index> counts = labels.class_counts();
    Matrix class_row_sums = Matrix::Zero(labels.num_classes(), d);
    for (Eigen::Index i = 0; i < n; ++i) {
        class_row_sums.row(labels[i]) += feats.row(i);
    }

    double total = 0.0;
    Eigen::Index scored_classes = 0;
    for (std::size_t c = 0; c < counts.size(); ++c) {
        if (counts[c] == 0) {
            result.warnings.push_back("class " + std::to_string(c) + " has no samples, skipped");
            continue;
        }
        const Eigen::VectorXd z =
            eigen.eigenvectors().transpose() *
            class_row_sums.row(static_cast<Eigen::Index>(c)).transpose();
        const LogmeClassFit fit =
            logme_fit_class(sigma, z, static_cast<double>(counts[c]), n, config);
        if (!fit.converged) {
            result.warnings.push_back("class " + std::to_string(c) +
                                      ": evidence fixed point did not converge in " +
                                      std::to_string(fit.iterations) + " iteration(s)");
        }
        const double per_sample = fit.evidence / static_cast<double>(n);
        total += per_sample;
        ++scored_classes;
        result.per_class.push_back({static_cast<std::int32_t>(c), counts[c], per_sample});
    }
    if (scored_classes == 0) {
        throw ComputeError("logme: no class has samples");
    }
    result.value = total / static_cast<double>(scored_classes);
    result.wall_time = timer.seconds();
    return result;
}

ScoreResult hscore(const FeatureMatrix& features, const LabelVector& labels,
                   const BaselineConfig& config) {
    check_feature_paired(features, labels);
    config.validate();
    Stopwatch timer;
    ScoreResult result;
    result.method = "hscore";

    const Eigen::Index n = features.rows();
    const Eigen::Index d = features.cols();
    if (n < 2) {
        throw ComputeError("hscore: need at least 2 samples");
    }

    // Class means first, global mean as their count-weighted combination: with
    // a single class the centered class mean is then exactly zero.
    const std::vector<Eigen::Index> counts = labels.class_counts();
    Matrix class_sums = Matrix::Zero(labels.num_classes(), d);
    for (Eigen::Index i = 0; i < n; ++i) {
        class_sums.row(labels[i]) += features.data().row(i);
    }
    Eigen::RowVectorXd global_sum = Eigen::RowVectorXd::Zero(d);
    for (Eigen::Index c = 0; c < class_sums.rows(); ++c) {
        global_sum += class_sums.row(c);
    }
    const Eigen::RowVectorXd mean = global_sum / static_cast<double>(n);

    Matrix centered = features.data();
    centered.rowwise() -= mean;
    Eigen::MatrixXd cov = (centered.transpose() * centered) / static_cast<double>(n);
    const double ridge = config.hscore_ridge * cov.trace() / static_cast<double>(d);
    cov.diagonal().array() += ridge;

    Matrix class_means = Matrix::Zero(labels.num_classes(), d);
    Eigen::MatrixXd between = Eigen::MatrixXd::Zero(d, d);
    for (std::size_t c = 0; c < counts.size(); ++c) {
        if (counts[c] == 0) continue;
        class_means.row(static_cast<Eigen::Index>(c)) =
            class_sums.row(static_cast<Eigen::Index>(c)) / static_cast<double>(counts[c]) - mean;
        const Eigen::VectorXd mu = class_means.row(static_cast<Eigen::Index>(c)).transpose();
        between += (static_cast<double>(counts[c]) / static_cast<double>(n)) * mu * mu.transpose();
    }

    const Eigen::LDLT<Eigen::MatrixXd> ldlt(cov);
    if (ldlt.info() != Eigen::Success || ldlt.vectorD().minCoeff() <= 0.0) {
        throw ComputeError("hscore: covariance solve failed after ridge " +
                           std::to_string(ridge));
    }
    const double value = ldlt.solve(between).trace();
    if (!std::isfinite(value)) {
        throw ComputeError("hscore: non-finite result after ridge " + std::to_string(ridge));
    }

    for (std::size_t c = 0; c < counts.size(); ++c) {
        if (counts[c] == 0) continue;
        const Eigen::VectorXd mu = class_means.row(static_cast<Eigen::Index>(c)).transpose();
        const double term = (static_cast<double>(counts[c]) / static_cast<double>(n)) *
                            mu.dot(ldlt.solve(mu));
        result.per_class.push_back({static_cast<std::int32_t>(c), counts[c], term});
    }
    result.value = value;
    result.wall_time = timer.seconds();
    return result;
}

ScoreResult transrate(const FeatureMatrix& features, const LabelVector& labels,
                      const BaselineConfig& config) {
    check_feature_paired(features, labels);
    config.validate();
    Stopwatch timer;
    ScoreResult result;
    result.method = "transrate";

    const Eigen::Index n = features.rows();
    const Eigen::Index d = features.cols();
    if (n < 2) {
        throw ComputeError("transrate: need at least 2 samples");
    }

    // Class means first, global mean as their combination: with one class the
    // class-centered block is then bitwise identical to the whole centered
    // matrix, making the rate gap exactly zero.
    const std::vector<Eigen::Index> counts = labels.class_counts();
    Matrix class_sums = Matrix::Zero(labels.num_classes(), d);
    for (Eigen::Index i = 0; i < n; ++i) {
        class_sums.row(labels[i]) += features.data().row(i);
    }
    Eigen::RowVectorXd global_sum = Eigen::RowVectorXd::Zero(d);
    for (Eigen::Index c = 0; c < class_sums.rows(); ++c) {
        global_sum += class_sums.row(c);
    }
    const Eigen::RowVectorXd global_mean = global_sum / static_cast<double>(n);

    const double eps2 = config.transrate_eps * config.transrate_eps;
    const auto coding_rate = [&](const Matrix& block, Eigen::Index scale) {
        const Eigen::MatrixXd gram = block.transpose() * block;
        const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eigen(gram);
        if (eigen.info() != Eigen::Success) {
            throw ComputeError("transrate: eigendecomposition failed");
        }
        const double coef = static_cast<double>(d) / (static_cast<double>(scale) * eps2);
        double log_det = 0.0;
        for (Eigen::Index j = 0; j < d; ++j) {
            log_det += std::log1p(coef * std::max(0.0, eigen.eigenvalues()[j]));
        }
        if (!std::isfinite(log_det)) {
            throw ComputeError("transrate: non-finite log-determinant");
        }
        return 0.5 * log_det;
    };

    Matrix centered = features.data();
    centered.rowwise() -= global_mean;
    const double whole_rate = coding_rate(centered, n);

    double conditional_rate = 0.0;
    for (std::size_t c = 0; c < counts.size(); ++c) {
        if (counts[c] == 0) continue;
        if (counts[c] == 1) {
            result.warnings.push_back("class " + std::to_string(c) +
                                      " has a single sample; zero conditional rate");
        }
        const Eigen::RowVectorXd class_mean =
            class_sums.row(static_cast<Eigen::Index>(c)) / static_cast<double>(counts[c]);
        Matrix block(counts[c], d);
        Eigen::Index next = 0;
        for (Eigen::Index i = 0; i < n; ++i) {
            if (labels[i] == static_cast<std::int32_t>(c)) {
                block.row(next++) = features.data().row(i) - class_mean;
            }
        }
        const double rate = coding_rate(block, counts[c]);
        conditional_rate += (static_cast<double>(counts[c]) / static_cast<double>(n)) * rate;
        result.per_class.push_back({static_cast<std::int32_t>(c), counts[c], rate});
    }

    result.value = whole_rate - conditional_rate;
    result.wall_time = timer.seconds();
    return result;
}

}  // namespace tmi
