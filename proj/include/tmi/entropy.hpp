#pragma once

#include "tmi/neighbors.hpp"
#include "tmi/types.hpp"

namespace tmi {

/// Differential entropy estimate in nats.
struct EntropyEstimate {
    double value = 0.0;
    int k_used = 0;
    Eigen::Index n_points = 0;
    Eigen::Index num_clamped = 0;  // neighbor distances floored at the minimum
};

/// Floor applied to k-th neighbor distances before taking logs, so duplicate
/// points keep the estimate finite.
inline constexpr double kMinNeighborDistance = 1e-12;

/// Kozachenko-Leonenko k-nearest-neighbor estimator:
///   H = psi(n) - psi(k) + ln V_d + (d/n) * sum_i ln eps_i
/// with eps_i the Euclidean distance from point i to its k-th nearest
/// neighbor and V_d the unit-ball volume. Distances below
/// kMinNeighborDistance are floored and counted in num_clamped; if all rows
/// are identical the point set is degenerate and an error is raised.
/// The log-distance sum runs over sorted distances, so the estimate is
/// exactly invariant to row order.
EntropyEstimate knn_entropy(const Matrix& points, int k,
                            NeighborBackend backend = NeighborBackend::tree);
EntropyEstimate knn_entropy(const FeatureMatrix& points, int k,
                            NeighborBackend backend = NeighborBackend::tree);

}  // namespace tmi
