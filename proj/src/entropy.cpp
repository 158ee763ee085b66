#include "tmi/entropy.hpp"

#include <algorithm>
#include <cmath>

#include "tmi/special_functions.hpp"

namespace tmi {

namespace {

bool all_rows_identical(const Matrix& points) {
    for (Eigen::Index i = 1; i < points.rows(); ++i) {
        if (points.row(i) != points.row(0)) {
            return false;
        }
    }
    return true;
}

}  // namespace

EntropyEstimate knn_entropy(const Matrix& points, int k, NeighborBackend backend) {
    std::vector<double> eps = kth_neighbor_distances(points, k, backend);

    EntropyEstimate estimate;
    estimate.k_used = k;
    estimate.n_points = points.rows();

    for (double& e : eps) {
        if (e < kMinNeighborDistance) {
            ++estimate.num_clamped;
            e = kMinNeighborDistance;
        }
    }
    if (estimate.num_clamped == estimate.n_points && all_rows_identical(points)) {
        throw ComputeError("knn_entropy: degenerate point set, all pairwise distances are zero");
    }

    // Sorting before accumulation makes the sum independent of row order.
    std::sort(eps.begin(), eps.end());
    double log_sum = 0.0;
    for (double e : eps) {
        log_sum += std::log(e);
    }

    const auto n = static_cast<double>(points.rows());
    const auto d = static_cast<int>(points.cols());
    estimate.value = digamma(n) - digamma(static_cast<double>(k)) + unit_ball_log_volume(d) +
                     (static_cast<double>(d) / n) * log_sum;
    return estimate;
}

EntropyEstimate knn_entropy(const FeatureMatrix& points, int k, NeighborBackend backend) {
    return knn_entropy(points.data(), k, backend);
}

}  // namespace tmi
