#pragma once

#include <string>
#include <vector>

#include "tmi/types.hpp"

namespace tmi {

/// Both backends return identical results on identical input; brute_force is
/// the reference, tree is the fast path.
enum class NeighborBackend { brute_force, tree };

NeighborBackend parse_backend(const std::string& name);
std::string backend_name(NeighborBackend backend);

/// Shared distance kernel. Both backends call this one function so they
/// round identically.
double squared_distance(const double* a, const double* b, Eigen::Index dim);

/// Entry i is the Euclidean distance from row i to its k-th nearest neighbor
/// among the other rows (self excluded). Neighbor order is by (distance,
/// index), so equal distances resolve to the lower row index.
/// Requires n >= k + 1 and k >= 1.
std::vector<double> kth_neighbor_distances(const Matrix& points, int k, NeighborBackend backend);
std::vector<double> kth_neighbor_distances(const FeatureMatrix& points, int k,
                                           NeighborBackend backend);

}  // namespace tmi
