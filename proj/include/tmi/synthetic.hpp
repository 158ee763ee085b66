#pragma once

#include <cstdint>
#include <random>
#include <utility>
#include <vector>

#include "tmi/types.hpp"

namespace tmi {

/// Isotropic Gaussian blob description: class c draws samples_per_class[c]
/// points as class_means.row(c) + class_spreads[c] * z with z standard normal.
struct SyntheticSpec {
    std::int32_t num_classes = 0;
    std::vector<Eigen::Index> samples_per_class;
    std::int32_t dim = 0;
    Matrix class_means;                 // num_classes x dim
    std::vector<double> class_spreads;  // length num_classes, all > 0
    std::uint64_t seed = 0;

    void validate() const;
};

/// Deterministic standard-normal stream. Fixed algorithm, stable across
/// releases: mt19937_64 -> 53-bit uniforms -> Box-Muller transform. The
/// standard library's normal_distribution is deliberately not used because
/// its output is implementation-defined.
class GaussianSampler {
public:
    explicit GaussianSampler(std::uint64_t seed) : rng_(seed) {}

    double next();

    /// Uniform in [0, 1), same underlying stream discipline.
    double next_uniform();

private:
    std::mt19937_64 rng_;
    double cached_ = 0.0;
    bool has_cached_ = false;
};

/// Pure function of the spec: identical specs produce bit-identical output.
/// Samples are emitted class by class in class-id order, so labels come out
/// as contiguous blocks 0...0 1...1 etc.
std::pair<FeatureMatrix, LabelVector> generate_synthetic(const SyntheticSpec& spec);

}  // namespace tmi
