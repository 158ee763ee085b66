#include "tmi/synthetic.hpp"

#include <cmath>
#include <numbers>

namespace tmi {

void SyntheticSpec::validate() const {
    if (num_classes < 1) {
        throw ValidationError("synthetic spec: num_classes must be >= 1");
    }
    if (dim < 1) {
        throw ValidationError("synthetic spec: dim must be >= 1");
    }
    if (static_cast<std::int32_t>(samples_per_class.size()) != num_classes) {
        throw ValidationError("synthetic spec: samples_per_class has " +
                              std::to_string(samples_per_class.size()) + " entries, expected " +
                              std::to_string(num_classes));
    }
    for (Eigen::Index count : samples_per_class) {
        if (count < 1) {
            throw ValidationError("synthetic spec: every class needs at least 1 sample");
        }
    }
    if (class_means.rows() != num_classes || class_means.cols() != dim) {
        throw ValidationError("synthetic spec: class_means must be num_classes x dim");
    }
    if (static_cast<std::int32_t>(class_spreads.size()) != num_classes) {
        throw ValidationError("synthetic spec: class_spreads has " +
                              std::to_string(class_spreads.size()) + " entries, expected " +
                              std::to_string(num_classes));
    }
    for (double spread : class_spreads) {
        if (!(spread > 0.0) || !std::isfinite(spread)) {
            throw ValidationError("synthetic spec: class spreads must be positive and finite");
        }
    }
}

double GaussianSampler::next_uniform() {
    // Top 53 bits of the engine output, scaled into [0, 1).
    return static_cast<double>(rng_() >> 11) * 0x1.0p-53;
}

double GaussianSampler::next() {
    if (has_cached_) {
        has_cached_ = false;
        return cached_;
    }
    // u1 in (0, 1] so that log(u1) is finite.
    const double u1 = (static_cast<double>(rng_() >> 11) + 1.0) * 0x1.0p-53;
    const double u2 = next_uniform();
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * std::numbers::pi * u2;
    cached_ = radius * std::sin(angle);
    has_cached_ = true;
    return radius * std::cos(angle);
}

std::pair<FeatureMatrix, LabelVector> generate_synthetic(const SyntheticSpec& spec) {
    spec.validate();

    Eigen::Index total = 0;
    for (Eigen::Index count : spec.samples_per_class) {
        total += count;
    }

    Matrix features(total, spec.dim);
    std::vector<std::int32_t> labels;
    labels.reserve(static_cast<std::size_t>(total));

    GaussianSampler sampler(spec.seed);
    Eigen::Index row = 0;
    for (std::int32_t c = 0; c < spec.num_classes; ++c) {
        const double spread = spec.class_spreads[static_cast<std::size_t>(c)];
        for (Eigen::Index s = 0; s < spec.samples_per_class[static_cast<std::size_t>(c)]; ++s) {
            for (std::int32_t t = 0; t < spec.dim; ++t) {
                features(row, t) = spec.class_means(c, t) + spread * sampler.next();
            }
            labels.push_back(c);
            ++row;
        }
    }
    return {FeatureMatrix(std::move(features)), LabelVector(std::move(labels), spec.num_classes)};
}

}  // namespace tmi
