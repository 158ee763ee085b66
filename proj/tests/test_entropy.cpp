#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include <doctest.h>

#include "tmi/entropy.hpp"
#include "tmi/synthetic.hpp"
#include "test_util.hpp"

using namespace tmi;

namespace {

constexpr double kGaussian1dEntropy = 1.4189385332046727;  // 0.5 ln(2 pi e)

}  // namespace

TEST_CASE("standard normal entropy, 20000 samples, k=3") {
    const Matrix points = test::gaussian_matrix(1234, 20000, 1);
    const EntropyEstimate est = knn_entropy(points, 3, NeighborBackend::tree);
    CHECK(std::abs(est.value - kGaussian1dEntropy) < 0.05);
    CHECK(est.k_used == 3);
    CHECK(est.n_points == 20000);
}

TEST_CASE("uniform unit square entropy is near zero") {
    const Matrix points = test::uniform_matrix(99, 20000, 2);
    const EntropyEstimate est = knn_entropy(points, 3, NeighborBackend::tree);
    CHECK(std::abs(est.value) < 0.05);
}

TEST_CASE("diagonal gaussians in d = 1, 2, 4 match the closed form") {
    const std::vector<std::vector<double>> spectra = {{1.0}, {0.5, 2.0}, {1.0, 2.0, 0.5, 1.5}};
    for (const auto& diag : spectra) {
        const auto d = static_cast<Eigen::Index>(diag.size());
        Matrix points = test::gaussian_matrix(55 + static_cast<std::uint64_t>(d), 20000, d);
        double log_det = 0.0;
        for (Eigen::Index t = 0; t < d; ++t) {
            points.col(t) *= std::sqrt(diag[static_cast<std::size_t>(t)]);
            log_det += std::log(diag[static_cast<std::size_t>(t)]);
        }
        const double expected =
            0.5 * (static_cast<double>(d) * std::log(2.0 * std::numbers::pi * std::numbers::e) +
                   log_det);
        const EntropyEstimate est = knn_entropy(points, 3, NeighborBackend::tree);
        CHECK(std::abs(est.value - expected) < 0.05);
    }
}

TEST_CASE("translation invariance is bit exact") {
    const Matrix points = test::quantize(test::gaussian_matrix(7, 400, 3));
    Matrix shifted = points;
    shifted.col(0).array() += 123.25;
    shifted.col(1).array() -= 7.5;
    shifted.col(2).array() += 0.125;
    const EntropyEstimate base = knn_entropy(points, 4, NeighborBackend::brute_force);
    const EntropyEstimate moved = knn_entropy(shifted, 4, NeighborBackend::brute_force);
    CHECK(base.value == moved.value);
}

TEST_CASE("scaling law H(aX) = H(X) + d ln a") {
    const Matrix points = test::gaussian_matrix(21, 300, 3);
    const double base = knn_entropy(points, 3, NeighborBackend::tree).value;
    for (const double a : {0.5, std::numbers::e, 10.0}) {
        const Matrix scaled = points * a;
        const double value = knn_entropy(scaled, 3, NeighborBackend::tree).value;
        CHECK(std::abs(value - (base + 3.0 * std::log(a))) < 1e-9);
    }
}

TEST_CASE("row order does not change the estimate") {
    const Matrix points = test::gaussian_matrix(31, 257, 2);
    Matrix shuffled = points;
    std::vector<Eigen::Index> perm(static_cast<std::size_t>(points.rows()));
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), std::mt19937_64(5));
    for (Eigen::Index i = 0; i < points.rows(); ++i) {
        shuffled.row(i) = points.row(perm[static_cast<std::size_t>(i)]);
    }
    const EntropyEstimate a = knn_entropy(points, 3, NeighborBackend::tree);
    const EntropyEstimate b = knn_entropy(shuffled, 3, NeighborBackend::tree);
    CHECK(a.value == b.value);
}

TEST_CASE("backends give identical estimates") {
    const Matrix points = test::uniform_matrix(61, 500, 4);
    const EntropyEstimate brute = knn_entropy(points, 5, NeighborBackend::brute_force);
    const EntropyEstimate tree = knn_entropy(points, 5, NeighborBackend::tree);
    CHECK(brute.value == tree.value);
}

TEST_CASE("duplicates are clamped and counted, all-identical errors out") {
    Matrix points = test::uniform_matrix(71, 10, 2);
    points.row(4) = points.row(2);
    points.row(7) = points.row(2);
    const EntropyEstimate est = knn_entropy(points, 1, NeighborBackend::brute_force);
    CHECK(est.num_clamped == 3);
    CHECK(std::isfinite(est.value));

    const Matrix identical = Matrix::Ones(6, 2);
    CHECK_THROWS_WITH_AS(knn_entropy(identical, 2, NeighborBackend::brute_force),
                         doctest::Contains("degenerate point set"), ComputeError);
}

TEST_CASE("two duplicate clusters clamp everything but do not error") {
    Matrix points(6, 1);
    points << 1.0, 1.0, 1.0, 2.0, 2.0, 2.0;
    const EntropyEstimate est = knn_entropy(points, 2, NeighborBackend::brute_force);
    CHECK(est.num_clamped == 6);
    CHECK(std::isfinite(est.value));
}

TEST_CASE("k larger than n-1 errors") {
    const Matrix points = test::uniform_matrix(81, 5, 1);
    CHECK_THROWS_AS(knn_entropy(points, 5, NeighborBackend::tree), ComputeError);
}
