#include <cmath>
#include <random>

#include <doctest.h>

#include "tmi/kendall.hpp"
#include "tmi/error.hpp"

using tmi::kendall_tau;

namespace {

// O(M^2) pair-counting reference.
double tau_oracle(const std::vector<double>& a, const std::vector<double>& b) {
    long concordant = 0;
    long discordant = 0;
    long ties_a_only = 0;
    long ties_b_only = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        for (std::size_t j = i + 1; j < a.size(); ++j) {
            const double da = a[i] - a[j];
            const double db = b[i] - b[j];
            if (da == 0.0 && db == 0.0) continue;
            if (da == 0.0) {
                ++ties_a_only;
            } else if (db == 0.0) {
                ++ties_b_only;
            } else if (da * db > 0.0) {
                ++concordant;
            } else {
                ++discordant;
            }
        }
    }
    const double p = static_cast<double>(concordant);
    const double q = static_cast<double>(discordant);
    return (p - q) / std::sqrt((p + q + static_cast<double>(ties_a_only)) *
                               (p + q + static_cast<double>(ties_b_only)));
}

std::vector<double> random_vector(std::mt19937_64& rng, std::size_t m, bool with_ties) {
    std::vector<double> v(m);
    for (double& x : v) {
        if (with_ties) {
            x = static_cast<double>(rng() % 8);  // coarse grid forces ties
        } else {
            x = static_cast<double>(rng() >> 11) * 0x1.0p-53;
        }
    }
    return v;
}

}  // namespace

TEST_CASE("identical and reversed orderings") {
    CHECK(kendall_tau({1, 2, 3}, {10, 20, 30}) == 1.0);
    CHECK(kendall_tau({1, 2, 3}, {3, 2, 1}) == -1.0);
}

TEST_CASE("hand instance matches the pair-counting oracle") {
    const std::vector<double> a = {0.1, 0.4, 0.3, 0.2};
    const std::vector<double> b = {0.5, 0.9, 0.6, 0.8};
    CHECK(kendall_tau(a, b) == doctest::Approx(tau_oracle(a, b)).epsilon(1e-15));
    // by hand: only the pair (2,3) is discordant, so P=5, Q=1
    CHECK(kendall_tau(a, b) == doctest::Approx((5.0 - 1.0) / 6.0));
}

TEST_CASE("fast path equals the oracle on 1000 random instances") {
    std::mt19937_64 rng(31337);
    for (int trial = 0; trial < 1000; ++trial) {
        const std::size_t m = 2 + rng() % 99;
        const bool with_ties = (trial % 2) == 0;
        const std::vector<double> a = random_vector(rng, m, with_ties);
        const std::vector<double> b = random_vector(rng, m, with_ties);
        double expected = 0.0;
        bool defined = true;
        try {
            expected = tau_oracle(a, b);
            if (!std::isfinite(expected)) defined = false;
        } catch (...) {
            defined = false;
        }
        if (!defined || std::isnan(expected)) {
            CHECK_THROWS_AS(kendall_tau(a, b), tmi::ComputeError);
            continue;
        }
        const double got = kendall_tau(a, b);
        REQUIRE(std::abs(got - expected) < 1e-12);
        REQUIRE(got >= -1.0);
        REQUIRE(got <= 1.0);
    }
}

TEST_CASE("tau(a, a) = 1 and tau(a, -a) = -1 for tie-free a") {
    std::mt19937_64 rng(71);
    const std::vector<double> a = random_vector(rng, 40, false);
    std::vector<double> negated = a;
    for (double& x : negated) x = -x;
    CHECK(kendall_tau(a, a) == 1.0);
    CHECK(kendall_tau(a, negated) == -1.0);
}

TEST_CASE("invariance under strictly increasing transforms") {
    std::mt19937_64 rng(72);
    const std::vector<double> a = random_vector(rng, 30, true);
    const std::vector<double> b = random_vector(rng, 30, false);
    std::vector<double> transformed_a = a;
    for (double& x : transformed_a) x = std::exp(0.5 * x) + 3.0;
    std::vector<double> transformed_b = b;
    for (double& x : transformed_b) x = std::cbrt(x) * 10.0;
    CHECK(kendall_tau(a, b) == kendall_tau(transformed_a, transformed_b));
}

TEST_CASE("symmetry in the arguments") {
    std::mt19937_64 rng(73);
    for (int trial = 0; trial < 20; ++trial) {
        const std::vector<double> a = random_vector(rng, 25, trial % 2 == 0);
        const std::vector<double> b = random_vector(rng, 25, trial % 3 == 0);
        CHECK(kendall_tau(a, b) == kendall_tau(b, a));
    }
}

TEST_CASE("degenerate inputs") {
    CHECK_THROWS_WITH_AS(kendall_tau({1.0, 1.0, 1.0}, {1.0, 2.0, 3.0}),
                         doctest::Contains("undefined correlation"), tmi::ComputeError);
    CHECK_THROWS_AS(kendall_tau({1.0, 2.0}, {5.0, 5.0}), tmi::ComputeError);
    CHECK_THROWS_AS(kendall_tau({1.0}, {2.0}), tmi::ComputeError);
    CHECK_THROWS_AS(kendall_tau({1.0, 2.0}, {1.0, 2.0, 3.0}), tmi::ValidationError);
}
