#include <cmath>
#include <numbers>
#include <random>

#include <doctest.h>

#include "tmi/error.hpp"
#include "tmi/special_functions.hpp"

using tmi::digamma;
using tmi::unit_ball_log_volume;

TEST_CASE("digamma matches high-precision reference values") {
    // Reference values computed with 40-digit arithmetic.
    CHECK(digamma(1.0) == doctest::Approx(-0.5772156649015328606).epsilon(1e-13));
    CHECK(digamma(2.0) == doctest::Approx(0.4227843350984671394).epsilon(1e-13));
    CHECK(digamma(0.5) == doctest::Approx(-1.9635100260214234794).epsilon(1e-13));
    CHECK(digamma(1.5) == doctest::Approx(0.0364899739785765206).epsilon(1e-10));
    CHECK(std::abs(digamma(1.5) - 0.03648997397857652056) < 1e-12);
    CHECK(std::abs(digamma(2.5) - 0.70315664064524318723) < 1e-12);
    CHECK(std::abs(digamma(3.7) - 1.16715353936151138587) < 1e-12);
    CHECK(std::abs(digamma(10.5) - 2.30300103429768637527) < 1e-10);
    CHECK(std::abs(digamma(42.0) - 3.72571761793728215030) < 1e-12);
    CHECK(std::abs(digamma(123.456) - 4.81182932382898538732) < 1e-12);
    CHECK(std::abs(digamma(1000.25) - 6.90750528941442825811) < 1e-12);
    CHECK(std::abs(digamma(0.1) - (-10.42375494041107679517)) < 1e-11);
    CHECK(std::abs(digamma(1e6) - 13.81551005796419077077) < 1e-12);
}

TEST_CASE("digamma satisfies the recurrence psi(x+1) = psi(x) + 1/x") {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 200; ++trial) {
        const double x = 0.05 + 50.0 * (static_cast<double>(rng() >> 11) * 0x1.0p-53);
        CHECK(std::abs(digamma(x + 1.0) - (digamma(x) + 1.0 / x)) < 1e-10);
    }
}

TEST_CASE("digamma rejects non-positive arguments") {
    CHECK_THROWS_AS(digamma(0.0), tmi::ComputeError);
    CHECK_THROWS_AS(digamma(-1.5), tmi::ComputeError);
}

TEST_CASE("unit ball log volume closed forms") {
    CHECK(std::abs(unit_ball_log_volume(1) - std::log(2.0)) < 1e-12);
    CHECK(std::abs(unit_ball_log_volume(2) - std::log(std::numbers::pi)) < 1e-12);
    // d = 7: volume 16 pi^3 / 105
    const double v7 = std::log(16.0 * std::pow(std::numbers::pi, 3) / 105.0);
    CHECK(std::abs(unit_ball_log_volume(7) - v7) < 1e-10);

    // 40-digit reference values
    CHECK(std::abs(unit_ball_log_volume(3) - 1.43241195830118110158) < 1e-12);
    CHECK(std::abs(unit_ball_log_volume(4) - 1.59631259113885503887) < 1e-12);
    CHECK(std::abs(unit_ball_log_volume(8) - 1.40086571304965507693) < 1e-12);
    CHECK(std::abs(unit_ball_log_volume(10) - 0.93615768646495487647) < 1e-12);
    CHECK(std::abs(unit_ball_log_volume(16) - (-1.44676381595004883527)) < 1e-12);
}

TEST_CASE("unit ball log volume rejects d = 0") {
    CHECK_THROWS_AS(unit_ball_log_volume(0), tmi::ComputeError);
}
