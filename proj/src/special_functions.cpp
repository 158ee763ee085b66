#include "tmi/special_functions.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "tmi/error.hpp"

namespace tmi {

double digamma(double x) {
    if (!(x > 0.0) || !std::isfinite(x)) {
        throw ComputeError("digamma: argument must be positive and finite, got " +
                           std::to_string(x));
    }
    double result = 0.0;
    while (x < 10.0) {
        result -= 1.0 / x;
        x += 1.0;
    }
    // psi(x) ~ ln x - 1/(2x) - sum B_{2n} / (2n x^{2n}); truncation error at
    // x >= 10 is below 1e-15.
    const double inv = 1.0 / x;
    const double inv2 = inv * inv;
    const double series =
        inv2 * (1.0 / 12.0 -
                inv2 * (1.0 / 120.0 -
                        inv2 * (1.0 / 252.0 -
                                inv2 * (1.0 / 240.0 -
                                        inv2 * (1.0 / 132.0 -
                                                inv2 * (691.0 / 32760.0 - inv2 / 12.0))))));
    return result + std::log(x) - 0.5 * inv - series;
}

double unit_ball_log_volume(int d) {
    if (d < 1) {
        throw ComputeError("unit_ball_log_volume: dimension must be >= 1, got " +
                           std::to_string(d));
    }
    const double half_d = 0.5 * static_cast<double>(d);
    return half_d * std::log(std::numbers::pi) - std::lgamma(half_d + 1.0);
}

}  // namespace tmi
