#pragma once

namespace tmi {

/// Digamma psi(x) for x > 0: recurrence psi(x+1) = psi(x) + 1/x shifts the
/// argument above 10, then the asymptotic Bernoulli series. Absolute error
/// below 1e-12 for x >= 1.
double digamma(double x);

/// ln of the volume of the d-dimensional Euclidean unit ball,
/// ln(pi^(d/2) / Gamma(d/2 + 1)).
double unit_ball_log_volume(int d);

}  // namespace tmi
