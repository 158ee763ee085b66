#pragma once

#include <vector>

namespace tmi {

/// Kendall tau-b between two paired vectors:
///   tau_b = (P - Q) / sqrt((P + Q + T_a) * (P + Q + T_b))
/// with P/Q the concordant/discordant pair counts and T_a/T_b the counts of
/// pairs tied only in a / only in b. Runs in O(M log M) via Knight's
/// merge-sort inversion counting. Throws ComputeError when either vector is
/// entirely tied (the coefficient is undefined).
double kendall_tau(const std::vector<double>& a, const std::vector<double>& b);

}  // namespace tmi
