#include "tmi/kendall.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>

#include "tmi/error.hpp"

namespace tmi {

namespace {

// Counts inversions while sorting values in place (merge sort).
std::uint64_t sort_counting_inversions(std::vector<double>& values, std::vector<double>& buffer,
                                       std::size_t begin, std::size_t end) {
    if (end - begin < 2) return 0;
    const std::size_t mid = begin + (end - begin) / 2;
    std::uint64_t inversions = sort_counting_inversions(values, buffer, begin, mid) +
                               sort_counting_inversions(values, buffer, mid, end);
    std::size_t left = begin;
    std::size_t right = mid;
    std::size_t out = begin;
    while (left < mid && right < end) {
        if (values[right] < values[left]) {
            inversions += mid - left;
            buffer[out++] = values[right++];
        } else {
            buffer[out++] = values[left++];
        }
    }
    while (left < mid) buffer[out++] = values[left++];
    while (right < end) buffer[out++] = values[right++];
    std::copy(buffer.begin() + static_cast<std::ptrdiff_t>(begin),
              buffer.begin() + static_cast<std::ptrdiff_t>(end),
              values.begin() + static_cast<std::ptrdiff_t>(begin));
    return inversions;
}

// Sum of t*(t-1)/2 over runs of equal values in a sorted sequence.
template <typename Equal>
std::uint64_t tied_pairs(const std::vector<std::size_t>& order, Equal&& equal) {
    std::uint64_t total = 0;
    std::size_t run = 1;
    for (std::size_t i = 1; i <= order.size(); ++i) {
        if (i < order.size() && equal(order[i - 1], order[i])) {
            ++run;
        } else {
            total += static_cast<std::uint64_t>(run) * (run - 1) / 2;
            run = 1;
        }
    }
    return total;
}

}  // namespace

double kendall_tau(const std::vector<double>& a, const std::vector<double>& b) {
    if (a.size() != b.size()) {
        throw ValidationError("kendall_tau: vectors differ in length (" + std::to_string(a.size()) +
                              " vs " + std::to_string(b.size()) + ")");
    }
    const std::size_t m = a.size();
    if (m < 2) {
        throw ComputeError("kendall_tau: need at least 2 paired values");
    }

    // Knight's algorithm: sort by (a, b), count tie groups, then count the
    // discordant pairs as inversions of b within that order.
    std::vector<std::size_t> order(m);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) {
        if (a[i] != a[j]) return a[i] < a[j];
        return b[i] < b[j];
    });

    const std::uint64_t pairs = static_cast<std::uint64_t>(m) * (m - 1) / 2;
    const std::uint64_t ties_a = tied_pairs(order, [&](std::size_t i, std::size_t j) {
        return a[i] == a[j];
    });
    const std::uint64_t ties_both = tied_pairs(order, [&](std::size_t i, std::size_t j) {
        return a[i] == a[j] && b[i] == b[j];
    });

    std::vector<double> b_in_a_order(m);
    for (std::size_t i = 0; i < m; ++i) {
        b_in_a_order[i] = b[order[i]];
    }
    std::vector<double> buffer(m);
    const std::uint64_t swaps = sort_counting_inversions(b_in_a_order, buffer, 0, m);

    // b_in_a_order is fully sorted now.
    std::uint64_t ties_b = 0;
    {
        std::size_t run = 1;
        for (std::size_t i = 1; i <= m; ++i) {
            if (i < m && b_in_a_order[i] == b_in_a_order[i - 1]) {
                ++run;
            } else {
                ties_b += static_cast<std::uint64_t>(run) * (run - 1) / 2;
                run = 1;
            }
        }
    }

    if (ties_a == pairs || ties_b == pairs) {
        throw ComputeError("kendall_tau: undefined correlation (all values tied)");
    }

    // P - Q = pairs - ties_a - ties_b + ties_both - 2 * swaps
    const double concordant_minus_discordant =
        static_cast<double>(pairs) - static_cast<double>(ties_a) - static_cast<double>(ties_b) +
        static_cast<double>(ties_both) - 2.0 * static_cast<double>(swaps);
    // one sqrt of the product: exact for perfect squares, so tau hits +/-1
    const double denominator = std::sqrt(static_cast<double>(pairs - ties_a) *
                                         static_cast<double>(pairs - ties_b));
    return concordant_minus_discordant / denominator;
}

}  // namespace tmi
