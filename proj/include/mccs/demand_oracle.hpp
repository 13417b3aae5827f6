#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <random>
#include <stdexcept>
#include <vector>

#include "mccs/combinatorics.hpp"
#include "mccs/placement.hpp"
#include "mccs/rational.hpp"

namespace mccs {

inline constexpr std::uint64_t kDefaultEnumerationCap = 10'000'000;

inline BigInt demand_space_size(long long num_files, long long num_users) {
    return boost::multiprecision::pow(BigInt(num_files), static_cast<unsigned>(num_users));
}

namespace detail {

inline std::uint64_t checked_space(long long num_files, long long num_users,
                                   std::uint64_t cap) {
    if (num_files < 1 || num_users < 1) {
        throw std::domain_error("demand enumeration: need at least one file and one user");
    }
    const BigInt space = demand_space_size(num_files, num_users);
    if (space > cap) {
        throw std::domain_error("demand enumeration: N^K = " + space.str() +
                                " exceeds the cap of " + std::to_string(cap) +
                                "; use monte_carlo_expected_rate instead");
    }
    return space.convert_to<std::uint64_t>();
}

inline int distinct_of_digits(const std::vector<int>& digits, std::vector<char>& seen) {
    int count = 0;
    for (const int d : digits) {
        if (!seen[static_cast<std::size_t>(d)]) {
            seen[static_cast<std::size_t>(d)] = 1;
            ++count;
        }
    }
    for (const int d : digits) {
        seen[static_cast<std::size_t>(d)] = 0;
    }
    return count;
}

}  // namespace detail

/// Histogram of the number of distinct entries over a contiguous chunk of
/// the demand space. Demands are ordered lexicographically (the last user's
/// index varies fastest), so disjoint chunks can be processed independently
/// and merged by addition.
inline std::vector<BigInt> distinct_count_histogram(long long num_files, long long num_users,
                                                    std::uint64_t first, std::uint64_t count) {
    std::vector<BigInt> histogram(static_cast<std::size_t>(std::min(num_files, num_users)) + 1,
                                  BigInt(0));
    // Decode `first` into demand digits, most significant first.
    std::vector<int> digits(static_cast<std::size_t>(num_users), 1);
    std::uint64_t index = first;
    for (long long pos = num_users - 1; pos >= 0; --pos) {
        digits[static_cast<std::size_t>(pos)] =
            static_cast<int>(index % static_cast<std::uint64_t>(num_files)) + 1;
        index /= static_cast<std::uint64_t>(num_files);
    }
    std::vector<char> seen(static_cast<std::size_t>(num_files) + 1, 0);
    for (std::uint64_t i = 0; i < count; ++i) {
        histogram[static_cast<std::size_t>(detail::distinct_of_digits(digits, seen))] += 1;
        // Odometer increment.
        for (long long pos = num_users - 1; pos >= 0; --pos) {
            auto& digit = digits[static_cast<std::size_t>(pos)];
            if (digit < num_files) {
                ++digit;
                break;
            }
            digit = 1;
        }
    }
    return histogram;
}

/// Ground-truth expected rate by exhaustive enumeration of all N^K demand
/// vectors, as an exact rational.
inline Rational enumerate_expected_rate(const ProblemInstance& inst,
                                        const PlacementVector& placement,
                                        std::uint64_t cap = kDefaultEnumerationCap) {
    const std::uint64_t space = detail::checked_space(inst.num_files, inst.num_users, cap);
    require_feasible(inst, placement);
    std::vector<Rational> rate_of(static_cast<std::size_t>(inst.max_distinct()) + 1);
    for (long long n = 1; n <= inst.max_distinct(); ++n) {
        rate_of[static_cast<std::size_t>(n)] = per_demand_rate(inst, placement, n);
    }
    const std::vector<BigInt> histogram =
        distinct_count_histogram(inst.num_files, inst.num_users, 0, space);
    Rational total(0);
    for (long long n = 1; n <= inst.max_distinct(); ++n) {
        total += Rational(histogram[static_cast<std::size_t>(n)]) *
                 rate_of[static_cast<std::size_t>(n)];
    }
    return total / Rational(demand_space_size(inst.num_files, inst.num_users));
}

/// Empirical distribution of the number of distinct requests by exhaustive
/// enumeration; must agree with prob_distinct at every point.
inline DistinctRequestDistribution enumerate_distinct_distribution(
    long long num_files, long long num_users, std::uint64_t cap = kDefaultEnumerationCap) {
    const std::uint64_t space = detail::checked_space(num_files, num_users, cap);
    const std::vector<BigInt> histogram =
        distinct_count_histogram(num_files, num_users, 0, space);
    DistinctRequestDistribution dist;
    dist.num_files = num_files;
    dist.num_users = num_users;
    const Rational denominator(demand_space_size(num_files, num_users));
    for (long long n = 1; n <= std::min(num_files, num_users); ++n) {
        dist.probabilities[static_cast<int>(n)] =
            Rational(histogram[static_cast<std::size_t>(n)]) / denominator;
    }
    return dist;
}

/// Draws a uniform value in [0, n) by rejection; avoids
/// std::uniform_int_distribution so that sequences are identical on every
/// platform.
inline std::uint64_t draw_uniform(std::mt19937_64& gen, std::uint64_t n) {
    const std::uint64_t limit =
        std::numeric_limits<std::uint64_t>::max() -
        std::numeric_limits<std::uint64_t>::max() % n;
    std::uint64_t value;
    do {
        value = gen();
    } while (value >= limit);
    return value % n;
}

struct MonteCarloEstimate {
    double estimate = 0.0;
    double std_error = 0.0;
    std::uint64_t trials = 0;
    std::uint64_t seed = 0;
};

/// Sample mean of the per-demand load over i.i.d. uniform demands.
/// Deterministic for a fixed seed.
inline MonteCarloEstimate monte_carlo_expected_rate(const ProblemInstance& inst,
                                                    const PlacementVector& placement,
                                                    std::uint64_t trials, std::uint64_t seed) {
    if (trials < 1) {
        throw std::domain_error("monte_carlo_expected_rate: need at least one trial");
    }
    require_feasible(inst, placement);
    std::vector<double> rate_of(static_cast<std::size_t>(inst.max_distinct()) + 1, 0.0);
    for (long long n = 1; n <= inst.max_distinct(); ++n) {
        rate_of[static_cast<std::size_t>(n)] =
            per_demand_rate(inst, placement, n).convert_to<double>();
    }

    std::mt19937_64 gen(seed);
    std::vector<int> demand(static_cast<std::size_t>(inst.num_users));
    std::vector<char> seen(static_cast<std::size_t>(inst.num_files) + 1, 0);
    double sum = 0.0;
    double sum_squares = 0.0;
    for (std::uint64_t t = 0; t < trials; ++t) {
        for (auto& entry : demand) {
            entry = static_cast<int>(
                        draw_uniform(gen, static_cast<std::uint64_t>(inst.num_files))) +
                    1;
        }
        const double rate =
            rate_of[static_cast<std::size_t>(detail::distinct_of_digits(demand, seen))];
        sum += rate;
        sum_squares += rate * rate;
    }

    MonteCarloEstimate result;
    result.trials = trials;
    result.seed = seed;
    result.estimate = sum / static_cast<double>(trials);
    if (trials > 1) {
        const double n = static_cast<double>(trials);
        double variance = (sum_squares - n * result.estimate * result.estimate) / (n - 1.0);
        if (variance < 0.0) variance = 0.0;  // guard tiny negative round-off
        result.std_error = std::sqrt(variance / n);
    }
    return result;
}

}  // namespace mccs
