#pragma once

#include <algorithm>
#include <map>
#include <stdexcept>
#include <vector>

#include "mccs/rational.hpp"

namespace mccs {

/// Demand vector: the file index (1-based) requested by each user.
using DemandVector = std::vector<int>;

/// Binomial coefficient C(n,k), total on all integer inputs: returns 0
/// whenever n < 0, k < 0 or k > n. Rate formulas rely on this convention
/// so they need no case splits near the boundaries.
inline BigInt binom(long long n, long long k) {
    if (n < 0 || k < 0 || k > n) {
        return BigInt(0);
    }
    if (k > n - k) {
        k = n - k;
    }
    BigInt result(1);
    for (long long i = 1; i <= k; ++i) {
        result *= (n - k + i);
        result /= i;  // exact: result holds C(n-k+i, i) after each step
    }
    return result;
}

/// Stirling number of the second kind: partitions of an n-set into k
/// nonempty blocks, by the recurrence S(n,k) = k*S(n-1,k) + S(n-1,k-1).
inline BigInt stirling2(long long n, long long k) {
    if (n < 0 || k < 0) {
        throw std::domain_error("stirling2: arguments must be non-negative");
    }
    if (k > n) {
        return BigInt(0);
    }
    if (n == 0) {
        return BigInt(k == 0 ? 1 : 0);
    }
    if (k == 0) {
        return BigInt(0);
    }
    // Rolling row over block counts 0..k.
    std::vector<BigInt> row(static_cast<std::size_t>(k) + 1, BigInt(0));
    row[0] = 1;  // S(0,0)
    for (long long i = 1; i <= n; ++i) {
        for (long long j = std::min<long long>(i, k); j >= 1; --j) {
            row[static_cast<std::size_t>(j)] =
                j * row[static_cast<std::size_t>(j)] + row[static_cast<std::size_t>(j) - 1];
        }
        row[0] = 0;
    }
    return row[static_cast<std::size_t>(k)];
}

inline BigInt factorial(long long n) {
    if (n < 0) {
        throw std::domain_error("factorial: negative argument");
    }
    BigInt result(1);
    for (long long i = 2; i <= n; ++i) {
        result *= i;
    }
    return result;
}

/// Probability that a uniform i.i.d. demand vector of length K over N files
/// contains exactly `n_distinct` distinct files:
/// S(K,n) * C(N,n) * n! / N^K.
inline Rational prob_distinct(long long num_files, long long num_users, long long n_distinct) {
    if (num_files < 1 || num_users < 1) {
        throw std::domain_error("prob_distinct: need at least one file and one user");
    }
    if (n_distinct < 1 || n_distinct > std::min(num_files, num_users)) {
        throw std::domain_error("prob_distinct: distinct-request count out of range");
    }
    const BigInt numerator = stirling2(num_users, n_distinct) * binom(num_files, n_distinct) *
                             factorial(n_distinct);
    const BigInt denominator =
        boost::multiprecision::pow(BigInt(num_files), static_cast<unsigned>(num_users));
    return Rational(numerator, denominator);
}

/// Number of distinct file indices in a demand vector.
inline int distinct_count(const DemandVector& demand) {
    if (demand.empty()) {
        throw std::domain_error("distinct_count: empty demand vector");
    }
    std::vector<int> sorted(demand);
    std::sort(sorted.begin(), sorted.end());
    int count = 1;
    for (std::size_t i = 1; i < sorted.size(); ++i) {
        if (sorted[i] != sorted[i - 1]) {
            ++count;
        }
    }
    return count;
}

/// Distribution of the number of distinct requests over uniform demands.
struct DistinctRequestDistribution {
    long long num_files = 0;
    long long num_users = 0;
    std::map<int, Rational> probabilities;  // n_distinct -> probability
};

inline DistinctRequestDistribution distinct_request_distribution(long long num_files,
                                                                 long long num_users) {
    DistinctRequestDistribution dist;
    dist.num_files = num_files;
    dist.num_users = num_users;
    const long long top = std::min(num_files, num_users);
    for (long long n = 1; n <= top; ++n) {
        dist.probabilities[static_cast<int>(n)] = prob_distinct(num_files, num_users, n);
    }
    return dist;
}

}  // namespace mccs
