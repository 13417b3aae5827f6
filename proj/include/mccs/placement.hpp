#pragma once

#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "mccs/combinatorics.hpp"
#include "mccs/rational.hpp"

namespace mccs {

/// A caching system: N equally popular files of equal size, K users each
/// holding a cache of M file units over a shared error-free link.
struct ProblemInstance {
    long long num_files = 0;  // N
    long long num_users = 0;  // K
    Rational cache_size;      // M, in file units, 0 <= M <= N

    Rational mu() const { return cache_size / num_files; }
    long long max_distinct() const { return std::min(num_files, num_users); }
};

inline ProblemInstance make_instance(long long num_files, long long num_users,
                                     const Rational& cache_size) {
    if (num_files < 1 || num_users < 1) {
        throw std::domain_error("make_instance: need at least one file and one user");
    }
    if (cache_size < 0 || cache_size > num_files) {
        throw std::domain_error("make_instance: cache size must lie in [0, N]");
    }
    return ProblemInstance{num_files, num_users, cache_size};
}

/// Placement vector a = [a_0, ..., a_K]: a_l is the normalized size of each
/// subfile assigned to user subsets of size l. a_0 is the uncached fraction.
/// Explicit zero entries are kept so the vector always has K+1 entries.
struct PlacementVector {
    std::vector<Rational> a;

    std::vector<int> support() const {
        std::vector<int> indices;
        for (std::size_t l = 0; l < a.size(); ++l) {
            if (a[l] != 0) {
                indices.push_back(static_cast<int>(l));
            }
        }
        return indices;
    }
};

struct FeasibilityReport {
    bool feasible = false;
    std::vector<std::string> violations;
    Rational partition_total;  // sum_l C(K,l) a_l, must equal 1
    Rational cache_usage;      // sum_{l>=1} C(K-1,l-1) a_l, must be <= mu
};

inline void require_length(const ProblemInstance& inst, const PlacementVector& placement) {
    if (placement.a.size() != static_cast<std::size_t>(inst.num_users) + 1) {
        throw std::domain_error("placement vector must have K+1 entries");
    }
}

/// Exact feasibility check of the file-partitioning constraint, the local
/// cache-size constraint and the per-entry bounds.
inline FeasibilityReport check_feasible(const ProblemInstance& inst,
                                        const PlacementVector& placement) {
    require_length(inst, placement);
    const long long K = inst.num_users;
    FeasibilityReport report;
    report.partition_total = 0;
    report.cache_usage = 0;
    for (long long l = 0; l <= K; ++l) {
        const Rational& al = placement.a[static_cast<std::size_t>(l)];
        report.partition_total += Rational(binom(K, l)) * al;
        if (l >= 1) {
            report.cache_usage += Rational(binom(K - 1, l - 1)) * al;
        }
        if (al < 0 || al > 1) {
            report.violations.push_back("bounds: a_" + std::to_string(l) + " = " +
                                        to_fraction(al) + " outside [0,1]");
        }
    }
    if (report.partition_total != 1) {
        report.violations.push_back("partition: sum C(K,l)*a_l = " +
                                    to_fraction(report.partition_total) + ", expected 1");
    }
    if (report.cache_usage > inst.mu()) {
        report.violations.push_back("cache: usage " + to_fraction(report.cache_usage) +
                                    " exceeds mu = " + to_fraction(inst.mu()));
    }
    report.feasible = report.violations.empty();
    return report;
}

inline void require_feasible(const ProblemInstance& inst, const PlacementVector& placement) {
    const FeasibilityReport report = check_feasible(inst, placement);
    if (!report.feasible) {
        std::string detail = "infeasible placement:";
        for (const auto& v : report.violations) {
            detail += " [" + v + "]";
        }
        throw std::domain_error(detail);
    }
}

/// The lower support index l* of the optimal placement: the unique integer
/// with mu*K - 1 <= l* < mu*K. Requires mu > 0.
inline long long optimal_support_index(const ProblemInstance& inst) {
    const Rational mu_k = inst.mu() * inst.num_users;
    if (mu_k <= 0) {
        throw std::domain_error("optimal_support_index: requires mu > 0");
    }
    return static_cast<long long>(ceil_nonneg(mu_k)) - 1;
}

/// Expected-rate-optimal placement for arbitrary cache size. The optimum
/// concentrates on at most two adjacent subgroup sizes l* and l*+1:
///   a_{l*}   = (l*+1 - mu*K) / C(K,l*)
///   a_{l*+1} = (mu*K - l*)   / C(K,l*+1)
/// When mu*K is an integer the first term vanishes and a single subgroup
/// carries everything (equal file partitioning).
inline PlacementVector optimal_placement(const ProblemInstance& inst) {
    const long long K = inst.num_users;
    const Rational mu = inst.mu();
    PlacementVector placement;
    placement.a.assign(static_cast<std::size_t>(K) + 1, Rational(0));
    if (mu == 0) {
        placement.a[0] = 1;
        return placement;
    }
    if (mu == 1) {
        placement.a[static_cast<std::size_t>(K)] = 1;
        return placement;
    }
    const Rational mu_k = mu * K;
    const long long lstar = optimal_support_index(inst);
    placement.a[static_cast<std::size_t>(lstar)] =
        Rational(lstar + 1 - mu_k) / Rational(binom(K, lstar));
    placement.a[static_cast<std::size_t>(lstar) + 1] =
        Rational(mu_k - lstar) / Rational(binom(K, lstar + 1));
    return placement;
}

/// Delivery load for a demand with `n_distinct` distinct requests:
///   R = sum_{l=0}^{K-1} [C(K,l+1) - C(K-n,l+1)] a_l.
/// The subtracted term counts the redundant user subsets that the modified
/// delivery scheme skips; the load depends on the demand only through the
/// number of distinct requests.
inline Rational per_demand_rate(const ProblemInstance& inst, const PlacementVector& placement,
                                long long n_distinct) {
    require_length(inst, placement);
    if (n_distinct < 1 || n_distinct > inst.max_distinct()) {
        throw std::domain_error("per_demand_rate: distinct-request count out of range");
    }
    const long long K = inst.num_users;
    Rational rate(0);
    for (long long l = 0; l <= K - 1; ++l) {
        const Rational coefficient(binom(K, l + 1) - binom(K - n_distinct, l + 1));
        rate += coefficient * placement.a[static_cast<std::size_t>(l)];
    }
    return rate;
}

/// Expected load over uniform random demands.
inline Rational expected_rate(const ProblemInstance& inst, const PlacementVector& placement) {
    require_feasible(inst, placement);
    Rational total(0);
    for (long long n = 1; n <= inst.max_distinct(); ++n) {
        total += prob_distinct(inst.num_files, inst.num_users, n) *
                 per_demand_rate(inst, placement, n);
    }
    return total;
}

/// Minimum expected rate, evaluated directly from l*, mu, K and N without
/// materializing the placement vector. Identical (exactly) to
/// expected_rate(inst, optimal_placement(inst)).
inline Rational minimum_expected_rate(const ProblemInstance& inst) {
    const long long K = inst.num_users;
    const Rational mu = inst.mu();
    if (mu == 0) {
        // No cache: every distinct request is unicast, so the rate is E[N~].
        Rational total(0);
        for (long long n = 1; n <= inst.max_distinct(); ++n) {
            total += prob_distinct(inst.num_files, inst.num_users, n) * n;
        }
        return total;
    }
    if (mu == 1) {
        return Rational(0);
    }
    const Rational mu_k = mu * K;
    const long long lstar = optimal_support_index(inst);
    const Rational a_lo = Rational(lstar + 1 - mu_k) / Rational(binom(K, lstar));
    const Rational a_hi = Rational(mu_k - lstar) / Rational(binom(K, lstar + 1));
    Rational total(0);
    for (long long n = 1; n <= inst.max_distinct(); ++n) {
        const Rational lo_term = Rational(binom(K, lstar + 1) - binom(K - n, lstar + 1)) * a_lo;
        const Rational hi_term = Rational(binom(K, lstar + 2) - binom(K - n, lstar + 2)) * a_hi;
        total += prob_distinct(inst.num_files, inst.num_users, n) * (lo_term + hi_term);
    }
    return total;
}

/// Load of the original scheme without redundancy removal; identical for
/// every demand vector.
inline Rational peak_rate_ccs(const PlacementVector& placement) {
    if (placement.a.empty()) {
        throw std::domain_error("peak_rate_ccs: empty placement");
    }
    const long long K = static_cast<long long>(placement.a.size()) - 1;
    Rational rate(0);
    for (long long l = 0; l <= K - 1; ++l) {
        rate += Rational(binom(K, l + 1)) * placement.a[static_cast<std::size_t>(l)];
    }
    return rate;
}

/// Worst-case load of the modified scheme: all requests distinct, i.e.
/// n_distinct = min(N,K).
inline Rational peak_rate_mccs(const ProblemInstance& inst, const PlacementVector& placement) {
    return per_demand_rate(inst, placement, inst.max_distinct());
}

/// Which subgroup sizes still contain redundant subsets for a demand with
/// n_distinct distinct requests, under the two-level optimal placement.
enum class RedundancyCase {
    both_subgroups,       // K - n >= l*+2: redundancy at sizes l* and l*+1
    lower_subgroup_only,  // K - n == l*+1: redundancy only at size l*
    none,                 // K - n <  l*+1: every subset is non-redundant
};

struct CaseRate {
    Rational rate;
    RedundancyCase label = RedundancyCase::none;
};

/// Evaluates the per-demand load through the three redundancy cases of the
/// optimal placement instead of the generic binomial sum. Must agree with
/// per_demand_rate(inst, optimal_placement(inst), n_distinct) exactly.
inline CaseRate case_rate_breakdown(const ProblemInstance& inst, long long n_distinct) {
    if (n_distinct < 1 || n_distinct > inst.max_distinct()) {
        throw std::domain_error("case_rate_breakdown: distinct-request count out of range");
    }
    if (inst.mu() == 0) {
        throw std::domain_error("case_rate_breakdown: requires mu > 0");
    }
    const long long K = inst.num_users;
    const Rational mu_k = inst.mu() * K;
    const long long lstar = optimal_support_index(inst);
    const Rational a_lo = Rational(lstar + 1 - mu_k) / Rational(binom(K, lstar));
    const Rational a_hi = Rational(mu_k - lstar) / Rational(binom(K, lstar + 1));

    CaseRate result;
    const long long leftover = K - n_distinct;
    if (leftover >= lstar + 2) {
        result.label = RedundancyCase::both_subgroups;
        result.rate = Rational(binom(K, lstar + 1) - binom(leftover, lstar + 1)) * a_lo +
                      Rational(binom(K, lstar + 2) - binom(leftover, lstar + 2)) * a_hi;
    } else if (leftover == lstar + 1) {
        result.label = RedundancyCase::lower_subgroup_only;
        result.rate = Rational(binom(K, lstar + 1) - binom(leftover, lstar + 1)) * a_lo +
                      Rational(binom(K, lstar + 2)) * a_hi;
    } else {
        result.label = RedundancyCase::none;
        result.rate = Rational(binom(K, lstar + 1)) * a_lo + Rational(binom(K, lstar + 2)) * a_hi;
    }
    return result;
}

struct RateReport {
    Rational expected_rate;
    Rational peak_rate_mccs;
    Rational peak_rate_ccs;
    std::map<int, Rational> per_distinct_rates;
};

inline RateReport rate_report(const ProblemInstance& inst, const PlacementVector& placement) {
    require_feasible(inst, placement);
    RateReport report;
    report.expected_rate = 0;
    for (long long n = 1; n <= inst.max_distinct(); ++n) {
        const Rational rate = per_demand_rate(inst, placement, n);
        report.per_distinct_rates[static_cast<int>(n)] = rate;
        report.expected_rate += prob_distinct(inst.num_files, inst.num_users, n) * rate;
    }
    report.peak_rate_mccs = report.per_distinct_rates.rbegin()->second;
    report.peak_rate_ccs = peak_rate_ccs(placement);
    return report;
}

}  // namespace mccs
