// Acceptance suite: end-to-end checks of the placement optimizer against its
// three independent oracles (exact LP, exhaustive demand enumeration, and the
// bit-exact delivery simulator), plus reproduction of the reference placement
// table. Prints one PASS/FAIL line per criterion and exits nonzero on any
// failure.

#include <sys/wait.h>

#include <chrono>
#include <cstdio>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "mccs/combinatorics.hpp"
#include "mccs/delivery.hpp"
#include "mccs/demand_oracle.hpp"
#include "mccs/lp.hpp"
#include "mccs/placement.hpp"

using namespace mccs;

namespace {

struct Criterion {
    int id;
    std::string name;
    double time_budget_seconds;  // 0 = no stated budget
    bool passed = false;
    double elapsed_seconds = 0.0;
    std::string detail;
};

std::vector<Rational> rational_grid(long long num_files, const Rational& step) {
    std::vector<Rational> values;
    for (Rational m(0); m <= num_files; m += step) {
        values.push_back(m);
    }
    return values;
}

std::vector<DemandVector> all_demands(int num_files, int num_users) {
    std::vector<DemandVector> out;
    DemandVector demand(static_cast<std::size_t>(num_users), 1);
    while (true) {
        out.push_back(demand);
        int pos = num_users - 1;
        for (; pos >= 0; --pos) {
            if (demand[static_cast<std::size_t>(pos)] < num_files) {
                ++demand[static_cast<std::size_t>(pos)];
                break;
            }
            demand[static_cast<std::size_t>(pos)] = 1;
        }
        if (pos < 0) break;
    }
    return out;
}

std::pair<int, std::string> run_cli(const std::string& args) {
    const std::string command = std::string(MCCS_CLI_PATH) + " " + args + " 2>&1";
    FILE* pipe = popen(command.c_str(), "r");
    if (!pipe) {
        return {-1, "popen failed"};
    }
    std::string output;
    char buffer[4096];
    while (std::size_t got = std::fread(buffer, 1, sizeof(buffer), pipe)) {
        output.append(buffer, got);
    }
    const int status = pclose(pipe);
    return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, output};
}

// ---------------------------------------------------------------------------
// Criterion 1: the CLI table reproduces the reference placement grid for
// K=7, N=10 at three decimals. The published grid misprints row M=6 with its
// two values transposed (as printed it would violate the file-partitioning
// constraint and break the M <-> N-M reversal symmetry); the expected values
// below are the feasible ones.
bool check_table(std::string& detail) {
    const std::vector<std::vector<std::string>> expected = {
        {"1.000", "0.000", "0.000", "0.000", "0.000", "0.000", "0.000", "0.000"},
        {"0.300", "0.100", "0.000", "0.000", "0.000", "0.000", "0.000", "0.000"},
        {"0.000", "0.086", "0.019", "0.000", "0.000", "0.000", "0.000", "0.000"},
        {"0.000", "0.000", "0.043", "0.003", "0.000", "0.000", "0.000", "0.000"},
        {"0.000", "0.000", "0.010", "0.023", "0.000", "0.000", "0.000", "0.000"},
        {"0.000", "0.000", "0.000", "0.014", "0.014", "0.000", "0.000", "0.000"},
        {"0.000", "0.000", "0.000", "0.000", "0.023", "0.010", "0.000", "0.000"},
        {"0.000", "0.000", "0.000", "0.000", "0.003", "0.043", "0.000", "0.000"},
        {"0.000", "0.000", "0.000", "0.000", "0.000", "0.019", "0.086", "0.000"},
        {"0.000", "0.000", "0.000", "0.000", "0.000", "0.000", "0.100", "0.300"},
        {"0.000", "0.000", "0.000", "0.000", "0.000", "0.000", "0.000", "1.000"},
    };
    const auto [exit_code, output] = run_cli("table --K 7 --N 10");
    if (exit_code != 0) {
        detail = "table command exited with " + std::to_string(exit_code);
        return false;
    }
    std::istringstream lines(output);
    std::string line;
    if (!std::getline(lines, line) || line != "M,a_0,a_1,a_2,a_3,a_4,a_5,a_6,a_7") {
        detail = "unexpected header: " + line;
        return false;
    }
    for (int m = 0; m <= 10; ++m) {
        if (!std::getline(lines, line)) {
            detail = "missing row M=" + std::to_string(m);
            return false;
        }
        std::istringstream cells(line);
        std::string cell;
        std::getline(cells, cell, ',');
        if (cell != std::to_string(m)) {
            detail = "row label mismatch at M=" + std::to_string(m);
            return false;
        }
        for (int l = 0; l <= 7; ++l) {
            if (!std::getline(cells, cell, ',')) {
                detail = "missing cell a_" + std::to_string(l) + " at M=" + std::to_string(m);
                return false;
            }
            if (cell != expected[static_cast<std::size_t>(m)][static_cast<std::size_t>(l)]) {
                detail = "M=" + std::to_string(m) + " a_" + std::to_string(l) + ": got " + cell +
                         ", want " +
                         expected[static_cast<std::size_t>(m)][static_cast<std::size_t>(l)];
                return false;
            }
        }
    }
    return true;
}

// Criterion 2: closed form == exact LP optimum over the full grid. The
// direct minimum-rate formula and the simplex pivot ceiling ride along on
// the same sweep.
bool check_theorem_vs_lp(std::string& detail) {
    for (long long n = 1; n <= 10; ++n) {
        for (long long k = 1; k <= 10; ++k) {
            for (const Rational& m : rational_grid(n, Rational(1, 4))) {
                const ProblemInstance inst = make_instance(n, k, m);
                const TheoremCheck check = verify_theorem(inst);
                const std::string where = "K=" + std::to_string(k) +
                                          " N=" + std::to_string(n) + " M=" + to_fraction(m);
                if (!check.values_equal) {
                    detail = where + ": closed form " + to_fraction(check.closed_form_value) +
                             " != lp " + to_fraction(check.lp_value);
                    return false;
                }
                if (minimum_expected_rate(inst) != check.closed_form_value) {
                    detail = where + ": direct minimum-rate formula differs";
                    return false;
                }
                if (check.pivot_count > 10 * (k + 4)) {
                    detail = where + ": " + std::to_string(check.pivot_count) +
                             " pivots exceed the ceiling";
                    return false;
                }
            }
        }
    }
    return true;
}

// Criterion 3: Stirling-based distribution == exhaustive enumeration.
bool check_distribution(std::string& detail) {
    for (long long n = 1; n <= 5; ++n) {
        for (long long k = 1; k <= 5; ++k) {
            const auto enumerated = enumerate_distinct_distribution(n, k);
            for (long long d = 1; d <= std::min(n, k); ++d) {
                if (enumerated.probabilities.at(static_cast<int>(d)) !=
                    prob_distinct(n, k, d)) {
                    detail = "N=" + std::to_string(n) + " K=" + std::to_string(k) +
                             " distinct=" + std::to_string(d);
                    return false;
                }
            }
        }
    }
    return true;
}

// Criterion 4: expectation via the distinct-count distribution equals the
// expectation via full demand enumeration.
bool check_expected_rate_enumeration(std::string& detail) {
    for (long long n = 1; n <= 5; ++n) {
        for (long long k = 1; k <= 5; ++k) {
            for (const Rational& m : rational_grid(n, Rational(1, 4))) {
                const ProblemInstance inst = make_instance(n, k, m);
                const PlacementVector a = optimal_placement(inst);
                if (expected_rate(inst, a) != enumerate_expected_rate(inst, a)) {
                    detail = "K=" + std::to_string(k) + " N=" + std::to_string(n) +
                             " M=" + to_fraction(m);
                    return false;
                }
            }
        }
    }
    return true;
}

// Criterion 5: the delivery simulator transmits exactly the predicted load,
// every user reconstructs its file bit-for-bit, and caches respect (and for
// mu in (0,1) exactly meet) their budget.
bool check_delivery(std::string& detail) {
    for (long long n = 1; n <= 4; ++n) {
        for (long long k = 1; k <= 6; ++k) {
            const auto demands = all_demands(static_cast<int>(n), static_cast<int>(k));
            for (const Rational& m : rational_grid(n, Rational(1, 2))) {
                const ProblemInstance inst = make_instance(n, k, m);
                const PlacementVector a = optimal_placement(inst);
                const std::uint64_t file_size = choose_file_size(a);
                const DeliverySession session = partition_and_cache(inst, a, file_size, 23);
                const std::string where = "K=" + std::to_string(k) + " N=" + std::to_string(n) +
                                          " M=" + to_fraction(m);

                const Rational budget = inst.cache_size * file_size;
                const bool tight = inst.mu() > 0 && inst.mu() < 1;
                for (const UserCache& cache : session.caches) {
                    const Rational occupancy(BigInt(cache.occupancy_bits));
                    if (occupancy > budget || (tight && occupancy != budget)) {
                        detail = where + " user " + std::to_string(cache.user + 1) +
                                 ": cache occupancy " + to_fraction(occupancy) + " vs budget " +
                                 to_fraction(budget);
                        return false;
                    }
                }
                for (const DemandVector& demand : demands) {
                    const DeliveryTranscript transcript = build_messages(session.store, demand);
                    if (delivered_load(transcript) !=
                        per_demand_rate(inst, a, distinct_count(demand))) {
                        detail = where + ": load mismatch";
                        return false;
                    }
                    for (const UserCache& cache : session.caches) {
                        const DecodeResult result = decode_check(transcript, cache);
                        const int wanted = demand[static_cast<std::size_t>(cache.user)];
                        if (!result.ok ||
                            result.file_bits !=
                                session.store.originals[static_cast<std::size_t>(wanted - 1)]) {
                            detail = where + " user " + std::to_string(cache.user + 1) +
                                     ": decode failed";
                            return false;
                        }
                    }
                }
            }
        }
    }
    return true;
}

// Criterion 6: structural properties of the optimal placement across the
// grid of criterion 2 (cache tight, support of at most two adjacent entries,
// single-entry equal partitioning at integer mu*K).
bool check_lemmas(std::string& detail) {
    for (long long n = 1; n <= 10; ++n) {
        for (long long k = 1; k <= 10; ++k) {
            for (const Rational& m : rational_grid(n, Rational(1, 4))) {
                const ProblemInstance inst = make_instance(n, k, m);
                if (inst.mu() == 0 || inst.mu() == 1) continue;
                const PlacementVector a = optimal_placement(inst);
                const std::string where = "K=" + std::to_string(k) + " N=" + std::to_string(n) +
                                          " M=" + to_fraction(m);
                const auto report = check_feasible(inst, a);
                if (!report.feasible || report.cache_usage != inst.mu()) {
                    detail = where + ": cache not tight";
                    return false;
                }
                const auto support = a.support();
                if (support.empty() || support.size() > 2 ||
                    (support.size() == 2 && support[1] != support[0] + 1)) {
                    detail = where + ": support shape violated";
                    return false;
                }
                const Rational mu_k = inst.mu() * k;
                if (is_integer(mu_k)) {
                    const long long l = numerator(mu_k).convert_to<long long>();
                    if (support != std::vector<int>{static_cast<int>(l)} ||
                        a.a[static_cast<std::size_t>(l)] != Rational(1) / Rational(binom(k, l))) {
                        detail = where + ": equal partitioning shape violated";
                        return false;
                    }
                }
            }
        }
    }
    return true;
}

// Criterion 7: the three-way case analysis of the per-demand rate agrees
// with the generic formula for K=7, N=10, M=2, covering all three cases.
bool check_case_breakdown(std::string& detail) {
    const ProblemInstance inst = make_instance(10, 7, Rational(2));
    const PlacementVector a = optimal_placement(inst);
    bool both = false, lower = false, none = false;
    for (long long d = 1; d <= 7; ++d) {
        const CaseRate result = case_rate_breakdown(inst, d);
        if (result.rate != per_demand_rate(inst, a, d)) {
            detail = "distinct=" + std::to_string(d) + ": case rate " +
                     to_fraction(result.rate) + " != generic " +
                     to_fraction(per_demand_rate(inst, a, d));
            return false;
        }
        both = both || result.label == RedundancyCase::both_subgroups;
        lower = lower || result.label == RedundancyCase::lower_subgroup_only;
        none = none || result.label == RedundancyCase::none;
    }
    if (!both || !lower || !none) {
        detail = "not all three redundancy cases were exercised";
        return false;
    }
    return true;
}

// Criterion 8: sweep properties for M=2, N=10, K=1..40.
bool check_sweep_properties(std::string& detail) {
    Rational previous(-1);
    for (long long k = 1; k <= 40; ++k) {
        const ProblemInstance inst = make_instance(10, k, Rational(2));
        const PlacementVector a = optimal_placement(inst);
        const Rational expected = expected_rate(inst, a);
        const Rational ccs = peak_rate_ccs(a);
        const std::string where = "K=" + std::to_string(k);
        if (expected > ccs) {
            detail = where + ": expected rate exceeds the ccs rate";
            return false;
        }
        const std::size_t support_size = a.support().size();
        const bool equal_partition_point = (k % 5 == 0);
        if (equal_partition_point && support_size != 1) {
            detail = where + ": expected a single nonzero entry";
            return false;
        }
        if (!equal_partition_point && support_size != 2) {
            detail = where + ": expected two nonzero entries";
            return false;
        }
        if (expected < previous) {
            detail = where + ": expected rate decreased";
            return false;
        }
        previous = expected;
    }
    return true;
}

// Criterion 9: the minimum expected rate is nonincreasing in M, with the
// exact no-cache and full-cache endpoints.
bool check_monotonicity(std::string& detail) {
    for (long long n = 1; n <= 10; ++n) {
        for (long long k = 1; k <= 10; ++k) {
            const std::string where = "K=" + std::to_string(k) + " N=" + std::to_string(n);
            Rational previous;
            bool first = true;
            for (const Rational& m : rational_grid(n, Rational(1, 4))) {
                const Rational rate = minimum_expected_rate(make_instance(n, k, m));
                if (!first && rate > previous) {
                    detail = where + " M=" + to_fraction(m) + ": rate increased";
                    return false;
                }
                previous = rate;
                first = false;
            }
            // Endpoints: E[distinct] at M=0 (via enumeration when cheap,
            // closed form otherwise) and zero at M=N.
            Rational expected_distinct(0);
            if (demand_space_size(n, k) <= 100000) {
                const auto dist = enumerate_distinct_distribution(n, k);
                for (const auto& [d, p] : dist.probabilities) {
                    expected_distinct += p * d;
                }
            } else {
                for (long long d = 1; d <= std::min(n, k); ++d) {
                    expected_distinct += prob_distinct(n, k, d) * d;
                }
            }
            if (minimum_expected_rate(make_instance(n, k, Rational(0))) != expected_distinct) {
                detail = where + ": M=0 endpoint differs from E[distinct]";
                return false;
            }
            if (minimum_expected_rate(make_instance(n, k, Rational(n))) != 0) {
                detail = where + ": M=N endpoint is not zero";
                return false;
            }
        }
    }
    return true;
}

// Criterion 10: the decode checker has teeth: dropping any single coded
// message from a worst-case-demand transcript must break at least one user.
bool check_mutation_sensitivity(std::string& detail) {
    struct Sample {
        long long num_files;
        long long num_users;
        Rational cache_size;
    };
    const std::vector<Sample> samples = {
        {2, 2, Rational(1, 2)}, {2, 3, Rational(1)},    {2, 3, Rational(3, 2)},
        {3, 3, Rational(1)},    {3, 3, Rational(2)},    {2, 4, Rational(1)},
        {3, 4, Rational(3, 2)}, {4, 4, Rational(2)},    {2, 5, Rational(1, 2)},
        {3, 5, Rational(1)},    {2, 6, Rational(1)},    {4, 3, Rational(2)},
    };
    for (const Sample& sample : samples) {
        const ProblemInstance inst =
            make_instance(sample.num_files, sample.num_users, sample.cache_size);
        const PlacementVector a = optimal_placement(inst);
        const DeliverySession session =
            partition_and_cache(inst, a, choose_file_size(a), 31);
        // Worst-case demand: min(N,K) distinct files.
        DemandVector demand;
        for (long long u = 0; u < inst.num_users; ++u) {
            demand.push_back(static_cast<int>(u % inst.max_distinct()) + 1);
        }
        const DeliveryTranscript full = build_messages(session.store, demand);
        const std::string where = "K=" + std::to_string(inst.num_users) +
                                  " N=" + std::to_string(inst.num_files) +
                                  " M=" + to_fraction(inst.cache_size);
        if (full.messages.empty()) {
            detail = where + ": no messages to drop";
            return false;
        }
        for (std::size_t drop = 0; drop < full.messages.size(); ++drop) {
            DeliveryTranscript crippled = full;
            crippled.total_bits -= crippled.messages[drop].payload.size();
            crippled.messages.erase(crippled.messages.begin() +
                                    static_cast<std::ptrdiff_t>(drop));
            bool someone_fails = false;
            for (const UserCache& cache : session.caches) {
                const DecodeResult result = decode_check(crippled, cache);
                const int wanted = demand[static_cast<std::size_t>(cache.user)];
                if (!result.ok ||
                    result.file_bits !=
                        session.store.originals[static_cast<std::size_t>(wanted - 1)]) {
                    someone_fails = true;
                    break;
                }
            }
            if (!someone_fails) {
                detail = where + ": dropping message " + std::to_string(drop) +
                         " went unnoticed";
                return false;
            }
        }
    }
    return true;
}

}  // namespace

int main() {
    std::vector<Criterion> criteria = {
        {1, "table-reproduction", 1.0},
        {2, "theorem-vs-lp-grid", 120.0},
        {3, "distribution-vs-enumeration", 10.0},
        {4, "expected-rate-vs-enumeration", 60.0},
        {5, "delivery-correctness", 300.0},
        {6, "placement-structure", 0.0},
        {7, "case-breakdown-consistency", 0.0},
        {8, "sweep-properties", 10.0},
        {9, "cache-size-monotonicity", 0.0},
        {10, "mutation-sensitivity", 0.0},
    };

    bool all_passed = true;
    for (Criterion& criterion : criteria) {
        const auto start = std::chrono::steady_clock::now();
        switch (criterion.id) {
            case 1: criterion.passed = check_table(criterion.detail); break;
            case 2: criterion.passed = check_theorem_vs_lp(criterion.detail); break;
            case 3: criterion.passed = check_distribution(criterion.detail); break;
            case 4: criterion.passed = check_expected_rate_enumeration(criterion.detail); break;
            case 5: criterion.passed = check_delivery(criterion.detail); break;
            case 6: criterion.passed = check_lemmas(criterion.detail); break;
            case 7: criterion.passed = check_case_breakdown(criterion.detail); break;
            case 8: criterion.passed = check_sweep_properties(criterion.detail); break;
            case 9: criterion.passed = check_monotonicity(criterion.detail); break;
            case 10: criterion.passed = check_mutation_sensitivity(criterion.detail); break;
        }
        const auto end = std::chrono::steady_clock::now();
        criterion.elapsed_seconds = std::chrono::duration<double>(end - start).count();
        if (criterion.time_budget_seconds > 0.0 &&
            criterion.elapsed_seconds > criterion.time_budget_seconds) {
            criterion.passed = false;
            if (!criterion.detail.empty()) criterion.detail += "; ";
            criterion.detail += "exceeded time budget of " +
                                std::to_string(criterion.time_budget_seconds) + "s";
        }
        all_passed = all_passed && criterion.passed;

        std::printf("%s %2d %-32s (%.2fs)%s%s\n", criterion.passed ? "PASS" : "FAIL",
                    criterion.id, criterion.name.c_str(), criterion.elapsed_seconds,
                    criterion.detail.empty() ? "" : " ", criterion.detail.c_str());
        std::fflush(stdout);
    }
    std::printf("acceptance: %s\n", all_passed ? "PASS" : "FAIL");
    return all_passed ? 0 : 1;
}
