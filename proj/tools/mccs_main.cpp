// Command-line front end for the coded-caching placement library: computes
// optimal placements, emits rate tables and sweeps as CSV, runs the
// bit-exact delivery simulator and executes the cross-oracle verification
// suite.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "mccs/combinatorics.hpp"
#include "mccs/delivery.hpp"
#include "mccs/demand_oracle.hpp"
#include "mccs/lp.hpp"
#include "mccs/placement.hpp"
#include "mccs/rational.hpp"

namespace {

using nlohmann::json;
using namespace mccs;

struct CommonOpts {
    std::string format = "plain";
    int places = 3;
    bool exact = false;
    std::string out_path;
};

void add_common(CLI::App* cmd, CommonOpts& opts) {
    cmd->add_option("--format", opts.format, "output format")
        ->check(CLI::IsMember({"plain", "csv", "json"}));
    cmd->add_option("--places", opts.places, "decimal places for rounded output")
        ->check(CLI::Range(1, 50));
    cmd->add_flag("--exact", opts.exact, "print exact fractions instead of decimals");
    cmd->add_option("--out", opts.out_path, "write output to this file instead of stdout");
}

void emit(const CommonOpts& opts, const std::string& text) {
    if (opts.out_path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream file(opts.out_path, std::ios::binary);
    if (!file) {
        throw std::runtime_error("cannot open output file '" + opts.out_path + "'");
    }
    file << text;
}

std::string render_value(const Rational& value, const CommonOpts& opts) {
    return opts.exact ? to_fraction(value) : to_decimal(value, opts.places);
}

json json_fraction(const Rational& value) {
    return json{{"num", numerator(value).str()}, {"den", denominator(value).str()}};
}

std::string dump_json(const json& doc) { return doc.dump(2) + "\n"; }

std::vector<int> parse_demand(const std::string& text) {
    std::vector<int> demand;
    std::stringstream stream(text);
    std::string part;
    while (std::getline(stream, part, ',')) {
        if (part.empty()) {
            throw std::invalid_argument("demand: empty entry in '" + text + "'");
        }
        demand.push_back(std::stoi(part));
    }
    if (demand.empty()) {
        throw std::invalid_argument("demand: no entries in '" + text + "'");
    }
    return demand;
}

std::pair<long long, long long> parse_int_range(const std::string& text) {
    const auto colon = text.find(':');
    if (colon == std::string::npos) {
        const long long single = std::stoll(text);
        return {single, single};
    }
    return {std::stoll(text.substr(0, colon)), std::stoll(text.substr(colon + 1))};
}

// ---------------------------------------------------------------------------
// place / rate

struct InstanceOpts {
    long long num_users = 0;
    long long num_files = 0;
    std::string cache_size;
};

ProblemInstance make_from(const InstanceOpts& opts) {
    return make_instance(opts.num_files, opts.num_users, parse_rational(opts.cache_size));
}

int run_place(const InstanceOpts& inst_opts, const CommonOpts& opts) {
    const ProblemInstance inst = make_from(inst_opts);
    const PlacementVector placement = optimal_placement(inst);
    const FeasibilityReport feas = check_feasible(inst, placement);
    const RateReport rates = rate_report(inst, placement);
    const Rational mu = inst.mu();
    const Rational mu_k = mu * inst.num_users;
    const bool has_lstar = mu > 0;
    const long long lstar = has_lstar ? optimal_support_index(inst) : -1;
    const bool tight = feas.cache_usage == mu;

    if (opts.format == "json") {
        json doc;
        doc["K"] = inst.num_users;
        doc["N"] = inst.num_files;
        doc["M"] = json_fraction(inst.cache_size);
        doc["mu"] = json_fraction(mu);
        doc["muK"] = json_fraction(mu_k);
        if (has_lstar) doc["lstar"] = lstar;
        doc["placement"] = json::array();
        for (const Rational& entry : placement.a) {
            doc["placement"].push_back(json_fraction(entry));
        }
        doc["support"] = placement.support();
        doc["partition_total"] = json_fraction(feas.partition_total);
        doc["cache_usage"] = json_fraction(feas.cache_usage);
        doc["cache_tight"] = tight;
        doc["expected_rate"] = json_fraction(rates.expected_rate);
        doc["peak_rate_mccs"] = json_fraction(rates.peak_rate_mccs);
        doc["peak_rate_ccs"] = json_fraction(rates.peak_rate_ccs);
        emit(opts, dump_json(doc));
        return 0;
    }
    if (opts.format == "csv") {
        std::ostringstream out;
        out << "K,N,M,lstar";
        for (std::size_t l = 0; l < placement.a.size(); ++l) {
            out << ",a_" << l;
        }
        out << ",expected_rate,peak_rate_mccs,peak_rate_ccs\n";
        out << inst.num_users << ',' << inst.num_files << ',' << to_fraction(inst.cache_size)
            << ',' << (has_lstar ? std::to_string(lstar) : "-");
        for (const Rational& entry : placement.a) {
            out << ',' << render_value(entry, opts);
        }
        out << ',' << render_value(rates.expected_rate, opts) << ','
            << render_value(rates.peak_rate_mccs, opts) << ','
            << render_value(rates.peak_rate_ccs, opts) << "\n";
        emit(opts, out.str());
        return 0;
    }

    std::ostringstream out;
    out << "K: " << inst.num_users << "  N: " << inst.num_files
        << "  M: " << to_fraction(inst.cache_size) << "  mu: " << to_fraction(mu)
        << "  muK: " << to_fraction(mu_k) << "\n";
    out << "lstar: " << (has_lstar ? std::to_string(lstar) : "-") << "\n";
    for (const int l : placement.support()) {
        const Rational& entry = placement.a[static_cast<std::size_t>(l)];
        out << "a_" << l << ": " << to_fraction(entry) << " (" << to_decimal(entry, opts.places)
            << ")\n";
    }
    out << "support:";
    for (const int l : placement.support()) {
        out << ' ' << l;
    }
    out << "\n";
    out << "partition_total: " << to_fraction(feas.partition_total) << "\n";
    out << "cache_usage: " << to_fraction(feas.cache_usage) << " of mu " << to_fraction(mu)
        << (tight ? " (tight)" : " (slack)") << "\n";
    out << "expected_rate: " << to_fraction(rates.expected_rate) << " ("
        << to_decimal(rates.expected_rate, opts.places) << ")\n";
    out << "peak_rate_mccs: " << to_fraction(rates.peak_rate_mccs) << " ("
        << to_decimal(rates.peak_rate_mccs, opts.places) << ")\n";
    out << "peak_rate_ccs: " << to_fraction(rates.peak_rate_ccs) << " ("
        << to_decimal(rates.peak_rate_ccs, opts.places) << ")\n";
    emit(opts, out.str());
    return 0;
}

int run_rate(const InstanceOpts& inst_opts, const CommonOpts& opts) {
    const ProblemInstance inst = make_from(inst_opts);
    const PlacementVector placement = optimal_placement(inst);
    const RateReport rates = rate_report(inst, placement);

    if (opts.format == "json") {
        json doc;
        doc["K"] = inst.num_users;
        doc["N"] = inst.num_files;
        doc["M"] = json_fraction(inst.cache_size);
        doc["per_distinct_rates"] = json::object();
        for (const auto& [n, rate] : rates.per_distinct_rates) {
            doc["per_distinct_rates"][std::to_string(n)] = json_fraction(rate);
        }
        doc["expected_rate"] = json_fraction(rates.expected_rate);
        doc["peak_rate_mccs"] = json_fraction(rates.peak_rate_mccs);
        doc["peak_rate_ccs"] = json_fraction(rates.peak_rate_ccs);
        emit(opts, dump_json(doc));
        return 0;
    }
    std::ostringstream out;
    if (opts.format == "csv") {
        out << "metric,value\n";
        for (const auto& [n, rate] : rates.per_distinct_rates) {
            out << "rate_distinct_" << n << ',' << render_value(rate, opts) << "\n";
        }
        out << "expected_rate," << render_value(rates.expected_rate, opts) << "\n";
        out << "peak_rate_mccs," << render_value(rates.peak_rate_mccs, opts) << "\n";
        out << "peak_rate_ccs," << render_value(rates.peak_rate_ccs, opts) << "\n";
    } else {
        out << "K: " << inst.num_users << "  N: " << inst.num_files
            << "  M: " << to_fraction(inst.cache_size) << "\n";
        for (const auto& [n, rate] : rates.per_distinct_rates) {
            out << "rate (distinct=" << n << "): " << to_fraction(rate) << " ("
                << to_decimal(rate, opts.places) << ")\n";
        }
        out << "expected_rate: " << to_fraction(rates.expected_rate) << " ("
            << to_decimal(rates.expected_rate, opts.places) << ")\n";
        out << "peak_rate_mccs: " << to_fraction(rates.peak_rate_mccs) << " ("
            << to_decimal(rates.peak_rate_mccs, opts.places) << ")\n";
        out << "peak_rate_ccs: " << to_fraction(rates.peak_rate_ccs) << " ("
            << to_decimal(rates.peak_rate_ccs, opts.places) << ")\n";
    }
    emit(opts, out.str());
    return 0;
}

// ---------------------------------------------------------------------------
// table

int run_table(long long num_users, long long num_files, const CommonOpts& opts) {
    if (opts.format == "json") {
        json rows = json::array();
        for (long long m = 0; m <= num_files; ++m) {
            const ProblemInstance inst = make_instance(num_files, num_users, Rational(m));
            const PlacementVector placement = optimal_placement(inst);
            json row;
            row["M"] = m;
            row["a"] = json::array();
            for (const Rational& entry : placement.a) {
                row["a"].push_back(json_fraction(entry));
            }
            rows.push_back(row);
        }
        emit(opts, dump_json(rows));
        return 0;
    }
    std::ostringstream out;
    out << "M";
    for (long long l = 0; l <= num_users; ++l) {
        out << ",a_" << l;
    }
    out << "\n";
    for (long long m = 0; m <= num_files; ++m) {
        const ProblemInstance inst = make_instance(num_files, num_users, Rational(m));
        const PlacementVector placement = optimal_placement(inst);
        out << m;
        for (const Rational& entry : placement.a) {
            out << ',' << render_value(entry, opts);
        }
        out << "\n";
    }
    emit(opts, out.str());
    return 0;
}

// ---------------------------------------------------------------------------
// sweep

int run_sweep(const std::string& k_range, long long num_files, const std::string& cache_size,
              const CommonOpts& opts) {
    const auto [k_lo, k_hi] = parse_int_range(k_range);
    if (k_lo < 1 || k_hi < k_lo) {
        throw std::invalid_argument("sweep: invalid user range '" + k_range + "'");
    }
    const Rational m = parse_rational(cache_size);

    struct Row {
        long long num_users;
        Rational expected_mccs;
        Rational rate_ccs;
        Rational peak_mccs;
        bool equal_partition;
    };
    std::vector<Row> rows;
    for (long long k = k_lo; k <= k_hi; ++k) {
        const ProblemInstance inst = make_instance(num_files, k, m);
        const PlacementVector placement = optimal_placement(inst);
        rows.push_back(Row{
            k,
            expected_rate(inst, placement),
            peak_rate_ccs(placement),
            peak_rate_mccs(inst, placement),
            is_integer(inst.mu() * k),
        });
    }

    if (opts.format == "json") {
        json doc = json::array();
        for (const Row& row : rows) {
            json entry;
            entry["K"] = row.num_users;
            entry["expected_rate_mccs"] = json_fraction(row.expected_mccs);
            entry["rate_ccs"] = json_fraction(row.rate_ccs);
            entry["peak_rate_mccs"] = json_fraction(row.peak_mccs);
            entry["equal_partition"] = row.equal_partition;
            doc.push_back(entry);
        }
        emit(opts, dump_json(doc));
        return 0;
    }
    std::ostringstream out;
    out << "K,expected_rate_mccs,rate_ccs,peak_rate_mccs,equal_partition\n";
    for (const Row& row : rows) {
        out << row.num_users << ',' << render_value(row.expected_mccs, opts) << ','
            << render_value(row.rate_ccs, opts) << ',' << render_value(row.peak_mccs, opts)
            << ',' << (row.equal_partition ? 1 : 0) << "\n";
    }
    emit(opts, out.str());
    return 0;
}

// ---------------------------------------------------------------------------
// simulate

int run_simulate(const InstanceOpts& inst_opts, const std::string& demand_text,
                 std::uint64_t seed, std::uint64_t file_size_mult, const CommonOpts& opts) {
    const ProblemInstance inst = make_from(inst_opts);
    const PlacementVector placement = optimal_placement(inst);
    const DemandVector demand = parse_demand(demand_text);
    const std::uint64_t file_size = choose_file_size(placement) * file_size_mult;
    const DeliverySession session = partition_and_cache(inst, placement, file_size, seed);
    const DeliveryTranscript transcript = build_messages(session.store, demand);

    struct Verdict {
        int user;
        bool ok;
        std::string failure;
    };
    std::vector<Verdict> verdicts;
    bool all_ok = true;
    for (const UserCache& cache : session.caches) {
        const DecodeResult result = decode_check(transcript, cache);
        const bool match =
            result.ok &&
            result.file_bits ==
                session.store.originals[static_cast<std::size_t>(
                    demand[static_cast<std::size_t>(cache.user)] - 1)];
        verdicts.push_back(Verdict{cache.user + 1, match,
                                   result.ok ? (match ? "" : "decoded bits differ")
                                             : result.failure});
        all_ok = all_ok && match;
    }

    if (opts.format == "json") {
        json doc;
        doc["K"] = inst.num_users;
        doc["N"] = inst.num_files;
        doc["M"] = json_fraction(inst.cache_size);
        doc["file_bits"] = transcript.file_size_bits;
        doc["seed"] = transcript.seed;
        doc["demand"] = transcript.demand;
        json leaders = json::array();
        for (int k = 0; k < inst.num_users; ++k) {
            if (subset_contains(transcript.leaders, k)) leaders.push_back(k + 1);
        }
        doc["leaders"] = leaders;
        doc["messages"] = json::array();
        for (const CodedMessage& message : transcript.messages) {
            json entry;
            json users = json::array();
            for (int k = 0; k < inst.num_users; ++k) {
                if (subset_contains(message.subset, k)) users.push_back(k + 1);
            }
            entry["subset"] = users;
            entry["bits"] = message.payload.size();
            entry["payload"] = message.payload.to_hex();
            doc["messages"].push_back(entry);
        }
        doc["total_bits"] = transcript.total_bits;
        doc["load"] = json_fraction(delivered_load(transcript));
        doc["decode"] = json::array();
        for (const Verdict& verdict : verdicts) {
            json entry;
            entry["user"] = verdict.user;
            entry["ok"] = verdict.ok;
            if (!verdict.ok) entry["failure"] = verdict.failure;
            doc["decode"].push_back(entry);
        }
        doc["ok"] = all_ok;
        emit(opts, dump_json(doc));
        return all_ok ? 0 : 1;
    }

    std::ostringstream out;
    out << render_transcript(transcript);
    for (const Verdict& verdict : verdicts) {
        out << "decode user=" << verdict.user << (verdict.ok ? " ok" : " FAILED (" + verdict.failure + ")")
            << "\n";
    }
    out << "simulate: " << (all_ok ? "OK" : "FAILED") << "\n";
    emit(opts, out.str());
    return all_ok ? 0 : 1;
}

// ---------------------------------------------------------------------------
// verify

struct VerifyGrid {
    long long k_lo = 1, k_hi = 8;
    long long n_lo = 1, n_hi = 8;
    std::optional<std::pair<Rational, Rational>> m_range;  // default: [0, N]
    Rational m_step = Rational(1, 4);
};

void apply_grid_token(VerifyGrid& grid, const std::string& token) {
    const auto equals = token.find('=');
    if (equals == std::string::npos) {
        throw std::invalid_argument("grid token '" + token + "' must look like K=1..8");
    }
    const std::string key = token.substr(0, equals);
    std::string value = token.substr(equals + 1);
    std::string step;
    std::string lo = value, hi = value;
    if (const auto dots = value.find(".."); dots != std::string::npos) {
        lo = value.substr(0, dots);
        hi = value.substr(dots + 2);
        if (const auto colon = hi.find(':'); colon != std::string::npos) {
            step = hi.substr(colon + 1);
            hi = hi.substr(0, colon);
        }
    }
    if (key == "K" || key == "N") {
        const long long lo_value = std::stoll(lo);
        const long long hi_value = std::stoll(hi);
        if (lo_value < 1 || hi_value < lo_value) {
            throw std::invalid_argument("grid token '" + token + "': invalid range");
        }
        if (key == "K") {
            grid.k_lo = lo_value;
            grid.k_hi = hi_value;
        } else {
            grid.n_lo = lo_value;
            grid.n_hi = hi_value;
        }
        return;
    }
    if (key == "M") {
        grid.m_range = {parse_rational(lo), parse_rational(hi)};
        if (!step.empty()) {
            grid.m_step = parse_rational(step);
            if (grid.m_step <= 0) {
                throw std::invalid_argument("grid token '" + token + "': step must be positive");
            }
        }
        return;
    }
    throw std::invalid_argument("grid token '" + token + "': unknown key '" + key + "'");
}

std::vector<Rational> m_values_for(const VerifyGrid& grid, long long num_files) {
    Rational lo(0), hi(num_files);
    if (grid.m_range) {
        lo = grid.m_range->first;
        hi = grid.m_range->second;
    }
    std::vector<Rational> values;
    for (Rational m = lo; m <= hi; m += grid.m_step) {
        if (m >= 0 && m <= num_files) {
            values.push_back(m);
        }
    }
    return values;
}

struct CheckOutcome {
    std::string name;
    long long instances = 0;
    std::vector<std::string> witnesses;
};

std::string describe(const ProblemInstance& inst) {
    return "K=" + std::to_string(inst.num_users) + " N=" + std::to_string(inst.num_files) +
           " M=" + to_fraction(inst.cache_size);
}

int run_verify(const VerifyGrid& grid, std::uint64_t cap, std::uint64_t seed, bool inject_fault,
               const CommonOpts& opts) {
    std::vector<CheckOutcome> checks;

    if (inject_fault) {
        CheckOutcome fault{"inject_fault"};
        for (long long n = grid.n_lo; n <= grid.n_hi; ++n) {
            for (long long k = grid.k_lo; k <= grid.k_hi; ++k) {
                for (const Rational& m : m_values_for(grid, n)) {
                    const ProblemInstance inst = make_instance(n, k, m);
                    PlacementVector placement = optimal_placement(inst);
                    placement.a[0] += Rational(1, 1000);
                    ++fault.instances;
                    if (check_feasible(inst, placement).feasible) {
                        fault.witnesses.push_back(describe(inst) + ": fault not detected");
                    }
                }
            }
        }
        checks.push_back(std::move(fault));
    } else {
        CheckOutcome theorem{"theorem_vs_lp"};
        for (long long n = grid.n_lo; n <= grid.n_hi; ++n) {
            for (long long k = grid.k_lo; k <= grid.k_hi; ++k) {
                for (const Rational& m : m_values_for(grid, n)) {
                    const ProblemInstance inst = make_instance(n, k, m);
                    const TheoremCheck check = verify_theorem(inst);
                    ++theorem.instances;
                    if (!check.values_equal) {
                        theorem.witnesses.push_back(
                            describe(inst) + ": closed form " + to_fraction(check.closed_form_value) +
                            " vs lp " + to_fraction(check.lp_value));
                    }
                }
            }
        }
        checks.push_back(std::move(theorem));

        CheckOutcome stirling{"stirling_vs_enumeration"};
        for (long long n = grid.n_lo; n <= grid.n_hi; ++n) {
            for (long long k = grid.k_lo; k <= grid.k_hi; ++k) {
                if (demand_space_size(n, k) > cap) continue;
                const DistinctRequestDistribution enumerated =
                    enumerate_distinct_distribution(n, k, cap);
                const DistinctRequestDistribution closed = distinct_request_distribution(n, k);
                ++stirling.instances;
                if (enumerated.probabilities != closed.probabilities) {
                    stirling.witnesses.push_back("N=" + std::to_string(n) +
                                                 " K=" + std::to_string(k) +
                                                 ": distributions differ");
                }
            }
        }
        checks.push_back(std::move(stirling));

        CheckOutcome cases{"case_consistency"};
        for (long long n = grid.n_lo; n <= grid.n_hi; ++n) {
            for (long long k = grid.k_lo; k <= grid.k_hi; ++k) {
                for (const Rational& m : m_values_for(grid, n)) {
                    if (m == 0) continue;  // case breakdown needs mu > 0
                    const ProblemInstance inst = make_instance(n, k, m);
                    const PlacementVector placement = optimal_placement(inst);
                    for (long long nd = 1; nd <= inst.max_distinct(); ++nd) {
                        ++cases.instances;
                        if (case_rate_breakdown(inst, nd).rate !=
                            per_demand_rate(inst, placement, nd)) {
                            cases.witnesses.push_back(describe(inst) +
                                                      " distinct=" + std::to_string(nd) +
                                                      ": case rate differs");
                        }
                    }
                }
            }
        }
        checks.push_back(std::move(cases));

        CheckOutcome delivery{"delivery_decode"};
        const long long sim_k_hi = std::min<long long>(grid.k_hi, 4);
        const long long sim_n_hi = std::min<long long>(grid.n_hi, 3);
        for (long long n = grid.n_lo; n <= sim_n_hi; ++n) {
            for (long long k = grid.k_lo; k <= sim_k_hi; ++k) {
                if (demand_space_size(n, k) > cap) continue;
                for (const Rational& m : m_values_for(grid, n)) {
                    const ProblemInstance inst = make_instance(n, k, m);
                    const PlacementVector placement = optimal_placement(inst);
                    const std::uint64_t file_size = choose_file_size(placement);
                    const DeliverySession session =
                        partition_and_cache(inst, placement, file_size, seed);
                    const Rational budget = inst.cache_size * file_size;
                    for (const UserCache& cache : session.caches) {
                        const Rational occupancy(BigInt(cache.occupancy_bits));
                        const bool tight_expected = inst.mu() > 0 && inst.mu() < 1;
                        if (occupancy > budget ||
                            (tight_expected && occupancy != budget)) {
                            delivery.witnesses.push_back(describe(inst) + " user " +
                                                         std::to_string(cache.user + 1) +
                                                         ": cache budget violated");
                        }
                    }
                    DemandVector demand(static_cast<std::size_t>(k), 1);
                    const auto describe_demand = [&demand]() {
                        std::string text = " d=";
                        for (std::size_t i = 0; i < demand.size(); ++i) {
                            if (i > 0) text += ',';
                            text += std::to_string(demand[i]);
                        }
                        return text;
                    };
                    while (true) {
                        ++delivery.instances;
                        const DeliveryTranscript transcript =
                            build_messages(session.store, demand);
                        if (delivered_load(transcript) !=
                            per_demand_rate(inst, placement, distinct_count(demand))) {
                            delivery.witnesses.push_back(describe(inst) + describe_demand() +
                                                         ": load mismatch");
                        }
                        for (const UserCache& cache : session.caches) {
                            const DecodeResult result = decode_check(transcript, cache);
                            const int wanted = demand[static_cast<std::size_t>(cache.user)];
                            if (!result.ok ||
                                result.file_bits !=
                                    session.store.originals[static_cast<std::size_t>(wanted - 1)]) {
                                delivery.witnesses.push_back(
                                    describe(inst) + describe_demand() + " user " +
                                    std::to_string(cache.user + 1) + ": decode failure");
                            }
                        }
                        // next demand vector (odometer)
                        long long pos = k - 1;
                        for (; pos >= 0; --pos) {
                            auto& digit = demand[static_cast<std::size_t>(pos)];
                            if (digit < n) {
                                ++digit;
                                break;
                            }
                            digit = 1;
                        }
                        if (pos < 0) break;
                    }
                }
            }
        }
        checks.push_back(std::move(delivery));
    }

    bool passed = true;
    for (const CheckOutcome& check : checks) {
        passed = passed && check.witnesses.empty();
    }

    if (opts.format == "json") {
        json doc;
        doc["checks"] = json::array();
        for (const CheckOutcome& check : checks) {
            json entry;
            entry["name"] = check.name;
            entry["instances"] = check.instances;
            entry["failures"] = check.witnesses.size();
            entry["witnesses"] = check.witnesses;
            doc["checks"].push_back(entry);
        }
        doc["passed"] = passed;
        emit(opts, dump_json(doc));
        return passed ? 0 : 1;
    }
    std::ostringstream out;
    if (opts.format == "csv") {
        out << "check,instances,failures\n";
        for (const CheckOutcome& check : checks) {
            out << check.name << ',' << check.instances << ',' << check.witnesses.size() << "\n";
        }
    } else {
        for (const CheckOutcome& check : checks) {
            out << "check " << check.name << ": " << check.instances << " instances, "
                << check.witnesses.size() << " failures\n";
            for (const std::string& witness : check.witnesses) {
                out << "  FAIL " << witness << "\n";
            }
        }
        out << "verify: " << (passed ? "PASS" : "FAIL") << "\n";
    }
    emit(opts, out.str());
    return passed ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"optimal cache placement and coded delivery toolkit"};
    app.require_subcommand(1);

    int exit_code = 0;

    // place
    InstanceOpts place_inst;
    CommonOpts place_opts;
    auto* place = app.add_subcommand("place", "optimal placement for one instance");
    place->add_option("--K", place_inst.num_users, "number of users")->required();
    place->add_option("--N", place_inst.num_files, "number of files")->required();
    place->add_option("--M", place_inst.cache_size, "cache size in file units (rational)")
        ->required();
    add_common(place, place_opts);
    place->callback([&] { exit_code = run_place(place_inst, place_opts); });

    // rate
    InstanceOpts rate_inst;
    CommonOpts rate_opts;
    auto* rate = app.add_subcommand("rate", "delivery rates under the optimal placement");
    rate->add_option("--K", rate_inst.num_users, "number of users")->required();
    rate->add_option("--N", rate_inst.num_files, "number of files")->required();
    rate->add_option("--M", rate_inst.cache_size, "cache size in file units (rational)")
        ->required();
    add_common(rate, rate_opts);
    rate->callback([&] { exit_code = run_rate(rate_inst, rate_opts); });

    // table
    long long table_users = 0;
    long long table_files = 0;
    CommonOpts table_opts;
    auto* table = app.add_subcommand("table", "placement grid for integer M = 0..N");
    table->add_option("--K", table_users, "number of users")->required();
    table->add_option("--N", table_files, "number of files")->required();
    add_common(table, table_opts);
    table->callback([&] { exit_code = run_table(table_users, table_files, table_opts); });

    // sweep
    std::string sweep_k;
    long long sweep_files = 0;
    std::string sweep_m;
    CommonOpts sweep_opts;
    auto* sweep = app.add_subcommand("sweep", "expected rate versus the number of users");
    sweep->add_option("--K", sweep_k, "user range, e.g. 1:40")->required();
    sweep->add_option("--N", sweep_files, "number of files")->required();
    sweep->add_option("--M", sweep_m, "cache size in file units (rational)")->required();
    add_common(sweep, sweep_opts);
    sweep->callback([&] { exit_code = run_sweep(sweep_k, sweep_files, sweep_m, sweep_opts); });

    // simulate
    InstanceOpts sim_inst;
    std::string sim_demand;
    std::uint64_t sim_seed = 1;
    std::uint64_t sim_mult = 1;
    CommonOpts sim_opts;
    auto* simulate = app.add_subcommand("simulate", "run the coded delivery simulator");
    simulate->add_option("--K", sim_inst.num_users, "number of users")->required();
    simulate->add_option("--N", sim_inst.num_files, "number of files")->required();
    simulate->add_option("--M", sim_inst.cache_size, "cache size in file units (rational)")
        ->required();
    simulate->add_option("--demand", sim_demand, "demand vector, e.g. 1,1,2")->required();
    simulate->add_option("--seed", sim_seed, "seed for synthetic file contents");
    simulate->add_option("--file-size-mult", sim_mult, "multiply the minimal file size")
        ->check(CLI::PositiveNumber);
    add_common(simulate, sim_opts);
    simulate->callback(
        [&] { exit_code = run_simulate(sim_inst, sim_demand, sim_seed, sim_mult, sim_opts); });

    // verify
    std::vector<std::string> grid_tokens;
    std::uint64_t verify_cap = kDefaultEnumerationCap;
    std::uint64_t verify_seed = 1;
    bool inject_fault = false;
    CommonOpts verify_opts;
    auto* verify = app.add_subcommand("verify", "cross-oracle verification suite");
    verify->add_option("--grid", grid_tokens,
                       "grid spec tokens, e.g. K=7 N=10 M=0..10:1 (M step defaults to 1/4)");
    verify->add_option("--cap", verify_cap, "demand enumeration cap");
    verify->add_option("--seed", verify_seed, "seed for delivery simulations");
    verify->add_flag("--inject-fault", inject_fault,
                     "perturb each optimal placement and require the feasibility check to flag it");
    add_common(verify, verify_opts);
    verify->callback([&] {
        VerifyGrid grid;
        for (const std::string& token : grid_tokens) {
            apply_grid_token(grid, token);
        }
        exit_code = run_verify(grid, verify_cap, verify_seed, inject_fault, verify_opts);
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return exit_code;
}
