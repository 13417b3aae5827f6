#pragma once

#include <bit>
#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "mccs/bitvector.hpp"
#include "mccs/combinatorics.hpp"
#include "mccs/gf2.hpp"
#include "mccs/placement.hpp"
#include "mccs/rational.hpp"

namespace mccs {

/// User subset as a bitmask: bit k set means user k+1 belongs to the subset.
using UserSubset = std::uint64_t;

inline int subset_size(UserSubset subset) { return std::popcount(subset); }

inline bool subset_contains(UserSubset subset, int user) {
    return (subset >> user) & 1u;
}

/// All subsets of {0,...,K-1} with the given size, in ascending bitmask
/// order (Gosper's next-combination step).
inline std::vector<UserSubset> subsets_of_size(int num_users, int size) {
    if (size < 0 || size > num_users) {
        return {};
    }
    if (size == 0) {
        return {0};
    }
    std::vector<UserSubset> out;
    const UserSubset limit = UserSubset{1} << num_users;
    UserSubset current = (UserSubset{1} << size) - 1;
    while (current < limit) {
        out.push_back(current);
        const UserSubset low = current & (~current + 1);
        const UserSubset ripple = current + low;
        current = ripple | (((current ^ ripple) >> 2) / low);
    }
    return out;
}

/// "{1,3}" style rendering with 1-based user indices.
inline std::string format_subset(UserSubset subset) {
    std::string out = "{";
    bool first = true;
    for (int k = 0; subset >> k; ++k) {
        if (!subset_contains(subset, k)) continue;
        if (!first) out += ',';
        out += std::to_string(k + 1);
        first = false;
    }
    out += '}';
    return out;
}

struct SubfileId {
    int file = 0;  // 1-based file index
    UserSubset subset = 0;
    auto operator<=>(const SubfileId&) const = default;
};

enum class FileContent { random, zeros, ones };

/// Synthetic library of N files of F bits each, partitioned into subfiles
/// per the placement vector: the subfile for subset S holds a_{|S|}*F bits,
/// and the concatenation of a file's subfiles in canonical order (levels
/// ascending, masks ascending within a level) reproduces the file.
struct SubfileStore {
    long long num_files = 0;
    long long num_users = 0;
    std::uint64_t file_size_bits = 0;  // F
    std::uint64_t seed = 0;
    std::vector<Rational> placement;
    std::vector<BitVector> originals;          // index n-1
    std::map<SubfileId, BitVector> subfiles;   // only levels with a_l > 0

    std::uint64_t level_bits(int level) const {
        const Rational& frac = placement[static_cast<std::size_t>(level)];
        const BigInt bits = numerator(frac) * file_size_bits / denominator(frac);
        return bits.convert_to<std::uint64_t>();
    }

    BitVector subfile(int file, UserSubset subset) const {
        const auto it = subfiles.find(SubfileId{file, subset});
        if (it != subfiles.end()) {
            return it->second;
        }
        return BitVector(0);
    }

    BitVector reconstruct_file(int file) const {
        BitVector out(0);
        for (int l = 0; l <= num_users; ++l) {
            if (level_bits(l) == 0) continue;
            for (const UserSubset subset : subsets_of_size(static_cast<int>(num_users), l)) {
                out.append(subfile(file, subset));
            }
        }
        return out;
    }
};

struct UserCache {
    int user = 0;  // 0-based
    std::map<SubfileId, BitVector> entries;
    std::uint64_t occupancy_bits = 0;
};

struct DeliverySession {
    SubfileStore store;
    std::vector<UserCache> caches;
};

/// Smallest file size (in bits) that makes every a_l * F an integer:
/// the lcm of the reduced denominators.
inline std::uint64_t choose_file_size(const PlacementVector& placement) {
    BigInt size(1);
    for (const Rational& frac : placement.a) {
        size = boost::multiprecision::lcm(size, denominator(frac));
    }
    if (size > std::numeric_limits<std::uint64_t>::max()) {
        throw std::overflow_error("choose_file_size: file size does not fit in 64 bits");
    }
    return size.convert_to<std::uint64_t>();
}

/// Generates the synthetic library, splits it into subfiles and fills every
/// user cache with the subfiles whose subset contains that user.
inline DeliverySession partition_and_cache(const ProblemInstance& inst,
                                           const PlacementVector& placement,
                                           std::uint64_t file_size_bits, std::uint64_t seed,
                                           FileContent content = FileContent::random) {
    require_feasible(inst, placement);
    const int K = static_cast<int>(inst.num_users);
    if (K > 20) {
        throw std::domain_error("partition_and_cache: simulation limited to K <= 20 users");
    }
    if (file_size_bits == 0) {
        throw std::domain_error("partition_and_cache: file size must be positive");
    }
    for (int l = 0; l <= K; ++l) {
        const Rational& frac = placement.a[static_cast<std::size_t>(l)];
        if (numerator(frac) * file_size_bits % denominator(frac) != 0) {
            throw std::domain_error("partition_and_cache: file size does not clear a_" +
                                    std::to_string(l) + " to an integer bit count");
        }
    }

    DeliverySession session;
    SubfileStore& store = session.store;
    store.num_files = inst.num_files;
    store.num_users = inst.num_users;
    store.file_size_bits = file_size_bits;
    store.seed = seed;
    store.placement = placement.a;

    std::mt19937_64 gen(seed);
    for (long long n = 1; n <= inst.num_files; ++n) {
        switch (content) {
            case FileContent::random:
                store.originals.push_back(BitVector::random(file_size_bits, gen));
                break;
            case FileContent::zeros:
                store.originals.push_back(BitVector::filled(file_size_bits, false));
                break;
            case FileContent::ones:
                store.originals.push_back(BitVector::filled(file_size_bits, true));
                break;
        }
    }

    for (long long n = 1; n <= inst.num_files; ++n) {
        std::uint64_t offset = 0;
        for (int l = 0; l <= K; ++l) {
            const std::uint64_t bits = store.level_bits(l);
            if (bits == 0) continue;
            for (const UserSubset subset : subsets_of_size(K, l)) {
                store.subfiles[SubfileId{static_cast<int>(n), subset}] =
                    store.originals[static_cast<std::size_t>(n - 1)].slice(offset, bits);
                offset += bits;
            }
        }
    }

    session.caches.resize(static_cast<std::size_t>(K));
    for (int k = 0; k < K; ++k) {
        UserCache& cache = session.caches[static_cast<std::size_t>(k)];
        cache.user = k;
        for (const auto& [id, payload] : store.subfiles) {
            if (subset_contains(id.subset, k)) {
                cache.entries.emplace(id, payload);
                cache.occupancy_bits += payload.size();
            }
        }
    }
    return session;
}

/// Leader group: for each distinct requested file, the lowest-indexed user
/// requesting it. Any choice of one requester per distinct file yields the
/// same load; lowest-index is the fixed convention here.
inline UserSubset leader_set(const DemandVector& demand) {
    if (demand.empty()) {
        throw std::domain_error("leader_set: empty demand vector");
    }
    std::map<int, int> first_requester;  // file -> lowest user index
    for (int k = 0; k < static_cast<int>(demand.size()); ++k) {
        first_requester.try_emplace(demand[static_cast<std::size_t>(k)], k);
    }
    UserSubset leaders = 0;
    for (const auto& [file, user] : first_requester) {
        leaders |= UserSubset{1} << user;
    }
    return leaders;
}

/// Subsets of the given size that intersect the leader group, ascending by
/// bitmask. Their count is C(K,size) - C(K-|D|,size).
inline std::vector<UserSubset> non_redundant_subsets(int num_users, UserSubset leaders,
                                                     int size) {
    std::vector<UserSubset> out;
    for (const UserSubset subset : subsets_of_size(num_users, size)) {
        if ((subset & leaders) != 0) {
            out.push_back(subset);
        }
    }
    return out;
}

struct CodedMessage {
    UserSubset subset = 0;
    BitVector payload;
};

struct DeliveryTranscript {
    long long num_files = 0;
    long long num_users = 0;
    std::uint64_t file_size_bits = 0;
    std::uint64_t seed = 0;
    std::vector<Rational> placement;
    DemandVector demand;
    UserSubset leaders = 0;
    std::vector<CodedMessage> messages;
    std::uint64_t total_bits = 0;
};

/// One multicast message per non-redundant subset of each populated level:
/// the XOR over the subset's users of the subfile their request needs from
/// that subset.
inline DeliveryTranscript build_messages(const SubfileStore& store, const DemandVector& demand) {
    const int K = static_cast<int>(store.num_users);
    if (static_cast<int>(demand.size()) != K) {
        throw std::domain_error("build_messages: demand length must equal K");
    }
    for (const int file : demand) {
        if (file < 1 || file > store.num_files) {
            throw std::domain_error("build_messages: demand entry out of range");
        }
    }

    DeliveryTranscript transcript;
    transcript.num_files = store.num_files;
    transcript.num_users = store.num_users;
    transcript.file_size_bits = store.file_size_bits;
    transcript.seed = store.seed;
    transcript.placement = store.placement;
    transcript.demand = demand;
    transcript.leaders = leader_set(demand);

    for (int l = 0; l <= K - 1; ++l) {
        const std::uint64_t bits = store.level_bits(l);
        if (bits == 0) continue;
        for (const UserSubset subset : non_redundant_subsets(K, transcript.leaders, l + 1)) {
            BitVector payload(bits);
            for (int k = 0; k < K; ++k) {
                if (!subset_contains(subset, k)) continue;
                payload ^= store.subfile(demand[static_cast<std::size_t>(k)],
                                         subset & ~(UserSubset{1} << k));
            }
            transcript.total_bits += payload.size();
            transcript.messages.push_back(CodedMessage{subset, std::move(payload)});
        }
    }
    return transcript;
}

/// Delivered load in file units: total transmitted bits / F.
inline Rational delivered_load(const DeliveryTranscript& transcript) {
    return Rational(BigInt(transcript.total_bits), BigInt(transcript.file_size_bits));
}

struct DecodeResult {
    bool ok = false;
    BitVector file_bits;
    std::string failure;
};

/// Reconstructs the user's requested file from its cache plus the coded
/// messages alone. Per subgroup level, the cached subfiles and the level's
/// messages form a GF(2) system over all subfile symbols of that level;
/// every missing subfile of the requested file must lie in its row space.
inline DecodeResult decode_check(const DeliveryTranscript& transcript, const UserCache& cache) {
    const int K = static_cast<int>(transcript.num_users);
    const int N = static_cast<int>(transcript.num_files);
    const int k = cache.user;
    if (k < 0 || k >= K) {
        throw std::domain_error("decode_check: user index out of range");
    }
    const int wanted = transcript.demand[static_cast<std::size_t>(k)];

    const auto level_bits = [&](int l) -> std::uint64_t {
        const Rational& frac = transcript.placement[static_cast<std::size_t>(l)];
        return (numerator(frac) * transcript.file_size_bits / denominator(frac))
            .convert_to<std::uint64_t>();
    };

    DecodeResult result;
    std::map<UserSubset, BitVector> solved;  // per level, reused

    BitVector file_bits(0);
    for (int l = 0; l <= K; ++l) {
        const std::uint64_t bits = level_bits(l);
        if (bits == 0) continue;
        const std::vector<UserSubset> masks = subsets_of_size(K, l);

        solved.clear();
        if (l <= K - 1) {
            std::unordered_map<UserSubset, std::size_t> rank;
            rank.reserve(masks.size());
            for (std::size_t i = 0; i < masks.size(); ++i) {
                rank.emplace(masks[i], i);
            }
            const auto var_index = [&](int file, UserSubset subset) {
                return static_cast<std::size_t>(file - 1) * masks.size() + rank.at(subset);
            };

            Gf2System system(static_cast<std::size_t>(N) * masks.size(), bits);
            for (const auto& [id, payload] : cache.entries) {
                if (subset_size(id.subset) == l) {
                    system.add_known(var_index(id.file, id.subset), payload);
                }
            }
            for (const CodedMessage& message : transcript.messages) {
                if (subset_size(message.subset) != l + 1) continue;
                std::vector<std::size_t> vars;
                for (int j = 0; j < K; ++j) {
                    if (!subset_contains(message.subset, j)) continue;
                    vars.push_back(var_index(transcript.demand[static_cast<std::size_t>(j)],
                                             message.subset & ~(UserSubset{1} << j)));
                }
                system.add_equation(vars, message.payload);
            }
            if (!system.consistent()) {
                result.failure = "inconsistent transcript at level " + std::to_string(l);
                return result;
            }
            for (const UserSubset subset : masks) {
                if (subset_contains(subset, k)) continue;
                auto value = system.solve_unit(var_index(wanted, subset));
                if (!value) {
                    result.failure = "user " + std::to_string(k + 1) +
                                     " cannot recover subfile " + format_subset(subset) +
                                     " of file " + std::to_string(wanted) + " at level " +
                                     std::to_string(l);
                    return result;
                }
                solved.emplace(subset, std::move(*value));
            }
        }

        for (const UserSubset subset : masks) {
            if (subset_contains(subset, k)) {
                file_bits.append(cache.entries.at(SubfileId{wanted, subset}));
            } else {
                file_bits.append(solved.at(subset));
            }
        }
    }
    result.ok = true;
    result.file_bits = std::move(file_bits);
    return result;
}

/// Structured text rendering of a transcript, stable across runs for the
/// same configuration and seed.
inline std::string render_transcript(const DeliveryTranscript& transcript) {
    std::ostringstream out;
    out << "coded-delivery transcript\n";
    out << "users: " << transcript.num_users << "\n";
    out << "files: " << transcript.num_files << "\n";
    out << "file_bits: " << transcript.file_size_bits << "\n";
    out << "seed: " << transcript.seed << "\n";
    out << "placement:";
    for (const Rational& frac : transcript.placement) {
        out << ' ' << to_fraction(frac);
    }
    out << "\n";
    out << "demand:";
    for (std::size_t i = 0; i < transcript.demand.size(); ++i) {
        out << (i == 0 ? ' ' : ',') << transcript.demand[i];
    }
    out << "\n";
    out << "distinct: " << distinct_count(transcript.demand) << "\n";
    out << "leaders: " << format_subset(transcript.leaders) << "\n";
    out << "message_count: " << transcript.messages.size() << "\n";
    for (const CodedMessage& message : transcript.messages) {
        out << "message subset=" << format_subset(message.subset)
            << " bits=" << message.payload.size() << " payload=" << message.payload.to_hex()
            << "\n";
    }
    out << "total_bits: " << transcript.total_bits << "\n";
    out << "load: " << to_fraction(delivered_load(transcript)) << "\n";
    return out.str();
}

}  // namespace mccs
