#pragma once

#include <bit>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

namespace mccs {

/// Packed bit string. Bit i of the stream maps to bit (i % 64) of word
/// (i / 64), LSB first within a word; unused trailing bits are kept zero so
/// default equality is exact.
class BitVector {
public:
    BitVector() = default;
    explicit BitVector(std::size_t num_bits)
        : words_((num_bits + 63) / 64, 0), num_bits_(num_bits) {}

    static BitVector random(std::size_t num_bits, std::mt19937_64& gen) {
        BitVector bits(num_bits);
        for (auto& word : bits.words_) {
            word = gen();
        }
        bits.trim();
        return bits;
    }

    static BitVector filled(std::size_t num_bits, bool value) {
        BitVector bits(num_bits);
        if (value) {
            for (auto& word : bits.words_) {
                word = ~std::uint64_t{0};
            }
            bits.trim();
        }
        return bits;
    }

    std::size_t size() const { return num_bits_; }
    bool empty() const { return num_bits_ == 0; }

    bool test(std::size_t i) const {
        check_index(i);
        return (words_[i / 64] >> (i % 64)) & 1u;
    }

    void set(std::size_t i, bool value = true) {
        check_index(i);
        const std::uint64_t mask = std::uint64_t{1} << (i % 64);
        if (value) {
            words_[i / 64] |= mask;
        } else {
            words_[i / 64] &= ~mask;
        }
    }

    void flip(std::size_t i) {
        check_index(i);
        words_[i / 64] ^= std::uint64_t{1} << (i % 64);
    }

    BitVector& operator^=(const BitVector& other) {
        if (other.num_bits_ != num_bits_) {
            throw std::domain_error("BitVector: xor of mismatched lengths");
        }
        for (std::size_t w = 0; w < words_.size(); ++w) {
            words_[w] ^= other.words_[w];
        }
        return *this;
    }

    friend BitVector operator^(BitVector lhs, const BitVector& rhs) {
        lhs ^= rhs;
        return lhs;
    }

    bool operator==(const BitVector&) const = default;

    bool any() const {
        for (const auto word : words_) {
            if (word != 0) return true;
        }
        return false;
    }

    /// Index of the lowest set bit, or -1 when all bits are zero.
    long long lowest_set() const {
        for (std::size_t w = 0; w < words_.size(); ++w) {
            if (words_[w] != 0) {
                return static_cast<long long>(w * 64 +
                                              static_cast<std::size_t>(std::countr_zero(words_[w])));
            }
        }
        return -1;
    }

    BitVector slice(std::size_t pos, std::size_t len) const {
        if (pos + len > num_bits_) {
            throw std::domain_error("BitVector: slice out of range");
        }
        BitVector out(len);
        for (std::size_t i = 0; i < len; ++i) {
            if (test(pos + i)) out.set(i);
        }
        return out;
    }

    void append(const BitVector& other) {
        const std::size_t offset = num_bits_;
        resize(num_bits_ + other.num_bits_);
        for (std::size_t i = 0; i < other.num_bits_; ++i) {
            if (other.test(i)) set(offset + i);
        }
    }

    /// Hex rendering: bits packed MSB-first into bytes, trailing pad zero.
    std::string to_hex() const {
        static const char* digits = "0123456789abcdef";
        const std::size_t num_bytes = (num_bits_ + 7) / 8;
        std::string out;
        out.reserve(num_bytes * 2);
        for (std::size_t b = 0; b < num_bytes; ++b) {
            unsigned byte = 0;
            for (std::size_t j = 0; j < 8; ++j) {
                const std::size_t i = b * 8 + j;
                byte <<= 1;
                if (i < num_bits_ && test(i)) byte |= 1;
            }
            out += digits[byte >> 4];
            out += digits[byte & 0xF];
        }
        return out;
    }

private:
    void resize(std::size_t num_bits) {
        num_bits_ = num_bits;
        words_.resize((num_bits + 63) / 64, 0);
        trim();
    }

    void trim() {
        const std::size_t extra = words_.size() * 64 - num_bits_;
        if (!words_.empty() && extra > 0) {
            words_.back() &= ~std::uint64_t{0} >> extra;
        }
    }

    void check_index(std::size_t i) const {
        if (i >= num_bits_) {
            throw std::domain_error("BitVector: index out of range");
        }
    }

    std::vector<std::uint64_t> words_;
    std::size_t num_bits_ = 0;
};

}  // namespace mccs
