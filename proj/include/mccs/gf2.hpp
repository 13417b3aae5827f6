#pragma once

#include <cstddef>
#include <optional>
#include <utility>
#include <vector>

#include "mccs/bitvector.hpp"

namespace mccs {

/// Incremental GF(2) linear system over symbol variables, each carrying a
/// fixed-width bit payload. Rows are absorbed into an online pivot basis;
/// solve_unit answers whether a single variable lies in the row space and,
/// if so, returns its payload.
class Gf2System {
public:
    Gf2System(std::size_t num_vars, std::size_t payload_bits)
        : num_vars_(num_vars),
          payload_bits_(payload_bits),
          pivot_row_(num_vars, SIZE_MAX) {}

    void add_known(std::size_t var, const BitVector& value) {
        BitVector coeffs(num_vars_);
        coeffs.set(var);
        absorb(std::move(coeffs), value);
    }

    void add_equation(const std::vector<std::size_t>& vars, const BitVector& value) {
        BitVector coeffs(num_vars_);
        for (const std::size_t var : vars) {
            coeffs.flip(var);
        }
        absorb(std::move(coeffs), value);
    }

    bool consistent() const { return consistent_; }

    /// Payload of variable `var` if the unit vector e_var lies in the row
    /// space; nullopt otherwise.
    std::optional<BitVector> solve_unit(std::size_t var) const {
        BitVector residual(num_vars_);
        residual.set(var);
        BitVector value(payload_bits_);
        while (residual.any()) {
            const auto pivot = static_cast<std::size_t>(residual.lowest_set());
            const std::size_t row = pivot_row_[pivot];
            if (row == SIZE_MAX) {
                return std::nullopt;
            }
            residual ^= rows_[row].first;
            value ^= rows_[row].second;
        }
        return value;
    }

private:
    void absorb(BitVector coeffs, BitVector value) {
        while (coeffs.any()) {
            const auto pivot = static_cast<std::size_t>(coeffs.lowest_set());
            const std::size_t row = pivot_row_[pivot];
            if (row == SIZE_MAX) {
                pivot_row_[pivot] = rows_.size();
                rows_.emplace_back(std::move(coeffs), std::move(value));
                return;
            }
            coeffs ^= rows_[row].first;
            value ^= rows_[row].second;
        }
        if (value.any()) {
            consistent_ = false;  // 0 = nonzero: contradictory inputs
        }
    }

    std::size_t num_vars_;
    std::size_t payload_bits_;
    std::vector<std::pair<BitVector, BitVector>> rows_;  // (coefficients, payload)
    std::vector<std::size_t> pivot_row_;                 // variable -> row index
    bool consistent_ = true;
};

}  // namespace mccs
