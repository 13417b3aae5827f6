#pragma once

#include <cstddef>
#include <stdexcept>
#include <vector>

#include "mccs/placement.hpp"
#include "mccs/rational.hpp"

namespace mccs {

/// The placement problem in reduced form: minimize g.a subject to
/// b.a = 1, c.a <= mu and 0 <= a_l <= 1. All data exact.
struct LinearProgram {
    std::vector<Rational> objective;       // g
    std::vector<Rational> equality_row;    // b
    Rational equality_rhs;                 // 1
    std::vector<Rational> inequality_row;  // c
    Rational inequality_rhs;               // mu
};

enum class LpStatus { optimal, infeasible, unbounded };

struct LpSolution {
    LpStatus status = LpStatus::infeasible;
    std::vector<Rational> optimal_point;  // the a variables only
    Rational optimal_value;
    long long pivot_count = 0;
};

/// Builds the reduced placement program for an instance:
///   g_l = C(K,l+1) - sum_n P_u(n) C(K-n,l+1)
///   b_l = C(K,l)
///   c_l = C(K-1,l-1), with c_0 = 0.
inline LinearProgram build_p2(const ProblemInstance& inst) {
    const long long K = inst.num_users;
    LinearProgram lp;
    lp.equality_rhs = 1;
    lp.inequality_rhs = inst.mu();
    lp.objective.resize(static_cast<std::size_t>(K) + 1);
    lp.equality_row.resize(static_cast<std::size_t>(K) + 1);
    lp.inequality_row.resize(static_cast<std::size_t>(K) + 1);
    for (long long l = 0; l <= K; ++l) {
        Rational g(binom(K, l + 1));
        for (long long n = 1; n <= inst.max_distinct(); ++n) {
            g -= prob_distinct(inst.num_files, inst.num_users, n) *
                 Rational(binom(K - n, l + 1));
        }
        lp.objective[static_cast<std::size_t>(l)] = g;
        lp.equality_row[static_cast<std::size_t>(l)] = Rational(binom(K, l));
        lp.inequality_row[static_cast<std::size_t>(l)] = Rational(binom(K - 1, l - 1));
    }
    return lp;
}

namespace detail {

// Dense exact-arithmetic simplex over rows of equality constraints in
// standard form (x >= 0, rhs >= 0). Bland's smallest-index rule for both
// entering and leaving variables: deterministic and cycle-free.
class SimplexTableau {
public:
    SimplexTableau(std::vector<std::vector<Rational>> rows, std::vector<Rational> rhs)
        : rows_(std::move(rows)), rhs_(std::move(rhs)) {
        num_cols_ = rows_.empty() ? 0 : rows_[0].size();
        for (std::size_t i = 0; i < rows_.size(); ++i) {
            if (rhs_[i] < 0) {
                for (auto& entry : rows_[i]) {
                    entry = -entry;
                }
                rhs_[i] = -rhs_[i];
            }
        }
    }

    std::size_t num_rows() const { return rows_.size(); }
    std::size_t num_cols() const { return num_cols_; }
    long long pivots() const { return pivots_; }
    const std::vector<std::size_t>& basis() const { return basis_; }

    // Appends one artificial column per row that has no natural unit column,
    // and seeds the starting basis.
    void seed_basis() {
        basis_.assign(rows_.size(), SIZE_MAX);
        std::vector<char> row_seeded(rows_.size(), 0);
        for (std::size_t j = 0; j < num_cols_; ++j) {
            std::size_t unit_row = SIZE_MAX;
            bool is_unit = true;
            for (std::size_t i = 0; i < rows_.size(); ++i) {
                if (rows_[i][j] == 0) continue;
                if (rows_[i][j] == 1 && unit_row == SIZE_MAX) {
                    unit_row = i;
                } else {
                    is_unit = false;
                    break;
                }
            }
            if (is_unit && unit_row != SIZE_MAX && !row_seeded[unit_row]) {
                basis_[unit_row] = j;
                row_seeded[unit_row] = 1;
            }
        }
        first_artificial_ = num_cols_;
        for (std::size_t i = 0; i < rows_.size(); ++i) {
            if (row_seeded[i]) continue;
            for (std::size_t r = 0; r < rows_.size(); ++r) {
                rows_[r].push_back(Rational(r == i ? 1 : 0));
            }
            basis_[i] = num_cols_;
            ++num_cols_;
        }
    }

    std::size_t first_artificial() const { return first_artificial_; }

    // Minimizes `costs` (length num_cols, zero-extended) over columns below
    // `banned_from`. Returns false on unboundedness.
    bool minimize(const std::vector<Rational>& costs, std::size_t banned_from) {
        canonicalize_cost(costs);
        while (true) {
            std::size_t entering = SIZE_MAX;
            for (std::size_t j = 0; j < banned_from; ++j) {
                if (cost_[j] < 0) {
                    entering = j;
                    break;
                }
            }
            if (entering == SIZE_MAX) {
                return true;
            }
            std::size_t leaving = SIZE_MAX;
            Rational best_ratio;
            for (std::size_t i = 0; i < rows_.size(); ++i) {
                if (rows_[i][entering] <= 0) continue;
                const Rational ratio = rhs_[i] / rows_[i][entering];
                if (leaving == SIZE_MAX || ratio < best_ratio ||
                    (ratio == best_ratio && basis_[i] < basis_[leaving])) {
                    leaving = i;
                    best_ratio = ratio;
                }
            }
            if (leaving == SIZE_MAX) {
                return false;
            }
            pivot(leaving, entering);
        }
    }

    Rational current_objective() const { return -cost_rhs_; }

    // After phase one: pivot basic artificials out; drops rows that turned
    // out redundant.
    void remove_artificials() {
        for (std::size_t i = 0; i < rows_.size();) {
            if (basis_[i] < first_artificial_) {
                ++i;
                continue;
            }
            std::size_t col = SIZE_MAX;
            for (std::size_t j = 0; j < first_artificial_; ++j) {
                if (rows_[i][j] != 0) {
                    col = j;
                    break;
                }
            }
            if (col != SIZE_MAX) {
                pivot(i, col);
                ++i;
            } else {
                if (rhs_[i] != 0) {
                    throw std::logic_error("simplex: inconsistent row after feasible phase one");
                }
                rows_.erase(rows_.begin() + static_cast<std::ptrdiff_t>(i));
                rhs_.erase(rhs_.begin() + static_cast<std::ptrdiff_t>(i));
                basis_.erase(basis_.begin() + static_cast<std::ptrdiff_t>(i));
            }
        }
    }

    std::vector<Rational> extract_point(std::size_t num_vars) const {
        std::vector<Rational> point(num_vars, Rational(0));
        for (std::size_t i = 0; i < rows_.size(); ++i) {
            if (basis_[i] < num_vars) {
                point[basis_[i]] = rhs_[i];
            }
        }
        return point;
    }

private:
    void canonicalize_cost(const std::vector<Rational>& costs) {
        cost_.assign(num_cols_, Rational(0));
        cost_rhs_ = 0;
        for (std::size_t j = 0; j < costs.size() && j < num_cols_; ++j) {
            cost_[j] = costs[j];
        }
        for (std::size_t i = 0; i < rows_.size(); ++i) {
            const Rational factor = cost_[basis_[i]];
            if (factor == 0) continue;
            for (std::size_t j = 0; j < num_cols_; ++j) {
                cost_[j] -= factor * rows_[i][j];
            }
            cost_rhs_ -= factor * rhs_[i];
        }
    }

    void pivot(std::size_t row, std::size_t col) {
        const Rational pivot_value = rows_[row][col];
        for (std::size_t j = 0; j < num_cols_; ++j) {
            rows_[row][j] /= pivot_value;
        }
        rhs_[row] /= pivot_value;
        for (std::size_t i = 0; i < rows_.size(); ++i) {
            if (i == row || rows_[i][col] == 0) continue;
            const Rational factor = rows_[i][col];
            for (std::size_t j = 0; j < num_cols_; ++j) {
                rows_[i][j] -= factor * rows_[row][j];
            }
            rhs_[i] -= factor * rhs_[row];
        }
        if (!cost_.empty() && cost_[col] != 0) {
            const Rational factor = cost_[col];
            for (std::size_t j = 0; j < num_cols_; ++j) {
                cost_[j] -= factor * rows_[row][j];
            }
            cost_rhs_ -= factor * rhs_[row];
        }
        basis_[row] = col;
        ++pivots_;
    }

    std::vector<std::vector<Rational>> rows_;
    std::vector<Rational> rhs_;
    std::vector<Rational> cost_;
    Rational cost_rhs_;
    std::vector<std::size_t> basis_;
    std::size_t num_cols_ = 0;
    std::size_t first_artificial_ = 0;
    long long pivots_ = 0;
};

}  // namespace detail

/// Exact two-phase simplex solve. Upper bounds a_l <= 1 become explicit
/// slack rows, the cache inequality gets one slack column. Deterministic
/// for identical input.
inline LpSolution simplex_solve(const LinearProgram& lp) {
    const std::size_t num_vars = lp.objective.size();
    if (lp.equality_row.size() != num_vars || lp.inequality_row.size() != num_vars) {
        throw std::domain_error("simplex_solve: inconsistent row lengths");
    }
    // Columns: [a_0..a_K | cache slack | bound slacks t_0..t_K].
    const std::size_t num_cols = 2 * num_vars + 1;
    const std::size_t num_rows = num_vars + 2;
    std::vector<std::vector<Rational>> rows(num_rows, std::vector<Rational>(num_cols, Rational(0)));
    std::vector<Rational> rhs(num_rows);
    for (std::size_t j = 0; j < num_vars; ++j) {
        rows[0][j] = lp.equality_row[j];
        rows[1][j] = lp.inequality_row[j];
    }
    rhs[0] = lp.equality_rhs;
    rows[1][num_vars] = 1;
    rhs[1] = lp.inequality_rhs;
    for (std::size_t j = 0; j < num_vars; ++j) {
        rows[2 + j][j] = 1;
        rows[2 + j][num_vars + 1 + j] = 1;
        rhs[2 + j] = 1;
    }

    detail::SimplexTableau tableau(std::move(rows), std::move(rhs));
    tableau.seed_basis();

    LpSolution solution;
    // Phase one: minimize the sum of artificials.
    std::vector<Rational> phase1(tableau.num_cols(), Rational(0));
    for (std::size_t j = tableau.first_artificial(); j < tableau.num_cols(); ++j) {
        phase1[j] = 1;
    }
    if (!tableau.minimize(phase1, tableau.num_cols())) {
        throw std::logic_error("simplex: phase one cannot be unbounded");
    }
    if (tableau.current_objective() != 0) {
        solution.status = LpStatus::infeasible;
        solution.pivot_count = tableau.pivots();
        return solution;
    }
    tableau.remove_artificials();

    // Phase two: original objective, artificial columns banned.
    std::vector<Rational> phase2(lp.objective);
    if (!tableau.minimize(phase2, tableau.first_artificial())) {
        solution.status = LpStatus::unbounded;
        solution.pivot_count = tableau.pivots();
        return solution;
    }
    solution.status = LpStatus::optimal;
    solution.optimal_point = tableau.extract_point(num_vars);
    solution.optimal_value = 0;
    for (std::size_t j = 0; j < num_vars; ++j) {
        solution.optimal_value += lp.objective[j] * solution.optimal_point[j];
    }
    solution.pivot_count = tableau.pivots();
    return solution;
}

/// Side-by-side check of the closed-form placement against the LP optimum.
/// Optima may be non-unique, so only the objective values are required to
/// match; the support shape of the LP point is reported separately.
struct TheoremCheck {
    Rational closed_form_value;
    Rational lp_value;
    bool values_equal = false;
    std::vector<int> closed_form_support;
    std::vector<int> lp_support;
    bool lp_support_two_adjacent = false;  // <= 2 nonzeros at adjacent indices
    bool lp_cache_tight = false;           // c.a == mu (expected for mu in (0,1))
    long long pivot_count = 0;
};

inline TheoremCheck verify_theorem(const ProblemInstance& inst) {
    TheoremCheck check;
    const PlacementVector closed_form = optimal_placement(inst);
    check.closed_form_value = expected_rate(inst, closed_form);
    check.closed_form_support = closed_form.support();

    const LinearProgram lp = build_p2(inst);
    const LpSolution solved = simplex_solve(lp);
    if (solved.status != LpStatus::optimal) {
        throw std::logic_error("verify_theorem: placement LP must be solvable");
    }
    check.lp_value = solved.optimal_value;
    check.values_equal = (check.closed_form_value == check.lp_value);
    check.pivot_count = solved.pivot_count;

    PlacementVector lp_point{solved.optimal_point};
    check.lp_support = lp_point.support();
    check.lp_support_two_adjacent =
        check.lp_support.size() <= 1 ||
        (check.lp_support.size() == 2 && check.lp_support[1] == check.lp_support[0] + 1);
    Rational usage(0);
    for (std::size_t j = 0; j < solved.optimal_point.size(); ++j) {
        usage += lp.inequality_row[j] * solved.optimal_point[j];
    }
    check.lp_cache_tight = (usage == inst.mu());
    return check;
}

}  // namespace mccs
