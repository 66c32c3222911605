#pragma once

// Dense two-phase primal simplex with Bland's anti-cycling rule.
//
// Problems are stated as
//
//     maximize    c^T x
//     subject to  a_r^T x  (<= | = | >=)  b_r     for each constraint r
//                 lo_j <= x_j <= hi_j              (lo_j finite, hi_j may be +inf)
//
// Internally x is shifted to x' = x - lo >= 0 and every finite upper bound
// becomes an extra "<=" row appended after the user constraints. Dual values
// and Farkas certificates are reported against that standardized row list:
// entry r < constraints.size() belongs to constraint r, and the remaining
// entries belong to the finite upper bounds in increasing variable order.
//
// Farkas convention: an INFEASIBLE verdict carries y with
//     y_r >= 0 on "<=" rows, y_r <= 0 on ">=" rows, y_r free on "=" rows,
//     y^T A' >= 0 componentwise, and y^T b' < 0,
// where A' and b' are the standardized (shifted) rows. Any x' >= 0 satisfying
// the rows would give 0 <= y^T A' x' <= y^T b' < 0, so no feasible point exists.

#include <cstddef>
#include <iosfwd>
#include <limits>
#include <span>
#include <vector>

namespace pbrlab {

enum class Relation { kLessEqual, kEqual, kGreaterEqual };

struct Constraint {
    std::vector<double> coeffs;
    Relation relation = Relation::kLessEqual;
    double rhs = 0.0;
};

struct LinearProgram {
    explicit LinearProgram(std::size_t num_vars = 0);

    std::size_t num_vars() const noexcept { return objective.size(); }
    void add_constraint(std::vector<double> coeffs, Relation relation, double rhs);
    /// Throws DimensionMismatch / InvalidArgument.
    void validate() const;

    std::vector<double> objective;
    std::vector<Constraint> constraints;
    std::vector<double> lower;
    std::vector<double> upper;
};

enum class LpStatus { kOptimal, kInfeasible, kUnbounded };

const char* to_string(LpStatus status);

struct LpSolution {
    LpStatus status = LpStatus::kInfeasible;
    std::vector<double> values;
    double objective_value = 0.0;
    /// Row multipliers at an optimum (standardized row order).
    std::vector<double> duals;
    /// Farkas vector when INFEASIBLE (standardized row order).
    std::vector<double> certificate;
    std::size_t pivots = 0;
};

struct SimplexOptions {
    double pivot_tol = 1e-10;
    double feasibility_tol = 1e-9;
    std::size_t max_pivots = 200000;
};

LpSolution simplex_solve(const LinearProgram& lp, const SimplexOptions& options = {});

/// Number of standardized rows (constraints plus finite upper bounds).
std::size_t standardized_row_count(const LinearProgram& lp);

/// Checks the Farkas conditions above with tolerance `tol` on y^T A' and the
/// sign pattern, and y^T b' < -tol.
bool verify_farkas(const LinearProgram& lp, std::span<const double> certificate, double tol = 1e-9);

/// Plain-text dump for cross-checking with external solvers:
///
///     pbrlab-lp 1
///     vars <n>
///     maximize <c_0> ... <c_{n-1}>
///     row <a_0> ... <a_{n-1}> <=|=|>= <b>
///     bound <j> <lo> <hi|inf>
void write_lp_text(const LinearProgram& lp, std::ostream& out);
LinearProgram read_lp_text(std::istream& in);

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

}  // namespace pbrlab
