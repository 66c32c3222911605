#include "pbrlab/simplex.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

#include "pbrlab/errors.hpp"

namespace pbrlab {

LinearProgram::LinearProgram(std::size_t num_vars)
    : objective(num_vars, 0.0), lower(num_vars, 0.0), upper(num_vars, kInfinity) {}

void LinearProgram::add_constraint(std::vector<double> coeffs, Relation relation, double rhs) {
    constraints.push_back(Constraint{std::move(coeffs), relation, rhs});
}

void LinearProgram::validate() const {
    const std::size_t n = num_vars();
    if (lower.size() != n || upper.size() != n) throw DimensionMismatch("LP bound vectors must match num_vars");
    for (double c : objective) {
        if (!std::isfinite(c)) throw InvalidArgument("LP objective has a non-finite coefficient");
    }
    for (std::size_t r = 0; r < constraints.size(); ++r) {
        const auto& row = constraints[r];
        if (row.coeffs.size() != n) {
            throw DimensionMismatch("LP constraint " + std::to_string(r) + " has " +
                                    std::to_string(row.coeffs.size()) + " coefficients, expected " +
                                    std::to_string(n));
        }
        if (!std::isfinite(row.rhs)) throw InvalidArgument("LP constraint has a non-finite bound");
        for (double a : row.coeffs) {
            if (!std::isfinite(a)) throw InvalidArgument("LP constraint has a non-finite coefficient");
        }
    }
    for (std::size_t j = 0; j < n; ++j) {
        if (!std::isfinite(lower[j])) throw InvalidArgument("LP lower bounds must be finite");
        if (std::isnan(upper[j]) || upper[j] == -kInfinity) throw InvalidArgument("LP upper bound is invalid");
    }
}

const char* to_string(LpStatus status) {
    switch (status) {
        case LpStatus::kOptimal: return "OPTIMAL";
        case LpStatus::kInfeasible: return "INFEASIBLE";
        case LpStatus::kUnbounded: return "UNBOUNDED";
    }
    return "UNKNOWN";
}

std::size_t standardized_row_count(const LinearProgram& lp) {
    std::size_t n_ub = 0;
    for (double u : lp.upper) n_ub += std::isfinite(u) ? 1 : 0;
    return lp.constraints.size() + n_ub;
}

namespace {

struct StdRow {
    std::vector<double> coeffs;  // over shifted variables
    Relation relation;
    double rhs;
};

std::vector<StdRow> standardize(const LinearProgram& lp) {
    const std::size_t n = lp.num_vars();
    std::vector<StdRow> rows;
    rows.reserve(standardized_row_count(lp));
    for (const auto& c : lp.constraints) {
        double shift = 0.0;
        for (std::size_t j = 0; j < n; ++j) shift += c.coeffs[j] * lp.lower[j];
        rows.push_back(StdRow{c.coeffs, c.relation, c.rhs - shift});
    }
    for (std::size_t j = 0; j < n; ++j) {
        if (!std::isfinite(lp.upper[j])) continue;
        std::vector<double> e(n, 0.0);
        e[j] = 1.0;
        rows.push_back(StdRow{std::move(e), Relation::kLessEqual, lp.upper[j] - lp.lower[j]});
    }
    return rows;
}

Relation flipped(Relation r) {
    switch (r) {
        case Relation::kLessEqual: return Relation::kGreaterEqual;
        case Relation::kGreaterEqual: return Relation::kLessEqual;
        case Relation::kEqual: return Relation::kEqual;
    }
    return r;
}

class Tableau {
public:
    Tableau(std::size_t rows, std::size_t cols) : m_(rows), n_(cols), cells_(rows * (cols + 1), 0.0), basis_(rows), d_(cols, 0.0) {}

    double& at(std::size_t i, std::size_t j) { return cells_[i * (n_ + 1) + j]; }
    double at(std::size_t i, std::size_t j) const { return cells_[i * (n_ + 1) + j]; }
    double& rhs(std::size_t i) { return at(i, n_); }
    double rhs(std::size_t i) const { return at(i, n_); }

    std::size_t rows() const { return m_; }
    std::size_t cols() const { return n_; }
    std::vector<std::size_t>& basis() { return basis_; }
    std::vector<double>& reduced() { return d_; }

    void load_costs(const std::vector<double>& cost) {
        for (std::size_t j = 0; j < n_; ++j) {
            double z = 0.0;
            for (std::size_t i = 0; i < m_; ++i) z += cost[basis_[i]] * at(i, j);
            d_[j] = cost[j] - z;
        }
    }

    void pivot(std::size_t r, std::size_t c) {
        const double p = at(r, c);
        for (std::size_t j = 0; j <= n_; ++j) at(r, j) /= p;
        at(r, c) = 1.0;
        for (std::size_t i = 0; i < m_; ++i) {
            if (i == r) continue;
            const double f = at(i, c);
            if (f == 0.0) continue;
            for (std::size_t j = 0; j <= n_; ++j) at(i, j) -= f * at(r, j);
            at(i, c) = 0.0;
        }
        const double f = d_[c];
        if (f != 0.0) {
            for (std::size_t j = 0; j < n_; ++j) d_[j] -= f * at(r, j);
            d_[c] = 0.0;
        }
        basis_[r] = c;
    }

private:
    std::size_t m_;
    std::size_t n_;
    std::vector<double> cells_;
    std::vector<std::size_t> basis_;
    std::vector<double> d_;
};

enum class PhaseResult { kOptimal, kUnbounded };

// Maximizes the currently loaded costs. Bland: lowest-index improving column
// enters; among tied ratios the lowest-index basic variable leaves.
PhaseResult run_phase(Tableau& t, const std::vector<bool>& allowed, const SimplexOptions& opt, std::size_t& pivots) {
    for (;;) {
        std::size_t enter = t.cols();
        for (std::size_t j = 0; j < t.cols(); ++j) {
            if (allowed[j] && t.reduced()[j] > opt.pivot_tol) {
                enter = j;
                break;
            }
        }
        if (enter == t.cols()) return PhaseResult::kOptimal;

        std::size_t leave = t.rows();
        double best = 0.0;
        for (std::size_t i = 0; i < t.rows(); ++i) {
            const double a = t.at(i, enter);
            if (a <= opt.pivot_tol) continue;
            const double ratio = std::max(t.rhs(i), 0.0) / a;
            if (leave == t.rows() || ratio < best - 1e-12) {
                best = ratio;
                leave = i;
            } else if (ratio <= best + 1e-12 && t.basis()[i] < t.basis()[leave]) {
                leave = i;
            }
        }
        if (leave == t.rows()) return PhaseResult::kUnbounded;
        t.pivot(leave, enter);
        if (++pivots > opt.max_pivots) throw InvariantViolation("simplex pivot limit exceeded");
    }
}

}  // namespace

LpSolution simplex_solve(const LinearProgram& lp, const SimplexOptions& opt) {
    lp.validate();
    const std::size_t n = lp.num_vars();
    const auto rows = standardize(lp);
    const std::size_t m = rows.size();

    // Sign-normalize so every right-hand side is non-negative.
    std::vector<double> sign(m, 1.0);
    std::vector<Relation> rel(m);
    for (std::size_t r = 0; r < m; ++r) {
        rel[r] = rows[r].relation;
        if (rows[r].rhs < 0.0) {
            sign[r] = -1.0;
            rel[r] = flipped(rel[r]);
        }
    }

    // Column layout: structural | one slack/surplus per inequality | artificials.
    std::vector<std::size_t> aux_col(m, SIZE_MAX);
    std::vector<std::size_t> identity_col(m);
    std::size_t next = n;
    for (std::size_t r = 0; r < m; ++r) {
        if (rel[r] != Relation::kEqual) aux_col[r] = next++;
    }
    const std::size_t first_artificial = next;
    std::vector<bool> is_artificial;
    for (std::size_t r = 0; r < m; ++r) {
        if (rel[r] == Relation::kLessEqual) {
            identity_col[r] = aux_col[r];
        } else {
            identity_col[r] = next++;
        }
    }
    const std::size_t ncols = next;
    is_artificial.assign(ncols, false);
    for (std::size_t j = first_artificial; j < ncols; ++j) is_artificial[j] = true;

    Tableau t(m, ncols);
    for (std::size_t r = 0; r < m; ++r) {
        for (std::size_t j = 0; j < n; ++j) t.at(r, j) = sign[r] * rows[r].coeffs[j];
        if (rel[r] == Relation::kLessEqual) t.at(r, aux_col[r]) = 1.0;
        if (rel[r] == Relation::kGreaterEqual) t.at(r, aux_col[r]) = -1.0;
        t.at(r, identity_col[r]) = 1.0;
        t.rhs(r) = sign[r] * rows[r].rhs;
        t.basis()[r] = identity_col[r];
    }

    LpSolution sol;

    // Phase 1: maximize -(sum of artificials).
    std::vector<double> cost1(ncols, 0.0);
    for (std::size_t j = first_artificial; j < ncols; ++j) cost1[j] = -1.0;
    t.load_costs(cost1);
    std::vector<bool> allowed(ncols, true);
    run_phase(t, allowed, opt, sol.pivots);

    double infeasibility = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        if (is_artificial[t.basis()[i]]) infeasibility += std::max(t.rhs(i), 0.0);
    }
    if (infeasibility > opt.feasibility_tol) {
        // y_r = sign_r * pi_r with pi_r = c_e - d_e for the identity column of row r.
        sol.status = LpStatus::kInfeasible;
        sol.certificate.resize(m);
        for (std::size_t r = 0; r < m; ++r) {
            const std::size_t e = identity_col[r];
            sol.certificate[r] = sign[r] * (cost1[e] - t.reduced()[e]);
        }
        return sol;
    }

    // Drive zero-level artificials out of the basis where possible.
    for (std::size_t i = 0; i < m; ++i) {
        if (!is_artificial[t.basis()[i]]) continue;
        std::size_t best = ncols;
        double mag = opt.pivot_tol;
        for (std::size_t j = 0; j < first_artificial; ++j) {
            if (std::abs(t.at(i, j)) > mag) {
                mag = std::abs(t.at(i, j));
                best = j;
            }
        }
        if (best != ncols) {
            t.rhs(i) = 0.0;
            t.pivot(i, best);
            ++sol.pivots;
        }
    }

    // Phase 2.
    std::vector<double> cost2(ncols, 0.0);
    for (std::size_t j = 0; j < n; ++j) cost2[j] = lp.objective[j];
    t.load_costs(cost2);
    for (std::size_t j = first_artificial; j < ncols; ++j) allowed[j] = false;
    if (run_phase(t, allowed, opt, sol.pivots) == PhaseResult::kUnbounded) {
        sol.status = LpStatus::kUnbounded;
        return sol;
    }

    sol.status = LpStatus::kOptimal;
    std::vector<double> shifted(ncols, 0.0);
    for (std::size_t i = 0; i < m; ++i) shifted[t.basis()[i]] = std::max(t.rhs(i), 0.0);
    sol.values.resize(n);
    sol.objective_value = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
        sol.values[j] = lp.lower[j] + shifted[j];
        sol.objective_value += lp.objective[j] * sol.values[j];
    }
    sol.duals.resize(m);
    for (std::size_t r = 0; r < m; ++r) sol.duals[r] = sign[r] * (-t.reduced()[identity_col[r]]);
    return sol;
}

bool verify_farkas(const LinearProgram& lp, std::span<const double> y, double tol) {
    const auto rows = standardize(lp);
    if (y.size() != rows.size()) return false;
    const std::size_t n = lp.num_vars();
    std::vector<double> ya(n, 0.0);
    double yb = 0.0;
    for (std::size_t r = 0; r < rows.size(); ++r) {
        if (rows[r].relation == Relation::kLessEqual && y[r] < -tol) return false;
        if (rows[r].relation == Relation::kGreaterEqual && y[r] > tol) return false;
        for (std::size_t j = 0; j < n; ++j) ya[j] += y[r] * rows[r].coeffs[j];
        yb += y[r] * rows[r].rhs;
    }
    for (double v : ya) {
        if (v < -tol) return false;
    }
    return yb < -tol;
}

namespace {

const char* relation_token(Relation r) {
    switch (r) {
        case Relation::kLessEqual: return "<=";
        case Relation::kEqual: return "=";
        case Relation::kGreaterEqual: return ">=";
    }
    return "?";
}

void write_number(std::ostream& out, double v) {
    if (std::isinf(v)) {
        out << (v > 0 ? "inf" : "-inf");
        return;
    }
    std::ostringstream s;
    s.precision(17);
    s << v;
    out << s.str();
}

double parse_number(const std::string& tok) {
    if (tok == "inf" || tok == "+inf") return kInfinity;
    if (tok == "-inf") return -kInfinity;
    std::size_t used = 0;
    const double v = std::stod(tok, &used);
    if (used != tok.size()) throw InvalidArgument("bad number '" + tok + "' in LP text");
    return v;
}

}  // namespace

void write_lp_text(const LinearProgram& lp, std::ostream& out) {
    lp.validate();
    out << "pbrlab-lp 1\n";
    out << "vars " << lp.num_vars() << "\n";
    out << "maximize";
    for (double c : lp.objective) {
        out << ' ';
        write_number(out, c);
    }
    out << "\n";
    for (const auto& row : lp.constraints) {
        out << "row";
        for (double a : row.coeffs) {
            out << ' ';
            write_number(out, a);
        }
        out << ' ' << relation_token(row.relation) << ' ';
        write_number(out, row.rhs);
        out << "\n";
    }
    for (std::size_t j = 0; j < lp.num_vars(); ++j) {
        out << "bound " << j << ' ';
        write_number(out, lp.lower[j]);
        out << ' ';
        write_number(out, lp.upper[j]);
        out << "\n";
    }
}

LinearProgram read_lp_text(std::istream& in) {
    std::string line;
    if (!std::getline(in, line) || line.rfind("pbrlab-lp 1", 0) != 0) {
        throw InvalidArgument("LP text must start with 'pbrlab-lp 1'");
    }
    LinearProgram lp;
    bool have_vars = false;
    while (std::getline(in, line)) {
        std::istringstream ls(line);
        std::string kind;
        if (!(ls >> kind) || kind[0] == '#') continue;
        std::vector<std::string> toks;
        for (std::string tok; ls >> tok;) toks.push_back(tok);
        if (kind == "vars") {
            if (toks.size() != 1) throw InvalidArgument("malformed 'vars' line");
            lp = LinearProgram(static_cast<std::size_t>(std::stoul(toks[0])));
            have_vars = true;
            continue;
        }
        if (!have_vars) throw InvalidArgument("'vars' must precede other LP lines");
        const std::size_t n = lp.num_vars();
        if (kind == "maximize") {
            if (toks.size() != n) throw InvalidArgument("objective length mismatch");
            for (std::size_t j = 0; j < n; ++j) lp.objective[j] = parse_number(toks[j]);
        } else if (kind == "row") {
            if (toks.size() != n + 2) throw InvalidArgument("row length mismatch");
            std::vector<double> a(n);
            for (std::size_t j = 0; j < n; ++j) a[j] = parse_number(toks[j]);
            Relation r;
            if (toks[n] == "<=") r = Relation::kLessEqual;
            else if (toks[n] == "=") r = Relation::kEqual;
            else if (toks[n] == ">=") r = Relation::kGreaterEqual;
            else throw InvalidArgument("unknown relation '" + toks[n] + "'");
            lp.add_constraint(std::move(a), r, parse_number(toks[n + 1]));
        } else if (kind == "bound") {
            if (toks.size() != 3) throw InvalidArgument("malformed 'bound' line");
            const auto j = static_cast<std::size_t>(std::stoul(toks[0]));
            if (j >= n) throw InvalidArgument("bound index out of range");
            lp.lower[j] = parse_number(toks[1]);
            lp.upper[j] = parse_number(toks[2]);
        } else {
            throw InvalidArgument("unknown LP line kind '" + kind + "'");
        }
    }
    lp.validate();
    return lp;
}

}  // namespace pbrlab
