#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "gptc/error.hpp"
#include "gptc/linalg.hpp"
#include "gptc/scalar.hpp"

namespace gptc {

enum class Rel { Eq, Le, Ge };
enum class VarSign { NonNeg, Free };
enum class LpStatus { Optimal, Infeasible, Unbounded, IterLimit };

/// Finitely many linear equalities/inequalities over nonnegative and free
/// variables, with an optional linear objective (maximized).
template <class S>
struct LpProblem {
    struct Row {
        Vec<S> a;
        Rel rel;
        S b;
    };

    std::vector<VarSign> signs;
    std::vector<Row> rows;
    Vec<S> objective;  // empty: pure feasibility

    int num_vars() const { return static_cast<int>(signs.size()); }

    int add_var(VarSign sign) {
        signs.push_back(sign);
        return static_cast<int>(signs.size()) - 1;
    }

    int add_vars(int n, VarSign sign) {
        int first = num_vars();
        for (int i = 0; i < n; ++i) signs.push_back(sign);
        return first;
    }

    void add_row(Vec<S> a, Rel rel, S b) {
        if (static_cast<int>(a.size()) != num_vars())
            throw DimensionMismatch("LpProblem::add_row: coefficient count");
        rows.push_back(Row{std::move(a), rel, std::move(b)});
    }
};

/// Dual multipliers proving infeasibility: y_i <= 0 on Le rows, y_i >= 0 on
/// Ge rows, free on Eq rows; the aggregated row y^T A is <= 0 on nonnegative
/// variables and = 0 on free ones, while y^T b > 0.
template <class S>
struct FarkasCertificate {
    Vec<S> y;
    S violation{};  // y^T b
};

template <class S>
struct LpResult {
    LpStatus status = LpStatus::IterLimit;
    Vec<S> x;      // original variables, when Optimal
    S value{};     // objective value, when Optimal
    std::optional<FarkasCertificate<S>> farkas;
    long iterations = 0;
};

/// Re-check a primal point by substitution.  Returns the largest residual.
template <class S>
S lp_residual(const LpProblem<S>& p, const Vec<S>& x) {
    S worst{};
    for (int j = 0; j < p.num_vars(); ++j)
        if (p.signs[j] == VarSign::NonNeg && x[j] < S{}) {
            S v = -x[j];
            if (v > worst) worst = v;
        }
    for (const auto& row : p.rows) {
        S lhs = dot(row.a, x);
        S r{};
        switch (row.rel) {
            case Rel::Eq: r = scalar_traits<S>::abs(lhs - row.b); break;
            case Rel::Le: r = lhs - row.b; break;
            case Rel::Ge: r = row.b - lhs; break;
        }
        if (r > worst) worst = r;
    }
    return worst;
}

/// Slack profile of a Farkas certificate: the worst sign violation of the
/// multipliers, the worst aggregated-row violation, and the margin y^T b.
template <class S>
struct FarkasCheck {
    S sign_violation{};
    S row_violation{};
    S margin{};
};

template <class S>
FarkasCheck<S> farkas_check(const LpProblem<S>& p, const FarkasCertificate<S>& f) {
    FarkasCheck<S> c;
    for (std::size_t i = 0; i < p.rows.size(); ++i) {
        if (p.rows[i].rel == Rel::Le && f.y[i] > c.sign_violation) c.sign_violation = f.y[i];
        if (p.rows[i].rel == Rel::Ge && -f.y[i] > c.sign_violation) c.sign_violation = -f.y[i];
    }
    Vec<S> agg(p.num_vars(), S{});
    for (std::size_t i = 0; i < p.rows.size(); ++i) {
        axpy(f.y[i], p.rows[i].a, agg);
        c.margin += f.y[i] * p.rows[i].b;
    }
    for (int j = 0; j < p.num_vars(); ++j) {
        if (p.signs[j] == VarSign::NonNeg && agg[j] > c.row_violation) c.row_violation = agg[j];
        if (p.signs[j] == VarSign::Free && scalar_traits<S>::abs(agg[j]) > c.row_violation)
            c.row_violation = scalar_traits<S>::abs(agg[j]);
    }
    return c;
}

/// Re-check a Farkas certificate by substitution.  Returns true when the
/// multiplier signs, the aggregated row, and the violation margin all hold
/// within the given tolerance.
template <class S>
bool farkas_verifies(const LpProblem<S>& p, const FarkasCertificate<S>& f, const S& tol) {
    if (f.y.size() != p.rows.size()) return false;
    auto c = farkas_check(p, f);
    return c.sign_violation <= tol && c.row_violation <= tol && c.margin > tol;
}

/*
 * Two-phase dense tableau simplex with Bland's anti-cycling rule.
 *
 * Every canonical row receives an artificial variable, so the initial basis
 * is the identity and phase-1 dual multipliers can be read off the cost row
 * under the artificial columns.  When phase 1 ends with a positive artificial
 * sum those multipliers are the Farkas certificate of the input system.
 *
 * Holds no global state; safe to use from many threads with separate
 * instances (and the solve call itself only touches locals).
 */
template <class S>
class SimplexSolver {
public:
    struct Options {
        S tol = scalar_traits<S>::default_tol();
        long max_iters = 200000;
    };

    SimplexSolver() = default;
    explicit SimplexSolver(Options opt) : opt_(opt) {}

    LpResult<S> solve(const LpProblem<S>& prob) const {
        const int nvar = prob.num_vars();
        const int m = static_cast<int>(prob.rows.size());

        // Column layout: per-variable columns (free variables split into a
        // positive and negative part), then row slacks, then artificials.
        std::vector<int> col_of_var(nvar), neg_col_of_var(nvar, -1);
        int ncols = 0;
        for (int j = 0; j < nvar; ++j) {
            col_of_var[j] = ncols++;
            if (prob.signs[j] == VarSign::Free) neg_col_of_var[j] = ncols++;
        }
        std::vector<int> slack_col(m, -1);
        for (int i = 0; i < m; ++i)
            if (prob.rows[i].rel != Rel::Eq) slack_col[i] = ncols++;
        const int nreal = ncols;
        const int art0 = ncols;
        ncols += m;

        Mat<S> T(m + 1, ncols + 1);  // row m is the cost row, column ncols the rhs
        const int rhs = ncols;
        std::vector<S> row_sign(m, S(1));

        for (int i = 0; i < m; ++i) {
            const auto& row = prob.rows[i];
            S s = S(1);
            if (row.b < S{}) s = S(-1);
            row_sign[i] = s;
            for (int j = 0; j < nvar; ++j) {
                T(i, col_of_var[j]) = s * row.a[j];
                if (neg_col_of_var[j] >= 0) T(i, neg_col_of_var[j]) = -s * row.a[j];
            }
            if (slack_col[i] >= 0) T(i, slack_col[i]) = (row.rel == Rel::Le ? s : -s);
            T(i, art0 + i) = S(1);
            T(i, rhs) = s * row.b;
        }

        Mat<S> A0;  // canonical matrix, kept for the float-mode basis refinement
        if constexpr (!scalar_traits<S>::exact) {
            A0 = Mat<S>(m, ncols);
            for (int i = 0; i < m; ++i)
                for (int j = 0; j < ncols; ++j) A0(i, j) = T(i, j);
        }

        std::vector<int> basis(m);
        for (int i = 0; i < m; ++i) basis[i] = art0 + i;

        // Phase-1 cost row: minimize the sum of artificials. Reduced costs of
        // the real columns start at minus their column sums.
        S phase1_obj{};
        for (int j = 0; j <= ncols; ++j) {
            S colsum{};
            for (int i = 0; i < m; ++i) colsum += T(i, j);
            T(m, j) = (j >= art0 && j < art0 + m) ? S(1) - colsum : -colsum;
        }
        for (int i = 0; i < m; ++i) phase1_obj += T(i, rhs);

        LpResult<S> res;
        const S piv_tol = scalar_traits<S>::pivot_tol();
        const S feas_tol = feasibility_threshold(prob);

        auto pivot = [&](int pr, int pc) {
            S d = T(pr, pc);
            for (int j = 0; j <= ncols; ++j) T(pr, j) /= d;
            T(pr, pc) = S(1);
            for (int i = 0; i <= m; ++i) {
                if (i == pr) continue;
                S f = T(i, pc);
                if (f == S{}) continue;
                for (int j = 0; j <= ncols; ++j) T(i, j) -= f * T(pr, j);
                T(i, pc) = S{};
            }
            basis[pr] = pc;
        };

        // Bland: entering column = smallest eligible index, leaving row =
        // smallest basis index among the minimal-ratio rows.
        auto iterate = [&](int limit_cols, bool phase2) -> int {
            while (true) {
                if (++res.iterations > opt_.max_iters) return 2;
                int pc = -1;
                for (int j = 0; j < limit_cols; ++j) {
                    if (phase2 && j >= art0) break;
                    if (T(m, j) < -opt_.tol) {
                        pc = j;
                        break;
                    }
                }
                if (pc < 0) return 0;
                int pr = -1;
                bool pr_zero_art = false;
                S best{};
                for (int i = 0; i < m; ++i) {
                    // A basic artificial must not drift positive in phase 2:
                    // treat it as blocking at ratio zero for either pivot sign.
                    if (phase2 && basis[i] >= art0 &&
                        scalar_traits<S>::abs(T(i, pc)) > piv_tol) {
                        if (!pr_zero_art || basis[i] < basis[pr]) {
                            pr = i;
                            pr_zero_art = true;
                        }
                        continue;
                    }
                    if (pr_zero_art) continue;
                    if (T(i, pc) <= piv_tol) continue;
                    S ratio = T(i, rhs) / T(i, pc);
                    if (pr < 0 || ratio < best ||
                        (ratio == best && basis[i] < basis[pr])) {
                        best = ratio;
                        pr = i;
                    }
                }
                if (pr < 0) return 1;  // unbounded direction
                pivot(pr, pc);
            }
        };

        int rc = iterate(nreal, false);
        if (rc == 2) {
            res.status = LpStatus::IterLimit;
            return res;
        }
        phase1_obj = S{};
        for (int i = 0; i < m; ++i)
            if (basis[i] >= art0) phase1_obj += T(i, rhs);

        if (phase1_obj > feas_tol) {
            // Farkas multipliers: the cost-row entry under artificial column i
            // is 1 - pi_i in the canonical (sign-flipped) system.  Returned
            // normalized to unit sup norm.
            FarkasCertificate<S> cert;
            cert.y.resize(m);
            for (int i = 0; i < m; ++i) cert.y[i] = row_sign[i] * (S(1) - T(m, art0 + i));
            S ynorm = inf_norm(cert.y);
            if (ynorm > S{})
                for (auto& v : cert.y) v /= ynorm;
            auto check = farkas_check(prob, cert);
            cert.violation = check.margin;
            // The certificate must be internally consistent within the
            // verification tolerance and strictly violating; the size of the
            // margin itself shrinks to zero at the feasibility boundary.
            if (check.sign_violation > verify_tol(prob) ||
                check.row_violation > verify_tol(prob) || !(check.margin > S{}))
                throw LpNumericalFailure(
                    "simplex: infeasibility certificate failed re-verification");
            res.status = LpStatus::Infeasible;
            res.farkas = std::move(cert);
            return res;
        }

        // Feasible: install the real objective (minimize -objective) and
        // recompute reduced costs over the current basis.
        Vec<S> cost(ncols, S{});
        if (!prob.objective.empty()) {
            for (int j = 0; j < nvar; ++j) {
                cost[col_of_var[j]] = -prob.objective[j];
                if (neg_col_of_var[j] >= 0) cost[neg_col_of_var[j]] = prob.objective[j];
            }
        }
        for (int j = 0; j <= ncols; ++j) {
            S r = (j < ncols) ? cost[j] : S{};
            for (int i = 0; i < m; ++i) {
                if (cost[basis[i]] == S{}) continue;
                r -= cost[basis[i]] * T(i, j);
            }
            T(m, j) = r;
        }

        rc = iterate(nreal, true);
        if (rc == 2) {
            res.status = LpStatus::IterLimit;
            return res;
        }
        if (rc == 1) {
            res.status = LpStatus::Unbounded;
            return res;
        }

        Vec<S> xc(ncols, S{});
        for (int i = 0; i < m; ++i)
            if (basis[i] < ncols) xc[basis[i]] = T(i, rhs);
        auto assemble = [&](const Vec<S>& cols) {
            Vec<S> x(nvar, S{});
            for (int j = 0; j < nvar; ++j) {
                x[j] = cols[col_of_var[j]];
                if (neg_col_of_var[j] >= 0) x[j] -= cols[neg_col_of_var[j]];
            }
            return x;
        };
        res.x = assemble(xc);
        if constexpr (!scalar_traits<S>::exact) {
            // Re-solve the basis system against the original data; pivoting
            // drift accumulated in the tableau disappears up to one dense
            // solve of the final basis.  Kept only when it actually improves
            // the residual.
            Mat<S> B(m, m);
            for (int i = 0; i < m; ++i)
                for (int c = 0; c < m; ++c) B(i, c) = A0(i, basis[c]);
            Vec<S> b0(m);
            for (int i = 0; i < m; ++i) b0[i] = row_sign[i] * prob.rows[i].b;
            try {
                Vec<S> xb = inverse(B).apply(b0);
                Vec<S> refined = xc;
                for (int c = 0; c < m; ++c) refined[basis[c]] = xb[c] < S{} ? S{} : xb[c];
                Vec<S> xr = assemble(refined);
                if (lp_residual(prob, xr) < lp_residual(prob, res.x)) res.x = std::move(xr);
            } catch (const Error&) {
                // Singular refinement basis: keep the tableau solution.
            }
        }
        if (!prob.objective.empty()) res.value = dot(prob.objective, res.x);
        res.status = LpStatus::Optimal;
        if (lp_residual(prob, res.x) > verify_tol(prob))
            throw LpNumericalFailure("simplex: primal point failed re-verification");
        return res;
    }

private:
    Options opt_;

    S feasibility_threshold(const LpProblem<S>& p) const {
        S scale = S(1);
        for (const auto& row : p.rows) {
            S ab = scalar_traits<S>::abs(row.b);
            if (ab > scale) scale = ab;
        }
        return opt_.tol * scale;
    }

    S verify_tol(const LpProblem<S>& p) const {
        if (scalar_traits<S>::exact) return S{};
        S scale = S(1);
        for (const auto& row : p.rows) {
            for (const auto& a : row.a) {
                S v = scalar_traits<S>::abs(a);
                if (v > scale) scale = v;
            }
            S ab = scalar_traits<S>::abs(row.b);
            if (ab > scale) scale = ab;
        }
        return S(10) * opt_.tol * scale;
    }
};

/// Certificate produced by lp_feasible: a primal witness or a re-verified
/// Farkas covector.
template <class S>
struct LpCertificate {
    bool feasible = false;
    Vec<S> x;
    std::optional<FarkasCertificate<S>> farkas;
};

template <class S>
LpCertificate<S> lp_feasible(const LpProblem<S>& prob,
                             const S& tol = scalar_traits<S>::default_tol()) {
    typename SimplexSolver<S>::Options opt;
    opt.tol = tol;
    SimplexSolver<S> solver(opt);
    LpProblem<S> p = prob;
    p.objective.clear();
    LpResult<S> r = solver.solve(p);
    if (r.status == LpStatus::IterLimit)
        throw LpNumericalFailure("lp_feasible: cycling guard exceeded");
    LpCertificate<S> cert;
    if (r.status == LpStatus::Optimal) {
        cert.feasible = true;
        cert.x = std::move(r.x);
    } else {
        cert.feasible = false;
        cert.farkas = std::move(r.farkas);
    }
    return cert;
}

template <class S>
LpResult<S> lp_maximize(const LpProblem<S>& prob,
                        const S& tol = scalar_traits<S>::default_tol()) {
    typename SimplexSolver<S>::Options opt;
    opt.tol = tol;
    SimplexSolver<S> solver(opt);
    LpResult<S> r = solver.solve(prob);
    if (r.status == LpStatus::IterLimit)
        throw LpNumericalFailure("lp_maximize: cycling guard exceeded");
    return r;
}

}  // namespace gptc
