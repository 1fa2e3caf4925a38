#pragma once

#include <algorithm>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "spoa/combinatorics.hpp"
#include "spoa/errors.hpp"
#include "spoa/lp.hpp"
#include "spoa/rational.hpp"
#include "spoa/welfare.hpp"

namespace spoa {

/// Nonnegative mass per label; the full parameterization of a game pair.
struct LabelVector {
    IndexSet index_set;
    std::vector<Rational> entries;

    const Rational& operator[](const Label& l) const { return entries[index_set.index_of(l)]; }
};

enum class BoundMode { WelfareSharing, OptimalDesign };

struct BoundReport {
    int n = 0;
    int k = 0;
    BoundMode mode = BoundMode::WelfareSharing;
    Rational primal_value;  // P* or Q*
    Rational spoa;          // 1 / primal_value
    bool upper_bound_only = false;
    std::optional<LabelVector> theta;        // optimal vertex of (P)
    std::vector<UtilityRule> utility_rules;  // one rule per coalition size, design mode
};

namespace detail {

struct CoalitionTables {
    int n;
    std::vector<std::vector<Integer>> ff;      // ff[x][y] = x!/(x-y)!
    std::vector<std::vector<Integer>> choose;  // choose[a][b]

    explicit CoalitionTables(int players) : n(players) {
        ff.assign(n + 1, std::vector<Integer>(n + 1));
        choose.assign(n + 1, std::vector<Integer>(n + 1));
        for (int x = 0; x <= n; ++x)
            for (int y = 0; y <= n; ++y) {
                ff[x][y] = falling_factorial(static_cast<unsigned>(x), static_cast<unsigned>(y));
                choose[x][y] = binomial(static_cast<unsigned>(x), static_cast<unsigned>(y));
            }
    }

    /// Calls f(occupancy_after, count) for every (alpha, beta) pair with a
    /// nonzero coalition coefficient; zero-coefficient terms are skipped so
    /// the occupancy index always stays within [0, n].
    template <class F>
    void for_each_deviation(const Label& l, int zeta, F&& f) const {
        const int spare = n - l.e - l.o;
        for (int alpha = 0; alpha <= std::min(zeta, l.e); ++alpha)
            for (int beta = 0; beta <= std::min(zeta - alpha, l.o); ++beta) {
                if (zeta - alpha - beta > spare) continue;
                Integer count = choose[zeta][alpha] * choose[zeta - alpha][beta] * ff[l.e][alpha] *
                                ff[l.o][beta] * ff[spare][zeta - alpha - beta];
                f(l.e + l.x + beta - alpha, count);
            }
    }
};

inline void check_bound_args(int n, const WelfareCurve& w, int k) {
    if (n < 1) throw ValidationError("player count must be >= 1");
    if (w.n != n) throw ValidationError("welfare curve is for n=" + std::to_string(w.n) +
                                        ", expected n=" + std::to_string(n));
    if (k < 1 || k > n)
        throw ValidationError("coalition bound k=" + std::to_string(k) + " outside [1," +
                              std::to_string(n) + "]");
}

} // namespace detail

/// Coefficient of one label in the coalition-size-zeta inequality:
///   n!/(n-zeta)! * w(e+x)  -  sum_{alpha,beta} B * w(e+x+beta-alpha).
/// A nonnegative total over all labels says no coalition of that size can
/// improve on the equilibrium allocation.
inline Rational primal_row_coefficient(int n, int zeta, const Label& l, const WelfareCurve& w,
                                       const detail::CoalitionTables& tables) {
    Rational coeff = Rational(tables.ff[n][zeta]) * w(l.e + l.x);
    tables.for_each_deviation(l, zeta, [&](int occupancy, const Integer& count) {
        coeff -= Rational(count) * w(occupancy);
    });
    return coeff;
}

inline Rational primal_row_coefficient(int n, int zeta, const Label& l, const WelfareCurve& w) {
    return primal_row_coefficient(n, zeta, l, w, detail::CoalitionTables(n));
}

/// The worst-case program over game parameterizations: maximize the optimal
/// welfare sum_{e,x,o} w(o+x) theta(e,x,o) subject to one equilibrium
/// inequality per coalition size in [k] and the normalization
/// sum w(e+x) theta = 1. Row order: zeta = 1..k, then the normalization.
inline LinearProgram build_primal(int n, const WelfareCurve& w, int k) {
    detail::check_bound_args(n, w, k);
    const auto set = make_index_set(n);
    const detail::CoalitionTables tables(n);

    LinearProgram lp;
    lp.num_vars = static_cast<int>(set.size());
    lp.sense = Sense::Maximize;
    lp.objective.reserve(set.size());
    for (const auto& l : set.labels) lp.objective.push_back(w(l.o + l.x));

    for (int zeta = 1; zeta <= k; ++zeta) {
        LpConstraint row;
        row.rel = Relation::GreaterEqual;
        row.rhs = 0;
        row.coeffs.reserve(set.size());
        for (const auto& l : set.labels)
            row.coeffs.push_back(primal_row_coefficient(n, zeta, l, w, tables));
        lp.constraints.push_back(std::move(row));
    }

    LpConstraint normalization;
    normalization.rel = Relation::Equal;
    normalization.rhs = 1;
    normalization.coeffs.reserve(set.size());
    for (const auto& l : set.labels) normalization.coeffs.push_back(w(l.e + l.x));
    lp.constraints.push_back(std::move(normalization));
    return lp;
}

/// Tight k-strong price-of-anarchy bound for the class of n-player games
/// with welfare w: spoa = 1 / P*(n, w, k), plus the optimal vertex theta.
inline BoundReport spoa_bound(int n, const WelfareCurve& w, int k) {
    auto lp = build_primal(n, w, k);
    auto sol = solve(lp);
    if (sol.verdict == LpVerdict::Unbounded)
        throw ValidationError("invalid welfare curve: the bound program is unbounded");
    if (sol.verdict == LpVerdict::Infeasible)
        throw InternalError("the bound program cannot be infeasible");

    BoundReport report;
    report.n = n;
    report.k = k;
    report.mode = BoundMode::WelfareSharing;
    report.primal_value = sol.value;
    report.spoa = 1 / sol.value;
    report.theta = LabelVector{make_index_set(n), std::move(sol.point)};
    return report;
}

/// The utility-design program: minimize mu subject to, for every label,
///   w(o+x) - mu w(e+x) + sum_zeta [ n!/(n-zeta)! u_zeta(e+x)
///                                   - sum_{alpha,beta} B u_zeta(e+x+beta-alpha) ] <= 0
/// over mu and one nonnegative rule u_zeta(1..n) per coalition size
/// (u_zeta(0) is fixed to zero). Variable order: mu, then u_1(1..n), ...,
/// u_k(1..n). Every label with e = o = 0 forces mu >= 1.
inline LinearProgram build_design(int n, const WelfareCurve& w, int k) {
    detail::check_bound_args(n, w, k);
    const auto set = make_index_set(n);
    const detail::CoalitionTables tables(n);

    LinearProgram lp;
    lp.num_vars = 1 + k * n;
    lp.sense = Sense::Minimize;
    lp.objective.assign(static_cast<std::size_t>(lp.num_vars), Rational(0));
    lp.objective[0] = 1;

    auto var_of = [n](int zeta, int occupancy) { return 1 + (zeta - 1) * n + (occupancy - 1); };

    lp.constraints.reserve(set.size());
    for (const auto& l : set.labels) {
        LpConstraint row;
        row.rel = Relation::LessEqual;
        row.rhs = -w(l.o + l.x);
        row.coeffs.assign(static_cast<std::size_t>(lp.num_vars), Rational(0));
        row.coeffs[0] = -w(l.e + l.x);
        for (int zeta = 1; zeta <= k; ++zeta) {
            if (l.e + l.x >= 1)
                row.coeffs[var_of(zeta, l.e + l.x)] += Rational(tables.ff[n][zeta]);
            tables.for_each_deviation(l, zeta, [&](int occupancy, const Integer& count) {
                if (occupancy >= 1) row.coeffs[var_of(zeta, occupancy)] -= Rational(count);
            });
        }
        lp.constraints.push_back(std::move(row));
    }
    return lp;
}

/// Upper bound on the k-strong price of anarchy under per-size utility
/// design: spoa <= 1 / Q*(n, w, k). Reported as an upper bound because the
/// optimal rules may differ across coalition sizes.
inline BoundReport design_bound(int n, const WelfareCurve& w, int k,
                                const WarmHint* warm = nullptr, WarmHint* next_hint = nullptr) {
    auto lp = build_design(n, w, k);
    SolveOptions opts;
    opts.warm = warm;
    auto sol = solve(lp, opts);
    if (sol.verdict != LpVerdict::Optimal)
        throw InternalError("the design program is always feasible and bounded");
    if (next_hint) {
        next_hint->positive_vars.clear();
        next_hint->active_duals.clear();
        for (int j = 0; j < lp.num_vars; ++j)
            if (sgn(sol.point[static_cast<std::size_t>(j)]) != 0)
                next_hint->positive_vars.push_back(j);
        for (std::size_t i = 0; i < sol.dual_values.size(); ++i)
            if (sgn(sol.dual_values[i]) != 0) next_hint->active_duals.push_back(static_cast<int>(i));
    }

    BoundReport report;
    report.n = n;
    report.k = k;
    report.mode = BoundMode::OptimalDesign;
    report.upper_bound_only = true;
    report.primal_value = sol.value;
    report.spoa = 1 / sol.value;
    report.utility_rules.reserve(static_cast<std::size_t>(k));
    for (int zeta = 1; zeta <= k; ++zeta) {
        std::vector<Rational> values(static_cast<std::size_t>(n) + 1, Rational(0));
        for (int j = 1; j <= n; ++j)
            values[static_cast<std::size_t>(j)] = sol.point[static_cast<std::size_t>(1 + (zeta - 1) * n + (j - 1))];
        report.utility_rules.push_back(make_utility(n, std::move(values)));
    }
    return report;
}

/// The design program restricted to rules proportional to the welfare
/// itself, u_zeta = t_zeta * w with t_zeta >= 0. Its value equals P*.
inline LinearProgram build_design_restricted(int n, const WelfareCurve& w, int k) {
    detail::check_bound_args(n, w, k);
    const auto set = make_index_set(n);
    const detail::CoalitionTables tables(n);

    LinearProgram lp;
    lp.num_vars = 1 + k;
    lp.sense = Sense::Minimize;
    lp.objective.assign(static_cast<std::size_t>(lp.num_vars), Rational(0));
    lp.objective[0] = 1;

    for (const auto& l : set.labels) {
        LpConstraint row;
        row.rel = Relation::LessEqual;
        row.rhs = -w(l.o + l.x);
        row.coeffs.assign(static_cast<std::size_t>(lp.num_vars), Rational(0));
        row.coeffs[0] = -w(l.e + l.x);
        for (int zeta = 1; zeta <= k; ++zeta)
            row.coeffs[static_cast<std::size_t>(zeta)] = primal_row_coefficient(n, zeta, l, w, tables);
        lp.constraints.push_back(std::move(row));
    }
    return lp;
}

inline Rational restricted_design_value(int n, const WelfareCurve& w, int k) {
    auto sol = solve(build_design_restricted(n, w, k));
    if (sol.verdict != LpVerdict::Optimal)
        throw InternalError("the restricted design program is always feasible and bounded");
    return sol.value;
}

struct CurveRow {
    int k = 0;
    Rational spoa;
    std::optional<Rational> design_spoa;
};

struct CurveTable {
    int n = 0;
    std::string welfare_desc;
    std::vector<CurveRow> rows;  // ascending k
};

/// Per-k table of bounds; reuses the (P) inequality rows across k values.
inline CurveTable spoa_curve(int n, const WelfareCurve& w, std::vector<int> k_values,
                             bool include_design) {
    if (k_values.empty()) throw ValidationError("curve needs at least one k value");
    std::sort(k_values.begin(), k_values.end());
    k_values.erase(std::unique(k_values.begin(), k_values.end()), k_values.end());
    const int max_k = k_values.back();
    detail::check_bound_args(n, w, k_values.front());
    detail::check_bound_args(n, w, max_k);

    auto full = build_primal(n, w, max_k);
    CurveTable table;
    table.n = n;
    for (int k : k_values) {
        LinearProgram lp;
        lp.num_vars = full.num_vars;
        lp.sense = full.sense;
        lp.objective = full.objective;
        lp.constraints.assign(full.constraints.begin(), full.constraints.begin() + k);
        lp.constraints.push_back(full.constraints.back());
        auto sol = solve(lp);
        if (sol.verdict != LpVerdict::Optimal)
            throw ValidationError("invalid welfare curve: the bound program did not solve");

        CurveRow row;
        row.k = k;
        row.spoa = 1 / sol.value;
        table.rows.push_back(std::move(row));
    }
    if (include_design) {
        // chain the design solves: each optimum seeds the next k as a
        // warm basis suggestion
        WarmHint hint, next;
        const WarmHint* carry = nullptr;
        std::size_t row_idx = 0;
        for (int k = 1; k <= max_k; ++k) {
            bool wanted = row_idx < table.rows.size() && table.rows[row_idx].k == k;
            auto report = design_bound(n, w, k, carry, &next);
            hint = std::move(next);
            next = WarmHint{};
            carry = &hint;
            if (wanted) table.rows[row_idx++].design_spoa = report.spoa;
        }
    }
    return table;
}

} // namespace spoa
