#pragma once

#include <cmath>
#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "spoa/errors.hpp"
#include "spoa/rational.hpp"

namespace spoa {

enum class Sense { Maximize, Minimize };
enum class Relation { LessEqual, Equal, GreaterEqual };

struct LpConstraint {
    std::vector<Rational> coeffs;
    Relation rel = Relation::LessEqual;
    Rational rhs = 0;
};

/// A linear program over variables x >= 0 with exact rational data.
struct LinearProgram {
    int num_vars = 0;
    Sense sense = Sense::Maximize;
    std::vector<Rational> objective;
    std::vector<LpConstraint> constraints;

    void validate() const {
        if (num_vars < 1) throw ValidationError("linear program needs at least one variable");
        if (objective.size() != static_cast<std::size_t>(num_vars))
            throw ValidationError("objective length " + std::to_string(objective.size()) +
                                  " does not match variable count " + std::to_string(num_vars));
        for (std::size_t i = 0; i < constraints.size(); ++i)
            if (constraints[i].coeffs.size() != static_cast<std::size_t>(num_vars))
                throw ValidationError("constraint " + std::to_string(i) + " has row length " +
                                      std::to_string(constraints[i].coeffs.size()) +
                                      ", expected " + std::to_string(num_vars));
    }
};

enum class LpVerdict { Optimal, Infeasible, Unbounded };

/// Exact solve result.
///
/// Optimal: `point` satisfies every constraint exactly,
/// `objective . point == value`, and `dual_values` (one per constraint)
/// certify optimality: complementary slackness holds exactly and the dual
/// objective `rhs . dual_values` equals `value`. Sign convention for a
/// maximization: <= rows have dual >= 0, >= rows dual <= 0, = rows free;
/// for a minimization the inequality signs flip.
///
/// Infeasible: `certificate` holds Farkas multipliers y (one per
/// constraint, same sign convention as duals of a maximization) with
/// A^T y >= 0 and rhs . y < 0.
///
/// Unbounded: `certificate` holds a ray d >= 0 (one entry per variable)
/// that preserves feasibility and strictly improves the objective in the
/// program's own sense.
struct LpSolution {
    LpVerdict verdict = LpVerdict::Optimal;
    Rational value;
    std::vector<Rational> point;
    std::vector<Rational> dual_values;
    std::vector<Rational> certificate;
};

/// Optional warm-start knowledge carried over from a related solved
/// program: variables expected positive at the optimum and constraints
/// expected to have nonzero duals (i.e. to be tight). Hints are only a
/// basis suggestion for the exact repair engine; a useless hint costs one
/// rejected attempt and nothing else.
struct WarmHint {
    std::vector<int> positive_vars;
    std::vector<int> active_duals;
};

struct SolveOptions {
    enum class Path { Auto, Direct, Dualize };
    enum class PivotRule { DantzigLex, Bland };
    Path path = Path::Auto;
    PivotRule rule = PivotRule::DantzigLex;
    /// Large solves first run a floating-point simplex to suggest an optimal
    /// basis, which is then certified in exact arithmetic; any failure falls
    /// back to the pure rational simplex. Never affects exactness.
    bool float_guess = true;
    const WarmHint* warm = nullptr;
};

namespace detail {

/// Diagnostics from the most recent solve on this thread.
struct SolveStats {
    long pivots = 0;
    long float_pivots = 0;
    long repair_pivots = 0;
    bool guessed_basis = false;
    long max_entry_bits = 0;
    const char* guess_reject = nullptr;
};
inline thread_local SolveStats last_solve_stats;

/// Conversion to long double that is exact for integers below 2^64; the
/// x86-64 long double carries a 64-bit mantissa, so every coalition
/// coefficient up to 20! converts without rounding.
inline long double to_real(const Integer& z) {
    Integer a = abs(z);
    if (mpz_sizeinbase(a.get_mpz_t(), 2) > 64) return static_cast<long double>(z.get_d());
    Integer hi = a >> 32;
    Integer lo = a - (hi << 32);
    long double v = static_cast<long double>(hi.get_ui()) * 4294967296.0L +
                    static_cast<long double>(lo.get_ui());
    return sgn(z) < 0 ? -v : v;
}

inline long double to_real(const Rational& r) { return to_real(r.get_num()) / to_real(r.get_den()); }

/// Standardized computational form shared by the exact simplex, the
/// floating-point guesser, and the basis certifier. Rows are flipped to a
/// nonnegative right-hand side (>= rows with a zero right-hand side flip to
/// <= so their slack can start basic); columns are the structural variables
/// followed by one slack/surplus per inequality and one artificial per
/// >=/= row. The objective is oriented for maximization.
struct StdModel {
    int m = 0;
    int nv = 0;
    int ncols = 0;
    bool has_artificials = false;
    std::vector<int> flip;                    // per row, +1/-1 vs. the input
    std::vector<Relation> std_rel;            // per row, after flips
    std::vector<int> slack_col, art_col;      // per row, -1 if absent
    std::vector<bool> artificial;             // per column
    std::vector<int> unit_row, unit_sign;     // per column >= nv
    std::vector<std::vector<Rational>> rows;  // m x nv structural part
    std::vector<Rational> b;                  // per row, >= 0
    std::vector<Rational> cost;               // per column, max orientation
    std::vector<int> init_basis;              // per row

    Rational entry(int i, int j) const {
        if (j < nv) return rows[i][j];
        if (unit_row[static_cast<std::size_t>(j - nv)] != i) return Rational(0);
        return Rational(unit_sign[static_cast<std::size_t>(j - nv)]);
    }
};

inline StdModel make_std_model(const LinearProgram& lp, int obj_sign) {
    StdModel md;
    md.m = static_cast<int>(lp.constraints.size());
    md.nv = lp.num_vars;
    md.flip.assign(md.m, 1);
    md.std_rel.resize(md.m);
    md.slack_col.assign(md.m, -1);
    md.art_col.assign(md.m, -1);
    md.rows.resize(md.m);
    md.b.resize(md.m);

    for (int i = 0; i < md.m; ++i) {
        md.rows[i] = lp.constraints[i].coeffs;
        md.b[i] = lp.constraints[i].rhs;
        md.std_rel[i] = lp.constraints[i].rel;
        bool flip = sgn(md.b[i]) < 0;
        if (!flip && sgn(md.b[i]) == 0 && md.std_rel[i] == Relation::GreaterEqual) flip = true;
        if (flip) {
            for (auto& c : md.rows[i]) c = -c;
            md.b[i] = -md.b[i];
            if (md.std_rel[i] == Relation::LessEqual)
                md.std_rel[i] = Relation::GreaterEqual;
            else if (md.std_rel[i] == Relation::GreaterEqual)
                md.std_rel[i] = Relation::LessEqual;
            md.flip[i] = -1;
        }
    }

    int extra = 0;
    for (int i = 0; i < md.m; ++i)
        extra += md.std_rel[i] == Relation::GreaterEqual ? 2 : 1;
    md.ncols = md.nv + extra;
    md.artificial.assign(md.ncols, false);
    md.unit_row.assign(static_cast<std::size_t>(extra), -1);
    md.unit_sign.assign(static_cast<std::size_t>(extra), 0);
    md.init_basis.assign(md.m, -1);

    int col = md.nv;
    auto add_unit = [&](int row, int sign, bool is_art) {
        md.unit_row[static_cast<std::size_t>(col - md.nv)] = row;
        md.unit_sign[static_cast<std::size_t>(col - md.nv)] = sign;
        md.artificial[col] = is_art;
        return col++;
    };
    for (int i = 0; i < md.m; ++i) {
        switch (md.std_rel[i]) {
        case Relation::LessEqual:
            md.slack_col[i] = add_unit(i, 1, false);
            md.init_basis[i] = md.slack_col[i];
            break;
        case Relation::GreaterEqual:
            md.slack_col[i] = add_unit(i, -1, false);
            md.art_col[i] = add_unit(i, 1, true);
            md.init_basis[i] = md.art_col[i];
            md.has_artificials = true;
            break;
        case Relation::Equal:
            md.art_col[i] = add_unit(i, 1, true);
            md.init_basis[i] = md.art_col[i];
            md.has_artificials = true;
            break;
        }
    }

    md.cost.assign(md.ncols, Rational(0));
    for (int j = 0; j < md.nv; ++j)
        md.cost[j] = obj_sign > 0 ? lp.objective[j] : Rational(-lp.objective[j]);
    return md;
}

/// Maps duals of the standardized rows back to the caller's rows.
inline std::vector<Rational> unstandardize_duals(const StdModel& md, std::vector<Rational> y,
                                                 int obj_sign) {
    for (int i = 0; i < md.m; ++i)
        if (md.flip[i] < 0) y[i] = -y[i];
    if (obj_sign < 0)
        for (auto& v : y) v = -v;
    return y;
}

/// Dense tableau simplex, two phases, exact rational pivoting. The default
/// pivot rule is Dantzig entering with a lexicographic ratio test; a solve
/// that stalls on a long run of degenerate pivots falls back to Bland's
/// smallest-index rule, whose termination guarantee is unconditional. Both
/// rules are deterministic, so repeat solves return the identical vertex.
/// The objective is always maximized (callers pass obj_sign = -1 to
/// minimize).
class DenseSimplex {
public:
    DenseSimplex(const StdModel& md, int obj_sign, SolveOptions::PivotRule rule)
        : md_(md), obj_sign_(obj_sign), rule_(rule) {
        m_ = md.m;
        nv_ = md.nv;
        ncols_ = md.ncols;
        basis_ = md.init_basis;
        rhs_ = md.b;
        tab_.assign(m_, std::vector<Rational>(ncols_));
        for (int i = 0; i < m_; ++i) {
            for (int j = 0; j < nv_; ++j) tab_[i][j] = md.rows[i][j];
            for (int j = nv_; j < ncols_; ++j)
                if (md.unit_row[static_cast<std::size_t>(j - nv_)] == i)
                    tab_[i][j] = md.unit_sign[static_cast<std::size_t>(j - nv_)];
        }

        red2_ = md.cost;
        val2_ = 0;
        if (md.has_artificials) {
            red1_.assign(ncols_, Rational(0));
            val1_ = 0;
            for (int c = 0; c < ncols_; ++c)
                if (md.artificial[c]) red1_[c] = -1;
            for (int i = 0; i < m_; ++i) {
                if (md.art_col[i] < 0) continue;
                for (int j = 0; j < ncols_; ++j) red1_[j] += tab_[i][j];
                val1_ -= rhs_[i];
            }
        }
    }

    LpSolution run() {
        if (md_.has_artificials) {
            phase_ = 1;
            if (!optimize())
                throw InternalError("phase-1 objective cannot be unbounded");
            if (sgn(val1_) < 0) return infeasible_result();
            drive_out_artificials();
        }
        phase_ = 2;
        if (!optimize()) return unbounded_result();
        record_entry_bits();
        return optimal_result();
    }

private:
    const StdModel& md_;
    int obj_sign_;
    SolveOptions::PivotRule rule_;
    int m_ = 0;
    int nv_ = 0;
    int ncols_ = 0;
    int phase_ = 2;
    int unbounded_col_ = -1;
    long stall_ = 0;  // consecutive degenerate pivots

    std::vector<std::vector<Rational>> tab_;
    std::vector<Rational> rhs_;
    std::vector<Rational> red1_, red2_;
    Rational val1_, val2_;
    std::vector<int> basis_;

    // Artificial columns never re-enter. Bland: lowest-index column with
    // positive reduced cost. Dantzig: most positive reduced cost, lowest
    // index among ties.
    int entering(const std::vector<Rational>& red) const {
        if (rule_ == SolveOptions::PivotRule::Bland) {
            for (int j = 0; j < ncols_; ++j)
                if (!md_.artificial[j] && sgn(red[j]) > 0) return j;
            return -1;
        }
        int best = -1;
        for (int j = 0; j < ncols_; ++j) {
            if (md_.artificial[j] || sgn(red[j]) <= 0) continue;
            if (best < 0 || red[j] > red[best]) best = j;
        }
        return best;
    }

    // True when row a beats row b in the lexicographic ratio order for
    // pivot column pc (both rows have positive pivot entries). The
    // comparison columns are the initial basis columns, which carry the
    // running basis inverse.
    bool lex_smaller(int a, int b, int pc) const {
        int c = cmp(rhs_[a] * tab_[b][pc], rhs_[b] * tab_[a][pc]);
        if (c != 0) return c < 0;
        for (int t : md_.init_basis) {
            c = cmp(tab_[a][t] * tab_[b][pc], tab_[b][t] * tab_[a][pc]);
            if (c != 0) return c < 0;
        }
        throw InternalError("lexicographic tie between distinct tableau rows");
    }

    int leaving(int pc) const {
        int pr = -1;
        for (int i = 0; i < m_; ++i) {
            if (sgn(tab_[i][pc]) <= 0) continue;
            if (pr < 0) {
                pr = i;
                continue;
            }
            if (rule_ == SolveOptions::PivotRule::Bland) {
                int c = cmp(rhs_[i] * tab_[pr][pc], rhs_[pr] * tab_[i][pc]);
                if (c < 0 || (c == 0 && basis_[i] < basis_[pr])) pr = i;
            } else if (lex_smaller(i, pr, pc)) {
                pr = i;
            }
        }
        return pr;
    }

    void pivot(int pr, int pc) {
        Rational piv = tab_[pr][pc];
        auto& prow = tab_[pr];
        if (piv != 1) {
            for (auto& v : prow)
                if (sgn(v) != 0) v /= piv;
            rhs_[pr] /= piv;
            prow[pc] = 1;
        }
        for (int i = 0; i < m_; ++i) {
            if (i == pr) continue;
            eliminate(tab_[i], rhs_[i], prow, rhs_[pr], tab_[i][pc]);
        }
        if (phase_ == 1) eliminate_obj(red1_, val1_, prow, rhs_[pr], red1_[pc]);
        eliminate_obj(red2_, val2_, prow, rhs_[pr], red2_[pc]);
        basis_[pr] = pc;
    }

    static void eliminate(std::vector<Rational>& row, Rational& row_rhs,
                          const std::vector<Rational>& prow, const Rational& prhs,
                          Rational factor) {
        if (sgn(factor) == 0) return;
        const std::size_t n = row.size();
        for (std::size_t j = 0; j < n; ++j)
            if (sgn(prow[j]) != 0) row[j] -= factor * prow[j];
        row_rhs -= factor * prhs;
    }

    static void eliminate_obj(std::vector<Rational>& red, Rational& val,
                              const std::vector<Rational>& prow, const Rational& prhs,
                              Rational factor) {
        if (sgn(factor) == 0) return;
        const std::size_t n = red.size();
        for (std::size_t j = 0; j < n; ++j)
            if (sgn(prow[j]) != 0) red[j] -= factor * prow[j];
        val += factor * prhs;
    }

    // Returns false when the objective is unbounded above.
    bool optimize() {
        const auto& red = phase_ == 1 ? red1_ : red2_;
        const long stall_limit = 64L * (m_ + 2);
        for (;;) {
            int pc = entering(red);
            if (pc < 0) return true;
            int pr = leaving(pc);
            if (pr < 0) {
                unbounded_col_ = pc;
                return false;
            }
            const bool degenerate = sgn(rhs_[pr]) == 0;
            pivot(pr, pc);
            ++last_solve_stats.pivots;
            // The lexicographic rule resists cycling but only Bland comes
            // with an unconditional termination proof; degrade after a
            // long degenerate stall.
            if (rule_ != SolveOptions::PivotRule::Bland) {
                stall_ = degenerate ? stall_ + 1 : 0;
                if (stall_ > stall_limit) rule_ = SolveOptions::PivotRule::Bland;
            }
        }
    }

    void record_entry_bits() const {
        long bits = 0;
        for (const auto& row : tab_)
            for (const auto& v : row) {
                long b = static_cast<long>(mpz_sizeinbase(v.get_num().get_mpz_t(), 2)) +
                         static_cast<long>(mpz_sizeinbase(v.get_den().get_mpz_t(), 2));
                if (b > bits) bits = b;
            }
        last_solve_stats.max_entry_bits = bits;
    }

    void drive_out_artificials() {
        for (int i = 0; i < m_; ++i) {
            if (basis_[i] < 0 || !md_.artificial[basis_[i]]) continue;
            if (sgn(rhs_[i]) != 0)
                throw InternalError("artificial variable basic at nonzero level after phase 1");
            int pc = -1;
            for (int j = 0; j < ncols_; ++j) {
                if (md_.artificial[j]) continue;
                if (sgn(tab_[i][j]) != 0) {
                    pc = j;
                    break;
                }
            }
            // A fully zero row is redundant; its artificial stays basic at
            // zero and no later pivot can touch the row.
            if (pc >= 0) pivot(i, pc);
        }
    }

    std::vector<Rational> extract_duals(const std::vector<Rational>& red,
                                        const Rational& art_cost) const {
        std::vector<Rational> y(m_);
        for (int i = 0; i < m_; ++i) {
            if (md_.art_col[i] >= 0)
                y[i] = art_cost - red[md_.art_col[i]];
            else
                y[i] = -red[md_.slack_col[i]];
        }
        return y;
    }

    LpSolution optimal_result() const {
        LpSolution sol;
        sol.verdict = LpVerdict::Optimal;
        sol.value = obj_sign_ > 0 ? val2_ : Rational(-val2_);
        sol.point.assign(nv_, Rational(0));
        for (int i = 0; i < m_; ++i)
            if (basis_[i] < nv_) sol.point[basis_[i]] = rhs_[i];
        sol.dual_values = unstandardize_duals(md_, extract_duals(red2_, Rational(0)), obj_sign_);
        return sol;
    }

    LpSolution infeasible_result() const {
        LpSolution sol;
        sol.verdict = LpVerdict::Infeasible;
        sol.certificate = unstandardize_duals(md_, extract_duals(red1_, Rational(-1)), 1);
        return sol;
    }

    LpSolution unbounded_result() const {
        LpSolution sol;
        sol.verdict = LpVerdict::Unbounded;
        sol.certificate.assign(nv_, Rational(0));
        if (unbounded_col_ < nv_) sol.certificate[unbounded_col_] = 1;
        for (int i = 0; i < m_; ++i)
            if (basis_[i] < nv_ && sgn(tab_[i][unbounded_col_]) != 0)
                sol.certificate[basis_[i]] = -tab_[i][unbounded_col_];
        return sol;
    }
};

/// Floating-point simplex over the same standardized layout. Purely a
/// heuristic oracle: its only output is a candidate optimal basis, later
/// certified (or discarded) in exact arithmetic. The right-hand side and
/// costs carry tiny deterministic perturbations that break degenerate ties,
/// which makes the suggested basis far more likely to certify; soundness
/// never depends on them.
class FloatSimplex {
public:
    FloatSimplex(const StdModel& md, unsigned perturbation_seed, bool scale_columns,
                 const std::vector<int>* warm_basis = nullptr)
        : md_(md), warm_(warm_basis) {
        m_ = md.m;
        nv_ = md.nv;
        ncols_ = md.ncols;
        basis_ = md.init_basis;
        std::uint64_t state = 0x9E3779B97F4A7C15ull + 0x100000001b3ull * perturbation_seed;
        auto noise = [&state]() {
            state = state * 6364136223846793005ull + 1442695040888963407ull;
            return static_cast<long double>(state >> 11) * 0x1.0p-53L;
        };
        tab_.assign(m_, std::vector<long double>(ncols_, 0.0L));
        rhs_.assign(m_, 0.0L);
        for (int i = 0; i < m_; ++i) {
            long double amax = 0.0L;
            for (int j = 0; j < nv_; ++j) amax = std::max(amax, std::fabs(to_real(md.rows[i][j])));
            amax = std::max(amax, std::fabs(to_real(md.b[i])));
            const long double scale = amax > 0 ? 1.0L / amax : 1.0L;
            for (int j = 0; j < nv_; ++j) tab_[i][j] = to_real(md.rows[i][j]) * scale;
            rhs_[i] = to_real(md.b[i]) * scale +
                      (perturbation_seed ? 1e-7L * (0.5L + noise()) : 0.0L);
            for (int j = nv_; j < ncols_; ++j)
                if (md.unit_row[static_cast<std::size_t>(j - nv_)] == i)
                    tab_[i][j] = md.unit_sign[static_cast<std::size_t>(j - nv_)] * scale;
        }
        // Column scaling: optimal bases are invariant under positive column
        // scaling, and it keeps the ratio tests well conditioned when one
        // column mixes magnitudes.
        if (scale_columns) red_eps_ = 1e-13L;
        std::vector<long double> cscale_col(ncols_, 1.0L);
        if (scale_columns)
            for (int j = 0; j < ncols_; ++j) {
                long double top = 0.0L;
                for (int i = 0; i < m_; ++i) top = std::max(top, std::fabs(tab_[i][j]));
                if (top > 0.0L) {
                    int ex;
                    std::frexp(top, &ex);
                    cscale_col[j] = std::ldexp(1.0L, -ex);
                    for (int i = 0; i < m_; ++i) tab_[i][j] *= cscale_col[j];
                }
            }
        long double cmax = 0.0L;
        for (const auto& c : md.cost) cmax = std::max(cmax, std::fabs(to_real(c)));
        const long double cscale = cmax > 0 ? 1.0L / cmax : 1.0L;
        red2_.assign(ncols_, 0.0L);
        for (int j = 0; j < ncols_; ++j) {
            red2_[j] = to_real(md.cost[j]) * cscale * cscale_col[j];
            if (perturbation_seed && !md.artificial[j]) red2_[j] -= 1e-8L * (0.5L + noise());
        }
        if (md.has_artificials) {
            red1_.assign(ncols_, 0.0L);
            for (int c = 0; c < ncols_; ++c)
                if (md.artificial[c]) red1_[c] = -1.0L;
            for (int i = 0; i < m_; ++i) {
                if (md.art_col[i] < 0) continue;
                for (int j = 0; j < ncols_; ++j) red1_[j] += tab_[i][j];
            }
        }
    }

    /// Candidate optimal basis, or nullopt when the float run is unusable.
    std::optional<std::vector<int>> suggest_basis() {
        const long cap = 20000L + 250L * m_;
        if (warm_) crash(*warm_);
        if (md_.has_artificials) {
            phase_ = 1;
            if (!optimize(cap)) return std::nullopt;
            long double infeas = 0.0L;
            for (int i = 0; i < m_; ++i)
                if (md_.artificial[basis_[i]]) infeas += std::fabs(rhs_[i]);
            if (infeas > 1e-6L) return std::nullopt;  // likely infeasible: not our case
        }
        phase_ = 2;
        if (!optimize(cap)) return std::nullopt;
        return basis_;
    }

private:
    const StdModel& md_;
    const std::vector<int>* warm_ = nullptr;
    int m_, nv_, ncols_;
    int phase_ = 2;
    long stall_ = 0;
    bool bland_ = false;
    std::vector<std::vector<long double>> tab_;
    std::vector<long double> rhs_;
    std::vector<long double> red1_, red2_;
    std::vector<int> basis_;

    long double red_eps_ = 1e-11L;
    static constexpr long double kPivEps = 1e-10L;

    // Best-effort float pivots into a previously found basis; columns that
    // cannot be placed safely are skipped.
    void crash(const std::vector<int>& warm) {
        std::vector<bool> wanted(static_cast<std::size_t>(ncols_), false);
        for (int c : warm)
            if (c >= 0 && c < ncols_) wanted[static_cast<std::size_t>(c)] = true;
        for (int c : warm) {
            if (c < 0 || c >= ncols_) continue;
            bool already = false;
            for (int i = 0; i < m_; ++i)
                if (basis_[i] == c) already = true;
            if (already) continue;
            int best = -1;
            long double mag = 1e-7L;  // refuse tiny crash pivots
            for (int i = 0; i < m_; ++i) {
                if (wanted[static_cast<std::size_t>(basis_[i])]) continue;
                if (std::fabs(tab_[i][c]) > mag) {
                    best = i;
                    mag = std::fabs(tab_[i][c]);
                }
            }
            if (best >= 0) pivot(best, c);
        }
    }

    int entering(const std::vector<long double>& red) const {
        if (bland_) {
            for (int j = 0; j < ncols_; ++j)
                if (!md_.artificial[j] && red[j] > red_eps_) return j;
            return -1;
        }
        int best = -1;
        for (int j = 0; j < ncols_; ++j) {
            if (md_.artificial[j] || red[j] <= red_eps_) continue;
            if (best < 0 || red[j] > red[best]) best = j;
        }
        return best;
    }

    int leaving(int pc) const {
        int pr = -1;
        long double best = 0.0L;
        for (int i = 0; i < m_; ++i) {
            if (tab_[i][pc] <= kPivEps) continue;
            long double ratio = rhs_[i] / tab_[i][pc];
            if (pr < 0 || ratio < best - 1e-14L ||
                (ratio < best + 1e-14L && basis_[i] < basis_[pr])) {
                pr = i;
                best = ratio;
            }
        }
        return pr;
    }

    bool optimize(long cap) {
        std::vector<long double>& red = phase_ == 1 ? red1_ : red2_;
        for (long iter = 0; iter < cap; ++iter) {
            int pc = entering(red);
            if (pc < 0) return true;
            int pr = leaving(pc);
            if (pr < 0) return phase_ == 1;  // numerically unbounded: distrust
            const bool degenerate = std::fabs(rhs_[pr]) < 1e-14L;
            pivot(pr, pc);
            ++last_solve_stats.float_pivots;
            stall_ = degenerate ? stall_ + 1 : 0;
            if (stall_ > 32L * (m_ + 2)) bland_ = true;
        }
        return false;  // cap exhausted
    }

    void pivot(int pr, int pc) {
        const long double inv = 1.0L / tab_[pr][pc];
        auto& prow = tab_[pr];
        for (auto& v : prow) v *= inv;
        rhs_[pr] *= inv;
        prow[pc] = 1.0L;
        for (int i = 0; i < m_; ++i) {
            if (i == pr) continue;
            const long double f = tab_[i][pc];
            if (f == 0.0L) continue;
            auto& row = tab_[i];
            for (int j = 0; j < ncols_; ++j) row[j] -= f * prow[j];
            row[pc] = 0.0L;
            rhs_[i] -= f * rhs_[pr];
        }
        if (phase_ == 1) {
            const long double f1 = red1_[pc];
            if (f1 != 0.0L) {
                for (int j = 0; j < ncols_; ++j) red1_[j] -= f1 * prow[j];
                red1_[pc] = 0.0L;
            }
        }
        const long double f2 = red2_[pc];
        if (f2 != 0.0L) {
            for (int j = 0; j < ncols_; ++j) red2_[j] -= f2 * prow[j];
            red2_[pc] = 0.0L;
        }
        basis_[pr] = pc;
    }
};

/// Exact finisher for a float-suggested basis. Maintains the exact basis
/// inverse and runs revised dual/primal simplex steps until the suggested
/// basis becomes optimal, then assembles the solution. Pricing is
/// float-filtered: candidate columns are found with double-precision scans
/// and every accepted pivot is confirmed in exact arithmetic, with a full
/// exact scan as the final authority, so the result is exact regardless of
/// how rough the suggestion or the filter is. Returns nullopt (caller
/// falls back to the tableau simplex) on singular suggestions, unbounded
/// directions, or the iteration budget.
class BasisRepair {
public:
    BasisRepair(const StdModel& md, int obj_sign) : md_(md), obj_sign_(obj_sign) {
        cols_.resize(static_cast<std::size_t>(md.ncols));
        for (int j = 0; j < md.nv; ++j)
            for (int i = 0; i < md.m; ++i)
                if (sgn(md.rows[i][j]) != 0) cols_[static_cast<std::size_t>(j)].emplace_back(i, md.rows[i][j]);
        for (int j = md.nv; j < md.ncols; ++j)
            cols_[static_cast<std::size_t>(j)].emplace_back(
                md.unit_row[static_cast<std::size_t>(j - md.nv)],
                Rational(md.unit_sign[static_cast<std::size_t>(j - md.nv)]));

        // scaled floating mirrors for pricing filters
        cols_f_.resize(cols_.size());
        cost_f_.assign(cols_.size(), 0.0L);
        for (std::size_t j = 0; j < cols_.size(); ++j) {
            long double top = 0.0L;
            cols_f_[j].reserve(cols_[j].size());
            for (const auto& [i, v] : cols_[j]) {
                long double d = to_real(v);
                cols_f_[j].emplace_back(i, d);
                top = std::max(top, std::fabs(d));
            }
            const long double scale = top > 0 ? 1.0L / top : 1.0L;
            for (auto& [i, d] : cols_f_[j]) d *= scale;
            cost_f_[j] = to_real(md.cost[j]) * scale;
        }
    }

    std::optional<LpSolution> run(std::vector<int> basis, long budget_scale = 1) {
        const int m = md_.m;
        if (static_cast<int>(basis.size()) != m) return reject("basis size");
        basis_ = std::move(basis);
        in_basis_.assign(static_cast<std::size_t>(md_.ncols), false);
        for (int c : basis_) {
            if (c < 0 || c >= md_.ncols || in_basis_[static_cast<std::size_t>(c)])
                return reject("malformed basis");
            in_basis_[static_cast<std::size_t>(c)] = true;
        }
        if (!invert()) return reject("singular basis");
        refresh_state();

        // Phase D: restore primal feasibility with dual-type pivots. Costs
        // play no role here, so any column with a negative tableau entry in
        // the leaving row is admissible.
        const long dcap = budget_scale * (8L * m + 400);
        bool exact_scan = false;
        for (long iter = 0;; ++iter) {
            int row = -1;
            for (int i = 0; i < m; ++i)
                if (sgn(xb_[i]) < 0 && (row < 0 || basis_[i] < basis_[row])) row = i;
            if (row < 0) break;
            if (iter >= dcap) return reject("feasibility phase cap");
            if (iter > dcap / 2) exact_scan = true;  // stop trusting the filter
            int enter = dual_entering(row, exact_scan);
            if (enter < 0) return reject("no dual pivot");  // row proves infeasibility
            auto w = basis_column(enter);
            if (sgn(w[row]) == 0) throw InternalError("dual pivot on zero entry");
            apply_pivot(row, enter, w);
            ++last_solve_stats.repair_pivots;
        }

        // Phase P: primal simplex to optimality. Dantzig entering through
        // the float filter; a long degenerate stall degrades to exact
        // Bland scans.
        const long pcap = budget_scale * (12L * m + 1500);
        bool bland = false;
        long stall = 0;
        for (long iter = 0;; ++iter) {
            int col = bland ? exact_entering_bland() : primal_entering();
            if (col < 0) return assemble();
            if (iter >= pcap) return reject("optimality phase cap");
            bool degenerate = false;
            if (!primal_step(col, degenerate)) return reject("unbounded direction");
            ++last_solve_stats.repair_pivots;
            stall = degenerate ? stall + 1 : 0;
            if (stall > 8L * (m + 4)) bland = true;
        }
    }

private:
    const StdModel& md_;
    int obj_sign_;
    std::vector<std::vector<std::pair<int, Rational>>> cols_;
    std::vector<std::vector<std::pair<int, long double>>> cols_f_;
    std::vector<long double> cost_f_;
    std::vector<int> basis_;
    std::vector<bool> in_basis_;
    std::vector<std::vector<Rational>> binv_;
    std::vector<Rational> xb_, y_;

    static std::optional<LpSolution> reject(const char* why) {
        last_solve_stats.guess_reject = why;
        return std::nullopt;
    }

    bool invert() {
        const int m = md_.m;
        std::vector<std::vector<Rational>> a(m, std::vector<Rational>(m));
        for (int j = 0; j < m; ++j)
            for (const auto& [i, v] : cols_[static_cast<std::size_t>(basis_[j])]) a[i][j] = v;
        binv_.assign(m, std::vector<Rational>(m));
        for (int i = 0; i < m; ++i) binv_[i][i] = 1;
        for (int col = 0; col < m; ++col) {
            int piv = -1;
            for (int i = col; i < m; ++i)
                if (sgn(a[i][col]) != 0) {
                    piv = i;
                    break;
                }
            if (piv < 0) return false;
            std::swap(a[piv], a[col]);
            std::swap(binv_[piv], binv_[col]);
            Rational p = a[col][col];
            if (p != 1) {
                for (int j = 0; j < m; ++j) {
                    if (sgn(a[col][j]) != 0) a[col][j] /= p;
                    if (sgn(binv_[col][j]) != 0) binv_[col][j] /= p;
                }
            }
            for (int i = 0; i < m; ++i) {
                if (i == col) continue;
                Rational f = a[i][col];
                if (sgn(f) == 0) continue;
                for (int j = 0; j < m; ++j) {
                    if (sgn(a[col][j]) != 0) a[i][j] -= f * a[col][j];
                    if (sgn(binv_[col][j]) != 0) binv_[i][j] -= f * binv_[col][j];
                }
            }
        }
        return true;
    }

    void refresh_state() {
        const int m = md_.m;
        xb_.assign(static_cast<std::size_t>(m), Rational(0));
        for (int i = 0; i < m; ++i)
            for (int r = 0; r < m; ++r)
                if (sgn(md_.b[r]) != 0 && sgn(binv_[i][r]) != 0) xb_[i] += binv_[i][r] * md_.b[r];
        y_.assign(static_cast<std::size_t>(m), Rational(0));
        for (int i = 0; i < m; ++i) {
            const Rational& cb = md_.cost[basis_[i]];
            if (sgn(cb) == 0) continue;
            for (int r = 0; r < m; ++r)
                if (sgn(binv_[i][r]) != 0) y_[r] += cb * binv_[i][r];
        }
    }

    Rational exact_tau(int row, int col) const {
        Rational t = 0;
        for (const auto& [i, v] : cols_[static_cast<std::size_t>(col)]) {
            if (sgn(binv_[row][i]) == 0) continue;
            t += binv_[row][i] * v;
        }
        return t;
    }

    Rational exact_reduced(int col) const {
        Rational r = md_.cost[col];
        for (const auto& [i, v] : cols_[static_cast<std::size_t>(col)]) {
            if (sgn(y_[i]) == 0) continue;
            r -= y_[i] * v;
        }
        return r;
    }

    // Lowest-index admissible column for the leaving row; float filter
    // first, full exact scan when the filter is off or finds nothing.
    int dual_entering(int row, bool exact_scan) const {
        if (!exact_scan) {
            std::vector<long double> sigma(static_cast<std::size_t>(md_.m));
            for (int i = 0; i < md_.m; ++i)
                sigma[static_cast<std::size_t>(i)] = to_real(binv_[row][i]);
            for (int j = 0; j < md_.ncols; ++j) {
                if (in_basis_[static_cast<std::size_t>(j)] || md_.artificial[j]) continue;
                long double t = 0.0L;
                for (const auto& [i, d] : cols_f_[static_cast<std::size_t>(j)])
                    t += sigma[static_cast<std::size_t>(i)] * d;
                if (t < -1e-11L && sgn(exact_tau(row, j)) < 0) return j;
            }
        }
        for (int j = 0; j < md_.ncols; ++j) {
            if (in_basis_[static_cast<std::size_t>(j)] || md_.artificial[j]) continue;
            if (sgn(exact_tau(row, j)) < 0) return j;
        }
        return -1;
    }

    // Dantzig-style entering through the float filter; every candidate is
    // confirmed exactly and a failed filter falls back to the exact scan.
    int primal_entering() const {
        std::vector<long double> yf(static_cast<std::size_t>(md_.m));
        for (int i = 0; i < md_.m; ++i) yf[static_cast<std::size_t>(i)] = to_real(y_[i]);
        int best = -1;
        long double best_score = 1e-11L;
        for (int j = 0; j < md_.ncols; ++j) {
            if (in_basis_[static_cast<std::size_t>(j)] || md_.artificial[j]) continue;
            long double r = cost_f_[static_cast<std::size_t>(j)];
            for (const auto& [i, d] : cols_f_[static_cast<std::size_t>(j)])
                r -= yf[static_cast<std::size_t>(i)] * d;
            if (r > best_score) {
                best_score = r;
                best = j;
            }
        }
        if (best >= 0 && sgn(exact_reduced(best)) > 0) return best;
        return exact_entering_dantzig();
    }

    int exact_entering_dantzig() const {
        int best = -1;
        Rational best_red;
        for (int j = 0; j < md_.ncols; ++j) {
            if (in_basis_[static_cast<std::size_t>(j)] || md_.artificial[j]) continue;
            Rational r = exact_reduced(j);
            if (sgn(r) <= 0) continue;
            if (best < 0 || r > best_red) {
                best = j;
                best_red = std::move(r);
            }
        }
        return best;
    }

    int exact_entering_bland() const {
        for (int j = 0; j < md_.ncols; ++j) {
            if (in_basis_[static_cast<std::size_t>(j)] || md_.artificial[j]) continue;
            if (sgn(exact_reduced(j)) > 0) return j;
        }
        return -1;
    }

    void apply_pivot(int row, int col, const std::vector<Rational>& w) {
        const int m = md_.m;
        Rational p = w[row];
        for (int j = 0; j < m; ++j)
            if (sgn(binv_[row][j]) != 0) binv_[row][j] /= p;
        // incremental primal values: the classic min-ratio update
        Rational step = xb_[row] / p;
        for (int i = 0; i < m; ++i) {
            if (i == row || sgn(w[i]) == 0) continue;
            for (int j = 0; j < m; ++j)
                if (sgn(binv_[row][j]) != 0) binv_[i][j] -= w[i] * binv_[row][j];
            xb_[i] -= w[i] * step;
        }
        xb_[row] = step;
        // incremental duals: y += (c_enter - y.A_enter) * (new binv_ row)
        Rational delta = md_.cost[col];
        for (const auto& [i, v] : cols_[static_cast<std::size_t>(col)]) {
            if (sgn(y_[i]) == 0) continue;
            delta -= y_[i] * v;
        }
        if (sgn(delta) != 0)
            for (int j = 0; j < m; ++j)
                if (sgn(binv_[row][j]) != 0) y_[j] += delta * binv_[row][j];
        in_basis_[static_cast<std::size_t>(basis_[row])] = false;
        in_basis_[static_cast<std::size_t>(col)] = true;
        basis_[row] = col;
    }

    std::vector<Rational> basis_column(int col) const {
        const int m = md_.m;
        std::vector<Rational> w(static_cast<std::size_t>(m), Rational(0));
        for (const auto& [i, v] : cols_[static_cast<std::size_t>(col)])
            for (int r = 0; r < m; ++r)
                if (sgn(binv_[r][i]) != 0) w[r] += binv_[r][i] * v;
        return w;
    }

    bool primal_step(int col, bool& degenerate) {
        const int m = md_.m;
        auto w = basis_column(col);
        int leave = -1;
        for (int i = 0; i < m; ++i) {
            if (sgn(w[i]) <= 0) continue;
            if (leave < 0) {
                leave = i;
                continue;
            }
            int c = cmp(xb_[i] * w[leave], xb_[leave] * w[i]);
            if (c < 0 || (c == 0 && basis_[i] < basis_[leave])) leave = i;
        }
        if (leave < 0) return false;  // unbounded direction: distrust everything
        degenerate = sgn(xb_[leave]) == 0;
        apply_pivot(leave, col, w);
        return true;
    }

    std::optional<LpSolution> assemble() const {
        const int m = md_.m;
        for (int i = 0; i < m; ++i)
            if (md_.artificial[basis_[i]] && sgn(xb_[i]) != 0) return reject("artificial nonzero");
        LpSolution sol;
        sol.verdict = LpVerdict::Optimal;
        sol.point.assign(static_cast<std::size_t>(md_.nv), Rational(0));
        Rational value = 0;
        for (int i = 0; i < m; ++i) {
            if (basis_[i] < md_.nv) sol.point[static_cast<std::size_t>(basis_[i])] = xb_[i];
            value += md_.cost[basis_[i]] * xb_[i];
        }
        sol.value = obj_sign_ > 0 ? value : Rational(-value);
        sol.dual_values = unstandardize_duals(md_, y_, obj_sign_);
        last_solve_stats.guessed_basis = true;
        return sol;
    }
};

/// Turns a warm hint into a basis suggestion: hinted positive variables
/// become basic, the remaining rows contribute their slack (rows hinted as
/// tight go last), artificials pad the tail.
inline std::vector<int> basis_from_hint(const StdModel& md, const WarmHint& hint) {
    std::vector<int> suggestion;
    std::vector<bool> taken(static_cast<std::size_t>(md.ncols), false);
    for (int v : hint.positive_vars) {
        if (v < 0 || v >= md.nv || taken[static_cast<std::size_t>(v)]) continue;
        taken[static_cast<std::size_t>(v)] = true;
        suggestion.push_back(v);
    }
    std::vector<bool> tight(static_cast<std::size_t>(md.m), false);
    for (int i : hint.active_duals)
        if (i >= 0 && i < md.m) tight[static_cast<std::size_t>(i)] = true;
    auto add_slacks = [&](bool tight_rows) {
        for (int i = 0; i < md.m && static_cast<int>(suggestion.size()) < md.m; ++i) {
            if (tight[static_cast<std::size_t>(i)] != tight_rows) continue;
            int c = md.slack_col[i] >= 0 ? md.slack_col[i] : md.art_col[i];
            if (c < 0 || taken[static_cast<std::size_t>(c)]) continue;
            taken[static_cast<std::size_t>(c)] = true;
            suggestion.push_back(c);
        }
    };
    add_slacks(false);
    add_slacks(true);
    suggestion.resize(static_cast<std::size_t>(md.m), -1);
    return suggestion;
}

inline LpSolution solve_direct(const LinearProgram& lp, int obj_sign, const SolveOptions& opts) {
    StdModel model = make_std_model(lp, obj_sign);
    if (opts.warm && model.m >= 8) {
        BasisRepair repair(model, obj_sign);
        if (auto sol = repair.run(basis_from_hint(model, *opts.warm), 16)) return std::move(*sol);
    }
    if (opts.float_guess && model.m >= 36) {
        double mag_lo = 0.0, mag_hi = 0.0;
        for (const auto& row : model.rows)
            for (const auto& a : row) {
                if (sgn(a) == 0) continue;
                double v = std::fabs(a.get_d());
                if (mag_hi == 0.0) mag_lo = mag_hi = v;
                mag_lo = std::min(mag_lo, v);
                mag_hi = std::max(mag_hi, v);
            }
        const bool spread = mag_lo > 0.0 && mag_hi / mag_lo > 1e6;

        struct Attempt {
            unsigned seed;
            bool scaled;
            long budget;
        };
        std::vector<Attempt> attempts;
        if (spread) {
            attempts.push_back({1u, true, 1});
            attempts.push_back({1u, false, 1});
            attempts.push_back({2u, true, 8});
        } else {
            attempts.push_back({1u, false, 1});
            attempts.push_back({2u, false, 8});
        }

        BasisRepair repair(model, obj_sign);
        for (const auto& attempt : attempts) {
            FloatSimplex guesser(model, attempt.seed, attempt.scaled);
            auto basis = guesser.suggest_basis();
            if (!basis) continue;
            // resolve the unperturbed float program from the perturbed
            // basis; cleans up perturbation artifacts cheaply
            FloatSimplex refiner(model, 0, attempt.scaled, &*basis);
            if (auto refined = refiner.suggest_basis()) basis = std::move(refined);
            if (auto sol = repair.run(std::move(*basis), attempt.budget)) return std::move(*sol);
        }
    }
    DenseSimplex simplex(model, obj_sign, opts.rule);
    return simplex.run();
}

/// Solves the program through its dual (one dual variable per row, split
/// for = rows) and maps value, point and duals back. Pays off when the
/// program has far more rows than variables: simplex cost is driven by the
/// row count.
inline LpSolution solve_dualized(const LinearProgram& lp, int obj_sign, const SolveOptions& opts) {
    const int m = static_cast<int>(lp.constraints.size());
    const int nv = lp.num_vars;

    LinearProgram dual;
    dual.sense = Sense::Minimize;
    struct VarRef {
        int pos = -1;
        int neg = -1;
    };
    std::vector<VarRef> refs(m);
    int dv = 0;
    for (int i = 0; i < m; ++i) {
        switch (lp.constraints[i].rel) {
        case Relation::LessEqual: refs[i].pos = dv++; break;
        case Relation::GreaterEqual: refs[i].neg = dv++; break;
        case Relation::Equal:
            refs[i].pos = dv++;
            refs[i].neg = dv++;
            break;
        }
    }
    dual.num_vars = dv;
    dual.objective.assign(static_cast<std::size_t>(dv), Rational(0));
    for (int i = 0; i < m; ++i) {
        if (refs[i].pos >= 0) dual.objective[refs[i].pos] = lp.constraints[i].rhs;
        if (refs[i].neg >= 0) dual.objective[refs[i].neg] = -lp.constraints[i].rhs;
    }
    dual.constraints.assign(static_cast<std::size_t>(nv), LpConstraint{});
    for (int j = 0; j < nv; ++j) {
        auto& row = dual.constraints[j];
        row.coeffs.assign(static_cast<std::size_t>(dv), Rational(0));
        row.rel = Relation::GreaterEqual;
        row.rhs = obj_sign > 0 ? lp.objective[j] : Rational(-lp.objective[j]);
        for (int i = 0; i < m; ++i) {
            const auto& a = lp.constraints[i].coeffs[j];
            if (sgn(a) == 0) continue;
            if (refs[i].pos >= 0) row.coeffs[refs[i].pos] = a;
            if (refs[i].neg >= 0) row.coeffs[refs[i].neg] = -a;
        }
    }

    WarmHint dual_hint;
    SolveOptions dual_opts = opts;
    dual_opts.warm = nullptr;
    if (opts.warm) {
        // the dual sees the primal hint transposed
        for (int i : opts.warm->active_duals) {
            if (i < 0 || i >= m) continue;
            // split rows contribute one side only; a dependent pair would
            // make the suggested basis singular
            if (refs[i].pos >= 0)
                dual_hint.positive_vars.push_back(refs[i].pos);
            else if (refs[i].neg >= 0)
                dual_hint.positive_vars.push_back(refs[i].neg);
        }
        for (int j : opts.warm->positive_vars)
            if (j >= 0 && j < nv) dual_hint.active_duals.push_back(j);
        dual_opts.warm = &dual_hint;
    }
    LpSolution dsol = solve_direct(dual, /*obj_sign=*/-1, dual_opts);  // minimize
    LpSolution sol;
    switch (dsol.verdict) {
    case LpVerdict::Optimal: {
        sol.verdict = LpVerdict::Optimal;
        sol.value = obj_sign > 0 ? dsol.value : Rational(-dsol.value);
        sol.point = std::move(dsol.dual_values);  // duals of A^T y >= c are the primal x
        sol.dual_values.assign(static_cast<std::size_t>(m), Rational(0));
        for (int i = 0; i < m; ++i) {
            if (refs[i].pos >= 0) sol.dual_values[i] += dsol.point[refs[i].pos];
            if (refs[i].neg >= 0) sol.dual_values[i] -= dsol.point[refs[i].neg];
        }
        if (obj_sign < 0)
            for (auto& y : sol.dual_values) y = -y;
        break;
    }
    case LpVerdict::Unbounded: {
        // A dual ray is a Farkas certificate for the primal.
        sol.verdict = LpVerdict::Infeasible;
        sol.certificate.assign(static_cast<std::size_t>(m), Rational(0));
        for (int i = 0; i < m; ++i) {
            if (refs[i].pos >= 0) sol.certificate[i] += dsol.certificate[refs[i].pos];
            if (refs[i].neg >= 0) sol.certificate[i] -= dsol.certificate[refs[i].neg];
        }
        break;
    }
    case LpVerdict::Infeasible:
        // Dual infeasible: the primal is unbounded or infeasible. Rare in
        // practice; settle it on the primal directly.
        return solve_direct(lp, obj_sign, opts);
    }
    return sol;
}

} // namespace detail

/// Exact optimality check: primal feasibility, objective match, dual sign
/// pattern, strong duality, dual feasibility, complementary slackness.
/// Throws InternalError on any violation.
inline void verify_solution(const LinearProgram& lp, const LpSolution& sol) {
    if (sol.verdict != LpVerdict::Optimal) throw InternalError("verify_solution needs an Optimal solution");
    const auto m = lp.constraints.size();
    const auto nv = static_cast<std::size_t>(lp.num_vars);
    if (sol.point.size() != nv) throw InternalError("solution point has wrong length");
    if (sol.dual_values.size() != m) throw InternalError("solution duals have wrong length");
    const bool maximize = lp.sense == Sense::Maximize;

    for (std::size_t j = 0; j < nv; ++j)
        if (sgn(sol.point[j]) < 0) throw InternalError("negative variable in solution point");

    Rational primal = 0;
    for (std::size_t j = 0; j < nv; ++j) primal += lp.objective[j] * sol.point[j];
    if (primal != sol.value) throw InternalError("objective value mismatch");

    Rational dual_obj = 0;
    for (std::size_t i = 0; i < m; ++i) {
        const auto& row = lp.constraints[i];
        Rational lhs = 0;
        for (std::size_t j = 0; j < nv; ++j) lhs += row.coeffs[j] * sol.point[j];
        bool tight = lhs == row.rhs;
        switch (row.rel) {
        case Relation::LessEqual:
            if (lhs > row.rhs) throw InternalError("<= constraint violated");
            if ((maximize ? sgn(sol.dual_values[i]) < 0 : sgn(sol.dual_values[i]) > 0))
                throw InternalError("dual sign violated on <= row");
            break;
        case Relation::GreaterEqual:
            if (lhs < row.rhs) throw InternalError(">= constraint violated");
            if ((maximize ? sgn(sol.dual_values[i]) > 0 : sgn(sol.dual_values[i]) < 0))
                throw InternalError("dual sign violated on >= row");
            break;
        case Relation::Equal:
            if (!tight) throw InternalError("= constraint violated");
            break;
        }
        if (!tight && sgn(sol.dual_values[i]) != 0)
            throw InternalError("complementary slackness violated on a slack row");
        dual_obj += row.rhs * sol.dual_values[i];
    }
    if (dual_obj != sol.value) throw InternalError("strong duality violated");

    for (std::size_t j = 0; j < nv; ++j) {
        Rational reduced = -lp.objective[j];
        for (std::size_t i = 0; i < m; ++i) reduced += lp.constraints[i].coeffs[j] * sol.dual_values[i];
        if (maximize ? sgn(reduced) < 0 : sgn(reduced) > 0)
            throw InternalError("dual feasibility violated");
        if (sgn(sol.point[j]) > 0 && sgn(reduced) != 0)
            throw InternalError("complementary slackness violated on a positive variable");
    }
}

/// Exact check of an Infeasible/Unbounded certificate. Throws InternalError.
inline void verify_certificate(const LinearProgram& lp, const LpSolution& sol) {
    const auto m = lp.constraints.size();
    const auto nv = static_cast<std::size_t>(lp.num_vars);
    if (sol.verdict == LpVerdict::Infeasible) {
        if (sol.certificate.size() != m) throw InternalError("Farkas certificate has wrong length");
        Rational bty = 0;
        for (std::size_t i = 0; i < m; ++i) {
            const auto& y = sol.certificate[i];
            if (lp.constraints[i].rel == Relation::LessEqual && sgn(y) < 0)
                throw InternalError("Farkas sign violated on <= row");
            if (lp.constraints[i].rel == Relation::GreaterEqual && sgn(y) > 0)
                throw InternalError("Farkas sign violated on >= row");
            bty += lp.constraints[i].rhs * y;
        }
        if (sgn(bty) >= 0) throw InternalError("Farkas certificate does not separate");
        for (std::size_t j = 0; j < nv; ++j) {
            Rational aty = 0;
            for (std::size_t i = 0; i < m; ++i) aty += lp.constraints[i].coeffs[j] * sol.certificate[i];
            if (sgn(aty) < 0) throw InternalError("Farkas certificate violates A^T y >= 0");
        }
    } else if (sol.verdict == LpVerdict::Unbounded) {
        if (sol.certificate.size() != nv) throw InternalError("ray certificate has wrong length");
        Rational cd = 0;
        for (std::size_t j = 0; j < nv; ++j) {
            if (sgn(sol.certificate[j]) < 0) throw InternalError("ray has a negative component");
            cd += lp.objective[j] * sol.certificate[j];
        }
        if (lp.sense == Sense::Maximize ? sgn(cd) <= 0 : sgn(cd) >= 0)
            throw InternalError("ray does not improve the objective");
        for (std::size_t i = 0; i < m; ++i) {
            Rational ad = 0;
            for (std::size_t j = 0; j < nv; ++j) ad += lp.constraints[i].coeffs[j] * sol.certificate[j];
            if (lp.constraints[i].rel == Relation::LessEqual && sgn(ad) > 0)
                throw InternalError("ray leaves the feasible cone on a <= row");
            if (lp.constraints[i].rel == Relation::GreaterEqual && sgn(ad) < 0)
                throw InternalError("ray leaves the feasible cone on a >= row");
            if (lp.constraints[i].rel == Relation::Equal && sgn(ad) != 0)
                throw InternalError("ray leaves the feasible cone on a = row");
        }
    } else {
        throw InternalError("verify_certificate needs an Infeasible or Unbounded solution");
    }
}

/// Exact rational simplex solve. Deterministic: pivoting and the optional
/// float-guided basis guess are reproducible, so repeat solves return the
/// identical vertex. Every verdict is re-verified exactly against the input
/// before it is handed back.
inline LpSolution solve(const LinearProgram& lp, SolveOptions opts = {}) {
    lp.validate();
    detail::last_solve_stats = detail::SolveStats{};
    const int obj_sign = lp.sense == Sense::Maximize ? 1 : -1;
    const auto m = static_cast<long>(lp.constraints.size());

    bool dualize = opts.path == SolveOptions::Path::Dualize;
    if (opts.path == SolveOptions::Path::Auto) dualize = m > 2L * lp.num_vars + 16;

    LpSolution sol = dualize ? detail::solve_dualized(lp, obj_sign, opts)
                             : detail::solve_direct(lp, obj_sign, opts);
    if (sol.verdict == LpVerdict::Optimal)
        verify_solution(lp, sol);
    else
        verify_certificate(lp, sol);
    return sol;
}

} // namespace spoa
