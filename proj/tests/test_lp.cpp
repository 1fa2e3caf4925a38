#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <optional>
#include <random>
#include <vector>

#include "spoa/lp.hpp"

using namespace spoa;

namespace {

// ---- independent oracle: exhaustive basic-solution enumeration ----------
//
// Standardizes to A z = b with slack columns, row-reduces to an independent
// system, then enumerates every candidate basis. Exact and complete for the
// small instances used here: the optimum of a feasible bounded LP over
// z >= 0 is attained at some basic solution.

struct StandardForm {
    std::vector<std::vector<Rational>> rows;
    std::vector<Rational> rhs;
    std::vector<Rational> cost;  // objective in max orientation
    int cols = 0;
};

StandardForm standardize(const LinearProgram& lp) {
    StandardForm sf;
    const int m = static_cast<int>(lp.constraints.size());
    int slacks = 0;
    for (const auto& c : lp.constraints)
        if (c.rel != Relation::Equal) ++slacks;
    sf.cols = lp.num_vars + slacks;
    sf.cost.assign(sf.cols, Rational(0));
    for (int j = 0; j < lp.num_vars; ++j)
        sf.cost[j] = lp.sense == Sense::Maximize ? lp.objective[j] : Rational(-lp.objective[j]);
    int next = lp.num_vars;
    for (int i = 0; i < m; ++i) {
        std::vector<Rational> row(sf.cols, Rational(0));
        for (int j = 0; j < lp.num_vars; ++j) row[j] = lp.constraints[i].coeffs[j];
        if (lp.constraints[i].rel == Relation::LessEqual)
            row[next++] = 1;
        else if (lp.constraints[i].rel == Relation::GreaterEqual)
            row[next++] = -1;
        sf.rows.push_back(std::move(row));
        sf.rhs.push_back(lp.constraints[i].rhs);
    }
    return sf;
}

// Row-reduces [A | b] in place; returns nullopt when the equations alone are
// inconsistent (infeasible regardless of signs), otherwise the independent
// rows.
std::optional<StandardForm> row_reduce(StandardForm sf) {
    int rank = 0;
    const int m = static_cast<int>(sf.rows.size());
    for (int col = 0; col < sf.cols && rank < m; ++col) {
        int pivot = -1;
        for (int i = rank; i < m; ++i)
            if (sgn(sf.rows[i][col]) != 0) {
                pivot = i;
                break;
            }
        if (pivot < 0) continue;
        std::swap(sf.rows[pivot], sf.rows[rank]);
        std::swap(sf.rhs[pivot], sf.rhs[rank]);
        Rational p = sf.rows[rank][col];
        for (auto& v : sf.rows[rank]) v /= p;
        sf.rhs[rank] /= p;
        for (int i = 0; i < m; ++i) {
            if (i == rank) continue;
            Rational f = sf.rows[i][col];
            if (sgn(f) == 0) continue;
            for (int j = 0; j < sf.cols; ++j) sf.rows[i][j] -= f * sf.rows[rank][j];
            sf.rhs[i] -= f * sf.rhs[rank];
        }
        ++rank;
    }
    for (int i = rank; i < m; ++i)
        if (sgn(sf.rhs[i]) != 0) return std::nullopt;
    sf.rows.resize(rank);
    sf.rhs.resize(rank);
    return sf;
}

std::optional<std::vector<Rational>> solve_square(const std::vector<std::vector<Rational>>& a,
                                                  std::vector<Rational> b) {
    const int n = static_cast<int>(b.size());
    auto m = a;
    std::vector<int> perm(n);
    for (int i = 0; i < n; ++i) perm[i] = i;
    for (int col = 0; col < n; ++col) {
        int pivot = -1;
        for (int i = col; i < n; ++i)
            if (sgn(m[i][col]) != 0) {
                pivot = i;
                break;
            }
        if (pivot < 0) return std::nullopt;
        std::swap(m[pivot], m[col]);
        std::swap(b[pivot], b[col]);
        for (int i = 0; i < n; ++i) {
            if (i == col) continue;
            Rational f = m[i][col] / m[col][col];
            if (sgn(f) == 0) continue;
            for (int j = col; j < n; ++j) m[i][j] -= f * m[col][j];
            b[i] -= f * b[col];
        }
    }
    std::vector<Rational> x(n);
    for (int i = 0; i < n; ++i) x[i] = b[i] / m[i][i];
    return x;
}

struct OracleResult {
    bool feasible_vertex = false;
    Rational best;  // max orientation
};

OracleResult enumerate_vertices(const LinearProgram& lp) {
    auto reduced = row_reduce(standardize(lp));
    OracleResult out;
    if (!reduced) return out;
    const int r = static_cast<int>(reduced->rows.size());
    const int cols = reduced->cols;

    std::vector<int> pick(r);
    auto consider = [&](const std::vector<int>& subset) {
        std::vector<std::vector<Rational>> sq(r, std::vector<Rational>(r));
        for (int i = 0; i < r; ++i)
            for (int j = 0; j < r; ++j) sq[i][j] = reduced->rows[i][subset[j]];
        auto z = solve_square(sq, reduced->rhs);
        if (!z) return;
        for (const auto& v : *z)
            if (sgn(v) < 0) return;
        Rational obj = 0;
        for (int j = 0; j < r; ++j) obj += reduced->cost[subset[j]] * (*z)[j];
        if (!out.feasible_vertex || obj > out.best) {
            out.feasible_vertex = true;
            out.best = obj;
        }
    };
    if (r == 0) {
        out.feasible_vertex = true;
        out.best = 0;
        return out;
    }
    // all subsets of size r out of cols
    std::vector<int> subset(r);
    auto recurse = [&](auto&& self, int start, int depth) -> void {
        if (depth == r) {
            consider(subset);
            return;
        }
        for (int c = start; c < cols; ++c) {
            subset[depth] = c;
            self(self, c + 1, depth + 1);
        }
    };
    recurse(recurse, 0, 0);
    return out;
}

Rational oriented(const LinearProgram& lp, const Rational& value) {
    return lp.sense == Sense::Maximize ? value : Rational(-value);
}

LinearProgram random_lp(std::mt19937& rng) {
    std::uniform_int_distribution<int> nv_dist(1, 4), m_dist(0, 5), num_dist(-3, 3), den_dist(1, 2),
        rel_dist(0, 2), sense_dist(0, 1);
    LinearProgram lp;
    lp.num_vars = nv_dist(rng);
    lp.sense = sense_dist(rng) ? Sense::Maximize : Sense::Minimize;
    for (int j = 0; j < lp.num_vars; ++j) lp.objective.emplace_back(num_dist(rng), den_dist(rng));
    int m = m_dist(rng);
    for (int i = 0; i < m; ++i) {
        LpConstraint c;
        for (int j = 0; j < lp.num_vars; ++j) c.coeffs.emplace_back(num_dist(rng), den_dist(rng));
        c.rel = static_cast<Relation>(rel_dist(rng));
        c.rhs = Rational(num_dist(rng), den_dist(rng));
        lp.constraints.push_back(std::move(c));
    }
    for (auto& c : lp.objective) c.canonicalize();
    for (auto& c : lp.constraints) {
        for (auto& v : c.coeffs) v.canonicalize();
        c.rhs.canonicalize();
    }
    return lp;
}

LinearProgram max_lp(std::vector<Rational> obj, std::vector<LpConstraint> cons) {
    LinearProgram lp;
    lp.num_vars = static_cast<int>(obj.size());
    lp.sense = Sense::Maximize;
    lp.objective = std::move(obj);
    lp.constraints = std::move(cons);
    return lp;
}

} // namespace

TEST_CASE("bounded single-variable program") {
    auto lp = max_lp({Rational(1)}, {LpConstraint{{Rational(1)}, Relation::LessEqual, Rational(3)}});
    auto sol = solve(lp);
    REQUIRE(sol.verdict == LpVerdict::Optimal);
    CHECK(sol.value == 3);
    CHECK(sol.point == std::vector<Rational>{Rational(3)});
    CHECK(sol.dual_values == std::vector<Rational>{Rational(1)});
}

TEST_CASE("unbounded program carries a verified ray") {
    auto lp = max_lp({Rational(1)}, {});
    auto sol = solve(lp);
    REQUIRE(sol.verdict == LpVerdict::Unbounded);
    REQUIRE(sol.certificate.size() == 1);
    CHECK(sol.certificate[0] > 0);
}

TEST_CASE("infeasible program carries a Farkas certificate") {
    auto lp = max_lp({Rational(1), Rational(1)},
                     {LpConstraint{{Rational(1), Rational(1)}, Relation::Equal, Rational(1)},
                      LpConstraint{{Rational(1), Rational(0)}, Relation::GreaterEqual, Rational(2)}});
    auto sol = solve(lp);
    REQUIRE(sol.verdict == LpVerdict::Infeasible);
    CHECK(sol.certificate.size() == 2);
}

TEST_CASE("Bland's rule terminates on the classic cycling instance") {
    auto lp = max_lp({Rational(3, 4), Rational(-150), Rational(1, 50), Rational(-6)},
                     {LpConstraint{{Rational(1, 4), Rational(-60), Rational(-1, 25), Rational(9)},
                                   Relation::LessEqual, Rational(0)},
                      LpConstraint{{Rational(1, 2), Rational(-90), Rational(-1, 50), Rational(3)},
                                   Relation::LessEqual, Rational(0)},
                      LpConstraint{{Rational(0), Rational(0), Rational(1), Rational(0)},
                                   Relation::LessEqual, Rational(1)}});
    auto sol = solve(lp);
    REQUIRE(sol.verdict == LpVerdict::Optimal);
    auto oracle = enumerate_vertices(lp);
    REQUIRE(oracle.feasible_vertex);
    CHECK(sol.value == oracle.best);
    CHECK(sol.value == Rational(1, 20));
}

TEST_CASE("minimization duals follow the flipped sign convention") {
    LinearProgram lp;
    lp.num_vars = 1;
    lp.sense = Sense::Minimize;
    lp.objective = {Rational(1)};
    lp.constraints = {LpConstraint{{Rational(1)}, Relation::GreaterEqual, Rational(5)}};
    auto sol = solve(lp);
    REQUIRE(sol.verdict == LpVerdict::Optimal);
    CHECK(sol.value == 5);
    CHECK(sol.dual_values == std::vector<Rational>{Rational(1)});
}

TEST_CASE("malformed programs are rejected") {
    LinearProgram lp;
    lp.num_vars = 2;
    lp.objective = {Rational(1)};
    CHECK_THROWS_AS(solve(lp), ValidationError);
    lp.objective = {Rational(1), Rational(1)};
    lp.constraints = {LpConstraint{{Rational(1)}, Relation::LessEqual, Rational(1)}};
    CHECK_THROWS_AS(solve(lp), ValidationError);
    LinearProgram empty;
    CHECK_THROWS_AS(solve(empty), ValidationError);
}

TEST_CASE("solver agrees with the vertex oracle on random programs") {
    std::mt19937 rng(20240817);
    int optimal = 0, infeasible = 0, unbounded = 0;
    for (int iter = 0; iter < 250; ++iter) {
        auto lp = random_lp(rng);
        auto sol = solve(lp);  // internally verified
        auto oracle = enumerate_vertices(lp);
        switch (sol.verdict) {
        case LpVerdict::Optimal:
            ++optimal;
            REQUIRE(oracle.feasible_vertex);
            CHECK(oriented(lp, sol.value) == oracle.best);
            break;
        case LpVerdict::Infeasible:
            ++infeasible;
            CHECK_FALSE(oracle.feasible_vertex);
            break;
        case LpVerdict::Unbounded:
            ++unbounded;
            CHECK(oracle.feasible_vertex);
            break;
        }

        // both solve paths agree
        auto dual_sol = solve(lp, SolveOptions{SolveOptions::Path::Dualize});
        CHECK(dual_sol.verdict == sol.verdict);
        if (sol.verdict == LpVerdict::Optimal) CHECK(dual_sol.value == sol.value);

        // row order does not change the optimum
        auto permuted = lp;
        std::shuffle(permuted.constraints.begin(), permuted.constraints.end(), rng);
        auto perm_sol = solve(permuted);
        CHECK(perm_sol.verdict == sol.verdict);
        if (sol.verdict == LpVerdict::Optimal) CHECK(perm_sol.value == sol.value);
    }
    // the generator must exercise every verdict
    CHECK(optimal > 20);
    CHECK(infeasible > 10);
    CHECK(unbounded > 10);
}

TEST_CASE("repeat solves return the identical vertex") {
    std::mt19937 rng(7);
    for (int iter = 0; iter < 40; ++iter) {
        auto lp = random_lp(rng);
        auto a = solve(lp);
        auto b = solve(lp);
        CHECK(a.verdict == b.verdict);
        CHECK(a.point == b.point);
        CHECK(a.dual_values == b.dual_values);
        CHECK(a.certificate == b.certificate);
    }
}
