#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>
#include <vector>

#include "spoa/bounds.hpp"

using namespace spoa;

namespace {

WelfareCurve random_welfare(int n, std::mt19937& rng) {
    std::uniform_int_distribution<int> num(1, 5), den(1, 4);
    std::vector<Rational> v{Rational(0)};
    for (int j = 1; j <= n; ++j) v.emplace_back(num(rng), den(rng));
    for (auto& r : v) r.canonicalize();
    return make_welfare(n, std::move(v));
}

// Gairing's closed form for the optimal covering rule at k = 1:
//   1 - 1 / ( 1/((n-1)(n-1)!) + sum_{j=0}^{n-1} 1/j! )
Rational covering_design_closed_form(int n) {
    Rational s(1);
    s /= Rational((n - 1) * factorial(static_cast<unsigned>(n - 1)));
    for (int j = 0; j <= n - 1; ++j) s += Rational(1) / Rational(factorial(static_cast<unsigned>(j)));
    return 1 - 1 / s;
}

} // namespace

TEST_CASE("primal program shape") {
    auto lp1 = build_primal(1, indicator_welfare(1), 1);
    CHECK(lp1.num_vars == 3);
    REQUIRE(lp1.constraints.size() == 2);
    CHECK(lp1.constraints[0].rel == Relation::GreaterEqual);
    CHECK(lp1.constraints[0].rhs == 0);
    CHECK(lp1.constraints[1].rel == Relation::Equal);
    CHECK(lp1.constraints[1].rhs == 1);

    auto lp20 = build_primal(20, indicator_welfare(20), 5);
    CHECK(lp20.num_vars == 1770);
    CHECK(lp20.constraints.size() == 6);

    CHECK_THROWS_AS(build_primal(4, indicator_welfare(4), 0), ValidationError);
    CHECK_THROWS_AS(build_primal(4, indicator_welfare(4), 5), ValidationError);
    CHECK_THROWS_AS(build_primal(4, indicator_welfare(3), 2), ValidationError);
}

TEST_CASE("hand-expanded coefficient for n=2 covering") {
    auto w = indicator_welfare(2);
    auto lp = build_primal(2, w, 1);
    auto set = make_index_set(2);
    CHECK(lp.constraints[0].coeffs[set.index_of(Label{1, 0, 1})] == 1);
    CHECK(primal_row_coefficient(2, 1, Label{1, 0, 1}, w) == 1);
    // remaining hand-checked row entries
    CHECK(lp.constraints[0].coeffs[set.index_of(Label{0, 0, 1})] == -1);
    CHECK(lp.constraints[0].coeffs[set.index_of(Label{0, 1, 0})] == 0);
    CHECK(lp.constraints[0].coeffs[set.index_of(Label{1, 0, 0})] == 1);
    CHECK(lp.constraints[0].coeffs[set.index_of(Label{0, 0, 2})] == -2);
}

TEST_CASE("covering bound values") {
    auto two = spoa_bound(2, indicator_welfare(2), 1);
    CHECK(two.primal_value == 2);
    CHECK(two.spoa == Rational(1, 2));

    CHECK(spoa_bound(20, indicator_welfare(20), 1).spoa == Rational(1, 2));
    CHECK(spoa_bound(5, indicator_welfare(5), 5).spoa == 1);
}

TEST_CASE("the returned theta is feasible and normalized") {
    for (auto [n, k] : {std::pair{2, 1}, {3, 1}, {3, 2}, {6, 3}}) {
        auto w = indicator_welfare(n);
        auto report = spoa_bound(n, w, k);
        REQUIRE(report.theta.has_value());
        CHECK(report.spoa * report.primal_value == 1);

        auto lp = build_primal(n, w, k);
        const auto& theta = report.theta->entries;
        REQUIRE(theta.size() == static_cast<std::size_t>(lp.num_vars));
        for (const auto& t : theta) CHECK(sgn(t) >= 0);
        for (const auto& row : lp.constraints) {
            Rational lhs = 0;
            for (std::size_t j = 0; j < theta.size(); ++j) lhs += row.coeffs[j] * theta[j];
            if (row.rel == Relation::Equal)
                CHECK(lhs == row.rhs);
            else
                CHECK(lhs >= row.rhs);
        }
    }
}

TEST_CASE("separable welfare has no efficiency gap") {
    CHECK(spoa_bound(3, identity_welfare(3), 1).spoa == 1);
    for (int k = 1; k <= 6; ++k) CHECK(spoa_bound(6, identity_welfare(6), k).spoa == 1);
}

TEST_CASE("bound is monotone in the coalition size and exact at k=n") {
    std::mt19937 rng(99);
    for (int n : {4, 8}) {
        auto w = indicator_welfare(n);
        Rational prev;
        for (int k = 1; k <= n; ++k) {
            auto r = spoa_bound(n, w, k);
            CHECK(r.primal_value >= 1);
            if (k > 1) CHECK(r.spoa >= prev);
            prev = r.spoa;
        }
        CHECK(prev == 1);
    }
    for (int n = 2; n <= 6; ++n) {
        CHECK(spoa_bound(n, indicator_welfare(n), n).primal_value == 1);
        CHECK(spoa_bound(n, identity_welfare(n), n).primal_value == 1);
        CHECK(spoa_bound(n, random_welfare(n, rng), n).primal_value == 1);
    }
}

TEST_CASE("design program shape and the mu >= 1 row") {
    auto lp = build_design(20, indicator_welfare(20), 3);
    CHECK(lp.num_vars == 1 + 3 * 20);
    CHECK(lp.constraints.size() == 1770);
    CHECK(lp.sense == Sense::Minimize);

    // n=2, k=1: the (0,1,0) row reduces to w(1) - mu w(1) <= 0
    auto lp2 = build_design(2, indicator_welfare(2), 1);
    auto set = make_index_set(2);
    const auto& row = lp2.constraints[set.index_of(Label{0, 1, 0})];
    CHECK(row.coeffs[0] == -1);
    CHECK(row.coeffs[1] == 0);
    CHECK(row.coeffs[2] == 0);
    CHECK(row.rhs == -1);

    CHECK_THROWS_AS(build_design(4, indicator_welfare(4), 0), ValidationError);
    CHECK_THROWS_AS(build_design(4, indicator_welfare(4), 5), ValidationError);
}

TEST_CASE("design bound endpoints") {
    auto one = design_bound(1, indicator_welfare(1), 1);
    CHECK(one.primal_value == 1);
    CHECK(one.spoa == 1);
    CHECK(one.upper_bound_only);
    REQUIRE(one.utility_rules.size() == 1);
    CHECK(one.utility_rules[0](0) == 0);

    auto full = design_bound(5, indicator_welfare(5), 5);
    CHECK(full.spoa == 1);
    CHECK(full.utility_rules.size() == 5);
}

TEST_CASE("design k=1 covering matches the closed form") {
    for (int n : {3, 6}) {
        auto r = design_bound(n, indicator_welfare(n), 1);
        CHECK(r.spoa == covering_design_closed_form(n));
    }
}

TEST_CASE("designed utilities never do worse than welfare sharing") {
    std::mt19937 rng(7);
    for (int n : {4, 6}) {
        std::vector<WelfareCurve> curves;
        curves.push_back(indicator_welfare(n));
        curves.push_back(identity_welfare(n));
        curves.push_back(random_welfare(n, rng));
        for (const auto& w : curves)
            for (int k = 1; k <= n; ++k) {
                auto p = spoa_bound(n, w, k);
                auto q = design_bound(n, w, k);
                CHECK(q.primal_value >= 1);
                CHECK(q.primal_value <= p.primal_value);
                CHECK(q.spoa >= p.spoa);
            }
    }
}

TEST_CASE("welfare-proportional rules recover the sharing bound") {
    std::mt19937 rng(23);
    for (int n = 2; n <= 5; ++n) {
        auto curves = {indicator_welfare(n), random_welfare(n, rng)};
        for (const auto& w : curves)
            for (int k = 1; k <= n; ++k)
                CHECK(restricted_design_value(n, w, k) == spoa_bound(n, w, k).primal_value);
    }
}

TEST_CASE("curve table") {
    auto one = spoa_curve(1, indicator_welfare(1), {1}, true);
    REQUIRE(one.rows.size() == 1);
    CHECK(one.rows[0].k == 1);
    CHECK(one.rows[0].spoa == 1);
    REQUIRE(one.rows[0].design_spoa.has_value());
    CHECK(*one.rows[0].design_spoa == 1);

    auto three = spoa_curve(3, indicator_welfare(3), {3, 1, 2, 2}, false);
    REQUIRE(three.rows.size() == 3);
    CHECK(three.rows[0].k == 1);
    CHECK(three.rows[0].spoa == Rational(1, 2));
    CHECK(three.rows[1].k == 2);
    CHECK(three.rows[1].spoa >= Rational(1, 2));
    CHECK(three.rows[1].spoa <= 1);
    CHECK(three.rows[2].spoa == 1);
    CHECK_FALSE(three.rows[0].design_spoa.has_value());

    CHECK_THROWS_AS(spoa_curve(3, indicator_welfare(3), {}, false), ValidationError);
    CHECK_THROWS_AS(spoa_curve(3, indicator_welfare(3), {0, 1}, false), ValidationError);
    CHECK_THROWS_AS(spoa_curve(3, indicator_welfare(3), {4}, false), ValidationError);
}

TEST_CASE("a zero interior welfare value is rejected up front and unbounded programs are reported") {
    CHECK_THROWS_AS(make_welfare(3, {Rational(0), Rational(1), Rational(0), Rational(1)}),
                    ValidationError);
    // invariant-violating curve built by hand: w(1) = 0 makes (P) unbounded
    WelfareCurve bad{3, {Rational(0), Rational(0), Rational(0), Rational(1)}};
    CHECK_THROWS_AS(spoa_bound(3, bad, 1), ValidationError);
}
