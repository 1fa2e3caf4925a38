#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <vector>

#include "spoa/worstcase.hpp"

using namespace spoa;

namespace {

LabelVector mass_vector(int n, std::vector<std::pair<Label, Rational>> entries) {
    LabelVector theta{make_index_set(n), {}};
    theta.entries.assign(theta.index_set.size(), Rational(0));
    for (auto& [label, value] : entries) theta.entries[theta.index_set.index_of(label)] = value;
    return theta;
}

} // namespace

TEST_CASE("ring spec counts") {
    auto theta = mass_vector(3, {{Label{1, 0, 1}, Rational(1)}, {Label{0, 0, 1}, Rational(1)}});
    auto spec = make_ring_spec(3, theta);
    CHECK(spec.support.size() == 2);
    CHECK(spec.ring_count() == 12);      // 3! per supported label
    CHECK(spec.resource_count() == 36);  // n per ring
}

TEST_CASE("construction from the solved mass vector attains the bound at n=2") {
    auto w = indicator_welfare(2);
    auto report = spoa_bound(2, w, 1);
    auto wc = construct_worst_case(2, w, 1, *report.theta);

    Rational eq = welfare(wc.game, wc.equilibrium);
    Rational opt = welfare(wc.game, wc.optimum);
    CHECK(eq / opt == Rational(1, 2));

    // welfare identities of the ring family
    Rational eq_expected = 0, opt_expected = 0;
    const Rational copies = Rational(Integer(2) * factorial(2));
    for (const auto& [label, mass] : wc.spec.support) {
        eq_expected += copies * mass * w(label.e + label.x);
        opt_expected += copies * mass * w(label.o + label.x);
    }
    CHECK(eq == eq_expected);
    CHECK(opt == opt_expected);

    // every player has exactly two actions
    for (int p = 0; p < 2; ++p) CHECK(wc.game.action_count(p) == 2);

    CHECK(is_k_strong_ne(wc.game, wc.equilibrium, 1));
}

TEST_CASE("hand-built mass vector reproduces the one-ring example scaled up") {
    auto w = indicator_welfare(3);
    auto theta = mass_vector(3, {{Label{1, 0, 1}, Rational(1)}, {Label{0, 0, 1}, Rational(1)}});
    auto wc = construct_worst_case(3, w, 1, theta);
    CHECK(wc.game.resource_count() == 36);

    Rational eq = welfare(wc.game, wc.equilibrium);
    Rational opt = welfare(wc.game, wc.optimum);
    CHECK(eq / opt == Rational(1, 2));
    CHECK(eq == 18);   // 3 * 3! * (w(1) + w(0)) per unit mass
    CHECK(opt == 36);

    // labeling the constructed pair recovers n * n! copies of the mass
    auto recovered = label_resources(wc.game, wc.equilibrium, wc.optimum);
    const Rational copies = Rational(Integer(3) * factorial(3));
    for (std::size_t i = 0; i < recovered.entries.size(); ++i)
        CHECK(recovered.entries[i] == copies * theta.entries[i]);
}

TEST_CASE("masses on shared-only labels collapse both allocations") {
    auto w = indicator_welfare(3);
    auto theta = mass_vector(3, {{Label{0, 2, 0}, Rational(1)}});
    // normalization: theta * w(2) must be 1, so scale accordingly
    theta.entries[theta.index_set.index_of(Label{0, 2, 0})] = 1 / w(2);
    auto wc = construct_worst_case(3, w, 1, theta);
    for (int p = 0; p < 3; ++p)
        CHECK(wc.game.action(p, 0) == wc.game.action(p, 1));
    CHECK(welfare(wc.game, wc.equilibrium) == welfare(wc.game, wc.optimum));
}

TEST_CASE("construction guards") {
    auto w7 = indicator_welfare(7);
    auto theta7 = mass_vector(7, {{Label{0, 1, 0}, Rational(1)}});
    try {
        construct_worst_case(7, w7, 1, theta7);
        FAIL_CHECK("expected a size guard error");
    } catch (const SizeGuardError& e) {
        CHECK(std::string(e.what()).find("35280") != std::string::npos);
    }

    // infeasible masses are rejected: zero vector misses the normalization
    auto w3 = indicator_welfare(3);
    auto zero = mass_vector(3, {});
    CHECK_THROWS_AS(construct_worst_case(3, w3, 1, zero), ValidationError);
    // negative entries are rejected
    auto negative = mass_vector(3, {{Label{0, 1, 0}, Rational(-1)}});
    CHECK_THROWS_AS(construct_worst_case(3, w3, 1, negative), ValidationError);
    // violating the coalition inequality is rejected
    auto unbalanced = mass_vector(3, {{Label{0, 0, 1}, Rational(5)}, {Label{0, 1, 0}, Rational(1)}});
    CHECK_THROWS_AS(construct_worst_case(3, w3, 1, unbalanced), ValidationError);
}

TEST_CASE("tightness certificates") {
    auto c21 = certify_tightness(2, indicator_welfare(2), 1);
    CHECK(c21.constructed_ratio == Rational(1, 2));
    CHECK(c21.constructed_ratio * c21.lp_value == 1);
    CHECK(c21.equilibrium_checked);
    CHECK(c21.equilibrium_verified);

    auto c31 = certify_tightness(3, indicator_welfare(3), 1);
    CHECK(c31.constructed_ratio == Rational(1, 2));
    CHECK(c31.equilibrium_verified);

    auto c32 = certify_tightness(3, indicator_welfare(3), 2);
    CHECK(c32.constructed_ratio * c32.lp_value == 1);
    CHECK(c32.equilibrium_verified);

    auto c33 = certify_tightness(3, indicator_welfare(3), 3);
    CHECK(c33.constructed_ratio == 1);
    CHECK(c33.equilibrium_verified);
}

TEST_CASE("deviations of equal shape have equal welfare on the ring family") {
    auto w = indicator_welfare(3);
    auto report = spoa_bound(3, w, 1);
    auto wc = construct_worst_case(3, w, 1, *report.theta);
    // two coalitions of the same size deviating to their optimum blocks
    JointAction dev_a = wc.equilibrium, dev_b = wc.equilibrium;
    dev_a[0] = 1;
    dev_a[1] = 1;
    dev_b[1] = 1;
    dev_b[2] = 1;
    CHECK(welfare(wc.game, dev_a) == welfare(wc.game, dev_b));
}
