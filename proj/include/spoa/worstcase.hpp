#pragma once

#include <algorithm>
#include <numeric>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "spoa/bounds.hpp"
#include "spoa/combinatorics.hpp"
#include "spoa/errors.hpp"
#include "spoa/games.hpp"
#include "spoa/rational.hpp"
#include "spoa/welfare.hpp"

namespace spoa {

/// Construction sizes explode factorially; everything above this player
/// count is refused up front.
inline constexpr int kMaxConstructionPlayers = 6;
/// Exhaustive equilibrium verification of a constructed game is practical
/// only for very small instances.
inline constexpr int kMaxVerificationPlayers = 3;

/// Shape summary of the ring family built from a mass vector: one ring of
/// n resources per (supported label, player ordering) pair, every resource
/// carrying that label's mass as its value.
struct RingGameSpec {
    int n = 0;
    std::vector<std::pair<Label, Rational>> support;

    Integer ring_count() const {
        return factorial(static_cast<unsigned>(n)) * Integer(static_cast<unsigned long>(support.size()));
    }
    Integer resource_count() const { return Integer(n) * ring_count(); }
};

inline RingGameSpec make_ring_spec(int n, const LabelVector& theta) {
    if (theta.index_set.n != n)
        throw ValidationError("mass vector indexed for n=" + std::to_string(theta.index_set.n) +
                              ", expected n=" + std::to_string(n));
    if (theta.entries.size() != theta.index_set.size())
        throw ValidationError("mass vector length does not match its index set");
    RingGameSpec spec;
    spec.n = n;
    for (std::size_t i = 0; i < theta.entries.size(); ++i) {
        if (sgn(theta.entries[i]) < 0) throw ValidationError("mass vector entries must be nonnegative");
        if (sgn(theta.entries[i]) > 0)
            spec.support.emplace_back(theta.index_set.labels[i], theta.entries[i]);
    }
    return spec;
}

struct WorstCaseGame {
    ResourceGame game;
    JointAction equilibrium;  // every player's action 0
    JointAction optimum;      // every player's action 1
    RingGameSpec spec;
};

namespace detail {

inline void check_theta_feasible(int n, const WelfareCurve& w, int k, const LabelVector& theta) {
    auto lp = build_primal(n, w, k);
    if (theta.entries.size() != static_cast<std::size_t>(lp.num_vars))
        throw ValidationError("mass vector length does not match the program");
    for (const auto& t : theta.entries)
        if (sgn(t) < 0) throw ValidationError("mass vector entries must be nonnegative");
    for (const auto& row : lp.constraints) {
        Rational lhs = 0;
        for (std::size_t j = 0; j < theta.entries.size(); ++j)
            lhs += row.coeffs[j] * theta.entries[j];
        bool ok = row.rel == Relation::Equal ? lhs == row.rhs : lhs >= row.rhs;
        if (!ok)
            throw ValidationError("mass vector is infeasible for the bound program at n=" +
                                  std::to_string(n) + ", k=" + std::to_string(k));
    }
}

} // namespace detail

/// Builds the ring family realizing the efficiency ratio 1/P* from a
/// feasible mass vector theta. For every supported label and every ordering
/// of players over ring positions, one ring of n resources is created; the
/// player at position p covers offsets p..p+e+x-1 in its equilibrium action
/// and offsets p+e..p+e+x+o-1 in its optimum action, indices mod n, so each
/// resource sees exactly e equilibrium-only, x shared, and o optimum-only
/// users. Each player ends up with exactly two actions.
inline WorstCaseGame construct_worst_case(int n, const WelfareCurve& w, int k,
                                          const LabelVector& theta) {
    detail::check_bound_args(n, w, k);
    auto spec = make_ring_spec(n, theta);
    if (n > kMaxConstructionPlayers)
        throw SizeGuardError("construction for n=" + std::to_string(n) + " would create " +
                             spec.resource_count().get_str() + " resources; the guard allows n <= " +
                             std::to_string(kMaxConstructionPlayers));
    detail::check_theta_feasible(n, w, k, theta);

    std::vector<Resource> resources;
    std::vector<std::vector<int>> eq_actions(static_cast<std::size_t>(n));
    std::vector<std::vector<int>> opt_actions(static_cast<std::size_t>(n));

    std::vector<int> position_of(static_cast<std::size_t>(n));
    std::iota(position_of.begin(), position_of.end(), 0);
    for (std::size_t li = 0; li < spec.support.size(); ++li) {
        const auto& [label, mass] = spec.support[li];
        std::vector<int> players(static_cast<std::size_t>(n));
        std::iota(players.begin(), players.end(), 0);
        long ordering = 0;
        do {
            const int base = static_cast<int>(resources.size());
            for (int offset = 0; offset < n; ++offset)
                resources.push_back(
                    Resource{"l" + std::to_string(li) + "_r" + std::to_string(ordering) + "_p" +
                                 std::to_string(offset),
                             mass});
            for (int pos = 0; pos < n; ++pos) {
                const int player = players[static_cast<std::size_t>(pos)];
                for (int t = 0; t < label.e + label.x; ++t)
                    eq_actions[static_cast<std::size_t>(player)].push_back(base + (pos + t) % n);
                for (int t = 0; t < label.x + label.o; ++t)
                    opt_actions[static_cast<std::size_t>(player)].push_back(base +
                                                                            (pos + label.e + t) % n);
            }
            ++ordering;
        } while (std::next_permutation(players.begin(), players.end()));
    }

    std::vector<std::vector<std::vector<int>>> actions;
    for (int p = 0; p < n; ++p)
        actions.push_back({std::move(eq_actions[static_cast<std::size_t>(p)]),
                           std::move(opt_actions[static_cast<std::size_t>(p)])});

    WorstCaseGame out{make_game(std::move(resources), std::move(actions), w),
                      JointAction(static_cast<std::size_t>(n), 0),
                      JointAction(static_cast<std::size_t>(n), 1), std::move(spec)};
    return out;
}

struct TightnessCertificate {
    int n = 0;
    int k = 0;
    Rational lp_value;           // P*(n, w, k)
    Rational constructed_ratio;  // W(equilibrium) / W(optimum)
    bool equilibrium_checked = false;
    bool equilibrium_verified = false;
    Integer resource_count;
};

/// Solves the bound program, realizes its optimal mass vector as a ring
/// family, and certifies that the built game attains the bound: the
/// welfare ratio must equal 1/P* exactly, and for small instances the
/// designated equilibrium is checked exhaustively (subject to the
/// brute-force cap). A failed check is a hard error; it would mean the
/// construction and the program disagree.
inline TightnessCertificate certify_tightness(int n, const WelfareCurve& w, int k,
                                              const WorstCaseGame* prebuilt = nullptr,
                                              unsigned long long brute_cap = kDefaultJointStateCap) {
    auto report = spoa_bound(n, w, k);
    WorstCaseGame built =
        prebuilt ? *prebuilt : construct_worst_case(n, w, k, *report.theta);

    TightnessCertificate cert;
    cert.n = n;
    cert.k = k;
    cert.lp_value = report.primal_value;
    cert.resource_count = Integer(built.game.resource_count());

    Rational eq_welfare = welfare(built.game, built.equilibrium);
    Rational opt_welfare = welfare(built.game, built.optimum);
    if (sgn(opt_welfare) == 0) throw InternalError("constructed optimum has zero welfare");
    cert.constructed_ratio = eq_welfare / opt_welfare;
    if (cert.constructed_ratio != report.spoa)
        throw InternalError("constructed ratio " + fraction_string(cert.constructed_ratio) +
                            " does not match the program value " + fraction_string(report.spoa));

    if (n <= kMaxVerificationPlayers &&
        detail::joint_state_count(built.game) <= Integer(static_cast<unsigned long>(brute_cap))) {
        cert.equilibrium_checked = true;
        cert.equilibrium_verified = is_k_strong_ne(built.game, built.equilibrium, k);
        if (!cert.equilibrium_verified)
            throw InternalError("constructed equilibrium failed the exhaustive coalition check");
    }
    return cert;
}

} // namespace spoa
