#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "spoa/bounds.hpp"
#include "spoa/combinatorics.hpp"
#include "spoa/errors.hpp"
#include "spoa/rational.hpp"
#include "spoa/welfare.hpp"

namespace spoa {

inline constexpr unsigned long long kDefaultJointStateCap = 10'000'000ULL;
inline constexpr unsigned long long kDefaultPermutationCap = 1'000'000ULL;

struct Resource {
    std::string id;
    Rational value;
};

/// A finite resource allocation game: valued resources, one finite action
/// set per player (each action a subset of resources), the welfare curve
/// defining the system objective W, and an optional utility rule defining
/// the common-interest objective U the players actually maximize. Without
/// a rule, U coincides with W.
struct ResourceGame {
    std::vector<Resource> resources;
    std::vector<std::vector<std::vector<int>>> actions;  // [player][action] -> resource indices
    WelfareCurve welfare_curve;
    std::optional<UtilityRule> utility_rule;

    int player_count() const { return static_cast<int>(actions.size()); }
    int resource_count() const { return static_cast<int>(resources.size()); }
    const std::vector<int>& action(int player, int idx) const {
        return actions[static_cast<std::size_t>(player)][static_cast<std::size_t>(idx)];
    }
    int action_count(int player) const {
        return static_cast<int>(actions[static_cast<std::size_t>(player)].size());
    }
};

/// One chosen action index per player.
using JointAction = std::vector<int>;

inline ResourceGame make_game(std::vector<Resource> resources,
                              std::vector<std::vector<std::vector<int>>> actions,
                              WelfareCurve welfare, std::optional<UtilityRule> utility = {}) {
    const int n = static_cast<int>(actions.size());
    const int r = static_cast<int>(resources.size());
    if (n < 1) throw ValidationError("a game needs at least one player");
    for (const auto& res : resources)
        if (sgn(res.value) < 0) throw ValidationError("resource value must be nonnegative");
    for (int p = 0; p < n; ++p) {
        auto& acts = actions[static_cast<std::size_t>(p)];
        if (acts.empty())
            throw ValidationError("player " + std::to_string(p) + " has no actions");
        for (auto& a : acts) {
            std::sort(a.begin(), a.end());
            if (std::adjacent_find(a.begin(), a.end()) != a.end())
                throw ValidationError("player " + std::to_string(p) + " action repeats a resource");
            for (int idx : a)
                if (idx < 0 || idx >= r)
                    throw ValidationError("player " + std::to_string(p) +
                                          " action references resource index " + std::to_string(idx));
        }
    }
    if (welfare.n != n)
        throw ValidationError("welfare curve covers " + std::to_string(welfare.n) +
                              " players, game has " + std::to_string(n));
    if (utility && utility->n != n)
        throw ValidationError("utility rule covers " + std::to_string(utility->n) +
                              " players, game has " + std::to_string(n));
    return ResourceGame{std::move(resources), std::move(actions), std::move(welfare),
                        std::move(utility)};
}

inline void validate_joint_action(const ResourceGame& g, const JointAction& a) {
    if (static_cast<int>(a.size()) != g.player_count())
        throw ValidationError("joint action has " + std::to_string(a.size()) + " entries, expected " +
                              std::to_string(g.player_count()));
    for (int p = 0; p < g.player_count(); ++p)
        if (a[static_cast<std::size_t>(p)] < 0 || a[static_cast<std::size_t>(p)] >= g.action_count(p))
            throw ValidationError("player " + std::to_string(p) + " has no action index " +
                                  std::to_string(a[static_cast<std::size_t>(p)]));
}

inline std::vector<int> usage_counts(const ResourceGame& g, const JointAction& a) {
    std::vector<int> counts(static_cast<std::size_t>(g.resource_count()), 0);
    for (int p = 0; p < g.player_count(); ++p)
        for (int r : g.action(p, a[static_cast<std::size_t>(p)])) ++counts[static_cast<std::size_t>(r)];
    return counts;
}

/// System welfare W(a) = sum_r v_r w(|a|_r).
inline Rational welfare(const ResourceGame& g, const JointAction& a) {
    validate_joint_action(g, a);
    auto counts = usage_counts(g, a);
    Rational total = 0;
    for (int r = 0; r < g.resource_count(); ++r) {
        if (counts[static_cast<std::size_t>(r)] == 0) continue;
        total += g.resources[static_cast<std::size_t>(r)].value *
                 g.welfare_curve(counts[static_cast<std::size_t>(r)]);
    }
    return total;
}

/// Common-interest objective U(a): the welfare when no utility rule is set,
/// otherwise sum_r v_r u(|a|_r).
inline Rational objective(const ResourceGame& g, const JointAction& a) {
    if (!g.utility_rule) return welfare(g, a);
    validate_joint_action(g, a);
    auto counts = usage_counts(g, a);
    Rational total = 0;
    for (int r = 0; r < g.resource_count(); ++r) {
        if (counts[static_cast<std::size_t>(r)] == 0) continue;
        total += g.resources[static_cast<std::size_t>(r)].value *
                 (*g.utility_rule)(counts[static_cast<std::size_t>(r)]);
    }
    return total;
}

namespace detail {

/// Iterates blocks (action tuples) of the given players in lexicographic
/// order; f receives the block and may stop the scan by returning false.
template <class F>
void for_each_block(const ResourceGame& g, const std::vector<int>& players, F&& f) {
    std::vector<int> block(players.size(), 0);
    for (;;) {
        if (!f(block)) return;
        std::size_t pos = players.size();
        for (;;) {
            if (pos == 0) return;
            --pos;
            if (++block[pos] < g.action_count(players[pos])) break;
            block[pos] = 0;
        }
    }
}

inline void validate_coalition(const ResourceGame& g, const std::vector<int>& coalition) {
    if (coalition.empty()) throw ValidationError("coalition must be non-empty");
    for (std::size_t i = 0; i < coalition.size(); ++i) {
        if (coalition[i] < 0 || coalition[i] >= g.player_count())
            throw ValidationError("coalition references player " + std::to_string(coalition[i]));
        if (i > 0 && coalition[i] <= coalition[i - 1])
            throw ValidationError("coalition players must be strictly increasing");
    }
}

/// Calls f on every coalition of size 1..k in (size, members) order.
template <class F>
void for_each_coalition(int n, int k, F&& f) {
    std::vector<int> members;
    for (int size = 1; size <= k; ++size) {
        members.assign(static_cast<std::size_t>(size), 0);
        for (int i = 0; i < size; ++i) members[static_cast<std::size_t>(i)] = i;
        for (;;) {
            if (!f(members)) return;
            int pos = size - 1;
            while (pos >= 0 && members[static_cast<std::size_t>(pos)] == n - size + pos) --pos;
            if (pos < 0) break;
            ++members[static_cast<std::size_t>(pos)];
            for (int i = pos + 1; i < size; ++i)
                members[static_cast<std::size_t>(i)] = members[static_cast<std::size_t>(i - 1)] + 1;
        }
    }
}

} // namespace detail

/// Group best response: the coalition's block is replaced by an objective
/// maximizer over its joint action space. If the current block already
/// attains the maximum it is kept; otherwise the lexicographically first
/// maximizer wins, which makes dynamics reproducible.
inline JointAction coalition_best_response(const ResourceGame& g, const JointAction& a,
                                           const std::vector<int>& coalition) {
    validate_joint_action(g, a);
    detail::validate_coalition(g, coalition);
    Rational best = objective(g, a);
    std::vector<int> best_block;
    JointAction candidate = a;
    detail::for_each_block(g, coalition, [&](const std::vector<int>& block) {
        for (std::size_t i = 0; i < coalition.size(); ++i)
            candidate[static_cast<std::size_t>(coalition[i])] = block[i];
        Rational value = objective(g, candidate);
        if (value > best) {
            best = std::move(value);
            best_block = block;
        }
        return true;
    });
    if (best_block.empty()) return a;
    JointAction result = a;
    for (std::size_t i = 0; i < coalition.size(); ++i)
        result[static_cast<std::size_t>(coalition[i])] = best_block[i];
    return result;
}

struct Deviation {
    std::vector<int> coalition;
    std::vector<int> block;  // action index per coalition member
};

/// First strictly improving coalition deviation in (size, members, block)
/// order, or nullopt when the joint action is a k-strong equilibrium of
/// the objective.
inline std::optional<Deviation> find_improving_deviation(const ResourceGame& g, const JointAction& a,
                                                         int k) {
    validate_joint_action(g, a);
    if (k < 1 || k > g.player_count())
        throw ValidationError("coalition bound k=" + std::to_string(k) + " outside [1," +
                              std::to_string(g.player_count()) + "]");
    const Rational current = objective(g, a);
    std::optional<Deviation> witness;
    JointAction candidate = a;
    detail::for_each_coalition(g.player_count(), k, [&](const std::vector<int>& coalition) {
        candidate = a;
        bool keep_going = true;
        detail::for_each_block(g, coalition, [&](const std::vector<int>& block) {
            for (std::size_t i = 0; i < coalition.size(); ++i)
                candidate[static_cast<std::size_t>(coalition[i])] = block[i];
            if (objective(g, candidate) > current) {
                witness = Deviation{coalition, block};
                keep_going = false;
                return false;
            }
            return true;
        });
        return keep_going;
    });
    return witness;
}

inline bool is_k_strong_ne(const ResourceGame& g, const JointAction& a, int k) {
    return !find_improving_deviation(g, a, k).has_value();
}

enum class DynamicsMode { Deterministic, Asynchronous };

struct DynamicsStep {
    std::vector<int> coalition;
    Rational objective_before;
    Rational objective_after;
    JointAction action;
};

struct DynamicsTrace {
    JointAction initial;
    std::vector<DynamicsStep> steps;
    JointAction final_action;
    DynamicsMode mode = DynamicsMode::Deterministic;
    std::optional<std::uint64_t> seed;
};

namespace detail {

inline Integer joint_state_count(const ResourceGame& g) {
    Integer total = 1;
    for (int p = 0; p < g.player_count(); ++p) total *= g.action_count(p);
    return total;
}

inline unsigned long long coalition_count(int n, int k) {
    Integer total = 0;
    for (int size = 1; size <= k; ++size)
        total += binomial(static_cast<unsigned>(n), static_cast<unsigned>(size));
    if (!total.fits_ulong_p())
        throw SizeGuardError("coalition family too large to sample");
    return total.get_ui();
}

/// Uniform value in [0, bound) from a seeded mt19937_64 via rejection;
/// identical across platforms.
inline std::uint64_t bounded_draw(std::mt19937_64& rng, std::uint64_t bound) {
    const std::uint64_t limit = ~0ULL - ~0ULL % bound;
    for (;;) {
        std::uint64_t r = rng();
        if (r < limit) return r % bound;
    }
}

/// Unranks combination `rank` of the given size in lexicographic order.
inline std::vector<int> unrank_coalition(int n, int size, Integer rank) {
    std::vector<int> members;
    int next = 0;
    for (int slot = size; slot >= 1; --slot) {
        for (int candidate = next;; ++candidate) {
            Integer with_candidate =
                binomial(static_cast<unsigned>(n - candidate - 1), static_cast<unsigned>(slot - 1));
            if (rank < with_candidate) {
                members.push_back(candidate);
                next = candidate + 1;
                break;
            }
            rank -= with_candidate;
        }
    }
    return members;
}

} // namespace detail

/// Coalition best-response dynamics. Deterministic mode sweeps coalitions
/// in (size, members) order and stops after a full round without a
/// revision; asynchronous mode draws coalitions uniformly from the family
/// of size <= k using the seeded generator and stops once an equilibrium
/// check (run every |family| draws) confirms convergence.
inline DynamicsTrace run_dynamics(const ResourceGame& g, const JointAction& start, int k,
                                  DynamicsMode mode, std::optional<std::uint64_t> seed = {}) {
    validate_joint_action(g, start);
    if (k < 1 || k > g.player_count())
        throw ValidationError("coalition bound k=" + std::to_string(k) + " outside [1," +
                              std::to_string(g.player_count()) + "]");

    DynamicsTrace trace;
    trace.initial = start;
    trace.mode = mode;
    trace.seed = seed;
    JointAction current = start;

    auto try_revise = [&](const std::vector<int>& coalition) {
        JointAction next = coalition_best_response(g, current, coalition);
        if (next == current) return false;
        DynamicsStep step;
        step.coalition = coalition;
        step.objective_before = objective(g, current);
        step.objective_after = objective(g, next);
        step.action = next;
        if (step.objective_after <= step.objective_before)
            throw InternalError("dynamics step did not strictly improve the objective");
        trace.steps.push_back(std::move(step));
        current = std::move(next);
        return true;
    };

    if (mode == DynamicsMode::Deterministic) {
        const Integer round_cap = detail::joint_state_count(g);
        Integer rounds = 0;
        for (;;) {
            bool changed = false;
            detail::for_each_coalition(g.player_count(), k, [&](const std::vector<int>& coalition) {
                if (try_revise(coalition)) changed = true;
                return true;
            });
            if (!changed) break;
            if (++rounds > round_cap)
                throw InternalError("deterministic dynamics exceeded the joint-action round bound");
        }
    } else {
        const unsigned long long family = detail::coalition_count(g.player_count(), k);
        std::mt19937_64 rng(seed.value_or(0));
        for (;;) {
            for (unsigned long long draw = 0; draw < family; ++draw) {
                Integer rank(static_cast<unsigned long>(
                    detail::bounded_draw(rng, family)));
                int size = 1;
                for (;; ++size) {
                    Integer of_size = binomial(static_cast<unsigned>(g.player_count()),
                                               static_cast<unsigned>(size));
                    if (rank < of_size) break;
                    rank -= of_size;
                }
                try_revise(detail::unrank_coalition(g.player_count(), size, rank));
            }
            if (is_k_strong_ne(g, current, k)) break;
        }
    }
    trace.final_action = current;
    return trace;
}

/// Exhaustive equilibrium enumeration over the joint action space,
/// guarded by a state cap.
inline std::vector<JointAction> enumerate_ksne(const ResourceGame& g, int k,
                                               unsigned long long cap = kDefaultJointStateCap) {
    if (k < 1 || k > g.player_count())
        throw ValidationError("coalition bound k=" + std::to_string(k) + " outside [1," +
                              std::to_string(g.player_count()) + "]");
    Integer states = detail::joint_state_count(g);
    if (states > Integer(static_cast<unsigned long>(cap)))
        throw SizeGuardError("instance too large for brute force: " + states.get_str() +
                             " joint actions exceed the cap of " + std::to_string(cap));

    std::vector<JointAction> result;
    JointAction a(static_cast<std::size_t>(g.player_count()), 0);
    for (;;) {
        if (is_k_strong_ne(g, a, k)) result.push_back(a);
        int pos = g.player_count() - 1;
        while (pos >= 0) {
            if (++a[static_cast<std::size_t>(pos)] < g.action_count(pos)) break;
            a[static_cast<std::size_t>(pos)] = 0;
            --pos;
        }
        if (pos < 0) break;
    }
    if (result.empty()) throw InternalError("a k-strong equilibrium always exists");
    return result;
}

/// Worst equilibrium welfare over best welfare. Equilibria are taken with
/// respect to the objective (the utility rule when present); both welfare
/// values use W.
inline Rational brute_force_spoa(const ResourceGame& g, int k,
                                 unsigned long long cap = kDefaultJointStateCap) {
    auto equilibria = enumerate_ksne(g, k, cap);
    std::optional<Rational> worst;
    for (const auto& a : equilibria) {
        Rational w = welfare(g, a);
        if (!worst || w < *worst) worst = std::move(w);
    }

    std::optional<Rational> best;
    JointAction a(static_cast<std::size_t>(g.player_count()), 0);
    for (;;) {
        Rational w = welfare(g, a);
        if (!best || w > *best) best = std::move(w);
        int pos = g.player_count() - 1;
        while (pos >= 0) {
            if (++a[static_cast<std::size_t>(pos)] < g.action_count(pos)) break;
            a[static_cast<std::size_t>(pos)] = 0;
            --pos;
        }
        if (pos < 0) break;
    }
    if (sgn(*best) == 0)
        throw ValidationError("maximum welfare is zero; the efficiency ratio is undefined");
    return *worst / *best;
}

/// Aggregates resource values by the (e, x, o) occupancy pattern of an
/// (equilibrium, optimum) pair: theta(e,x,o) = sum of v_r over resources
/// with that label. Resources untouched by both allocations are skipped.
inline LabelVector label_resources(const ResourceGame& g, const JointAction& a_ne,
                                   const JointAction& a_opt) {
    validate_joint_action(g, a_ne);
    validate_joint_action(g, a_opt);
    LabelVector theta{make_index_set(g.player_count()), {}};
    theta.entries.assign(theta.index_set.size(), Rational(0));
    for (int r = 0; r < g.resource_count(); ++r) {
        Label label;
        for (int p = 0; p < g.player_count(); ++p) {
            const auto& ne_action = g.action(p, a_ne[static_cast<std::size_t>(p)]);
            const auto& opt_action = g.action(p, a_opt[static_cast<std::size_t>(p)]);
            bool in_ne = std::binary_search(ne_action.begin(), ne_action.end(), r);
            bool in_opt = std::binary_search(opt_action.begin(), opt_action.end(), r);
            if (in_ne && in_opt)
                ++label.x;
            else if (in_ne)
                ++label.e;
            else if (in_opt)
                ++label.o;
        }
        if (label.sum() == 0) continue;
        theta.entries[theta.index_set.index_of(label)] += g.resources[static_cast<std::size_t>(r)].value;
    }
    return theta;
}

/// Direct enumeration of sum over ordered coalitions of size zeta of
/// W(a_opt_coalition, a_ne_rest). A test oracle for the coalition
/// coefficient algebra; guarded by a permutation cap.
inline Rational deviation_sum_oracle(const ResourceGame& g, const JointAction& a_ne,
                                     const JointAction& a_opt, int zeta,
                                     unsigned long long cap = kDefaultPermutationCap) {
    validate_joint_action(g, a_ne);
    validate_joint_action(g, a_opt);
    const int n = g.player_count();
    if (zeta < 1 || zeta > n)
        throw ValidationError("coalition size " + std::to_string(zeta) + " outside [1," +
                              std::to_string(n) + "]");
    Integer permutations = falling_factorial(static_cast<unsigned>(n), static_cast<unsigned>(zeta));
    if (permutations > Integer(static_cast<unsigned long>(cap)))
        throw SizeGuardError("instance too large for brute force: " + permutations.get_str() +
                             " ordered coalitions exceed the cap of " + std::to_string(cap));

    Rational total = 0;
    std::vector<int> tuple;
    std::vector<bool> used(static_cast<std::size_t>(n), false);
    JointAction candidate = a_ne;
    auto recurse = [&](auto&& self) -> void {
        if (static_cast<int>(tuple.size()) == zeta) {
            total += welfare(g, candidate);
            return;
        }
        for (int p = 0; p < n; ++p) {
            if (used[static_cast<std::size_t>(p)]) continue;
            used[static_cast<std::size_t>(p)] = true;
            tuple.push_back(p);
            int saved = candidate[static_cast<std::size_t>(p)];
            candidate[static_cast<std::size_t>(p)] = a_opt[static_cast<std::size_t>(p)];
            self(self);
            candidate[static_cast<std::size_t>(p)] = saved;
            tuple.pop_back();
            used[static_cast<std::size_t>(p)] = false;
        }
    };
    recurse(recurse);
    return total;
}

} // namespace spoa
