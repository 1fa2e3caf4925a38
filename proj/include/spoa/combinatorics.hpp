#pragma once

#include <algorithm>
#include <compare>
#include <cstddef>
#include <string>
#include <vector>

#include "spoa/errors.hpp"
#include "spoa/rational.hpp"

namespace spoa {

inline Integer factorial(unsigned n) {
    Integer f;
    mpz_fac_ui(f.get_mpz_t(), n);
    return f;
}

/// x!/(x-y)! when x >= y, zero when y > x.
inline Integer falling_factorial(unsigned x, unsigned y) {
    if (y > x) return 0;
    Integer result = 1;
    for (unsigned i = 0; i < y; ++i) result *= x - i;
    return result;
}

inline Integer binomial(unsigned n, unsigned k) {
    if (k > n) return 0;
    Integer b;
    mpz_bin_uiui(b.get_mpz_t(), n, k);
    return b;
}

/// Per-resource occupancy pattern of an (equilibrium, optimum) pair of
/// allocations: e players use the resource only in equilibrium, x in both,
/// o only in the optimum.
struct Label {
    int e = 0;
    int x = 0;
    int o = 0;

    int sum() const { return e + x + o; }
    auto operator<=>(const Label&) const = default;

    std::string str() const {
        return "(" + std::to_string(e) + "," + std::to_string(x) + "," + std::to_string(o) + ")";
    }
};

/// All labels with 1 <= e+x+o <= n in lexicographic (e,x,o) order. The
/// ordering is fixed so that vectors indexed by labels are comparable
/// across runs and platforms.
struct IndexSet {
    int n = 0;
    std::vector<Label> labels;

    std::size_t size() const { return labels.size(); }

    bool contains(const Label& l) const {
        auto it = std::lower_bound(labels.begin(), labels.end(), l);
        return it != labels.end() && *it == l;
    }

    std::size_t index_of(const Label& l) const {
        auto it = std::lower_bound(labels.begin(), labels.end(), l);
        if (it == labels.end() || *it != l)
            throw ValidationError("label " + l.str() + " not in index set for n=" + std::to_string(n));
        return static_cast<std::size_t>(it - labels.begin());
    }
};

inline IndexSet make_index_set(int n) {
    if (n < 1) throw ValidationError("index set requires n >= 1, got " + std::to_string(n));
    IndexSet set;
    set.n = n;
    for (int e = 0; e <= n; ++e)
        for (int x = 0; e + x <= n; ++x)
            for (int o = (e + x == 0) ? 1 : 0; e + x + o <= n; ++o)
                set.labels.push_back(Label{e, x, o});
    return set;
}

/// Number of ordered coalitions of `zeta` out of `n` players that touch a
/// resource with the given label as `alpha` equilibrium-only users and
/// `beta` optimum-only users:
///
///   C(zeta,alpha) * C(zeta-alpha,beta) * e^(alpha) * o^(beta) * (n-e-o)^(zeta-alpha-beta)
///
/// with falling-factorial powers; zero whenever any factor is zero.
inline Integer coalition_coefficient(const Label& label, int zeta, int n, int alpha, int beta) {
    if (label.e < 0 || label.x < 0 || label.o < 0 || label.sum() < 1 || label.sum() > n)
        throw ValidationError("label " + label.str() + " invalid for n=" + std::to_string(n));
    if (zeta < 1 || zeta > n)
        throw ValidationError("coalition size " + std::to_string(zeta) + " outside [1," + std::to_string(n) + "]");
    if (alpha < 0 || alpha > zeta)
        throw ValidationError("alpha " + std::to_string(alpha) + " outside [0," + std::to_string(zeta) + "]");
    if (beta < 0 || beta > zeta - alpha)
        throw ValidationError("beta " + std::to_string(beta) + " outside [0," + std::to_string(zeta - alpha) + "]");

    Integer value = binomial(static_cast<unsigned>(zeta), static_cast<unsigned>(alpha));
    value *= binomial(static_cast<unsigned>(zeta - alpha), static_cast<unsigned>(beta));
    value *= falling_factorial(static_cast<unsigned>(label.e), static_cast<unsigned>(alpha));
    value *= falling_factorial(static_cast<unsigned>(label.o), static_cast<unsigned>(beta));
    value *= falling_factorial(static_cast<unsigned>(n - label.e - label.o),
                               static_cast<unsigned>(zeta - alpha - beta));
    return value;
}

} // namespace spoa
