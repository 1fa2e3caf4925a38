#pragma once

#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "spoa/errors.hpp"
#include "spoa/rational.hpp"

namespace spoa {

/// Welfare function w : {0,...,n} -> Q with w(0) = 0 and w(y) > 0 for y > 0.
/// values[j] = w(j).
struct WelfareCurve {
    int n = 0;
    std::vector<Rational> values;

    const Rational& operator()(int occupancy) const {
        if (occupancy < 0 || occupancy > n)
            throw InternalError("welfare index " + std::to_string(occupancy) + " outside [0," +
                                std::to_string(n) + "]");
        return values[static_cast<std::size_t>(occupancy)];
    }
};

/// Local utility rule u : {0,...,n} -> Q with u(0) = 0 and u(j) >= 0.
struct UtilityRule {
    int n = 0;
    std::vector<Rational> values;

    const Rational& operator()(int occupancy) const {
        if (occupancy < 0 || occupancy > n)
            throw InternalError("utility index " + std::to_string(occupancy) + " outside [0," +
                                std::to_string(n) + "]");
        return values[static_cast<std::size_t>(occupancy)];
    }
};

inline WelfareCurve make_welfare(int n, std::vector<Rational> values) {
    if (n < 1) throw ValidationError("welfare curve requires n >= 1");
    if (values.size() != static_cast<std::size_t>(n) + 1)
        throw ValidationError("welfare curve for n=" + std::to_string(n) + " needs " +
                              std::to_string(n + 1) + " values, got " + std::to_string(values.size()));
    if (values[0] != 0) throw ValidationError("welfare curve must have w(0) = 0");
    for (int j = 1; j <= n; ++j)
        if (values[static_cast<std::size_t>(j)] <= 0)
            throw ValidationError("welfare curve must have w(" + std::to_string(j) + ") > 0");
    return WelfareCurve{n, std::move(values)};
}

inline UtilityRule make_utility(int n, std::vector<Rational> values) {
    if (n < 1) throw ValidationError("utility rule requires n >= 1");
    if (values.size() != static_cast<std::size_t>(n) + 1)
        throw ValidationError("utility rule for n=" + std::to_string(n) + " needs " +
                              std::to_string(n + 1) + " values, got " + std::to_string(values.size()));
    if (values[0] != 0) throw ValidationError("utility rule must have u(0) = 0");
    for (int j = 1; j <= n; ++j)
        if (values[static_cast<std::size_t>(j)] < 0)
            throw ValidationError("utility rule must have u(" + std::to_string(j) + ") >= 0");
    return UtilityRule{n, std::move(values)};
}

/// w(x) = 1 for x >= 1. The covering objective.
inline WelfareCurve indicator_welfare(int n) {
    std::vector<Rational> v(static_cast<std::size_t>(n) + 1, 1);
    if (n >= 0) v[0] = 0;
    return make_welfare(n, std::move(v));
}

/// w(x) = x. Player-separable; every unilateral optimum is global.
inline WelfareCurve identity_welfare(int n) {
    std::vector<Rational> v;
    for (int j = 0; j <= n; ++j) v.emplace_back(j);
    return make_welfare(n, std::move(v));
}

/// Welfare spec grammar: "indicator" | "identity" | comma-separated exact
/// values of length n+1, e.g. "0,1,3/2".
inline WelfareCurve parse_welfare(std::string_view spec, int n) {
    if (spec == "indicator") return indicator_welfare(n);
    if (spec == "identity") return identity_welfare(n);
    std::vector<Rational> values;
    std::string item;
    std::istringstream in{std::string(spec)};
    while (std::getline(in, item, ',')) values.push_back(parse_rational(item));
    return make_welfare(n, std::move(values));
}

} // namespace spoa
