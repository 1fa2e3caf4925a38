#pragma once

#include <fstream>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "spoa/errors.hpp"
#include "spoa/games.hpp"
#include "spoa/rational.hpp"
#include "spoa/welfare.hpp"

namespace spoa {

using Json = nlohmann::ordered_json;

namespace detail {

/// Exact numeric parsing of a JSON value at `path`: strings hold "p/q" or
/// decimal literals; integral JSON numbers pass through; floating JSON
/// numbers are rejected because they are not exact.
inline Rational rational_at(const Json& value, const std::string& path) {
    if (value.is_string()) {
        try {
            return parse_rational(value.get<std::string>());
        } catch (const ValidationError& e) {
            throw ValidationError(path + ": " + e.what());
        }
    }
    if (value.is_number_integer()) return Rational(static_cast<long>(value.get<std::int64_t>()));
    if (value.is_number_unsigned()) return Rational(static_cast<unsigned long>(value.get<std::uint64_t>()));
    if (value.is_number_float())
        throw ValidationError(path + ": floating-point values are inexact; use a string like \"1/3\"");
    throw ValidationError(path + ": expected an exact numeric value");
}

inline const Json& member_at(const Json& obj, const char* key, const std::string& path) {
    if (!obj.is_object()) throw ValidationError(path + ": expected an object");
    auto it = obj.find(key);
    if (it == obj.end()) throw ValidationError(path + "." + key + ": missing");
    return *it;
}

} // namespace detail

/// Game file schema:
///   {"resources": [{"id": "r1", "value": "1"}, ...],
///    "players":   [{"actions": [["r1"], ["r2", "s1"]]}, ...],
///    "welfare":   ["0", "1", ...],          // length = players + 1
///    "utility":   ["0", ...]}               // optional, same length
/// Values are exact decimal or "p/q" strings. Validation reports the first
/// violation with its JSON path.
inline ResourceGame game_from_json(const Json& doc) {
    if (!doc.is_object()) throw ValidationError("$: expected a game object");

    const auto& resources_node = detail::member_at(doc, "resources", "$");
    if (!resources_node.is_array() || resources_node.empty())
        throw ValidationError("$.resources: expected a non-empty array");
    std::vector<Resource> resources;
    std::map<std::string, int> index_of;
    for (std::size_t i = 0; i < resources_node.size(); ++i) {
        const std::string path = "$.resources[" + std::to_string(i) + "]";
        const auto& node = resources_node[i];
        const auto& id_node = detail::member_at(node, "id", path);
        if (!id_node.is_string() || id_node.get<std::string>().empty())
            throw ValidationError(path + ".id: expected a non-empty string");
        std::string id = id_node.get<std::string>();
        if (index_of.count(id)) throw ValidationError(path + ".id: duplicate id '" + id + "'");
        Rational value = detail::rational_at(detail::member_at(node, "value", path), path + ".value");
        if (sgn(value) < 0) throw ValidationError(path + ".value: must be nonnegative");
        index_of[id] = static_cast<int>(resources.size());
        resources.push_back(Resource{std::move(id), std::move(value)});
    }

    const auto& players_node = detail::member_at(doc, "players", "$");
    if (!players_node.is_array() || players_node.empty())
        throw ValidationError("$.players: expected a non-empty array");
    std::vector<std::vector<std::vector<int>>> actions;
    for (std::size_t p = 0; p < players_node.size(); ++p) {
        const std::string ppath = "$.players[" + std::to_string(p) + "]";
        const auto& actions_node = detail::member_at(players_node[p], "actions", ppath);
        if (!actions_node.is_array() || actions_node.empty())
            throw ValidationError(ppath + ".actions: expected a non-empty array");
        std::vector<std::vector<int>> player_actions;
        for (std::size_t a = 0; a < actions_node.size(); ++a) {
            const std::string apath = ppath + ".actions[" + std::to_string(a) + "]";
            if (!actions_node[a].is_array())
                throw ValidationError(apath + ": expected an array of resource ids");
            std::vector<int> action;
            for (std::size_t r = 0; r < actions_node[a].size(); ++r) {
                const std::string rpath = apath + "[" + std::to_string(r) + "]";
                if (!actions_node[a][r].is_string())
                    throw ValidationError(rpath + ": expected a resource id string");
                auto it = index_of.find(actions_node[a][r].get<std::string>());
                if (it == index_of.end())
                    throw ValidationError(rpath + ": unknown resource id '" +
                                          actions_node[a][r].get<std::string>() + "'");
                action.push_back(it->second);
            }
            player_actions.push_back(std::move(action));
        }
        actions.push_back(std::move(player_actions));
    }
    const int n = static_cast<int>(actions.size());

    const auto& welfare_node = detail::member_at(doc, "welfare", "$");
    if (!welfare_node.is_array() || welfare_node.size() != static_cast<std::size_t>(n) + 1)
        throw ValidationError("$.welfare: expected " + std::to_string(n + 1) + " values");
    std::vector<Rational> wvals;
    for (std::size_t j = 0; j < welfare_node.size(); ++j)
        wvals.push_back(detail::rational_at(welfare_node[j], "$.welfare[" + std::to_string(j) + "]"));

    std::optional<UtilityRule> utility;
    if (doc.contains("utility") && !doc["utility"].is_null()) {
        const auto& utility_node = doc["utility"];
        if (!utility_node.is_array() || utility_node.size() != static_cast<std::size_t>(n) + 1)
            throw ValidationError("$.utility: expected " + std::to_string(n + 1) + " values");
        std::vector<Rational> uvals;
        for (std::size_t j = 0; j < utility_node.size(); ++j)
            uvals.push_back(detail::rational_at(utility_node[j], "$.utility[" + std::to_string(j) + "]"));
        try {
            utility = make_utility(n, std::move(uvals));
        } catch (const ValidationError& e) {
            throw ValidationError("$.utility: " + std::string(e.what()));
        }
    }

    try {
        return make_game(std::move(resources), std::move(actions), make_welfare(n, std::move(wvals)),
                         std::move(utility));
    } catch (const ValidationError& e) {
        throw ValidationError("$: " + std::string(e.what()));
    }
}

inline Json game_to_json(const ResourceGame& g) {
    Json doc;
    doc["resources"] = Json::array();
    for (const auto& res : g.resources)
        doc["resources"].push_back({{"id", res.id}, {"value", fraction_string(res.value)}});
    doc["players"] = Json::array();
    for (int p = 0; p < g.player_count(); ++p) {
        Json acts = Json::array();
        for (int a = 0; a < g.action_count(p); ++a) {
            Json ids = Json::array();
            for (int r : g.action(p, a)) ids.push_back(g.resources[static_cast<std::size_t>(r)].id);
            acts.push_back(std::move(ids));
        }
        doc["players"].push_back({{"actions", std::move(acts)}});
    }
    doc["welfare"] = Json::array();
    for (const auto& v : g.welfare_curve.values) doc["welfare"].push_back(fraction_string(v));
    if (g.utility_rule) {
        doc["utility"] = Json::array();
        for (const auto& v : g.utility_rule->values) doc["utility"].push_back(fraction_string(v));
    }
    return doc;
}

inline ResourceGame load_game_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open game file '" + path + "'");
    Json doc;
    try {
        doc = Json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw ValidationError("game file '" + path + "' is not valid JSON: " + e.what());
    }
    return game_from_json(doc);
}

inline void save_game_file(const ResourceGame& g, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw ValidationError("cannot write game file '" + path + "'");
    out << game_to_json(g).dump(2) << "\n";
}

} // namespace spoa
