// Command-line front end: bound computations, curves, game simulation,
// equilibrium verification, and worst-case construction.
//
// Exit codes: 0 success, 2 invalid configuration or input, 3 size guard
// refused the instance, 4 internal invariant failure.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "spoa/bounds.hpp"
#include "spoa/game_json.hpp"
#include "spoa/games.hpp"
#include "spoa/report.hpp"
#include "spoa/welfare.hpp"
#include "spoa/worstcase.hpp"

namespace {

using namespace spoa;

void write_output(const std::string& text, const std::string& path) {
    if (path.empty()) {
        std::cout << text;
        if (!text.empty() && text.back() != '\n') std::cout << '\n';
        return;
    }
    std::ofstream out(path);
    if (!out) throw ValidationError("cannot write output file '" + path + "'");
    out << text;
    if (!text.empty() && text.back() != '\n') out << '\n';
}

std::vector<int> parse_k_range(const std::string& spec, int n) {
    std::vector<int> ks;
    auto parse_int = [&](const std::string& text) {
        try {
            std::size_t used = 0;
            int value = std::stoi(text, &used);
            if (used != text.size()) throw std::invalid_argument(text);
            return value;
        } catch (const std::exception&) {
            throw ValidationError("invalid k specification '" + spec + "'");
        }
    };
    if (auto dots = spec.find(".."); dots != std::string::npos) {
        int lo = parse_int(spec.substr(0, dots));
        int hi = parse_int(spec.substr(dots + 2));
        if (lo > hi) throw ValidationError("empty k range '" + spec + "'");
        for (int k = lo; k <= hi; ++k) ks.push_back(k);
    } else {
        std::istringstream in(spec);
        std::string item;
        while (std::getline(in, item, ',')) ks.push_back(parse_int(item));
        if (ks.empty()) throw ValidationError("invalid k specification '" + spec + "'");
    }
    for (int k : ks)
        if (k < 1 || k > n)
            throw ValidationError("k=" + std::to_string(k) + " outside [1," + std::to_string(n) + "]");
    return ks;
}

JointAction parse_action(const std::string& spec, const ResourceGame& game) {
    JointAction a;
    std::istringstream in(spec);
    std::string item;
    while (std::getline(in, item, ',')) {
        try {
            a.push_back(std::stoi(item));
        } catch (const std::exception&) {
            throw ValidationError("invalid action list '" + spec + "'");
        }
    }
    validate_joint_action(game, a);
    return a;
}

unsigned long long brute_cap_from_env() {
    const char* env = std::getenv("SPOA_BRUTE_CAP");
    if (!env) return kDefaultJointStateCap;
    try {
        return std::stoull(env);
    } catch (const std::exception&) {
        throw ValidationError("SPOA_BRUTE_CAP is not a number: '" + std::string(env) + "'");
    }
}

struct CurveConfig {
    int n = 0;
    std::string welfare = "indicator";
    std::string k_spec;
    bool design = false;
    std::string format = "csv";
    std::string output;
};

int cmd_curve(const CurveConfig& cfg) {
    auto w = parse_welfare(cfg.welfare, cfg.n);
    auto ks = parse_k_range(cfg.k_spec.empty() ? "1.." + std::to_string(cfg.n) : cfg.k_spec, cfg.n);
    auto table = spoa_curve(cfg.n, w, ks, cfg.design);
    table.welfare_desc = cfg.welfare;
    if (cfg.format == "csv")
        write_output(curve_csv(table), cfg.output);
    else if (cfg.format == "json")
        write_output(curve_json(table).dump(2), cfg.output);
    else if (cfg.format == "svg")
        write_output(curve_svg(table), cfg.output);
    else
        throw ValidationError("unknown format '" + cfg.format + "' (csv|json|svg)");
    return 0;
}

struct BoundConfig {
    int n = 0;
    int k = 0;
    std::string welfare = "indicator";
    std::string output;
};

int cmd_bound(const BoundConfig& cfg, bool design) {
    auto w = parse_welfare(cfg.welfare, cfg.n);
    auto report = design ? design_bound(cfg.n, w, cfg.k) : spoa_bound(cfg.n, w, cfg.k);
    write_output(bound_report_json(report).dump(2), cfg.output);
    return 0;
}

struct SimulateConfig {
    std::string game_path;
    int k = 1;
    std::string mode = "deterministic";
    std::optional<std::uint64_t> seed;
    std::string start;
    std::string output;
};

int cmd_simulate(const SimulateConfig& cfg) {
    auto game = load_game_file(cfg.game_path);
    JointAction start(static_cast<std::size_t>(game.player_count()), 0);
    if (!cfg.start.empty()) start = parse_action(cfg.start, game);
    DynamicsMode mode;
    if (cfg.mode == "deterministic")
        mode = DynamicsMode::Deterministic;
    else if (cfg.mode == "asynchronous")
        mode = DynamicsMode::Asynchronous;
    else
        throw ValidationError("unknown mode '" + cfg.mode + "' (deterministic|asynchronous)");
    auto trace = run_dynamics(game, start, cfg.k, mode, cfg.seed);
    write_output(trace_json(game, trace).dump(2), cfg.output);
    return 0;
}

struct VerifyConfig {
    std::string game_path;
    int k = 1;
    std::string action;
    std::string output;
};

int cmd_verify(const VerifyConfig& cfg) {
    auto game = load_game_file(cfg.game_path);
    auto a = parse_action(cfg.action, game);
    write_output(verdict_json(game, a, cfg.k).dump(2), cfg.output);
    return 0;
}

struct ConstructConfig {
    int n = 0;
    int k = 0;
    std::string welfare = "indicator";
    std::string game_out;
    std::string output;
};

int cmd_construct(const ConstructConfig& cfg) {
    auto w = parse_welfare(cfg.welfare, cfg.n);
    auto report = spoa_bound(cfg.n, w, cfg.k);
    auto built = construct_worst_case(cfg.n, w, cfg.k, *report.theta);
    auto cert = certify_tightness(cfg.n, w, cfg.k, &built, brute_cap_from_env());

    Json doc = certificate_json(cert);
    doc["equilibrium_action"] = built.equilibrium;
    doc["optimum_action"] = built.optimum;
    if (cfg.game_out.empty())
        doc["game"] = game_to_json(built.game);
    else
        save_game_file(built.game, cfg.game_out);
    write_output(doc.dump(2), cfg.output);
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"k-strong price-of-anarchy bounds and game tooling for resource allocation games"};
    app.require_subcommand(1);

    CurveConfig curve_cfg;
    auto* curve = app.add_subcommand("curve", "per-k bound table (csv, json, or svg)");
    curve->add_option("--n", curve_cfg.n, "player count")->required();
    curve->add_option("--welfare", curve_cfg.welfare,
                      "welfare spec: indicator | identity | comma-separated exact values");
    curve->add_option("--k", curve_cfg.k_spec, "k values, e.g. 3 or 1..20 or 1,2,5 (default 1..n)");
    curve->add_flag("--design", curve_cfg.design, "include the utility-design upper bound");
    curve->add_option("--format", curve_cfg.format, "csv | json | svg");
    curve->add_option("-o,--output", curve_cfg.output, "output file (default stdout)");

    BoundConfig bound_cfg;
    auto* bound = app.add_subcommand("bound", "welfare-sharing bound for one (n, k)");
    bound->add_option("--n", bound_cfg.n, "player count")->required();
    bound->add_option("--k", bound_cfg.k, "max coalition size")->required();
    bound->add_option("--welfare", bound_cfg.welfare, "welfare spec");
    bound->add_option("-o,--output", bound_cfg.output, "output file (default stdout)");

    BoundConfig design_cfg;
    auto* design = app.add_subcommand("design", "utility-design upper bound for one (n, k)");
    design->add_option("--n", design_cfg.n, "player count")->required();
    design->add_option("--k", design_cfg.k, "max coalition size")->required();
    design->add_option("--welfare", design_cfg.welfare, "welfare spec");
    design->add_option("-o,--output", design_cfg.output, "output file (default stdout)");

    SimulateConfig sim_cfg;
    auto* simulate = app.add_subcommand("simulate", "coalition best-response dynamics on a game file");
    simulate->add_option("--game", sim_cfg.game_path, "game JSON file")->required();
    simulate->add_option("--k", sim_cfg.k, "max coalition size")->required();
    simulate->add_option("--mode", sim_cfg.mode, "deterministic | asynchronous");
    simulate->add_option("--seed", sim_cfg.seed, "seed for asynchronous coalition sampling");
    simulate->add_option("--start", sim_cfg.start, "start action indices, e.g. 0,0,0 (default all 0)");
    simulate->add_option("-o,--output", sim_cfg.output, "output file (default stdout)");

    VerifyConfig verify_cfg;
    auto* verify = app.add_subcommand("verify", "k-strong equilibrium check with witness");
    verify->add_option("--game", verify_cfg.game_path, "game JSON file")->required();
    verify->add_option("--k", verify_cfg.k, "max coalition size")->required();
    verify->add_option("--action", verify_cfg.action, "action indices, e.g. 0,1,0")->required();
    verify->add_option("-o,--output", verify_cfg.output, "output file (default stdout)");

    ConstructConfig construct_cfg;
    auto* construct = app.add_subcommand("construct", "worst-case ring family and its certificate");
    construct->add_option("--n", construct_cfg.n, "player count")->required();
    construct->add_option("--k", construct_cfg.k, "max coalition size")->required();
    construct->add_option("--welfare", construct_cfg.welfare, "welfare spec");
    construct->add_option("--game-out", construct_cfg.game_out,
                          "write the game to this file instead of embedding it");
    construct->add_option("-o,--output", construct_cfg.output, "certificate file (default stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        (void)brute_cap_from_env();  // fail fast on a malformed override
        if (curve->parsed()) return cmd_curve(curve_cfg);
        if (bound->parsed()) return cmd_bound(bound_cfg, false);
        if (design->parsed()) return cmd_bound(design_cfg, true);
        if (simulate->parsed()) return cmd_simulate(sim_cfg);
        if (verify->parsed()) return cmd_verify(verify_cfg);
        if (construct->parsed()) return cmd_construct(construct_cfg);
    } catch (const ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const SizeGuardError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 4;
    }
    return 2;
}
