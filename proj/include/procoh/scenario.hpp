#pragma once

#include <string>
#include <utility>
#include <vector>

#include "procoh/ring_presentations.hpp"

namespace procoh {

struct ScenarioAssumption {
    std::string text;
    std::string tag;  // "assumption" | "paper-asserted"
};

struct DifferentialAssumption {
    std::string generator;
    int page = 2;
    std::string value;  // "0" or a class expression
    std::string tag;
};

struct Scenario {
    std::string name;
    long long p = 0;
    ExtensionDatum ext;
    std::vector<FusionGenerator> fusion;
    NamingTable naming;
    Window window;
    bool collapse = false;  // all differentials vanish from page 2 on
    std::vector<DifferentialAssumption> differentials;
    std::vector<ScenarioAssumption> assumptions;

    // verification targets
    std::string expected_final_ring;  // presentation text; empty = none
    std::vector<std::pair<int, int>> expected_stable;  // minimal generators
    int verify_depth = 8;
};

// True when every differential is pinned to zero (collapse flag or an
// all-zero assumption list covering page 2 onward).
bool scenario_collapses(const Scenario& s);

// "gl2" (p in {3,5,7}) and "extraspecial3"; p ignored by the latter.
Scenario builtin_scenario(const std::string& name, long long p);

Scenario load_scenario(const std::string& path);

// Built-in name or a path to a JSON scenario file.
Scenario resolve_scenario(const std::string& name_or_path, long long p);

}  // namespace procoh
