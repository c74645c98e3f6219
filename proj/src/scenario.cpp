#include "procoh/scenario.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

namespace procoh {

namespace {

using nlohmann::json;

FusionGenerator matrix_generator(const std::string& name, bool kernel_only,
                                 long long p,
                                 const std::vector<std::vector<long long>>& rows) {
    FusionGenerator g;
    g.name = name;
    g.domain = kernel_only ? FusionGenerator::Domain::kernel_only
                           : FusionGenerator::Domain::whole_group;
    g.has_matrix = true;
    g.matrix = PrecisionMatrix::from_ints(static_cast<int>(rows.size()), p, 3, rows);
    return g;
}

long long primitive_root(long long p) {
    for (long long r = 2; r < p; ++r) {
        long long x = 1;
        int order = 0;
        do {
            x = x * r % p;
            ++order;
        } while (x != 1);
        if (order == p - 1) return r;
    }
    throw Error("no primitive root found");
}

Scenario gl2_scenario(long long p) {
    if (p != 3 && p != 5 && p != 7)
        throw Error("scenario gl2 requires --p 3, 5 or 7");
    Scenario s;
    s.name = "gl2-p" + std::to_string(p);
    s.p = p;
    s.ext = congruence_extension(p, 2, 1, {{1, 1}, {0, 1}});
    s.naming = gl2_naming(p);
    s.window = default_window(s.ext);
    long long r = primitive_root(p);
    s.fusion = {matrix_generator("g1", true, p, {{1, 1}, {0, 1}}),
                matrix_generator("g2", true, p, {{1, 0}, {1, 1}}),
                matrix_generator("gt", false, p, {{r, 0}, {0, 1}}),
                matrix_generator("gz", false, p, {{1, 0}, {0, r}})};
    if (p == 3) {
        s.collapse = false;
        s.differentials = {
            {"y1", 2, "0", "paper-asserted"},
            {"uv", 2, "0", "paper-asserted"},
            {"v^2", 2, "0", "paper-asserted"},
            {"y4", 2, "0", "paper-asserted"},
        };
        s.assumptions = {
            {"d_r(y1) = d_r(uv) = d_r(v^2) = 0 for all r >= 2", "paper-asserted"},
            {"d_r(y4) = 0 for all r >= 2 (restriction from the level-two "
             "congruence quotient)",
             "paper-asserted"},
        };
        s.expected_final_ring =
            "X 4 polynomial\n"
            "Z1 1 exterior\n"
            "Z2 3 exterior\n"
            "Z3 3 exterior\n";
        s.expected_stable = {{0, 1}, {0, 3}, {3, 0}, {4, 0}};
        s.verify_depth = 8;
    } else {
        s.assumptions = {
            {"the total cohomology is finite-dimensional in each degree, so "
             "the stable columns 2p-5, 2p-3, 2p-2 and 2p modulo 2(p-1) must "
             "eventually vanish",
             "paper-asserted"},
        };
        s.expected_final_ring =
            "Z1 1 exterior\n"
            "Z2 3 exterior\n";
        int a = static_cast<int>(2 * p - 5);
        s.expected_stable = {{0, 1}, {0, 3},         {2, 1},     {2, 2},
                             {a, 1}, {a, 2},         {a + 2, 0}, {a + 3, 0}};
        s.verify_depth = 8;
    }
    return s;
}

Scenario extraspecial_scenario() {
    Scenario s;
    s.name = "extraspecial3";
    s.p = 3;
    s.ext = abelian_extension(3, make_mat(3, {{1, 1}, {0, 1}}));
    s.naming = extraspecial_naming(3);
    s.window = default_window(s.ext);
    s.collapse = true;
    s.assumptions = {
        {"the spectral sequence collapses at the second page", "paper-asserted"},
    };
    s.expected_final_ring =
        "x' 2 polynomial\n"
        "y 1 exterior\n"
        "y' 1 exterior\n"
        "Y 2 exterior\n"
        "Y' 2 exterior\n"
        "yy'\n"
        "yY\n"
        "y'Y'\n"
        "YY'\n"
        "yY' - y'Y\n";
    s.expected_stable = {{0, 1}, {1, 0}, {0, 2}, {1, 1}, {2, 0}};
    s.verify_depth = 6;
    return s;
}

std::vector<std::vector<long long>> int_rows(const json& j) {
    std::vector<std::vector<long long>> rows;
    for (const auto& r : j) {
        rows.push_back({});
        for (const auto& x : r) rows.back().push_back(x.get<long long>());
    }
    return rows;
}

}  // namespace

bool scenario_collapses(const Scenario& s) {
    if (s.collapse) return true;
    if (s.differentials.empty()) return false;
    for (const DifferentialAssumption& d : s.differentials)
        if (d.value != "0") return false;
    return true;
}

Scenario builtin_scenario(const std::string& name, long long p) {
    if (name == "gl2") return gl2_scenario(p);
    if (name == "extraspecial3") return extraspecial_scenario();
    throw Error("unknown built-in scenario: " + name);
}

Scenario load_scenario(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open scenario file: " + path);
    json j;
    try {
        in >> j;
    } catch (const std::exception& e) {
        throw Error("scenario file is not valid JSON: " + std::string(e.what()));
    }
    Scenario s;
    try {
        s.name = j.at("name").get<std::string>();
        s.p = j.at("p").get<long long>();
        if (s.p < 3 || s.p % 2 == 0) throw Error("p must be an odd prime");
        const json& ext = j.at("extension");
        std::string type = ext.at("type").get<std::string>();
        if (type == "congruence") {
            s.ext = congruence_extension(s.p, ext.at("n").get<int>(),
                                         ext.value("level", 1),
                                         int_rows(ext.at("h")));
        } else if (type == "abelian") {
            std::vector<std::vector<long long>> rows = int_rows(ext.at("sigma1"));
            s.ext = abelian_extension(
                s.p, rows.empty() ? FpMat() : make_mat(s.p, rows));
        } else {
            throw Error("unknown extension type: " + type);
        }
        std::string naming = j.value("naming", std::string("default"));
        if (naming == "gl2")
            s.naming = gl2_naming(s.p);
        else if (naming == "extraspecial")
            s.naming = extraspecial_naming(s.p);
        else
            s.naming = default_naming(s.ext);
        s.window = default_window(s.ext);
        if (j.contains("window")) s.window.nmax = j["window"].at("nmax").get<int>();
        s.collapse = j.value("collapse", false);
        for (const json& f : j.value("fusion", json::array())) {
            std::string domain = f.value("domain", std::string("whole"));
            bool kernel_only = domain == "kernel";
            if (!kernel_only && domain != "whole")
                throw Error("fusion domain must be kernel or whole");
            if (f.contains("matrix")) {
                s.fusion.push_back(matrix_generator(f.at("name").get<std::string>(),
                                                    kernel_only, s.p,
                                                    int_rows(f.at("matrix"))));
            } else {
                FusionGenerator g;
                g.name = f.at("name").get<std::string>();
                g.domain = kernel_only ? FusionGenerator::Domain::kernel_only
                                       : FusionGenerator::Domain::whole_group;
                g.has_explicit_h1 = true;
                g.explicit_h1 = make_mat(s.p, int_rows(f.at("h1")));
                s.fusion.push_back(g);
            }
        }
        for (const json& d : j.value("differentials", json::array()))
            s.differentials.push_back({d.at("generator").get<std::string>(),
                                       d.value("page", 2),
                                       d.at("value").get<std::string>(),
                                       d.value("tag", std::string("assumption"))});
        for (const json& a : j.value("assumptions", json::array()))
            s.assumptions.push_back({a.at("text").get<std::string>(),
                                     a.value("tag", std::string("assumption"))});
        if (j.contains("expected")) {
            const json& e = j["expected"];
            s.expected_final_ring = e.value("final_ring", std::string());
            for (const json& b : e.value("stable_bidegrees", json::array()))
                s.expected_stable.push_back(
                    {b.at(0).get<int>(), b.at(1).get<int>()});
            s.verify_depth = e.value("depth", 8);
        }
    } catch (const json::exception& e) {
        throw Error("malformed scenario file: " + std::string(e.what()));
    }
    return s;
}

Scenario resolve_scenario(const std::string& name_or_path, long long p) {
    if (name_or_path == "gl2" || name_or_path == "extraspecial3")
        return builtin_scenario(name_or_path, p);
    return load_scenario(name_or_path);
}

}  // namespace procoh
