#include <algorithm>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "procoh/scenario.hpp"

using namespace procoh;

namespace {

bool is_odd_prime(long long p) {
    if (p < 3 || p % 2 == 0) return false;
    for (long long d = 3; d * d <= p; d += 2)
        if (p % d == 0) return false;
    return true;
}

int cmd_jordan_table(long long p, int k) {
    if (!is_odd_prime(p)) throw Error("p must be an odd prime");
    if (k < 1 || k > p)
        throw Error("the Jordan block size k must satisfy 1 <= k <= p");
    CyclicModule M;
    M.dim = k;
    M.p = p;
    M.sigma = attach(FpMat(k, k), p);
    for (int i = 0; i < k; ++i)
        for (int j = 0; j < k; ++j)
            M.sigma(i, j) = Fp(i == j || j == i + 1, p);
    std::cout << "H^n(Z/" << p << "; J^" << k << ") for n = 0..6\n";
    for (int n = 0; n <= 6; ++n)
        std::cout << "n=" << n << ": " << cohomology_dim(M, n) << "\n";
    return 0;
}

struct Prepared {
    Scenario scenario;
    std::optional<E2Page> page;
};

Prepared prepare(const std::string& name_or_path, long long p, int window) {
    Prepared out{resolve_scenario(name_or_path, p), std::nullopt};
    if (window > 0) out.scenario.window.nmax = window;
    out.page.emplace(out.scenario.ext, out.scenario.window, out.scenario.naming);
    return out;
}

void print_provenance(std::ostream& os, const Scenario& s) {
    os << "provenance:\n";
    bool collapse_mentioned = false;
    for (const ScenarioAssumption& a : s.assumptions) {
        os << "  [" << a.tag << "] " << a.text << "\n";
        if (a.text.find("collapse") != std::string::npos) collapse_mentioned = true;
    }
    for (const DifferentialAssumption& d : s.differentials)
        os << "  [" << d.tag << "] d_" << d.page << "(" << d.generator
           << ") = " << d.value << "\n";
    if (s.collapse && !collapse_mentioned)
        os << "  [assumption] all differentials vanish from page 2 on\n";
    if (s.assumptions.empty() && s.differentials.empty() && !s.collapse)
        os << "  (none)\n";
}

int cmd_e2(const std::string& name_or_path, long long p, int window,
           const std::string& format) {
    Prepared pr = prepare(name_or_path, p, window);
    const E2Page& page = *pr.page;
    const Scenario& s = pr.scenario;
    if (format == "json") {
        nlohmann::ordered_json j;
        j["scenario"] = s.name;
        j["p"] = s.p;
        j["window"] = {{"nmax", s.window.nmax}, {"mmax", s.window.mmax}};
        nlohmann::ordered_json cells = nlohmann::ordered_json::object();
        for (int n = 0; n <= s.window.nmax; ++n)
            for (int m = 0; m <= page.rank(); ++m) {
                std::vector<std::string> names;
                for (int k = 0; k < page.dim(n, m); ++k)
                    names.push_back(page.cell_name(n, m, k));
                cells[std::to_string(n) + "," + std::to_string(m)] = names;
            }
        j["cells"] = cells;
        std::cout << j.dump(2) << "\n";
        return 0;
    }
    std::cout << "E2 corner for " << s.name << " (p=" << s.p
              << ", window n<=" << s.window.nmax << ", m<=" << page.rank()
              << ")\n";
    for (int n = 0; n <= s.window.nmax; ++n)
        for (int m = 0; m <= page.rank(); ++m) {
            if (!page.dim(n, m)) continue;
            std::cout << "n=" << n << " m=" << m << ":";
            for (int k = 0; k < page.dim(n, m); ++k)
                std::cout << (k ? ", " : " ") << page.cell_name(n, m, k);
            std::cout << "\n";
        }
    print_provenance(std::cout, s);
    return 0;
}

void print_generators(std::ostream& os, const std::vector<PageGenerator>& gens) {
    for (const PageGenerator& g : gens)
        os << "  " << g.name << " at (" << g.n << "," << g.m << ")\n";
}

std::vector<std::pair<int, int>> bidegrees(const std::vector<PageGenerator>& gens) {
    std::vector<std::pair<int, int>> out;
    for (const PageGenerator& g : gens) out.push_back({g.n, g.m});
    std::sort(out.begin(), out.end());
    return out;
}

std::string bidegree_list(const std::vector<std::pair<int, int>>& bs) {
    std::ostringstream os;
    for (size_t i = 0; i < bs.size(); ++i)
        os << (i ? " " : "") << "(" << bs[i].first << "," << bs[i].second << ")";
    return os.str();
}

int cmd_stable(const std::string& name_or_path, long long p, int window) {
    Prepared pr = prepare(name_or_path, p, window);
    const Scenario& s = pr.scenario;
    StablePage st = stable_page(*pr.page, s.fusion);
    std::cout << "stable page for " << s.name << " (p=" << s.p << ")\n";
    std::cout << "dimensions (rows m = " << pr.page->rank()
              << "..0, columns n = 0.." << s.window.nmax << "):\n";
    for (int m = pr.page->rank(); m >= 0; --m) {
        std::cout << "  m=" << m << ":";
        for (int n = 0; n <= s.window.nmax; ++n) std::cout << " " << st.dim(n, m);
        std::cout << "\n";
    }
    std::vector<PageGenerator> gens = page_generators(initial_state(st));
    std::cout << "multiplicative generators:\n";
    print_generators(std::cout, gens);
    std::cout << "products of stable classes stay stable: "
              << (stable_closed(st) ? "yes" : "no") << "\n";
    PeriodicityReport per = check_v_periodicity(st);
    std::cout << "v^(p-1) periodicity: " << (per.ok ? "holds" : "fails");
    if (!per.detail.empty()) std::cout << " (" << per.detail << ")";
    std::cout << "\n";
    print_provenance(std::cout, s);
    return 0;
}

RingPresentation lift_presentation(const E2Page& page, const FreeLift& lift) {
    std::vector<RingGenerator> gens;
    for (size_t i = 0; i < lift.gens.size(); ++i)
        gens.push_back({lift.gens[i].name,
                        lift.gens[i].n + lift.gens[i].m,
                        lift.polynomial[i]});
    return free_presentation(page.p(), gens);
}

int cmd_run(const std::string& name_or_path, long long p, int window,
            bool verify) {
    Prepared pr = prepare(name_or_path, p, window);
    const Scenario& s = pr.scenario;
    const E2Page& page = *pr.page;
    std::cout << "scenario " << s.name << " (p=" << s.p << ", window n<="
              << s.window.nmax << ", m<=" << page.rank() << ")\n\n";

    std::cout << "E2 page dimensions (rows m = " << page.rank()
              << "..0, columns n = 0.." << s.window.nmax << "):\n";
    for (int m = page.rank(); m >= 0; --m) {
        std::cout << "  m=" << m << ":";
        for (int n = 0; n <= s.window.nmax; ++n)
            std::cout << " " << page.dim(n, m);
        std::cout << "\n";
    }

    E2Presentation e2pres = presentation_of_e2(page);
    std::cout << "\nE2 ring presentation ("
              << (e2pres.certified ? "certified inside the window"
                                   : "window too small to certify")
              << "):\n";
    for (size_t i = 0; i < e2pres.pres.generators.size(); ++i) {
        const RingGenerator& g = e2pres.pres.generators[i];
        std::cout << "  " << g.name << " at (" << e2pres.page_gens[i].n << ","
                  << e2pres.page_gens[i].m << "), degree " << g.degree << ", "
                  << (g.polynomial ? "polynomial" : "exterior") << "\n";
    }
    std::cout << "  relations:";
    if (e2pres.pres.relations.empty()) std::cout << " (none)";
    std::cout << "\n";
    for (const RingPoly& rel : e2pres.pres.relations)
        std::cout << "    " << render(e2pres.pres, rel) << " = 0\n";

    StablePage st = stable_page(page, s.fusion);
    std::vector<PageGenerator> stable_gens = page_generators(initial_state(st));
    std::cout << "\nstable generators:\n";
    print_generators(std::cout, stable_gens);
    PeriodicityReport per = check_v_periodicity(st);
    std::cout << "v^(p-1) periodicity: " << (per.ok ? "holds" : "fails") << "\n";

    EInfinity einf;
    if (scenario_collapses(s)) {
        std::cout << "\ndifferential family: all differentials assumed zero\n";
        einf = collapse_e_infinity(st);
    } else {
        SolveResult solve = finiteness_constraint_solve(st);
        std::cout << "\ndifferential family on page 2:\n";
        std::cout << "  generators with candidate targets:";
        std::vector<std::string> slot_names;
        for (auto [gi, k] : solve.family.slots) {
            std::ostringstream os;
            os << solve.family.gens[gi].name << "->" << k;
            slot_names.push_back(os.str());
        }
        for (const std::string& sn : slot_names) std::cout << " " << sn;
        std::cout << "\n  Leibniz solution space dimension: "
                  << solve.family.solutions.dim() << "\n";
        std::cout << "  assignments surviving the finiteness constraint: "
                  << solve.family.feasible.size() << "\n";
        einf = e_infinity(st, solve);
        std::cout << "  E-infinity sample independent: "
                  << (einf.sample_independent ? "yes" : "no") << " over "
                  << einf.samples << " instantiations\n";
    }

    FreeLift lift = detect_free_and_lift(einf.state);
    std::optional<RingPresentation> final_ring;
    std::cout << "\nE-infinity page:\n";
    if (lift.free_) {
        std::cout << "  free on:\n";
        print_generators(std::cout, lift.gens);
        std::cout << "  the only lift of a free bigraded page is the free "
                     "graded ring on the same total degrees\n";
        final_ring = lift_presentation(page, lift);
    } else {
        std::cout << "  not free over its generators (first obstruction at "
                  << lift.obstruction_cell << ")\n";
        if (scenario_collapses(s)) {
            std::cout << "  reporting the E2 ring presentation computed above "
                         "as the associated graded ring\n";
            final_ring = e2pres.pres;
        }
    }

    if (final_ring) {
        std::cout << "\nfinal ring:\n";
        std::istringstream lines(to_text(*final_ring));
        std::string line;
        while (std::getline(lines, line)) std::cout << "  " << line << "\n";
        DualityReport dual = duality_degrees(*final_ring);
        std::cout << "duality check: ";
        if (!dual.applicable) {
            std::cout << "not applicable (" << dual.detail << ")\n";
        } else {
            std::cout << "polynomial part degrees [";
            for (size_t i = 0; i < dual.polynomial_degrees.size(); ++i)
                std::cout << (i ? " " : "") << dual.polynomial_degrees[i];
            std::cout << "], finite part top degree " << dual.top_degree << ", "
                      << (dual.palindromic ? "palindromic" : "not palindromic")
                      << "\n";
        }
    }

    std::cout << "\n";
    print_provenance(std::cout, s);

    if (!verify) return 0;
    bool pass = true;
    std::cout << "\nverification:\n";
    if (!s.expected_stable.empty()) {
        std::vector<std::pair<int, int>> want = s.expected_stable;
        std::sort(want.begin(), want.end());
        std::vector<std::pair<int, int>> got = bidegrees(stable_gens);
        bool ok = got == want;
        pass = pass && ok;
        std::cout << "  stable generator bidegrees: "
                  << (ok ? "PASS" : "FAIL") << "\n";
        if (!ok) {
            std::cout << "    expected " << bidegree_list(want) << "\n";
            std::cout << "    computed " << bidegree_list(got) << "\n";
        }
    }
    if (!s.expected_final_ring.empty()) {
        if (!final_ring) {
            pass = false;
            std::cout << "  final ring: FAIL (no ring computed)\n";
        } else {
            RingPresentation target =
                parse_presentation(s.expected_final_ring, s.p);
            Comparison cmp = truncated_equal(*final_ring, target, s.verify_depth);
            bool ok = cmp.verdict == Verdict::isomorphic;
            pass = pass && ok;
            std::cout << "  final ring vs expected presentation: "
                      << (ok ? "PASS" : "FAIL") << " (" << cmp.detail << ")\n";
        }
    }
    std::cout << (pass ? "VERIFY PASS" : "VERIFY FAIL") << "\n";
    return pass ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"continuous mod-p cohomology of compact p-adic analytic groups"};
    app.require_subcommand(1);

    long long p = 0;
    int k = 0;
    std::string scenario_arg, format = "text";
    int window = 0;
    bool verify = false;

    CLI::App* jordan = app.add_subcommand("jordan-table",
                                          "cohomology of Z/p with Jordan block "
                                          "coefficients");
    jordan->add_option("--p", p, "odd prime")->required();
    jordan->add_option("--k", k, "Jordan block size")->required();

    CLI::App* e2 = app.add_subcommand("e2", "dump the E2 corner");
    e2->add_option("--scenario", scenario_arg, "built-in name or JSON file")
        ->required();
    e2->add_option("--p", p, "prime for the gl2 built-in");
    e2->add_option("--format", format, "text or json")
        ->check(CLI::IsMember({"text", "json"}));
    e2->add_option("--window", window, "override the window width");

    CLI::App* stable = app.add_subcommand("stable", "fusion-stable page");
    stable->add_option("--scenario", scenario_arg, "built-in name or JSON file")
        ->required();
    stable->add_option("--p", p, "prime for the gl2 built-in");
    stable->add_option("--window", window, "override the window width");

    CLI::App* run = app.add_subcommand("run", "full spectral sequence run");
    run->add_option("--scenario", scenario_arg, "built-in name or JSON file")
        ->required();
    run->add_option("--p", p, "prime for the gl2 built-in");
    run->add_option("--window", window, "override the window width");
    run->add_flag("--verify", verify, "compare against the expected outputs");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }

    try {
        if (jordan->parsed()) return cmd_jordan_table(p, k);
        if (e2->parsed()) return cmd_e2(scenario_arg, p, window, format);
        if (stable->parsed()) return cmd_stable(scenario_arg, p, window);
        if (run->parsed()) return cmd_run(scenario_arg, p, window, verify);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
