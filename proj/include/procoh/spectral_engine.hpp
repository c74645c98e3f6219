#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "procoh/fusion_actions.hpp"

namespace procoh {

struct Window {
    int nmax = 0;
    int mmax = 0;
};

// Covers two periodicity strides plus the corner figures.
Window default_window(const ExtensionDatum& ext);

struct NamedClass {
    std::string name;
    ExtElement rep;
};

// Named representatives spanning each cell.  Cells depend on n only through
// the classes n = 0, even n >= 2, odd n, so the table lists one basis per
// exterior grade m for each of the three classes.
struct NamingTable {
    enum class Style {
        prefix_uv,  // names prefixed u v^k / v^k per column
        absorbed,   // odd-column base names absorb u; powers of the degree-2
                    // polynomial class are appended
    };
    Style style = Style::prefix_uv;
    std::string even_symbol = "v";  // absorbed style only
    std::vector<std::vector<NamedClass>> zero, even_row, odd_row;  // [m]
};

NamingTable gl2_naming(long long p);
NamingTable extraspecial_naming(long long p);
// Canonical representatives with generated names (fallback for file scenarios).
NamingTable default_naming(const ExtensionDatum& ext);

// The ambient second page over a window: one cell per (n,m) with a named
// representative basis, coordinates, and cached products.
class E2Page {
public:
    E2Page(const ExtensionDatum& ext, Window w, const NamingTable& nt);

    const ExtensionDatum& ext() const { return ext_; }
    long long p() const { return ext_.p; }
    int rank() const { return ext_.rank; }
    Window window() const { return window_; }

    int dim(int n, int m) const;
    const std::string& cell_name(int n, int m, int j) const;
    const ExtElement& rep(int n, int m, int j) const;
    ExtElement element(int n, int m, const FpVec& coords) const;
    // Coordinates of a cocycle representative in the cell basis.
    FpVec coords(int n, int m, const ExtElement& e) const;
    FpVec zero_vec(int n, int m) const;
    // Product of classes given in cell coordinates; lands at (n1+n2, m1+m2),
    // which must stay inside the window column-wise (rows above the kernel
    // rank are zero).
    FpVec product(int n1, int m1, const FpVec& a, int n2, int m2,
                  const FpVec& b) const;
    // Human-readable description of a coordinate vector at a cell.
    std::string describe(int n, int m, const FpVec& coords) const;

private:
    struct Cell {
        std::vector<NamedClass> basis;
        Subspace coc, cob;  // in Lambda^m coordinates
        FpMat reduced;      // columns: coboundary-reduced basis representatives
    };
    const Cell& cell(int n, int m) const;
    int n_class(int n) const;  // 0, 1 (odd), 2 (even >= 2)

    ExtensionDatum ext_;
    Window window_;
    std::vector<std::vector<Cell>> cells_;  // [n][m]
    mutable std::map<std::vector<int>, FpVec> product_cache_;
};

struct StablePage {
    const E2Page* page = nullptr;
    std::vector<std::vector<Subspace>> cells;  // [n][m], in cell coordinates

    int dim(int n, int m) const;
};

// Joint equalizer of the whole_group generators cell-by-cell; row 0 is
// additionally intersected with the kernel_only fixed spaces.
StablePage stable_page(const E2Page& page,
                       const std::vector<FusionGenerator>& generators);

// Products of stable classes stay stable (exhaustive inside the window).
bool stable_closed(const StablePage& s);

struct PeriodicityReport {
    bool ok = false;
    std::string detail;
};

// Multiplication by v^{p-1} between stable cells (n,m) -> (n+2(p-1),m) is
// bijective for n >= 1 inside the window.
PeriodicityReport check_v_periodicity(const StablePage& s);

struct PageGenerator {
    int n = 0, m = 0;
    FpVec coords;  // in E2 cell coordinates
    std::string name;
};

// Page r restricted to the stable page: each cell is Z/B in E2 coordinates.
struct PageState {
    const E2Page* page = nullptr;
    int r = 2;
    std::vector<std::vector<Subspace>> Z, B;

    int cell_dim(int n, int m) const;
    std::vector<FpVec> cell_reps(int n, int m) const;
    // All differentials out of (n,m) on pages >= r land inside the window.
    bool window_safe(int n, int m) const;
    bool exhausted() const;  // no page >= r carries a differential
};

PageState initial_state(const StablePage& s);

// Multiplicative indecomposables of the current page, by total degree.
std::vector<PageGenerator> page_generators(const PageState& s);

// Leibniz-consistent d_r assignments on the page generators.  Slot (i,k) is
// the coefficient of generator i's differential on the k-th class of its
// target cell; `solutions` is the subspace of slot vectors for which d_r
// extends linearly and well-definedly to the whole page.
struct DifferentialFamily {
    int r = 2;
    std::vector<PageGenerator> gens;
    std::vector<std::pair<int, int>> slots;
    Subspace solutions;
    std::vector<FpVec> feasible;  // filled by finiteness_constraint_solve
};

DifferentialFamily differential_family(const PageState& s);

// Applies the concrete assignment theta (coordinates on family slots) and
// turns the page.  Throws Error naming the offending cell if d o d != 0.
PageState apply_differentials(const PageState& s, const DifferentialFamily& fam,
                              const FpVec& theta);

// Stable columns that must eventually vanish when the total cohomology is
// finite in each degree: 2p-5, 2p-3, 2p-2, 2p modulo 2(p-1), inside the window.
std::vector<int> doomed_columns(long long p, const Window& w);
bool doomed_columns_vanish(const PageState& s);

struct SolveResult {
    DifferentialFamily family;                  // d_2 on stable generators
    std::vector<std::vector<FpVec>> chains;     // full theta chains, one per
                                                // feasible d_2 assignment
    std::vector<PageState> finals;              // matching terminal pages
};

// Enumerates d_2 assignments on the stable generators compatible with
// Leibniz, d^2 = 0 and the eventual vanishing of the doomed columns
// (existentially over the later pages).  Refuses p = 3 scenarios, whose
// total cohomology has p-torsion-free finiteness arguments unavailable.
SolveResult finiteness_constraint_solve(const StablePage& s);

struct EInfinity {
    PageState state;
    bool sample_independent = true;
    int samples = 0;
};

EInfinity e_infinity(const StablePage& s, const SolveResult& solve);
// All differentials vanish (collapse assumption or p = 3 zero-differential
// assumption): E-infinity is the stable page itself.
EInfinity collapse_e_infinity(const StablePage& s);

struct FreeLift {
    bool free_ = false;
    std::vector<PageGenerator> gens;
    std::vector<bool> polynomial;  // parity per generator (even total degree)
    std::string obstruction_cell;  // first failing bidegree when not free
};

FreeLift detect_free_and_lift(const PageState& s);

}  // namespace procoh
