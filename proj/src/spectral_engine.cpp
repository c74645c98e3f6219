#include "procoh/spectral_engine.hpp"

#include <algorithm>
#include <cassert>
#include <cstdlib>
#include <functional>
#include <sstream>

namespace procoh {

namespace {

FpVec unit_vec(int dim, int j, long long p) {
    FpVec v(dim);
    for (int i = 0; i < dim; ++i) v(i) = Fp(i == j, p);
    return v;
}

FpVec zero_of(int dim, long long p) {
    FpVec v(dim);
    for (int i = 0; i < dim; ++i) v(i) = Fp(0, p);
    return v;
}

bool is_zero_vec(const FpVec& v) {
    for (Eigen::Index i = 0; i < v.size(); ++i)
        if (!v(i).is_zero()) return false;
    return true;
}

FpVec row_of(const Subspace& s, int i, long long p) {
    FpVec v = zero_of(s.ambient, p);
    for (int c = 0; c < s.ambient; ++c) v(c) = s.basis(i, c);
    return v;
}

Subspace row_span(const std::vector<FpVec>& rows, int ambient, long long p) {
    if (rows.empty() || ambient == 0) return Subspace::zero(ambient, p);
    FpMat m = attach(FpMat(static_cast<int>(rows.size()), ambient), p);
    for (size_t i = 0; i < rows.size(); ++i)
        for (int c = 0; c < ambient; ++c) m(static_cast<int>(i), c) = rows[i](c);
    return Subspace::span(m, ambient, p);
}

// Solves sum_j x_j cols[j] = v; empty optional if inconsistent.
std::optional<FpVec> solve_in_span(const std::vector<FpVec>& cols, const FpVec& v,
                                   long long p) {
    int dim = static_cast<int>(v.size());
    int k = static_cast<int>(cols.size());
    if (dim == 0) return zero_of(k, p);
    FpMat aug = attach(FpMat(dim, k + 1), p);
    for (int j = 0; j < k; ++j)
        for (int i = 0; i < dim; ++i) aug(i, j) = cols[j](i);
    for (int i = 0; i < dim; ++i) aug(i, k) = v(i);
    RrefResult r = rref(aug);
    FpVec x = zero_of(k, p);
    for (size_t row = 0; row < r.pivots.size(); ++row) {
        int piv = r.pivots[row];
        if (piv == k) return std::nullopt;
        x(piv) = r.mat(static_cast<int>(row), k);
    }
    return x;
}

std::string coeff_str(const Fp& c, long long p) {
    long long v = 0;
    for (long long i = 0; i < p; ++i)
        if (Fp(i, p) == c) { v = i; break; }
    if (v > p / 2) v -= p;
    std::ostringstream os;
    os << v;
    return os.str();
}

}  // namespace

Window default_window(const ExtensionDatum& ext) {
    return Window{static_cast<int>(4 * (ext.p - 1) + 4), ext.rank};
}

// ---------------------------------------------------------------------------
// Naming tables

namespace {

const std::vector<std::string> kGl2Names = {"y11", "y12", "y21", "y22"};

NamedClass named(const std::string& name, const std::string& expr, long long p) {
    return NamedClass{name, parse_ext(expr, 4, p, kGl2Names)};
}

}  // namespace

NamingTable gl2_naming(long long p) {
    NamingTable t;
    t.style = NamingTable::Style::prefix_uv;
    auto e = [&](const std::string& name, const std::string& expr) {
        return named(name, expr, p);
    };
    NamedClass one{"1", ExtElement::unit(4, p)};
    NamedClass y1 = e("y1", "y11 + y22");
    NamedClass y2 = e("y2", "y21");
    NamedClass y3 = e("y3", "y11y21");
    NamedClass y4 = e("y4", "y11y12y21 - y12y21y22");
    NamedClass y1y2 = e("y1y2", "y11y21 - y21y22");
    NamedClass y1y3 = e("y1y3", "y11y21y22");
    NamedClass y1y4 = e("y1y4", "-2y11y12y21y22");
    NamedClass yb2 = e("~y2", "y12 - y11");
    NamedClass yb3 = e("~y3", "y12y22 - y12y21");
    NamedClass yb12 = e("~y1y2", "y12y22 - y12y21 - y11y12");
    NamedClass yb13 = e("~y1y3", "y11y12y21 - y11y12y22");
    t.zero = {{one}, {y1, y2}, {y3, y1y2}, {y4, y1y3}, {y1y4}};
    if (p == 3) {
        t.even_row = {{one}, {y1}, {}, {y4}, {y1y4}};
        t.odd_row = {{one}, {y1}, {}, {y4}, {y1y4}};
    } else {
        t.even_row = {{one}, {y1, y2}, {y3, y1y2}, {y4, y1y3}, {y1y4}};
        t.odd_row = {{one}, {y1, yb2}, {yb3, yb12}, {y4, yb13}, {y1y4}};
    }
    return t;
}

NamingTable extraspecial_naming(long long p) {
    NamingTable t;
    t.style = NamingTable::Style::absorbed;
    t.even_symbol = "x'";
    NamedClass one{"1", ExtElement::unit(2, p)};
    NamedClass y{"y", ExtElement::generator(2, p, 0)};
    NamedClass Yp{"Y'", ExtElement::generator(2, p, 1)};
    ExtElement Yrep =
        wedge(ExtElement::generator(2, p, 0), ExtElement::generator(2, p, 1));
    NamedClass Y{"Y", Yrep};
    NamedClass Yyp{"Yy'", Yrep};
    NamedClass yp{"y'", ExtElement::unit(2, p)};
    t.zero = {{one}, {y}, {Y}};
    t.even_row = {{one}, {y}, {Y}};
    t.odd_row = {{yp}, {Yp}, {Yyp}};
    return t;
}

namespace {

// grade_module needs an attached matrix; a rank-0 kernel has none, so its
// trivial modules are built directly.
CyclicModule extension_grade_module(const ExtensionDatum& ext, int m) {
    if (ext.rank > 0) return grade_module(ext.sigma1, m);
    CyclicModule M;
    M.p = ext.p;
    M.dim = m == 0 ? 1 : 0;
    M.sigma = FpMat(M.dim, M.dim);
    if (M.dim) M.sigma(0, 0) = Fp(1, ext.p);
    return M;
}

}  // namespace

NamingTable default_naming(const ExtensionDatum& ext) {
    NamingTable t;
    t.style = NamingTable::Style::prefix_uv;
    int d = ext.rank;
    t.zero.resize(d + 1);
    t.even_row.resize(d + 1);
    t.odd_row.resize(d + 1);
    for (int m = 0; m <= d; ++m) {
        for (int n : {0, 1, 2}) {
            CyclicModule M = extension_grade_module(ext, m);
            std::vector<FpVec> reps = class_representatives(M, n);
            std::vector<NamedClass>& out =
                n == 0 ? t.zero[m] : (n == 1 ? t.odd_row[m] : t.even_row[m]);
            for (size_t j = 0; j < reps.size(); ++j) {
                std::ostringstream os;
                if (m == 0) {
                    os << "1";
                } else {
                    os << "c" << m;
                    if (reps.size() > 1) os << "_" << j;
                }
                out.push_back(
                    NamedClass{os.str(), from_grade_coords(d, ext.p, m, reps[j])});
            }
        }
    }
    return t;
}

// ---------------------------------------------------------------------------
// E2Page

namespace {

std::string column_affix(const NamingTable& nt, int n) {
    std::ostringstream os;
    if (nt.style == NamingTable::Style::prefix_uv) {
        if (n % 2 == 1) os << "u";
        int k = n / 2;
        if (k == 1) os << "v";
        if (k > 1) os << "v^" << k;
    } else {
        int k = n / 2;
        if (k == 1) os << nt.even_symbol;
        if (k > 1) os << nt.even_symbol << "^" << k;
    }
    return os.str();
}

std::string display_name(const NamingTable& nt, int n, const std::string& base) {
    std::string affix = column_affix(nt, n);
    if (affix.empty()) return base;
    if (base == "1") return affix;
    if (nt.style == NamingTable::Style::prefix_uv) return affix + base;
    return base + affix;
}

}  // namespace

E2Page::E2Page(const ExtensionDatum& ext, Window w, const NamingTable& nt)
    : ext_(ext), window_(w) {
    if (w.nmax < 2 || w.nmax > 200) throw Error("unsupported window size");
    if (w.mmax != ext.rank) throw Error("window row count must equal the kernel rank");
    int d = ext.rank;
    long long p = ext.p;
    if (static_cast<int>(nt.zero.size()) != d + 1 ||
        static_cast<int>(nt.even_row.size()) != d + 1 ||
        static_cast<int>(nt.odd_row.size()) != d + 1)
        throw Error("naming table has wrong number of rows");
    cells_.resize(w.nmax + 1);
    for (int n = 0; n <= w.nmax; ++n) {
        cells_[n].resize(d + 1);
        for (int m = 0; m <= d; ++m) {
            Cell& c = cells_[n][m];
            CyclicModule M = extension_grade_module(ext, m);
            c.coc = cocycles(M, n);
            c.cob = coboundaries(M, n);
            const std::vector<NamedClass>& base =
                n == 0 ? nt.zero[m] : (n % 2 ? nt.odd_row[m] : nt.even_row[m]);
            int k = static_cast<int>(base.size());
            if (k != cohomology_dim(M, n))
                throw Error("naming table does not span a cell");
            c.reduced = attach(FpMat(M.dim, k), p);
            for (int j = 0; j < k; ++j) {
                FpVec v = grade_coords(base[j].rep, m);
                if (!c.coc.contains(v))
                    throw Error("naming table representative is not a cocycle");
                FpVec red = c.cob.reduce(v);
                for (int i = 0; i < M.dim; ++i) c.reduced(i, j) = red(i);
                c.basis.push_back(
                    NamedClass{display_name(nt, n, base[j].name), base[j].rep});
            }
            if (rref(c.reduced).rank != k)
                throw Error("naming table representatives are dependent");
        }
    }
}

const E2Page::Cell& E2Page::cell(int n, int m) const {
    assert(n >= 0 && n <= window_.nmax && m >= 0 && m <= ext_.rank);
    return cells_[n][m];
}

int E2Page::dim(int n, int m) const {
    if (n < 0 || m < 0 || m > ext_.rank) return 0;
    return static_cast<int>(cell(n, m).basis.size());
}

const std::string& E2Page::cell_name(int n, int m, int j) const {
    return cell(n, m).basis[j].name;
}

const ExtElement& E2Page::rep(int n, int m, int j) const {
    return cell(n, m).basis[j].rep;
}

ExtElement E2Page::element(int n, int m, const FpVec& coords) const {
    const Cell& c = cell(n, m);
    ExtElement out(ext_.rank, ext_.p);
    for (int j = 0; j < static_cast<int>(c.basis.size()); ++j)
        out = out + c.basis[j].rep * coords(j);
    return out;
}

FpVec E2Page::coords(int n, int m, const ExtElement& e) const {
    const Cell& c = cell(n, m);
    long long p = ext_.p;
    int lam = static_cast<int>(c.reduced.rows());
    FpVec v = e.is_zero() ? zero_of(lam, p) : grade_coords(e, m);
    if (!c.coc.contains(v)) throw Error("class representative is not a cocycle");
    FpVec red = c.cob.reduce(v);
    std::vector<FpVec> cols;
    for (int j = 0; j < c.reduced.cols(); ++j) {
        FpVec col = zero_of(lam, p);
        for (int i = 0; i < lam; ++i) col(i) = c.reduced(i, j);
        cols.push_back(col);
    }
    std::optional<FpVec> x = solve_in_span(cols, red, p);
    if (!x) throw Error("representative leaves the cell basis span");
    return *x;
}

FpVec E2Page::zero_vec(int n, int m) const { return zero_of(dim(n, m), ext_.p); }

int E2Page::n_class(int n) const { return n == 0 ? 0 : (n % 2 ? 1 : 2); }

FpVec E2Page::product(int n1, int m1, const FpVec& a, int n2, int m2,
                      const FpVec& b) const {
    int n = n1 + n2, m = m1 + m2;
    assert(n <= window_.nmax);
    if (m > ext_.rank) return FpVec();
    FpVec out = zero_vec(n, m);
    for (int j1 = 0; j1 < dim(n1, m1); ++j1) {
        if (a(j1).is_zero()) continue;
        for (int j2 = 0; j2 < dim(n2, m2); ++j2) {
            if (b(j2).is_zero()) continue;
            std::vector<int> key = {n_class(n1), m1, j1, n_class(n2), m2, j2};
            auto it = product_cache_.find(key);
            if (it == product_cache_.end()) {
                ExtElement prod = e2_product(n1, rep(n1, m1, j1), n2,
                                             rep(n2, m2, j2), ext_.sigma1);
                it = product_cache_.emplace(key, coords(n, m, prod)).first;
            }
            out = out + FpVec(it->second * (a(j1) * b(j2)));
        }
    }
    return out;
}

std::string E2Page::describe(int n, int m, const FpVec& coords) const {
    std::ostringstream os;
    bool first = true;
    for (int j = 0; j < dim(n, m); ++j) {
        if (coords(j).is_zero()) continue;
        std::string c = coeff_str(coords(j), ext_.p);
        bool neg = !c.empty() && c[0] == '-';
        std::string mag = neg ? c.substr(1) : c;
        if (first) {
            if (neg) os << "-";
        } else {
            os << (neg ? " - " : " + ");
        }
        if (mag != "1") os << mag;
        os << cell_name(n, m, j);
        first = false;
    }
    if (first) os << "0";
    return os.str();
}

// ---------------------------------------------------------------------------
// Stable page

int StablePage::dim(int n, int m) const {
    if (n < 0 || n > page->window().nmax || m < 0 || m > page->rank()) return 0;
    return cells[n][m].dim();
}

StablePage stable_page(const E2Page& page,
                       const std::vector<FusionGenerator>& generators) {
    const ExtensionDatum& ext = page.ext();
    long long p = ext.p;
    Window w = page.window();
    StablePage out;
    out.page = &page;
    out.cells.resize(w.nmax + 1);

    std::vector<ClassAction> whole;
    std::vector<FusionGenerator> kernel_gens;
    for (const FusionGenerator& g : generators) {
        if (g.domain == FusionGenerator::Domain::whole_group)
            whole.push_back(class_action(g, ext));
        else
            kernel_gens.push_back(g);
    }
    std::vector<Subspace> row0 = row0_stable(ext, kernel_gens);

    for (int n = 0; n <= w.nmax; ++n) {
        out.cells[n].resize(ext.rank + 1);
        for (int m = 0; m <= ext.rank; ++m) {
            int k = page.dim(n, m);
            std::vector<Subspace> pieces = {Subspace::full(k, p)};
            for (const ClassAction& a : whole) {
                FpMat A = attach(FpMat(k, k), p);
                FpMat I = attach(FpMat(k, k), p);
                for (int j = 0; j < k; ++j) {
                    FpVec img = page.coords(
                        n, m, act_on_class(a, n, page.rep(n, m, j), ext.sigma1));
                    for (int i = 0; i < k; ++i) {
                        A(i, j) = img(i);
                        I(i, j) = Fp(i == j, p);
                    }
                }
                pieces.push_back(equalizer({{A, I}}, k, p));
            }
            if (n == 0 && !kernel_gens.empty()) {
                // convert the Lambda^m fixed space into cell coordinates
                const Subspace& fixed = row0[m];
                std::vector<FpVec> rows;
                for (int i = 0; i < fixed.dim(); ++i) {
                    FpVec v = row_of(fixed, i, p);
                    ExtElement e = from_grade_coords(ext.rank, p, m, v);
                    rows.push_back(page.coords(0, m, e));
                }
                pieces.push_back(row_span(rows, k, p));
            }
            out.cells[n][m] = intersect(pieces);
        }
    }
    return out;
}

bool stable_closed(const StablePage& s) {
    const E2Page& page = *s.page;
    Window w = page.window();
    long long p = page.p();
    for (int n1 = 0; n1 <= w.nmax; ++n1)
        for (int m1 = 0; m1 <= page.rank(); ++m1) {
            const Subspace& A = s.cells[n1][m1];
            if (A.dim() == 0) continue;
            for (int n2 = 0; n1 + n2 <= w.nmax; ++n2)
                for (int m2 = 0; m1 + m2 <= page.rank(); ++m2) {
                    const Subspace& B = s.cells[n2][m2];
                    if (B.dim() == 0) continue;
                    for (int i = 0; i < A.dim(); ++i)
                        for (int j = 0; j < B.dim(); ++j) {
                            FpVec prod = page.product(n1, m1, row_of(A, i, p), n2,
                                                      m2, row_of(B, j, p));
                            if (prod.size() == 0) continue;
                            if (!s.cells[n1 + n2][m1 + m2].contains(prod))
                                return false;
                        }
                }
        }
    return true;
}

PeriodicityReport check_v_periodicity(const StablePage& s) {
    const E2Page& page = *s.page;
    long long p = page.p();
    Window w = page.window();
    int stride = static_cast<int>(2 * (p - 1));
    PeriodicityReport rep;
    if (w.nmax < stride + 2) {
        rep.ok = false;
        rep.detail = "window too small";
        return rep;
    }
    FpVec vp = unit_vec(page.dim(stride, 0), 0, p);  // the class of v^{p-1}
    for (int n = 1; n + stride <= w.nmax; ++n)
        for (int m = 0; m <= page.rank(); ++m) {
            const Subspace& src = s.cells[n][m];
            const Subspace& dst = s.cells[n + stride][m];
            if (src.dim() != dst.dim()) {
                std::ostringstream os;
                os << "dimension mismatch between (" << n << "," << m << ") and ("
                   << n + stride << "," << m << ")";
                rep.ok = false;
                rep.detail = os.str();
                return rep;
            }
            std::vector<FpVec> rows;
            for (int i = 0; i < src.dim(); ++i)
                rows.push_back(page.product(stride, 0, vp, n, m, row_of(src, i, p)));
            if (!(row_span(rows, dst.ambient, p) == dst)) {
                std::ostringstream os;
                os << "v^" << (p - 1) << " multiplication is not bijective at ("
                   << n << "," << m << ")";
                rep.ok = false;
                rep.detail = os.str();
                return rep;
            }
        }
    rep.ok = true;
    rep.detail = "v-periodicity holds on the window";
    return rep;
}

// ---------------------------------------------------------------------------
// Page states

int PageState::cell_dim(int n, int m) const {
    if (n < 0 || n > page->window().nmax || m < 0 || m > page->rank()) return 0;
    return Z[n][m].dim() - B[n][m].dim();
}

std::vector<FpVec> PageState::cell_reps(int n, int m) const {
    return quotient_reps(Z[n][m], B[n][m]);
}

bool PageState::window_safe(int n, int m) const {
    if (m == 0) return true;
    return n + m + 1 <= page->window().nmax;
}

bool PageState::exhausted() const { return r > page->rank() + 1; }

PageState initial_state(const StablePage& s) {
    PageState st;
    st.page = s.page;
    st.r = 2;
    st.Z = s.cells;
    st.B.resize(st.Z.size());
    for (size_t n = 0; n < st.Z.size(); ++n) {
        st.B[n].reserve(st.Z[n].size());
        for (size_t m = 0; m < st.Z[n].size(); ++m)
            st.B[n].push_back(Subspace::zero(st.Z[n][m].ambient, s.page->p()));
    }
    return st;
}

namespace {

// Coordinates of v in the quotient-representative basis of Z/B.
FpVec quotient_coords(const PageState& s, int n, int m, const FpVec& v,
                      const std::vector<FpVec>& qreps) {
    long long p = s.page->p();
    const Subspace& B = s.B[n][m];
    std::vector<FpVec> cols = qreps;
    for (int i = 0; i < B.dim(); ++i) cols.push_back(row_of(B, i, p));
    std::optional<FpVec> x = solve_in_span(cols, v, p);
    if (!x) throw Error("vector is not a cycle of the current page");
    FpVec out = zero_of(static_cast<int>(qreps.size()), p);
    for (size_t i = 0; i < qreps.size(); ++i)
        out(static_cast<int>(i)) = (*x)(static_cast<int>(i));
    return out;
}

}  // namespace

std::vector<PageGenerator> page_generators(const PageState& s) {
    const E2Page& page = *s.page;
    long long p = page.p();
    Window w = page.window();
    std::vector<PageGenerator> gens;
    // Cells are processed by total degree, so once a cell is reached, products
    // of the found generators with the cycle spaces of lower cells already
    // span every decomposable class.
    for (int total = 1; total <= w.nmax + page.rank(); ++total) {
        for (int n = 0; n <= std::min(total, w.nmax); ++n) {
            int m = total - n;
            if (m < 0 || m > page.rank()) continue;
            std::vector<Subspace> pieces = {s.B[n][m]};
            for (const PageGenerator& g : gens) {
                int n2 = n - g.n, m2 = m - g.m;
                if (n2 < 0 || m2 < 0) continue;
                const Subspace& low = s.Z[n2][m2];
                if (low.dim() == 0) continue;
                std::vector<FpVec> rows;
                for (int i = 0; i < low.dim(); ++i)
                    rows.push_back(
                        page.product(g.n, g.m, g.coords, n2, m2, row_of(low, i, p)));
                pieces.push_back(row_span(rows, page.dim(n, m), p));
            }
            Subspace span = sum(pieces);
            if (!s.Z[n][m].contains(span))
                throw Error("page products left the cycle space");
            if (span.dim() == s.Z[n][m].dim()) continue;
            // prefer named cell-basis directions, then echelon rows
            for (int j = 0; j < page.dim(n, m); ++j) {
                FpVec u = unit_vec(page.dim(n, m), j, p);
                if (!s.Z[n][m].contains(u) || span.contains(u)) continue;
                gens.push_back(PageGenerator{n, m, u, page.cell_name(n, m, j)});
                span = sum({span, row_span({u}, page.dim(n, m), p)});
            }
            for (int i = 0; i < s.Z[n][m].dim(); ++i) {
                FpVec v = row_of(s.Z[n][m], i, p);
                if (span.contains(v)) continue;
                gens.push_back(PageGenerator{n, m, v, page.describe(n, m, v)});
                span = sum({span, row_span({v}, page.dim(n, m), p)});
            }
        }
    }
    return gens;
}

// ---------------------------------------------------------------------------
// Differentials

namespace {

struct Monomial {
    std::vector<int> exps;
    int n = 0, m = 0;
    FpVec value;  // second-page cell coordinates at (n,m)
};

struct MonomialSet {
    std::vector<Monomial> monos;
    std::map<std::vector<int>, int> index;
};

// All products of the generators inside the window; zero-valued monomials are
// kept because they constrain the differential.
MonomialSet enumerate_monomials(const PageState& s,
                                const std::vector<PageGenerator>& gens) {
    const E2Page& page = *s.page;
    Window w = page.window();
    MonomialSet out;
    Monomial one;
    one.exps.assign(gens.size(), 0);
    one.value = unit_vec(page.dim(0, 0), 0, page.p());
    out.index[one.exps] = 0;
    out.monos.push_back(one);
    for (size_t gi = 0; gi < gens.size(); ++gi) {
        const PageGenerator& g = gens[gi];
        int cap = (g.n + g.m) % 2 ? 1 : w.nmax + page.rank();  // odd squares vanish
        size_t existing = out.monos.size();
        for (size_t a = 0; a < existing; ++a) {
            Monomial cur = out.monos[a];
            for (int e = 1; e <= cap; ++e) {
                int n = cur.n + g.n, m = cur.m + g.m;
                if (n > w.nmax || m > page.rank()) break;
                Monomial next;
                next.exps = cur.exps;
                next.exps[gi] += 1;
                next.n = n;
                next.m = m;
                next.value = page.product(cur.n, cur.m, cur.value, g.n, g.m, g.coords);
                out.index[next.exps] = static_cast<int>(out.monos.size());
                out.monos.push_back(next);
                cur = out.monos.back();
            }
        }
    }
    return out;
}

struct SlotTargets {
    std::vector<int> first_slot;            // -1 when the generator has no slots
    std::vector<std::vector<FpVec>> qreps;  // target-cell class reps per generator
};

SlotTargets slot_targets(const PageState& s, const DifferentialFamily& fam) {
    SlotTargets st;
    st.first_slot.assign(fam.gens.size(), -1);
    st.qreps.resize(fam.gens.size());
    for (size_t sl = 0; sl < fam.slots.size(); ++sl) {
        int gi = fam.slots[sl].first;
        if (st.first_slot[gi] < 0) st.first_slot[gi] = static_cast<int>(sl);
    }
    for (size_t gi = 0; gi < fam.gens.size(); ++gi) {
        if (st.first_slot[gi] < 0) continue;
        st.qreps[gi] = s.cell_reps(fam.gens[gi].n + fam.r, fam.gens[gi].m + 1 - fam.r);
    }
    return st;
}

// d(mono) as a linear function of the slot values: pairs (slot, target-cell
// coordinate vector) via the Leibniz rule.
std::vector<std::pair<int, FpVec>> symbolic_differential(
    const PageState& s, const DifferentialFamily& fam, const SlotTargets& st,
    const MonomialSet& ms, const Monomial& mono) {
    const E2Page& page = *s.page;
    long long p = page.p();
    std::vector<std::pair<int, FpVec>> out;
    for (size_t gi = 0; gi < fam.gens.size(); ++gi) {
        if (mono.exps[gi] == 0) continue;
        if (st.first_slot[gi] < 0) continue;  // target vanishes
        const PageGenerator& g = fam.gens[gi];
        std::vector<int> lexp(fam.gens.size(), 0), rexp(fam.gens.size(), 0);
        for (size_t j = 0; j < fam.gens.size(); ++j) {
            if (j < gi) lexp[j] = mono.exps[j];
            else rexp[j] = mono.exps[j];
        }
        rexp[gi] -= 1;
        const Monomial& left = ms.monos[ms.index.at(lexp)];
        const Monomial& right = ms.monos[ms.index.at(rexp)];
        Fp coeff = Fp(mono.exps[gi], p);
        if ((left.n + left.m) % 2) coeff = -coeff;  // Koszul sign past the left part
        int tn = g.n + fam.r, tm = g.m + 1 - fam.r;
        for (size_t k = 0; k < st.qreps[gi].size(); ++k) {
            int slot = st.first_slot[gi] + static_cast<int>(k);
            FpVec mid =
                page.product(tn, tm, st.qreps[gi][k], right.n, right.m, right.value);
            if (mid.size() == 0) continue;
            FpVec val = page.product(left.n, left.m, left.value, tn + right.n,
                                     tm + right.m, mid);
            if (val.size() == 0) continue;
            val = FpVec(val * coeff);
            if (!is_zero_vec(val)) out.push_back({slot, val});
        }
    }
    return out;
}

long long budget_cap() {
    const char* env = std::getenv("PROCOH_BUDGET");
    if (!env) return 200000;
    return std::atoll(env);
}

std::map<std::pair<int, int>, std::vector<int>> monomials_by_cell(
    const MonomialSet& ms) {
    std::map<std::pair<int, int>, std::vector<int>> by_cell;
    for (size_t a = 0; a < ms.monos.size(); ++a)
        by_cell[{ms.monos[a].n, ms.monos[a].m}].push_back(static_cast<int>(a));
    return by_cell;
}

}  // namespace

DifferentialFamily differential_family(const PageState& s) {
    const E2Page& page = *s.page;
    long long p = page.p();
    Window w = page.window();
    DifferentialFamily fam;
    fam.r = s.r;
    fam.gens = page_generators(s);
    for (size_t gi = 0; gi < fam.gens.size(); ++gi) {
        int tn = fam.gens[gi].n + s.r, tm = fam.gens[gi].m + 1 - s.r;
        if (tm < 0 || tn > w.nmax) continue;
        int q = s.cell_dim(tn, tm);
        for (int k = 0; k < q; ++k) fam.slots.push_back({static_cast<int>(gi), k});
    }
    int K = static_cast<int>(fam.slots.size());
    if (K == 0) {
        fam.solutions = Subspace::full(0, p);
        return fam;
    }
    SlotTargets st = slot_targets(s, fam);
    MonomialSet ms = enumerate_monomials(s, fam.gens);
    auto by_cell = monomials_by_cell(ms);

    std::vector<FpVec> constraint_rows;
    for (const auto& [cellkey, list] : by_cell) {
        auto [n, m] = cellkey;
        if (n + s.r > w.nmax) continue;
        int tn = n + s.r, tm = m + 1 - s.r;
        std::vector<FpVec> qreps = s.cell_reps(n, m);
        int q = static_cast<int>(qreps.size());
        // linear dependencies among the monomials as page classes
        Subspace deps = Subspace::full(static_cast<int>(list.size()), p);
        if (q > 0) {
            FpMat vals = attach(FpMat(static_cast<int>(list.size()), q), p);
            for (size_t a = 0; a < list.size(); ++a) {
                FpVec qc = quotient_coords(s, n, m, ms.monos[list[a]].value, qreps);
                for (int c = 0; c < q; ++c) vals(static_cast<int>(a), c) = qc(c);
            }
            deps = kernel_basis(FpMat(vals.transpose()));
        }
        if (deps.dim() == 0) continue;
        bool has_target = tm >= 0 && tm <= page.rank();
        std::vector<FpVec> tq =
            has_target ? s.cell_reps(tn, tm) : std::vector<FpVec>{};
        int tdim = has_target ? page.dim(tn, tm) : 0;
        if (tq.empty()) continue;
        for (int di = 0; di < deps.dim(); ++di) {
            // the same dependency must hold among the differentials
            std::vector<FpVec> slot_vecs(K, zero_of(tdim, p));
            for (size_t a = 0; a < list.size(); ++a) {
                Fp lam = deps.basis(di, static_cast<int>(a));
                if (lam.is_zero()) continue;
                for (auto& [slot, vec] :
                     symbolic_differential(s, fam, st, ms, ms.monos[list[a]]))
                    slot_vecs[slot] = slot_vecs[slot] + FpVec(vec * lam);
            }
            for (size_t k = 0; k < tq.size(); ++k) {
                FpVec row = zero_of(K, p);
                bool nontrivial = false;
                for (int sl = 0; sl < K; ++sl) {
                    if (is_zero_vec(slot_vecs[sl])) continue;
                    FpVec qc = quotient_coords(s, tn, tm, slot_vecs[sl], tq);
                    row(sl) = qc(static_cast<int>(k));
                    if (!row(sl).is_zero()) nontrivial = true;
                }
                if (nontrivial) constraint_rows.push_back(row);
            }
        }
    }
    if (constraint_rows.empty()) {
        fam.solutions = Subspace::full(K, p);
    } else {
        FpMat C = attach(FpMat(static_cast<int>(constraint_rows.size()), K), p);
        for (size_t i = 0; i < constraint_rows.size(); ++i)
            for (int j = 0; j < K; ++j)
                C(static_cast<int>(i), j) = constraint_rows[i](j);
        fam.solutions = kernel_basis(C);
    }
    return fam;
}

PageState apply_differentials(const PageState& s, const DifferentialFamily& fam,
                              const FpVec& theta) {
    const E2Page& page = *s.page;
    long long p = page.p();
    Window w = page.window();
    assert(fam.r == s.r);
    assert(static_cast<int>(theta.size()) == static_cast<int>(fam.slots.size()));

    SlotTargets st = slot_targets(s, fam);
    MonomialSet ms = enumerate_monomials(s, fam.gens);
    auto by_cell = monomials_by_cell(ms);

    // concrete d value of every monomial, in target-cell coordinates
    std::vector<FpVec> dmono(ms.monos.size());
    for (size_t a = 0; a < ms.monos.size(); ++a) {
        const Monomial& mono = ms.monos[a];
        int tn = mono.n + s.r, tm = mono.m + 1 - s.r;
        if (tn > w.nmax) continue;
        int tdim = tm >= 0 && tm <= page.rank() ? page.dim(tn, tm) : 0;
        FpVec val = zero_of(tdim, p);
        if (tdim > 0)
            for (auto& [slot, vec] : symbolic_differential(s, fam, st, ms, mono))
                val = val + FpVec(vec * theta(slot));
        dmono[a] = val;
    }

    // matrix of d on each cell quotient
    struct CellD {
        std::vector<FpVec> qreps;   // domain class representatives
        std::vector<FpVec> values;  // their d values, target-cell coordinates
    };
    std::map<std::pair<int, int>, CellD> dmaps;
    for (const auto& [cellkey, list] : by_cell) {
        auto [n, m] = cellkey;
        if (n + s.r > w.nmax) continue;
        int tn = n + s.r, tm = m + 1 - s.r;
        int tdim = tm >= 0 && tm <= page.rank() ? page.dim(tn, tm) : 0;
        CellD cd;
        cd.qreps = s.cell_reps(n, m);
        for (const FpVec& v : cd.qreps) {
            // express the class in the generator monomials, then apply d
            FpVec qv = quotient_coords(s, n, m, v, cd.qreps);
            std::vector<FpVec> mono_q;
            for (int a : list)
                mono_q.push_back(
                    quotient_coords(s, n, m, ms.monos[a].value, cd.qreps));
            std::optional<FpVec> mu = solve_in_span(mono_q, qv, p);
            if (!mu)
                throw Error("page class is not generated by the page generators");
            FpVec val = zero_of(tdim, p);
            for (size_t a = 0; a < list.size(); ++a)
                if (!(*mu)(static_cast<int>(a)).is_zero())
                    val = val + FpVec(dmono[list[a]] * (*mu)(static_cast<int>(a)));
            cd.values.push_back(val);
        }
        dmaps[cellkey] = cd;
    }

    // d o d = 0 inside the window
    for (const auto& [cellkey, cd] : dmaps) {
        auto [n, m] = cellkey;
        int tn = n + s.r, tm = m + 1 - s.r;
        if (tm < 0 || tm > page.rank()) continue;
        int t2n = tn + s.r, t2m = tm + 1 - s.r;
        if (t2m < 0 || t2m > page.rank() || t2n > w.nmax) continue;
        auto next = dmaps.find({tn, tm});
        if (next == dmaps.end()) continue;
        for (const FpVec& val : cd.values) {
            if (is_zero_vec(val)) continue;
            FpVec qc = quotient_coords(s, tn, tm, val, next->second.qreps);
            FpVec acc = zero_of(page.dim(t2n, t2m), p);
            for (size_t k = 0; k < next->second.qreps.size(); ++k)
                if (!qc(static_cast<int>(k)).is_zero())
                    acc = acc +
                          FpVec(next->second.values[k] * qc(static_cast<int>(k)));
            if (!is_zero_vec(acc) && !s.B[t2n][t2m].contains(acc)) {
                std::ostringstream os;
                os << "d_" << s.r << " o d_" << s.r << " != 0 at cell (" << n
                   << "," << m << ")";
                throw Error(os.str());
            }
        }
    }

    PageState out;
    out.page = s.page;
    out.r = s.r + 1;
    out.Z = s.Z;
    out.B = s.B;
    // boundaries: image of d out of each source cell
    for (const auto& [cellkey, cd] : dmaps) {
        auto [n, m] = cellkey;
        int tn = n + s.r, tm = m + 1 - s.r;
        if (tm < 0 || tm > page.rank() || cd.values.empty()) continue;
        out.B[tn][tm] =
            sum({out.B[tn][tm], row_span(cd.values, page.dim(tn, tm), p)});
    }
    // cycles: kernel of the induced map on each quotient
    for (const auto& [cellkey, cd] : dmaps) {
        auto [n, m] = cellkey;
        int tn = n + s.r, tm = m + 1 - s.r;
        int k = static_cast<int>(cd.qreps.size());
        if (k == 0) continue;
        int tdim = tm >= 0 && tm <= page.rank() ? page.dim(tn, tm) : 0;
        std::vector<FpVec> tq =
            tdim > 0 ? s.cell_reps(tn, tm) : std::vector<FpVec>{};
        std::vector<FpVec> kernel_dirs;
        if (tq.empty()) {
            kernel_dirs = cd.qreps;
        } else {
            FpMat D = attach(FpMat(static_cast<int>(tq.size()), k), p);
            for (int j = 0; j < k; ++j) {
                FpVec qc = quotient_coords(s, tn, tm, cd.values[j], tq);
                for (int i = 0; i < static_cast<int>(tq.size()); ++i)
                    D(i, j) = qc(i);
            }
            Subspace ker = kernel_basis(D);
            for (int i = 0; i < ker.dim(); ++i) {
                FpVec v = zero_of(s.Z[n][m].ambient, p);
                for (int j = 0; j < k; ++j)
                    v = v + FpVec(cd.qreps[j] * ker.basis(i, j));
                kernel_dirs.push_back(v);
            }
        }
        out.Z[n][m] = sum({s.B[n][m], row_span(kernel_dirs, s.Z[n][m].ambient, p)});
    }
    return out;
}

// ---------------------------------------------------------------------------
// Finiteness solving

std::vector<int> doomed_columns(long long p, const Window& w) {
    std::vector<int> base = {static_cast<int>(2 * p - 5), static_cast<int>(2 * p - 3),
                             static_cast<int>(2 * p - 2), static_cast<int>(2 * p)};
    std::vector<int> out;
    for (int k = 0;; ++k) {
        bool any = false;
        for (int b : base) {
            int col = b + 2 * static_cast<int>(p - 1) * k;
            if (col <= w.nmax) {
                out.push_back(col);
                any = true;
            }
        }
        if (!any) break;
    }
    std::sort(out.begin(), out.end());
    return out;
}

bool doomed_columns_vanish(const PageState& s) {
    for (int n : doomed_columns(s.page->p(), s.page->window()))
        for (int m = 0; m <= s.page->rank(); ++m) {
            if (!s.window_safe(n, m)) continue;
            if (s.cell_dim(n, m) != 0) return false;
        }
    return true;
}

namespace {

// All elements of a solution subspace, lexicographic in the basis
// coefficients; throws when the count exceeds the budget.
std::vector<FpVec> enumerate_subspace(const Subspace& sol, long long p,
                                      long long budget) {
    long long count = 1;
    for (int i = 0; i < sol.dim(); ++i) {
        count *= p;
        if (count > budget) throw Error("enumeration budget exceeded");
    }
    std::vector<FpVec> out;
    std::vector<long long> digits(sol.dim(), 0);
    while (true) {
        FpVec v = zero_of(sol.ambient, p);
        for (int i = 0; i < sol.dim(); ++i)
            for (int c = 0; c < sol.ambient; ++c)
                v(c) = v(c) + sol.basis(i, c) * Fp(digits[i], p);
        out.push_back(v);
        int i = 0;
        for (; i < sol.dim(); ++i) {
            if (++digits[i] < p) break;
            digits[i] = 0;
        }
        if (i == sol.dim()) break;
    }
    return out;
}

// Runs the later pages to exhaustion, existentially over the remaining
// differential choices; fills the first feasible chain and terminal state.
bool continue_pages(const PageState& state, long long budget,
                    std::vector<FpVec>& chain, PageState& final_state) {
    if (state.exhausted()) {
        if (doomed_columns_vanish(state)) {
            final_state = state;
            return true;
        }
        return false;
    }
    DifferentialFamily fam = differential_family(state);
    for (const FpVec& theta :
         enumerate_subspace(fam.solutions, state.page->p(), budget)) {
        PageState next;
        try {
            next = apply_differentials(state, fam, theta);
        } catch (const Error&) {
            continue;  // d o d != 0
        }
        chain.push_back(theta);
        if (continue_pages(next, budget, chain, final_state)) return true;
        chain.pop_back();
    }
    return false;
}

}  // namespace

SolveResult finiteness_constraint_solve(const StablePage& s) {
    const E2Page& page = *s.page;
    long long p = page.p();
    if (p <= 3)
        throw Error("finiteness axiom not applicable: the cohomology has p-torsion");
    long long budget = budget_cap();
    SolveResult out;
    PageState st = initial_state(s);
    out.family = differential_family(st);
    for (const FpVec& theta : enumerate_subspace(out.family.solutions, p, budget)) {
        PageState next;
        try {
            next = apply_differentials(st, out.family, theta);
        } catch (const Error&) {
            continue;
        }
        std::vector<FpVec> chain = {theta};
        PageState final_state;
        if (continue_pages(next, budget, chain, final_state)) {
            out.family.feasible.push_back(theta);
            out.chains.push_back(chain);
            out.finals.push_back(final_state);
        }
    }
    if (out.family.feasible.empty())
        throw Error("no consistent differential family found");
    return out;
}

EInfinity e_infinity(const StablePage& s, const SolveResult& solve) {
    if (solve.finals.empty()) throw Error("empty differential family");
    EInfinity out;
    size_t count = solve.finals.size();
    std::vector<size_t> picks;
    if (count <= 3)
        for (size_t i = 0; i < count; ++i) picks.push_back(i);
    else
        picks = {0, count / 2, count - 1};
    out.state = solve.finals[picks[0]];
    out.samples = static_cast<int>(picks.size());
    out.sample_independent = true;
    for (size_t i = 1; i < picks.size(); ++i) {
        const PageState& other = solve.finals[picks[i]];
        for (int n = 0; n <= s.page->window().nmax; ++n)
            for (int m = 0; m <= s.page->rank(); ++m) {
                if (!out.state.window_safe(n, m)) continue;
                if (out.state.cell_dim(n, m) != other.cell_dim(n, m))
                    out.sample_independent = false;
            }
    }
    return out;
}

EInfinity collapse_e_infinity(const StablePage& s) {
    EInfinity out;
    out.state = initial_state(s);
    out.state.r = s.page->rank() + 2;
    out.samples = 1;
    out.sample_independent = true;
    return out;
}

FreeLift detect_free_and_lift(const PageState& s) {
    const E2Page& page = *s.page;
    Window w = page.window();
    FreeLift out;
    out.gens = page_generators(s);
    for (const PageGenerator& g : out.gens)
        out.polynomial.push_back((g.n + g.m) % 2 == 0);
    // dimensions of the free graded-commutative algebra on the generators
    std::vector<std::vector<int>> predicted(w.nmax + 1,
                                            std::vector<int>(page.rank() + 1, 0));
    std::function<void(size_t, int, int)> walk = [&](size_t i, int n, int m) {
        if (i == out.gens.size()) {
            predicted[n][m] += 1;
            return;
        }
        const PageGenerator& g = out.gens[i];
        int cap = out.polynomial[i] ? w.nmax + page.rank() : 1;
        for (int e = 0; e <= cap; ++e) {
            int nn = n + e * g.n, mm = m + e * g.m;
            if (nn > w.nmax || mm > page.rank()) break;
            walk(i + 1, nn, mm);
        }
    };
    walk(0, 0, 0);
    for (int n = 0; n <= w.nmax; ++n)
        for (int m = 0; m <= page.rank(); ++m) {
            if (!s.window_safe(n, m)) continue;
            if (predicted[n][m] != s.cell_dim(n, m)) {
                std::ostringstream os;
                os << "(" << n << "," << m << ")";
                out.free_ = false;
                out.obstruction_cell = os.str();
                return out;
            }
        }
    out.free_ = true;
    return out;
}

}  // namespace procoh
