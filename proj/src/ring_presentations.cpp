#include "procoh/ring_presentations.hpp"

#include <algorithm>
#include <cassert>
#include <cctype>
#include <cstdlib>
#include <functional>
#include <sstream>

namespace procoh {

namespace {

long long budget_cap() {
    const char* env = std::getenv("PROCOH_BUDGET");
    if (!env) return 200000;
    return std::atoll(env);
}

FpVec zero_of(int n, long long p) {
    FpVec v(n);
    for (int i = 0; i < n; ++i) v(i) = Fp(0, p);
    return v;
}

Subspace row_span(const std::vector<FpVec>& rows, int ambient, long long p) {
    if (rows.empty() || ambient == 0) return Subspace::zero(ambient, p);
    FpMat m(static_cast<int>(rows.size()), ambient);
    for (int i = 0; i < static_cast<int>(rows.size()); ++i)
        for (int j = 0; j < ambient; ++j) m(i, j) = rows[i](j);
    return Subspace::span(attach(m, p), ambient, p);
}

bool odd_degree(const RingGenerator& g) { return g.degree % 2 != 0; }
bool square_zero(const RingGenerator& g) {
    return !g.polynomial || odd_degree(g);
}

// Product of canonical monomials (exponents in generator-list order); the
// scalar is the graded-commutativity sign, zero when a square-zero generator
// repeats.
Fp mono_mul(const std::vector<RingGenerator>& gens, long long p,
            const std::vector<int>& a, const std::vector<int>& b,
            std::vector<int>& out) {
    int k = static_cast<int>(gens.size());
    out.assign(k, 0);
    for (int i = 0; i < k; ++i) {
        out[i] = a[i] + b[i];
        if (out[i] > 1 && square_zero(gens[i])) return Fp(0, p);
    }
    long long swaps = 0;
    for (int i = 0; i < k; ++i) {
        if (!b[i] || !odd_degree(gens[i])) continue;
        for (int j = i + 1; j < k; ++j)
            if (a[j] && odd_degree(gens[j])) swaps += 1LL * b[i] * a[j];
    }
    return Fp(swaps % 2 ? -1 : 1, p);
}

int mono_degree(const std::vector<RingGenerator>& gens,
                const std::vector<int>& e) {
    int d = 0;
    for (size_t i = 0; i < gens.size(); ++i) d += e[i] * gens[i].degree;
    return d;
}

// Monomial bases of all degrees 0..D.
struct MonoTable {
    std::vector<std::vector<std::vector<int>>> by_degree;
    std::map<std::vector<int>, std::pair<int, int>> index;  // -> (degree, pos)

    int dim(int d) const { return static_cast<int>(by_degree[d].size()); }
};

MonoTable enumerate_monomials(const std::vector<RingGenerator>& gens, int D) {
    MonoTable t;
    t.by_degree.resize(D + 1);
    long long budget = budget_cap(), count = 0;
    int k = static_cast<int>(gens.size());
    std::vector<int> e(k, 0);
    std::function<void(int, int)> rec = [&](int i, int deg) {
        if (i == k) {
            if (++count > budget) throw Error("enumeration budget exceeded");
            int pos = t.dim(deg);
            t.by_degree[deg].push_back(e);
            t.index[e] = {deg, pos};
            return;
        }
        int cap = gens[i].degree > 0 ? (D - deg) / gens[i].degree : 0;
        if (square_zero(gens[i])) cap = std::min(cap, 1);
        for (int x = 0; x <= cap; ++x) {
            e[i] = x;
            rec(i + 1, deg + x * gens[i].degree);
        }
        e[i] = 0;
    };
    rec(0, 0);
    return t;
}

// Degree-d piece of the relation ideal in the monomial coordinates of t.
Subspace relation_span(const RingPresentation& pres, const MonoTable& t, int d) {
    std::vector<FpVec> rows;
    int amb = t.dim(d);
    std::vector<int> prod;
    for (const RingPoly& rel : pres.relations) {
        int dr = poly_degree(pres.generators, rel);
        if (dr < 0 || dr > d) continue;
        for (const std::vector<int>& mono : t.by_degree[d - dr]) {
            FpVec row = zero_of(amb, pres.p);
            for (const auto& [e, c] : rel.terms) {
                Fp s = mono_mul(pres.generators, pres.p, mono, e, prod);
                if (s.is_zero()) continue;
                row(t.index.at(prod).second) += s * c;
            }
            rows.push_back(row);
        }
    }
    return row_span(rows, amb, pres.p);
}

FpVec poly_coords(const RingPresentation& pres, const MonoTable& t,
                  const RingPoly& poly, int d) {
    FpVec v = zero_of(t.dim(d), pres.p);
    for (const auto& [e, c] : poly.terms) {
        auto it = t.index.find(e);
        if (it == t.index.end() || it->second.first != d)
            throw Error("polynomial term outside the truncation");
        v(it->second.second) += c;
    }
    return v;
}

RingPoly poly_from_coords(const MonoTable& t, int d, const FpVec& v,
                          long long p) {
    RingPoly out;
    for (int j = 0; j < t.dim(d); ++j)
        if (!v(j).is_zero()) out.add(t.by_degree[d][j], v(j).attach(p));
    return out;
}

std::string coeff_str(Fp c, long long p) {
    long long v = c.value() % p;
    if (v < 0) v += p;
    if (v > p / 2) v -= p;
    return std::to_string(v);
}

}  // namespace

void RingPoly::add(const std::vector<int>& exps, Fp c) {
    if (c.is_zero()) return;
    auto it = terms.find(exps);
    if (it == terms.end()) {
        terms.emplace(exps, c);
        return;
    }
    it->second += c;
    if (it->second.is_zero()) terms.erase(it);
}

RingPresentation free_presentation(long long p, std::vector<RingGenerator> gens) {
    RingPresentation pres;
    pres.p = p;
    pres.generators = std::move(gens);
    return pres;
}

int poly_degree(const std::vector<RingGenerator>& gens, const RingPoly& poly) {
    int d = -1;
    for (const auto& [e, c] : poly.terms) {
        int dd = mono_degree(gens, e);
        if (d == -1) d = dd;
        if (dd != d) throw Error("polynomial is not homogeneous");
    }
    return d;
}

RingPoly poly_mul(const std::vector<RingGenerator>& gens, long long p,
                  const RingPoly& a, const RingPoly& b) {
    RingPoly out;
    std::vector<int> prod;
    for (const auto& [ea, ca] : a.terms)
        for (const auto& [eb, cb] : b.terms) {
            Fp s = mono_mul(gens, p, ea, eb, prod);
            if (!s.is_zero()) out.add(prod, s * ca * cb);
        }
    return out;
}

std::string render(const RingPresentation& pres, const RingPoly& poly) {
    if (poly.is_zero()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [e, c] : poly.terms) {
        std::string cs = coeff_str(c, pres.p);
        bool neg = cs[0] == '-';
        std::string mag = neg ? cs.substr(1) : cs;
        if (first) {
            if (neg) os << "-";
        } else {
            os << (neg ? " - " : " + ");
        }
        bool scalar = true;
        std::ostringstream ms;
        for (size_t i = 0; i < pres.generators.size(); ++i) {
            if (!e[i]) continue;
            scalar = false;
            ms << pres.generators[i].name;
            if (e[i] > 1) ms << "^" << e[i];
        }
        if (mag != "1" || scalar) os << mag;
        os << ms.str();
        first = false;
    }
    return os.str();
}

RingPoly parse_poly(const RingPresentation& pres, const std::string& text) {
    const std::vector<RingGenerator>& gens = pres.generators;
    long long p = pres.p;
    RingPoly out;
    size_t i = 0;
    auto skip_ws = [&] {
        while (i < text.size() &&
               (std::isspace(static_cast<unsigned char>(text[i])) || text[i] == '*'))
            ++i;
    };
    // one term: optional sign and coefficient, then generator factors
    while (true) {
        skip_ws();
        if (i >= text.size()) break;
        Fp coeff(1, p);
        if (text[i] == '+') {
            ++i;
        } else if (text[i] == '-') {
            coeff = Fp(-1, p);
            ++i;
        }
        skip_ws();
        bool saw_factor = false;
        std::vector<int> mono(gens.size(), 0);
        Fp sign(1, p);
        while (i < text.size()) {
            skip_ws();
            if (i >= text.size() || text[i] == '+' || text[i] == '-') break;
            if (std::isdigit(static_cast<unsigned char>(text[i]))) {
                long long v = 0;
                while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i])))
                    v = v * 10 + (text[i++] - '0');
                if (i < text.size() && text[i] == '/') {
                    ++i;
                    long long w = 0;
                    while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i])))
                        w = w * 10 + (text[i++] - '0');
                    coeff = coeff * Fp(v, p) / Fp(w, p);
                } else {
                    coeff = coeff * Fp(v, p);
                }
                saw_factor = true;
                continue;
            }
            // longest generator-name match
            int best = -1;
            size_t best_len = 0;
            for (size_t g = 0; g < gens.size(); ++g) {
                const std::string& nm = gens[g].name;
                if (nm.size() > best_len && text.compare(i, nm.size(), nm) == 0) {
                    best = static_cast<int>(g);
                    best_len = nm.size();
                }
            }
            if (best < 0)
                throw Error("unknown symbol in polynomial at: " + text.substr(i));
            i += best_len;
            int exp = 1;
            if (i < text.size() && text[i] == '^') {
                ++i;
                exp = 0;
                while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i])))
                    exp = exp * 10 + (text[i++] - '0');
            }
            std::vector<int> factor(gens.size(), 0);
            factor[best] = exp;
            std::vector<int> prod;
            Fp s = mono_mul(gens, p, mono, factor, prod);
            sign = sign * s;
            mono = prod;
            saw_factor = true;
            if (s.is_zero()) {
                sign = Fp(0, p);
                // consume remaining factors of a vanished term
            }
        }
        if (!saw_factor) throw Error("empty term in polynomial: " + text);
        out.add(mono, coeff * sign);
    }
    return out;
}

std::string to_text(const RingPresentation& pres) {
    std::ostringstream os;
    for (const RingGenerator& g : pres.generators)
        os << g.name << " " << g.degree << " "
           << (g.polynomial ? "polynomial" : "exterior") << "\n";
    for (const RingPoly& rel : pres.relations) os << render(pres, rel) << "\n";
    return os.str();
}

RingPresentation parse_presentation(const std::string& text, long long p) {
    RingPresentation pres;
    pres.p = p;
    std::istringstream is(text);
    std::string line;
    std::vector<std::string> relation_lines;
    while (std::getline(is, line)) {
        std::istringstream ls(line);
        std::vector<std::string> tok;
        std::string w;
        while (ls >> w) tok.push_back(w);
        if (tok.empty() || tok[0][0] == '#') continue;
        if (tok.size() == 3 && (tok[2] == "polynomial" || tok[2] == "exterior")) {
            RingGenerator g;
            g.name = tok[0];
            g.degree = std::atoi(tok[1].c_str());
            g.polynomial = tok[2] == "polynomial";
            if (g.degree <= 0) throw Error("generator degree must be positive");
            pres.generators.push_back(g);
        } else {
            relation_lines.push_back(line);
        }
    }
    for (const std::string& rl : relation_lines)
        pres.relations.push_back(parse_poly(pres, rl));
    return pres;
}

std::vector<int> poincare_series(const RingPresentation& pres, int D) {
    for (const RingPoly& rel : pres.relations)
        poly_degree(pres.generators, rel);  // homogeneity check
    MonoTable t = enumerate_monomials(pres.generators, D);
    std::vector<int> dims(D + 1, 0);
    for (int d = 0; d <= D; ++d)
        dims[d] = t.dim(d) - relation_span(pres, t, d).dim();
    return dims;
}

namespace {

// Degree-truncated quotient algebra of a presentation, with canonical coset
// vectors for membership tests.
struct Truncation {
    const RingPresentation* pres = nullptr;
    int D = 0;
    MonoTable table;
    std::vector<Subspace> ideal;  // [d]

    FpVec reduce(const RingPoly& poly, int d) const {
        return ideal[d].reduce(poly_coords(*pres, table, poly, d));
    }
};

Truncation truncate(const RingPresentation& pres, int D) {
    Truncation t;
    t.pres = &pres;
    t.D = D;
    t.table = enumerate_monomials(pres.generators, D);
    for (int d = 0; d <= D; ++d)
        t.ideal.push_back(relation_span(pres, t.table, d));
    return t;
}

struct Image {
    int degree = 0;
    RingPoly poly;  // canonical coset representative in b's monomials
};

// All coset representatives of the degree-d piece; empty-polynomial entry
// included (an assignment may legitimately send a redundant generator to 0).
std::vector<RingPoly> degree_piece(const Truncation& t, int d, long long budget) {
    int amb = t.table.dim(d);
    std::vector<FpVec> reps =
        quotient_reps(Subspace::full(amb, t.pres->p), t.ideal[d]);
    long long count = 1;
    for (size_t i = 0; i < reps.size(); ++i) {
        count *= t.pres->p;
        if (count > budget) throw Error("enumeration budget exceeded");
    }
    std::vector<RingPoly> out;
    std::vector<long long> digits(reps.size(), 0);
    while (true) {
        FpVec v = zero_of(amb, t.pres->p);
        for (size_t i = 0; i < reps.size(); ++i)
            v += FpVec(reps[i] * Fp(digits[i], t.pres->p));
        out.push_back(poly_from_coords(t.table, d, t.ideal[d].reduce(v), t.pres->p));
        size_t i = 0;
        while (i < digits.size() && ++digits[i] == t.pres->p) digits[i++] = 0;
        if (i == digits.size()) break;
    }
    return out;
}

// Substitutes the images for a's generators in a monomial term.
RingPoly evaluate_mono(const RingPresentation& b, const std::vector<int>& e,
                       const std::vector<Image>& images) {
    RingPoly acc;
    acc.add(std::vector<int>(b.generators.size(), 0), Fp(1, b.p));
    for (size_t i = 0; i < e.size(); ++i)
        for (int x = 0; x < e[i]; ++x)
            acc = poly_mul(b.generators, b.p, acc, images[i].poly);
    return acc;
}

// Dimensions of the subalgebra of b's truncation generated by the images,
// degree by degree up to `upto`.
std::vector<int> generated_dims(const RingPresentation& b, const Truncation& t,
                                const std::vector<Image>& images, int upto) {
    std::vector<Subspace> spans;
    for (int d = 0; d <= upto; ++d) spans.push_back(t.ideal[d]);
    RingPoly unit;
    unit.add(std::vector<int>(b.generators.size(), 0), Fp(1, b.p));
    std::vector<std::pair<int, RingPoly>> queue = {{0, unit}};
    spans[0] = sum({spans[0], row_span({t.reduce(unit, 0)}, t.table.dim(0), b.p)});
    while (!queue.empty()) {
        auto [d, elt] = queue.back();
        queue.pop_back();
        for (const Image& g : images) {
            int dd = d + g.degree;
            if (dd > upto || g.poly.is_zero()) continue;
            RingPoly prod = poly_mul(b.generators, b.p, elt, g.poly);
            FpVec v = t.reduce(prod, dd);
            if (spans[dd].contains(v)) continue;
            spans[dd] = sum({spans[dd], row_span({v}, t.table.dim(dd), b.p)});
            queue.push_back({dd, prod});
        }
    }
    std::vector<int> dims(upto + 1, 0);
    for (int d = 0; d <= upto; ++d)
        dims[d] = spans[d].dim() - t.ideal[d].dim();
    return dims;
}

}  // namespace

Comparison truncated_equal(const RingPresentation& a, const RingPresentation& b,
                           int D) {
    std::vector<int> sa = poincare_series(a, D), sb = poincare_series(b, D);
    for (int d = 0; d <= D; ++d)
        if (sa[d] != sb[d])
            return {Verdict::distinct,
                    "Poincare series differ at degree " + std::to_string(d) +
                        " (" + std::to_string(sa[d]) + " vs " +
                        std::to_string(sb[d]) + ")"};

    Truncation t = truncate(b, D);
    long long budget = budget_cap();

    // generators of a in ascending degree
    std::vector<int> order(a.generators.size());
    for (size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);
    std::stable_sort(order.begin(), order.end(), [&](int x, int y) {
        return a.generators[x].degree < a.generators[y].degree;
    });

    std::vector<Image> images(a.generators.size());
    std::vector<bool> assigned(a.generators.size(), false);
    std::map<int, std::vector<RingPoly>> candidates;
    long long nodes = 0;

    auto relations_hold = [&](int just_assigned) {
        for (const RingPoly& rel : a.relations) {
            int dr = poly_degree(a.generators, rel);
            if (dr > D) continue;
            bool ready = true, involves = false;
            for (const auto& [e, c] : rel.terms)
                for (size_t i = 0; i < e.size(); ++i)
                    if (e[i]) {
                        if (!assigned[i]) ready = false;
                        if (static_cast<int>(i) == just_assigned) involves = true;
                    }
            if (!ready || !involves) continue;
            RingPoly val;
            for (const auto& [e, c] : rel.terms) {
                RingPoly term = evaluate_mono(b, e, images);
                for (const auto& [eb, cb] : term.terms) val.add(eb, cb * c);
            }
            FpVec v = t.reduce(val, dr);
            for (int j = 0; j < v.size(); ++j)
                if (!v(j).is_zero()) return false;
        }
        // exterior generators of even degree still square to zero
        const RingGenerator& g = a.generators[just_assigned];
        if (!g.polynomial && g.degree % 2 == 0 && 2 * g.degree <= D) {
            RingPoly sq = poly_mul(b.generators, b.p, images[just_assigned].poly,
                                   images[just_assigned].poly);
            FpVec v = t.reduce(sq, 2 * g.degree);
            for (int j = 0; j < v.size(); ++j)
                if (!v(j).is_zero()) return false;
        }
        return true;
    };

    std::function<bool(size_t)> dfs = [&](size_t k) -> bool {
        if (++nodes > budget) throw Error("enumeration budget exceeded");
        if (k == order.size()) {
            std::vector<Image> assigned_images;
            for (size_t i = 0; i < images.size(); ++i)
                assigned_images.push_back(images[i]);
            return generated_dims(b, t, assigned_images, D) == sb;
        }
        int gi = order[k];
        int d = a.generators[gi].degree;
        if (d > D) {
            // unseen by the truncation; send to zero
            images[gi] = Image{d, RingPoly{}};
            assigned[gi] = true;
            if (dfs(k + 1)) return true;
            assigned[gi] = false;
            return false;
        }
        if (!candidates.count(d)) candidates[d] = degree_piece(t, d, budget);
        for (const RingPoly& cand : candidates[d]) {
            images[gi] = Image{d, cand};
            assigned[gi] = true;
            bool ok = relations_hold(gi);
            if (ok && (k + 1 == order.size() ||
                       a.generators[order[k + 1]].degree > d)) {
                // all generators of degree <= d placed: their images must
                // already generate b fully below that degree
                std::vector<Image> partial;
                for (size_t i = 0; i < images.size(); ++i)
                    if (assigned[i]) partial.push_back(images[i]);
                std::vector<int> have = generated_dims(b, t, partial, d);
                for (int dd = 0; dd <= d; ++dd)
                    if (have[dd] != sb[dd]) ok = false;
            }
            if (ok && dfs(k + 1)) return true;
            assigned[gi] = false;
        }
        return false;
    };

    bool found = false;
    std::string note;
    try {
        found = dfs(0);
    } catch (const Error& e) {
        note = std::string("; search stopped: ") + e.what();
    }
    if (!found)
        return {Verdict::series_equal_only,
                "series agree to degree " + std::to_string(D) +
                    " but no generator assignment found" + note};
    std::ostringstream os;
    os << "isomorphic to degree " << D << " via";
    for (size_t i = 0; i < a.generators.size(); ++i)
        os << (i ? ", " : " ") << a.generators[i].name << " -> "
           << render(b, images[i].poly);
    return {Verdict::isomorphic, os.str()};
}

DualityReport duality_degrees(const RingPresentation& pres) {
    DualityReport r;
    std::vector<int> poly_idx, ext_idx;
    for (size_t i = 0; i < pres.generators.size(); ++i)
        (pres.generators[i].polynomial ? poly_idx : ext_idx)
            .push_back(static_cast<int>(i));
    for (const RingPoly& rel : pres.relations)
        for (const auto& [e, c] : rel.terms)
            for (int i : poly_idx)
                if (e[i]) {
                    r.detail = "relation involves polynomial generator " +
                               pres.generators[i].name;
                    return r;
                }
    r.applicable = true;
    for (int i : poly_idx) r.polynomial_degrees.push_back(pres.generators[i].degree);

    RingPresentation fin;
    fin.p = pres.p;
    int top_cap = 0;
    for (int i : ext_idx) {
        fin.generators.push_back(pres.generators[i]);
        top_cap += pres.generators[i].degree;
    }
    for (const RingPoly& rel : pres.relations) {
        RingPoly g;
        for (const auto& [e, c] : rel.terms) {
            std::vector<int> f;
            for (int i : ext_idx) f.push_back(e[i]);
            g.add(f, c);
        }
        fin.relations.push_back(g);
    }
    std::vector<int> dims = poincare_series(fin, top_cap);
    r.top_degree = 0;
    for (int d = 0; d <= top_cap; ++d)
        if (dims[d]) r.top_degree = d;
    r.palindromic = true;
    for (int d = 0; d <= r.top_degree; ++d)
        if (dims[d] != dims[r.top_degree - d]) r.palindromic = false;
    std::ostringstream os;
    os << "finite part dimensions";
    for (int d = 0; d <= r.top_degree; ++d) os << " " << dims[d];
    r.detail = os.str();
    return r;
}

// ---------------------------------------------------------------------------
// Presentation of an E2 page

namespace {

struct BigradedMonos {
    // exponent vectors grouped by bidegree, with positions
    std::map<std::pair<int, int>, std::vector<std::vector<int>>> groups;
    std::map<std::vector<int>, int> pos;

    std::pair<int, int> bidegree(const std::vector<PageGenerator>& gens,
                                 const std::vector<int>& e) const {
        int n = 0, m = 0;
        for (size_t i = 0; i < gens.size(); ++i) {
            n += e[i] * gens[i].n;
            m += e[i] * gens[i].m;
        }
        return {n, m};
    }
};

}  // namespace

E2Presentation presentation_of_e2(const E2Page& page) {
    long long p = page.p();
    Window w = page.window();
    int rank = page.rank();
    E2Presentation out;

    // multiplicative generators: cell basis directions outside the span of
    // products of lower-degree generators with full complementary cells
    std::vector<PageGenerator>& gens = out.page_gens;
    for (int d = 1; d <= w.nmax + rank; ++d) {
        for (int n = 0; n <= std::min(d, w.nmax); ++n) {
            int m = d - n;
            if (m > rank) continue;
            int dim = page.dim(n, m);
            if (!dim) continue;
            std::vector<FpVec> rows;
            for (const PageGenerator& g : gens) {
                int n2 = n - g.n, m2 = m - g.m;
                if (n2 < 0 || m2 < 0 || n2 + m2 == 0) continue;
                for (int j = 0; j < page.dim(n2, m2); ++j) {
                    FpVec u = zero_of(page.dim(n2, m2), p);
                    u(j) = Fp(1, p);
                    rows.push_back(page.product(g.n, g.m, g.coords, n2, m2, u));
                }
            }
            Subspace span = row_span(rows, dim, p);
            for (int j = 0; j < dim && span.dim() < dim; ++j) {
                FpVec u = zero_of(dim, p);
                u(j) = Fp(1, p);
                if (span.contains(u)) continue;
                gens.push_back(PageGenerator{n, m, u, page.cell_name(n, m, j)});
                span = sum({span, row_span({u}, dim, p)});
            }
        }
    }

    RingPresentation& pres = out.pres;
    pres.p = p;
    for (const PageGenerator& g : gens) {
        RingGenerator rg;
        rg.name = g.name;
        rg.degree = g.n + g.m;
        if (rg.degree % 2 == 0 && 2 * g.m <= rank && 2 * g.n <= w.nmax) {
            FpVec sq = page.product(g.n, g.m, g.coords, g.n, g.m, g.coords);
            for (int j = 0; j < sq.size(); ++j)
                if (!sq(j).is_zero()) rg.polynomial = true;
        }
        pres.generators.push_back(rg);
    }

    // monomials bounded by the window column-wise and by one exterior step
    // past the kernel rank row-wise (zero cells witness the degenerations)
    int max_m = 0;
    for (const PageGenerator& g : gens) max_m = std::max(max_m, g.m);
    int m_cap = rank + max_m;
    BigradedMonos monos;
    {
        long long budget = budget_cap(), count = 0;
        int k = static_cast<int>(gens.size());
        std::vector<int> e(k, 0);
        std::function<void(int, int, int)> rec = [&](int i, int n, int m) {
            if (i == k) {
                if (++count > budget) throw Error("enumeration budget exceeded");
                auto& grp = monos.groups[{n, m}];
                monos.pos[e] = static_cast<int>(grp.size());
                grp.push_back(e);
                return;
            }
            const PageGenerator& g = gens[i];
            for (int x = 0;; ++x) {
                if (n + x * g.n > w.nmax || m + x * g.m > m_cap) break;
                if (x > 1 && !pres.generators[i].polynomial) break;
                e[i] = x;
                rec(i + 1, n + x * g.n, m + x * g.m);
            }
            e[i] = 0;
        };
        rec(0, 0, 0);
    }

    // evaluate each monomial on the page (product taken in generator order)
    std::map<std::vector<int>, FpVec> values;
    std::function<FpVec(const std::vector<int>&)> value =
        [&](const std::vector<int>& e) -> FpVec {
        auto it = values.find(e);
        if (it != values.end()) return it->second;
        int last = -1;
        for (size_t i = 0; i < e.size(); ++i)
            if (e[i]) last = static_cast<int>(i);
        FpVec v;
        if (last < 0) {
            v = zero_of(1, p);
            v(0) = Fp(1, p);
        } else {
            std::vector<int> rest = e;
            rest[last] -= 1;
            auto [n1, m1] = monos.bidegree(gens, rest);
            FpVec head = value(rest);
            v = page.product(n1, m1, head, gens[last].n, gens[last].m,
                             gens[last].coords);
        }
        values.emplace(e, v);
        return v;
    };

    // mine minimal relations bidegree by bidegree in total-degree order
    std::vector<std::pair<std::pair<int, int>, RingPoly>> mined;
    std::vector<std::pair<int, int>> keys;
    for (const auto& [key, grp] : monos.groups) keys.push_back(key);
    std::sort(keys.begin(), keys.end(), [](auto a, auto b) {
        if (a.first + a.second != b.first + b.second)
            return a.first + a.second < b.first + b.second;
        return a < b;
    });
    std::vector<int> prod;
    for (const auto& [n, m] : keys) {
        if (n + m == 0) continue;
        const auto& grp = monos.groups.at({n, m});
        int amb = static_cast<int>(grp.size());
        int cell_dim = page.dim(n, m);
        Subspace ker = Subspace::full(amb, p);
        if (cell_dim > 0) {
            FpMat mat(cell_dim, amb);
            for (int j = 0; j < amb; ++j) {
                FpVec v = value(grp[j]);
                for (int i = 0; i < cell_dim; ++i) mat(i, j) = v(i);
            }
            ker = kernel_basis(attach(mat, p));
        }
        if (ker.dim() == 0) continue;
        std::vector<FpVec> cons_rows;
        const std::vector<RingGenerator>& rg = pres.generators;
        for (const auto& [bidef, rel] : mined) {
            auto it = monos.groups.find({n - bidef.first, m - bidef.second});
            if (it == monos.groups.end()) continue;
            for (const std::vector<int>& mono : it->second) {
                FpVec row = zero_of(amb, p);
                bool nonzero = false;
                for (const auto& [e, c] : rel.terms) {
                    Fp s = mono_mul(rg, p, mono, e, prod);
                    if (s.is_zero()) continue;
                    auto pit = monos.pos.find(prod);
                    if (pit == monos.pos.end())
                        throw Error("relation consequence left the monomial table");
                    row(pit->second) += s * c;
                    nonzero = true;
                }
                if (nonzero) cons_rows.push_back(row);
            }
        }
        Subspace cons = row_span(cons_rows, amb, p);
        if (!ker.contains(cons))
            throw Error("relation mining produced an inconsistent consequence");
        for (const FpVec& rep : quotient_reps(ker, cons)) {
            RingPoly rel;
            for (int j = 0; j < amb; ++j)
                if (!rep(j).is_zero()) rel.add(grp[j], rep(j).attach(p));
            mined.push_back({{n, m}, rel});
        }
    }
    for (auto& [key, rel] : mined) pres.relations.push_back(rel);

    out.certified = true;
    for (const PageGenerator& g : gens)
        for (const PageGenerator& h : gens)
            if (g.n + h.n > w.nmax) out.certified = false;
    return out;
}

}  // namespace procoh
