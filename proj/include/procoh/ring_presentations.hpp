#pragma once

#include <map>
#include <string>
#include <vector>

#include "procoh/spectral_engine.hpp"

namespace procoh {

struct RingGenerator {
    std::string name;
    int degree = 0;
    bool polynomial = false;  // exterior generators square to zero
};

// Polynomial in the generators of a presentation: exponent vector (aligned
// with the generator list) -> coefficient.  Zero coefficients never stored.
struct RingPoly {
    std::map<std::vector<int>, Fp> terms;

    bool is_zero() const { return terms.empty(); }
    void add(const std::vector<int>& exps, Fp c);
};

// Graded-commutative presentation: odd-degree (and flagged exterior)
// generators square to zero, odd-degree generators anticommute.
struct RingPresentation {
    long long p = 0;
    std::vector<RingGenerator> generators;
    std::vector<RingPoly> relations;  // homogeneous
    std::vector<std::string> provenance;
};

RingPresentation free_presentation(long long p, std::vector<RingGenerator> gens);

int poly_degree(const std::vector<RingGenerator>& gens, const RingPoly& poly);
RingPoly poly_mul(const std::vector<RingGenerator>& gens, long long p,
                  const RingPoly& a, const RingPoly& b);

std::string render(const RingPresentation& pres, const RingPoly& poly);
RingPoly parse_poly(const RingPresentation& pres, const std::string& text);

// Text round-trip: generator lines "name degree parity", then relation lines
// as polynomial strings in the generators.
std::string to_text(const RingPresentation& pres);
RingPresentation parse_presentation(const std::string& text, long long p);

// Graded dimensions of the quotient in degrees 0..D via degree-truncated
// linear algebra on the monomial basis.  Throws Error past PROCOH_BUDGET.
std::vector<int> poincare_series(const RingPresentation& pres, int D);

enum class Verdict { isomorphic, series_equal_only, distinct };

struct Comparison {
    Verdict verdict = Verdict::distinct;
    std::string detail;
};

// Equal Poincare series to degree D plus a search for a degree-preserving
// assignment of a's generators to elements of b's truncation validating a's
// relations and generating b up to degree D.  A failed search downgrades to
// series_equal_only, never to distinct.
Comparison truncated_equal(const RingPresentation& a, const RingPresentation& b,
                           int D);

struct DualityReport {
    bool applicable = false;
    std::vector<int> polynomial_degrees;
    int top_degree = -1;
    bool palindromic = false;
    std::string detail;
};

// Splits the presentation as polynomial part tensor finite part (polynomial
// generators must not occur in any relation) and reports the top nonzero
// degree of the finite part and the palindromicity of its Poincare polynomial.
DualityReport duality_degrees(const RingPresentation& pres);

struct E2Presentation {
    RingPresentation pres;
    std::vector<PageGenerator> page_gens;  // aligned with pres.generators
    bool certified = false;  // window wide enough for all quadratic relations
};

// Multiplicative generators of the page inside its window and the minimal
// homogeneous relations among them, mined cell by cell with consequences of
// lower-degree relations quotiented out.
E2Presentation presentation_of_e2(const E2Page& page);

}  // namespace procoh
