#pragma once

#include <map>
#include <string>
#include <vector>

#include "procoh/fp_linalg.hpp"

namespace procoh {

// Element of the exterior algebra on d degree-1 generators over F_p.
// Terms are keyed by strictly increasing index tuples; zero coefficients are
// never stored.  Sums across grades are allowed.
class ExtElement {
public:
    ExtElement() : d_(0), p_(0) {}
    ExtElement(int d, long long p) : d_(d), p_(p) {}

    static ExtElement unit(int d, long long p);
    static ExtElement generator(int d, long long p, int i);

    int d() const { return d_; }
    long long p() const { return p_; }
    const std::map<std::vector<int>, Fp>& terms() const { return terms_; }

    bool is_zero() const { return terms_.empty(); }
    // Common tuple length, or -1 for mixed grades, or -2 for the zero element.
    int grade() const;

    void add_term(const std::vector<int>& idx, Fp c);

    ExtElement operator+(const ExtElement& o) const;
    ExtElement operator-(const ExtElement& o) const;
    ExtElement operator*(const Fp& c) const;
    ExtElement operator-() const { return *this * Fp(-1, p_); }

    friend bool operator==(const ExtElement& a, const ExtElement& b);

private:
    int d_;
    long long p_;
    std::map<std::vector<int>, Fp> terms_;
};

ExtElement wedge(const ExtElement& a, const ExtElement& b);

// Lexicographically ordered strictly increasing m-subsets of {0..d-1}.
const std::vector<std::vector<int>>& grade_basis(int d, int m);
int grade_index(int d, const std::vector<int>& idx);

// Coordinates of the grade-m part in the lexicographic subset basis.
FpVec grade_coords(const ExtElement& e, int m);
ExtElement from_grade_coords(int d, long long p, int m, const FpVec& coords);

// Unique algebra endomorphism extending the d x d degree-1 map L
// (columns of L are the images of the generators).
ExtElement apply_endomorphism(const FpMat& L, const ExtElement& e);
FpMat grade_matrix(const FpMat& L, int m);

// Text round-trip: terms as signed coefficient + concatenated generator names
// ("y11y12y21 - y12y21y22"); the scalar term renders as the integer alone.
std::string render(const ExtElement& e, const std::vector<std::string>& names);
ExtElement parse_ext(const std::string& text, int d, long long p,
                     const std::vector<std::string>& names);

}  // namespace procoh
