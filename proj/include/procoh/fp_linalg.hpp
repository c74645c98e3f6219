#pragma once

#include <utility>
#include <vector>

#include "procoh/fp.hpp"

namespace procoh {

// Attaches every entry of m to modulus p (no-op on already attached entries).
FpMat attach(FpMat m, long long p);
FpVec attach(FpVec v, long long p);

// Modulus found on the first attached entry; asserts if none is attached.
long long modulus_of(const FpMat& m);

FpMat make_mat(long long p, const std::vector<std::vector<long long>>& rows);
FpVec make_vec(long long p, const std::vector<long long>& entries);

struct RrefResult {
    FpMat mat;
    std::vector<int> pivots;
    int rank = 0;
};

RrefResult rref(const FpMat& m);

// Subspace of F_p^ambient in the unique reduced-echelon basis (one vector per
// row).  The canonical form makes equality and golden-file comparison exact.
struct Subspace {
    int ambient = 0;
    long long p = 0;
    FpMat basis;  // dim() x ambient, reduced echelon, pivot-normalized

    int dim() const { return static_cast<int>(basis.rows()); }

    static Subspace zero(int ambient, long long p);
    static Subspace full(int ambient, long long p);
    // Row span of an arbitrary generating set.
    static Subspace span(const FpMat& rows, int ambient, long long p);

    bool contains(const FpVec& v) const;
    bool contains(const Subspace& other) const;
    // Canonical coset representative: v minus its projection onto the pivot
    // coordinates of this subspace.
    FpVec reduce(FpVec v) const;
    // Coordinates of v in the basis rows; asserts containment.
    FpVec coordinates(const FpVec& v) const;

    friend bool operator==(const Subspace& a, const Subspace& b);
};

Subspace kernel_basis(const FpMat& m);
Subspace image(const FpMat& m);

// Joint solution set of A v = B v over all pairs.
Subspace equalizer(const std::vector<std::pair<FpMat, FpMat>>& maps,
                   int ambient, long long p);

Subspace intersect(const std::vector<Subspace>& subs);
Subspace sum(const std::vector<Subspace>& subs);

// Vectors of x with m x = 0 replaced by: {v : m v in target}.
Subspace preimage(const FpMat& m, const Subspace& target);

// Coset representatives completing sub's basis to space's; asserts sub ⊆ space.
std::vector<FpVec> quotient_reps(const Subspace& space, const Subspace& sub);

// Matrix of the map induced by A on space/sub in the quotient_reps basis.
// Requires A(space) ⊆ space and A(sub) ⊆ sub.
FpMat quotient_matrix(const FpMat& A, const Subspace& space, const Subspace& sub);

}  // namespace procoh
