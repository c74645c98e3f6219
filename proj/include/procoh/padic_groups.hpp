#pragma once

#include <vector>

#include "procoh/fp_linalg.hpp"

namespace procoh {

// n x n matrix over Z/p^m, the fixed-precision stand-in for a p-adic matrix.
struct PrecisionMatrix {
    int n = 0;
    long long p = 0;
    int m = 1;  // precision exponent
    std::vector<long long> entries;  // row-major, in [0, p^m)

    static PrecisionMatrix from_ints(int n, long long p, int m,
                                     const std::vector<std::vector<long long>>& rows);
    static PrecisionMatrix identity(int n, long long p, int m);

    long long mod() const;
    long long at(int i, int j) const { return entries[i * n + j]; }
    long long& at(int i, int j) { return entries[i * n + j]; }

    PrecisionMatrix operator*(const PrecisionMatrix& o) const;
    // Gaussian elimination mod p^m; requires det a unit mod p.
    PrecisionMatrix inverse() const;
    bool invertible() const;
    // Drops precision to m' <= m.
    PrecisionMatrix truncated(int m_new) const;

    friend bool operator==(const PrecisionMatrix&, const PrecisionMatrix&) = default;
};

// The layer K_level / K_{level+1} identified with M_n(F_p) via 1 + p^level a -> a.
struct LayerSpace {
    int n = 2;
    long long p = 0;
    int level = 1;
};

// F_p-linear map a -> g a g^{-1} mod p on M_n(F_p), in the matrix-unit basis
// ordered (1,1),(1,2),...,(n,n).
FpMat adjoint_on_layer(const PrecisionMatrix& g, const LayerSpace& layer);

// Conjugation action of g on K_from/K_to as a matrix over Z/p^{to-from} in the
// matrix-unit basis.
struct LayerQuotientAction {
    int n = 0;
    long long p = 0;
    int exponent = 1;  // group is (Z/p^exponent)^{n^2}
    std::vector<long long> action;  // n^2 x n^2, row-major, mod p^exponent
    long long act_at(int i, int j) const { return action[i * n * n + j]; }
};

LayerQuotientAction layer_quotient_action(const PrecisionMatrix& g,
                                          int from_level, int to_level);

}  // namespace procoh
