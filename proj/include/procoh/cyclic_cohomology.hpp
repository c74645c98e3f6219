#pragma once

#include <vector>

#include "procoh/exterior_algebra.hpp"
#include "procoh/fp_linalg.hpp"

namespace procoh {

// Finite-dimensional F_p[Z/p]-module: a space with an action of the chosen
// generator sigma, sigma^p = I.
struct CyclicModule {
    int dim = 0;
    long long p = 0;
    FpMat sigma;

    bool order_divides_p() const;
};

// N = 1 + sigma + ... + sigma^{p-1}.
FpMat norm_operator(const CyclicModule& M);

// Cohomology of Z/p via the 2-periodic resolution:
// n = 0: ker(sigma-1); n odd: ker N / im(sigma-1); n even > 0: ker(sigma-1) / im N.
int cohomology_dim(const CyclicModule& M, int n);
Subspace cocycles(const CyclicModule& M, int n);
Subspace coboundaries(const CyclicModule& M, int n);

// Multiset of Jordan block sizes (ascending), each in [1, p].
std::vector<int> jordan_type(const CyclicModule& M);

// Canonical basis of H^n: coset representatives of cocycles mod coboundaries.
std::vector<FpVec> class_representatives(const CyclicModule& M, int n);

// Scaling factor picked up by the degree-n base class (u v^{(n-1)/2} or
// v^{n/2}) under a quotient automorphism with parameter s: s^{ceil(n/2)}.
Fp twist_scaling(const Fp& s, int n);

// Representative of the product of classes (n1, rep a) x (n2, rep b) on the
// second page, for the exterior coefficient algebra generated in degree 1 with
// sigma acting through sigma1.  Includes the Koszul cross sign and reduces the
// result modulo coboundaries to the canonical coset representative.
ExtElement e2_product(int n1, const ExtElement& a, int n2, const ExtElement& b,
                      const FpMat& sigma1);

// Canonical coset representative of a homogeneous grade-m cocycle at column n.
ExtElement reduce_rep(int n, const ExtElement& rep, const FpMat& sigma1);

// The cyclic module Lambda^m of the degree-1 module with action sigma1.
CyclicModule grade_module(const FpMat& sigma1, int m);

}  // namespace procoh
