#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "procoh/cyclic_cohomology.hpp"
#include "procoh/padic_groups.hpp"

namespace procoh {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Extension 1 -> K -> S -> Z/p -> 1 with uniform (or abelian) kernel K.
// sigma1 is the action of the chosen quotient generator on H^1 of the kernel,
// under the fixed convention: pullback along conjugation by the inverse.
struct ExtensionDatum {
    long long p = 0;
    int rank = 0;  // dim H^1 of the kernel
    bool congruence = false;
    int n = 2;        // matrix size (congruence case)
    int level = 1;    // kernel = K_level
    PrecisionMatrix h;  // lift of the quotient generator (congruence case)
    FpMat sigma1;
};

// Congruence kernel K_level of GL_n(Z_p) with quotient generator h.
ExtensionDatum congruence_extension(long long p, int n, int level,
                                    const std::vector<std::vector<long long>>& h_entries);

// Abelian kernel with the generator's H^1 action given directly.
ExtensionDatum abelian_extension(long long p, const FpMat& sigma1);

struct FusionGenerator {
    enum class Domain { whole_group, kernel_only };

    std::string name;
    Domain domain = Domain::whole_group;
    bool has_matrix = false;
    PrecisionMatrix matrix;  // group element (congruence case)
    bool has_explicit_h1 = false;
    FpMat explicit_h1;  // degree-1 action given directly (abelian kernels)
};

// Pullback action of the fusion generator on H^1 of the kernel: the
// contragredient (transpose) of the adjoint action of g^{-1}.
FpMat h1_action(const FusionGenerator& g, const ExtensionDatum& ext);

// The unit s with g^{-1} h g = h^s mod K_1, so that the generator scales the
// degree-1 quotient class u by s.  Throws Error if g does not normalize the
// extension shape.  whole_group generators only.
Fp quotient_scalar(const FusionGenerator& g, const ExtensionDatum& ext);

// Data needed to act on a page class (n, m, rep):
// rep -> twist_scaling(s, n) * Lambda^m(L)(rep), canonically reduced.
struct ClassAction {
    Fp s;
    FpMat L;
    bool kernel_only = false;  // defined on row n = 0 only
};

ClassAction class_action(const FusionGenerator& g, const ExtensionDatum& ext);

ExtElement act_on_class(const ClassAction& a, int n, const ExtElement& rep,
                        const FpMat& sigma1);

// For each m = 0..rank: the subspace of E_2^{0,m} = ker(sigma_m - 1) fixed by
// every listed kernel generator acting on Lambda^m.
std::vector<Subspace> row0_stable(const ExtensionDatum& ext,
                                  const std::vector<FusionGenerator>& generators);

}  // namespace procoh
