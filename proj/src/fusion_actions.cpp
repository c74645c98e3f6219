#include "procoh/fusion_actions.hpp"

#include <cassert>

namespace procoh {

namespace {
FpMat contragredient_of_inverse_adjoint(const PrecisionMatrix& g, int n,
                                        long long p, int level) {
    if (!g.invertible()) throw Error("fusion generator matrix is not invertible");
    FpMat adj = adjoint_on_layer(g.inverse(), LayerSpace{n, p, level});
    return FpMat(adj.transpose());
}
}  // namespace

ExtensionDatum congruence_extension(long long p, int n, int level,
                                    const std::vector<std::vector<long long>>& h_entries) {
    if (p < 3) throw Error("the prime must be odd");
    ExtensionDatum ext;
    ext.p = p;
    ext.rank = n * n;
    ext.congruence = true;
    ext.n = n;
    ext.level = level;
    ext.h = PrecisionMatrix::from_ints(n, p, level + 2, h_entries);
    if (!ext.h.invertible()) throw Error("quotient generator is not invertible");
    ext.sigma1 = contragredient_of_inverse_adjoint(ext.h, n, p, level);
    return ext;
}

ExtensionDatum abelian_extension(long long p, const FpMat& sigma1) {
    if (p < 3) throw Error("the prime must be odd");
    ExtensionDatum ext;
    ext.p = p;
    ext.rank = static_cast<int>(sigma1.rows());
    ext.congruence = false;
    ext.sigma1 = attach(sigma1, p);
    CyclicModule M{ext.rank, p, ext.sigma1};
    if (!M.order_divides_p()) throw Error("kernel action does not have order p");
    return ext;
}

FpMat h1_action(const FusionGenerator& g, const ExtensionDatum& ext) {
    if (g.has_explicit_h1) {
        if (g.explicit_h1.rows() != ext.rank)
            throw Error("explicit action has wrong dimension");
        return attach(g.explicit_h1, ext.p);
    }
    if (!g.has_matrix || !ext.congruence)
        throw Error("generator " + g.name + " has no usable action data");
    return contragredient_of_inverse_adjoint(g.matrix, ext.n, ext.p, ext.level);
}

Fp quotient_scalar(const FusionGenerator& g, const ExtensionDatum& ext) {
    if (g.domain != FusionGenerator::Domain::whole_group)
        throw Error("quotient_scalar requires a whole_group generator");
    if (!ext.congruence || !g.has_matrix)
        throw Error("quotient_scalar needs a congruence extension and a matrix");
    assert(ext.n == 2 && "quotient reading implemented for GL_2 only");
    PrecisionMatrix a = g.matrix.inverse() * ext.h * g.matrix;
    long long p = ext.p;
    // Must be h^s modulo K_1, i.e. congruent to (1 s; 0 1) mod p with s != 0.
    if (a.at(0, 0) % p != 1 || a.at(1, 1) % p != 1 || a.at(1, 0) % p != 0)
        throw Error("generator " + g.name + " does not normalize the extension");
    long long s = a.at(0, 1) % p;
    if (s == 0)
        throw Error("generator " + g.name + " collapses the quotient");
    return Fp(s, p);
}

ClassAction class_action(const FusionGenerator& g, const ExtensionDatum& ext) {
    ClassAction a;
    a.L = h1_action(g, ext);
    a.kernel_only = g.domain == FusionGenerator::Domain::kernel_only;
    a.s = a.kernel_only ? Fp(1, ext.p) : quotient_scalar(g, ext);
    return a;
}

ExtElement act_on_class(const ClassAction& a, int n, const ExtElement& rep,
                        const FpMat& sigma1) {
    if (a.kernel_only && n != 0)
        throw Error("kernel_only generator queried off row 0");
    if (rep.is_zero()) return rep;
    ExtElement img = apply_endomorphism(a.L, rep) * twist_scaling(a.s, n);
    return reduce_rep(n, img, sigma1);
}

std::vector<Subspace> row0_stable(const ExtensionDatum& ext,
                                  const std::vector<FusionGenerator>& generators) {
    std::vector<Subspace> out;
    for (int m = 0; m <= ext.rank; ++m) {
        CyclicModule M = grade_module(ext.sigma1, m);
        std::vector<Subspace> pieces = {cocycles(M, 0)};
        for (const FusionGenerator& g : generators) {
            FpMat L = grade_matrix(h1_action(g, ext), m);
            FpMat I(M.dim, M.dim);
            for (int i = 0; i < M.dim; ++i)
                for (int j = 0; j < M.dim; ++j) I(i, j) = Fp(i == j, ext.p);
            pieces.push_back(equalizer({{L, I}}, M.dim, ext.p));
        }
        out.push_back(intersect(pieces));
    }
    return out;
}

}  // namespace procoh
