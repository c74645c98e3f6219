#include "procoh/cyclic_cohomology.hpp"

#include <cassert>

namespace procoh {

namespace {
FpMat identity_mat(int n, long long p) {
    FpMat m(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) m(i, j) = Fp(i == j, p);
    return m;
}
}  // namespace

bool CyclicModule::order_divides_p() const {
    if (dim == 0) return true;
    FpMat pw = identity_mat(dim, p);
    for (long long i = 0; i < p; ++i) pw = pw * sigma;
    for (int i = 0; i < dim; ++i)
        for (int j = 0; j < dim; ++j)
            if (pw(i, j) != Fp(i == j, p)) return false;
    return true;
}

FpMat norm_operator(const CyclicModule& M) {
    FpMat N = identity_mat(M.dim, M.p);
    FpMat pw = identity_mat(M.dim, M.p);
    for (long long i = 1; i < M.p; ++i) {
        pw = pw * M.sigma;
        N = N + pw;
    }
    return N;
}

Subspace cocycles(const CyclicModule& M, int n) {
    assert(n >= 0);
    if (M.dim == 0) return Subspace::zero(0, M.p);
    if (n % 2 == 1) return kernel_basis(norm_operator(M));
    return kernel_basis(FpMat(M.sigma - identity_mat(M.dim, M.p)));
}

Subspace coboundaries(const CyclicModule& M, int n) {
    assert(n >= 0);
    if (M.dim == 0 || n == 0) return Subspace::zero(M.dim, M.p);
    if (n % 2 == 1) return image(FpMat(M.sigma - identity_mat(M.dim, M.p)));
    return image(norm_operator(M));
}

int cohomology_dim(const CyclicModule& M, int n) {
    return cocycles(M, n).dim() - coboundaries(M, n).dim();
}

std::vector<int> jordan_type(const CyclicModule& M) {
    assert(M.order_divides_p());
    // rank((sigma-1)^{k-1}) - rank((sigma-1)^k) = number of blocks of size >= k.
    std::vector<int> at_least(M.p + 2, 0);
    FpMat n = M.sigma - identity_mat(M.dim, M.p);
    FpMat pw = identity_mat(M.dim, M.p);
    int prev_rank = M.dim;
    for (int k = 1; k <= M.p + 1; ++k) {
        pw = pw * n;
        int r = rref(pw).rank;
        at_least[k] = prev_rank - r;
        prev_rank = r;
    }
    std::vector<int> type;
    for (int k = static_cast<int>(M.p); k >= 1; --k) {
        int exactly = at_least[k] - at_least[k + 1];
        for (int i = 0; i < exactly; ++i) type.push_back(k);
    }
    std::sort(type.begin(), type.end());
    return type;
}

std::vector<FpVec> class_representatives(const CyclicModule& M, int n) {
    return quotient_reps(cocycles(M, n), coboundaries(M, n));
}

Fp twist_scaling(const Fp& s, int n) {
    assert(!s.is_zero());
    return s.pow((n + 1) / 2);
}

CyclicModule grade_module(const FpMat& sigma1, int m) {
    CyclicModule M;
    M.p = modulus_of(sigma1);
    M.sigma = grade_matrix(sigma1, m);
    M.dim = static_cast<int>(M.sigma.rows());
    return M;
}

ExtElement reduce_rep(int n, const ExtElement& rep, const FpMat& sigma1) {
    if (rep.is_zero()) return rep;
    // rank-0 kernel: the scalar grade is the whole module and nothing bounds
    if (sigma1.rows() == 0) return rep;
    int m = rep.grade();
    assert(m >= 0 && "reduce_rep needs a homogeneous representative");
    CyclicModule M = grade_module(sigma1, m);
    FpVec v = grade_coords(rep, m);
    assert(cocycles(M, n).contains(v) && "representative is not a cocycle");
    FpVec red = coboundaries(M, n).reduce(v);
    return from_grade_coords(rep.d(), rep.p(), m, red);
}

ExtElement e2_product(int n1, const ExtElement& a, int n2, const ExtElement& b,
                      const FpMat& sigma1) {
    assert(a.d() == b.d() && a.p() == b.p());
    long long p = a.p();
    if (a.is_zero() || b.is_zero()) return ExtElement(a.d(), p);
    int m1 = a.grade();
    assert(m1 >= 0 && b.grade() >= 0);
    ExtElement raw(a.d(), p);
    if ((n1 % 2) && (n2 % 2)) {
        // Diagonal approximation for odd x odd: sum over translate pairs.
        std::vector<ExtElement> ta, tb;
        ExtElement ca = a, cb = b;
        for (long long i = 0; i < p; ++i) {
            ta.push_back(ca);
            tb.push_back(cb);
            ca = apply_endomorphism(sigma1, ca);
            cb = apply_endomorphism(sigma1, cb);
        }
        for (long long i = 0; i < p; ++i)
            for (long long j = i + 1; j < p; ++j)
                raw = raw + wedge(ta[i], tb[j]);
    } else {
        raw = wedge(a, b);
    }
    // Koszul cross sign from moving the degree-n1 quotient part past the
    // grade-m2 kernel part (classes are written kernel-part first).
    int m2 = b.grade();
    if ((n1 % 2) && (m2 % 2)) raw = -raw;
    if (raw.is_zero()) return raw;
    return reduce_rep(n1 + n2, raw, sigma1);
}

}  // namespace procoh
