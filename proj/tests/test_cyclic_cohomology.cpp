#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "procoh/cyclic_cohomology.hpp"

using namespace procoh;

namespace {

const std::vector<std::string> kNames = {"y11", "y12", "y21", "y22"};

FpMat h_action_on_h1(long long p) {
    return make_mat(p, {{1, 1, 0, 0},
                        {0, 1, 0, 0},
                        {-1, -1, 1, 1},
                        {0, -1, 0, 1}});
}

CyclicModule jordan_block(int k, long long p) {
    CyclicModule M;
    M.dim = k;
    M.p = p;
    M.sigma = FpMat(k, k);
    for (int i = 0; i < k; ++i)
        for (int j = 0; j < k; ++j)
            M.sigma(i, j) = Fp(i == j || j == i + 1, p);
    return M;
}

FpMat identity(int n, long long p) {
    FpMat m(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) m(i, j) = Fp(i == j, p);
    return m;
}

// Random module with sigma^p = I: conjugated direct sum of Jordan blocks.
CyclicModule random_module(std::mt19937& rng, long long p, int max_dim,
                           std::vector<int>* type_out) {
    std::uniform_int_distribution<int> bd(1, static_cast<int>(p));
    std::vector<int> type;
    int dim = 0;
    while (dim < max_dim) {
        int k = std::min(bd(rng), max_dim - dim);
        type.push_back(k);
        dim += k;
    }
    FpMat sigma(dim, dim);
    for (int i = 0; i < dim; ++i)
        for (int j = 0; j < dim; ++j) sigma(i, j) = Fp(0, p);
    int off = 0;
    for (int k : type) {
        for (int i = 0; i < k; ++i) {
            sigma(off + i, off + i) = Fp(1, p);
            if (i + 1 < k) sigma(off + i, off + i + 1) = Fp(1, p);
        }
        off += k;
    }
    std::uniform_int_distribution<long long> cd(0, p - 1);
    for (;;) {
        FpMat g(dim, dim);
        for (int i = 0; i < dim; ++i)
            for (int j = 0; j < dim; ++j) g(i, j) = Fp(cd(rng), p);
        RrefResult r = rref(g);
        if (r.rank != dim) continue;
        // Invert by augmented reduction.
        FpMat aug(dim, 2 * dim);
        aug.leftCols(dim) = g;
        aug.rightCols(dim) = identity(dim, p);
        FpMat gi = rref(aug).mat.rightCols(dim);
        CyclicModule M;
        M.dim = dim;
        M.p = p;
        M.sigma = g * sigma * gi;
        std::sort(type.begin(), type.end());
        if (type_out) *type_out = type;
        return M;
    }
}

ExtElement ext(const std::string& s, long long p) {
    return parse_ext(s, 4, p, kNames);
}

}  // namespace

TEST_CASE("norm_operator") {
    CyclicModule j1 = jordan_block(1, 3);
    FpMat n1 = norm_operator(j1);
    CHECK(n1(0, 0) == Fp(0, 3));

    CyclicModule j3 = jordan_block(3, 3);  // free block at p=3
    FpMat n3 = norm_operator(j3);
    CHECK(rref(n3).rank == 1);
    FpMat sm1 = j3.sigma - identity(3, 3);
    FpMat sq = sm1 * sm1;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) CHECK(n3(i, j) == sq(i, j));
}

TEST_CASE("cohomology_dim on Jordan blocks") {
    for (int n = 0; n <= 6; ++n) {
        CHECK(cohomology_dim(jordan_block(1, 3), n) == 1);
        CHECK(cohomology_dim(jordan_block(1, 5), n) == 1);
        CHECK(cohomology_dim(jordan_block(3, 3), n) == (n == 0 ? 1 : 0));
        CHECK(cohomology_dim(jordan_block(3, 5), n) == 1);
        CHECK(cohomology_dim(jordan_block(5, 5), n) == (n == 0 ? 1 : 0));
    }
}

TEST_CASE("jordan_type") {
    CyclicModule triv;
    triv.dim = 3;
    triv.p = 5;
    triv.sigma = identity(3, 5);
    CHECK(jordan_type(triv) == std::vector<int>{1, 1, 1});

    FpMat h = h_action_on_h1(3);
    CHECK(jordan_type(grade_module(h, 1)) == std::vector<int>{1, 3});
    CHECK(jordan_type(grade_module(h, 2)) == std::vector<int>{3, 3});
    CHECK(jordan_type(grade_module(h, 3)) == std::vector<int>{1, 3});
    CHECK(jordan_type(grade_module(h, 0)) == std::vector<int>{1});
    CHECK(jordan_type(grade_module(h, 4)) == std::vector<int>{1});
}

TEST_CASE("class_representatives") {
    CyclicModule zero;
    zero.dim = 0;
    zero.p = 3;
    zero.sigma = FpMat(0, 0);
    CHECK(class_representatives(zero, 2).empty());

    // Lambda^1 at p=3, even n > 0: only the J^1 class survives and it is
    // proportional to y1 = y11 + y22 modulo coboundaries.
    CyclicModule m1 = grade_module(h_action_on_h1(3), 1);
    auto reps = class_representatives(m1, 2);
    REQUIRE(reps.size() == 1);
    Subspace cob = coboundaries(m1, 2);
    FpVec y1 = make_vec(3, {1, 0, 0, 1});
    FpVec diff = cob.reduce(y1) - cob.reduce(reps[0]);
    bool proportional = false;
    for (long long c = 1; c < 3; ++c) {
        FpVec scaled = cob.reduce(y1) * Fp(c, 3) - cob.reduce(reps[0]);
        bool zero_vec = true;
        for (Eigen::Index i = 0; i < scaled.size(); ++i)
            if (!scaled(i).is_zero()) zero_vec = false;
        if (zero_vec) proportional = true;
    }
    (void)diff;
    CHECK(proportional);

    // m=3: the J^1 class is spanned by y4 modulo coboundaries.
    CyclicModule m3 = grade_module(h_action_on_h1(3), 3);
    auto reps3 = class_representatives(m3, 2);
    REQUIRE(reps3.size() == 1);
    Subspace cob3 = coboundaries(m3, 2);
    ExtElement y4 = ext("y11y12y21 - y12y21y22", 3);
    FpVec v4 = grade_coords(y4, 3);
    CHECK(cocycles(m3, 2).contains(v4));
    bool prop3 = false;
    for (long long c = 1; c < 3; ++c) {
        FpVec scaled = cob3.reduce(v4) * Fp(c, 3) - cob3.reduce(reps3[0]);
        bool zero_vec = true;
        for (Eigen::Index i = 0; i < scaled.size(); ++i)
            if (!scaled(i).is_zero()) zero_vec = false;
        if (zero_vec) prop3 = true;
    }
    CHECK(prop3);
}

TEST_CASE("property: brute-force oracle for cohomology_dim") {
    std::mt19937 rng(606);
    for (int trial = 0; trial < 200; ++trial) {
        long long p = (trial % 2) ? 3 : 5;
        std::vector<int> type;
        CyclicModule M = random_module(rng, p, 2 + trial % 7, &type);
        CHECK(jordan_type(M) == type);
        // Block-theoretic oracle: size < p contributes 1 in every degree,
        // size = p contributes only in degree 0.
        int small_blocks = 0, free_blocks = 0;
        for (int k : type) (k < static_cast<int>(p) ? small_blocks : free_blocks)++;
        for (int n = 0; n <= 4; ++n) {
            int expect = n == 0 ? small_blocks + free_blocks : small_blocks;
            CHECK(cohomology_dim(M, n) == expect);
        }
        // Periodic-complex oracle on ranks.
        FpMat d_even = M.sigma - identity(M.dim, p);
        FpMat d_odd = norm_operator(M);
        int r_even = rref(d_even).rank, r_odd = rref(d_odd).rank;
        CHECK(cohomology_dim(M, 1) == (M.dim - r_odd) - r_even);
        CHECK(cohomology_dim(M, 2) == (M.dim - r_even) - r_odd);
    }
}

TEST_CASE("twist_scaling") {
    CHECK(twist_scaling(Fp(1, 7), 5) == Fp(1, 7));
    Fp s(3, 7);
    CHECK(twist_scaling(s, 1) == s);
    CHECK(twist_scaling(s, 2) == s);
    CHECK(twist_scaling(s, 3) == s * s);
    CHECK(twist_scaling(s, 4) == s * s);
    // g_t at p=3, t=2: v^2 scales by t^-2 = 1.
    Fp tinv(2, 3);  // 2^-1 = 2 mod 3
    CHECK(twist_scaling(tinv, 4) == Fp(1, 3));
}

TEST_CASE("e2_product: u squared vanishes") {
    for (long long p : {3, 5, 7}) {
        FpMat h = h_action_on_h1(p);
        ExtElement unit = ExtElement::unit(4, p);
        CHECK(e2_product(1, unit, 1, unit, h).is_zero());
    }
}

TEST_CASE("e2_product: p=3 relations") {
    long long p = 3;
    FpMat h = h_action_on_h1(p);
    ExtElement unit = ExtElement::unit(4, p);
    ExtElement y1 = ext("y11 + y22", p);
    ExtElement y2 = ext("y21", p);
    ExtElement y3 = ext("y11y21", p);
    ExtElement y4 = ext("y11y12y21 - y12y21y22", p);

    CHECK(e2_product(0, y2, 1, unit, h).is_zero());  // y2 u
    CHECK(e2_product(0, y2, 2, unit, h).is_zero());  // y2 v
    CHECK(e2_product(0, y3, 1, unit, h).is_zero());  // y3 u
    CHECK(e2_product(0, y3, 2, unit, h).is_zero());  // y3 v
    CHECK(e2_product(0, y2, 0, y3, h).is_zero());
    CHECK(e2_product(0, y2, 0, y4, h).is_zero());
    CHECK(e2_product(0, y3, 0, y4, h).is_zero());

    CHECK_FALSE(e2_product(0, y1, 0, y4, h).is_zero());
    CHECK_FALSE(e2_product(1, unit, 2, unit, h).is_zero());  // uv
    CHECK_FALSE(e2_product(0, y1, 1, unit, h).is_zero());    // y1 u
}

TEST_CASE("e2_product: p>3 reduction relations") {
    long long p = 5;
    FpMat h = h_action_on_h1(p);
    Fp half = Fp(2, p).inverse();
    ExtElement y1 = ext("y11 + y22", p);
    ExtElement y4 = ext("y11y12y21 - y12y21y22", p);
    ExtElement yb2 = ext("y12 - y11", p);
    ExtElement yb3 = ext("y12y22 - y12y21", p);
    ExtElement yb12 = ext("y12y22 - y12y21 - y11y12", p);
    ExtElement yb13 = ext("y11y12y21 - y11y12y22", p);

    // u ybar(y1y3) = 1/2 u y4 - y1 u ybar3.
    ExtElement lhs = reduce_rep(1, yb13, h);
    ExtElement rhs = reduce_rep(1, y4 * half, h) - e2_product(0, y1, 1, yb3, h);
    CHECK(lhs == rhs);

    // u ybar(y1y2) = -y1 u ybar2.
    ExtElement lhs2 = reduce_rep(1, yb12, h);
    ExtElement rhs2 = -e2_product(0, y1, 1, yb2, h);
    CHECK(lhs2 == rhs2);
}

TEST_CASE("e2_product: graded commutativity and associativity on p=3 generators") {
    long long p = 3;
    FpMat h = h_action_on_h1(p);
    struct Cls {
        int n, m;
        ExtElement rep;
    };
    std::vector<Cls> gens = {
        {1, 0, ExtElement::unit(4, p)},       // u
        {2, 0, ExtElement::unit(4, p)},       // v
        {0, 1, ext("y11 + y22", p)},          // y1
        {0, 1, ext("y21", p)},                // y2
        {0, 2, ext("y11y21", p)},             // y3
        {0, 3, ext("y11y12y21 - y12y21y22", p)},  // y4
    };
    for (const Cls& a : gens)
        for (const Cls& b : gens) {
            ExtElement ab = e2_product(a.n, a.rep, b.n, b.rep, h);
            ExtElement ba = e2_product(b.n, b.rep, a.n, a.rep, h);
            int ta = a.n + a.m, tb = b.n + b.m;
            Fp sign((ta * tb) % 2 ? -1 : 1, p);
            CHECK(ab == ba * sign);
        }
    for (const Cls& a : gens)
        for (const Cls& b : gens)
            for (const Cls& c : gens) {
                ExtElement ab = e2_product(a.n, a.rep, b.n, b.rep, h);
                ExtElement bc = e2_product(b.n, b.rep, c.n, c.rep, h);
                ExtElement l = ab.is_zero()
                                   ? ab
                                   : e2_product(a.n + b.n, ab, c.n, c.rep, h);
                ExtElement r = bc.is_zero()
                                   ? bc
                                   : e2_product(a.n, a.rep, b.n + c.n, bc, h);
                CHECK(l == r);
            }
}
