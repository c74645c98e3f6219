#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "procoh/exterior_algebra.hpp"

using namespace procoh;

namespace {

// Sign oracle: concatenate index tuples and bubble-sort, counting swaps.
int bubble_sign(std::vector<int> v) {
    int sign = 1;
    for (size_t i = 0; i < v.size(); ++i)
        for (size_t j = 0; j + 1 < v.size() - i; ++j) {
            if (v[j] == v[j + 1]) return 0;
            if (v[j] > v[j + 1]) {
                std::swap(v[j], v[j + 1]);
                sign = -sign;
            }
        }
    return sign;
}

ExtElement random_elem(std::mt19937& rng, int d, long long p, int max_terms) {
    std::uniform_int_distribution<int> nd(1, max_terms);
    std::uniform_int_distribution<long long> cd(0, p - 1);
    std::uniform_int_distribution<int> bit(0, 1);
    ExtElement e(d, p);
    int n = nd(rng);
    for (int t = 0; t < n; ++t) {
        std::vector<int> idx;
        for (int i = 0; i < d; ++i)
            if (bit(rng)) idx.push_back(i);
        e.add_term(idx, Fp(cd(rng), p));
    }
    return e;
}

FpMat h_action_on_h1(long long p) {
    return make_mat(p, {{1, 1, 0, 0},
                        {0, 1, 0, 0},
                        {-1, -1, 1, 1},
                        {0, -1, 0, 1}});
}

const std::vector<std::string> kNames = {"y11", "y12", "y21", "y22"};

}  // namespace

TEST_CASE("wedge basics") {
    long long p = 5;
    ExtElement e1 = ExtElement::generator(4, p, 0);
    ExtElement e2 = ExtElement::generator(4, p, 1);
    CHECK(wedge(e1, e1).is_zero());
    CHECK(wedge(e2, e1) == -wedge(e1, e2));

    // y1 = y11 + y22, y4 = y11y12y21 - y12y21y22; y1 y4 = -2 y11y12y21y22.
    ExtElement y1 = parse_ext("y11 + y22", 4, p, kNames);
    ExtElement y4 = parse_ext("y11y12y21 - y12y21y22", 4, p, kNames);
    ExtElement top(4, p);
    top.add_term({0, 1, 2, 3}, Fp(-2, p));
    CHECK(wedge(y1, y4) == top);
}

TEST_CASE("wedge agrees with the bubble-sort sign oracle") {
    std::mt19937 rng(99);
    for (int trial = 0; trial < 200; ++trial) {
        int d = 4;
        long long p = (trial % 2) ? 3 : 7;
        std::uniform_int_distribution<int> bit(0, 1);
        std::vector<int> a, b;
        for (int i = 0; i < d; ++i) {
            if (bit(rng)) a.push_back(i);
            if (bit(rng)) b.push_back(i);
        }
        ExtElement ea(d, p), eb(d, p);
        ea.add_term(a, Fp(1, p));
        eb.add_term(b, Fp(1, p));
        ExtElement w = wedge(ea, eb);
        std::vector<int> cat = a;
        cat.insert(cat.end(), b.begin(), b.end());
        int s = bubble_sign(cat);
        if (s == 0) {
            CHECK(w.is_zero());
        } else {
            std::vector<int> sorted = cat;
            std::sort(sorted.begin(), sorted.end());
            ExtElement expect(d, p);
            expect.add_term(sorted, Fp(s, p));
            CHECK(w == expect);
        }
    }
}

TEST_CASE("induced endomorphism") {
    long long p = 3;
    FpMat id = make_mat(p, {{1, 0, 0, 0}, {0, 1, 0, 0}, {0, 0, 1, 0}, {0, 0, 0, 1}});
    ExtElement y3 = parse_ext("y11y21", 4, p, kNames);
    CHECK(apply_endomorphism(id, y3) == y3);

    FpMat h = h_action_on_h1(p);
    // y3 = y11 y21 -> (y11 - y21) ^ y21 = y11 y21.
    CHECK(apply_endomorphism(h, y3) == y3);
    // Top grade is fixed: det of the unipotent action is 1.
    ExtElement top(4, p);
    top.add_term({0, 1, 2, 3}, Fp(1, p));
    CHECK(apply_endomorphism(h, top) == top);
}

TEST_CASE("grade_matrix") {
    long long p = 3;
    FpMat h = h_action_on_h1(p);
    CHECK(grade_matrix(h, 0) == make_mat(p, {{1}}));

    FpMat m1 = grade_matrix(h, 1);
    CHECK(m1.rows() == 4);
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) CHECK(m1(i, j) == h(i, j));

    // Grade 2 has Jordan type {3,3}: ranks of (sigma-1)^k are 4, 2, 0.
    FpMat m2 = grade_matrix(h, 2);
    FpMat id6(6, 6);
    for (int i = 0; i < 6; ++i)
        for (int j = 0; j < 6; ++j) id6(i, j) = Fp(i == j, p);
    FpMat n = m2 - id6;
    CHECK(rref(n).rank == 4);
    CHECK(rref(FpMat(n * n)).rank == 2);
    CHECK(rref(FpMat(n * n * n)).rank == 0);
}

TEST_CASE("properties: graded commutativity and multiplicativity") {
    std::mt19937 rng(4242);
    std::uniform_int_distribution<long long> cd(0, 4);
    for (int trial = 0; trial < 500; ++trial) {
        int d = 4;
        long long p = 5;
        ExtElement a = random_elem(rng, d, p, 2);
        ExtElement b = random_elem(rng, d, p, 2);
        int ga = a.grade(), gb = b.grade();
        if (ga >= 0 && gb >= 0) {
            Fp sign(((ga * gb) % 2) ? -1 : 1, p);
            CHECK(wedge(a, b) == wedge(b, a) * sign);
        }
        FpMat L(4, 4);
        for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 4; ++j) L(i, j) = Fp(cd(rng), p);
        CHECK(apply_endomorphism(L, wedge(a, b)) ==
              wedge(apply_endomorphism(L, a), apply_endomorphism(L, b)));
    }
}

TEST_CASE("properties: grade_matrix composition and dimensions") {
    std::mt19937 rng(31337);
    std::uniform_int_distribution<long long> cd(0, 6);
    long long p = 7;
    for (int trial = 0; trial < 20; ++trial) {
        FpMat F(4, 4), G(4, 4);
        for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 4; ++j) {
                F(i, j) = Fp(cd(rng), p);
                G(i, j) = Fp(cd(rng), p);
            }
        for (int m = 0; m <= 4; ++m) {
            FpMat lhs = grade_matrix(FpMat(F * G), m);
            FpMat rhs = grade_matrix(F, m) * grade_matrix(G, m);
            for (Eigen::Index i = 0; i < lhs.rows(); ++i)
                for (Eigen::Index j = 0; j < lhs.cols(); ++j)
                    CHECK(lhs(i, j) == rhs(i, j));
        }
    }
    CHECK(grade_basis(4, 2).size() == 6);
    CHECK(grade_basis(4, 4).size() == 1);
}

TEST_CASE("render and parse round-trip") {
    long long p = 7;
    std::mt19937 rng(2024);
    for (int trial = 0; trial < 100; ++trial) {
        ExtElement e = random_elem(rng, 4, p, 3);
        std::string s = render(e, kNames);
        CHECK(parse_ext(s, 4, p, kNames) == e);
    }
    ExtElement y4 = parse_ext("y11y12y21 - y12y21y22", 4, 3, kNames);
    CHECK(render(y4, kNames) == "y11y12y21 - y12y21y22");
}
