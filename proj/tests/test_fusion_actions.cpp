#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "procoh/fusion_actions.hpp"

using namespace procoh;

namespace {

const std::vector<std::string> kNames = {"y11", "y12", "y21", "y22"};

ExtensionDatum gl2(long long p) {
    return congruence_extension(p, 2, 1, {{1, 1}, {0, 1}});
}

FusionGenerator whole(const std::string& name, long long p,
                      std::vector<std::vector<long long>> rows) {
    FusionGenerator g;
    g.name = name;
    g.domain = FusionGenerator::Domain::whole_group;
    g.has_matrix = true;
    g.matrix = PrecisionMatrix::from_ints(2, p, 3, rows);
    return g;
}

FusionGenerator kernel_gen(const std::string& name, long long p,
                           std::vector<std::vector<long long>> rows) {
    FusionGenerator g = whole(name, p, std::move(rows));
    g.domain = FusionGenerator::Domain::kernel_only;
    return g;
}

bool mats_equal(const FpMat& a, const FpMat& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) return false;
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j)
            if (a(i, j) != b(i, j)) return false;
    return true;
}

ExtElement ext_of(const std::string& s, long long p) {
    return parse_ext(s, 4, p, kNames);
}

}  // namespace

TEST_CASE("h1_action anchors") {
    ExtensionDatum e = gl2(3);
    FusionGenerator id = whole("id", 3, {{1, 0}, {0, 1}});
    FpMat a = h1_action(id, e);
    CHECK(mats_equal(a, make_mat(3, {{1, 0, 0, 0}, {0, 1, 0, 0}, {0, 0, 1, 0}, {0, 0, 0, 1}})));

    // The convention anchor: the quotient generator acts on H^1 by
    // y11 -> y11 - y21, y12 -> y11 + y12 - y21 - y22, y21 -> y21,
    // y22 -> y21 + y22.
    FusionGenerator h = whole("h", 3, {{1, 1}, {0, 1}});
    FpMat ah = h1_action(h, e);
    FpMat expect = make_mat(3, {{1, 1, 0, 0},
                                {0, 1, 0, 0},
                                {-1, -1, 1, 1},
                                {0, -1, 0, 1}});
    CHECK(mats_equal(ah, expect));
    CHECK(mats_equal(ah, e.sigma1));

    // g_t fixes y1 and y4 and scales y2, y3 by t.
    long long p = 5, t = 2;
    ExtensionDatum e5 = gl2(p);
    FusionGenerator gt = whole("gt", p, {{t, 0}, {0, 1}});
    FpMat at = h1_action(gt, e5);
    ExtElement y1 = ext_of("y11 + y22", p);
    ExtElement y2 = ext_of("y21", p);
    ExtElement y3 = ext_of("y11y21", p);
    ExtElement y4 = ext_of("y11y12y21 - y12y21y22", p);
    CHECK(apply_endomorphism(at, y1) == y1);
    CHECK(apply_endomorphism(at, y2) == y2 * Fp(t, p));
    CHECK(apply_endomorphism(at, y3) == y3 * Fp(t, p));
    CHECK(apply_endomorphism(at, y4) == y4);
}

TEST_CASE("quotient_scalar") {
    ExtensionDatum e = gl2(3);
    CHECK(quotient_scalar(whole("h", 3, {{1, 1}, {0, 1}}), e) == Fp(1, 3));
    // g_t = diag(t, 1) gives t^-1; at p=3, t=2 the inverse is again 2.
    CHECK(quotient_scalar(whole("gt", 3, {{2, 0}, {0, 1}}), e) == Fp(2, 3));
    // g_z = diag(1, z) gives z.
    CHECK(quotient_scalar(whole("gz", 3, {{1, 0}, {0, 2}}), e) == Fp(2, 3));

    ExtensionDatum e5 = gl2(5);
    CHECK(quotient_scalar(whole("gt", 5, {{2, 0}, {0, 1}}), e5) == Fp(3, 5));
    CHECK(quotient_scalar(whole("gz", 5, {{1, 0}, {0, 2}}), e5) == Fp(2, 5));

    // The antidiagonal does not normalize the Borel shape.
    CHECK_THROWS_AS(quotient_scalar(whole("w", 3, {{0, 1}, {1, 0}}), e), Error);
}

TEST_CASE("act_on_class reproduces the twisted images") {
    long long p = 5, t = 2;
    ExtensionDatum e = gl2(p);
    ClassAction gt = class_action(whole("gt", p, {{t, 0}, {0, 1}}), e);
    Fp tinv = Fp(t, p).inverse();
    Fp half = Fp(2, p).inverse();

    // ybar2 -> (t^-1 - 1)/2 y1 + t^-1 ybar2 on the n=1 column.
    ExtElement yb2 = ext_of("y12 - y11", p);
    ExtElement y1 = ext_of("y11 + y22", p);
    ExtElement img = act_on_class(gt, 1, yb2, e.sigma1);
    // The class u*ybar2 also picks up the quotient twist t^-1 on u.
    ExtElement expect = reduce_rep(
        1, (y1 * ((tinv - Fp(1, p)) * half) + yb2 * tinv) * tinv, e.sigma1);
    CHECK(img == expect);

    // g_z on ybar(y1y3): (1-z)/2 y4 + z ybar(y1y3).
    long long z = 3;
    ClassAction gz = class_action(whole("gz", p, {{1, 0}, {0, z}}), e);
    ExtElement yb13 = ext_of("y11y12y21 - y11y12y22", p);
    ExtElement y4 = ext_of("y11y12y21 - y12y21y22", p);
    ExtElement img2 = act_on_class(gz, 1, yb13, e.sigma1);
    ExtElement expect2 = reduce_rep(
        1, (y4 * ((Fp(1, p) - Fp(z, p)) * half) + yb13 * Fp(z, p)) * Fp(z, p),
        e.sigma1);
    CHECK(img2 == expect2);

    // u itself scales by the quotient scalar: t^-1 at n=1.
    ExtElement unit = ExtElement::unit(4, p);
    CHECK(act_on_class(gt, 1, unit, e.sigma1) == unit * tinv);

    CHECK_THROWS_AS(act_on_class(
        ClassAction{Fp(1, p), h1_action(whole("h", p, {{1, 1}, {0, 1}}), e), true},
        1, unit, e.sigma1), Error);
}

TEST_CASE("row0_stable") {
    for (long long p : {3, 5}) {
        ExtensionDatum e = gl2(p);
        std::vector<FusionGenerator> gens = {
            kernel_gen("g1", p, {{1, 1}, {0, 1}}),
            kernel_gen("g2", p, {{1, 0}, {1, 1}}),
        };
        std::vector<Subspace> st = row0_stable(e, gens);
        REQUIRE(st.size() == 5);
        CHECK(st[0].dim() == 1);
        CHECK(st[1].dim() == 1);
        CHECK(st[2].dim() == 0);
        CHECK(st[3].dim() == 1);
        CHECK(st[4].dim() == 1);
        CHECK(st[1].contains(grade_coords(ext_of("y11 + y22", p), 1)));
        CHECK(st[3].contains(grade_coords(ext_of("y11y12y21 - y12y21y22", p), 3)));
        CHECK(st[4].contains(grade_coords(ext_of("y11y12y21y22", p), 4)));
    }

    // No generators: all of E_2^{0,m}.
    ExtensionDatum e = gl2(3);
    std::vector<Subspace> st = row0_stable(e, {});
    CyclicModule m2 = grade_module(e.sigma1, 2);
    CHECK(st[2] == cocycles(m2, 0));
}

TEST_CASE("composition and inverse-closure properties") {
    long long p = 5;
    ExtensionDatum e = gl2(p);
    FusionGenerator gt = whole("gt", p, {{2, 0}, {0, 1}});
    FusionGenerator gz = whole("gz", p, {{1, 0}, {0, 3}});
    FusionGenerator gtz = whole("gtgz", p, {{2, 0}, {0, 3}});
    FpMat lhs = h1_action(gtz, e);
    FpMat rhs = h1_action(gt, e) * h1_action(gz, e);
    CHECK(mats_equal(lhs, rhs));
    CHECK(quotient_scalar(gtz, e) ==
          quotient_scalar(gt, e) * quotient_scalar(gz, e));

    // Joint fixed space on H^1 is unchanged when generators are inverted.
    FusionGenerator gti = whole("gti", p, {{3, 0}, {0, 1}});  // 2^-1 = 3 mod 5
    FusionGenerator gzi = whole("gzi", p, {{1, 0}, {0, 2}});
    FpMat I = make_mat(p, {{1, 0, 0, 0}, {0, 1, 0, 0}, {0, 0, 1, 0}, {0, 0, 0, 1}});
    Subspace a = equalizer({{h1_action(gt, e), I}, {h1_action(gz, e), I}}, 4, p);
    Subspace b = equalizer({{h1_action(gti, e), I}, {h1_action(gzi, e), I}}, 4, p);
    CHECK(a == b);
}
