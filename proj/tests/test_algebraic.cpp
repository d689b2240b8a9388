#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"
#include "reflekt/algebraic.hpp"

#include <random>

using namespace reflekt;

namespace {
IntPoly P(std::vector<long> c) {
    std::vector<ZZ> z(c.begin(), c.end());
    return IntPoly(std::move(z));
}

const PrecisionContext kCtx(40);

// sqrt(37) as an algebraic number (positive root)
AlgebraicNumber sqrt37() {
    PrecisionScope s(kCtx);
    return alg_make(P({-37, 0, 1}), BigComplex(sqrt(BigFloat(37)), BigFloat(0)), kCtx);
}

AlgebraicNumber sqrtn(long n) {
    PrecisionScope s(kCtx);
    return alg_make(P({-n, 0, 1}), BigComplex(sqrt(BigFloat(n)), BigFloat(0)), kCtx);
}
}  // namespace

TEST_CASE("field elems over Q(sqrt37)") {
    auto [F, imgs] = primitive_element({sqrt37()}, kCtx);
    REQUIRE(F->degree == 2);
    FieldElem r37 = imgs[0];
    CHECK(fe_mul(r37, r37) == fe_from_q(F, QQ(37)));
    CHECK(fe_minpoly(r37) == P({-37, 0, 1}));
    // (7+sqrt37)/2 * (19+sqrt37)/6 = (85+13sqrt37)/6  (oracle: (133+26s+37)/12)
    FieldElem a = fe_mul_q(fe_add(fe_from_q(F, QQ(7)), r37), QQ(1, 2));
    FieldElem b = fe_mul_q(fe_add(fe_from_q(F, QQ(19)), r37), QQ(1, 6));
    FieldElem prod = fe_mul(a, b);
    FieldElem expect = fe_mul_q(fe_add(fe_from_q(F, QQ(85)), fe_mul_q(r37, QQ(13))), QQ(1, 6));
    CHECK(prod == expect);
    CHECK(fe_norm(a) == QQ(49 - 37, 4));
    CHECK(fe_trace(a) == QQ(7));
    CHECK(fe_inv(fe_inv(a)) == a);
}

TEST_CASE("field_arith spec examples") {
    SUBCASE("sqrt37 * sqrt37 = 37") {
        AlgebraicNumber r = field_arith(ArithOp::mul, sqrt37(), sqrt37(), kCtx);
        CHECK(r.is_rational());
        CHECK(r.rational_value() == 37);
    }
    SUBCASE("(7+sqrt37)/2 * (19+sqrt37)/6") {
        AlgebraicNumber s = sqrt37();
        AlgebraicNumber a = field_arith(ArithOp::add, alg_from_q(QQ(7)), s, kCtx);
        a = field_arith(ArithOp::div, a, alg_from_q(QQ(2)), kCtx);
        AlgebraicNumber b = field_arith(ArithOp::add, alg_from_q(QQ(19)), s, kCtx);
        b = field_arith(ArithOp::div, b, alg_from_q(QQ(6)), kCtx);
        AlgebraicNumber prod = field_arith(ArithOp::mul, a, b, kCtx);
        // oracle: symbolic expansion (133 + 26 sqrt37 + 37)/12 = (85+13sqrt37)/6
        AlgebraicNumber expect = field_arith(ArithOp::mul, s, alg_from_q(QQ(13, 6)), kCtx);
        expect = field_arith(ArithOp::add, expect, alg_from_q(QQ(85, 6)), kCtx);
        CHECK(alg_equal(prod, expect, kCtx));
    }
    SUBCASE("x + (-x) = 0 with minpoly x") {
        AlgebraicNumber s = sqrt37();
        AlgebraicNumber n = field_arith(ArithOp::neg, s, s, kCtx);
        AlgebraicNumber z = field_arith(ArithOp::add, s, n, kCtx);
        CHECK(z.is_zero());
        CHECK(z.minpoly == IntPoly::variable());
    }
    SUBCASE("division by zero rejected") {
        AlgebraicNumber s = sqrt37();
        CHECK_THROWS(field_arith(ArithOp::div, s, alg_from_q(QQ(0)), kCtx));
    }
}

TEST_CASE("primitive_element sqrt2 sqrt3") {
    auto [F, imgs] = primitive_element({sqrtn(2), sqrtn(3)}, kCtx);
    CHECK(F->degree == 4);
    // oracle: minpoly of sqrt2+sqrt3 is x^4-10x^2+1 = (x^2-5)^2-24
    FieldElem s23 = fe_add(imgs[0], imgs[1]);
    CHECK(fe_minpoly(s23) == P({1, 0, -10, 0, 1}));
    CHECK(fe_mul(imgs[0], imgs[0]) == fe_from_q(F, QQ(2)));
    CHECK(fe_mul(imgs[1], imgs[1]) == fe_from_q(F, QQ(3)));
}

TEST_CASE("primitive_element rationals only") {
    auto [F, imgs] = primitive_element({alg_from_q(QQ(1, 2))}, kCtx);
    CHECK(F->degree == 1);
    CHECK(imgs[0].rational_value() == QQ(1, 2));
}

TEST_CASE("primitive_element of the worked-example generators") {
    // generators of k(P) for the (3,3,6) Lambert cube: (7+sqrt37)/2,
    // (19+sqrt37)/6, 11+2sqrt37 -> field is Q(sqrt37)
    AlgebraicNumber s = sqrt37();
    AlgebraicNumber g1 = field_arith(ArithOp::div,
                                     field_arith(ArithOp::add, alg_from_q(QQ(7)), s, kCtx),
                                     alg_from_q(QQ(2)), kCtx);
    AlgebraicNumber g2 = field_arith(ArithOp::div,
                                     field_arith(ArithOp::add, alg_from_q(QQ(19)), s, kCtx),
                                     alg_from_q(QQ(6)), kCtx);
    AlgebraicNumber g3 = field_arith(ArithOp::add, alg_from_q(QQ(11)),
                                     field_arith(ArithOp::mul, alg_from_q(QQ(2)), s, kCtx), kCtx);
    auto [F, imgs] = primitive_element({g1, g2, g3}, kCtx);
    CHECK(F->degree == 2);
    // the field is Q(sqrt37): 37 must have a square root in it
    CHECK(!roots_in_field(P({-37, 0, 1}), F).empty());
}

TEST_CASE("express_in_field") {
    auto [F37, imgs] = primitive_element({sqrt37()}, kCtx);
    auto [F3, imgs3] = primitive_element({sqrtn(3)}, kCtx);
    SUBCASE("sqrt37 in Q(sqrt37)") {
        auto e = express_in_field(sqrt37(), F37);
        REQUIRE(e.has_value());
        CHECK(fe_minpoly(*e) == P({-37, 0, 1}));
        CHECK(certified_sign(*e) == 1);  // the positive root
    }
    SUBCASE("sqrt2 not in Q(sqrt3)") {
        CHECK(!express_in_field(sqrtn(2), F3).has_value());
    }
    SUBCASE("(2973-489sqrt37)/2 in Q(sqrt37)") {
        FieldElem r37 = imgs[0];
        FieldElem d = fe_mul_q(fe_sub(fe_from_q(F37, QQ(2973)), fe_mul_q(r37, QQ(489))), QQ(1, 2));
        AlgebraicNumber da = alg_from_residue(d);
        auto e = express_in_field(da, F37);
        REQUIRE(e.has_value());
        CHECK(*e == d);
    }
    SUBCASE("degree obstruction is fast") {
        auto [F4, i4] = primitive_element({sqrtn(2), sqrtn(3)}, kCtx);
        AlgebraicNumber c5 = alg_make(P({-5, 0, 0, 1}), BigComplex(BigFloat("1.7099"), BigFloat(0)), kCtx);
        CHECK(!express_in_field(c5, F4).has_value());  // cube root of 5, deg 3 does not divide 4
    }
}

TEST_CASE("sqrt_in_field and adjoin_sqrt") {
    auto [F, imgs] = primitive_element({sqrt37()}, kCtx);
    FieldElem r37 = imgs[0];
    SUBCASE("4 is a square over the rationals") {
        FieldPtr Q = FieldHandle::rationals(kCtx);
        auto r = adjoin_sqrt(fe_from_q(Q, QQ(4)), Q);
        CHECK(r.already_square);
        CHECK(r.field == Q);
        CHECK(r.sqrt_d.rational_value() == 2);
    }
    SUBCASE("-1 over the rationals gives x^2+1") {
        FieldPtr Q = FieldHandle::rationals(kCtx);
        auto r = adjoin_sqrt(fe_from_q(Q, QQ(-1)), Q);
        CHECK(!r.already_square);
        CHECK(r.field->defining == P({1, 0, 1}));
    }
    SUBCASE("(269+44sqrt37)/4 is a square in Q(sqrt37)") {
        // oracle: ((11+2sqrt37)/2)^2 = (121+148+44sqrt37)/4
        FieldElem d = fe_mul_q(fe_add(fe_from_q(F, QQ(269)), fe_mul_q(r37, QQ(44))), QQ(1, 4));
        auto s = sqrt_in_field(d);
        REQUIRE(s.has_value());
        CHECK(fe_mul(*s, *s) == d);
    }
    SUBCASE("paper-consistent d over Q(sqrt37) gives the x^4+5x^2-3 field") {
        // d = (-2973-489sqrt37)/2 (determinant of the paper's form matrix)
        FieldElem d = fe_mul_q(fe_add(fe_from_q(F, QQ(-2973)), fe_mul_q(r37, QQ(-489))), QQ(1, 2));
        CHECK(!sqrt_in_field(d).has_value());
        auto r = adjoin_sqrt(d, F);
        CHECK(!r.already_square);
        CHECK(r.field->degree == 4);
        // isomorphism witness: x^4+5x^2-3 has a root in the new field
        CHECK(!roots_in_field(P({-3, 0, 5, 0, 1}), r.field).empty());
        // sanity: sqrt_d^2 maps back to d
        FieldElem d_img = fe_map(d, r.old_gen_image);
        CHECK(fe_mul(r.sqrt_d, r.sqrt_d) == d_img);
    }
    SUBCASE("the paper's misprinted d gives a different quartic field") {
        FieldElem d = fe_mul_q(fe_sub(fe_from_q(F, QQ(2973)), fe_mul_q(r37, QQ(489))), QQ(1, 2));
        auto r = adjoin_sqrt(d, F);
        CHECK(r.field->degree == 4);
        CHECK(roots_in_field(P({-3, 0, 5, 0, 1}), r.field).empty());
    }
}

TEST_CASE("is_algebraic_integer") {
    CHECK(is_algebraic_integer(sqrtn(3)));
    // (1+sqrt37)/2 is integral: oracle expand x^2-x-9
    AlgebraicNumber h = field_arith(ArithOp::div,
                                    field_arith(ArithOp::add, alg_from_q(QQ(1)), sqrt37(), kCtx),
                                    alg_from_q(QQ(2)), kCtx);
    CHECK(h.minpoly == P({-9, -1, 1}));
    CHECK(is_algebraic_integer(h));
    CHECK(!is_algebraic_integer(alg_from_q(QQ(1, 2))));
    // g26 = -sqrt3(1+sqrt37)/6 is NOT integral (minpoly 3x^4-19x^2+27)
    AlgebraicNumber g26 = field_arith(ArithOp::mul, sqrtn(3),
                                      field_arith(ArithOp::add, alg_from_q(QQ(1)), sqrt37(), kCtx),
                                      kCtx);
    g26 = field_arith(ArithOp::div, g26, alg_from_q(QQ(-6)), kCtx);
    CHECK(g26.minpoly == P({27, 0, -19, 0, 3}));
    CHECK(!is_algebraic_integer(g26));
    // -sqrt(14+2sqrt37)/2 IS integral (root of monic x^4-7x^2+3), despite the
    // prose in the source material
    auto [F, imgs] = primitive_element({sqrt37()}, kCtx);
    FieldElem inner = fe_add(fe_from_q(F, QQ(14)), fe_mul_q(imgs[0], QQ(2)));
    auto adj = adjoin_sqrt(inner, F);
    AlgebraicNumber g14 = alg_from_residue(fe_mul_q(adj.sqrt_d, QQ(-1, 2)));
    CHECK(g14.minpoly == P({3, 0, -7, 0, 1}));
    CHECK(is_algebraic_integer(g14));
}

TEST_CASE("certified_sign") {
    CHECK(certified_sign(alg_from_q(QQ(0))) == 0);
    auto [F, imgs] = primitive_element({sqrt37()}, kCtx);
    FieldElem r37 = imgs[0];
    // -42-6sqrt37 < 0
    FieldElem b = fe_sub(fe_from_q(F, QQ(-42)), fe_mul_q(r37, QQ(6)));
    CHECK(certified_sign(b) == -1);
    // 11+2sqrt37 > 0
    FieldElem c = fe_add(fe_from_q(F, QQ(11)), fe_mul_q(r37, QQ(2)));
    CHECK(certified_sign(c) == 1);
    CHECK(certified_sign(alg_from_residue(b)) == -1);
    // non-real input rejected
    AlgebraicNumber i = alg_make(P({1, 0, 1}), BigComplex(BigFloat(0), BigFloat(1)), kCtx);
    CHECK_THROWS(certified_sign(i));
    // sign at the conjugate embedding: -42+6sqrt37 < 0 still (6*6.08 = 36.5)
    const auto& roots = roots_cached(F->defining, 40);
    CHECK(certified_sign_at(b, roots[0]) == -1);
    CHECK(certified_sign_at(c, roots[0]) == -1);  // 11-2sqrt37 < 0
}

TEST_CASE("field_arith roundtrip on random degree<=4 pairs") {
    std::mt19937_64 rng(909);
    int done = 0;
    while (done < 8) {
        // random small algebraic numbers from quadratic fields
        long n1 = 2 + static_cast<long>(rng() % 30);
        long n2 = 2 + static_cast<long>(rng() % 30);
        IntPoly p1 = P({-n1, 0, 1}), p2 = P({-n2, 0, 1});
        if (!is_irreducible(p1) || !is_irreducible(p2)) continue;
        ++done;
        PrecisionScope s(kCtx);
        AlgebraicNumber x = alg_make(p1, BigComplex(sqrt(BigFloat(n1)), BigFloat(0)), kCtx);
        AlgebraicNumber y = alg_make(p2, BigComplex(-sqrt(BigFloat(n2)), BigFloat(0)), kCtx);
        AlgebraicNumber sum = field_arith(ArithOp::add, x, y, kCtx);
        AlgebraicNumber back = field_arith(ArithOp::sub, sum, y, kCtx);
        CHECK(alg_equal(back, x, kCtx));
        // numeric re-verification
        BigComplex nx = sum.approx;
        BigFloat expect = sqrt(BigFloat(n1)) - sqrt(BigFloat(n2));
        CHECK(fabs(nx.re - expect) < 1e-25);
        AlgebraicNumber prod = field_arith(ArithOp::mul, x, y, kCtx);
        AlgebraicNumber q = field_arith(ArithOp::div, prod, y, kCtx);
        CHECK(alg_equal(q, x, kCtx));
        // exact minpoly evaluation: minpoly(sum) vanishes at sum's residue
        REQUIRE(sum.ambient.has_value());
        FieldElem v = fe_zero(sum.ambient->field);
        for (int i = sum.minpoly.degree(); i >= 0; --i) {
            v = fe_mul(v, *sum.ambient);
            v = fe_add(v, fe_from_q(sum.ambient->field, QQ(sum.minpoly[i])));
        }
        CHECK(v.is_zero());
    }
}

TEST_CASE("factor_over_field example") {
    // z^2-2 over Q(sqrt2) splits into two linear factors
    auto [F, imgs] = primitive_element({sqrtn(2)}, kCtx);
    auto roots = roots_in_field(P({-2, 0, 1}), F);
    CHECK(roots.size() == 2);
    for (const auto& r : roots) CHECK(fe_mul(r, r) == fe_from_q(F, QQ(2)));
    // z^2-3 over Q(sqrt2) stays irreducible
    CHECK(roots_in_field(P({-3, 0, 1}), F).empty());
}
