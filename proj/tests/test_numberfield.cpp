#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"
#include "reflekt/numberfield.hpp"

#include <random>
#include <set>

using namespace reflekt;

namespace {
IntPoly P(std::vector<long> c) {
    std::vector<ZZ> z(c.begin(), c.end());
    return IntPoly(std::move(z));
}

const PrecisionContext kCtx(40);

FieldPtr make_field(std::vector<long> coeffs, double re, double im = 0) {
    PrecisionScope s(kCtx);
    return FieldHandle::make(P(std::move(coeffs)),
                             BigComplex(BigFloat(re), BigFloat(im), BigFloat("1e-6")), kCtx);
}
}  // namespace

TEST_CASE("maximal order of Q(sqrt37)") {
    FieldPtr F = make_field({-37, 0, 1}, 6.0827625303);
    NFPtr K = maximal_order(F);
    CHECK(K->disc == 37);
    CHECK(K->index == 2);  // Z[sqrt37] has index 2: basis {1, (1+sqrt37)/2}
    CHECK(K->r1 == 2);
    CHECK(K->r2 == 0);
    // oracle (Dedekind at 2): (1+sqrt37)/2 is integral, so the basis must
    // contain an element with denominator 2
    FieldElem half = fe_mul_q(fe_add(fe_one(F), fe_gen(F)), QQ(1, 2));
    CHECK(K->is_integral(half));
    CHECK(!K->is_integral(fe_mul_q(fe_gen(F), QQ(1, 2))));
}

TEST_CASE("maximal order of Q(i)") {
    FieldPtr F = make_field({1, 0, 1}, 0, 1);
    NFPtr K = maximal_order(F);
    CHECK(K->disc == -4);
    CHECK(K->index == 1);
    CHECK(K->r1 == 0);
    CHECK(K->r2 == 1);
    CHECK(K->one_complex_place());
}

TEST_CASE("maximal order of x^4+5x^2-3 has discriminant -4107") {
    FieldPtr F = make_field({-3, 0, 5, 0, 1}, 0, 2.3540138632);
    NFPtr K = maximal_order(F);
    CHECK(K->disc == -4107);  // -3 * 37^2
    CHECK(K->index == 4);     // poly disc -65712 = 16 * (-4107)
    CHECK(K->r1 == 2);
    CHECK(K->r2 == 1);
    CHECK(K->one_complex_place());
}

TEST_CASE("signature flags") {
    SUBCASE("x^4-x^3+x^2-x+1 is totally complex") {
        FieldPtr F = make_field({1, -1, 1, -1, 1}, 0.809016994, -0.587785252);
        auto s = signature_and_embeddings(maximal_order(F));
        CHECK(s.r1 == 0);
        CHECK(s.r2 == 2);
        CHECK(!s.one_complex_place);
    }
    SUBCASE("x^2-2 is totally real") {
        FieldPtr F = make_field({-2, 0, 1}, 1.41421356);
        auto s = signature_and_embeddings(maximal_order(F));
        CHECK(s.totally_real);
        CHECK(s.r1 == 2);
    }
}

TEST_CASE("factor_prime in Q(sqrt37)") {
    FieldPtr F = make_field({-37, 0, 1}, 6.0827625303);
    NFPtr K = maximal_order(F);
    SUBCASE("3 splits: x^2-37 = (x-1)(x+1) mod 3") {
        auto ps = factor_prime(K, ZZ(3));
        REQUIRE(ps.size() == 2);
        CHECK(ps[0].e == 1);
        CHECK(ps[0].f == 1);
        CHECK(ps[1].e == 1);
        CHECK(ps[1].f == 1);
        CHECK(ps[0].norm() == 3);
    }
    SUBCASE("37 ramifies") {
        auto ps = factor_prime(K, ZZ(37));
        REQUIRE(ps.size() == 1);
        CHECK(ps[0].e == 2);
        CHECK(ps[0].f == 1);
    }
    SUBCASE("2 at the index prime") {
        // 2 divides the index [O : Z[sqrt37]] = 2; disc 37 is odd so 2 is
        // unramified; x^2-x-9 (minpoly of (1+sqrt37)/2) is irreducible mod 2
        auto ps = factor_prime(K, ZZ(2));
        int total = 0;
        for (const auto& p : ps) total += p.e * p.f;
        CHECK(total == 2);
        for (const auto& p : ps) CHECK(p.e == 1);
    }
    SUBCASE("valuations") {
        auto ps = factor_prime(K, ZZ(3));
        // 9 has valuation 2 at each degree-1 prime over 3
        CHECK(valuation(ps[0], fe_from_q(F, QQ(9))) == 2);
        CHECK(valuation(ps[1], fe_from_q(F, QQ(9))) == 2);
        CHECK(valuation(ps[0], fe_from_q(F, QQ(1, 3))) == -1);
        CHECK_THROWS(valuation(ps[0], fe_zero(F)));
        auto p37 = factor_prime(K, ZZ(37));
        CHECK(valuation(p37[0], fe_gen(F)) == 1);        // v(sqrt37) = 1
        CHECK(valuation(p37[0], fe_from_q(F, QQ(37))) == 2);
    }
}

TEST_CASE("factor_prime (1+i)^2 = 2i in Q(i)") {
    FieldPtr F = make_field({1, 0, 1}, 0, 1);
    NFPtr K = maximal_order(F);
    auto ps = factor_prime(K, ZZ(2));
    REQUIRE(ps.size() == 1);
    CHECK(ps[0].e == 2);
    CHECK(ps[0].f == 1);
    // oracle: norm(1+i) = 2, so v(1+i) = 1
    FieldElem onei = fe_add(fe_one(F), fe_gen(F));
    CHECK(fe_norm(onei) == 2);
    CHECK(valuation(ps[0], onei) == 1);
}

TEST_CASE("factor_prime 3 in the quartic x^4+5x^2-3") {
    FieldPtr F = make_field({-3, 0, 5, 0, 1}, 0, 2.3540138632);
    NFPtr K = maximal_order(F);
    auto ps = factor_prime(K, ZZ(3));
    // x^4+5x^2-3 = x^2 (x-1)(x+1) mod 3: three primes, one ramified
    REQUIRE(ps.size() == 3);
    int total = 0, ramified = 0, deg1 = 0;
    for (const auto& p : ps) {
        total += p.e * p.f;
        if (p.e > 1) ++ramified;
        if (p.f == 1) ++deg1;
    }
    CHECK(total == 4);
    CHECK(ramified == 1);
    CHECK(deg1 == 3);
    // 2 divides the index (4): exercise the etale-splitting path
    auto p2 = factor_prime(K, ZZ(2));
    int t2 = 0;
    for (const auto& p : p2) t2 += p.e * p.f;
    CHECK(t2 == 4);
    for (const auto& p : p2) CHECK(p.e == 1);  // disc -4107 is odd
    // multiplicativity of valuations on random products
    std::mt19937_64 rng(5150);
    for (int t = 0; t < 5; ++t) {
        std::vector<QQ> ca(4), cb(4);
        for (auto& c : ca) c = QQ(static_cast<long>(rng() % 7) - 3);
        for (auto& c : cb) c = QQ(static_cast<long>(rng() % 7) - 3);
        FieldElem a{F, ca}, b{F, cb};
        if (a.is_zero() || b.is_zero()) continue;
        for (const auto& p : ps)
            CHECK(valuation(p, fe_mul(a, b)) == valuation(p, a) + valuation(p, b));
    }
    // n_P(p) = e
    for (const auto& p : ps) CHECK(valuation(p, fe_from_q(F, QQ(3))) == p.e);
}

TEST_CASE("product of ideal norms equals p^degree") {
    FieldPtr F = make_field({-3, 0, 5, 0, 1}, 0, 2.3540138632);
    NFPtr K = maximal_order(F);
    for (long p : {2, 3, 5, 7, 11, 37}) {
        auto ps = factor_prime(K, ZZ(p));
        ZZ prod = 1;
        for (const auto& pr : ps) prod *= pow(pr.norm(), pr.e);
        CHECK(prod == pow(ZZ(p), 4));
    }
}

TEST_CASE("residues_mod_power") {
    SUBCASE("rationals mod 3") {
        FieldPtr Q = FieldHandle::rationals(kCtx);
        NFPtr K = maximal_order(Q);
        auto ps = factor_prime(K, ZZ(3));
        ResidueSystem rs(ps[0], 1);
        CHECK(rs.size() == 3);
        std::set<std::string> seen;
        for (ZZ i = 0; i < rs.size(); ++i) seen.insert(rs.rep(i).str());
        CHECK(seen.size() == 3);
    }
    SUBCASE("Q(i) mod the prime over 2") {
        FieldPtr F = make_field({1, 0, 1}, 0, 1);
        NFPtr K = maximal_order(F);
        auto ps = factor_prime(K, ZZ(2));
        ResidueSystem rs(ps[0], 1);
        CHECK(rs.size() == 2);
    }
    SUBCASE("counts and pairwise non-congruence for m <= 3") {
        FieldPtr F = make_field({-37, 0, 1}, 6.0827625303);
        NFPtr K = maximal_order(F);
        auto ps = factor_prime(K, ZZ(3));
        for (int m = 1; m <= 3; ++m) {
            ResidueSystem rs(ps[0], m);
            CHECK(rs.size() == pow(ZZ(3), static_cast<unsigned>(m)));
            // pairwise non-congruent: reduce(rep_i - rep_j) != 0
            long n = rs.size().convert_to<long>();
            for (long i = 0; i < n; ++i)
                for (long j = i + 1; j < n; ++j) {
                    FieldElem d = fe_sub(rs.rep(ZZ(i)), rs.rep(ZZ(j)));
                    CHECK(!rs.reduce(d).is_zero());
                }
        }
    }
    SUBCASE("reduce is idempotent and respects congruence") {
        FieldPtr F = make_field({-37, 0, 1}, 6.0827625303);
        NFPtr K = maximal_order(F);
        auto ps = factor_prime(K, ZZ(3));
        ResidueSystem rs(ps[0], 2);
        FieldElem x = fe_add(fe_mul_q(fe_gen(F), QQ(5)), fe_from_q(F, QQ(17)));
        FieldElem r = rs.reduce(x);
        CHECK(rs.reduce(r) == r);
        CHECK(valuation(ps[0], fe_sub(x, r)) >= 2);
    }
}

TEST_CASE("integral-basis discriminant divides poly disc with square cofactor") {
    for (auto coeffs : std::vector<std::vector<long>>{
             {-37, 0, 1}, {-3, 0, 5, 0, 1}, {1, -1, 1, -1, 1}, {-2, 0, 0, 0, 1}}) {
        IntPoly p = P(coeffs);
        PrecisionScope s(kCtx);
        auto roots = isolate_roots(p, kCtx);
        FieldPtr F = FieldHandle::make(p, roots[0], kCtx);
        NFPtr K = maximal_order(F);
        ZZ pd = poly_disc(p);
        CHECK(pd == K->disc * K->index * K->index);
    }
}

TEST_CASE("polred") {
    SUBCASE("x^2-8 -> x^2-2") {
        FieldPtr F = make_field({-8, 0, 1}, 2.8284271247);
        auto r = polred(F);
        CHECK(r.field->defining == P({-2, 0, 1}));
        // the isomorphism witness: old gen (sqrt8) = 2*new gen (sqrt2)
        BigComplex img = fe_eval(r.old_gen_in_new);
        CHECK(fabs(img.re - BigFloat("2.8284271247")) < 1e-8);
    }
    SUBCASE("x^2+1 unchanged") {
        FieldPtr F = make_field({1, 0, 1}, 0, 1);
        auto r = polred(F);
        CHECK(r.field->defining == P({1, 0, 1}));
    }
    SUBCASE("minpoly of sqrt((-2973-489sqrt37)/2) reduces to x^4+5x^2-3") {
        // z^4+2973z^2-2187 (paper-consistent d; the displayed d misprints
        // the signs)
        PrecisionScope s(PrecisionContext(60));
        PrecisionContext c60(60);
        IntPoly p = P({-2187, 0, 2973, 0, 1});
        auto roots = isolate_roots(p, c60);
        // pick a root: sqrt(d) with d ~ -2973.7, so ~ 54.53i
        int pick = -1;
        for (size_t i = 0; i < roots.size(); ++i)
            if (!roots[i].exactly_real() && roots[i].im > 0) pick = static_cast<int>(i);
        REQUIRE(pick >= 0);
        FieldPtr F = FieldHandle::make(p, roots[pick], c60);
        auto r = polred(F);
        CHECK(r.field->defining.degree() == 4);
        // isomorphic to the x^4+5x^2-3 field and genuinely small
        CHECK(!roots_in_field(P({-3, 0, 5, 0, 1}), r.field).empty());
        ZZ h = 0;
        for (const auto& c : r.field->defining.coeffs()) h = std::max(h, ZZ(abs(c)));
        CHECK(h <= 50);
    }
}
