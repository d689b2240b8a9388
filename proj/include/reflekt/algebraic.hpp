#pragma once

#include <memory>

#include "reflekt/lattice.hpp"
#include "reflekt/numkernel.hpp"

namespace reflekt {

struct FieldHandle;
using FieldPtr = std::shared_ptr<const FieldHandle>;

// Residue-class representation: coeffs[0] + coeffs[1] z + ... modulo the
// field's defining polynomial.
struct FieldElem {
    FieldPtr field;
    std::vector<QQ> coeffs;

    bool is_zero() const;
    bool is_rational() const;
    QQ rational_value() const;
    bool operator==(const FieldElem& o) const;
    std::string str(const std::string& var = "w") const;
};

// An abstract number field presentation: monic irreducible integer defining
// polynomial plus the selected root in C (which pins the embedding used for
// every numeric statement about its elements).
struct FieldHandle {
    IntPoly defining;
    BigComplex gen;
    int degree = 0;
    PrecisionContext ctx;

    static FieldPtr rationals(const PrecisionContext& ctx);
    static FieldPtr make(IntPoly defining, BigComplex gen, const PrecisionContext& ctx);

    bool is_rationals() const { return degree == 1; }
    // root of `defining` refined to at least `digits` correct digits
    BigComplex gen_refined(int digits) const;

  private:
    mutable std::vector<std::pair<int, BigComplex>> refined_cache_;
};

FieldElem fe_zero(const FieldPtr& F);
FieldElem fe_one(const FieldPtr& F);
FieldElem fe_gen(const FieldPtr& F);
FieldElem fe_from_q(const FieldPtr& F, const QQ& q);
FieldElem fe_add(const FieldElem& a, const FieldElem& b);
FieldElem fe_sub(const FieldElem& a, const FieldElem& b);
FieldElem fe_neg(const FieldElem& a);
FieldElem fe_mul(const FieldElem& a, const FieldElem& b);
FieldElem fe_mul_q(const FieldElem& a, const QQ& q);
FieldElem fe_div(const FieldElem& a, const FieldElem& b);
FieldElem fe_inv(const FieldElem& a);
FieldElem fe_pow(const FieldElem& a, long e);
// evaluate at the field's selected root (or an arbitrary root)
BigComplex fe_eval(const FieldElem& a, int digits = 0);
BigComplex fe_eval_at(const FieldElem& a, const BigComplex& root);
// exact minimal polynomial of the residue class (canonical, irreducible)
IntPoly fe_minpoly(const FieldElem& a);
// substitute: value of `a` under the field hom sending gen(F) -> image
FieldElem fe_map(const FieldElem& a, const FieldElem& image);
QQ fe_norm(const FieldElem& a);
QQ fe_trace(const FieldElem& a);

// --------------------------------------------------------------------------
// Exact algebraic number: canonical irreducible minimal polynomial plus an
// isolating approximation, optionally carried inside an ambient field.
struct AlgebraicNumber {
    IntPoly minpoly;
    BigComplex approx;
    std::optional<FieldElem> ambient;

    bool is_zero() const;
    bool is_rational() const;
    QQ rational_value() const;
    int degree() const { return minpoly.degree(); }
    std::string str() const;
};

AlgebraicNumber alg_from_q(const QQ& q);
AlgebraicNumber alg_from_residue(const FieldElem& e);
// plain construction from a guessed minimal polynomial: verifies minpoly is
// irreducible and approx isolates a root (refining the root to ctx digits)
AlgebraicNumber alg_make(const IntPoly& minpoly, const BigComplex& approx,
                         const PrecisionContext& ctx);

// index of the isolated root in the canonical root order of `minpoly`
int root_index(const IntPoly& minpoly, const BigComplex& approx, const PrecisionContext& ctx);
int root_index(const AlgebraicNumber& a, const PrecisionContext& ctx);
// cached canonical roots
const std::vector<BigComplex>& roots_cached(const IntPoly& p, int digits);
bool alg_equal(const AlgebraicNumber& a, const AlgebraicNumber& b, const PrecisionContext& ctx);

enum class ArithOp { add, sub, mul, div, neg };
AlgebraicNumber field_arith(ArithOp op, const AlgebraicNumber& x, const AlgebraicNumber& y,
                            const PrecisionContext& ctx);

// Compositum of the fields generated by xs; each input re-expressed exactly.
std::pair<FieldPtr, std::vector<FieldElem>> primitive_element(
    const std::vector<AlgebraicNumber>& xs, const PrecisionContext& ctx);

// Exact membership: residue representation of x in F, or nullopt.  The LLL
// fast path is tried first; the Trager fallback makes the test complete.
std::optional<FieldElem> express_in_field(const AlgebraicNumber& x, const FieldPtr& F);

struct AdjoinResult {
    FieldPtr field;
    bool already_square = false;
    FieldElem sqrt_d;         // square root of d inside `field`
    FieldElem old_gen_image;  // image of gen(F) inside `field`
};
AdjoinResult adjoin_sqrt(const FieldElem& d, const FieldPtr& F);

bool is_algebraic_integer(const AlgebraicNumber& x);
// exact sign of a real algebraic number (-1, 0, +1); throws on non-real input
int certified_sign(const AlgebraicNumber& x);
int certified_sign(const FieldElem& x);               // at the selected root
int certified_sign_at(const FieldElem& x, const BigComplex& root);

struct PolredResult {
    FieldPtr field;
    FieldElem old_gen_in_new;  // isomorphism witness
    FieldElem new_gen_in_old;
};
// Isomorphic field with a smaller defining polynomial (best effort, LLL on
// the integral lattice under the Minkowski embedding); see numberfield.cpp.
PolredResult polred(const FieldPtr& F);

// ------------------------------------------------------------ field algebra
// Polynomials with FieldElem coefficients, low degree first.
using FPoly = std::vector<FieldElem>;

// Factor a squarefree monic-izable polynomial over F (Trager's method).
std::vector<FPoly> factor_over_field(const FPoly& g, const FieldPtr& F);
// All roots in F of a squarefree polynomial with rational coefficients.
std::vector<FieldElem> roots_in_field(const IntPoly& q, const FieldPtr& F);
// Square root of d in F if one exists.
std::optional<FieldElem> sqrt_in_field(const FieldElem& d);

}  // namespace reflekt
