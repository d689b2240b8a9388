#pragma once

#include "reflekt/algebraic.hpp"

namespace reflekt {

struct NumberField;
using NFPtr = std::shared_ptr<const NumberField>;

// A number field together with its ring of integers.  The integral basis is
// given by rows of rational coordinates over the power basis of the handle.
struct NumberField {
    FieldPtr handle;
    std::vector<std::vector<QQ>> integral_basis;
    ZZ disc = 0;
    ZZ index = 1;  // [O_K : Z[alpha]]
    int r1 = 0, r2 = 0;
    std::vector<BigComplex> embeddings;  // canonical root order

    int degree() const { return handle->degree; }
    bool totally_real() const { return r2 == 0; }
    bool one_complex_place() const { return r2 == 1; }

    // coordinates of x over the integral basis (exact)
    std::vector<QQ> to_integral_coords(const FieldElem& x) const;
    FieldElem from_integral_coords(const std::vector<QQ>& c) const;
    bool is_integral(const FieldElem& x) const;

    // internal caches
    struct Cache;
    std::shared_ptr<Cache> cache;
};

NFPtr maximal_order(const FieldPtr& F);

struct PrimeIdeal {
    ZZ p;
    FieldElem beta;  // two-element representation (p, beta)
    int e = 1, f = 1;
    NFPtr field;
    std::vector<std::vector<ZZ>> hnf;  // basis of P in integral-basis coords
    FieldElem val_elem;                // t with t*P in p*O, t not in p*O

    ZZ norm() const;
    bool same_ideal(const PrimeIdeal& o) const;
    // deterministic order: by (p, f, e, hnf)
    bool operator<(const PrimeIdeal& o) const;
};

// Complete factorization of p in O_K (sum of e_i f_i = degree).
std::vector<PrimeIdeal> factor_prime(const NFPtr& K, const ZZ& p);

// Exact P-adic valuation of a nonzero field element.
long valuation(const PrimeIdeal& P, const FieldElem& x);

// Representatives of O/P^m, lazily enumerable.
class ResidueSystem {
  public:
    ResidueSystem(const PrimeIdeal& P, int m);
    ZZ size() const { return size_; }
    int level() const { return m_; }
    const PrimeIdeal& prime() const { return P_; }
    FieldElem rep(ZZ index) const;
    // reduce an element of O (throws if x is not integral)
    FieldElem reduce(const FieldElem& x) const;
    // basis of P^m in integral-basis coordinates
    const std::vector<std::vector<ZZ>>& power_hnf() const { return hnf_; }

  private:
    PrimeIdeal P_;
    int m_;
    ZZ size_;
    std::vector<std::vector<ZZ>> hnf_;  // upper triangular
};

struct Signature {
    int r1 = 0, r2 = 0;
    std::vector<BigComplex> embeddings;
    bool totally_real = false;
    bool one_complex_place = false;
};
Signature signature_and_embeddings(const NFPtr& K);

// --------------------------------------------------- internal lattice tools
// (shared with the quaternion module)
namespace znf {
// upper-triangular row HNF of the lattice spanned by the rows (full column
// rank required)
std::vector<std::vector<ZZ>> hnf(std::vector<std::vector<ZZ>> rows);
// reduce v modulo the HNF lattice (upper triangular, positive diagonal)
std::vector<ZZ> reduce(const std::vector<std::vector<ZZ>>& H, std::vector<ZZ> v);
bool in_lattice(const std::vector<std::vector<ZZ>>& H, const std::vector<ZZ>& v);
// product of two ideals given by HNF bases, in integral-basis coords
std::vector<std::vector<ZZ>> ideal_mult(const NumberField& K,
                                        const std::vector<std::vector<ZZ>>& A,
                                        const std::vector<std::vector<ZZ>>& B);
// multiplication of integral-basis coordinate vectors
std::vector<QQ> mult_coords(const NumberField& K, const std::vector<QQ>& a,
                            const std::vector<QQ>& b);
// element u of A and v of B with u + v = 1 (A, B coprime integral ideals)
std::pair<std::vector<ZZ>, std::vector<ZZ>> split_one(const NumberField& K,
                                                      const std::vector<std::vector<ZZ>>& A,
                                                      const std::vector<std::vector<ZZ>>& B);
}  // namespace znf

}  // namespace reflekt
