#pragma once

#include <boost/multiprecision/gmp.hpp>
#include <boost/multiprecision/mpfr.hpp>

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace reflekt {

using ZZ = boost::multiprecision::mpz_int;
using QQ = boost::multiprecision::mpq_rational;
using BigFloat = boost::multiprecision::mpfr_float;

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Working precision for all certified numerics.  `digits` is the requested
// decimal precision; every computation internally adds `guard` digits.
struct PrecisionContext {
    int digits = 100;
    static constexpr int guard = 10;

    PrecisionContext() = default;
    explicit PrecisionContext(int d) : digits(d) {
        if (d < 19) throw Error("PrecisionContext: digits must be >= 19");
    }
    int working_digits() const { return digits + guard; }
};

// RAII guard for the mpfr default precision used by newly created values.
class PrecisionScope {
  public:
    explicit PrecisionScope(int decimal_digits)
        : saved_(BigFloat::default_precision()) {
        BigFloat::default_precision(decimal_digits);
    }
    explicit PrecisionScope(const PrecisionContext& ctx)
        : PrecisionScope(ctx.working_digits()) {}
    ~PrecisionScope() { BigFloat::default_precision(saved_); }
    PrecisionScope(const PrecisionScope&) = delete;
    PrecisionScope& operator=(const PrecisionScope&) = delete;

  private:
    unsigned saved_;
};

// Complex number with an error radius: the true value lies in the closed
// disc of radius `err` around re + i*im.
struct BigComplex {
    BigFloat re, im, err;

    BigComplex() : re(0), im(0), err(0) {}
    BigComplex(BigFloat r, BigFloat i, BigFloat e = BigFloat(0))
        : re(std::move(r)), im(std::move(i)), err(std::move(e)) {}
    explicit BigComplex(const QQ& q);

    bool exactly_real() const { return im.is_zero(); }
    BigFloat abs() const;

    BigComplex operator-() const { return {-re, -im, err}; }
    BigComplex conj() const { return {re, -im, err}; }

    friend BigComplex operator+(const BigComplex& a, const BigComplex& b);
    friend BigComplex operator-(const BigComplex& a, const BigComplex& b);
    friend BigComplex operator*(const BigComplex& a, const BigComplex& b);
    friend BigComplex operator/(const BigComplex& a, const BigComplex& b);

    std::string str(int digits) const;
};

BigComplex complex_sqrt(const BigComplex& z);

// Parse a decimal string at the current working precision.
BigFloat parse_decimal(const std::string& s);
BigFloat pow10(long k);  // 10^k at current precision

// --------------------------------------------------------------------------
// Integer polynomials, low degree first.  The zero polynomial has an empty
// coefficient vector.  Canonical form: primitive with positive leading
// coefficient.
class IntPoly {
  public:
    IntPoly() = default;
    explicit IntPoly(std::vector<ZZ> coeffs);
    static IntPoly from_int(long c);
    // x^1 convenience
    static IntPoly variable();

    int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
    bool is_zero() const { return coeffs_.empty(); }
    const std::vector<ZZ>& coeffs() const { return coeffs_; }
    const ZZ& operator[](size_t i) const { return coeffs_[i]; }
    const ZZ& leading() const { return coeffs_.back(); }
    bool is_monic() const { return !is_zero() && coeffs_.back() == 1; }

    ZZ content() const;
    IntPoly primitive_part() const;
    IntPoly canonical() const;  // primitive, leading > 0
    IntPoly derivative() const;

    bool operator==(const IntPoly& o) const { return coeffs_ == o.coeffs_; }
    bool operator!=(const IntPoly& o) const { return !(*this == o); }

    QQ eval_q(const QQ& x) const;
    BigFloat eval(const BigFloat& x) const;
    BigComplex eval(const BigComplex& x) const;
    // Evaluation with a certified error bound for a disc input.
    BigComplex eval_certified(const BigComplex& x) const;

    std::string str(const std::string& var = "x") const;

    friend IntPoly operator+(const IntPoly& a, const IntPoly& b);
    friend IntPoly operator-(const IntPoly& a, const IntPoly& b);
    friend IntPoly operator*(const IntPoly& a, const IntPoly& b);
    IntPoly operator-() const;
    IntPoly operator*(const ZZ& c) const;
    // x -> c*x substitution and friends
    IntPoly scale_arg(const QQ& c) const;  // p(c*x) cleared to primitive? no: exact, see .cpp
    IntPoly shift_arg(const ZZ& k) const;  // p(x+k)
    IntPoly reverse() const;               // x^deg * p(1/x)
    IntPoly compose_square() const;        // p(x^2)

  private:
    std::vector<ZZ> coeffs_;
    void normalize();
};

// Exact division (throws if not divisible).
IntPoly exact_div(const IntPoly& a, const IntPoly& b);
bool divides(const IntPoly& b, const IntPoly& a);  // b | a
// gcd of primitive parts, canonical.
IntPoly poly_gcd(const IntPoly& a, const IntPoly& b);
ZZ resultant(const IntPoly& a, const IntPoly& b);
ZZ poly_disc(const IntPoly& p);  // disc = (-1)^(n(n-1)/2) res(p,p')/lc
IntPoly squarefree_part(const IntPoly& p);
bool is_squarefree(const IntPoly& p);

// Factorization over Z (squarefree-decomposition + Zassenhaus).
// Returns canonical irreducible factors with multiplicities.
std::vector<std::pair<IntPoly, int>> factor(const IntPoly& p);
std::vector<IntPoly> factor_squarefree(const IntPoly& p);
bool is_irreducible(const IntPoly& p);

IntPoly cyclotomic(int n);

// Integer factorization (trial division + Pollard rho); factors sorted.
std::vector<std::pair<ZZ, int>> factor_integer(const ZZ& n);
bool is_probable_prime(const ZZ& n);
ZZ squarefree_kernel(const ZZ& n);  // sign * product of primes with odd exponent

// --------------------------------------------------------------------------
// Root isolation: all deg(p) roots of a squarefree p, each certified to the
// requested precision, ordered by ascending real part then ascending
// imaginary part (ties resolved through the certified radii; conjugate pairs
// are stored with exactly opposite imaginary parts and real roots with
// imaginary part exactly zero).
std::vector<BigComplex> isolate_roots(const IntPoly& p, const PrecisionContext& ctx);

// Exact count of distinct real roots via Sturm sequences.
int count_real_roots(const IntPoly& p);
// Real roots in (a, b]; pass unbounded via count_real_roots.
int count_real_roots_between(const IntPoly& p, const QQ& a, const QQ& b);

// Canonical minimal polynomial of -2*cos(pi/n) for n >= 2.
IntPoly angle_minpoly(int n);

}  // namespace reflekt
