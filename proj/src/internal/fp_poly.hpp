#pragma once

// Dense polynomial arithmetic over F_p for word-sized p.  Internal helper
// shared by the integer factorizer and the prime-ideal machinery.

#include <cstdint>
#include <vector>

#include "reflekt/numkernel.hpp"

namespace reflekt::fp {

using FpPoly = std::vector<uint64_t>;  // low degree first

struct Fp {
    uint64_t p;
    uint64_t add(uint64_t a, uint64_t b) const { return (a + b) % p; }
    uint64_t sub(uint64_t a, uint64_t b) const { return (a + p - b) % p; }
    uint64_t mul(uint64_t a, uint64_t b) const { return (unsigned __int128)a * b % p; }
    uint64_t pw(uint64_t b, uint64_t e) const {
        uint64_t r = 1;
        b %= p;
        while (e) {
            if (e & 1) r = mul(r, b);
            b = mul(b, b);
            e >>= 1;
        }
        return r;
    }
    uint64_t inv(uint64_t a) const { return pw(a, p - 2); }
};

void norm(FpPoly& a);
int deg(const FpPoly& a);
FpPoly mul(const Fp& F, const FpPoly& a, const FpPoly& b);
FpPoly rem(const Fp& F, FpPoly a, const FpPoly& b);
FpPoly divexact(const Fp& F, FpPoly a, const FpPoly& b);
FpPoly gcd(const Fp& F, FpPoly a, FpPoly b);
FpPoly powmod(const Fp& F, FpPoly b, ZZ e, const FpPoly& m);
FpPoly deriv(const Fp& F, const FpPoly& a);
FpPoly from_intpoly(const IntPoly& p, uint64_t q);

// monic squarefree factorization (distinct degree + Cantor-Zassenhaus)
void factor_squarefree_monic(const Fp& F, const FpPoly& f, std::vector<FpPoly>& out,
                             uint64_t& seed);
// full monic factorization with multiplicities
std::vector<std::pair<FpPoly, int>> factor_monic(const Fp& F, FpPoly f, uint64_t& seed);

}  // namespace reflekt::fp
