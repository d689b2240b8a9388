#pragma once

#include "reflekt/numkernel.hpp"

namespace reflekt {

// Integer lattice given by a basis; rows are basis vectors.
struct IntLattice {
    std::vector<std::vector<ZZ>> basis;

    size_t rows() const { return basis.size(); }
    size_t cols() const { return basis.empty() ? 0 : basis[0].size(); }
    static IntLattice identity(size_t n);
};

// delta-LLL reduction with exact integer arithmetic (Cohen 2.6.3).
// Throws on linearly dependent rows.  If `transform` is non-null it receives
// the unimodular row transform U with U * input = output.
IntLattice lll_reduce(const IntLattice& L, const QQ& delta = QQ(3, 4),
                      IntLattice* transform = nullptr);

// Exact verification of the size-reduction and Lovasz conditions.
bool is_lll_reduced(const IntLattice& L, const QQ& delta);

// Guess an integer polynomial of degree <= maxdeg nearly vanishing at x.
// ctx.digits must reflect the number of meaningful digits of x.  Ascends
// through degrees and returns the first candidate whose residual |p(x)|
// beats 10^(-digits/2); std::nullopt when nothing qualifies.
std::optional<IntPoly> algdep(const BigComplex& x, int maxdeg, const PrecisionContext& ctx);

}  // namespace reflekt
