#include "reflekt/lattice.hpp"

namespace reflekt {

IntLattice IntLattice::identity(size_t n) {
    IntLattice L;
    L.basis.assign(n, std::vector<ZZ>(n, ZZ(0)));
    for (size_t i = 0; i < n; ++i) L.basis[i][i] = 1;
    return L;
}

namespace {
ZZ dot(const std::vector<ZZ>& a, const std::vector<ZZ>& b) {
    ZZ s = 0;
    for (size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

ZZ round_div(const ZZ& a, const ZZ& b) {
    // nearest integer to a/b for b > 0 (ties toward zero)
    ZZ q, r;
    divide_qr(a, b, q, r);
    if (2 * abs(r) > b) q += r > 0 ? 1 : -1;
    return q;
}
}  // namespace

IntLattice lll_reduce(const IntLattice& input, const QQ& delta, IntLattice* transform) {
    if (delta <= QQ(1, 4) || delta > 1) throw Error("lll_reduce: delta must be in (1/4, 1]");
    const int n = static_cast<int>(input.rows());
    if (n == 0) return input;
    IntLattice L = input;
    IntLattice U = IntLattice::identity(n);

    // Cohen Algorithm 2.6.3 state: d[0..n], lam[i][j] for j < i
    std::vector<ZZ> d(n + 1);
    d[0] = 1;
    std::vector<std::vector<ZZ>> lam(n, std::vector<ZZ>(n, ZZ(0)));

    const ZZ dnum = numerator(delta), dden = denominator(delta);

    auto red = [&](int k, int l) {
        // size-reduce b_k against b_l
        if (2 * abs(lam[k][l]) <= d[l + 1]) return;
        ZZ q = round_div(lam[k][l], d[l + 1]);
        for (size_t c = 0; c < L.cols(); ++c) L.basis[k][c] -= q * L.basis[l][c];
        for (int c = 0; c < n; ++c) U.basis[k][c] -= q * U.basis[l][c];
        lam[k][l] -= q * d[l + 1];
        for (int i = 0; i < l; ++i) lam[k][i] -= q * lam[l][i];
    };

    auto swap_step = [&](int k, int kmax) {
        std::swap(L.basis[k], L.basis[k - 1]);
        std::swap(U.basis[k], U.basis[k - 1]);
        for (int j = 0; j <= k - 2; ++j) std::swap(lam[k][j], lam[k - 1][j]);
        ZZ lambda = lam[k][k - 1];
        ZZ B = (d[k - 1] * d[k + 1] + lambda * lambda) / d[k];
        for (int i = k + 1; i <= kmax; ++i) {
            ZZ t = lam[i][k];
            lam[i][k] = (d[k + 1] * lam[i][k - 1] - lambda * t) / d[k];
            lam[i][k - 1] = (B * t + lambda * lam[i][k]) / d[k + 1];
        }
        d[k] = B;
    };

    int k = 1, kmax = 0;
    d[1] = dot(L.basis[0], L.basis[0]);
    if (n > 0 && d[1].is_zero()) throw Error("lll_reduce: zero row");
    while (k < n) {
        if (k > kmax) {
            kmax = k;
            for (int j = 0; j <= k; ++j) {
                ZZ u = dot(L.basis[k], L.basis[j]);
                for (int i = 0; i < j; ++i) u = (d[i + 1] * u - lam[k][i] * lam[j][i]) / d[i];
                if (j < k) lam[k][j] = u;
                else {
                    d[k + 1] = u;
                    if (d[k + 1].is_zero()) throw Error("lll_reduce: dependent rows");
                }
            }
        }
        red(k, k - 1);
        // Lovasz: d[k+1]*d[k-1] >= (delta*d[k]^2 - lam^2)  <=>  swap when <
        if (dden * d[k + 1] * d[k - 1] < dnum * d[k] * d[k] - dden * lam[k][k - 1] * lam[k][k - 1]) {
            swap_step(k, kmax);
            k = std::max(1, k - 1);
        } else {
            for (int l = k - 2; l >= 0; --l) red(k, l);
            ++k;
        }
    }
    if (transform) *transform = U;
    return L;
}

bool is_lll_reduced(const IntLattice& L, const QQ& delta) {
    const int n = static_cast<int>(L.rows());
    if (n == 0) return true;
    // exact rational Gram-Schmidt
    std::vector<std::vector<QQ>> mu(n, std::vector<QQ>(n, QQ(0)));
    std::vector<QQ> B(n);  // |b_i*|^2
    std::vector<std::vector<QQ>> star(n, std::vector<QQ>(L.cols()));
    for (int i = 0; i < n; ++i) {
        for (size_t c = 0; c < L.cols(); ++c) star[i][c] = QQ(L.basis[i][c]);
        for (int j = 0; j < i; ++j) {
            QQ num = 0;
            for (size_t c = 0; c < L.cols(); ++c) num += QQ(L.basis[i][c]) * star[j][c];
            mu[i][j] = num / B[j];
            for (size_t c = 0; c < L.cols(); ++c) star[i][c] -= mu[i][j] * star[j][c];
        }
        B[i] = 0;
        for (size_t c = 0; c < L.cols(); ++c) B[i] += star[i][c] * star[i][c];
        if (B[i].is_zero()) return false;
    }
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < i; ++j)
            if (2 * abs(numerator(mu[i][j])) > denominator(mu[i][j])) return false;
    for (int k = 1; k < n; ++k)
        if (B[k] < (delta - mu[k][k - 1] * mu[k][k - 1]) * B[k - 1]) return false;
    return true;
}

std::optional<IntPoly> algdep(const BigComplex& x, int maxdeg, const PrecisionContext& ctx) {
    if (maxdeg < 1) throw Error("algdep: maxdeg >= 1");
    PrecisionScope scope(ctx);
    const bool complex = !x.im.is_zero();
    BigFloat scale = pow10(ctx.digits);
    BigFloat accept = pow10(-(ctx.digits / 2));

    // powers of x
    std::vector<BigComplex> pw(maxdeg + 1);
    pw[0] = BigComplex(BigFloat(1), BigFloat(0));
    BigComplex xc{x.re, x.im, BigFloat(0)};
    for (int i = 1; i <= maxdeg; ++i) pw[i] = pw[i - 1] * xc;

    for (int d = 1; d <= maxdeg; ++d) {
        IntLattice L;
        L.basis.assign(d + 1, {});
        for (int j = 0; j <= d; ++j) {
            std::vector<ZZ> row(d + 1 + (complex ? 2 : 1), ZZ(0));
            row[j] = 1;
            BigFloat sre = pw[j].re * scale;
            row[d + 1] = ZZ(boost::multiprecision::round(sre).convert_to<ZZ>());
            if (complex) {
                BigFloat sim = pw[j].im * scale;
                row[d + 2] = ZZ(boost::multiprecision::round(sim).convert_to<ZZ>());
            }
            L.basis[j] = std::move(row);
        }
        IntLattice R = lll_reduce(L, QQ(99, 100));
        // A believable relation must be far shorter than a generic shortest
        // vector of this lattice (~ 10^(digits/(d+2))); without the cap, LLL
        // residuals alone admit junk relations of enormous height.
        ZZ cap2 = boost::multiprecision::pow(ZZ(10), 2 * (ctx.digits / (2 * (d + 2))));
        for (size_t v = 0; v < std::min<size_t>(R.rows(), 2); ++v) {
            std::vector<ZZ> c(R.basis[v].begin(), R.basis[v].begin() + d + 1);
            IntPoly p{std::move(c)};
            if (p.degree() < 1) continue;
            ZZ h2 = 0;
            for (const auto& co : p.coeffs()) h2 += co * co;
            if (h2 > cap2) continue;
            BigComplex val = p.eval(xc);
            if (val.abs() < accept) return p.canonical();
        }
    }
    return std::nullopt;
}

}  // namespace reflekt
