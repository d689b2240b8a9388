// Integer and polynomial factorization: Miller-Rabin + Pollard rho for
// integers, Cantor-Zassenhaus mod p + quadratic Hensel lifting + subset
// recombination for squarefree integer polynomials.

#include <algorithm>
#include <map>
#include <random>

#include "reflekt/numkernel.hpp"
#include "internal/fp_poly.hpp"

namespace reflekt {

namespace {

uint64_t splitmix64(uint64_t& s) {
    s += 0x9e3779b97f4a7c15ULL;
    uint64_t z = s;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

ZZ zz_rand_below(uint64_t& seed, const ZZ& n) {
    size_t bits = msb(n) + 1;
    ZZ r = 0;
    for (size_t i = 0; i < bits; i += 64) {
        r <<= 64;
        r += splitmix64(seed);
    }
    return r % n;
}

ZZ powmod(ZZ b, ZZ e, const ZZ& m) {
    ZZ r = 1;
    b %= m;
    while (e > 0) {
        if (bit_test(e, 0)) r = r * b % m;
        b = b * b % m;
        e >>= 1;
    }
    return r;
}

}  // namespace

bool is_probable_prime(const ZZ& n) {
    if (n < 2) return false;
    for (long p : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37}) {
        if (n == p) return true;
        if (n % p == 0) return false;
    }
    ZZ d = n - 1;
    int s = 0;
    while (!bit_test(d, 0)) {
        d >>= 1;
        ++s;
    }
    uint64_t seed = 0x5eedULL;
    for (int round = 0; round < 40; ++round) {
        ZZ a = 2 + zz_rand_below(seed, n - 3);
        ZZ x = powmod(a, d, n);
        if (x == 1 || x == n - 1) continue;
        bool composite = true;
        for (int i = 1; i < s; ++i) {
            x = x * x % n;
            if (x == n - 1) {
                composite = false;
                break;
            }
        }
        if (composite) return false;
    }
    return true;
}

namespace {

ZZ pollard_rho(const ZZ& n, uint64_t& seed) {
    if (n % 2 == 0) return 2;
    while (true) {
        ZZ x = zz_rand_below(seed, n), c = 1 + zz_rand_below(seed, n - 1);
        ZZ y = x, d = 1;
        // Brent's variant
        int power = 1, lam = 0;
        ZZ saved_y = y;
        while (d == 1) {
            if (lam == power) {
                saved_y = y;
                power *= 2;
                lam = 0;
            }
            y = (y * y + c) % n;
            ++lam;
            d = gcd(abs(y - saved_y), n);
        }
        if (d != n) return d;
    }
}

void factor_rec(const ZZ& n, std::map<ZZ, int>& out, uint64_t& seed) {
    if (n == 1) return;
    if (is_probable_prime(n)) {
        out[n]++;
        return;
    }
    ZZ d = pollard_rho(n, seed);
    factor_rec(d, out, seed);
    factor_rec(n / d, out, seed);
}

}  // namespace

std::vector<std::pair<ZZ, int>> factor_integer(const ZZ& n0) {
    if (n0.is_zero()) throw Error("factor_integer: zero");
    ZZ n = abs(n0);
    std::map<ZZ, int> out;
    for (long p : {2L, 3L, 5L, 7L, 11L, 13L}) {
        while (n % p == 0) {
            out[ZZ(p)]++;
            n /= p;
        }
    }
    for (long p = 17; p < 100000 && n > 1; p += 2) {
        if (ZZ(p) * p > n) break;
        while (n % p == 0) {
            out[ZZ(p)]++;
            n /= p;
        }
    }
    uint64_t seed = 0xfac70eULL;
    if (n > 1) factor_rec(n, out, seed);
    return {out.begin(), out.end()};
}

ZZ squarefree_kernel(const ZZ& n) {
    if (n.is_zero()) return 0;
    ZZ k = n < 0 ? ZZ(-1) : ZZ(1);
    for (const auto& [p, e] : factor_integer(n))
        if (e & 1) k *= p;
    return k;
}

// --------------------------------------------------------------- Fp machinery

namespace {

using fp::Fp;
using fp::FpPoly;
inline void fp_norm(FpPoly& a) { fp::norm(a); }
inline int fp_deg(const FpPoly& a) { return fp::deg(a); }
inline FpPoly fp_mul(const Fp& F, const FpPoly& a, const FpPoly& b) { return fp::mul(F, a, b); }
inline FpPoly fp_rem(const Fp& F, FpPoly a, const FpPoly& b) { return fp::rem(F, std::move(a), b); }
inline FpPoly fp_divexact(const Fp& F, FpPoly a, const FpPoly& b) { return fp::divexact(F, std::move(a), b); }
inline FpPoly fp_gcd(const Fp& F, FpPoly a, FpPoly b) { return fp::gcd(F, std::move(a), std::move(b)); }
inline FpPoly fp_deriv(const Fp& F, const FpPoly& a) { return fp::deriv(F, a); }
inline void fp_factor_sq(const Fp& F, const FpPoly& f, std::vector<FpPoly>& out, uint64_t& seed) {
    fp::factor_squarefree_monic(F, f, out, seed);
}

// --------------------------------------------------------------- Hensel lift

struct ZPolyMod {
    // same layout as IntPoly but reduced mod m, low-first
    std::vector<ZZ> c;
};

ZZ symmetric_mod(const ZZ& a, const ZZ& m) {
    ZZ r = a % m;
    if (r < 0) r += m;
    if (2 * r > m) r -= m;
    return r;
}

std::vector<ZZ> zmul_mod(const std::vector<ZZ>& a, const std::vector<ZZ>& b, const ZZ& m) {
    if (a.empty() || b.empty()) return {};
    std::vector<ZZ> r(a.size() + b.size() - 1, ZZ(0));
    for (size_t i = 0; i < a.size(); ++i)
        for (size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
    for (auto& x : r) x = ((x % m) + m) % m;
    while (!r.empty() && r.back().is_zero()) r.pop_back();
    return r;
}

std::vector<ZZ> zsub_mod(std::vector<ZZ> a, const std::vector<ZZ>& b, const ZZ& m) {
    a.resize(std::max(a.size(), b.size()), ZZ(0));
    for (size_t i = 0; i < b.size(); ++i) a[i] = ((a[i] - b[i]) % m + m) % m;
    while (!a.empty() && a.back().is_zero()) a.pop_back();
    return a;
}

// divide with remainder by a monic polynomial, mod m
void zdivrem_monic_mod(const std::vector<ZZ>& a, const std::vector<ZZ>& b, const ZZ& m,
                       std::vector<ZZ>& q, std::vector<ZZ>& r) {
    r = a;
    q.assign(a.size() > b.size() - 1 ? a.size() - b.size() + 1 : 0, ZZ(0));
    while (r.size() >= b.size() && !r.empty()) {
        ZZ c = r.back() % m;
        size_t shift = r.size() - b.size();
        q[shift] = c;
        for (size_t i = 0; i < b.size(); ++i) r[i + shift] = ((r[i + shift] - c * b[i]) % m + m) % m;
        while (!r.empty() && r.back().is_zero()) r.pop_back();
    }
}

// Hensel: given f = g*h mod p (g,h monic coprime mod p), lift to mod p^K.
// Quadratic lifting of both the factorization and the Bezout cofactors.
void hensel_pair(const IntPoly& f, std::vector<ZZ>& g, std::vector<ZZ>& h, const ZZ& p, const ZZ& target) {
    // initial Bezout: s*g + t*h = 1 mod p via extended euclid over F_p
    uint64_t pl = static_cast<uint64_t>(p);
    Fp F{pl};
    auto tofp = [&](const std::vector<ZZ>& v) {
        FpPoly r(v.size());
        for (size_t i = 0; i < v.size(); ++i) r[i] = static_cast<uint64_t>(((v[i] % p) + p) % p);
        fp_norm(r);
        return r;
    };
    FpPoly fg = tofp(g), fh = tofp(h);
    // extended euclid
    FpPoly r0 = fg, r1 = fh, s0{1}, s1{}, t0{}, t1{1};
    while (!r1.empty()) {
        FpPoly q = fp_divexact(F, r0, r1);
        FpPoly r2 = fp_rem(F, r0, r1);
        auto comb = [&](const FpPoly& a0, const FpPoly& a1) {
            FpPoly qa = fp_mul(F, q, a1);
            FpPoly res = a0;
            res.resize(std::max(res.size(), qa.size()), 0);
            for (size_t i = 0; i < qa.size(); ++i) res[i] = F.sub(res[i], qa[i]);
            fp_norm(res);
            return res;
        };
        FpPoly s2 = comb(s0, s1), t2 = comb(t0, t1);
        r0 = r1; r1 = r2; s0 = s1; s1 = s2; t0 = t1; t1 = t2;
    }
    if (fp_deg(r0) != 0) throw Error("hensel: factors not coprime mod p");
    uint64_t inv = F.inv(r0[0]);
    for (auto& c : s0) c = F.mul(c, inv);
    for (auto& c : t0) c = F.mul(c, inv);
    std::vector<ZZ> s(s0.size()), t(t0.size());
    for (size_t i = 0; i < s0.size(); ++i) s[i] = ZZ(s0[i]);
    for (size_t i = 0; i < t0.size(); ++i) t[i] = ZZ(t0[i]);

    ZZ m = p;
    std::vector<ZZ> fc(f.coeffs().begin(), f.coeffs().end());
    while (m < target) {
        ZZ m2 = m * m;
        // e = f - g*h mod m2
        std::vector<ZZ> e = zsub_mod(fc, zmul_mod(g, h, m2), m2);
        // g += t*e mod h ... standard: q,r with s*e = q*h + r; h' = h + (t*e mod g)?? use
        // the symmetric update: delta_g = (t*e) mod g?? Keep the classical formulas:
        // g1 = g + (e*s mod h addition to)… we follow von zur Gathen 15.10:
        std::vector<ZZ> se = zmul_mod(s, e, m2);
        std::vector<ZZ> q, r;
        zdivrem_monic_mod(se, h, m2, q, r);
        std::vector<ZZ> gnew = g;
        {
            std::vector<ZZ> te = zmul_mod(t, e, m2);
            std::vector<ZZ> qg = zmul_mod(q, g, m2);
            std::vector<ZZ> add = zsub_mod(te, std::vector<ZZ>{}, m2);
            add.resize(std::max(add.size(), qg.size()), ZZ(0));
            for (size_t i = 0; i < qg.size(); ++i) add[i] = ((add[i] + qg[i]) % m2 + m2) % m2;
            while (!add.empty() && add.back().is_zero()) add.pop_back();
            gnew.resize(std::max(gnew.size(), add.size()), ZZ(0));
            for (size_t i = 0; i < add.size(); ++i) gnew[i] = ((gnew[i] + add[i]) % m2 + m2) % m2;
        }
        std::vector<ZZ> hnew = h;
        hnew.resize(std::max(hnew.size(), r.size()), ZZ(0));
        for (size_t i = 0; i < r.size(); ++i) hnew[i] = ((hnew[i] + r[i]) % m2 + m2) % m2;
        g = std::move(gnew);
        h = std::move(hnew);
        // lift Bezout: b = s*g + t*h - 1 mod m2
        std::vector<ZZ> b = zmul_mod(s, g, m2);
        {
            std::vector<ZZ> th = zmul_mod(t, h, m2);
            b.resize(std::max(b.size(), th.size()), ZZ(0));
            for (size_t i = 0; i < th.size(); ++i) b[i] = ((b[i] + th[i]) % m2 + m2) % m2;
            if (b.empty()) b.assign(1, ZZ(0));
            b[0] = ((b[0] - 1) % m2 + m2) % m2;
            while (!b.empty() && b.back().is_zero()) b.pop_back();
        }
        std::vector<ZZ> sb = zmul_mod(s, b, m2), q2, r2;
        zdivrem_monic_mod(sb, h, m2, q2, r2);
        std::vector<ZZ> snew = zsub_mod(s, r2, m2);
        std::vector<ZZ> tb = zmul_mod(t, b, m2), qg2 = zmul_mod(q2, g, m2);
        std::vector<ZZ> tnew = zsub_mod(zsub_mod(t, tb, m2), qg2, m2);
        // tnew = t - t*b - q2*g
        s = std::move(snew);
        t = std::move(tnew);
        m = m2;
    }
}

// lift list of monic factors of (monic f) from mod p to mod >= target
std::vector<std::vector<ZZ>> hensel_tree(const IntPoly& f, std::vector<FpPoly> facs, const ZZ& p, const ZZ& target) {
    if (facs.size() == 1) {
        std::vector<ZZ> g(f.coeffs().begin(), f.coeffs().end());
        ZZ m = p;
        while (m < target) m *= m;
        for (auto& c : g) c = ((c % m) + m) % m;
        return {g};
    }
    size_t half = facs.size() / 2;
    std::vector<FpPoly> left(facs.begin(), facs.begin() + half), right(facs.begin() + half, facs.end());
    Fp F{static_cast<uint64_t>(p)};
    auto prod = [&](const std::vector<FpPoly>& v) {
        FpPoly r{1};
        for (const auto& q : v) r = fp_mul(F, r, q);
        return r;
    };
    FpPoly gl = prod(left), gr = prod(right);
    std::vector<ZZ> g(gl.size()), h(gr.size());
    for (size_t i = 0; i < gl.size(); ++i) g[i] = ZZ(gl[i]);
    for (size_t i = 0; i < gr.size(); ++i) h[i] = ZZ(gr[i]);
    hensel_pair(f, g, h, p, target);
    // recurse: need IntPoly versions of lifted g,h as monic integer polys
    IntPoly gi{std::vector<ZZ>(g)}, hi{std::vector<ZZ>(h)};
    auto L = hensel_tree(gi, left, p, target);
    auto R = hensel_tree(hi, right, p, target);
    L.insert(L.end(), R.begin(), R.end());
    return L;
}

ZZ mignotte_bound(const IntPoly& f) {
    // 2^n * |f|_2 * |lc|: covers any factor's coefficients
    BigFloat n2 = 0;
    for (const auto& c : f.coeffs()) n2 += BigFloat(c) * BigFloat(c);
    n2 = sqrt(n2);
    ZZ b = ZZ(static_cast<long>(1)) << static_cast<unsigned>(f.degree() + 1);
    ZZ bound = b * (ZZ(n2) + 1) * abs(f.leading());
    return bound;
}

}  // namespace

std::vector<IntPoly> factor_squarefree(const IntPoly& input) {
    IntPoly f = input.canonical();
    if (f.is_zero()) throw Error("factor_squarefree: zero polynomial");
    if (f.degree() == 0) return {};
    if (f.degree() == 1) return {f};
    if (!is_squarefree(f)) throw Error("factor_squarefree: input not squarefree");

    // choose a prime keeping f squarefree with unchanged degree
    uint64_t p = 0;
    uint64_t seed = 0xabcdef12ULL;
    FpPoly fp;
    Fp F{0};
    for (uint64_t cand = 1009;; cand += 2) {
        if (!is_probable_prime(ZZ(cand))) continue;
        if (f.leading() % cand == 0) continue;
        F = Fp{cand};
        fp.assign(f.coeffs().size(), 0);
        for (size_t i = 0; i < f.coeffs().size(); ++i)
            fp[i] = static_cast<uint64_t>(((f[i] % ZZ(cand)) + ZZ(cand)) % ZZ(cand));
        FpPoly g = fp_gcd(F, fp, fp_deriv(F, fp));
        if (fp_deg(g) == 0) {
            p = cand;
            break;
        }
    }
    // make monic mod p
    uint64_t lcinv = F.inv(fp.back());
    FpPoly fmonic = fp;
    for (auto& c : fmonic) c = F.mul(c, lcinv);
    std::vector<FpPoly> modfacs;
    fp_factor_sq(F, fmonic, modfacs, seed);
    std::sort(modfacs.begin(), modfacs.end());
    if (modfacs.size() == 1) return {f};

    // lift the monic factorization of lc*f normalized: work with f1 = lc^(n-1) f(x/lc)
    // instead we lift factors of f directly against monic product times lc:
    // classical trick: consider F1 = lc^(deg-1) * f(x/lc), monic.
    ZZ lc = f.leading();
    IntPoly f1;
    {
        // f1(x) = lc^(n-1) f(x/lc): monic integer polynomial, roots lc*root(f)
        int n = f.degree();
        std::vector<ZZ> c(f.coeffs().size());
        c[n] = 1;
        for (int i = 0; i < n; ++i) c[i] = f[i] * pow(lc, n - 1 - i);
        f1 = IntPoly(std::move(c));
    }
    // factor f1 mod p (its reduction = fmonic up to scaling of variable)
    FpPoly f1p(f1.coeffs().size());
    for (size_t i = 0; i < f1.coeffs().size(); ++i)
        f1p[i] = static_cast<uint64_t>(((f1[i] % ZZ(p)) + ZZ(p)) % ZZ(p));
    FpPoly g1 = fp_gcd(F, f1p, fp_deriv(F, f1p));
    std::vector<FpPoly> modfacs1;
    if (fp_deg(g1) != 0) {
        // the substitution introduced squares mod p; pick another prime by
        // retrying the whole routine with a shifted start
        for (uint64_t cand = p + 2;; cand += 2) {
            if (!is_probable_prime(ZZ(cand))) continue;
            if (f.leading() % cand == 0) continue;
            Fp F2{cand};
            FpPoly t(f1.coeffs().size());
            for (size_t i = 0; i < f1.coeffs().size(); ++i)
                t[i] = static_cast<uint64_t>(((f1[i] % ZZ(cand)) + ZZ(cand)) % ZZ(cand));
            if (fp_deg(fp_gcd(F2, t, fp_deriv(F2, t))) == 0) {
                F = F2;
                p = cand;
                f1p = t;
                break;
            }
        }
    }
    fp_factor_sq(F, f1p, modfacs1, seed);
    std::sort(modfacs1.begin(), modfacs1.end());
    if (modfacs1.size() == 1) return {f};

    ZZ bound = mignotte_bound(f1) * 2;
    ZZ target = ZZ(p);
    while (target < bound) target *= target;
    auto lifted = hensel_tree(f1, modfacs1, ZZ(p), target);
    ZZ modulus = ZZ(p);
    while (modulus < bound) modulus *= modulus;

    // subset recombination over the lifted factors of the monic f1
    std::vector<IntPoly> out;
    std::vector<int> alive(lifted.size());
    for (size_t i = 0; i < alive.size(); ++i) alive[i] = static_cast<int>(i);
    IntPoly rem = f1;  // monic remaining cofactor
    int r = static_cast<int>(alive.size());
    for (int take = 1; 2 * take <= r;) {
        bool found = false;
        // iterate subsets of size `take` over alive indices
        std::vector<int> comb(take);
        for (int i = 0; i < take; ++i) comb[i] = i;
        while (true) {
            // build candidate = prod lifted[alive[comb]] mod modulus, symmetric lift
            std::vector<ZZ> prod{1};
            for (int i : comb) prod = zmul_mod(prod, lifted[alive[i]], modulus);
            std::vector<ZZ> sym(prod.size());
            for (size_t i = 0; i < prod.size(); ++i) sym[i] = symmetric_mod(prod[i], modulus);
            IntPoly cand{std::move(sym)};
            if (!cand.is_zero() && divides(cand, rem)) {
                IntPoly quot = exact_div(rem, cand);
                out.push_back(cand.canonical());
                rem = quot;
                // remove used indices
                std::vector<int> keep;
                for (size_t i = 0, ci = 0; i < alive.size(); ++i) {
                    if (ci < comb.size() && static_cast<int>(i) == comb[ci]) {
                        ++ci;
                        continue;
                    }
                    keep.push_back(alive[i]);
                }
                alive = keep;
                r = static_cast<int>(alive.size());
                found = true;
                break;
            }
            // next combination
            int i = take - 1;
            while (i >= 0 && comb[i] == r - take + i) --i;
            if (i < 0) break;
            ++comb[i];
            for (int j = i + 1; j < take; ++j) comb[j] = comb[j - 1] + 1;
        }
        if (!found) ++take;
    }
    if (rem.degree() > 0) out.push_back(rem.canonical());

    // map factors of f1(x) = lc^{n-1} f(x/lc) back: roots scale by lc
    std::vector<IntPoly> result;
    for (const auto& g : out) result.push_back(g.scale_arg(QQ(lc)).canonical());
    // sanity: product of results == f up to unit
    IntPoly check({ZZ(1)});
    for (const auto& g : result) check = check * g;
    check = check.canonical();
    if (check != f.canonical()) throw Error("factor_squarefree: verification failed for " + input.str());
    std::sort(result.begin(), result.end(), [](const IntPoly& a, const IntPoly& b) {
        if (a.degree() != b.degree()) return a.degree() < b.degree();
        return a.coeffs() < b.coeffs();
    });
    return result;
}

std::vector<std::pair<IntPoly, int>> factor(const IntPoly& input) {
    IntPoly f = input.canonical();
    if (f.is_zero()) throw Error("factor: zero polynomial");
    std::vector<std::pair<IntPoly, int>> out;
    // Yun's squarefree decomposition
    IntPoly d = f.derivative();
    IntPoly a = poly_gcd(f, d);
    IntPoly b = exact_div(f, a), c = a;
    int mult = 1;
    while (b.degree() > 0) {
        IntPoly g = poly_gcd(b, c);
        IntPoly part = exact_div(b, g);  // factors of multiplicity exactly `mult`
        if (part.degree() > 0)
            for (const auto& irr : factor_squarefree(part)) out.emplace_back(irr, mult);
        b = g;
        c = exact_div(c, g);
        ++mult;
    }
    std::sort(out.begin(), out.end(), [](const auto& x, const auto& y) {
        if (x.first.degree() != y.first.degree()) return x.first.degree() < y.first.degree();
        return x.first.coeffs() < y.first.coeffs();
    });
    return out;
}

bool is_irreducible(const IntPoly& p) {
    IntPoly f = p.canonical();
    if (f.degree() < 1) return false;
    if (f.degree() == 1) return true;
    if (!is_squarefree(f)) return false;
    return factor_squarefree(f).size() == 1;
}

}  // namespace reflekt
