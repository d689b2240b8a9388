#include "internal/fp_poly.hpp"

namespace reflekt::fp {

namespace {
uint64_t splitmix64(uint64_t& s) {
    s += 0x9e3779b97f4a7c15ULL;
    uint64_t z = s;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}
}  // namespace

void norm(FpPoly& a) {
    while (!a.empty() && a.back() == 0) a.pop_back();
}

int deg(const FpPoly& a) { return static_cast<int>(a.size()) - 1; }

FpPoly mul(const Fp& F, const FpPoly& a, const FpPoly& b) {
    if (a.empty() || b.empty()) return {};
    FpPoly r(a.size() + b.size() - 1, 0);
    for (size_t i = 0; i < a.size(); ++i) {
        if (!a[i]) continue;
        for (size_t j = 0; j < b.size(); ++j)
            r[i + j] = (r[i + j] + (unsigned __int128)a[i] * b[j]) % F.p;
    }
    return r;
}

FpPoly rem(const Fp& F, FpPoly a, const FpPoly& b) {
    uint64_t binv = F.inv(b.back());
    while (deg(a) >= deg(b)) {
        uint64_t c = F.mul(a.back(), binv);
        int shift = deg(a) - deg(b);
        for (size_t i = 0; i < b.size(); ++i) a[i + shift] = F.sub(a[i + shift], F.mul(c, b[i]));
        norm(a);
        if (a.empty()) break;
    }
    return a;
}

FpPoly divexact(const Fp& F, FpPoly a, const FpPoly& b) {
    FpPoly q(std::max<int>(deg(a) - deg(b) + 1, 0), 0);
    uint64_t binv = F.inv(b.back());
    while (deg(a) >= deg(b)) {
        uint64_t c = F.mul(a.back(), binv);
        int shift = deg(a) - deg(b);
        q[shift] = c;
        for (size_t i = 0; i < b.size(); ++i) a[i + shift] = F.sub(a[i + shift], F.mul(c, b[i]));
        norm(a);
    }
    return q;
}

FpPoly gcd(const Fp& F, FpPoly a, FpPoly b) {
    norm(a);
    norm(b);
    while (!b.empty()) {
        FpPoly r = rem(F, a, b);
        a = std::move(b);
        b = std::move(r);
    }
    if (!a.empty()) {
        uint64_t inv = F.inv(a.back());
        for (auto& c : a) c = F.mul(c, inv);
    }
    return a;
}

FpPoly powmod(const Fp& F, FpPoly b, ZZ e, const FpPoly& m) {
    FpPoly r{1};
    b = rem(F, b, m);
    while (e > 0) {
        if (bit_test(e, 0)) r = rem(F, mul(F, r, b), m);
        b = rem(F, mul(F, b, b), m);
        e >>= 1;
    }
    return r;
}

FpPoly deriv(const Fp& F, const FpPoly& a) {
    if (a.size() <= 1) return {};
    FpPoly r(a.size() - 1);
    for (size_t i = 1; i < a.size(); ++i) r[i - 1] = F.mul(a[i] % F.p, i % F.p);
    norm(r);
    return r;
}

FpPoly from_intpoly(const IntPoly& p, uint64_t q) {
    FpPoly r(p.coeffs().size());
    ZZ zq(q);
    for (size_t i = 0; i < r.size(); ++i)
        r[i] = static_cast<uint64_t>(((p[i] % zq) + zq) % zq);
    norm(r);
    return r;
}

void factor_squarefree_monic(const Fp& F, const FpPoly& f, std::vector<FpPoly>& out,
                             uint64_t& seed) {
    struct Item {
        FpPoly poly;
        int d;
    };
    std::vector<Item> work;
    FpPoly x{0, 1}, h = x, rest = f;
    for (int d = 1; 2 * d <= deg(rest); ++d) {
        h = powmod(F, h, ZZ(F.p), rest);
        FpPoly hx = h;
        if (hx.size() < 2) hx.resize(2, 0);
        hx[1] = F.sub(hx[1], 1);
        norm(hx);
        FpPoly g = gcd(F, hx, rest);
        if (deg(g) > 0) {
            work.push_back({g, d});
            rest = divexact(F, rest, g);
            h = rem(F, h, rest);
        }
    }
    if (deg(rest) > 0) work.push_back({rest, deg(rest)});
    while (!work.empty()) {
        Item it = work.back();
        work.pop_back();
        if (deg(it.poly) == it.d) {
            out.push_back(it.poly);
            continue;
        }
        while (true) {
            FpPoly r(deg(it.poly));
            for (auto& c : r) c = splitmix64(seed) % F.p;
            norm(r);
            if (r.empty()) continue;
            FpPoly g;
            if (F.p == 2) {
                FpPoly t = r, acc = r;
                for (int i = 1; i < it.d; ++i) {
                    t = rem(F, mul(F, t, t), it.poly);
                    acc.resize(std::max(acc.size(), t.size()), 0);
                    for (size_t k = 0; k < t.size(); ++k) acc[k] ^= t[k];
                }
                norm(acc);
                g = gcd(F, acc, it.poly);
            } else {
                ZZ e = (pow(ZZ(F.p), it.d) - 1) / 2;
                FpPoly t = powmod(F, r, e, it.poly);
                if (t.empty()) continue;
                t[0] = F.sub(t[0], 1);
                norm(t);
                g = gcd(F, t, it.poly);
            }
            if (deg(g) > 0 && deg(g) < deg(it.poly)) {
                work.push_back({g, it.d});
                work.push_back({divexact(F, it.poly, g), it.d});
                break;
            }
        }
    }
    std::sort(out.begin(), out.end());
}

std::vector<std::pair<FpPoly, int>> factor_monic(const Fp& F, FpPoly f, uint64_t& seed) {
    norm(f);
    if (deg(f) < 1) return {};
    uint64_t inv = F.inv(f.back());
    for (auto& c : f) c = F.mul(c, inv);
    std::vector<std::pair<FpPoly, int>> out;
    auto emit = [&](const FpPoly& q, int e) {
        for (auto& [fp, m] : out)
            if (fp == q) {
                m += e;
                return;
            }
        out.emplace_back(q, e);
    };
    int shift_mult = 1;
    while (deg(f) > 0) {
        FpPoly d = deriv(F, f);
        if (d.empty()) {
            // f = h(x^p)
            FpPoly h(deg(f) / F.p + 1);
            for (size_t i = 0; i < h.size(); ++i) h[i] = f[i * F.p];
            f = h;
            shift_mult *= static_cast<int>(F.p);
            continue;
        }
        FpPoly g = gcd(F, f, d);
        if (deg(g) == 0) {
            std::vector<FpPoly> irr;
            factor_squarefree_monic(F, f, irr, seed);
            for (const auto& q : irr) emit(q, shift_mult);
            break;
        }
        FpPoly sqfree = divexact(F, f, g);
        std::vector<FpPoly> irr;
        factor_squarefree_monic(F, sqfree, irr, seed);
        for (const auto& q : irr) {
            int e = 0;
            while (deg(f) >= deg(q)) {
                FpPoly r = rem(F, f, q);
                if (!r.empty()) break;
                f = divexact(F, f, q);
                ++e;
            }
            emit(q, e * shift_mult);
        }
        // remaining f has only factors of multiplicity divisible by p
    }
    std::sort(out.begin(), out.end());
    return out;
}

}  // namespace reflekt::fp
