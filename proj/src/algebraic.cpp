#include "reflekt/algebraic.hpp"

#include <algorithm>
#include <map>
#include <mutex>
#include <sstream>

namespace reflekt {

// ------------------------------------------------------ rational polynomials
namespace {

using QPoly = std::vector<QQ>;  // low degree first

int qdeg(const QPoly& p) { return static_cast<int>(p.size()) - 1; }

QQ qq_pow(const QQ& a, int e) {
    if (e < 0) return QQ(1) / qq_pow(a, -e);
    QQ r = 1, b = a;
    while (e) {
        if (e & 1) r *= b;
        b *= b;
        e >>= 1;
    }
    return r;
}

void qnorm(QPoly& p) {
    while (!p.empty() && p.back().is_zero()) p.pop_back();
}

QPoly qmul(const QPoly& a, const QPoly& b) {
    if (a.empty() || b.empty()) return {};
    QPoly r(a.size() + b.size() - 1, QQ(0));
    for (size_t i = 0; i < a.size(); ++i)
        for (size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
    return r;
}

QPoly qsub(QPoly a, const QPoly& b) {
    a.resize(std::max(a.size(), b.size()), QQ(0));
    for (size_t i = 0; i < b.size(); ++i) a[i] -= b[i];
    qnorm(a);
    return a;
}

// remainder of a by b (b nonzero)
QPoly qrem(QPoly a, const QPoly& b) {
    qnorm(a);
    while (qdeg(a) >= qdeg(b)) {
        QQ c = a.back() / b.back();
        int shift = qdeg(a) - qdeg(b);
        for (size_t i = 0; i < b.size(); ++i) a[i + shift] -= c * b[i];
        a.pop_back();
        qnorm(a);
        if (a.empty()) break;
    }
    return a;
}

QPoly qdiv(QPoly a, const QPoly& b) {
    qnorm(a);
    if (qdeg(a) < qdeg(b)) return {};
    QPoly q(qdeg(a) - qdeg(b) + 1, QQ(0));
    while (qdeg(a) >= qdeg(b)) {
        QQ c = a.back() / b.back();
        int shift = qdeg(a) - qdeg(b);
        q[shift] = c;
        for (size_t i = 0; i < b.size(); ++i) a[i + shift] -= c * b[i];
        a.pop_back();
        qnorm(a);
        if (a.empty()) break;
    }
    return q;
}

QPoly from_intpoly(const IntPoly& p) {
    QPoly r(p.coeffs().size());
    for (size_t i = 0; i < r.size(); ++i) r[i] = QQ(p[i]);
    return r;
}

IntPoly clear_denominators(const QPoly& p) {
    ZZ den = 1;
    for (const auto& c : p) den = lcm(den, denominator(c));
    std::vector<ZZ> z(p.size());
    for (size_t i = 0; i < p.size(); ++i) z[i] = numerator(p[i] * QQ(den));
    return IntPoly(std::move(z));
}

// extended euclid: returns (g, s, t) with s*a + t*b = g, g monic
void qxgcd(QPoly a, QPoly b, QPoly& g, QPoly& s, QPoly& t) {
    QPoly s0{QQ(1)}, s1{}, t0{}, t1{QQ(1)};
    qnorm(a);
    qnorm(b);
    while (!b.empty()) {
        QPoly q = qdiv(a, b);
        QPoly r = qsub(a, qmul(q, b));
        QPoly s2 = qsub(s0, qmul(q, s1));
        QPoly t2 = qsub(t0, qmul(q, t1));
        a = std::move(b);
        b = std::move(r);
        s0 = std::move(s1);
        s1 = std::move(s2);
        t0 = std::move(t1);
        t1 = std::move(t2);
    }
    if (a.empty()) throw Error("qxgcd: gcd of zero polynomials");
    QQ lc = a.back();
    for (auto& c : a) c /= lc;
    for (auto& c : s0) c /= lc;
    for (auto& c : t0) c /= lc;
    g = std::move(a);
    s = std::move(s0);
    t = std::move(t0);
}

QQ resultant_q(const QPoly& a, const QPoly& b) {
    IntPoly ia = clear_denominators(a), ib = clear_denominators(b);
    // res(ca * A, cb * B) = ca^degB cb^degA res(A,B); we need res(a,b):
    // a = ia/da, b = ib/db with the clearing factors
    ZZ da = 1, db = 1;
    for (const auto& c : a) da = lcm(da, denominator(c));
    for (const auto& c : b) db = lcm(db, denominator(c));
    ZZ r = resultant(ia, ib);
    QQ scale = QQ(1) / (qq_pow(QQ(da), qdeg(b)) * qq_pow(QQ(db), qdeg(a)));
    return QQ(r) * scale;
}

}  // namespace

// -------------------------------------------------------------- FieldHandle

namespace {
std::mutex g_roots_mutex;
std::map<std::pair<std::string, int>, std::vector<BigComplex>> g_roots_cache;

std::string poly_key(const IntPoly& p) {
    std::ostringstream os;
    for (const auto& c : p.coeffs()) os << c.str() << ",";
    return os.str();
}
}  // namespace

const std::vector<BigComplex>& roots_cached(const IntPoly& p, int digits) {
    // bucket digits to powers of two over 30 to bound cache size
    int d = 30;
    while (d < digits) d *= 2;
    std::scoped_lock lock(g_roots_mutex);
    auto key = std::make_pair(poly_key(p), d);
    auto it = g_roots_cache.find(key);
    if (it == g_roots_cache.end()) {
        PrecisionContext ctx(d);
        it = g_roots_cache.emplace(key, isolate_roots(p, ctx)).first;
    }
    return it->second;
}

int root_index(const IntPoly& minpoly, const BigComplex& approx, const PrecisionContext& ctx) {
    if (minpoly.degree() == 1) return 0;
    int digits = std::max(ctx.digits, 30);
    BigComplex a = approx;
    for (int attempt = 0; attempt < 6; ++attempt) {
        const auto& roots = roots_cached(minpoly, digits);
        int hit = -1, count = 0;
        for (size_t i = 0; i < roots.size(); ++i) {
            BigFloat dist = sqrt((roots[i].re - a.re) * (roots[i].re - a.re) +
                                 (roots[i].im - a.im) * (roots[i].im - a.im));
            if (dist <= roots[i].err + a.err) {
                hit = static_cast<int>(i);
                ++count;
            }
        }
        if (count == 1) return hit;
        if (count == 0) {
            // approx err may be overstated relative to the root grid; accept
            // the nearest root when clearly unambiguous
            std::vector<std::pair<BigFloat, int>> dists;
            for (size_t i = 0; i < roots.size(); ++i) {
                BigFloat dist = sqrt((roots[i].re - a.re) * (roots[i].re - a.re) +
                                     (roots[i].im - a.im) * (roots[i].im - a.im));
                dists.emplace_back(dist, static_cast<int>(i));
            }
            std::sort(dists.begin(), dists.end(),
                      [](const auto& x, const auto& y) { return x.first < y.first; });
            if (dists.size() == 1 || dists[0].first * 4 < dists[1].first) return dists[0].second;
        }
        // ambiguous: polish the approximation with Newton on the minpoly
        PrecisionScope scope(digits * 2);
        IntPoly d = minpoly.derivative();
        BigComplex x{a.re, a.im, BigFloat(0)};
        for (int it = 0; it < 4; ++it) {
            BigComplex v = minpoly.eval(x), dv = d.eval(x);
            if (dv.abs().is_zero()) break;
            x = x - v / dv;
        }
        BigComplex v = minpoly.eval(x), dv = d.eval(x);
        if (!dv.abs().is_zero()) {
            a = x;
            a.err = minpoly.degree() * (v.abs() / dv.abs()) * 2 + pow10(-(2 * digits));
        }
        digits *= 2;
    }
    throw Error("root_index: cannot disambiguate root of " + minpoly.str());
}

int root_index(const AlgebraicNumber& x, const PrecisionContext& ctx) {
    return root_index(x.minpoly, x.approx, ctx);
}

FieldPtr FieldHandle::rationals(const PrecisionContext& ctx) {
    auto h = std::make_shared<FieldHandle>();
    h->defining = IntPoly::variable();
    h->gen = BigComplex(BigFloat(0), BigFloat(0));
    h->degree = 1;
    h->ctx = ctx;
    return h;
}

FieldPtr FieldHandle::make(IntPoly defining, BigComplex gen, const PrecisionContext& ctx) {
    if (!defining.is_monic()) throw Error("FieldHandle: defining polynomial must be monic");
    auto h = std::make_shared<FieldHandle>();
    h->degree = defining.degree();
    h->defining = std::move(defining);
    h->gen = std::move(gen);
    h->ctx = ctx;
    return h;
}

BigComplex FieldHandle::gen_refined(int digits) const {
    if (degree == 1) return gen;
    static std::mutex m;
    std::scoped_lock lock(m);
    for (const auto& [d, g] : refined_cache_)
        if (d >= digits) return g;
    PrecisionContext c(std::max(19, digits));
    int idx = root_index(defining, gen, ctx);
    BigComplex g = roots_cached(defining, c.working_digits())[idx];
    refined_cache_.emplace_back(c.working_digits(), g);
    return g;
}

// ---------------------------------------------------------------- FieldElem

namespace {
void check_same_field(const FieldElem& a, const FieldElem& b) {
    if (a.field == b.field) return;
    if (a.field && b.field && a.field->defining == b.field->defining) return;
    throw Error("FieldElem: operands in different fields");
}

FieldElem make_elem(const FieldPtr& F, QPoly v) {
    v.resize(F->degree, QQ(0));
    return FieldElem{F, std::move(v)};
}
}  // namespace

bool FieldElem::is_zero() const {
    for (const auto& c : coeffs)
        if (!c.is_zero()) return false;
    return true;
}

bool FieldElem::is_rational() const {
    for (size_t i = 1; i < coeffs.size(); ++i)
        if (!coeffs[i].is_zero()) return false;
    return true;
}

QQ FieldElem::rational_value() const {
    if (!is_rational()) throw Error("FieldElem: not rational");
    return coeffs.empty() ? QQ(0) : coeffs[0];
}

bool FieldElem::operator==(const FieldElem& o) const {
    check_same_field(*this, o);
    return coeffs == o.coeffs;
}

std::string FieldElem::str(const std::string& var) const {
    std::ostringstream os;
    bool first = true;
    for (int i = static_cast<int>(coeffs.size()) - 1; i >= 0; --i) {
        if (coeffs[i].is_zero()) continue;
        QQ c = coeffs[i];
        if (!first) os << (c > 0 ? " + " : " - ");
        else if (c < 0) os << "-";
        QQ a = abs(c);
        if (a != 1 || i == 0) os << a.str();
        if (i > 0) {
            if (a != 1) os << "*";
            os << var;
            if (i > 1) os << "^" << i;
        }
        first = false;
    }
    if (first) os << "0";
    return os.str();
}

FieldElem fe_zero(const FieldPtr& F) { return make_elem(F, {}); }
FieldElem fe_one(const FieldPtr& F) { return make_elem(F, {QQ(1)}); }

FieldElem fe_gen(const FieldPtr& F) {
    if (F->degree == 1) {
        // generator of the rationals presentation z - 0 is 0
        return fe_zero(F);
    }
    return make_elem(F, {QQ(0), QQ(1)});
}

FieldElem fe_from_q(const FieldPtr& F, const QQ& q) { return make_elem(F, {q}); }

FieldElem fe_add(const FieldElem& a, const FieldElem& b) {
    check_same_field(a, b);
    QPoly r = a.coeffs;
    for (size_t i = 0; i < b.coeffs.size(); ++i) r[i] += b.coeffs[i];
    return FieldElem{a.field, std::move(r)};
}

FieldElem fe_sub(const FieldElem& a, const FieldElem& b) {
    check_same_field(a, b);
    QPoly r = a.coeffs;
    for (size_t i = 0; i < b.coeffs.size(); ++i) r[i] -= b.coeffs[i];
    return FieldElem{a.field, std::move(r)};
}

FieldElem fe_neg(const FieldElem& a) {
    QPoly r = a.coeffs;
    for (auto& c : r) c = -c;
    return FieldElem{a.field, std::move(r)};
}

FieldElem fe_mul(const FieldElem& a, const FieldElem& b) {
    check_same_field(a, b);
    QPoly r = qmul(a.coeffs, b.coeffs);
    qnorm(r);
    r = qrem(r, from_intpoly(a.field->defining));
    return make_elem(a.field, std::move(r));
}

FieldElem fe_mul_q(const FieldElem& a, const QQ& q) {
    QPoly r = a.coeffs;
    for (auto& c : r) c *= q;
    return FieldElem{a.field, std::move(r)};
}

FieldElem fe_inv(const FieldElem& a) {
    if (a.is_zero()) throw Error("fe_inv: division by zero");
    QPoly g, s, t;
    QPoly ac = a.coeffs;
    qnorm(ac);
    qxgcd(ac, from_intpoly(a.field->defining), g, s, t);
    if (qdeg(g) != 0) throw Error("fe_inv: defining polynomial not irreducible?");
    return make_elem(a.field, std::move(s));
}

FieldElem fe_div(const FieldElem& a, const FieldElem& b) { return fe_mul(a, fe_inv(b)); }

FieldElem fe_pow(const FieldElem& a, long e) {
    if (e < 0) return fe_pow(fe_inv(a), -e);
    FieldElem r = fe_one(a.field), base = a;
    while (e) {
        if (e & 1) r = fe_mul(r, base);
        base = fe_mul(base, base);
        e >>= 1;
    }
    return r;
}

BigComplex fe_eval_at(const FieldElem& a, const BigComplex& root) {
    BigComplex v;
    for (auto it = a.coeffs.rbegin(); it != a.coeffs.rend(); ++it) {
        v = v * root;
        BigComplex c(*it);
        v.re += c.re;
        v.err += c.err;
    }
    return v;
}

BigComplex fe_eval(const FieldElem& a, int digits) {
    int d = digits > 0 ? digits : a.field->ctx.working_digits();
    PrecisionScope scope(d);
    return fe_eval_at(a, a.field->gen_refined(d));
}

// multiplication matrix of a on the power basis, column j = a * z^j
namespace {
std::vector<QPoly> mult_columns(const FieldElem& a) {
    int n = a.field->degree;
    QPoly def = from_intpoly(a.field->defining);
    std::vector<QPoly> cols(n);
    QPoly cur = a.coeffs;
    qnorm(cur);
    cur = qrem(cur, def);
    for (int j = 0; j < n; ++j) {
        cols[j] = cur;
        cols[j].resize(n, QQ(0));
        // multiply by z
        cur.insert(cur.begin(), QQ(0));
        cur = qrem(cur, def);
    }
    return cols;
}

// characteristic polynomial of an n x n rational matrix (Faddeev-LeVerrier)
QPoly charpoly_qq(const std::vector<std::vector<QQ>>& M) {
    int n = static_cast<int>(M.size());
    std::vector<std::vector<QQ>> A = M, I(n, std::vector<QQ>(n, QQ(0)));
    for (int i = 0; i < n; ++i) I[i][i] = 1;
    QPoly c(n + 1, QQ(0));
    c[n] = 1;
    std::vector<std::vector<QQ>> Ak = A;
    for (int k = 1; k <= n; ++k) {
        QQ tr = 0;
        for (int i = 0; i < n; ++i) tr += Ak[i][i];
        QQ ck = -tr / k;
        c[n - k] = ck;
        if (k == n) break;
        // Ak+1 = A * (Ak + ck I)
        std::vector<std::vector<QQ>> B = Ak;
        for (int i = 0; i < n; ++i) B[i][i] += ck;
        std::vector<std::vector<QQ>> next(n, std::vector<QQ>(n, QQ(0)));
        for (int i = 0; i < n; ++i)
            for (int l = 0; l < n; ++l) {
                if (A[i][l].is_zero()) continue;
                for (int j = 0; j < n; ++j) next[i][j] += A[i][l] * B[l][j];
            }
        Ak = std::move(next);
    }
    return c;
}
}  // namespace

IntPoly fe_minpoly(const FieldElem& a) {
    int n = a.field->degree;
    if (n == 1 || a.is_rational()) {
        QQ q = a.coeffs.empty() ? QQ(0) : a.coeffs[0];
        return IntPoly({-numerator(q), denominator(q)}).canonical();
    }
    auto cols = mult_columns(a);
    std::vector<std::vector<QQ>> M(n, std::vector<QQ>(n));
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i) M[i][j] = cols[j][i];
    QPoly cp = charpoly_qq(M);
    IntPoly icp = clear_denominators(cp);
    return squarefree_part(icp);
}

QQ fe_norm(const FieldElem& a) {
    // norm = (-1)^(n deg) resultant stuff; use det of multiplication matrix
    int n = a.field->degree;
    if (n == 1 || a.is_rational()) return qq_pow(a.rational_value(), n);
    auto cols = mult_columns(a);
    std::vector<std::vector<QQ>> M(n, std::vector<QQ>(n));
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i) M[i][j] = cols[j][i];
    // Gaussian elimination determinant
    QQ det = 1;
    for (int col = 0; col < n; ++col) {
        int piv = -1;
        for (int r = col; r < n; ++r)
            if (!M[r][col].is_zero()) {
                piv = r;
                break;
            }
        if (piv < 0) return 0;
        if (piv != col) {
            std::swap(M[piv], M[col]);
            det = -det;
        }
        det *= M[col][col];
        QQ inv = QQ(1) / M[col][col];
        for (int r = col + 1; r < n; ++r) {
            if (M[r][col].is_zero()) continue;
            QQ f = M[r][col] * inv;
            for (int cc = col; cc < n; ++cc) M[r][cc] -= f * M[col][cc];
        }
    }
    return det;
}

QQ fe_trace(const FieldElem& a) {
    int n = a.field->degree;
    if (n == 1 || a.is_rational()) return QQ(n) * a.rational_value();
    auto cols = mult_columns(a);
    QQ tr = 0;
    for (int i = 0; i < n; ++i) tr += cols[i][i];
    return tr;
}

FieldElem fe_map(const FieldElem& a, const FieldElem& image) {
    FieldElem v = fe_zero(image.field);
    for (auto it = a.coeffs.rbegin(); it != a.coeffs.rend(); ++it) {
        v = fe_mul(v, image);
        v = fe_add(v, fe_from_q(image.field, *it));
    }
    return v;
}

// ---------------------------------------------------------- AlgebraicNumber

bool AlgebraicNumber::is_zero() const { return minpoly == IntPoly::variable(); }

bool AlgebraicNumber::is_rational() const { return minpoly.degree() == 1; }

QQ AlgebraicNumber::rational_value() const {
    if (!is_rational()) throw Error("AlgebraicNumber: not rational");
    return QQ(-minpoly[0], minpoly[1]);
}

std::string AlgebraicNumber::str() const {
    std::ostringstream os;
    if (is_rational()) {
        os << rational_value().str();
        return os.str();
    }
    os << "root of " << minpoly.str() << " near " << approx.str(12);
    return os.str();
}

AlgebraicNumber alg_from_q(const QQ& q) {
    AlgebraicNumber a;
    a.minpoly = IntPoly({-numerator(q), denominator(q)}).canonical();
    a.approx = BigComplex(q);
    return a;
}

AlgebraicNumber alg_from_residue(const FieldElem& e) {
    AlgebraicNumber a;
    a.minpoly = fe_minpoly(e);
    a.approx = fe_eval(e);
    a.ambient = e;
    if (a.minpoly.degree() > 1) {
        // snap the approximation onto the certified root grid
        int idx = root_index(a.minpoly, a.approx, e.field->ctx);
        a.approx = roots_cached(a.minpoly, e.field->ctx.working_digits())[idx];
    } else {
        a.approx = BigComplex(a.rational_value());
    }
    return a;
}

AlgebraicNumber alg_make(const IntPoly& minpoly, const BigComplex& approx,
                         const PrecisionContext& ctx) {
    IntPoly p = minpoly.canonical();
    if (!is_irreducible(p)) throw Error("alg_make: reducible minimal polynomial " + p.str());
    AlgebraicNumber a;
    a.minpoly = p;
    if (p.degree() == 1) {
        a.approx = BigComplex(QQ(-p[0], p[1]));
    } else {
        int idx = root_index(p, approx, ctx);
        a.approx = roots_cached(p, ctx.working_digits())[idx];
    }
    return a;
}

bool alg_equal(const AlgebraicNumber& a, const AlgebraicNumber& b, const PrecisionContext& ctx) {
    if (a.minpoly != b.minpoly) return false;
    if (a.minpoly.degree() == 1) return true;
    return root_index(a, ctx) == root_index(b, ctx);
}

// ----------------------------------------------------------- LLL expression

namespace {
// try to express x as a Q-linear combination of 1, g, ..., g^{n-1} using LLL
// at the given precision; exact verification is done by the caller
std::optional<QPoly> lll_combination(const BigComplex& x, const IntPoly& defining,
                                     const BigComplex& gen, int digits) {
    PrecisionScope scope(digits + 10);
    int n = defining.degree();
    const bool complex = !(x.im.is_zero() && gen.im.is_zero());
    std::vector<BigComplex> vals(n + 1);
    vals[0] = BigComplex{x.re, x.im, BigFloat(0)};
    BigComplex g{gen.re, gen.im, BigFloat(0)}, p{BigFloat(1), BigFloat(0)};
    for (int j = 0; j < n; ++j) {
        vals[j + 1] = p;
        p = p * g;
    }
    BigFloat scale = pow10(digits);
    IntLattice L;
    L.basis.assign(n + 1, {});
    for (int j = 0; j <= n; ++j) {
        std::vector<ZZ> row(n + 1 + (complex ? 2 : 1), ZZ(0));
        row[j] = 1;
        row[n + 1] = boost::multiprecision::round(vals[j].re * scale).convert_to<ZZ>();
        if (complex) row[n + 2] = boost::multiprecision::round(vals[j].im * scale).convert_to<ZZ>();
        L.basis[j] = std::move(row);
    }
    IntLattice R = lll_reduce(L, QQ(99, 100));
    ZZ cap = boost::multiprecision::pow(ZZ(10), std::max(1, digits / (2 * (n + 2))));
    for (size_t v = 0; v < std::min<size_t>(R.rows(), 3); ++v) {
        const auto& row = R.basis[v];
        if (row[0].is_zero()) continue;
        bool junk = false;
        for (int j = 0; j <= n; ++j) junk |= abs(row[j]) > cap;
        if (junk) continue;
        // row = (a, b_0..b_{n-1}, ...) with a*x + sum b_j g^j ~ 0
        QPoly r(n);
        for (int j = 0; j < n; ++j) r[j] = QQ(-row[j + 1], row[0]);
        return r;
    }
    return std::nullopt;
}
}  // namespace

// -------------------------------------------------------- field polynomials

namespace {
void fnorm(FPoly& p) {
    while (!p.empty() && p.back().is_zero()) p.pop_back();
}

FPoly fmul(const FPoly& a, const FPoly& b, const FieldPtr& F) {
    if (a.empty() || b.empty()) return {};
    FPoly r(a.size() + b.size() - 1, fe_zero(F));
    for (size_t i = 0; i < a.size(); ++i)
        for (size_t j = 0; j < b.size(); ++j) r[i + j] = fe_add(r[i + j], fe_mul(a[i], b[j]));
    return r;
}

FPoly frem(FPoly a, const FPoly& b, const FieldPtr& F) {
    fnorm(a);
    FieldElem inv = fe_inv(b.back());
    while (!a.empty() && a.size() >= b.size()) {
        FieldElem c = fe_mul(a.back(), inv);
        size_t shift = a.size() - b.size();
        for (size_t i = 0; i < b.size(); ++i)
            a[i + shift] = fe_sub(a[i + shift], fe_mul(c, b[i]));
        a.pop_back();
        fnorm(a);
    }
    return a;
}

FPoly fgcd(FPoly a, FPoly b, const FieldPtr& F) {
    fnorm(a);
    fnorm(b);
    while (!b.empty()) {
        FPoly r = frem(a, b, F);
        a = std::move(b);
        b = std::move(r);
    }
    if (!a.empty()) {
        FieldElem inv = fe_inv(a.back());
        for (auto& c : a) c = fe_mul(c, inv);
    }
    return a;
}

FPoly fmonic(FPoly a, const FieldPtr& F) {
    fnorm(a);
    if (a.empty()) return a;
    FieldElem inv = fe_inv(a.back());
    for (auto& c : a) c = fe_mul(c, inv);
    return a;
}
}  // namespace

std::vector<FPoly> factor_over_field(const FPoly& g0, const FieldPtr& F) {
    FPoly g = fmonic(g0, F);
    if (g.size() <= 1) throw Error("factor_over_field: constant polynomial");
    if (g.size() == 2) return {g};
    if (F->is_rationals()) {
        // plain rational factorization
        QPoly q(g.size());
        for (size_t i = 0; i < g.size(); ++i) q[i] = g[i].rational_value();
        IntPoly ip = clear_denominators(q);
        std::vector<FPoly> out;
        for (const auto& f : factor_squarefree(ip)) {
            FPoly fp(f.coeffs().size(), fe_zero(F));
            for (size_t i = 0; i < f.coeffs().size(); ++i) fp[i] = fe_from_q(F, QQ(f[i]));
            out.push_back(fmonic(fp, F));
        }
        return out;
    }
    int n = F->degree, m = static_cast<int>(g.size()) - 1;
    QPoly def = from_intpoly(F->defining);
    // Trager: find s with squarefree norm N_s(z) = Res_u(p(u), g(z - s u))
    for (long s = 0; s < 40; s = s > 0 ? -s : -s + 1) {
        // compute N_s by interpolation in z
        int dz = n * m;
        std::vector<QQ> xs(dz + 1), ys(dz + 1);
        bool fail = false;
        for (int k = 0; k <= dz; ++k) {
            QQ z0(k);
            // G(z0, u) = sum_i g_i(u) * (z0 - s u)^i
            QPoly acc{};  // polynomial in u
            QPoly zsu{z0, QQ(-s)};
            QPoly pw{QQ(1)};
            for (int i = 0; i <= m; ++i) {
                QPoly term = qmul(g[i].coeffs, pw);
                acc.resize(std::max(acc.size(), term.size()), QQ(0));
                for (size_t t = 0; t < term.size(); ++t) acc[t] += term[t];
                pw = qmul(pw, zsu);
            }
            qnorm(acc);
            if (qdeg(acc) < 0) {
                fail = true;
                break;
            }
            xs[k] = z0;
            ys[k] = resultant_q(def, acc);
        }
        if (fail) continue;
        // Lagrange interpolation (exact)
        QPoly N{};
        for (int k = 0; k <= dz; ++k) {
            QPoly term{QQ(1)};
            QQ denom = 1;
            for (int j = 0; j <= dz; ++j) {
                if (j == k) continue;
                term = qmul(term, QPoly{-xs[j], QQ(1)});
                denom *= xs[k] - xs[j];
            }
            QQ c = ys[k] / denom;
            N.resize(std::max(N.size(), term.size()), QQ(0));
            for (size_t t = 0; t < term.size(); ++t) N[t] += c * term[t];
        }
        qnorm(N);
        if (qdeg(N) != dz) continue;
        IntPoly Ni = clear_denominators(N).canonical();
        if (!is_squarefree(Ni)) continue;
        // factor N over Q and pull factors back via gcds
        std::vector<FPoly> out;
        FPoly rest = g;
        for (const auto& H : factor_squarefree(Ni)) {
            fnorm(rest);
            if (rest.size() <= 1) break;
            // H(z + s*gen) as a polynomial over F
            FieldElem sg = fe_mul_q(fe_gen(F), QQ(s));
            FPoly shift{sg, fe_one(F)};  // z + s*gen
            FPoly acc{fe_from_q(F, QQ(H[0]))};
            FPoly pw{fe_one(F)};
            for (int i = 1; i <= H.degree(); ++i) {
                pw = fmul(pw, shift, F);
                FPoly term = pw;
                for (auto& c : term) c = fe_mul_q(c, QQ(H[i]));
                acc.resize(std::max(acc.size(), term.size()), fe_zero(F));
                for (size_t t = 0; t < term.size(); ++t) acc[t] = fe_add(acc[t], term[t]);
            }
            FPoly fac = fgcd(rest, acc, F);
            if (fac.size() > 1) {
                out.push_back(fac);
                // rest = rest / fac
                FPoly q;
                {
                    // monic division
                    FPoly r = rest;
                    fnorm(r);
                    q.assign(r.size() - fac.size() + 1, fe_zero(F));
                    while (r.size() >= fac.size() && !r.empty()) {
                        FieldElem c = r.back();  // fac monic
                        size_t sh = r.size() - fac.size();
                        q[sh] = c;
                        for (size_t i = 0; i < fac.size(); ++i)
                            r[i + sh] = fe_sub(r[i + sh], fe_mul(c, fac[i]));
                        r.pop_back();
                        fnorm(r);
                    }
                    if (!r.empty()) throw Error("factor_over_field: division failure");
                }
                rest = q;
            }
        }
        fnorm(rest);
        if (rest.size() > 1) out.push_back(fmonic(rest, F));
        // verify degrees add up
        size_t total = 0;
        for (const auto& f : out) total += f.size() - 1;
        if (total != g.size() - 1) throw Error("factor_over_field: factor degrees inconsistent");
        return out;
    }
    throw Error("factor_over_field: no squarefree norm found");
}

std::vector<FieldElem> roots_in_field(const IntPoly& q, const FieldPtr& F) {
    FPoly g(q.coeffs().size(), fe_zero(F));
    for (size_t i = 0; i < q.coeffs().size(); ++i) g[i] = fe_from_q(F, QQ(q[i]));
    std::vector<FieldElem> roots;
    for (const auto& f : factor_over_field(g, F))
        if (f.size() == 2) roots.push_back(fe_neg(f[0]));  // monic z + c
    return roots;
}

std::optional<FieldElem> sqrt_in_field(const FieldElem& d) {
    if (d.is_zero()) return fe_zero(d.field);
    const FieldPtr& F = d.field;
    if (F->is_rationals() || d.is_rational()) {
        QQ q = d.rational_value();
        ZZ n = numerator(q), de = denominator(q);
        ZZ an = abs(n);
        ZZ sn = sqrt(an), sd = sqrt(de);
        if (n >= 0 && sn * sn == n && sd * sd == de) {
            auto r = fe_from_q(F, QQ(sn, sd));
            return r;
        }
        if (F->is_rationals()) return std::nullopt;
    }
    FPoly g{fe_neg(d), fe_zero(F), fe_one(F)};  // z^2 - d
    for (const auto& f : factor_over_field(g, F))
        if (f.size() == 2) {
            FieldElem r = fe_neg(f[0]);
            if (fe_mul(r, r) == d) return r;
            throw Error("sqrt_in_field: verification failed");
        }
    return std::nullopt;
}

// ------------------------------------------------------ compositum building

namespace {
struct CombineResult {
    FieldPtr field;
    FieldElem old_gen_image;
    FieldElem y_image;
};

// monic integral minpoly of lc*y for y with primitive minpoly mu
IntPoly monicized_minpoly(const IntPoly& mu, ZZ& scale_out) {
    if (mu.is_monic()) {
        scale_out = 1;
        return mu;
    }
    ZZ lc = mu.leading();
    int m = mu.degree();
    std::vector<ZZ> c(mu.coeffs().size());
    c[m] = 1;
    for (int i = 0; i < m; ++i) c[i] = mu[i] * pow(lc, m - 1 - i);
    scale_out = lc;
    return IntPoly(std::move(c));
}

// resultant_z: R(z) = Res_u(p(u), nu(z - u)) via interpolation; p, nu monic
IntPoly resultant_compose(const IntPoly& p, const IntPoly& nu) {
    int dz = p.degree() * nu.degree();
    std::vector<QQ> xs(dz + 1), ys(dz + 1);
    for (int k = 0; k <= dz; ++k) {
        // nu(k - u) as IntPoly in u
        IntPoly shifted = nu.scale_arg(QQ(-1)).shift_arg(ZZ(-k));
        // nu(k - u): substitute u -> ... nu(-(u - k)) = nu_neg(u - k)
        xs[k] = QQ(k);
        ys[k] = QQ(resultant(p, shifted));
    }
    // exact Lagrange interpolation
    QPoly N{};
    for (int k = 0; k <= dz; ++k) {
        QPoly term{QQ(1)};
        QQ denom = 1;
        for (int j = 0; j <= dz; ++j) {
            if (j == k) continue;
            term = qmul(term, QPoly{-xs[j], QQ(1)});
            denom *= xs[k] - xs[j];
        }
        QQ c = ys[k] / denom;
        N.resize(std::max(N.size(), term.size()), QQ(0));
        for (size_t t = 0; t < term.size(); ++t) N[t] += c * term[t];
    }
    qnorm(N);
    IntPoly R = clear_denominators(N).canonical();
    if (R.degree() != dz) throw Error("resultant_compose: degree drop");
    return R;
}

// select the unique irreducible factor of squarefree R vanishing at beta
IntPoly select_factor(const std::vector<IntPoly>& factors, BigComplex beta, int digits) {
    for (int attempt = 0; attempt < 5; ++attempt) {
        PrecisionScope scope(digits);
        int best = -1;
        int plausible = 0;
        for (size_t i = 0; i < factors.size(); ++i) {
            BigComplex v = factors[i].eval_certified(beta);
            BigFloat margin = v.err * 4 + pow10(-(digits * 3 / 4));
            if (v.abs() <= margin) {
                best = static_cast<int>(i);
                ++plausible;
            }
        }
        if (plausible == 1) return factors[best];
        digits *= 2;
        // beta err too coarse: caller should provide tighter approximations;
        // attempt a refinement by shrinking err optimistically is unsound, so
        // just re-evaluate at higher working precision
        if (attempt == 3 && plausible > 1) break;
    }
    throw Error("select_factor: ambiguous vanishing factor");
}

CombineResult combine(const FieldPtr& F, const IntPoly& nu, const BigComplex& y_approx,
                      const PrecisionContext& ctx) {
    // F(y) for y integral with monic minpoly nu
    if (!nu.is_monic()) throw Error("combine: minpoly must be monic");
    const IntPoly& p = F->defining;
    for (long k = 1; k < 40; k = k > 0 ? -k : -k + 1) {
        IntPoly nuk = nu.scale_arg(QQ(1, k)).canonical();  // minpoly of k*y
        IntPoly R = resultant_compose(p, nuk);
        if (!is_squarefree(R)) continue;
        int digits = ctx.working_digits();
        BigComplex alpha = F->gen_refined(digits);
        BigComplex beta;
        {
            PrecisionScope scope(digits);
            BigComplex ky{y_approx.re * k, y_approx.im * k, y_approx.err * abs(BigFloat(k))};
            beta = alpha + ky;
        }
        auto factors = factor_squarefree(R);
        IntPoly mu;
        try {
            mu = select_factor(factors, beta, digits);
        } catch (const Error&) {
            // refine both approximations and retry once
            PrecisionContext c2(digits * 2);
            BigComplex a2 = F->gen_refined(c2.working_digits());
            int yi = root_index(nu, y_approx, ctx);
            BigComplex y2 = roots_cached(nu, c2.working_digits())[yi];
            PrecisionScope scope(c2.working_digits());
            BigComplex ky{y2.re * k, y2.im * k, y2.err * abs(BigFloat(k))};
            mu = select_factor(factors, a2 + ky, c2.working_digits());
        }
        FieldPtr Fnew = FieldHandle::make(mu, beta, ctx);
        // alpha image: linear gcd of p(u) and nuk(beta - u) over Fnew
        FieldElem betae = fe_gen(Fnew);
        FPoly pu(p.coeffs().size(), fe_zero(Fnew));
        for (size_t i = 0; i < p.coeffs().size(); ++i) pu[i] = fe_from_q(Fnew, QQ(p[i]));
        // nuk(beta - u): expand powers of (beta - u)
        FPoly acc{fe_from_q(Fnew, QQ(nuk[0]))};
        FPoly base{betae, fe_from_q(Fnew, QQ(-1))};
        FPoly pw{fe_one(Fnew)};
        for (int i = 1; i <= nuk.degree(); ++i) {
            pw = fmul(pw, base, Fnew);
            FPoly term = pw;
            for (auto& c : term) c = fe_mul_q(c, QQ(nuk[i]));
            acc.resize(std::max(acc.size(), term.size()), fe_zero(Fnew));
            for (size_t t = 0; t < term.size(); ++t) acc[t] = fe_add(acc[t], term[t]);
        }
        FPoly g = fgcd(pu, acc, Fnew);
        if (g.size() != 2) continue;  // unlucky k
        FieldElem alpha_img = fe_neg(g[0]);
        FieldElem ky_img = fe_sub(betae, alpha_img);
        FieldElem y_img = fe_mul_q(ky_img, QQ(1, k));
        return {Fnew, alpha_img, y_img};
    }
    throw Error("combine: no suitable shift found");
}

// integral scaling: returns (monic minpoly of c*x, c, refined approx of c*x)
struct IntegralForm {
    IntPoly monic;
    ZZ scale;
    BigComplex approx;
};

IntegralForm integral_form(const AlgebraicNumber& x, const PrecisionContext& ctx) {
    IntegralForm r;
    r.monic = monicized_minpoly(x.minpoly, r.scale);
    PrecisionScope scope(ctx.working_digits());
    BigFloat s(r.scale.str());
    r.approx = BigComplex{x.approx.re * s, x.approx.im * s, x.approx.err * fabs(s)};
    return r;
}
}  // namespace

std::optional<FieldElem> express_in_field(const AlgebraicNumber& x, const FieldPtr& F) {
    const PrecisionContext& ctx = F->ctx;
    if (x.is_rational()) return fe_from_q(F, x.rational_value());
    if (F->is_rationals()) return std::nullopt;
    if (F->degree % x.minpoly.degree() != 0) return std::nullopt;
    if (x.ambient && x.ambient->field == F) return x.ambient;
    // LLL fast path with exact verification
    for (int round = 0; round < 2; ++round) {
        int digits = ctx.working_digits() * (1 + round);
        BigComplex g = F->gen_refined(digits);
        int xi = root_index(x, ctx);
        BigComplex xa = roots_cached(x.minpoly, digits)[xi];
        auto comb = lll_combination(xa, F->defining, g, digits);
        if (comb) {
            FieldElem r{F, *comb};
            r.coeffs.resize(F->degree, QQ(0));
            if (fe_minpoly(r) == x.minpoly) {
                AlgebraicNumber ra = alg_from_residue(r);
                if (root_index(ra, ctx) == xi) return r;
            }
        }
    }
    // exact fallback
    auto roots = roots_in_field(x.minpoly, F);
    if (roots.empty()) return std::nullopt;
    int xi = root_index(x, ctx);
    for (const auto& r : roots) {
        AlgebraicNumber ra = alg_from_residue(r);
        if (root_index(ra, ctx) == xi) return r;
    }
    return std::nullopt;
}

std::pair<FieldPtr, std::vector<FieldElem>> primitive_element(
    const std::vector<AlgebraicNumber>& xs, const PrecisionContext& ctx) {
    if (xs.empty()) throw Error("primitive_element: empty input");
    FieldPtr F = FieldHandle::rationals(ctx);
    std::vector<FieldElem> images;
    for (const auto& x : xs) {
        if (x.is_rational()) {
            images.push_back(fe_from_q(F, x.rational_value()));
            continue;
        }
        // fast path: x already expressible in F
        if (!F->is_rationals()) {
            auto e = express_in_field(x, F);
            if (e) {
                images.push_back(*e);
                continue;
            }
        }
        IntegralForm yf = integral_form(x, ctx);
        CombineResult cr =
            F->is_rationals()
                ? CombineResult{FieldHandle::make(yf.monic,
                                                  roots_cached(yf.monic, ctx.working_digits())
                                                      [root_index(yf.monic, yf.approx, ctx)],
                                                  ctx),
                                FieldElem{}, FieldElem{}}
                : combine(F, yf.monic, yf.approx, ctx);
        if (F->is_rationals()) {
            cr.old_gen_image = fe_zero(cr.field);
            cr.y_image = fe_gen(cr.field);
        }
        // remap existing images through the embedding of F into the new field
        for (auto& img : images) img = fe_map(img, cr.old_gen_image);
        images.push_back(fe_mul_q(cr.y_image, QQ(1, yf.scale)));
        F = cr.field;
        // all previous images acquired the new field
    }
    // ensure every image carries the final field (earlier rationals)
    for (auto& img : images)
        if (img.field != F) img = fe_map(img, fe_gen(F));
    return {F, images};
}

AlgebraicNumber field_arith(ArithOp op, const AlgebraicNumber& x, const AlgebraicNumber& y,
                            const PrecisionContext& ctx) {
    if (op == ArithOp::neg) {
        if (x.ambient) return alg_from_residue(fe_neg(*x.ambient));
        AlgebraicNumber r;
        r.minpoly = x.minpoly.scale_arg(QQ(-1)).canonical();
        r.approx = -x.approx;
        if (r.minpoly.degree() > 1) return alg_make(r.minpoly, r.approx, ctx);
        return alg_from_q(-x.rational_value());
    }
    FieldElem xe, ye;
    if (x.ambient && y.ambient && x.ambient->field == y.ambient->field) {
        xe = *x.ambient;
        ye = *y.ambient;
    } else {
        auto [F, imgs] = primitive_element({x, y}, ctx);
        xe = imgs[0];
        ye = imgs[1];
    }
    FieldElem r;
    switch (op) {
        case ArithOp::add: r = fe_add(xe, ye); break;
        case ArithOp::sub: r = fe_sub(xe, ye); break;
        case ArithOp::mul: r = fe_mul(xe, ye); break;
        case ArithOp::div:
            if (ye.is_zero()) throw Error("field_arith: division by exact zero");
            r = fe_div(xe, ye);
            break;
        default: throw Error("field_arith: bad op");
    }
    return alg_from_residue(r);
}

AdjoinResult adjoin_sqrt(const FieldElem& d, const FieldPtr& F) {
    if (d.is_zero()) throw Error("adjoin_sqrt: d = 0");
    auto sq = sqrt_in_field(d);
    if (sq) {
        AdjoinResult r;
        r.field = F;
        r.already_square = true;
        r.sqrt_d = *sq;
        r.old_gen_image = fe_gen(F);
        return r;
    }
    const PrecisionContext& ctx = F->ctx;
    // clear denominators: d' = c^2 d is integral over Z[gen]
    ZZ c = 1;
    for (const auto& q : d.coeffs) c = lcm(c, denominator(q));
    FieldElem dprime = fe_mul_q(d, QQ(c * c));
    IntPoly mu_d = fe_minpoly(dprime);
    IntPoly mu2 = mu_d.compose_square();  // mu_d(z^2), vanishes at sqrt(d')
    BigComplex da = fe_eval(dprime, ctx.working_digits());
    BigComplex sd = complex_sqrt(da);
    IntPoly mu_sqrt = select_factor(factor_squarefree(mu2), sd, ctx.working_digits());
    if (!mu_sqrt.is_monic()) throw Error("adjoin_sqrt: expected integral sqrt");
    CombineResult cr = F->is_rationals()
                           ? CombineResult{FieldHandle::make(
                                               mu_sqrt,
                                               roots_cached(mu_sqrt, ctx.working_digits())
                                                   [root_index(mu_sqrt, sd, ctx)],
                                               ctx),
                                           FieldElem{}, FieldElem{}}
                           : combine(F, mu_sqrt, sd, ctx);
    if (F->is_rationals()) {
        cr.old_gen_image = fe_zero(cr.field);
        cr.y_image = fe_gen(cr.field);
    }
    AdjoinResult r;
    r.field = cr.field;
    r.already_square = false;
    r.old_gen_image = cr.old_gen_image;
    r.sqrt_d = fe_mul_q(cr.y_image, QQ(1, c));
    if (cr.field->degree != 2 * F->degree)
        throw Error("adjoin_sqrt: unexpected compositum degree");
    // exact check: sqrt_d^2 equals the image of d
    FieldElem d_img = fe_map(FieldElem{F, d.coeffs}, r.old_gen_image);
    if (!(fe_mul(r.sqrt_d, r.sqrt_d) == d_img)) throw Error("adjoin_sqrt: square check failed");
    return r;
}

bool is_algebraic_integer(const AlgebraicNumber& x) { return x.minpoly.is_monic(); }

int certified_sign(const AlgebraicNumber& x) {
    if (x.is_zero()) return 0;
    if (x.is_rational()) {
        QQ q = x.rational_value();
        return q.is_zero() ? 0 : (q > 0 ? 1 : -1);
    }
    PrecisionContext ctx(std::max(30, 19));
    int idx = root_index(x, ctx);
    int digits = 30;
    for (int attempt = 0; attempt < 8; ++attempt) {
        const auto& roots = roots_cached(x.minpoly, digits);
        const BigComplex& r = roots[idx];
        if (!r.im.is_zero()) throw Error("certified_sign: non-real algebraic number");
        if (fabs(r.re) > r.err) return r.re > 0 ? 1 : -1;
        digits *= 2;
    }
    throw Error("certified_sign: could not certify sign");
}

int certified_sign(const FieldElem& x) {
    if (x.is_zero()) return 0;
    if (x.is_rational()) {
        QQ q = x.rational_value();
        return q > 0 ? 1 : -1;
    }
    return certified_sign_at(x, x.field->gen);
}

int certified_sign_at(const FieldElem& x, const BigComplex& root) {
    if (x.is_zero()) return 0;
    if (x.is_rational()) {
        QQ q = x.rational_value();
        return q > 0 ? 1 : -1;
    }
    // the value is a root of fe_minpoly(x); nonzero since x != 0 in a field
    int digits = x.field->ctx.working_digits();
    int ridx = root_index(x.field->defining, root, x.field->ctx);
    for (int attempt = 0; attempt < 8; ++attempt) {
        PrecisionScope scope(digits);
        const auto& groots = roots_cached(x.field->defining, digits);
        BigComplex v = fe_eval_at(x, groots[ridx]);
        if (!v.im.is_zero() && fabs(v.im) > v.err)
            throw Error("certified_sign_at: non-real value");
        if (fabs(v.re) > v.err) return v.re > 0 ? 1 : -1;
        digits *= 2;
    }
    throw Error("certified_sign_at: could not certify sign");
}

}  // namespace reflekt
