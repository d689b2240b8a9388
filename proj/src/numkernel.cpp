#include "reflekt/numkernel.hpp"

#include <algorithm>
#include <map>
#include <sstream>

namespace reflekt {

namespace {
// Small additive slack covering mpfr rounding in error propagation: a few
// ulps at the current working precision plus a deep absolute floor.
BigFloat slack(const BigFloat& x) {
    long bits = static_cast<long>(BigFloat::default_precision() * 3.33) + 4;
    return ldexp(fabs(x), -bits + 4) + ldexp(BigFloat(1), -4 * bits);
}
}  // namespace

// ---------------------------------------------------------------- BigComplex

BigComplex::BigComplex(const QQ& q) : re(BigFloat(q)), im(0), err(0) {
    if (denominator(q) != 1) err = slack(re);
}

BigFloat BigComplex::abs() const { return sqrt(re * re + im * im); }

BigComplex operator+(const BigComplex& a, const BigComplex& b) {
    BigComplex r{a.re + b.re, a.im + b.im, a.err + b.err};
    r.err += slack(r.abs() + r.err);
    return r;
}

BigComplex operator-(const BigComplex& a, const BigComplex& b) {
    BigComplex r{a.re - b.re, a.im - b.im, a.err + b.err};
    r.err += slack(r.abs() + r.err);
    return r;
}

BigComplex operator*(const BigComplex& a, const BigComplex& b) {
    BigComplex r{a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re, 0};
    BigFloat ma = a.abs(), mb = b.abs();
    r.err = ma * b.err + mb * a.err + a.err * b.err;
    r.err += slack(ma * mb + r.err);
    return r;
}

BigComplex operator/(const BigComplex& a, const BigComplex& b) {
    BigFloat n2 = b.re * b.re + b.im * b.im;
    if (n2.is_zero()) throw Error("BigComplex: division by zero");
    BigComplex r{(a.re * b.re + a.im * b.im) / n2, (a.im * b.re - a.re * b.im) / n2, 0};
    BigFloat ma = a.abs(), mb = sqrt(n2);
    // |a/b - a~/b~| <= (|a|eb + |b|ea) / (|b|(|b|-eb)), valid only when eb < |b|
    if (b.err >= mb) throw Error("BigComplex: divisor not certified away from zero");
    r.err = (ma * b.err + mb * a.err) / (mb * (mb - b.err));
    r.err += slack(ma / mb + r.err);
    return r;
}

BigComplex complex_sqrt(const BigComplex& z) {
    BigFloat m = z.abs();
    if (m.is_zero()) return BigComplex(BigFloat(0), BigFloat(0), sqrt(z.err));
    BigFloat u = sqrt((m + fabs(z.re)) / 2);
    BigComplex r;
    if (z.re >= 0) {
        r.re = u;
        r.im = z.im / (2 * u);
    } else {
        BigFloat v = z.im < 0 ? -u : u;
        r.im = v;
        r.re = z.im / (2 * v);
    }
    // d(sqrt) = 1/(2 sqrt): first order error estimate with slack
    r.err = z.err / sqrt(m) + slack(sqrt(m));
    return r;
}

BigFloat parse_decimal(const std::string& s) {
    std::string t;
    t.reserve(s.size());
    for (char c : s)
        if (!isspace(static_cast<unsigned char>(c))) t += c;
    if (t.empty()) throw Error("empty decimal literal");
    return BigFloat(t);
}

BigFloat pow10(long k) {
    BigFloat b(10);
    return pow(b, static_cast<int>(k));
}

std::string BigComplex::str(int digits) const {
    std::ostringstream os;
    os.precision(digits);
    os << re;
    if (!im.is_zero()) {
        os << (im < 0 ? " - " : " + ");
        os << fabs(im) << "i";
    }
    return os.str();
}

// ------------------------------------------------------------------- IntPoly

IntPoly::IntPoly(std::vector<ZZ> coeffs) : coeffs_(std::move(coeffs)) { normalize(); }

void IntPoly::normalize() {
    while (!coeffs_.empty() && coeffs_.back().is_zero()) coeffs_.pop_back();
}

IntPoly IntPoly::from_int(long c) { return IntPoly({ZZ(c)}); }
IntPoly IntPoly::variable() { return IntPoly({ZZ(0), ZZ(1)}); }

ZZ IntPoly::content() const {
    ZZ g = 0;
    for (const auto& c : coeffs_) {
        g = gcd(g, c);
        if (g == 1) break;
    }
    return g;
}

IntPoly IntPoly::primitive_part() const {
    if (is_zero()) return {};
    ZZ g = content();
    std::vector<ZZ> r(coeffs_.size());
    for (size_t i = 0; i < coeffs_.size(); ++i) r[i] = coeffs_[i] / g;
    return IntPoly(std::move(r));
}

IntPoly IntPoly::canonical() const {
    IntPoly p = primitive_part();
    if (!p.is_zero() && p.coeffs_.back() < 0)
        for (auto& c : p.coeffs_) c = -c;
    return p;
}

IntPoly IntPoly::derivative() const {
    if (degree() <= 0) return {};
    std::vector<ZZ> r(coeffs_.size() - 1);
    for (size_t i = 1; i < coeffs_.size(); ++i) r[i - 1] = coeffs_[i] * static_cast<long>(i);
    return IntPoly(std::move(r));
}

QQ IntPoly::eval_q(const QQ& x) const {
    QQ v = 0;
    for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) v = v * x + QQ(*it);
    return v;
}

BigFloat IntPoly::eval(const BigFloat& x) const {
    BigFloat v = 0;
    for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) v = v * x + BigFloat(*it);
    return v;
}

BigComplex IntPoly::eval(const BigComplex& x) const {
    BigComplex v;
    for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) {
        v = v * x;
        v.re += BigFloat(*it);
    }
    v.err = 0;
    // recompute rounding slack once; per-step tracking is overkill here
    v.err = slack(v.abs() + 1) * static_cast<int>(coeffs_.size());
    return v;
}

BigComplex IntPoly::eval_certified(const BigComplex& x) const {
    BigComplex v = eval(BigComplex{x.re, x.im, BigFloat(0)});
    if (!x.err.is_zero() && degree() >= 1) {
        // |p(x) - p(c)| <= err * max|p'| on the disc; bound |p'| crudely by
        // sum |coeff p'| * (|c|+err)^i
        BigFloat m = x.abs() + x.err, b = 0, pw = 1;
        IntPoly d = derivative();
        for (const auto& c : d.coeffs()) {
            b += fabs(BigFloat(c)) * pw;
            pw *= m;
        }
        v.err += x.err * b;
    }
    return v;
}

IntPoly operator+(const IntPoly& a, const IntPoly& b) {
    std::vector<ZZ> r(std::max(a.coeffs_.size(), b.coeffs_.size()), ZZ(0));
    for (size_t i = 0; i < a.coeffs_.size(); ++i) r[i] += a.coeffs_[i];
    for (size_t i = 0; i < b.coeffs_.size(); ++i) r[i] += b.coeffs_[i];
    return IntPoly(std::move(r));
}

IntPoly operator-(const IntPoly& a, const IntPoly& b) {
    std::vector<ZZ> r(std::max(a.coeffs_.size(), b.coeffs_.size()), ZZ(0));
    for (size_t i = 0; i < a.coeffs_.size(); ++i) r[i] += a.coeffs_[i];
    for (size_t i = 0; i < b.coeffs_.size(); ++i) r[i] -= b.coeffs_[i];
    return IntPoly(std::move(r));
}

IntPoly operator*(const IntPoly& a, const IntPoly& b) {
    if (a.is_zero() || b.is_zero()) return {};
    std::vector<ZZ> r(a.coeffs_.size() + b.coeffs_.size() - 1, ZZ(0));
    for (size_t i = 0; i < a.coeffs_.size(); ++i)
        for (size_t j = 0; j < b.coeffs_.size(); ++j) r[i + j] += a.coeffs_[i] * b.coeffs_[j];
    return IntPoly(std::move(r));
}

IntPoly IntPoly::operator-() const {
    std::vector<ZZ> r(coeffs_);
    for (auto& c : r) c = -c;
    return IntPoly(std::move(r));
}

IntPoly IntPoly::operator*(const ZZ& c) const {
    if (c.is_zero()) return {};
    std::vector<ZZ> r(coeffs_);
    for (auto& x : r) x *= c;
    return IntPoly(std::move(r));
}

IntPoly IntPoly::scale_arg(const QQ& c) const {
    // returns the canonical polynomial with the same roots as p(c*x)
    if (is_zero()) return {};
    std::vector<QQ> r(coeffs_.size());
    QQ pw = 1;
    for (size_t i = 0; i < coeffs_.size(); ++i) {
        r[i] = QQ(coeffs_[i]) * pw;
        pw *= c;
    }
    ZZ den = 1;
    for (const auto& q : r) den = lcm(den, denominator(q));
    std::vector<ZZ> z(r.size());
    for (size_t i = 0; i < r.size(); ++i) z[i] = numerator(r[i] * QQ(den));
    return IntPoly(std::move(z)).canonical();
}

IntPoly IntPoly::shift_arg(const ZZ& k) const {
    // Horner-style: p(x+k)
    IntPoly res, xk({k, ZZ(1)});
    for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) {
        res = res * xk;
        res = res + IntPoly({*it});
    }
    return res;
}

IntPoly IntPoly::reverse() const {
    std::vector<ZZ> r(coeffs_.rbegin(), coeffs_.rend());
    return IntPoly(std::move(r));
}

IntPoly IntPoly::compose_square() const {
    if (is_zero()) return {};
    std::vector<ZZ> r(2 * coeffs_.size() - 1, ZZ(0));
    for (size_t i = 0; i < coeffs_.size(); ++i) r[2 * i] = coeffs_[i];
    return IntPoly(std::move(r));
}

std::string IntPoly::str(const std::string& var) const {
    if (is_zero()) return "0";
    std::ostringstream os;
    bool first = true;
    for (int i = degree(); i >= 0; --i) {
        const ZZ& c = coeffs_[i];
        if (c.is_zero()) continue;
        if (!first) os << (c > 0 ? " + " : " - ");
        else if (c < 0) os << "-";
        ZZ a = abs(c);
        if (a != 1 || i == 0) os << a.str();
        if (i > 0) {
            if (a != 1) os << "*";
            os << var;
            if (i > 1) os << "^" << i;
        }
        first = false;
    }
    return os.str();
}

// --------------------------------------------------------- division and gcd

namespace {
// pseudo-division: lc(b)^(da-db+1) * a = q*b + r
void pseudo_divrem(const IntPoly& a, const IntPoly& b, IntPoly& q, IntPoly& r) {
    if (b.is_zero()) throw Error("poly division by zero");
    r = a;
    q = IntPoly{};
    int db = b.degree();
    const ZZ& lb = b.leading();
    int steps = a.degree() - db + 1;
    if (steps <= 0) return;
    for (int k = 0; k < steps; ++k) {
        if (r.degree() < db) {
            // multiply remaining deficit through to keep the identity exact
            ZZ m = pow(lb, steps - k);
            q = q * m;
            r = r * m;
            return;
        }
        int dr = r.degree();
        ZZ c = r.leading();
        q = q * lb;
        r = r * lb;
        std::vector<ZZ> t(dr - db + 1, ZZ(0));
        t[dr - db] = c;
        IntPoly shift(std::move(t));
        q = q + shift;
        r = r - shift * b;
        if (r.degree() == dr) throw Error("pseudo_divrem: cancellation failure");
    }
}
}  // namespace

IntPoly exact_div(const IntPoly& a, const IntPoly& b) {
    if (b.is_zero()) throw Error("exact_div by zero");
    if (a.is_zero()) return {};
    // schoolbook with exact coefficient divisions
    std::vector<ZZ> r(a.coeffs().begin(), a.coeffs().end());
    int da = a.degree(), db = b.degree();
    if (da < db) throw Error("exact_div: not divisible (degree)");
    std::vector<ZZ> q(da - db + 1, ZZ(0));
    for (int i = da - db; i >= 0; --i) {
        ZZ num = r[i + db];
        if (num.is_zero()) continue;
        if (num % b.leading() != 0) throw Error("exact_div: not divisible");
        ZZ c = num / b.leading();
        q[i] = c;
        for (int j = 0; j <= db; ++j) r[i + j] -= c * b[j];
    }
    for (const auto& c : r)
        if (!c.is_zero()) throw Error("exact_div: nonzero remainder");
    return IntPoly(std::move(q));
}

bool divides(const IntPoly& b, const IntPoly& a) {
    if (b.is_zero()) return a.is_zero();
    if (a.is_zero()) return true;
    if (a.degree() < b.degree()) return false;
    try {
        exact_div(a, b);
        return true;
    } catch (const Error&) {
        return false;
    }
}

IntPoly poly_gcd(const IntPoly& a0, const IntPoly& b0) {
    IntPoly a = a0.canonical(), b = b0.canonical();
    if (a.is_zero()) return b;
    if (b.is_zero()) return a;
    if (a.degree() < b.degree()) std::swap(a, b);
    // subresultant PRS on primitive parts
    ZZ g = 1, h = 1;
    while (true) {
        int d = a.degree() - b.degree();
        IntPoly q, r;
        pseudo_divrem(a, b, q, r);
        if (r.is_zero()) return b.canonical();
        if (r.degree() == 0) return IntPoly({ZZ(1)});
        a = b;
        ZZ denom = g * pow(h, d);
        std::vector<ZZ> rc(r.coeffs());
        for (auto& c : rc) c /= denom;
        b = IntPoly(std::move(rc));
        g = a.leading();
        ZZ gd = pow(g, d);
        h = d >= 1 ? gd / pow(h, d - 1) : h;  // h^{1-d} g^d
        if (b.degree() == 0) return IntPoly({ZZ(1)});
    }
}

ZZ resultant(const IntPoly& A, const IntPoly& B) {
    if (A.is_zero() || B.is_zero()) return 0;
    // subresultant algorithm (Cohen 3.3.7)
    IntPoly a = A, b = B;
    ZZ s = 1;
    ZZ ca = a.content(), cb = b.content();
    a = a.primitive_part();
    b = b.primitive_part();
    ZZ t = pow(ca, b.degree()) * pow(cb, a.degree());
    ZZ g = 1, h = 1;
    if (a.degree() < b.degree()) {
        if ((a.degree() & 1) && (b.degree() & 1)) s = -1;
        std::swap(a, b);
    }
    while (b.degree() > 0) {
        int d = a.degree() - b.degree();
        if ((a.degree() & 1) && (b.degree() & 1)) s = -s;
        IntPoly q, r;
        pseudo_divrem(a, b, q, r);
        a = b;
        if (r.is_zero()) return 0;
        ZZ denom = g * pow(h, d);
        std::vector<ZZ> rc(r.coeffs());
        for (auto& c : rc) c /= denom;
        b = IntPoly(std::move(rc));
        g = a.leading();
        if (d >= 1) h = pow(g, d) / pow(h, d - 1);
    }
    // now deg b == 0
    ZZ res;
    if (a.degree() == 0) {
        // both constants: resultant of constants is 1 (empty product)
        res = 1;
    } else {
        res = pow(b.leading(), a.degree()) / pow(h, a.degree() - 1);
    }
    return s * t * res;
}

ZZ poly_disc(const IntPoly& p) {
    if (p.degree() < 1) throw Error("poly_disc: degree >= 1 required");
    ZZ r = resultant(p, p.derivative());
    ZZ lead = p.leading();
    int n = p.degree();
    ZZ d = r / lead;
    if ((ZZ(n) * (n - 1) / 2) % 2 == 1) d = -d;
    return d;
}

IntPoly squarefree_part(const IntPoly& p) {
    if (p.is_zero()) throw Error("squarefree_part of zero");
    if (p.degree() == 0) return IntPoly({ZZ(1)});
    IntPoly g = poly_gcd(p, p.derivative());
    if (g.degree() == 0) return p.canonical();
    return exact_div(p.canonical(), g).canonical();
}

bool is_squarefree(const IntPoly& p) {
    if (p.is_zero()) return false;
    if (p.degree() <= 1) return true;
    return poly_gcd(p, p.derivative()).degree() == 0;
}

IntPoly cyclotomic(int n) {
    static std::map<int, IntPoly> cache;
    auto it = cache.find(n);
    if (it != cache.end()) return it->second;
    if (n < 1) throw Error("cyclotomic: n >= 1");
    // x^n - 1 divided by all proper cyclotomic factors
    std::vector<ZZ> xn(n + 1, ZZ(0));
    xn[0] = -1;
    xn[n] = 1;
    IntPoly num{std::move(xn)};
    for (int d = 1; d < n; ++d)
        if (n % d == 0) num = exact_div(num, cyclotomic(d));
    cache[n] = num;
    return num;
}

IntPoly angle_minpoly(int n) {
    if (n < 2) throw Error("angle_minpoly: n >= 2");
    if (n == 2) return IntPoly::variable();  // -2cos(pi/2) = 0
    IntPoly phi = cyclotomic(2 * n);
    int k = phi.degree() / 2;
    // phi is palindromic; write phi/x^k in the Chebyshev-like basis
    // C_j(y) with x^j + x^-j = C_j(x + 1/x)
    std::vector<IntPoly> C(k + 1);
    C[0] = IntPoly({ZZ(2)});
    if (k >= 1) C[1] = IntPoly::variable();
    for (int j = 2; j <= k; ++j) C[j] = IntPoly::variable() * C[j - 1] - C[j - 2];
    IntPoly res = IntPoly({phi[k]});
    for (int j = 1; j <= k; ++j) res = res + C[j] * phi[k + j];
    // res(y) vanishes at 2cos(pi/n); substitute y -> -y
    res = res.scale_arg(QQ(-1));
    return res.canonical();
}

// ------------------------------------------------------------ Sturm / roots

namespace {
using QPolyV = std::vector<QQ>;

int qdeg(const QPolyV& p) { return static_cast<int>(p.size()) - 1; }

void qnorm(QPolyV& p) {
    while (!p.empty() && p.back().is_zero()) p.pop_back();
}

QPolyV qrem(const QPolyV& a, const QPolyV& b) {
    QPolyV r = a;
    while (qdeg(r) >= qdeg(b)) {
        QQ c = r.back() / b.back();
        int shift = qdeg(r) - qdeg(b);
        for (size_t i = 0; i < b.size(); ++i) r[i + shift] -= c * b[i];
        r.pop_back();
        qnorm(r);
        if (r.empty()) break;
    }
    return r;
}

int sign_at_inf(const QPolyV& p, bool plus) {
    if (p.empty()) return 0;
    int s = p.back() > 0 ? 1 : -1;
    if (!plus && (qdeg(p) & 1)) s = -s;
    return s;
}

int sign_at(const QPolyV& p, const QQ& x) {
    QQ v = 0;
    for (auto it = p.rbegin(); it != p.rend(); ++it) v = v * x + *it;
    return v.is_zero() ? 0 : (v > 0 ? 1 : -1);
}

std::vector<QPolyV> sturm_chain(const IntPoly& p0) {
    IntPoly p = squarefree_part(p0);
    QPolyV a(p.coeffs().size()), b;
    for (size_t i = 0; i < p.coeffs().size(); ++i) a[i] = QQ(p.coeffs()[i]);
    IntPoly d = p.derivative();
    b.resize(d.coeffs().size());
    for (size_t i = 0; i < d.coeffs().size(); ++i) b[i] = QQ(d.coeffs()[i]);
    std::vector<QPolyV> chain{a, b};
    while (!chain.back().empty() && qdeg(chain.back()) > 0) {
        QPolyV r = qrem(chain[chain.size() - 2], chain.back());
        if (r.empty()) break;
        for (auto& c : r) c = -c;
        // rescale to control coefficient growth (sign pattern preserved by
        // positive scaling)
        QQ m = 0;
        for (auto& c : r) m = std::max(m, QQ(abs(numerator(c)), denominator(c)));
        if (!m.is_zero())
            for (auto& c : r) c /= m;
        chain.push_back(std::move(r));
    }
    return chain;
}

int variations(const std::vector<int>& signs) {
    int v = 0, last = 0;
    for (int s : signs) {
        if (s == 0) continue;
        if (last != 0 && s != last) ++v;
        last = s;
    }
    return v;
}
}  // namespace

int count_real_roots(const IntPoly& p) {
    if (p.is_zero()) throw Error("count_real_roots: zero polynomial");
    if (p.degree() == 0) return 0;
    auto chain = sturm_chain(p);
    std::vector<int> lo, hi;
    for (const auto& q : chain) {
        lo.push_back(sign_at_inf(q, false));
        hi.push_back(sign_at_inf(q, true));
    }
    return variations(lo) - variations(hi);
}

int count_real_roots_between(const IntPoly& p, const QQ& a, const QQ& b) {
    if (p.is_zero()) throw Error("count_real_roots_between: zero polynomial");
    if (p.degree() == 0) return 0;
    auto chain = sturm_chain(p);
    std::vector<int> lo, hi;
    for (const auto& q : chain) {
        lo.push_back(sign_at(q, a));
        hi.push_back(sign_at(q, b));
    }
    return variations(lo) - variations(hi);
}

// Aberth-Ehrlich iteration with certification.
namespace {
struct CP {
    BigFloat re, im;
};
CP cmul(const CP& a, const CP& b) { return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re}; }
CP csub(const CP& a, const CP& b) { return {a.re - b.re, a.im - b.im}; }
CP cdiv(const CP& a, const CP& b) {
    BigFloat n = b.re * b.re + b.im * b.im;
    return {(a.re * b.re + a.im * b.im) / n, (a.im * b.re - a.re * b.im) / n};
}
BigFloat cabs(const CP& a) { return sqrt(a.re * a.re + a.im * a.im); }

std::vector<BigComplex> isolate_attempt(const IntPoly& p, int digits, bool& ok) {
    ok = false;
    PrecisionScope scope(digits);
    int n = p.degree();
    std::vector<CP> coef(n + 1), x(n);
    for (int i = 0; i <= n; ++i) coef[i] = {BigFloat(p[i]), BigFloat(0)};
    // Cauchy bound for initial radius
    BigFloat R = 0;
    for (int i = 0; i < n; ++i) R = std::max(R, BigFloat(fabs(BigFloat(p[i])) / fabs(BigFloat(p[n]))));
    R += 1;
    BigFloat pi4 = 4 * atan(BigFloat(1));
    for (int i = 0; i < n; ++i) {
        BigFloat th = pi4 * (2 * i + 1) / n / 2 + BigFloat(1) / 3;  // offset breaks symmetry traps
        x[i] = {R * cos(th), R * sin(th)};
    }
    auto evalp = [&](const CP& z, CP& v, CP& dv) {
        v = coef[n];
        dv = {BigFloat(0), BigFloat(0)};
        for (int i = n - 1; i >= 0; --i) {
            dv = cmul(dv, z);
            dv.re += v.re;
            dv.im += v.im;
            v = cmul(v, z);
            v.re += coef[i].re;
            v.im += coef[i].im;
        }
    };
    BigFloat tol = pow10(-(digits - 4));
    int maxit = 60 + 12 * digits / 10;
    for (int it = 0; it < maxit; ++it) {
        BigFloat worst = 0;
        for (int i = 0; i < n; ++i) {
            CP v, dv;
            evalp(x[i], v, dv);
            if (cabs(v).is_zero()) continue;
            CP newton = cdiv(v, dv);
            // sum of 1/(x_i - x_j) = conj(d)/|d|^2 over j != i
            CP sum{BigFloat(0), BigFloat(0)};
            for (int j = 0; j < n; ++j) {
                if (j == i) continue;
                CP d = csub(x[i], x[j]);
                BigFloat dn = d.re * d.re + d.im * d.im;
                if (dn.is_zero()) dn = BigFloat(1e-40);
                sum.re += d.re / dn;
                sum.im += -d.im / dn;
            }
            CP denom = {1 - (newton.re * sum.re - newton.im * sum.im),
                        -(newton.re * sum.im + newton.im * sum.re)};
            CP corr = cdiv(newton, denom);
            x[i] = csub(x[i], corr);
            worst = std::max(worst, cabs(corr));
        }
        if (worst < tol) break;
    }
    // certification radii: n*|p(x)/p'(x)| bounds the distance to the nearest
    // root (log-derivative bound, valid for squarefree p)
    std::vector<BigComplex> out(n);
    for (int i = 0; i < n; ++i) {
        CP v, dv;
        evalp(x[i], v, dv);
        BigFloat da = cabs(dv);
        if (da.is_zero()) return out;  // not converged
        BigFloat e = n * cabs(v) / da;
        out[i] = BigComplex(x[i].re, x[i].im, e * 2 + pow10(-(digits - 2)));
    }
    // pairwise separation: 4x radii must not overlap for strong isolation
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            BigFloat d = sqrt((out[i].re - out[j].re) * (out[i].re - out[j].re) +
                              (out[i].im - out[j].im) * (out[i].im - out[j].im));
            if (d <= 4 * (out[i].err + out[j].err)) return out;
        }
    ok = true;
    return out;
}
}  // namespace

std::vector<BigComplex> isolate_roots(const IntPoly& p0, const PrecisionContext& ctx) {
    IntPoly p = p0.canonical();
    if (p.is_zero()) throw Error("isolate_roots: zero polynomial");
    if (!is_squarefree(p)) throw Error("isolate_roots: polynomial not squarefree");
    int n = p.degree();
    if (n == 0) return {};
    PrecisionScope scope(ctx);
    int digits = ctx.working_digits();
    std::vector<BigComplex> roots;
    for (int attempt = 0; attempt < 6; ++attempt) {
        bool ok = false;
        roots = isolate_attempt(p, digits, ok);
        if (ok) break;
        digits *= 2;
        if (attempt == 5) throw Error("isolate_roots: failed to certify roots of " + p.str());
    }
    // exact number of real roots
    int nreal = count_real_roots(p);
    // sort by |im| and pin the nreal smallest to the real axis
    std::vector<int> idx(n);
    for (int i = 0; i < n; ++i) idx[i] = i;
    std::sort(idx.begin(), idx.end(),
              [&](int a, int b) { return fabs(roots[a].im) < fabs(roots[b].im); });
    for (int k = 0; k < nreal; ++k) {
        BigComplex& r = roots[idx[k]];
        if (fabs(r.im) > r.err) throw Error("isolate_roots: real-root classification failed");
        r.im = 0;
        // one real Newton step tightens the certification after projection
        BigFloat v = p.eval(r.re), dv = p.derivative().eval(r.re);
        if (!dv.is_zero()) {
            r.re -= v / dv;
            v = p.eval(r.re);
            r.err = 2 * n * fabs(v / dv) + pow10(-(digits - 2));
        }
    }
    // pair the rest into exact conjugates
    std::vector<int> rest(idx.begin() + nreal, idx.end());
    std::vector<bool> used(n, false);
    for (size_t a = 0; a < rest.size(); ++a) {
        int i = rest[a];
        if (used[i]) continue;
        int best = -1;
        BigFloat bd;
        for (size_t b = a + 1; b < rest.size(); ++b) {
            int j = rest[b];
            if (used[j]) continue;
            BigFloat d = fabs(roots[i].re - roots[j].re) + fabs(roots[i].im + roots[j].im);
            if (best < 0 || d < bd) {
                best = j;
                bd = d;
            }
        }
        if (best < 0) throw Error("isolate_roots: conjugate pairing failed");
        used[i] = used[best] = true;
        BigFloat re = (roots[i].re + roots[best].re) / 2;
        BigFloat im = (fabs(roots[i].im) + fabs(roots[best].im)) / 2;
        BigFloat err = std::max(roots[i].err, roots[best].err) + bd;
        bool i_up = roots[i].im > 0;
        roots[i] = BigComplex(re, i_up ? im : -im, err);
        roots[best] = BigComplex(re, i_up ? -im : im, err);
    }
    // canonical order: ascending real part, ties by ascending imaginary part
    std::sort(roots.begin(), roots.end(), [&](const BigComplex& a, const BigComplex& b) {
        if (fabs(a.re - b.re) > a.err + b.err) return a.re < b.re;
        return a.im < b.im;
    });
    // postcondition: sum of roots = -a_{n-1}/a_n
    BigFloat s = 0;
    for (const auto& r : roots) s += r.re;
    BigFloat expect = -BigFloat(p[n - 1]) / BigFloat(p[n]);
    BigFloat allow = pow10(-(ctx.digits - 6));
    for (const auto& r : roots) allow += r.err;
    if (fabs(s - expect) > allow) throw Error("isolate_roots: root-sum check failed for " + p.str());
    return roots;
}

}  // namespace reflekt
