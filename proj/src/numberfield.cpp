#include "reflekt/numberfield.hpp"

#include <algorithm>
#include <map>
#include <mutex>

#include "internal/fp_poly.hpp"

namespace reflekt {

namespace {

ZZ floor_div(const ZZ& a, const ZZ& b) {
    ZZ q, r;
    divide_qr(a, b, q, r);
    if (!r.is_zero() && ((r < 0) != (b < 0))) --q;
    return q;
}

}  // namespace

// ------------------------------------------------------------ lattice tools

namespace znf {

std::vector<std::vector<ZZ>> hnf(std::vector<std::vector<ZZ>> rows) {
    if (rows.empty()) throw Error("hnf: no rows");
    size_t n = rows[0].size();
    std::vector<std::vector<ZZ>> out;
    size_t rpos = 0;  // rows before rpos are exhausted
    for (size_t col = 0; col < n; ++col) {
        // euclid among rows with nonzero entry at col
        while (true) {
            int best = -1, second = -1;
            for (size_t r = rpos; r < rows.size(); ++r) {
                if (rows[r][col].is_zero()) continue;
                if (best < 0 || abs(rows[r][col]) < abs(rows[best][col])) {
                    second = best;
                    best = static_cast<int>(r);
                } else if (second < 0 || abs(rows[r][col]) < abs(rows[second][col])) {
                    second = static_cast<int>(r);
                }
            }
            if (best < 0) throw Error("hnf: rank deficient");
            if (second < 0) {
                std::swap(rows[best], rows[rpos]);
                break;
            }
            ZZ q = floor_div(rows[second][col], rows[best][col]);
            for (size_t c = 0; c < n; ++c) rows[second][c] -= q * rows[best][c];
        }
        if (rows[rpos][col] < 0)
            for (auto& x : rows[rpos]) x = -x;
        out.push_back(rows[rpos]);
        ++rpos;
    }
    // normalize entries above each pivot
    for (size_t col = 0; col < n; ++col)
        for (size_t r = 0; r < col; ++r) {
            ZZ q = floor_div(out[r][col], out[col][col]);
            if (q.is_zero()) continue;
            for (size_t c = 0; c < n; ++c) out[r][c] -= q * out[col][c];
        }
    return out;
}

std::vector<ZZ> reduce(const std::vector<std::vector<ZZ>>& H, std::vector<ZZ> v) {
    for (size_t i = 0; i < H.size(); ++i) {
        ZZ q = floor_div(v[i], H[i][i]);
        if (q.is_zero()) continue;
        for (size_t c = 0; c < v.size(); ++c) v[c] -= q * H[i][c];
    }
    return v;
}

bool in_lattice(const std::vector<std::vector<ZZ>>& H, const std::vector<ZZ>& v) {
    auto r = reduce(H, v);
    for (const auto& x : r)
        if (!x.is_zero()) return false;
    return true;
}

}  // namespace znf

// --------------------------------------------------------------- field data

struct NumberField::Cache {
    std::vector<std::vector<QQ>> basis_inv;          // inverse of integral_basis
    std::vector<std::vector<std::vector<ZZ>>> mult;  // mult[i][j] = coords of w_i w_j
    std::mutex mu;
    std::map<std::string, std::vector<PrimeIdeal>> factorizations;
};

namespace {

std::vector<std::vector<QQ>> qq_inverse(std::vector<std::vector<QQ>> M) {
    size_t n = M.size();
    std::vector<std::vector<QQ>> I(n, std::vector<QQ>(n, QQ(0)));
    for (size_t i = 0; i < n; ++i) I[i][i] = 1;
    for (size_t col = 0; col < n; ++col) {
        size_t piv = col;
        while (piv < n && M[piv][col].is_zero()) ++piv;
        if (piv == n) throw Error("qq_inverse: singular matrix");
        std::swap(M[piv], M[col]);
        std::swap(I[piv], I[col]);
        QQ inv = QQ(1) / M[col][col];
        for (size_t c = 0; c < n; ++c) {
            M[col][c] *= inv;
            I[col][c] *= inv;
        }
        for (size_t r = 0; r < n; ++r) {
            if (r == col || M[r][col].is_zero()) continue;
            QQ f = M[r][col];
            for (size_t c = 0; c < n; ++c) {
                M[r][c] -= f * M[col][c];
                I[r][c] -= f * I[col][c];
            }
        }
    }
    return I;
}

QQ qq_det(std::vector<std::vector<QQ>> M) {
    size_t n = M.size();
    QQ det = 1;
    for (size_t col = 0; col < n; ++col) {
        size_t piv = col;
        while (piv < n && M[piv][col].is_zero()) ++piv;
        if (piv == n) return 0;
        if (piv != col) {
            std::swap(M[piv], M[col]);
            det = -det;
        }
        det *= M[col][col];
        QQ inv = QQ(1) / M[col][col];
        for (size_t r = col + 1; r < n; ++r) {
            if (M[r][col].is_zero()) continue;
            QQ f = M[r][col] * inv;
            for (size_t c = col; c < n; ++c) M[r][c] -= f * M[col][c];
        }
    }
    return det;
}

// row-vector times matrix
std::vector<QQ> vec_mat(const std::vector<QQ>& v, const std::vector<std::vector<QQ>>& M) {
    size_t n = M[0].size();
    std::vector<QQ> r(n, QQ(0));
    for (size_t i = 0; i < v.size(); ++i) {
        if (v[i].is_zero()) continue;
        for (size_t j = 0; j < n; ++j) r[j] += v[i] * M[i][j];
    }
    return r;
}

// multiply two elements given in power coords, reduce mod defining
std::vector<QQ> power_mult(const FieldPtr& F, const std::vector<QQ>& a, const std::vector<QQ>& b) {
    FieldElem ea{F, a}, eb{F, b};
    return fe_mul(ea, eb).coeffs;
}

}  // namespace

std::vector<QQ> NumberField::to_integral_coords(const FieldElem& x) const {
    return vec_mat(x.coeffs, cache->basis_inv);
}

FieldElem NumberField::from_integral_coords(const std::vector<QQ>& c) const {
    return FieldElem{handle, vec_mat(c, integral_basis)};
}

bool NumberField::is_integral(const FieldElem& x) const {
    for (const auto& q : to_integral_coords(x))
        if (denominator(q) != 1) return false;
    return true;
}

ZZ PrimeIdeal::norm() const { return pow(p, f); }

bool PrimeIdeal::same_ideal(const PrimeIdeal& o) const {
    return p == o.p && hnf == o.hnf;
}

bool PrimeIdeal::operator<(const PrimeIdeal& o) const {
    if (p != o.p) return p < o.p;
    if (f != o.f) return f < o.f;
    if (e != o.e) return e < o.e;
    for (size_t i = 0; i < hnf.size(); ++i)
        if (hnf[i] != o.hnf[i]) return hnf[i] < o.hnf[i];
    return false;
}

// ------------------------------------------------------------ maximal order

namespace {

// order given by rows over the power basis; returns new rows (p-enlarged) or
// the same rows when already p-maximal
std::vector<std::vector<QQ>> p_enlarge_once(const FieldPtr& F,
                                            const std::vector<std::vector<QQ>>& basis,
                                            const ZZ& q, bool& enlarged) {
    enlarged = false;
    int n = F->degree;
    auto inv = qq_inverse(basis);
    auto to_coords = [&](const std::vector<QQ>& power) { return vec_mat(power, inv); };
    auto mult_coords_local = [&](const std::vector<QQ>& a, const std::vector<QQ>& b) {
        auto pa = vec_mat(a, basis), pb = vec_mat(b, basis);
        return to_coords(power_mult(F, pa, pb));
    };
    auto coord_int = [&](const std::vector<QQ>& v) {
        std::vector<ZZ> r(v.size());
        for (size_t i = 0; i < v.size(); ++i) {
            if (denominator(v[i]) != 1) throw Error("order: non-integral structure constants");
            r[i] = numerator(v[i]);
        }
        return r;
    };
    // Frobenius x -> x^(q^s), q^s >= n
    ZZ qs = q;
    while (qs < n) qs *= q;
    std::vector<std::vector<ZZ>> frob(n);
    for (int i = 0; i < n; ++i) {
        std::vector<QQ> e(n, QQ(0));
        e[i] = 1;
        // repeated squaring of coords
        std::vector<QQ> acc(n, QQ(0));
        acc[0] = 1;  // 1 in order coords? need coords of 1
        // coords of 1:
        std::vector<QQ> onep(n, QQ(0));
        onep[0] = 1;  // power coords of 1
        acc = to_coords(onep);
        std::vector<QQ> base = e;
        ZZ ex = qs;
        while (ex > 0) {
            if (bit_test(ex, 0)) acc = mult_coords_local(acc, base);
            ex >>= 1;
            if (ex > 0) base = mult_coords_local(base, base);
        }
        frob[i] = coord_int(acc);
        for (auto& x : frob[i]) x = ((x % q) + q) % q;
    }
    // kernel of frob mod q (rows = images of basis vectors)
    // solve x * frob = 0 mod q
    std::vector<std::vector<ZZ>> M(n, std::vector<ZZ>(n));
    for (int i = 0; i < n; ++i) M[i] = frob[i];
    // gaussian elimination mod q on rows of M^T to get kernel of row-vector map
    // x -> x M: kernel = left null space of M
    // build augmented [M | I] and row reduce mod q
    std::vector<std::vector<ZZ>> A(n, std::vector<ZZ>(2 * n, ZZ(0)));
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) A[i][j] = M[i][j] % q;
        A[i][n + i] = 1;
    }
    auto modinv = [&](const ZZ& a) {
        // q prime
        ZZ g = a % q, x = 1, y = 0, b = q, x1 = 0, y1 = 1;
        if (g < 0) g += q;
        while (!b.is_zero()) {
            ZZ t = g / b;
            ZZ g2 = g - t * b, x2 = x - t * x1, y2 = y - t * y1;
            g = b; x = x1; y = y1;
            b = g2; x1 = x2; y1 = y2;
        }
        ZZ r = x % q;
        if (r < 0) r += q;
        return r;
    };
    int rank = 0;
    for (int col = 0; col < n && rank < n; ++col) {
        int piv = -1;
        for (int r = rank; r < n; ++r)
            if (A[r][col] % q != 0) {
                piv = r;
                break;
            }
        if (piv < 0) continue;
        std::swap(A[piv], A[rank]);
        ZZ inv0 = modinv(A[rank][col]);
        for (int c = 0; c < 2 * n; ++c) A[rank][c] = A[rank][c] * inv0 % q;
        for (int r = 0; r < n; ++r) {
            if (r == rank) continue;
            ZZ f = A[r][col] % q;
            if (f.is_zero()) continue;
            for (int c = 0; c < 2 * n; ++c) A[r][c] = ((A[r][c] - f * A[rank][c]) % q + q) % q;
        }
        ++rank;
    }
    std::vector<std::vector<ZZ>> kernel;  // coords over the order basis, mod q
    for (int r = rank; r < n; ++r)
        kernel.push_back(std::vector<ZZ>(A[r].begin() + n, A[r].end()));
    // radical lattice rows (order coords): kernel lifts plus q*identity
    std::vector<std::vector<ZZ>> rad_rows = kernel;
    for (int i = 0; i < n; ++i) {
        std::vector<ZZ> row(n, ZZ(0));
        row[i] = q;
        rad_rows.push_back(row);
    }
    auto R = znf::hnf(rad_rows);
    auto Rinv_q = [&]() {
        std::vector<std::vector<QQ>> RQ(n, std::vector<QQ>(n));
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) RQ[i][j] = QQ(R[i][j]);
        return qq_inverse(RQ);
    }();
    // idealizer: x in O with x*R subset of q*R, x = coords mod q
    // constraint rows: for each R basis row u_k and each basis elt e_i:
    // coords of e_i * u_k in R basis, mod q
    std::vector<std::vector<ZZ>> C;  // (n^2) x n matrix, columns = i
    C.assign(n * n, std::vector<ZZ>(n, ZZ(0)));
    for (int i = 0; i < n; ++i) {
        std::vector<QQ> ei(n, QQ(0));
        ei[i] = 1;
        for (int k = 0; k < n; ++k) {
            std::vector<QQ> uk(n);
            for (int c = 0; c < n; ++c) uk[c] = QQ(R[k][c]);
            auto prod = mult_coords_local(ei, uk);  // in order coords
            auto inR = vec_mat(prod, Rinv_q);       // coords over R basis
            for (int c = 0; c < n; ++c) {
                if (denominator(inR[c]) != 1) throw Error("order: radical not an ideal");
                C[k * n + c][i] = ((numerator(inR[c]) % q) + q) % q;
            }
        }
    }
    // kernel mod q of x -> C x (x column vector of size n)
    std::vector<std::vector<ZZ>> B(n, std::vector<ZZ>(n + n, ZZ(0)));
    // transpose trick: solve rows x with x C^T = 0: build [C^T | I]
    std::vector<std::vector<ZZ>> A2(n, std::vector<ZZ>(n * n + n, ZZ(0)));
    for (int i = 0; i < n; ++i) {
        for (int k = 0; k < n * n; ++k) A2[i][k] = C[k][i];
        A2[i][n * n + i] = 1;
    }
    int rank2 = 0;
    for (int col = 0; col < n * n && rank2 < n; ++col) {
        int piv = -1;
        for (int r = rank2; r < n; ++r)
            if (A2[r][col] % q != 0) {
                piv = r;
                break;
            }
        if (piv < 0) continue;
        std::swap(A2[piv], A2[rank2]);
        ZZ inv0 = modinv(A2[rank2][col]);
        for (size_t c = 0; c < A2[rank2].size(); ++c) A2[rank2][c] = A2[rank2][c] * inv0 % q;
        for (int r = 0; r < n; ++r) {
            if (r == rank2) continue;
            ZZ f = A2[r][col] % q;
            if (f.is_zero()) continue;
            for (size_t c = 0; c < A2[r].size(); ++c)
                A2[r][c] = ((A2[r][c] - f * A2[rank2][c]) % q + q) % q;
        }
        ++rank2;
    }
    (void)B;
    std::vector<std::vector<ZZ>> ker2;
    for (int r = rank2; r < n; ++r)
        ker2.push_back(std::vector<ZZ>(A2[r].begin() + n * n, A2[r].end()));
    if (ker2.empty()) return basis;  // q-maximal (idealizer equals O)
    // new order basis: O + (1/q) * span(ker2 over order basis)
    // express in power coords with common denominator
    ZZ D = 1;
    for (const auto& row : basis)
        for (const auto& x : row) D = lcm(D, denominator(x));
    D *= q;
    std::vector<std::vector<ZZ>> rows;
    for (const auto& row : basis) {
        std::vector<ZZ> r(n);
        for (int c = 0; c < n; ++c) r[c] = numerator(row[c] * QQ(D));
        rows.push_back(std::move(r));
    }
    for (const auto& kv : ker2) {
        // element = (1/q) * sum kv_i * w_i in power coords
        std::vector<QQ> pw(n, QQ(0));
        for (int i = 0; i < n; ++i)
            if (!kv[i].is_zero())
                for (int c = 0; c < n; ++c) pw[c] += QQ(kv[i]) * basis[i][c];
        std::vector<ZZ> r(n);
        for (int c = 0; c < n; ++c) {
            QQ v = pw[c] * QQ(D) / QQ(q);
            if (denominator(v) != 1) throw Error("order: enlargement misaligned");
            r[c] = numerator(v);
        }
        rows.push_back(std::move(r));
    }
    auto H = znf::hnf(rows);
    std::vector<std::vector<QQ>> nb(n, std::vector<QQ>(n));
    bool changed = false;
    for (int i = 0; i < n; ++i)
        for (int c = 0; c < n; ++c) {
            nb[i][c] = QQ(H[i][c], D);
            if (nb[i][c] != basis[i][c]) changed = true;
        }
    enlarged = changed;
    return nb;
}

std::mutex g_nf_mutex;
std::map<std::string, NFPtr> g_nf_cache;

std::string field_key(const FieldPtr& F) {
    std::string k;
    for (const auto& c : F->defining.coeffs()) k += c.str() + ",";
    // distinguish selected roots of the same polynomial
    k += "@";
    PrecisionContext c30(30);
    k += std::to_string(F->degree > 1 ? root_index(F->defining, F->gen, c30) : 0);
    return k;
}

}  // namespace

NFPtr maximal_order(const FieldPtr& F) {
    {
        std::scoped_lock lock(g_nf_mutex);
        auto it = g_nf_cache.find(field_key(F));
        if (it != g_nf_cache.end()) return it->second;
    }
    auto K = std::make_shared<NumberField>();
    K->handle = F;
    int n = F->degree;
    K->integral_basis.assign(n, std::vector<QQ>(n, QQ(0)));
    for (int i = 0; i < n; ++i) K->integral_basis[i][i] = 1;
    if (n == 1) {
        K->disc = 1;
        K->r1 = 1;
        K->r2 = 0;
        K->embeddings = {F->gen};
    } else {
        ZZ disc0 = poly_disc(F->defining);
        for (const auto& [q, e] : factor_integer(disc0)) {
            if (e < 2) continue;
            bool enlarged = true;
            while (enlarged) K->integral_basis = p_enlarge_once(F, K->integral_basis, q, enlarged);
        }
        QQ det = qq_det(K->integral_basis);
        QQ idx = QQ(1) / abs(det);
        if (denominator(idx) != 1) throw Error("maximal_order: index not integral");
        K->index = numerator(idx);
        K->disc = disc0 / (K->index * K->index);
        K->r1 = count_real_roots(F->defining);
        K->r2 = (n - K->r1) / 2;
        K->embeddings = roots_cached(F->defining, F->ctx.working_digits());
    }
    // caches
    K->cache = std::make_shared<NumberField::Cache>();
    K->cache->basis_inv = qq_inverse(K->integral_basis);
    K->cache->mult.assign(n, std::vector<std::vector<ZZ>>(n));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j <= i; ++j) {
            auto prod = power_mult(F, K->integral_basis[i], K->integral_basis[j]);
            auto coords = vec_mat(prod, K->cache->basis_inv);
            std::vector<ZZ> z(n);
            for (int c = 0; c < n; ++c) {
                if (denominator(coords[c]) != 1)
                    throw Error("maximal_order: multiplication table not integral");
                z[c] = numerator(coords[c]);
            }
            K->cache->mult[i][j] = z;
            K->cache->mult[j][i] = std::move(z);
        }
    // sanity: 1 lies in the order with integral coordinates
    for (const auto& c : K->to_integral_coords(fe_one(F)))
        if (denominator(c) != 1) throw Error("maximal_order: 1 not integral over basis");
    std::scoped_lock lock(g_nf_mutex);
    g_nf_cache[field_key(F)] = K;
    return K;
}

// ----------------------------------------------------------- ideal machinery

namespace znf {

std::vector<QQ> mult_coords(const NumberField& K, const std::vector<QQ>& a,
                            const std::vector<QQ>& b) {
    int n = K.degree();
    std::vector<QQ> r(n, QQ(0));
    for (int i = 0; i < n; ++i) {
        if (a[i].is_zero()) continue;
        for (int j = 0; j < n; ++j) {
            if (b[j].is_zero()) continue;
            QQ f = a[i] * b[j];
            const auto& t = K.cache->mult[i][j];
            for (int c = 0; c < n; ++c)
                if (!t[c].is_zero()) r[c] += f * QQ(t[c]);
        }
    }
    return r;
}

std::vector<std::vector<ZZ>> ideal_mult(const NumberField& K,
                                        const std::vector<std::vector<ZZ>>& A,
                                        const std::vector<std::vector<ZZ>>& B) {
    int n = K.degree();
    std::vector<std::vector<ZZ>> rows;
    for (const auto& a : A)
        for (const auto& b : B) {
            std::vector<QQ> qa(n), qb(n);
            for (int i = 0; i < n; ++i) {
                qa[i] = QQ(a[i]);
                qb[i] = QQ(b[i]);
            }
            auto prod = mult_coords(K, qa, qb);
            std::vector<ZZ> r(n);
            for (int i = 0; i < n; ++i) r[i] = numerator(prod[i]);
            rows.push_back(std::move(r));
        }
    return hnf(rows);
}

std::pair<std::vector<ZZ>, std::vector<ZZ>> split_one(const NumberField& K,
                                                      const std::vector<std::vector<ZZ>>& A,
                                                      const std::vector<std::vector<ZZ>>& B) {
    int n = K.degree();
    // HNF with transform on the stacked rows
    std::vector<std::vector<ZZ>> rows = A;
    rows.insert(rows.end(), B.begin(), B.end());
    size_t m = rows.size();
    std::vector<std::vector<ZZ>> T(m, std::vector<ZZ>(m, ZZ(0)));
    for (size_t i = 0; i < m; ++i) T[i][i] = 1;
    size_t rpos = 0;
    std::vector<size_t> pivot_rows;
    for (int col = 0; col < n; ++col) {
        while (true) {
            int best = -1, second = -1;
            for (size_t r = rpos; r < m; ++r) {
                if (rows[r][col].is_zero()) continue;
                if (best < 0 || abs(rows[r][col]) < abs(rows[best][col])) {
                    second = best;
                    best = static_cast<int>(r);
                } else if (second < 0 || abs(rows[r][col]) < abs(rows[second][col])) {
                    second = static_cast<int>(r);
                }
            }
            if (best < 0) throw Error("split_one: rank deficient");
            if (second < 0) {
                std::swap(rows[best], rows[rpos]);
                std::swap(T[best], T[rpos]);
                break;
            }
            ZZ q = floor_div(rows[second][col], rows[best][col]);
            for (int c = 0; c < n; ++c) rows[second][c] -= q * rows[best][c];
            for (size_t c = 0; c < m; ++c) T[second][c] -= q * T[best][c];
        }
        if (rows[rpos][col] < 0) {
            for (auto& x : rows[rpos]) x = -x;
            for (auto& x : T[rpos]) x = -x;
        }
        ++rpos;
    }
    // reduce the coordinates of 1 against the triangular rows, tracking coeffs
    std::vector<ZZ> v(n, ZZ(0));
    {
        auto ones = K.to_integral_coords(fe_one(K.handle));
        for (int c = 0; c < n; ++c) v[c] = numerator(ones[c]);
    }
    std::vector<ZZ> onec = v;
    std::vector<ZZ> coeff(m, ZZ(0));
    for (size_t i = 0; i < rpos; ++i) {
        int col = static_cast<int>(i);
        ZZ q = floor_div(v[col], rows[i][col]);
        if (q.is_zero()) continue;
        for (int c = 0; c < n; ++c) v[c] -= q * rows[i][c];
        for (size_t c = 0; c < m; ++c) coeff[c] += q * T[i][c];
    }
    for (const auto& x : v)
        if (!x.is_zero()) throw Error("split_one: ideals not coprime");
    // u = sum over A-part of coeff_j * original rows
    std::vector<ZZ> u(n, ZZ(0));
    for (size_t j = 0; j < A.size(); ++j)
        for (int c = 0; c < n; ++c) u[c] += coeff[j] * A[j][c];
    std::vector<ZZ> w = onec;
    for (int c = 0; c < n; ++c) w[c] -= u[c];
    if (!in_lattice(znf::hnf(B), w)) throw Error("split_one: verification failed");
    return {u, w};
}

}  // namespace znf

// -------------------------------------------------------------- factor_prime

namespace {

// modular row reduce: returns rank and transforms A in place, optionally
// tracking an identity block appended by the caller
int row_reduce_mod(std::vector<std::vector<ZZ>>& A, const ZZ& p, int cols) {
    auto modinv = [&](ZZ a) {
        a %= p;
        if (a < 0) a += p;
        ZZ g = a, x = 1, b = p, x1 = 0;
        while (!b.is_zero()) {
            ZZ t = g / b;
            ZZ g2 = g - t * b, x2 = x - t * x1;
            g = b; x = x1;
            b = g2; x1 = x2;
        }
        ZZ r = x % p;
        if (r < 0) r += p;
        return r;
    };
    int rank = 0;
    int rows = static_cast<int>(A.size());
    for (int col = 0; col < cols && rank < rows; ++col) {
        int piv = -1;
        for (int r = rank; r < rows; ++r)
            if (A[r][col] % p != 0) {
                piv = r;
                break;
            }
        if (piv < 0) continue;
        std::swap(A[piv], A[rank]);
        ZZ inv = modinv(A[rank][col]);
        for (auto& x : A[rank]) x = ((x * inv) % p + p) % p;
        for (int r = 0; r < rows; ++r) {
            if (r == rank) continue;
            ZZ f = A[r][col] % p;
            if (f.is_zero()) continue;
            for (size_t c = 0; c < A[r].size(); ++c)
                A[r][c] = ((A[r][c] - f * A[rank][c]) % p + p) % p;
        }
        ++rank;
    }
    return rank;
}

FieldElem elem_from_int_coords(const NumberField& K, const std::vector<ZZ>& c) {
    std::vector<QQ> q(c.size());
    for (size_t i = 0; i < c.size(); ++i) q[i] = QQ(c[i]);
    return K.from_integral_coords(q);
}

FieldElem compute_val_elem(const NFPtr& K, const ZZ& p,
                           const std::vector<std::vector<ZZ>>& Phnf) {
    int n = K->degree();
    // t in O with t*P in pO, t not in pO: kernel mod p of t -> coords(t*u_k)
    std::vector<std::vector<ZZ>> A(n, std::vector<ZZ>(n * n + n, ZZ(0)));
    for (int i = 0; i < n; ++i) {
        std::vector<QQ> ei(n, QQ(0));
        ei[i] = 1;
        for (int k = 0; k < n; ++k) {
            std::vector<QQ> uk(n);
            for (int c = 0; c < n; ++c) uk[c] = QQ(Phnf[k][c]);
            auto prod = znf::mult_coords(*K, ei, uk);
            for (int c = 0; c < n; ++c)
                A[i][k * n + c] = ((numerator(prod[c]) % p) + p) % p;
        }
        A[i][n * n + i] = 1;
    }
    int rank = row_reduce_mod(A, p, n * n);
    if (rank >= n) throw Error("val_elem: trivial kernel");
    std::vector<ZZ> t(A[rank].begin() + n * n, A[rank].end());
    return elem_from_int_coords(*K, t);
}

long val_int_coords(const NumberField& K, const PrimeIdeal& P, std::vector<QQ> y) {
    // y integral coords of an element of O
    std::vector<QQ> t = K.to_integral_coords(P.val_elem);
    long v = 0;
    QQ pq{P.p};
    while (true) {
        auto z = znf::mult_coords(K, y, t);
        bool divisible = true;
        for (auto& c : z) {
            c /= pq;
            if (denominator(c) != 1) {
                divisible = false;
                break;
            }
        }
        if (!divisible) return v;
        y = std::move(z);
        ++v;
        if (v > 10000) throw Error("valuation: runaway (x = 0?)");
    }
}

// two-element representation search
FieldElem find_second_generator(const NFPtr& K, const ZZ& p,
                                const std::vector<std::vector<ZZ>>& Phnf) {
    int n = K->degree();
    auto try_beta = [&](const std::vector<ZZ>& coords) -> bool {
        std::vector<std::vector<ZZ>> rows;
        for (int i = 0; i < n; ++i) {
            std::vector<ZZ> r(n, ZZ(0));
            r[i] = p;
            rows.push_back(std::move(r));
        }
        // beta * basis elements
        std::vector<QQ> b(n);
        for (int i = 0; i < n; ++i) b[i] = QQ(coords[i]);
        for (int i = 0; i < n; ++i) {
            std::vector<QQ> ei(n, QQ(0));
            ei[i] = 1;
            auto prod = znf::mult_coords(*K, b, ei);
            std::vector<ZZ> r(n);
            for (int c = 0; c < n; ++c) r[c] = numerator(prod[c]);
            rows.push_back(std::move(r));
        }
        return znf::hnf(rows) == Phnf;
    };
    // candidates: HNF rows, rows + p, pairwise sums
    std::vector<std::vector<ZZ>> cands;
    for (const auto& r : Phnf) cands.push_back(r);
    for (const auto& r : Phnf) {
        auto c = r;
        c[0] += p;
        cands.push_back(c);
    }
    for (size_t i = 0; i < Phnf.size(); ++i)
        for (size_t j = i + 1; j < Phnf.size(); ++j) {
            std::vector<ZZ> c(n);
            for (int k = 0; k < n; ++k) c[k] = Phnf[i][k] + Phnf[j][k];
            cands.push_back(std::move(c));
        }
    uint64_t seed = 0xbe7a;
    for (int extra = 0; extra < 60; ++extra) {
        std::vector<ZZ> c(n, ZZ(0));
        for (const auto& r : Phnf) {
            uint64_t mix = seed += 0x9e3779b97f4a7c15ULL;
            mix ^= mix >> 31;
            long coefc = static_cast<long>(mix % 5);
            for (int k = 0; k < n; ++k) c[k] += coefc * r[k];
        }
        cands.push_back(std::move(c));
    }
    for (const auto& c : cands)
        if (try_beta(c)) return elem_from_int_coords(*K, c);
    throw Error("factor_prime: no two-element representation found");
}

std::vector<PrimeIdeal> factor_prime_impl(const NFPtr& K, const ZZ& p) {
    int n = K->degree();
    const FieldPtr& F = K->handle;
    std::vector<PrimeIdeal> out;
    if (n == 1) {
        PrimeIdeal P;
        P.p = p;
        P.e = P.f = 1;
        P.field = K;
        P.beta = fe_from_q(F, QQ(p));
        P.hnf = {{p}};
        P.val_elem = fe_one(F);
        return {P};
    }
    if (p % K->index != 0 || K->index == 1) {
        // good prime: factor the defining polynomial mod p
        if (p > ZZ(int64_t(1) << 62)) throw Error("factor_prime: prime too large");
        fp::Fp Fq{static_cast<uint64_t>(p)};
        uint64_t seed = 0x5eed1;
        auto facs = fp::factor_monic(Fq, fp::from_intpoly(F->defining, Fq.p), seed);
        for (const auto& [g, e] : facs) {
            PrimeIdeal P;
            P.p = p;
            P.e = e;
            P.f = fp::deg(g);
            P.field = K;
            // beta = g(alpha) with symmetric lifts
            std::vector<QQ> bc(n, QQ(0));
            for (size_t i = 0; i < g.size(); ++i) {
                ZZ c(g[i]);
                if (2 * c > p) c -= p;
                bc[i] = QQ(c);
            }
            P.beta = FieldElem{F, bc};
            std::vector<std::vector<ZZ>> rows;
            for (int i = 0; i < n; ++i) {
                std::vector<ZZ> r(n, ZZ(0));
                r[i] = p;
                rows.push_back(std::move(r));
            }
            auto bcoords = K->to_integral_coords(P.beta);
            for (int i = 0; i < n; ++i) {
                std::vector<QQ> ei(n, QQ(0));
                ei[i] = 1;
                auto prod = znf::mult_coords(*K, bcoords, ei);
                std::vector<ZZ> r(n);
                bool ok = true;
                for (int c = 0; c < n; ++c) {
                    if (denominator(prod[c]) != 1) ok = false;
                    else r[c] = numerator(prod[c]);
                }
                if (!ok) throw Error("factor_prime: beta not integral");
                rows.push_back(std::move(r));
            }
            P.hnf = znf::hnf(rows);
            P.val_elem = compute_val_elem(K, p, P.hnf);
            out.push_back(std::move(P));
        }
    } else {
        // index prime: split O/pO (Buchmann-Lenstra style)
        if (p > ZZ(1 << 30)) throw Error("factor_prime: index prime too large");
        fp::Fp Fq{static_cast<uint64_t>(p)};
        // Frobenius on O/pO to get the radical
        ZZ qs = p;
        while (qs < n) qs *= p;
        std::vector<std::vector<ZZ>> frob(n);
        auto ones_q = K->to_integral_coords(fe_one(F));
        for (int i = 0; i < n; ++i) {
            std::vector<QQ> acc = ones_q, base(n, QQ(0));
            base[i] = 1;
            ZZ ex = qs;
            while (ex > 0) {
                if (bit_test(ex, 0)) {
                    acc = znf::mult_coords(*K, acc, base);
                    for (auto& c : acc) c = QQ(((numerator(c) % p) + p) % p);
                }
                ex >>= 1;
                if (ex > 0) {
                    base = znf::mult_coords(*K, base, base);
                    for (auto& c : base) c = QQ(((numerator(c) % p) + p) % p);
                }
            }
            std::vector<ZZ> row(n);
            for (int c = 0; c < n; ++c) row[c] = numerator(acc[c]);
            frob[i] = std::move(row);
        }
        std::vector<std::vector<ZZ>> A(n, std::vector<ZZ>(2 * n, ZZ(0)));
        for (int i = 0; i < n; ++i) {
            for (int j = 0; j < n; ++j) A[i][j] = frob[i][j];
            A[i][n + i] = 1;
        }
        int rank = row_reduce_mod(A, p, n);
        std::vector<std::vector<ZZ>> radical;  // basis of R mod p
        for (int r = rank; r < n; ++r)
            radical.push_back(std::vector<ZZ>(A[r].begin() + n, A[r].end()));
        // complement coordinates: row reduce radical to find pivot columns
        std::vector<std::vector<ZZ>> rr = radical;
        int rrank = row_reduce_mod(rr, p, n);
        std::vector<bool> is_pivot(n, false);
        {
            int rrow = 0;
            for (int col = 0; col < n && rrow < rrank; ++col) {
                if (rr[rrow][col] % p != 0) {
                    is_pivot[col] = true;
                    ++rrow;
                }
            }
        }
        // projection A -> complement along radical: subtract radical combos to
        // zero the pivot columns
        auto project = [&](std::vector<ZZ> v) {
            int rrow = 0;
            for (int col = 0; col < n && rrow < rrank; ++col) {
                if (!is_pivot[col]) continue;
                ZZ f = v[col] % p;
                if (!f.is_zero())
                    for (int c = 0; c < n; ++c) v[c] = ((v[c] - f * rr[rrow][c]) % p + p) % p;
                ++rrow;
            }
            for (auto& x : v) x = ((x % p) + p) % p;
            return v;
        };
        auto multB = [&](const std::vector<ZZ>& x, const std::vector<ZZ>& y) {
            std::vector<QQ> qx(n), qy(n);
            for (int i = 0; i < n; ++i) {
                qx[i] = QQ(x[i]);
                qy[i] = QQ(y[i]);
            }
            auto prod = znf::mult_coords(*K, qx, qy);
            std::vector<ZZ> r(n);
            for (int i = 0; i < n; ++i) r[i] = ((numerator(prod[i]) % p) + p) % p;
            return project(r);
        };
        // B = A/R basis: unit vectors at non-pivot columns
        std::vector<std::vector<ZZ>> Bbasis;
        for (int c = 0; c < n; ++c)
            if (!is_pivot[c]) {
                std::vector<ZZ> v(n, ZZ(0));
                v[c] = 1;
                Bbasis.push_back(project(v));
            }
        std::vector<ZZ> unitB;
        {
            auto ones_q2 = K->to_integral_coords(fe_one(F));
            std::vector<ZZ> one(n);
            for (int c = 0; c < n; ++c) one[c] = ((numerator(ones_q2[c]) % p) + p) % p;
            unitB = project(one);
        }
        // split the etale algebra into fields
        struct Comp {
            std::vector<std::vector<ZZ>> basis;
            std::vector<ZZ> unit;
        };
        std::vector<Comp> done, work{{Bbasis, unitB}};
        uint64_t seed = 0xe7a1e;
        auto minpoly_in = [&](const Comp& C, const std::vector<ZZ>& a) {
            // vectors unit, a, a^2, ... until dependent; returns monic coeffs
            std::vector<std::vector<ZZ>> pows{C.unit};
            std::vector<ZZ> cur = C.unit;
            while (true) {
                cur = multB(cur, a);
                // solve: is cur in span(pows)? row reduce [pows; cur]
                std::vector<std::vector<ZZ>> M;
                for (const auto& r : pows) M.push_back(r);
                M.push_back(cur);
                std::vector<std::vector<ZZ>> M2 = M;
                int rk = row_reduce_mod(M2, p, n);
                if (rk == static_cast<int>(pows.size())) {
                    // dependent: solve coefficients via augmented system
                    std::vector<std::vector<ZZ>> S;
                    for (size_t i = 0; i < pows.size(); ++i) {
                        std::vector<ZZ> row = pows[i];
                        for (size_t j = 0; j < pows.size(); ++j)
                            row.push_back(i == j ? 1 : 0);
                        S.push_back(std::move(row));
                    }
                    // reduce and express cur
                    int rk2 = row_reduce_mod(S, p, n);
                    (void)rk2;
                    std::vector<ZZ> v = cur;
                    std::vector<ZZ> coef(pows.size(), ZZ(0));
                    int srow = 0;
                    for (int col = 0; col < n && srow < static_cast<int>(pows.size()); ++col) {
                        if (S[srow][col] % p == 0) continue;
                        ZZ f = v[col] % p;
                        if (!f.is_zero()) {
                            for (int c = 0; c < n; ++c)
                                v[c] = ((v[c] - f * S[srow][c]) % p + p) % p;
                            for (size_t c = 0; c < pows.size(); ++c)
                                coef[c] = ((coef[c] + f * S[srow][n + c]) % p + p) % p;
                        }
                        ++srow;
                    }
                    for (const auto& x : v)
                        if (!x.is_zero()) throw Error("minpoly_in: inconsistent dependence");
                    fp::FpPoly mu(pows.size() + 1, 0);
                    mu[pows.size()] = 1;
                    for (size_t c = 0; c < pows.size(); ++c)
                        mu[c] = static_cast<uint64_t>(((-coef[c] % p) + p) % p);
                    fp::norm(mu);
                    return mu;
                }
                pows.push_back(cur);
            }
        };
        while (!work.empty()) {
            Comp C = work.back();
            work.pop_back();
            if (C.basis.size() == 1) {
                done.push_back(std::move(C));
                continue;
            }
            bool split = false;
            for (int trial = 0; trial < 80 && !split; ++trial) {
                std::vector<ZZ> a(n, ZZ(0));
                if (trial < static_cast<int>(C.basis.size())) {
                    a = C.basis[trial];
                } else {
                    for (const auto& bb : C.basis) {
                        seed += 0x9e3779b97f4a7c15ULL;
                        uint64_t mix = seed ^ (seed >> 27);
                        ZZ coef = ZZ(mix % static_cast<uint64_t>(p));
                        for (int c = 0; c < n; ++c) a[c] = (a[c] + coef * bb[c]) % p;
                    }
                }
                fp::FpPoly mu = minpoly_in(C, a);
                if (fp::deg(mu) < 1) continue;
                uint64_t s2 = seed;
                auto facs = fp::factor_monic(Fq, mu, s2);
                if (facs.size() == 1 && facs[0].second == 1) {
                    if (fp::deg(facs[0].first) == static_cast<int>(C.basis.size())) {
                        done.push_back(C);
                        split = true;  // it's a field
                    }
                    continue;
                }
                // build idempotent from the first factor
                fp::FpPoly m1 = facs[0].first;
                for (int rep = 1; rep < facs[0].second; ++rep) m1 = fp::mul(Fq, m1, facs[0].first);
                fp::FpPoly rest = fp::divexact(Fq, mu, m1);
                // u*m1 + w*rest = 1
                // poly xgcd over Fp
                fp::FpPoly r0 = m1, r1 = rest, s0{1}, s1{}, t0{}, t1{1};
                while (!r1.empty()) {
                    fp::FpPoly q = fp::divexact(Fq, r0, r1);
                    fp::FpPoly r2 = fp::rem(Fq, r0, r1);
                    auto comb = [&](const fp::FpPoly& a0, const fp::FpPoly& a1) {
                        fp::FpPoly qa = fp::mul(Fq, q, a1);
                        fp::FpPoly res = a0;
                        res.resize(std::max(res.size(), qa.size()), 0);
                        for (size_t k = 0; k < qa.size(); ++k) res[k] = Fq.sub(res[k], qa[k]);
                        fp::norm(res);
                        return res;
                    };
                    auto s2b = comb(s0, s1), t2b = comb(t0, t1);
                    r0 = r1; r1 = r2;
                    s0 = s1; s1 = s2b;
                    t0 = t1; t1 = t2b;
                }
                if (fp::deg(r0) != 0) continue;
                uint64_t inv = Fq.inv(r0[0]);
                for (auto& c : t0) c = Fq.mul(c, inv);
                // e = t0(a) * rest(a): evaluate polynomials at a within C
                auto evalpoly = [&](const fp::FpPoly& poly) {
                    std::vector<ZZ> acc(n, ZZ(0));
                    for (int i = fp::deg(poly); i >= 0; --i) {
                        acc = multB(acc, a);
                        for (int c = 0; c < n; ++c)
                            acc[c] = (acc[c] + ZZ(poly[i]) * C.unit[c]) % p;
                    }
                    return acc;
                };
                std::vector<ZZ> e = multB(evalpoly(t0), evalpoly(rest));
                // idempotent check
                auto e2 = multB(e, e);
                if (e2 != e) continue;
                bool zero = true, isunit = true;
                for (int c = 0; c < n; ++c) {
                    if (!e[c].is_zero()) zero = false;
                    if (e[c] != C.unit[c]) isunit = false;
                }
                if (zero || isunit) continue;
                // split C = eC + (1-e)C
                std::vector<ZZ> eneg(n);
                for (int c = 0; c < n; ++c) eneg[c] = ((C.unit[c] - e[c]) % p + p) % p;
                auto span_part = [&](const std::vector<ZZ>& idem) {
                    std::vector<std::vector<ZZ>> vs;
                    for (const auto& bb : C.basis) vs.push_back(multB(idem, bb));
                    int rk = row_reduce_mod(vs, p, n);
                    vs.resize(rk);
                    return vs;
                };
                Comp C1{span_part(e), e}, C2{span_part(eneg), eneg};
                if (C1.basis.empty() || C2.basis.empty()) continue;
                work.push_back(std::move(C1));
                work.push_back(std::move(C2));
                split = true;
            }
            if (!split) throw Error("factor_prime: could not split etale algebra");
        }
        // build the prime ideals
        for (size_t i = 0; i < done.size(); ++i) {
            std::vector<std::vector<ZZ>> rows;
            for (int k = 0; k < n; ++k) {
                std::vector<ZZ> r(n, ZZ(0));
                r[k] = p;
                rows.push_back(std::move(r));
            }
            for (const auto& rv : radical) rows.push_back(rv);
            for (size_t j = 0; j < done.size(); ++j) {
                if (j == i) continue;
                for (const auto& bv : done[j].basis) rows.push_back(bv);
            }
            PrimeIdeal P;
            P.p = p;
            P.f = static_cast<int>(done[i].basis.size());
            P.field = K;
            P.hnf = znf::hnf(rows);
            P.val_elem = compute_val_elem(K, p, P.hnf);
            P.beta = find_second_generator(K, p, P.hnf);
            // e via valuation of p
            auto pc = K->to_integral_coords(fe_from_q(F, QQ(p)));
            P.e = static_cast<int>(val_int_coords(*K, P, pc));
            out.push_back(std::move(P));
        }
    }
    std::sort(out.begin(), out.end());
    int total = 0;
    for (const auto& P : out) total += P.e * P.f;
    if (total != n) throw Error("factor_prime: sum e_i f_i != degree");
    return out;
}

}  // namespace

std::vector<PrimeIdeal> factor_prime(const NFPtr& K, const ZZ& p) {
    if (!is_probable_prime(p)) throw Error("factor_prime: composite modulus");
    {
        std::scoped_lock lock(K->cache->mu);
        auto it = K->cache->factorizations.find(p.str());
        if (it != K->cache->factorizations.end()) return it->second;
    }
    auto out = factor_prime_impl(K, p);
    std::scoped_lock lock(K->cache->mu);
    K->cache->factorizations[p.str()] = out;
    return out;
}

long valuation(const PrimeIdeal& P, const FieldElem& x) {
    if (x.is_zero()) throw Error("valuation: x = 0");
    const NumberField& K = *P.field;
    auto coords = K.to_integral_coords(x);
    ZZ den = 1;
    for (const auto& c : coords) den = lcm(den, denominator(c));
    // v_P(den) = e * v_p(den); the prime-to-p part of den has valuation 0
    long dv = 0;
    if (den != 1) {
        ZZ d = den;
        while (d % P.p == 0) {
            d /= P.p;
            ++dv;
        }
        for (auto& c : coords) c *= QQ(den);
    }
    long v = val_int_coords(K, P, coords);
    return v - static_cast<long>(P.e) * dv;
}

ResidueSystem::ResidueSystem(const PrimeIdeal& P, int m) : P_(P), m_(m) {
    if (m < 1) throw Error("ResidueSystem: m >= 1");
    const NumberField& K = *P.field;
    hnf_ = P.hnf;
    for (int i = 1; i < m; ++i) hnf_ = znf::ideal_mult(K, hnf_, P.hnf);
    size_ = 1;
    for (size_t i = 0; i < hnf_.size(); ++i) size_ *= hnf_[i][i];
    if (size_ != pow(P.p, static_cast<unsigned>(P.f * m)))
        throw Error("ResidueSystem: wrong index");
}

FieldElem ResidueSystem::rep(ZZ index) const {
    const NumberField& K = *P_.field;
    int n = K.degree();
    std::vector<QQ> c(n, QQ(0));
    for (int i = 0; i < n; ++i) {
        ZZ d = hnf_[i][i];
        c[i] = QQ(index % d);
        index /= d;
    }
    if (!index.is_zero()) throw Error("ResidueSystem: index out of range");
    return K.from_integral_coords(c);
}

FieldElem ResidueSystem::reduce(const FieldElem& x) const {
    const NumberField& K = *P_.field;
    auto coords = K.to_integral_coords(x);
    std::vector<ZZ> v(coords.size());
    for (size_t i = 0; i < coords.size(); ++i) {
        if (denominator(coords[i]) != 1) throw Error("ResidueSystem: non-integral element");
        v[i] = numerator(coords[i]);
    }
    v = znf::reduce(hnf_, v);
    std::vector<QQ> q(v.size());
    for (size_t i = 0; i < v.size(); ++i) q[i] = QQ(v[i]);
    return K.from_integral_coords(q);
}

Signature signature_and_embeddings(const NFPtr& K) {
    Signature s;
    s.r1 = K->r1;
    s.r2 = K->r2;
    s.embeddings = K->embeddings;
    s.totally_real = K->r2 == 0;
    s.one_complex_place = K->r2 == 1;
    return s;
}

// -------------------------------------------------------------------- polred

PolredResult polred(const FieldPtr& F) {
    PolredResult identity;
    identity.field = F;
    identity.old_gen_in_new = fe_gen(F);
    identity.new_gen_in_old = fe_gen(F);
    if (F->degree == 1) return identity;
    NFPtr K = maximal_order(F);
    int n = F->degree;
    int digits = F->ctx.working_digits();
    PrecisionScope scope(digits);
    const auto& roots = roots_cached(F->defining, digits);
    // Minkowski rows for the integral basis
    BigFloat scale = pow10(std::min(digits - 8, 40));
    BigFloat sqrt2 = sqrt(BigFloat(2));
    IntLattice L;
    for (int i = 0; i < n; ++i) {
        FieldElem w = K->from_integral_coords([&] {
            std::vector<QQ> c(n, QQ(0));
            c[i] = 1;
            return c;
        }());
        std::vector<ZZ> row;
        for (const auto& r : roots) {
            if (r.im < 0) continue;  // one per conjugate pair
            BigComplex v = fe_eval_at(w, r);
            if (r.im.is_zero()) {
                row.push_back(boost::multiprecision::round(v.re * scale).convert_to<ZZ>());
            } else {
                row.push_back(boost::multiprecision::round(v.re * sqrt2 * scale).convert_to<ZZ>());
                row.push_back(boost::multiprecision::round(v.im * sqrt2 * scale).convert_to<ZZ>());
            }
        }
        L.basis.push_back(std::move(row));
    }
    IntLattice U;
    lll_reduce(L, QQ(99, 100), &U);
    // candidate generators: reduced basis vectors and small sums
    std::vector<std::vector<ZZ>> cands = U.basis;
    for (int i = 0; i < std::min(3, n); ++i)
        for (int j = i + 1; j < std::min(3, n); ++j) {
            std::vector<ZZ> s(n), d(n);
            for (int c = 0; c < n; ++c) {
                s[c] = U.basis[i][c] + U.basis[j][c];
                d[c] = U.basis[i][c] - U.basis[j][c];
            }
            cands.push_back(std::move(s));
            cands.push_back(std::move(d));
        }
    ZZ best_score = 0;
    for (const auto& c : F->defining.coeffs()) best_score = std::max(best_score, ZZ(abs(c)));
    IntPoly best_poly = F->defining;
    std::optional<FieldElem> best_elem;
    for (const auto& cand : cands) {
        std::vector<QQ> ic(n);
        for (int i = 0; i < n; ++i) ic[i] = QQ(cand[i]);
        FieldElem g = K->from_integral_coords(ic);
        IntPoly mu = fe_minpoly(g);
        if (mu.degree() != n) continue;
        ZZ score = 0;
        for (const auto& c : mu.coeffs()) score = std::max(score, ZZ(abs(c)));
        if (score < best_score ||
            (score == best_score && !best_elem && mu.coeffs() < best_poly.coeffs())) {
            best_score = score;
            best_poly = mu;
            best_elem = g;
        }
    }
    if (!best_elem) return identity;
    // build the new presentation; selected root = value of the generator at
    // the old selected root (the distinguished embedding is preserved)
    BigComplex groot = fe_eval(*best_elem, digits);
    FieldPtr Fnew = FieldHandle::make(best_poly, groot, F->ctx);
    // express old gen in powers of the new generator: solve x * M = e_1
    std::vector<std::vector<QQ>> M(n, std::vector<QQ>(n, QQ(0)));
    FieldElem pw = fe_one(F);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) M[i][j] = j < static_cast<int>(pw.coeffs.size()) ? pw.coeffs[j] : QQ(0);
        pw = fe_mul(pw, *best_elem);
    }
    auto Minv = qq_inverse(M);
    std::vector<QQ> target(n, QQ(0));
    target[1] = 1;  // coords of the old generator alpha
    auto x = vec_mat(target, Minv);
    PolredResult res;
    res.field = Fnew;
    res.old_gen_in_new = FieldElem{Fnew, std::vector<QQ>(x.begin(), x.end())};
    res.new_gen_in_old = *best_elem;
    // exact witness: defining(old) vanishes at old_gen_in_new
    FieldElem check = fe_zero(Fnew);
    for (int i = F->defining.degree(); i >= 0; --i) {
        check = fe_mul(check, res.old_gen_in_new);
        check = fe_add(check, fe_from_q(Fnew, QQ(F->defining[i])));
    }
    if (!check.is_zero()) throw Error("polred: isomorphism witness failed");
    return res;
}

}  // namespace reflekt
