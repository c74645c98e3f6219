#include "procoh/padic_groups.hpp"

#include <cassert>

namespace procoh {

namespace {
long long pow_ll(long long b, int e) {
    long long r = 1;
    for (int i = 0; i < e; ++i) r *= b;
    return r;
}

long long inv_mod(long long a, long long mod, long long p) {
    // a must be a unit mod p; lift by Fermat then Hensel via exponentiation:
    // the unit group of Z/p^m has order p^{m-1}(p-1), so a^(order-1) works.
    long long order = (mod / p) * (p - 1);
    long long e = order - 1;
    long long r = 1, base = ((a % mod) + mod) % mod;
    for (; e > 0; e >>= 1) {
        if (e & 1) r = (r * base) % mod;
        base = (base * base) % mod;
    }
    return r;
}
}  // namespace

PrecisionMatrix PrecisionMatrix::from_ints(
    int n, long long p, int m, const std::vector<std::vector<long long>>& rows) {
    PrecisionMatrix g;
    g.n = n;
    g.p = p;
    g.m = m;
    g.entries.assign(n * n, 0);
    long long mod = g.mod();
    assert(static_cast<int>(rows.size()) == n);
    for (int i = 0; i < n; ++i) {
        assert(static_cast<int>(rows[i].size()) == n);
        for (int j = 0; j < n; ++j)
            g.at(i, j) = ((rows[i][j] % mod) + mod) % mod;
    }
    return g;
}

PrecisionMatrix PrecisionMatrix::identity(int n, long long p, int m) {
    PrecisionMatrix g;
    g.n = n;
    g.p = p;
    g.m = m;
    g.entries.assign(n * n, 0);
    for (int i = 0; i < n; ++i) g.at(i, i) = 1;
    return g;
}

long long PrecisionMatrix::mod() const { return pow_ll(p, m); }

PrecisionMatrix PrecisionMatrix::operator*(const PrecisionMatrix& o) const {
    assert(n == o.n && p == o.p && m == o.m);
    PrecisionMatrix r;
    r.n = n;
    r.p = p;
    r.m = m;
    r.entries.assign(n * n, 0);
    long long mod = r.mod();
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            long long acc = 0;
            for (int k = 0; k < n; ++k)
                acc = (acc + at(i, k) * o.at(k, j)) % mod;
            r.at(i, j) = acc;
        }
    return r;
}

bool PrecisionMatrix::invertible() const {
    // Row-reduce a copy mod p.
    std::vector<long long> a = entries;
    long long q = p;
    int rank = 0;
    for (int col = 0; col < n && rank < n; ++col) {
        int piv = -1;
        for (int r = rank; r < n; ++r)
            if (a[r * n + col] % q != 0) { piv = r; break; }
        if (piv < 0) continue;
        for (int j = 0; j < n; ++j) std::swap(a[rank * n + j], a[piv * n + j]);
        long long inv = inv_mod(a[rank * n + col], q, q);
        for (int j = 0; j < n; ++j) a[rank * n + j] = a[rank * n + j] * inv % q;
        for (int r = 0; r < n; ++r) {
            if (r == rank) continue;
            long long f = a[r * n + col] % q;
            for (int j = 0; j < n; ++j)
                a[r * n + j] = ((a[r * n + j] - f * a[rank * n + j]) % q + q) % q;
        }
        ++rank;
    }
    return rank == n;
}

PrecisionMatrix PrecisionMatrix::inverse() const {
    assert(invertible());
    long long mod = this->mod();
    // Augmented elimination; every pivot is a unit mod p.
    std::vector<long long> a = entries;
    PrecisionMatrix inv = identity(n, p, m);
    for (int col = 0; col < n; ++col) {
        int piv = -1;
        for (int r = col; r < n; ++r)
            if (a[r * n + col] % p != 0) { piv = r; break; }
        assert(piv >= 0);
        for (int j = 0; j < n; ++j) {
            std::swap(a[col * n + j], a[piv * n + j]);
            std::swap(inv.at(col, j), inv.at(piv, j));
        }
        long long f = inv_mod(a[col * n + col], mod, p);
        for (int j = 0; j < n; ++j) {
            a[col * n + j] = a[col * n + j] * f % mod;
            inv.at(col, j) = inv.at(col, j) * f % mod;
        }
        for (int r = 0; r < n; ++r) {
            if (r == col) continue;
            long long g = a[r * n + col];
            if (g == 0) continue;
            for (int j = 0; j < n; ++j) {
                a[r * n + j] = ((a[r * n + j] - g * a[col * n + j]) % mod + mod) % mod;
                inv.at(r, j) = ((inv.at(r, j) - g * inv.at(col, j)) % mod + mod) % mod;
            }
        }
    }
    return inv;
}

PrecisionMatrix PrecisionMatrix::truncated(int m_new) const {
    assert(m_new <= m);
    PrecisionMatrix r;
    r.n = n;
    r.p = p;
    r.m = m_new;
    r.entries = entries;
    long long mod = r.mod();
    for (long long& e : r.entries) e %= mod;
    return r;
}

FpMat adjoint_on_layer(const PrecisionMatrix& g, const LayerSpace& layer) {
    assert(g.n == layer.n && g.p == layer.p);
    assert(g.m >= layer.level + 1 && "insufficient precision");
    assert(g.invertible());
    PrecisionMatrix gi = g.inverse();
    int n = g.n;
    long long p = g.p;
    FpMat out(n * n, n * n);
    for (int bi = 0; bi < n; ++bi)
        for (int bj = 0; bj < n; ++bj) {
            // Column for the matrix unit E_{bi,bj}: g E g^{-1} = (col bi of g)
            // times (row bj of g^{-1}).
            int col = bi * n + bj;
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j)
                    out(i * n + j, col) = Fp(g.at(i, bi) * gi.at(bj, j), p);
        }
    return out;
}

LayerQuotientAction layer_quotient_action(const PrecisionMatrix& g,
                                          int from_level, int to_level) {
    assert(1 <= from_level && from_level < to_level);
    assert(to_level <= g.m && "insufficient precision");
    assert(g.invertible());
    PrecisionMatrix gi = g.inverse();
    int n = g.n;
    LayerQuotientAction out;
    out.n = n;
    out.p = g.p;
    out.exponent = to_level - from_level;
    long long mod = 1;
    for (int i = 0; i < out.exponent; ++i) mod *= g.p;
    out.action.assign(n * n * n * n, 0);
    for (int bi = 0; bi < n; ++bi)
        for (int bj = 0; bj < n; ++bj) {
            int col = bi * n + bj;
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j)
                    out.action[(i * n + j) * n * n + col] =
                        g.at(i, bi) * gi.at(bj, j) % mod;
        }
    return out;
}

}  // namespace procoh
