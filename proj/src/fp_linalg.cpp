#include "procoh/fp_linalg.hpp"

#include <cassert>

namespace procoh {

FpMat attach(FpMat m, long long p) {
    for (Eigen::Index i = 0; i < m.rows(); ++i)
        for (Eigen::Index j = 0; j < m.cols(); ++j)
            m(i, j) = m(i, j).attach(p);
    return m;
}

FpVec attach(FpVec v, long long p) {
    for (Eigen::Index i = 0; i < v.size(); ++i) v(i) = v(i).attach(p);
    return v;
}

long long modulus_of(const FpMat& m) {
    for (Eigen::Index i = 0; i < m.rows(); ++i)
        for (Eigen::Index j = 0; j < m.cols(); ++j)
            if (m(i, j).attached()) return m(i, j).modulus();
    assert(false && "matrix has no attached modulus");
    return 0;
}

FpMat make_mat(long long p, const std::vector<std::vector<long long>>& rows) {
    int r = static_cast<int>(rows.size());
    int c = r ? static_cast<int>(rows[0].size()) : 0;
    FpMat m(r, c);
    for (int i = 0; i < r; ++i) {
        assert(static_cast<int>(rows[i].size()) == c);
        for (int j = 0; j < c; ++j) m(i, j) = Fp(rows[i][j], p);
    }
    return m;
}

FpVec make_vec(long long p, const std::vector<long long>& entries) {
    FpVec v(static_cast<int>(entries.size()));
    for (size_t i = 0; i < entries.size(); ++i) v(static_cast<int>(i)) = Fp(entries[i], p);
    return v;
}

RrefResult rref(const FpMat& input) {
    RrefResult out;
    if (input.size() == 0) {
        out.mat = input;
        return out;
    }
    long long p = modulus_of(input);
    FpMat m = attach(input, p);
    int rows = static_cast<int>(m.rows());
    int cols = static_cast<int>(m.cols());
    int lead = 0;
    for (int col = 0; col < cols && lead < rows; ++col) {
        int pivot = -1;
        for (int r = lead; r < rows; ++r)
            if (!m(r, col).is_zero()) { pivot = r; break; }
        if (pivot < 0) continue;
        m.row(lead).swap(m.row(pivot));
        Fp inv = m(lead, col).inverse();
        for (int j = 0; j < cols; ++j) m(lead, j) = m(lead, j) * inv;
        for (int r = 0; r < rows; ++r) {
            if (r == lead || m(r, col).is_zero()) continue;
            Fp f = m(r, col);
            for (int j = 0; j < cols; ++j) m(r, j) = m(r, j) - f * m(lead, j);
        }
        out.pivots.push_back(col);
        ++lead;
    }
    out.mat = m;
    out.rank = static_cast<int>(out.pivots.size());
    return out;
}

Subspace Subspace::zero(int ambient, long long p) {
    Subspace s;
    s.ambient = ambient;
    s.p = p;
    s.basis = FpMat(0, ambient);
    return s;
}

Subspace Subspace::full(int ambient, long long p) {
    Subspace s;
    s.ambient = ambient;
    s.p = p;
    s.basis = FpMat(ambient, ambient);
    for (int i = 0; i < ambient; ++i)
        for (int j = 0; j < ambient; ++j)
            s.basis(i, j) = Fp(i == j ? 1 : 0, p);
    return s;
}

Subspace Subspace::span(const FpMat& rows, int ambient, long long p) {
    Subspace s;
    s.ambient = ambient;
    s.p = p;
    if (rows.rows() == 0) {
        s.basis = FpMat(0, ambient);
        return s;
    }
    assert(rows.cols() == ambient);
    RrefResult r = rref(attach(rows, p));
    s.basis = r.mat.topRows(r.rank);
    return s;
}

bool Subspace::contains(const FpVec& v) const {
    FpVec red = reduce(v);
    for (Eigen::Index i = 0; i < red.size(); ++i)
        if (!red(i).is_zero()) return false;
    return true;
}

bool Subspace::contains(const Subspace& other) const {
    for (int i = 0; i < other.dim(); ++i)
        if (!contains(other.basis.row(i).transpose())) return false;
    return true;
}

FpVec Subspace::reduce(FpVec v) const {
    assert(static_cast<int>(v.size()) == ambient);
    v = attach(std::move(v), p);
    for (int i = 0; i < dim(); ++i) {
        int piv = -1;
        for (int j = 0; j < ambient; ++j)
            if (!basis(i, j).is_zero()) { piv = j; break; }
        assert(piv >= 0);
        Fp f = v(piv);
        if (f.is_zero()) continue;
        for (int j = 0; j < ambient; ++j) v(j) = v(j) - f * basis(i, j);
    }
    return v;
}

FpVec Subspace::coordinates(const FpVec& v) const {
    FpVec w = attach(v, p);
    FpVec coords(dim());
    for (int i = 0; i < dim(); ++i) {
        int piv = -1;
        for (int j = 0; j < ambient; ++j)
            if (!basis(i, j).is_zero()) { piv = j; break; }
        Fp f = w(piv);
        coords(i) = f;
        if (!f.is_zero())
            for (int j = 0; j < ambient; ++j) w(j) = w(j) - f * basis(i, j);
    }
    for (Eigen::Index j = 0; j < w.size(); ++j)
        assert(w(j).is_zero() && "vector not contained in subspace");
    return coords;
}

bool operator==(const Subspace& a, const Subspace& b) {
    if (a.ambient != b.ambient || a.dim() != b.dim()) return false;
    for (int i = 0; i < a.dim(); ++i)
        for (int j = 0; j < a.ambient; ++j)
            if (a.basis(i, j) != b.basis(i, j)) return false;
    return true;
}

Subspace kernel_basis(const FpMat& m) {
    long long p = modulus_of(m);
    int cols = static_cast<int>(m.cols());
    RrefResult r = rref(m);
    std::vector<bool> is_pivot(cols, false);
    for (int c : r.pivots) is_pivot[c] = true;
    FpMat gens(cols - r.rank, cols);
    int g = 0;
    for (int free = 0; free < cols; ++free) {
        if (is_pivot[free]) continue;
        for (int j = 0; j < cols; ++j) gens(g, j) = Fp(0, p);
        gens(g, free) = Fp(1, p);
        for (int i = 0; i < r.rank; ++i)
            gens(g, r.pivots[i]) = -r.mat(i, free);
        ++g;
    }
    return Subspace::span(gens, cols, p);
}

Subspace image(const FpMat& m) {
    long long p = modulus_of(m);
    return Subspace::span(m.transpose(), static_cast<int>(m.rows()), p);
}

Subspace equalizer(const std::vector<std::pair<FpMat, FpMat>>& maps,
                   int ambient, long long p) {
    if (maps.empty()) return Subspace::full(ambient, p);
    FpMat stacked(0, ambient);
    for (const auto& [a, b] : maps) {
        assert(a.cols() == ambient && b.cols() == ambient);
        assert(a.rows() == b.rows());
        FpMat diff = attach(a, p) - attach(b, p);
        FpMat next(stacked.rows() + diff.rows(), ambient);
        next.topRows(stacked.rows()) = stacked;
        next.bottomRows(diff.rows()) = diff;
        stacked = std::move(next);
    }
    if (stacked.rows() == 0) return Subspace::full(ambient, p);
    return kernel_basis(stacked);
}

namespace {
// Rows cutting out S: the annihilator of S under the standard pairing.
FpMat constraint_rows(const Subspace& s) {
    if (s.dim() == 0) {
        // Whole dual space: identity constraints force the zero space, which
        // matches kernel({x : b·x = 0 for all b}) when S = 0.
        return Subspace::full(s.ambient, s.p).basis;
    }
    return kernel_basis(s.basis).basis;
}
}  // namespace

Subspace intersect(const std::vector<Subspace>& subs) {
    assert(!subs.empty());
    int ambient = subs[0].ambient;
    long long p = subs[0].p;
    FpMat stacked(0, ambient);
    for (const Subspace& s : subs) {
        assert(s.ambient == ambient && s.p == p);
        FpMat c = constraint_rows(s);
        FpMat next(stacked.rows() + c.rows(), ambient);
        next.topRows(stacked.rows()) = stacked;
        next.bottomRows(c.rows()) = c;
        stacked = std::move(next);
    }
    if (stacked.rows() == 0) return Subspace::full(ambient, p);
    return kernel_basis(stacked);
}

Subspace sum(const std::vector<Subspace>& subs) {
    assert(!subs.empty());
    int ambient = subs[0].ambient;
    long long p = subs[0].p;
    FpMat stacked(0, ambient);
    for (const Subspace& s : subs) {
        assert(s.ambient == ambient && s.p == p);
        FpMat next(stacked.rows() + s.dim(), ambient);
        next.topRows(stacked.rows()) = stacked;
        next.bottomRows(s.dim()) = s.basis;
        stacked = std::move(next);
    }
    return Subspace::span(stacked, ambient, p);
}

Subspace preimage(const FpMat& m, const Subspace& target) {
    long long p = target.p;
    assert(static_cast<int>(m.rows()) == target.ambient);
    FpMat c = constraint_rows(target);
    if (c.rows() == 0) return Subspace::full(static_cast<int>(m.cols()), p);
    FpMat composed = c * attach(m, p);
    return kernel_basis(composed);
}

std::vector<FpVec> quotient_reps(const Subspace& space, const Subspace& sub) {
    assert(space.contains(sub) && "quotient_reps: sub not contained in space");
    std::vector<FpVec> reps;
    Subspace acc = sub;
    for (int i = 0; i < space.dim(); ++i) {
        FpVec cand = space.basis.row(i).transpose();
        if (acc.contains(cand)) continue;
        reps.push_back(cand);
        FpMat rows(acc.dim() + 1, space.ambient);
        rows.topRows(acc.dim()) = acc.basis;
        rows.row(acc.dim()) = cand.transpose();
        acc = Subspace::span(rows, space.ambient, space.p);
    }
    assert(static_cast<int>(reps.size()) == space.dim() - sub.dim());
    return reps;
}

FpMat quotient_matrix(const FpMat& A, const Subspace& space, const Subspace& sub) {
    std::vector<FpVec> reps = quotient_reps(space, sub);
    int q = static_cast<int>(reps.size());
    long long p = space.p;
    // Extended basis: sub rows then reps; express A·rep in it, keep rep coords.
    FpMat ext(sub.dim() + q, space.ambient);
    ext.topRows(sub.dim()) = sub.basis;
    for (int i = 0; i < q; ++i) ext.row(sub.dim() + i) = reps[i].transpose();
    FpMat out(q, q);
    FpMat Ap = attach(A, p);
    for (int i = 0; i < q; ++i) {
        FpVec img = Ap * reps[i];
        // Solve ext^T x = img.
        FpMat aug(space.ambient, ext.rows() + 1);
        for (int r = 0; r < space.ambient; ++r) {
            for (int c = 0; c < ext.rows(); ++c) aug(r, c) = ext(c, r);
            aug(r, ext.rows()) = img(r);
        }
        RrefResult rr = rref(aug);
        FpVec x(ext.rows());
        for (Eigen::Index k = 0; k < x.size(); ++k) x(k) = Fp(0, p);
        bool ok = true;
        for (size_t k = 0; k < rr.pivots.size(); ++k) {
            if (rr.pivots[k] == static_cast<int>(ext.rows())) ok = false;
            else x(rr.pivots[k]) = rr.mat(static_cast<int>(k), ext.rows());
        }
        assert(ok && "quotient_matrix: image not contained in space");
        for (int j = 0; j < q; ++j) out(j, i) = x(sub.dim() + j);
    }
    return out;
}

}  // namespace procoh
