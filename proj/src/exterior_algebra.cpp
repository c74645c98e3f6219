#include "procoh/exterior_algebra.hpp"

#include <algorithm>
#include <cassert>
#include <sstream>

namespace procoh {

ExtElement ExtElement::unit(int d, long long p) {
    ExtElement e(d, p);
    e.add_term({}, Fp(1, p));
    return e;
}

ExtElement ExtElement::generator(int d, long long p, int i) {
    assert(0 <= i && i < d);
    ExtElement e(d, p);
    e.add_term({i}, Fp(1, p));
    return e;
}

int ExtElement::grade() const {
    if (terms_.empty()) return -2;
    int g = static_cast<int>(terms_.begin()->first.size());
    for (const auto& [idx, c] : terms_)
        if (static_cast<int>(idx.size()) != g) return -1;
    return g;
}

void ExtElement::add_term(const std::vector<int>& idx, Fp c) {
    c = c.attach(p_);
    auto it = terms_.find(idx);
    if (it == terms_.end()) {
        if (!c.is_zero()) terms_.emplace(idx, c);
        return;
    }
    it->second += c;
    if (it->second.is_zero()) terms_.erase(it);
}

ExtElement ExtElement::operator+(const ExtElement& o) const {
    assert(d_ == o.d_ && p_ == o.p_);
    ExtElement r = *this;
    for (const auto& [idx, c] : o.terms_) r.add_term(idx, c);
    return r;
}

ExtElement ExtElement::operator-(const ExtElement& o) const {
    return *this + (o * Fp(-1, p_));
}

ExtElement ExtElement::operator*(const Fp& c) const {
    ExtElement r(d_, p_);
    for (const auto& [idx, coeff] : terms_) r.add_term(idx, coeff * c);
    return r;
}

bool operator==(const ExtElement& a, const ExtElement& b) {
    return a.d_ == b.d_ && a.p_ == b.p_ && a.terms_ == b.terms_;
}

namespace {
// Merges two strictly increasing tuples; returns the Koszul sign, or 0 on a
// repeated index.
int merge_sign(const std::vector<int>& a, const std::vector<int>& b,
               std::vector<int>& out) {
    out.clear();
    out.reserve(a.size() + b.size());
    size_t i = 0, j = 0;
    int sign = 1;
    while (i < a.size() && j < b.size()) {
        if (a[i] == b[j]) return 0;
        if (a[i] < b[j]) {
            out.push_back(a[i++]);
        } else {
            if ((a.size() - i) % 2 == 1) sign = -sign;
            out.push_back(b[j++]);
        }
    }
    while (i < a.size()) out.push_back(a[i++]);
    while (j < b.size()) out.push_back(b[j++]);
    return sign;
}
}  // namespace

ExtElement wedge(const ExtElement& a, const ExtElement& b) {
    assert(a.d() == b.d() && a.p() == b.p());
    ExtElement r(a.d(), a.p());
    std::vector<int> merged;
    for (const auto& [ia, ca] : a.terms()) {
        for (const auto& [ib, cb] : b.terms()) {
            int s = merge_sign(ia, ib, merged);
            if (s == 0) continue;
            r.add_term(merged, ca * cb * Fp(s, a.p()));
        }
    }
    return r;
}

const std::vector<std::vector<int>>& grade_basis(int d, int m) {
    static std::map<std::pair<int, int>, std::vector<std::vector<int>>> cache;
    auto key = std::make_pair(d, m);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
    std::vector<std::vector<int>> basis;
    std::vector<int> cur;
    // Lexicographic enumeration of increasing m-subsets.
    auto rec = [&](auto&& self, int start) -> void {
        if (static_cast<int>(cur.size()) == m) {
            basis.push_back(cur);
            return;
        }
        for (int i = start; i < d; ++i) {
            cur.push_back(i);
            self(self, i + 1);
            cur.pop_back();
        }
    };
    if (m >= 0 && m <= d) rec(rec, 0);
    return cache.emplace(key, std::move(basis)).first->second;
}

int grade_index(int d, const std::vector<int>& idx) {
    const auto& basis = grade_basis(d, static_cast<int>(idx.size()));
    auto it = std::lower_bound(basis.begin(), basis.end(), idx);
    assert(it != basis.end() && *it == idx);
    return static_cast<int>(it - basis.begin());
}

FpVec grade_coords(const ExtElement& e, int m) {
    const auto& basis = grade_basis(e.d(), m);
    FpVec v(static_cast<int>(basis.size()));
    for (Eigen::Index i = 0; i < v.size(); ++i) v(i) = Fp(0, e.p());
    for (const auto& [idx, c] : e.terms())
        if (static_cast<int>(idx.size()) == m) v(grade_index(e.d(), idx)) = c;
    return v;
}

ExtElement from_grade_coords(int d, long long p, int m, const FpVec& coords) {
    const auto& basis = grade_basis(d, m);
    assert(coords.size() == static_cast<Eigen::Index>(basis.size()));
    ExtElement e(d, p);
    for (size_t i = 0; i < basis.size(); ++i)
        e.add_term(basis[i], coords(static_cast<int>(i)));
    return e;
}

ExtElement apply_endomorphism(const FpMat& L, const ExtElement& e) {
    int d = e.d();
    long long p = e.p();
    assert(L.rows() == d && L.cols() == d);
    std::vector<ExtElement> images;
    images.reserve(d);
    for (int i = 0; i < d; ++i) {
        ExtElement img(d, p);
        for (int j = 0; j < d; ++j) img.add_term({j}, L(j, i).attach(p));
        images.push_back(img);
    }
    ExtElement r(d, p);
    for (const auto& [idx, c] : e.terms()) {
        ExtElement term = ExtElement::unit(d, p) * c;
        for (int i : idx) term = wedge(term, images[i]);
        r = r + term;
    }
    return r;
}

FpMat grade_matrix(const FpMat& L, int m) {
    int d = static_cast<int>(L.rows());
    long long p = modulus_of(L);
    const auto& basis = grade_basis(d, m);
    int n = static_cast<int>(basis.size());
    FpMat out(n, n);
    for (int c = 0; c < n; ++c) {
        ExtElement e(d, p);
        e.add_term(basis[c], Fp(1, p));
        FpVec col = grade_coords(apply_endomorphism(L, e), m);
        for (int r = 0; r < n; ++r) out(r, c) = col(r);
    }
    return out;
}

std::string render(const ExtElement& e, const std::vector<std::string>& names) {
    if (e.is_zero()) return "0";
    assert(static_cast<int>(names.size()) == e.d());
    std::vector<std::vector<int>> keys;
    for (const auto& [idx, c] : e.terms()) keys.push_back(idx);
    std::sort(keys.begin(), keys.end(), [](const auto& a, const auto& b) {
        if (a.size() != b.size()) return a.size() < b.size();
        return a < b;
    });
    std::ostringstream os;
    bool first = true;
    for (const auto& idx : keys) {
        long long c = e.terms().at(idx).value();
        long long signed_c = c <= e.p() / 2 ? c : c - e.p();
        bool neg = signed_c < 0;
        long long mag = neg ? -signed_c : signed_c;
        if (first) {
            if (neg) os << "-";
            first = false;
        } else {
            os << (neg ? " - " : " + ");
        }
        if (mag != 1 || idx.empty()) os << mag;
        for (int i : idx) os << names[i];
    }
    return os.str();
}

ExtElement parse_ext(const std::string& text, int d, long long p,
                     const std::vector<std::string>& names) {
    assert(static_cast<int>(names.size()) == d);
    std::string s;
    for (char c : text)
        if (c != ' ') s.push_back(c);
    ExtElement e(d, p);
    if (s == "0" || s.empty()) return e;
    size_t pos = 0;
    while (pos < s.size()) {
        long long sign = 1;
        if (s[pos] == '+') ++pos;
        else if (s[pos] == '-') { sign = -1; ++pos; }
        long long mag = -1;
        size_t start = pos;
        while (pos < s.size() && isdigit(static_cast<unsigned char>(s[pos]))) ++pos;
        if (pos > start) mag = std::stoll(s.substr(start, pos - start));
        if (pos < s.size() && s[pos] == '*') ++pos;
        std::vector<int> idx;
        while (pos < s.size() && s[pos] != '+' && s[pos] != '-') {
            int best = -1;
            size_t best_len = 0;
            for (int i = 0; i < d; ++i) {
                const std::string& nm = names[i];
                if (nm.size() > best_len && s.compare(pos, nm.size(), nm) == 0) {
                    best = i;
                    best_len = nm.size();
                }
            }
            assert(best >= 0 && "unparseable generator name");
            idx.push_back(best);
            pos += best_len;
        }
        if (mag < 0) mag = 1;
        assert(std::is_sorted(idx.begin(), idx.end()));
        e.add_term(idx, Fp(sign * mag, p));
    }
    return e;
}

}  // namespace procoh
