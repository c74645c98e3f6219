#pragma once

#include <cassert>
#include <cstdint>
#include <ostream>

#include <Eigen/Core>

namespace procoh {

// Residue mod an odd prime p.  The modulus travels with the value so that
// scenarios at different primes can coexist in one process; mixing attached
// values with different moduli trips an assert.
//
// A default-constructed or int-constructed scalar starts "unattached"
// (p == 0) and adopts the modulus of the first attached operand it meets.
// This keeps Eigen's literal-based initializers (setZero, setIdentity)
// usable without threading a modulus through every expression.
class Fp {
public:
    Fp() : v_(0), p_(0) {}
    Fp(long long v) : v_(v), p_(0) {}
    Fp(long long v, long long p) : v_(normalize(v, p)), p_(p) { assert(p >= 3); }

    long long value() const { return p_ ? v_ : v_; }
    long long modulus() const { return p_; }
    bool attached() const { return p_ != 0; }

    // Re-reads an unattached raw integer against modulus p.
    Fp attach(long long p) const {
        if (p_) {
            assert(p_ == p);
            return *this;
        }
        return Fp(v_, p);
    }

    bool is_zero() const { return p_ ? v_ == 0 : v_ == 0; }

    friend Fp operator+(const Fp& a, const Fp& b) {
        long long p = join(a.p_, b.p_);
        if (!p) return Fp(a.v_ + b.v_);
        return Fp(a.attach(p).v_ + b.attach(p).v_, p);
    }
    friend Fp operator-(const Fp& a, const Fp& b) {
        long long p = join(a.p_, b.p_);
        if (!p) return Fp(a.v_ - b.v_);
        return Fp(a.attach(p).v_ - b.attach(p).v_, p);
    }
    friend Fp operator*(const Fp& a, const Fp& b) {
        long long p = join(a.p_, b.p_);
        if (!p) return Fp(a.v_ * b.v_);
        return Fp(a.attach(p).v_ * b.attach(p).v_, p);
    }
    Fp operator-() const { return p_ ? Fp(-v_, p_) : Fp(-v_); }

    Fp inverse() const {
        assert(p_ && v_ != 0);
        return pow(p_ - 2);
    }
    friend Fp operator/(const Fp& a, const Fp& b) { return a * b.inverse(); }

    Fp pow(long long e) const {
        assert(p_);
        Fp r(1, p_), base = *this;
        for (; e > 0; e >>= 1) {
            if (e & 1) r = r * base;
            base = base * base;
        }
        return r;
    }

    Fp& operator+=(const Fp& o) { return *this = *this + o; }
    Fp& operator-=(const Fp& o) { return *this = *this - o; }
    Fp& operator*=(const Fp& o) { return *this = *this * o; }

    friend bool operator==(const Fp& a, const Fp& b) {
        long long p = join(a.p_, b.p_);
        if (!p) return a.v_ == b.v_;
        return a.attach(p).v_ == b.attach(p).v_;
    }
    friend bool operator!=(const Fp& a, const Fp& b) { return !(a == b); }

    friend std::ostream& operator<<(std::ostream& os, const Fp& x) {
        return os << x.v_;
    }

private:
    static long long normalize(long long v, long long p) {
        long long r = v % p;
        return r < 0 ? r + p : r;
    }
    static long long join(long long pa, long long pb) {
        if (pa == 0) return pb;
        if (pb == 0) return pa;
        assert(pa == pb);
        return pa;
    }

    long long v_;
    long long p_;
};

using FpMat = Eigen::Matrix<Fp, Eigen::Dynamic, Eigen::Dynamic>;
using FpVec = Eigen::Matrix<Fp, Eigen::Dynamic, 1>;

}  // namespace procoh

namespace Eigen {
template <>
struct NumTraits<procoh::Fp> {
    using Real = procoh::Fp;
    using NonInteger = procoh::Fp;
    using Nested = procoh::Fp;
    using Literal = long long;
    enum {
        IsComplex = 0,
        IsInteger = 1,
        IsSigned = 1,
        RequireInitialization = 1,
        ReadCost = 1,
        AddCost = 2,
        MulCost = 3
    };
    static procoh::Fp epsilon() { return procoh::Fp(0); }
    static procoh::Fp dummy_precision() { return procoh::Fp(0); }
    static int digits10() { return 0; }
};
}  // namespace Eigen
