#include "cyclotomic.hpp"

namespace thetam {

void CycNum::add_monomial(long long e, long long v) {
    if (v == 0) return;
    e %= ring_.n;
    if (e < 0) e += ring_.n;
    if (e < ring_.phi) {
        c_[size_t(e)] += v;
        return;
    }
    // zeta^{(p-1)p^{a-1}+r} = -sum_{i<p-1} zeta^{r+i p^{a-1}}
    long long r = e - ring_.phi;
    for (long long i = 0; i < ring_.p - 1; ++i) c_[size_t(r + i * ring_.pam1)] -= v;
}

CycNum& CycNum::operator+=(const CycNum& o) {
    check_same(o);
    for (size_t i = 0; i < c_.size(); ++i) c_[i] += o.c_[i];
    return *this;
}

CycNum& CycNum::operator-=(const CycNum& o) {
    check_same(o);
    for (size_t i = 0; i < c_.size(); ++i) c_[i] -= o.c_[i];
    return *this;
}

CycNum CycNum::operator-() const {
    CycNum r = *this;
    for (auto& v : r.c_) v = -v;
    return r;
}

CycNum CycNum::operator*(const CycNum& o) const {
    check_same(o);
    CycNum r(ring_);
    for (long long i = 0; i < ring_.phi; ++i) {
        if (c_[size_t(i)] == 0) continue;
        for (long long j = 0; j < ring_.phi; ++j) {
            if (o.c_[size_t(j)] == 0) continue;
            r.add_monomial(i + j, c_[size_t(i)] * o.c_[size_t(j)]);
        }
    }
    return r;
}

CycNum CycNum::times_monomial(long long e, long long v) const {
    CycNum r(ring_);
    for (long long i = 0; i < ring_.phi; ++i)
        if (c_[size_t(i)] != 0) r.add_monomial(i + e, c_[size_t(i)] * v);
    return r;
}

CycNum CycNum::conj() const {
    CycNum r(ring_);
    for (long long i = 0; i < ring_.phi; ++i)
        if (c_[size_t(i)] != 0) r.add_monomial(-i, c_[size_t(i)]);
    return r;
}

CycNum CycNum::scaled(long long v) const {
    CycNum r = *this;
    for (auto& x : r.c_) x *= v;
    return r;
}

bool CycNum::is_zero() const {
    for (long long v : c_)
        if (v != 0) return false;
    return true;
}

bool CycNum::divisible_by_p() const {
    for (long long v : c_)
        if (v % ring_.p != 0) return false;
    return true;
}

void CycNum::divide_by_p() {
    for (auto& v : c_) v /= ring_.p;
}

CycNum CycNum::promoted(int b) const {
    if (b < ring_.a) throw std::domain_error("cannot promote to smaller ring");
    if (b == ring_.a) return *this;
    CycRing big(ring_.p, b);
    long long step = 1;
    for (int i = 0; i < b - ring_.a; ++i) step *= ring_.p;
    CycNum r(big);
    for (long long i = 0; i < ring_.phi; ++i)
        if (c_[size_t(i)] != 0) r.add_monomial(i * step, c_[size_t(i)]);
    return r;
}

int CycNum::min_ring_exponent() const {
    if (is_zero()) return 0;
    int a = ring_.a;
    long long stride = 1;
    while (a > 0) {
        // representable one level down iff support sits on multiples of p*stride
        long long s = stride * ring_.p;
        bool ok = true;
        for (long long i = 0; i < ring_.phi && ok; ++i)
            if (c_[size_t(i)] != 0 && i % s != 0) ok = false;
        if (!ok) break;
        stride = s;
        --a;
    }
    return a;
}

CycNum CycNum::demoted() const {
    int a2 = min_ring_exponent();
    if (a2 == ring_.a) return *this;
    long long step = 1;
    for (int i = 0; i < ring_.a - a2; ++i) step *= ring_.p;
    CycRing small(ring_.p, a2);
    CycNum out(small);
    for (long long i = 0; i < ring_.phi; ++i)
        if (c_[size_t(i)] != 0) out.add_monomial(i / step, c_[size_t(i)]);
    return out;
}

}  // namespace thetam
