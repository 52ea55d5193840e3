#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

namespace thetam {

// Exact arithmetic in Z[zeta_{p^a}], coefficients on the power basis
// zeta^0 .. zeta^{phi-1} with phi = p^{a-1}(p-1), reduced modulo the
// cyclotomic polynomial Phi_{p^a}(x) = sum_{i<p} x^{i p^{a-1}}.
// a = 0 is the rational-integer ring (phi = 1).
struct CycRing {
    long long p = 2;
    int a = 0;
    long long n = 1;    // p^a
    long long pam1 = 1; // p^{a-1} (1 when a = 0)
    long long phi = 1;  // p^{a-1}(p-1) (1 when a = 0)

    CycRing() = default;
    CycRing(long long p_, int a_) : p(p_), a(a_) {
        if (p < 2 || a < 0) throw std::domain_error("bad cyclotomic ring parameters");
        n = 1;
        for (int i = 0; i < a; ++i) n *= p;
        pam1 = (a >= 1) ? n / p : 1;
        phi = (a >= 1) ? pam1 * (p - 1) : 1;
    }
    bool operator==(const CycRing& o) const { return p == o.p && a == o.a; }
};

class CycNum {
public:
    CycNum() = default;
    explicit CycNum(const CycRing& ring) : ring_(ring), c_(size_t(ring.phi), 0) {}

    static CycNum integer(const CycRing& ring, long long v) {
        CycNum x(ring);
        x.c_[0] = v;
        return x;
    }
    // v * zeta^e, e taken mod p^a
    static CycNum monomial(const CycRing& ring, long long e, long long v = 1) {
        CycNum x(ring);
        x.add_monomial(e, v);
        return x;
    }

    const CycRing& ring() const { return ring_; }
    const std::vector<long long>& coeffs() const { return c_; }

    void add_monomial(long long e, long long v);
    CycNum& operator+=(const CycNum& o);
    CycNum& operator-=(const CycNum& o);
    CycNum operator+(const CycNum& o) const { CycNum r = *this; r += o; return r; }
    CycNum operator-(const CycNum& o) const { CycNum r = *this; r -= o; return r; }
    CycNum operator-() const;
    CycNum operator*(const CycNum& o) const;
    CycNum times_monomial(long long e, long long v = 1) const;
    CycNum conj() const;  // zeta -> zeta^{-1}
    CycNum scaled(long long v) const;

    bool operator==(const CycNum& o) const { return ring_ == o.ring_ && c_ == o.c_; }
    bool is_zero() const;
    bool divisible_by_p() const;
    void divide_by_p();

    // Re-express in Z[zeta_{p^b}], b >= a.
    CycNum promoted(int b) const;
    // Smallest subring exponent a' <= a containing this element.
    int min_ring_exponent() const;
    // Canonical member of the smallest subring.
    CycNum demoted() const;

private:
    void check_same(const CycNum& o) const {
        if (!(ring_ == o.ring_)) throw std::domain_error("cyclotomic ring mismatch");
    }
    CycRing ring_;
    std::vector<long long> c_;
};

}  // namespace thetam
