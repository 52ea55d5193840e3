#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace thetam {

// Exact rational arithmetic on 128-bit integers.  Used for boundary-exact
// membership tests (u(g^-1 xi g) <= delta with rational point data) where
// floating point would make counts grid-dependent.  Throws rat_overflow
// instead of wrapping; callers fall back to the float path.

struct rat_overflow : std::runtime_error {
    rat_overflow() : std::runtime_error("rational overflow (128-bit)") {}
};

using int128 = __int128;

inline int128 rat_abs(int128 x) { return x < 0 ? -x : x; }

inline int128 checked_mul(int128 a, int128 b) {
    if (a == 0 || b == 0) return 0;
    int128 r = a * b;
    if (r / b != a) throw rat_overflow();
    return r;
}

inline int128 checked_add(int128 a, int128 b) {
    int128 r = a + b;
    if ((b > 0 && r < a) || (b < 0 && r > a)) throw rat_overflow();
    return r;
}

inline int128 gcd128(int128 a, int128 b) {
    a = rat_abs(a);
    b = rat_abs(b);
    while (b != 0) {
        int128 t = a % b;
        a = b;
        b = t;
    }
    return a;
}

class Rat {
public:
    Rat() : num_(0), den_(1) {}
    Rat(long long n) : num_(n), den_(1) {}
    Rat(int128 n, int128 d) : num_(n), den_(d) {
        if (den_ == 0) throw std::domain_error("rational with zero denominator");
        normalize();
    }

    int128 num() const { return num_; }
    int128 den() const { return den_; }

    Rat operator+(const Rat& o) const {
        return Rat(checked_add(checked_mul(num_, o.den_), checked_mul(o.num_, den_)),
                   checked_mul(den_, o.den_));
    }
    Rat operator-(const Rat& o) const {
        return Rat(checked_add(checked_mul(num_, o.den_), -checked_mul(o.num_, den_)),
                   checked_mul(den_, o.den_));
    }
    Rat operator*(const Rat& o) const {
        return Rat(checked_mul(num_, o.num_), checked_mul(den_, o.den_));
    }
    Rat operator/(const Rat& o) const {
        if (o.num_ == 0) throw std::domain_error("rational division by zero");
        return Rat(checked_mul(num_, o.den_), checked_mul(den_, o.num_));
    }
    Rat operator-() const { return Rat(-num_, den_); }

    bool operator==(const Rat& o) const { return num_ == o.num_ && den_ == o.den_; }
    bool operator!=(const Rat& o) const { return !(*this == o); }
    bool operator<(const Rat& o) const {
        return checked_mul(num_, o.den_) < checked_mul(o.num_, den_);
    }
    bool operator<=(const Rat& o) const {
        return checked_mul(num_, o.den_) <= checked_mul(o.num_, den_);
    }
    bool operator>(const Rat& o) const { return o < *this; }
    bool operator>=(const Rat& o) const { return o <= *this; }

    bool is_zero() const { return num_ == 0; }

    double to_double() const {
        return static_cast<double>(num_) / static_cast<double>(den_);
    }

    // Parses integer and plain-decimal literals ("-0.3" -> -3/10).
    static Rat from_decimal(const std::string& s);

private:
    void normalize() {
        if (den_ < 0) {
            num_ = -num_;
            den_ = -den_;
        }
        int128 g = gcd128(num_, den_);
        if (g > 1) {
            num_ /= g;
            den_ /= g;
        }
        if (num_ == 0) den_ = 1;
    }

    int128 num_;
    int128 den_;
};

inline Rat Rat::from_decimal(const std::string& s) {
    if (s.empty()) throw std::invalid_argument("empty decimal literal");
    size_t i = 0;
    bool neg = false;
    if (s[i] == '+' || s[i] == '-') {
        neg = (s[i] == '-');
        ++i;
    }
    int128 num = 0;
    int128 den = 1;
    bool seen_digit = false, seen_dot = false;
    for (; i < s.size(); ++i) {
        char c = s[i];
        if (c == '.') {
            if (seen_dot) throw std::invalid_argument("malformed decimal: " + s);
            seen_dot = true;
        } else if (c >= '0' && c <= '9') {
            num = checked_add(checked_mul(num, 10), c - '0');
            if (seen_dot) den = checked_mul(den, 10);
            seen_digit = true;
        } else {
            throw std::invalid_argument("malformed decimal: " + s);
        }
    }
    if (!seen_digit) throw std::invalid_argument("malformed decimal: " + s);
    return Rat(neg ? -num : num, den);
}

}  // namespace thetam
