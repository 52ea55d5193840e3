#pragma once

#include <complex>
#include <cstdint>
#include <optional>
#include <stdexcept>

#include "rational.hpp"

namespace thetam {

using cplx = std::complex<double>;

// Upper half-plane point z = x + iy, y > 0.
struct Point {
    double x = 0.0;
    double y = 1.0;

    Point() = default;
    Point(double x_, double y_) : x(x_), y(y_) {
        if (!(y > 0.0) || !std::isfinite(x) || !std::isfinite(y))
            throw std::domain_error("point must have finite coordinates and y > 0");
    }
    cplx to_complex() const { return cplx(x, y); }
};

// Point with exact rational x and y^2.  Heights of the form sqrt(p/q) keep
// u(g^-1 xi g) rational, so lattice membership tests can be made exact.
struct RatPoint {
    Rat x;
    Rat y2;

    RatPoint() : x(0), y2(1) {}
    RatPoint(Rat x_, Rat y2_) : x(x_), y2(y2_) {
        if (!(y2 > Rat(0))) throw std::domain_error("rational point needs y^2 > 0");
    }
    static RatPoint from_decimal(const std::string& xs, const std::string& ys) {
        Rat x = Rat::from_decimal(xs);
        Rat y = Rat::from_decimal(ys);
        return RatPoint(x, y * y);
    }
    Point to_point() const { return Point(x.to_double(), std::sqrt(y2.to_double())); }
};

// Real 2x2 matrix; determinant of any sign.
struct Mat2R {
    double a = 1.0, b = 0.0, c = 0.0, d = 1.0;

    Mat2R() = default;
    Mat2R(double a_, double b_, double c_, double d_) : a(a_), b(b_), c(c_), d(d_) {}

    double det() const { return a * d - b * c; }
    double tr() const { return a + d; }
    double frob2() const { return a * a + b * b + c * c + d * d; }
    Mat2R transpose() const { return {a, c, b, d}; }
    // Canonical involution x -> x^iota (adjugate); x x^iota = det(x) I.
    Mat2R iota() const { return {d, -b, -c, a}; }

    Mat2R operator*(const Mat2R& o) const {
        return {a * o.a + b * o.c, a * o.b + b * o.d,
                c * o.a + d * o.c, c * o.b + d * o.d};
    }
    Mat2R operator*(double s) const { return {a * s, b * s, c * s, d * s}; }

    Mat2R inverse() const {
        double dt = det();
        if (dt == 0.0) throw std::domain_error("singular matrix");
        return {d / dt, -b / dt, -c / dt, a / dt};
    }

    static Mat2R identity() { return {1, 0, 0, 1}; }
    static Mat2R rotation(double theta) {
        double c0 = std::cos(theta), s0 = std::sin(theta);
        return {c0, s0, -s0, c0};
    }
};

// Integer 2x2 matrix, used for exact bookkeeping of SL2(Z) words.
struct Mat2Z {
    long long a = 1, b = 0, c = 0, d = 1;

    long long det() const { return a * d - b * c; }
    Mat2Z operator*(const Mat2Z& o) const {
        return {a * o.a + b * o.c, a * o.b + b * o.d,
                c * o.a + d * o.c, c * o.b + d * o.d};
    }
    Mat2R to_real() const {
        return {double(a), double(b), double(c), double(d)};
    }
    bool operator==(const Mat2Z& o) const {
        return a == o.a && b == o.b && c == o.c && d == o.d;
    }
    cplx act(cplx z) const {
        return (cplx(double(a)) * z + double(b)) / (cplx(double(c)) * z + double(d));
    }
};

// Modular weight m >= 2.  Kernel sums additionally require m > 4, which is
// checked where the sums are formed.
struct Weight {
    int m;
    explicit Weight(int m_) : m(m_) {
        if (m < 2) throw std::domain_error("weight must be >= 2");
    }
};

/// Iwasawa representative g_z = [[sqrt y, x/sqrt y],[0, 1/sqrt y]] with g_z.i = z.
Mat2R point_matrix(const Point& z);

/// Point-pair invariant u(g) = (Tr(g g^T) - 2|det g|) / (4|det g|).
/// Scale-invariant; zero exactly on scaled rotations.  det g = 0 is a domain error.
double u_invariant(const Mat2R& g);

/// Phase mu(g) = 2i sqrt(det g) / ((b-c) + i(a+d)) for det g > 0, else 0.
/// Satisfies |mu|^2 = 1/(1+u) and mu(g k_theta) = mu(g) e^{i theta}.
cplx mu(const Mat2R& g);

/// True when mu sits on the unassigned det = 0 locus (extended by 0 there).
bool mu_degenerate(const Mat2R& g);

/// mu(g)^m by binary powering; avoids std::pow(complex) platform drift.
cplx mu_pow(const Mat2R& g, int m);

/// Archimedean test function exp(-2 pi Nr x) Nr(x)^{m/2-1} mu(x)^m; zero for Nr x <= 0.
cplx bergman_test_function(const Mat2R& x, Weight m);

struct ReduceResult {
    Point reduced;
    Mat2Z gamma;  // gamma . z = reduced
    double height;
};

/// Shift-then-invert reduction to the standard fundamental domain
/// |Re z| <= 1/2, |z| >= 1; returns the reducing gamma and ht = Im of the
/// reduced point (the minimum of Im over the SL2(Z)-orbit).
ReduceResult reduce_to_fundamental(const Point& z);

}  // namespace thetam
