#include "quaternion_count.hpp"

#include <cmath>
#include <complex>

namespace thetam {

long long quat_norm(const DivisionOrderModel& m, FieldElem a, FieldElem b) {
    return m.field.norm(a.x, a.y) - m.D_B * m.field.norm(b.x, b.y);
}

Rat quat_u(const DivisionOrderModel& m, FieldElem a, FieldElem b) {
    long long n = quat_norm(m, a, b);
    if (n == 0) throw std::domain_error("quat_u: reduced norm is zero");
    long long nb = m.field.norm(b.x, b.y);
    return Rat(int128(m.D_B) * nb, int128(n < 0 ? -n : n));
}

namespace {

// enumerate all (x, y) with norm(x, y) <= bound; positive definite form
template <typename Fn>
void scan_field(const ImagQuadField& F, long long bound, Fn&& visit) {
    if (bound < 0) return;
    // y^2 (c - b^2/4) <= bound
    double disc = double(F.c_coef) - 0.25 * double(F.b_coef) * double(F.b_coef);
    long long ymax = (long long)std::floor(std::sqrt(double(bound) / disc) + 1e-9);
    for (long long y = -ymax; y <= ymax; ++y) {
        // x^2 + b x y + (c y^2 - bound) <= 0
        double disc_x = 0.25 * double(F.b_coef * y) * double(F.b_coef * y) -
                        double(F.c_coef) * double(y) * double(y) + double(bound);
        if (disc_x < 0) continue;
        double r = std::sqrt(disc_x);
        long long xlo = (long long)std::ceil(-0.5 * double(F.b_coef * y) - r - 1e-9);
        long long xhi = (long long)std::floor(-0.5 * double(F.b_coef * y) + r + 1e-9);
        for (long long x = xlo; x <= xhi; ++x)
            if (F.norm(x, y) <= bound) visit(x, y);
    }
}

// traceless coordinates of xi = (a, D_B b; sigma b, sigma a) under the
// E-embedding: Im a and the complex b-plane; lambda mixes Im a with Im b
// and fixes Re b.  sqrt(|D|)/2-scaled imaginary parts keep everything real.
struct CartanBall {
    double lam, ilam, cos2, sin2;
    double D_B;
    double im_scale;  // Im(x + y w) = y * sqrt(|D_E| ) / 2 (up to the 4|D case)

    CartanBall(const DivisionOrderModel& m, const CartanParams& c)
        : lam(c.lambda), ilam(1.0 / c.lambda), cos2(std::cos(2.0 * c.theta2)),
          sin2(std::sin(2.0 * c.theta2)), D_B(double(m.D_B)) {
        im_scale = 0.5 * std::sqrt(double(-m.field.D_E));
    }

    // displayed inequalities with N = n
    bool admits(const DivisionOrderModel& m, FieldElem a, FieldElem b, long long n,
                double delta) const {
        double ima = double(a.y) * im_scale;  // Im of the traceless part of a
        std::complex<double> bb(double(b.x) + 0.5 * double(m.field.b_coef * b.y),
                                double(b.y) * im_scale);
        // undo the k2-rotation of the ball
        std::complex<double> rb = bb * std::complex<double>(cos2, -sin2);
        double reb = rb.real(), imb = rb.imag();
        double sq = std::sqrt(D_B);
        double c1 = 0.5 * (lam + ilam) * ima + sq * 0.5 * (lam - ilam) * imb;
        double c2 = 0.5 * (lam - ilam) * ima + sq * 0.5 * (lam + ilam) * imb;
        double slack = 1.0 + 1e-12;
        double N = double(n);
        if (!(c1 * c1 <= N * (2.0 * delta + 1.0) * slack + 1e-12)) return false;
        return c2 * c2 + D_B * reb * reb <= N * delta * slack + 1e-12;
    }
};

}  // namespace

namespace {

// Count in the full dual-coefficient lattice: a = alpha/sqrt(D_E),
// b = beta/sqrt(D_E) with alpha, beta integral and alpha + beta in
// sqrt(D_E) O_E.  Norms pick up a 1/|D_E| and membership becomes two
// congruences mod |D_E|.
long long count_quat_wide(const DivisionOrderModel& m, long long n, const Rat& delta) {
    const ImagQuadField& F = m.field;
    long long Dabs = -F.D_E;
    long long c = F.c_coef;
    // sqrt(D) O_E basis in (x, y) coordinates
    long long s1x, s1y, s2x, s2y;
    if (F.b_coef == 1) {
        s1x = -1; s1y = 2;       // sqrt(D) = 2w - 1
        s2x = -2 * c; s2y = 1;   // sqrt(D) w = w - 2c
    } else {
        s1x = 0; s1y = 2;        // sqrt(D) = 2w
        s2x = -2 * c; s2y = 0;   // sqrt(D) w = -2c
    }
    long long det = s1x * s2y - s2x * s1y;  // +-|D_E|
    auto in_codomain = [&](long long u, long long v) {
        // solve s1 x + s2 y = (u, v) over Z
        long long xnum = u * s2y - s2x * v;
        long long ynum = s1x * v - u * s1y;
        return xnum % det == 0 && ynum % det == 0;
    };
    // D_B Nr beta <= delta n |D|, exactly
    long long b_bound = (long long)(delta.num() * n * Dabs / (delta.den() * m.D_B));
    double abound = double(n) * double(Dabs) + double(m.D_B) * double(b_bound) + 1.0;
    if (abound > 1e9) throw std::overflow_error("count_quat: coefficient box too large");
    long long count = 0;
    scan_field(F, b_bound, [&](long long bx, long long by) {
        long long nb = F.norm(bx, by);
        long long na = n * Dabs + m.D_B * nb;
        scan_field(F, na, [&](long long ax, long long ay) {
            if (F.norm(ax, ay) != na) return;
            if (in_codomain(ax + bx, ay + by)) ++count;
        });
    });
    return count;
}

}  // namespace

long long count_quat(const DivisionOrderModel& m, const CartanParams& cartan, long long n,
                     const Rat& delta) {
    if (n < 1) throw std::domain_error("count_quat: n >= 1");
    if (delta < Rat(0)) throw std::domain_error("count_quat: delta >= 0");
    if (m.wide_lattice) {
        if (cartan.lambda != 1.0)
            throw std::domain_error("count_quat: wide lattice supports lambda = 1 only");
        return count_quat_wide(m, n, delta);
    }
    const bool identity = cartan.lambda == 1.0;
    double dd = delta.to_double();
    long long b_bound;
    if (identity) {
        // D_B Nr b <= delta n exactly: Nr b <= floor(pd n / (qd D_B))
        b_bound = (long long)(delta.num() * n / (delta.den() * m.D_B));
    } else {
        // envelope of the Cartan ball: sqrt(D_B)|Im b| <= sh sqrt(N(2d+1)) +
        // ch sqrt(N d), D_B (Re b)^2 <= N d
        double ch = 0.5 * (cartan.lambda + 1.0 / cartan.lambda);
        double sh = 0.5 * (cartan.lambda - 1.0 / cartan.lambda);
        double imb = sh * std::sqrt(double(n) * (2.0 * dd + 1.0)) +
                     ch * std::sqrt(double(n) * dd);
        b_bound = (long long)std::floor((double(n) * dd + imb * imb) / double(m.D_B)) + 1;
    }
    double abound_d = double(n) + double(m.D_B) * double(b_bound) + 1.0;
    if (double(b_bound + 1) * double(m.D_B) > 1e9 || abound_d > 1e9)
        throw std::overflow_error("count_quat: coefficient box too large");

    CartanBall ball(m, cartan);
    long long count = 0;
    scan_field(m.field, b_bound, [&](long long bx, long long by) {
        long long nb = m.field.norm(bx, by);
        long long na = n + m.D_B * nb;  // Nr a - D_B Nr b = n
        // collect a with Nr a = na
        scan_field(m.field, na, [&](long long ax, long long ay) {
            if (m.field.norm(ax, ay) != na) return;
            FieldElem a{ax, ay}, b{bx, by};
            if (identity) {
                // u = D_B Nr b / n <= delta exactly
                if (Rat(int128(m.D_B) * nb, int128(n)) <= delta) ++count;
            } else {
                if (ball.admits(m, a, b, n, dd)) ++count;
            }
        });
    });
    return count;
}

double division_bound_rhs(double N, double delta, double lambda, long long D_E, double eps) {
    if (N < 1.0 || delta < 0.0 || !(lambda > 0.0) || D_E >= 0)
        throw std::domain_error("division_bound_rhs: bad arguments");
    double lamsum = lambda + 1.0 / lambda;
    double de = double(-D_E);
    if (delta < 1.0) {
        double bracket = std::pow(N, 3.0) * delta * delta +
                         std::pow(lamsum, 2.0 + eps) * (std::pow(N, 2.5) * std::pow(delta, 1.5) + N);
        return std::pow(de, 2.0 + eps) * std::pow(N, eps) * bracket;
    }
    // delta >= 1: sum of the displayed per-n bound squared over n <= N
    double s = 0.0;
    for (long long n = 1; n <= (long long)N; ++n)
        s += std::pow(lamsum * double(n), 2.0 + 2.0 * eps) * delta * delta;
    return std::pow(de, 2.0 + eps) * s;
}

}  // namespace thetam
