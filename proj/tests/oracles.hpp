#pragma once

// Independent reference implementations used only by tests.  These stay
// deliberately naive: direct box scans and Riemann sums, no shared code with
// the library paths they check.

#include <cmath>
#include <numeric>
#include <vector>

#include "halfplane.hpp"
#include "lattice_count.hpp"
#include "qexpansion.hpp"

namespace thetam::oracle {

// |{xi in order : det xi = n, u(g^-1 xi g) <= delta}| by scanning the full
// integer box |entry| <= cond(g) sqrt((4+2 delta) n), exact rational u-test.
inline long long count_box_scan(const OrderSpec& order, const RatPoint& z, long long n,
                                const Rat& delta) {
    Mat2R g = point_matrix(z.to_point());
    Mat2R gi = g.inverse();
    double cond = std::sqrt(g.frob2()) * std::sqrt(gi.frob2());  // >= sigma1/sigma2
    long long R = (long long)std::ceil(cond * std::sqrt((4.0 + 2.0 * delta.to_double()) *
                                                        double(n))) + 1;
    // u(g^-1 xi g) <= delta  <=>  ||h||^2 <= (4 delta + 2) n, h = g^-1 xi g,
    // decided exactly: compare against the rational form of ||h||^2.
    Rat x = z.x, y2 = z.y2;
    Rat bound = (Rat(4) * delta + Rat(2)) * Rat(n);
    long long cnt = 0;
    for (long long a = -R; a <= R; ++a)
        for (long long b = -R; b <= R; ++b)
            for (long long c = -R; c <= R; ++c) {
                if (order.kind == OrderSpec::Kind::eichler_split && c % order.q != 0) continue;
                for (long long d = -R; d <= R; ++d) {
                    if (a * d - b * c != n) continue;
                    Rat h11 = Rat(a) - x * Rat(c);
                    Rat h22 = Rat(d) + x * Rat(c);
                    Rat mid = Rat(b) + (Rat(a) - Rat(d)) * x - Rat(c) * x * x;
                    Rat norm2 = h11 * h11 + h22 * h22 + Rat(c) * Rat(c) * y2 + mid * mid / y2;
                    if (norm2 <= bound) ++cnt;
                }
            }
    return cnt;
}

inline std::vector<long long> profile_box_scan(const OrderSpec& order, const RatPoint& z,
                                               long long N, const Rat& delta) {
    std::vector<long long> counts;
    for (long long n = 1; n <= N; ++n) counts.push_back(count_box_scan(order, z, n, delta));
    return counts;
}

// Coarse midpoint Riemann sum of int_F y^m |f|^2 dmu, only for cross-checks.
inline double petersson_riemann(const QExpansion& f, int nx, int ny) {
    double total = 0.0;
    double cut = 9.0;
    for (int i = 0; i < nx; ++i) {
        double x = -0.5 + (i + 0.5) / nx;
        double y0 = std::sqrt(1.0 - x * x);
        for (int j = 0; j < ny; ++j) {
            double y = y0 + (j + 0.5) * cut / ny;
            cplx v = eval_cusp_form(f, Point(x, y));
            total += std::pow(y, f.m - 2) * std::norm(v) * (1.0 / nx) * (cut / ny);
        }
    }
    return total;
}

// Height of the orbit: the fundamental-domain representative attains the
// largest Im, which is y / min_{(c,d) coprime, |c|,|d| <= B} |cz+d|^2.
inline double height_oracle(const Point& z, long long B) {
    double best = 1e300;
    for (long long c = -B; c <= B; ++c)
        for (long long d = -B; d <= B; ++d) {
            if (c == 0 && d == 0) continue;
            if (std::gcd(std::abs(c), std::abs(d)) != 1) continue;
            double re = double(c) * z.x + double(d);
            double nm = re * re + double(c) * z.y * double(c) * z.y;
            best = std::min(best, nm);
        }
    return z.y / best;
}

}  // namespace thetam::oracle
