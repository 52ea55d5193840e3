#include "halfplane.hpp"

#include <cmath>

namespace thetam {

Mat2R point_matrix(const Point& z) {
    if (!(z.y > 0.0)) throw std::domain_error("point_matrix: y must be positive");
    double s = std::sqrt(z.y);
    return {s, z.x / s, 0.0, 1.0 / s};
}

double u_invariant(const Mat2R& g) {
    double dt = g.det();
    if (dt == 0.0) throw std::domain_error("u_invariant: determinant is zero");
    double ad = std::fabs(dt);
    return (g.frob2() - 2.0 * ad) / (4.0 * ad);
}

bool mu_degenerate(const Mat2R& g) { return g.det() == 0.0; }

cplx mu(const Mat2R& g) {
    double dt = g.det();
    if (dt <= 0.0) return cplx(0.0, 0.0);
    cplx den(g.b - g.c, g.a + g.d);
    return cplx(0.0, 2.0 * std::sqrt(dt)) / den;
}

cplx mu_pow(const Mat2R& g, int m) {
    cplx base = mu(g);
    cplx acc(1.0, 0.0);
    int e = m;
    while (e > 0) {
        if (e & 1) acc *= base;
        base *= base;
        e >>= 1;
    }
    return acc;
}

cplx bergman_test_function(const Mat2R& x, Weight w) {
    double nr = x.det();
    if (nr <= 0.0) return cplx(0.0, 0.0);
    int m = w.m;
    // exp(-2 pi Nr) Nr^{m/2-1} |mu|^m assembled in log-space so large m and
    // large Nr cannot overflow separately.
    cplx phase = mu(x);
    double absmu = std::abs(phase);
    cplx unit = phase / absmu;
    double logmag = -2.0 * M_PI * nr + (0.5 * m - 1.0) * std::log(nr) + m * std::log(absmu);
    cplx unit_pow(1.0, 0.0);
    cplx base = unit;
    int e = m;
    while (e > 0) {
        if (e & 1) unit_pow *= base;
        base *= base;
        e >>= 1;
    }
    return std::exp(logmag) * unit_pow;
}

ReduceResult reduce_to_fundamental(const Point& z0) {
    double x = z0.x, y = z0.y;
    Mat2Z gamma;  // identity
    const Mat2Z S{0, -1, 1, 0};
    for (int iter = 0; iter < 10000; ++iter) {
        double n = std::nearbyint(x);
        if (n != 0.0) {
            long long t = static_cast<long long>(n);
            x -= double(t);
            gamma = Mat2Z{1, -t, 0, 1} * gamma;
        }
        double r2 = x * x + y * y;
        if (r2 >= 1.0 - 1e-15) break;
        // z -> -1/z
        x = -x / r2;
        y = y / r2;
        gamma = S * gamma;
    }
    return ReduceResult{Point(x, y), gamma, y};
}

}  // namespace thetam
