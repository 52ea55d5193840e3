#include "bergman_theta.hpp"

#include <cmath>

namespace thetam {

double kernel_u_max(long long n, const KernelSumParams& p) {
    if (p.u_max > 0.0) return p.u_max;
    // tail mass ~ C n^2 (1+u)^{1-m/2}; C = 32 absorbs the count constant
    double target = 32.0 * double(n) * double(n) / p.tol;
    double u = std::pow(target, 2.0 / (double(p.m.m) - 2.0)) - 1.0;
    return std::max(u, 4.0);
}

cplx kernel_sum(long long n, const Point& z, const Point& w, const KernelSumParams& p,
                const OrderSpec& order) {
    if (n < 1) throw std::domain_error("kernel_sum: n >= 1");
    double umax = kernel_u_max(n, p);
    Mat2R gz = point_matrix(z), gw = point_matrix(w);
    Mat2R gzi = gz.inverse();
    double bound = double(n) * (4.0 * umax + 2.0) * (1.0 + 1e-9);
    cplx acc(0.0, 0.0);
    double comp_re = 0.0, comp_im = 0.0;  // Kahan compensation
    enumerate_constrained_visit(order, gzi, gw, bound, [&](const Mat2I& xi) {
        if (xi.det() != n) return;
        Mat2R h = gzi * xi.to_real() * gw;
        if (u_invariant(h) > umax) return;
        cplx term = mu_pow(h, p.m.m);
        double tr = term.real() - comp_re;
        double ti = term.imag() - comp_im;
        double sr = acc.real() + tr;
        double si = acc.imag() + ti;
        comp_re = (sr - acc.real()) - tr;
        comp_im = (si - acc.imag()) - ti;
        acc = cplx(sr, si);
    });
    return acc;
}

cplx hecke_ratio(long long n, Weight m, const Point& z, const Point& w, double tol) {
    static const int kDimOne[] = {12, 16, 18, 20, 22, 26};
    bool ok = false;
    for (int v : kDimOne)
        if (v == m.m) ok = true;
    if (!ok) throw std::domain_error("hecke_ratio: weight must span a 1-dimensional space");
    KernelSumParams p(m, tol);
    cplx s1 = kernel_sum(1, z, w, p);
    if (std::abs(s1) < 100.0 * tol)
        throw std::runtime_error("hecke_ratio: node of the form, move the point");
    cplx sn = kernel_sum(n, z, w, p);
    return sn / s1;
}

std::vector<cplx> elementary_theta_coeffs(const QExpansion& f, const Point& z, long long N) {
    if (N < 1) throw std::domain_error("elementary_theta_coeffs: N >= 1");
    const int m = f.m;
    std::vector<cplx> c(size_t(N), cplx(0, 0));
    cplx zz = z.to_complex();
    for (long long n = 1; n <= N; ++n) {
        cplx sum(0.0, 0.0);
        for (long long d = 1; d <= n; ++d) {
            if (n % d != 0) continue;
            long long a = n / d;
            // (f|_m [[a,b],[0,d]])(z) = n^{m/2} d^{-m} f((az+b)/d)
            cplx inner(0.0, 0.0);
            for (long long b = 0; b < d; ++b) {
                cplx zp = (double(a) * zz + double(b)) / double(d);
                inner += eval_cusp_form(f, Point(zp.real(), zp.imag()));
            }
            double logfac = 0.5 * m * std::log(double(n)) - m * std::log(double(d));
            sum += std::exp(logfac) * inner;
        }
        c[size_t(n - 1)] = std::pow(double(n), 0.5 * m - 1.0) * sum;
    }
    return c;
}

cplx theta_coefficient(long long n, const Point& z, const Point& w, const KernelSumParams& p,
                       const OrderSpec& order) {
    return std::pow(double(n), 0.5 * p.m.m - 1.0) * kernel_sum(n, z, w, p, order);
}

double theta_horocycle_l2(const Point& z, const KernelSumParams& p, double tau2,
                          long long n_cap) {
    if (!(tau2 > 0.0)) throw std::domain_error("theta_horocycle_l2: tau2 > 0");
    const int m = p.m.m;
    double total = 0.0;
    for (long long n = 1; n <= n_cap; ++n) {
        cplx s = kernel_sum(n, z, z, p);
        double term = std::pow(double(n), double(m - 2)) * std::norm(s) *
                      std::exp(-4.0 * M_PI * double(n) * tau2);
        total += term;
        if (n >= 2 && term < 1e-14 * total) break;
    }
    return total;
}

double spectral_lower_bound(const Point& z, Weight w) {
    const int m = w.m;
    QExpansion f = level1_eigenform(m);
    // ||f_M||^2 by Parseval over the strip: sum |a(n)|^2 Gamma(m-1)/(4 pi n)^{m-1}
    double log_gamma = std::lgamma(double(m - 1));
    double log_norm_fm = -1e300;
    for (long long n = 1; n <= f.N(); ++n) {
        double an = std::abs(f.a(n));
        if (an == 0.0) continue;
        double lt = 2.0 * std::log(an) + log_gamma - double(m - 1) * std::log(4.0 * M_PI * double(n));
        double hi = std::max(log_norm_fm, lt), lo = std::min(log_norm_fm, lt);
        log_norm_fm = hi + std::log1p(std::exp(lo - hi));
        if (lt < log_norm_fm - 40.0 && n > 8) break;
    }
    double pet = petersson_norm(f, PeterssonConvention::probability);
    double fz = std::abs(eval_cusp_form(f, z));
    double logv = 2.0 * std::log(8.0 * M_PI / double(m - 1)) + 2.0 * m * std::log(z.y) +
                  log_norm_fm + 4.0 * std::log(fz) - 2.0 * std::log(pet);
    return std::exp(logv);
}

std::vector<double> default_delta_grid(Weight w) {
    // dyadic refinement near 0 (exactly representable, so the exact counting
    // path sees short rational deltas), doubling out past delta* with
    // (1+delta*)^{-m/2} < 1e-12
    double dstar = std::pow(1e12, 2.0 / double(w.m)) - 1.0;
    std::vector<double> grid = {0.0};
    for (double d = std::ldexp(1.0, -13); d < 2.0 * dstar; d *= 2.0) grid.push_back(d);
    return grid;
}

double geometric_upper_bound(Weight w, long long q, long long D_B,
                             const DeltaGridProfiles& profiles) {
    const int m = w.m;
    if (profiles.empty()) throw std::domain_error("geometric_upper_bound: no profiles");
    double dstar = std::pow(1e12, 2.0 / double(m)) - 1.0;
    if (profiles.back().first < dstar)
        throw std::domain_error("geometric_upper_bound: delta grid must reach (1+d)^{-m/2} < 1e-12");
    long long qd = q * D_B;
    long long N0 = qd * qd * m;

    auto sqrt_sums = [&](const CountProfile& p) {
        double s1 = 0.0, s2 = 0.0;
        for (long long n = 1; n <= p.N; ++n) {
            double cnt = double(p.counts[size_t(n - 1)]);
            if (cnt == 0.0) continue;
            if (n <= N0)
                s1 += cnt * cnt / double(n);
            else
                s2 += std::exp(-double(n) / double(qd * qd)) * cnt * cnt / double(n);
        }
        return std::pair<double, double>(std::sqrt(s1), std::sqrt(s2));
    };

    // counts are step functions of delta: integrate (1+d)^{-m/2-1} exactly on
    // each grid cell against the left-endpoint profile
    double integral = 0.0;
    for (size_t i = 0; i < profiles.size(); ++i) {
        double d_lo = profiles[i].first;
        double d_hi = (i + 1 < profiles.size()) ? profiles[i + 1].first : -1.0;
        auto [r1, r2] = sqrt_sums(profiles[i].second);
        double cell;
        if (d_hi >= 0.0)
            cell = (std::pow(1.0 + d_lo, -0.5 * m) - std::pow(1.0 + d_hi, -0.5 * m)) * (2.0 / m);
        else
            cell = std::pow(1.0 + d_lo, -0.5 * m) * (2.0 / m);
        integral += (r1 + r2) * cell;
    }
    double braced = 0.5 * double(m) * integral;
    double logfac = std::log(double(qd)) + std::lgamma(double(m - 1)) -
                    double(m) * std::log(4.0 * M_PI);
    return std::exp(logfac) * braced * braced;
}

}  // namespace thetam
