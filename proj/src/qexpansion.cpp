#include "qexpansion.hpp"

#include <cmath>
#include <stdexcept>

namespace thetam {

namespace {

long long checked_ll(__int128 v, const char* what) {
    if (v > __int128(1) << 62 || v < -(__int128(1) << 62))
        throw std::overflow_error(std::string("coefficient overflow in ") + what);
    return (long long)v;
}

// series[k] holds the q^k coefficient, truncated at q^N.
std::vector<long long> mul_trunc(const std::vector<long long>& f,
                                 const std::vector<long long>& g, size_t N) {
    std::vector<long long> h(N + 1, 0);
    for (size_t i = 0; i <= N && i < f.size(); ++i) {
        if (f[i] == 0) continue;
        __int128 fi = f[i];
        for (size_t j = 0; i + j <= N && j < g.size(); ++j) {
            if (g[j] == 0) continue;
            h[i + j] = checked_ll(__int128(h[i + j]) + fi * g[j], "series product");
        }
    }
    return h;
}

std::vector<long long> eta24_trunc(size_t N) {
    // prod (1-q^k)^24 via (prod (1-q^k))^8 cubed, using Euler's pentagonal
    // series for the first factor.
    std::vector<long long> euler(N + 1, 0);
    euler[0] = 1;
    for (long long k = 1;; ++k) {
        long long g1 = k * (3 * k - 1) / 2;
        long long g2 = k * (3 * k + 1) / 2;
        if (g1 > (long long)N && g2 > (long long)N) break;
        long long sign = (k % 2 == 0) ? 1 : -1;
        if (g1 <= (long long)N) euler[size_t(g1)] += sign;
        if (g2 <= (long long)N) euler[size_t(g2)] += sign;
    }
    auto e2 = mul_trunc(euler, euler, N);
    auto e4 = mul_trunc(e2, e2, N);
    auto e8 = mul_trunc(e4, e4, N);
    auto e16 = mul_trunc(e8, e8, N);
    return mul_trunc(e16, e8, N);
}

std::vector<long long> sigma_series(size_t N, int k, long long scale, long long sign) {
    // 1 + sign*scale * sum sigma_k(n) q^n
    std::vector<long long> s(N + 1, 0);
    s[0] = 1;
    for (long long d = 1; d <= (long long)N; ++d) {
        __int128 dk = 1;
        for (int i = 0; i < k; ++i) dk *= d;
        for (long long n = d; n <= (long long)N; n += d)
            s[size_t(n)] = checked_ll(__int128(s[size_t(n)]) + __int128(sign) * scale * dk,
                                      "Eisenstein series");
    }
    return s;
}

}  // namespace

std::vector<long long> delta_coefficients(long long N) {
    if (N < 1) throw std::domain_error("delta_coefficients: N >= 1");
    auto p = eta24_trunc(size_t(N - 1));  // tau(n) = coefficient of q^{n-1} in prod
    std::vector<long long> tau(p.begin(), p.begin() + size_t(N));
    return tau;
}

QExpansion delta_qexp(long long N) {
    auto tau = delta_coefficients(N);
    QExpansion f;
    f.m = 12;
    f.coeffs.assign(tau.begin(), tau.end());
    return f;
}

QExpansion level1_eigenform(int m, long long N) {
    int e4 = 0, e6 = 0;
    switch (m) {
        case 12: e4 = 0; e6 = 0; break;
        case 16: e4 = 1; e6 = 0; break;
        case 18: e4 = 0; e6 = 1; break;
        case 20: e4 = 2; e6 = 0; break;
        case 22: e4 = 1; e6 = 1; break;
        case 26: e4 = 2; e6 = 1; break;
        default:
            throw std::domain_error("level1_eigenform: m must be in {12,16,18,20,22,26}");
    }
    auto tau = delta_coefficients(N);
    std::vector<double> f(size_t(N), 0.0);  // coefficient of q^n at index n-1
    for (long long n = 1; n <= N; ++n) f[size_t(n - 1)] = double(tau[size_t(n - 1)]);
    auto mult_by = [&](const std::vector<long long>& g) {
        // multiply the cusp-form series (starting at q^1) by g (starting at q^0)
        std::vector<double> h(size_t(N), 0.0);
        for (long long i = 1; i <= N; ++i) {
            if (f[size_t(i - 1)] == 0.0) continue;
            for (long long j = 0; i + j <= N; ++j)
                h[size_t(i + j - 1)] += f[size_t(i - 1)] * double(g[size_t(j)]);
        }
        f = std::move(h);
    };
    if (e4 > 0 || e6 > 0) {
        auto E4 = sigma_series(size_t(N), 3, 240, +1);
        auto E6 = sigma_series(size_t(N), 5, 504, -1);
        for (int i = 0; i < e4; ++i) mult_by(E4);
        for (int i = 0; i < e6; ++i) mult_by(E6);
    }
    QExpansion out;
    out.m = m;
    out.coeffs.assign(f.begin(), f.end());
    return out;
}

long long eval_required_coeffs(int m, double y) {
    // tail bound sum_{n>N} n^{m/2} d(n) e^{-2 pi n y} < 1e-14 e^{-2 pi y};
    // crude d(n) <= n, solved by doubling.
    double target = std::log(1e-14) - 2.0 * M_PI * y;
    for (long long N = 16;; N *= 2) {
        double logterm = (0.5 * m + 1.0) * std::log(double(N)) - 2.0 * M_PI * double(N) * y;
        double logtail = logterm + std::log(2.0 / (2.0 * M_PI * y));  // geometric-ish envelope
        if (logtail < target) return N;
        if (N > (1LL << 40)) throw std::domain_error("eval_cusp_form: y too small");
    }
}

cplx eval_cusp_form(const QExpansion& f, const Point& z) {
    if (!(z.y >= 1e-3))
        throw std::domain_error("eval_cusp_form: height below supported range");
    long long need = eval_required_coeffs(f.m, z.y);
    if (need > f.N())
        throw std::domain_error("eval_cusp_form: insufficient coefficients, need N >= " +
                                std::to_string(need));
    cplx q = std::exp(cplx(0.0, 2.0 * M_PI) * z.to_complex());
    // Horner over the tail keeps the evaluation stable for |q| near 1.
    cplx acc(0.0, 0.0);
    for (long long n = need; n >= 1; --n) acc = acc * q + f.a(n);
    return acc * q;
}

namespace {

// Gauss-Kronrod 7-15 panel: returns (integral, error estimate)
template <typename F>
std::pair<double, double> gk15(const F& fn, double a, double b) {
    static const double xk[8] = {0.0,
                                 0.2077849550078985,
                                 0.4058451513773972,
                                 0.5860872354676911,
                                 0.7415311855993945,
                                 0.8648644233597691,
                                 0.9491079123427585,
                                 0.9914553711208126};
    static const double wk[8] = {0.2094821410847278, 0.2044329400752989,
                                 0.1903505780647854, 0.1690047266392679,
                                 0.1406532597155259, 0.1047900103222502,
                                 0.0630920926299786, 0.0229353220105292};
    static const double wg[4] = {0.4179591836734694, 0.3818300505051189,
                                 0.2797053914892767, 0.1294849661688697};
    double c = 0.5 * (a + b), h = 0.5 * (b - a);
    double f0 = fn(c);
    double resk = wk[0] * f0, resg = wg[0] * f0;
    for (int i = 1; i < 8; ++i) {
        double fa = fn(c - h * xk[i]), fb = fn(c + h * xk[i]);
        resk += wk[i] * (fa + fb);
        if (i % 2 == 0) resg += wg[i / 2] * (fa + fb);
    }
    return {resk * h, std::fabs(resk - resg) * h};
}

template <typename F>
double panels(const F& fn, double a, double b, double tol, int depth) {
    auto [v, e] = gk15(fn, a, b);
    if (depth <= 0 || e < tol) return v;
    double m = 0.5 * (a + b);
    return panels(fn, a, m, 0.5 * tol, depth - 1) + panels(fn, m, b, 0.5 * tol, depth - 1);
}

template <typename F>
double integrate(const F& fn, double a, double b, double tol) {
    return panels(fn, a, b, tol, 24);
}

}  // namespace

double petersson_norm(const QExpansion& f, PeterssonConvention conv) {
    const int m = f.m;
    // inner integral over y on [y0(x), y0(x)+cut]; the integrand decays like
    // e^{-4 pi y} so the remainder beyond the cut is far below tolerance
    const double cut = 12.0;
    auto integrand = [&](double x, double y) {
        cplx v = eval_cusp_form(f, Point(x, y));
        return std::pow(y, m - 2) * std::norm(v);
    };
    auto inner = [&](double x) {
        double y0 = std::sqrt(1.0 - x * x);  // the arc |z| = 1
        auto fy = [&](double y) { return integrand(x, y); };
        return integrate(fy, y0, y0 + cut, 1e-18);
    };
    double total = integrate(inner, -0.5, 0.5, 1e-16);
    if (!(total > 0.0) || !std::isfinite(total))
        throw std::runtime_error("petersson_norm: quadrature failed to converge");
    if (conv == PeterssonConvention::probability) total /= M_PI / 3.0;
    return total;
}

}  // namespace thetam
