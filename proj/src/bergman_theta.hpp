#pragma once

#include <map>
#include <vector>

#include "lattice_count.hpp"
#include "qexpansion.hpp"

namespace thetam {

struct KernelSumParams {
    Weight m;
    double tol = 1e-9;   // absolute truncation tolerance for the tail
    double u_max = 0.0;  // derived truncation radius; 0 = derive from tol

    explicit KernelSumParams(Weight w, double tol_ = 1e-9) : m(w), tol(tol_) {
        if (m.m <= 4) throw std::domain_error("kernel sums need weight m > 4");
        if (!(tol > 0.0)) throw std::domain_error("tolerance must be positive");
    }
};

/// Truncation radius making the tail bound n^{1+eps} (1+u)^{1-m/2} fall
/// below tol.
double kernel_u_max(long long n, const KernelSumParams& p);

/// S(n; z, w) = sum over xi in the order with det xi = n, u(g_z^-1 xi g_w)
/// <= u_max of mu(g_z^-1 xi g_w)^m.
cplx kernel_sum(long long n, const Point& z, const Point& w, const KernelSumParams& p,
                const OrderSpec& order = OrderSpec::full());

/// kappa(n) = S(n; z, w) / S(1; z, w) for the one-dimensional level-1 spaces.
/// Throws when |S(1)| is below tolerance (node of the form, move the point).
cplx hecke_ratio(long long n, Weight m, const Point& z, const Point& w,
                 double tol = 1e-9);

/// c(n) = n^{m/2-1} sum_{ad=n, 0<=b<d} (f|_m [[a,b],[0,d]])(z) for n = 1..N,
/// slash (f|_m alpha)(z) = det(alpha)^{m/2} (cz+d)^{-m} f(alpha z).
std::vector<cplx> elementary_theta_coeffs(const QExpansion& f, const Point& z, long long N);

/// n^{m/2-1} S(n; z, w): the n-th Fourier coefficient of the theta kernel in
/// the modular variable.
cplx theta_coefficient(long long n, const Point& z, const Point& w, const KernelSumParams& p,
                       const OrderSpec& order = OrderSpec::full());

/// Parseval evaluation of the horocycle L2-mass:
/// sum_{n<=N} n^{m-2} |S(n;z,z)|^2 e^{-4 pi n tau2}, N extended until the
/// next term falls below 1e-14 of the running sum (and at most n_cap).
double theta_horocycle_l2(const Point& z, const KernelSumParams& p, double tau2,
                          long long n_cap = 64);

/// (8 pi/(m-1))^2 y^{2m} ||f_M||^2 |f(z)|^4 / <f,f>^2 with ||f_M||^2 by
/// Parseval over the strip; all m-dependent factors in log-space.
double spectral_lower_bound(const Point& z, Weight m);

/// Profiles on a delta grid: grid[i].first = delta, grid[i].second = profile
/// at that delta (all with the same horizon N >= (qD_B)^2 m + tail room).
using DeltaGridProfiles = std::vector<std::pair<double, CountProfile>>;

/// (qD_B)^{1+eps} Gamma(m-1)/(4pi)^m { (m/2) int_0^infty (sqrt(S1)+sqrt(S2))
/// ddelta/(1+delta)^{m/2+1} }^2 with piecewise-constant counts between grid
/// points; S1 is the 1/n-weighted square sum up to (qD_B)^2 m, S2 the
/// exp(-n/(qD_B)^2)/n tail.  eps = 0, implied constant 1.
double geometric_upper_bound(Weight m, long long q, long long D_B,
                             const DeltaGridProfiles& profiles);

/// Default delta grid for the bound evaluator, covering [0, delta*] with
/// (1+delta*)^{-m/2} < 1e-12.
std::vector<double> default_delta_grid(Weight m);

}  // namespace thetam
