#pragma once

#include <complex>
#include <vector>

#include "halfplane.hpp"

namespace thetam {

// Fourier coefficients a(1..N) of a cusp form, arithmetically normalized
// (a(1) = 1 for the eigenforms built here).
struct QExpansion {
    int m = 12;
    std::vector<cplx> coeffs;  // coeffs[n-1] = a(n)

    long long N() const { return (long long)coeffs.size(); }
    cplx a(long long n) const { return coeffs.at(size_t(n - 1)); }
};

/// Exact tau(1..N) from q prod_{k>=1} (1-q^k)^24, integer polynomial arithmetic.
std::vector<long long> delta_coefficients(long long N);

/// The discriminant form as a QExpansion with N coefficients.
QExpansion delta_qexp(long long N = 1200);

/// The unique arithmetically normalized eigenform of weight m on SL2(Z),
/// m in {12,16,18,20,22,26}; built as E4^a E6^b * Delta.
QExpansion level1_eigenform(int m, long long N = 400);

/// Sum a(n) e^{2 pi i n z}.  Errors when the stored coefficients cannot push
/// the crude tail bound |a(n)| <= n^{m/2} d(n) below 1e-14 relative at Im z.
cplx eval_cusp_form(const QExpansion& f, const Point& z);

/// Number of coefficients the tail bound requires at height y.
long long eval_required_coeffs(int m, double y);

enum class PeterssonConvention { hyperbolic, probability };

/// int_F y^m |f|^2 dx dy / y^2 over the standard fundamental domain by
/// adaptive quadrature (split along |z| = 1); the probability convention
/// divides by the level-1 covolume pi/3.
double petersson_norm(const QExpansion& f, PeterssonConvention conv);

}  // namespace thetam
