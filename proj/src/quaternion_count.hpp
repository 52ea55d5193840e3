#pragma once

#include <cstdint>
#include <stdexcept>
#include <utility>

#include "rational.hpp"

namespace thetam {

// Imaginary quadratic field E = Q(sqrt(D_E)) with its maximal-order norm
// form: Nr(x + y w) = x^2 + xy + (1-D_E)/4 y^2 for D_E = 1 mod 4, and
// x^2 + |D_E|/4 y^2 for D_E = 0 mod 4.
struct ImagQuadField {
    long long D_E;
    long long b_coef, c_coef;  // Nr(x + y w) = x^2 + b x y + c y^2

    explicit ImagQuadField(long long d) : D_E(d) {
        if (d >= 0) throw std::domain_error("discriminant must be negative");
        long long m4 = ((d % 4) + 4) % 4;
        if (m4 == 1) {
            b_coef = 1;
            c_coef = (1 - d) / 4;
        } else if (m4 == 0) {
            b_coef = 0;
            c_coef = -d / 4;
        } else {
            throw std::domain_error("not a fundamental discriminant mod 4");
        }
    }
    long long norm(long long x, long long y) const {
        return x * x + b_coef * x * y + c_coef * y * y;
    }
    long long trace(long long x, long long y) const { return 2 * x + b_coef * y; }
};

struct FieldElem {
    long long x = 0, y = 0;  // x + y w
};

// Division-order model: elements xi = (a, D_B b; sigma(b), sigma(a)) with
// a, b in O_E; Nr xi = Nr a - D_B Nr b.  (The dual-lattice superset with
// a, b in the codifferent and a + b integral is exposed behind the
// wide_lattice flag; counts there carry sqrt(D_E)-denominator bookkeeping.)
struct DivisionOrderModel {
    ImagQuadField field;
    long long D_B;
    bool wide_lattice = false;

    DivisionOrderModel(ImagQuadField f, long long db, bool wide = false)
        : field(f), D_B(db), wide_lattice(wide) {
        if (db < 1) throw std::domain_error("D_B must be positive");
    }
};

// Relative Cartan data of the evaluation point: lambda >= 1 the larger
// singular value, theta2 the rotation entering the ball geometry.
struct CartanParams {
    double lambda = 1.0;
    double theta1 = 0.0, theta2 = 0.0;

    CartanParams() = default;
    explicit CartanParams(double l, double t1 = 0.0, double t2 = 0.0)
        : lambda(l), theta1(t1), theta2(t2) {
        if (!(lambda >= 1.0)) throw std::domain_error("lambda must be >= 1");
    }
};

/// Nr a - D_B Nr b, exact.
long long quat_norm(const DivisionOrderModel& m, FieldElem a, FieldElem b);

/// u = D_B Nr b / |Nr a - D_B Nr b|, exact rational; domain error at norm 0.
Rat quat_u(const DivisionOrderModel& m, FieldElem a, FieldElem b);

/// |{(a,b) : Nr a - D_B Nr b = n, u <= delta}| for lambda = 1 by exact
/// lattice scan; for lambda > 1 the displayed Cartan-ball inequalities with
/// floating lambda coefficients and 1e-12 slack.
long long count_quat(const DivisionOrderModel& m, const CartanParams& cartan, long long n,
                     const Rat& delta);

/// |D_E|^{2+eps} N^eps [N^3 delta^2 + (lambda+1/lambda)^{2+eps}
/// (N^{5/2} delta^{3/2} + N)] for delta < 1; the summed per-n bound
/// ((lambda+1/lambda) n)^{2+2eps} delta^2 for delta >= 1.  Constant 1.
double division_bound_rhs(double N, double delta, double lambda, long long D_E, double eps);

}  // namespace thetam
