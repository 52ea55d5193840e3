#pragma once

#include <functional>
#include <vector>

#include "halfplane.hpp"
#include "rational.hpp"

namespace thetam {

// Which arithmetic lattice is enumerated.  eichler_split(q) is the set of
// integer matrices with q | c; full is M2(Z).
struct OrderSpec {
    enum class Kind { full, eichler_split } kind = Kind::full;
    long long q = 1;

    static OrderSpec full() { return {Kind::full, 1}; }
    static OrderSpec eichler(long long q) {
        if (q < 1) throw std::domain_error("eichler level must be >= 1");
        return {Kind::eichler_split, q};
    }
    bool contains_c(long long c) const {
        return kind == Kind::full || c % q == 0;
    }
    bool operator==(const OrderSpec& o) const { return kind == o.kind && q == o.q; }
};

struct Mat2I {
    long long a = 0, b = 0, c = 0, d = 0;
    long long det() const { return a * d - b * c; }
    bool operator==(const Mat2I& o) const {
        return a == o.a && b == o.b && c == o.c && d == o.d;
    }
    Mat2R to_real() const { return {double(a), double(b), double(c), double(d)}; }
};

/// All xi in the order with ||L xi R||_F^2 <= bound, via Fincke-Pohst
/// enumeration of the Gram form of xi -> L xi R on Z^4.
/// Throws std::domain_error for singular L or R, std::overflow_error when
/// interval bounds exceed 2^62.
std::vector<Mat2I> enumerate_constrained(const OrderSpec& order, const Mat2R& L,
                                         const Mat2R& R, double bound);

/// Callback flavour of the same enumeration (no materialized list).
void enumerate_constrained_visit(const OrderSpec& order, const Mat2R& L, const Mat2R& R,
                                 double bound, const std::function<void(const Mat2I&)>& visit);

struct CountQuery {
    OrderSpec order;
    Mat2R g;  // det 1 within 1e-12
    long long n = 1;
    double delta = 0.0;
};

/// |{xi in order : det xi = n, u(g^-1 xi g) <= delta}| with floating-point
/// boundary slack 1e-12.
long long count_norm_ball(const CountQuery& q);

/// Exact-boundary variant for points with rational x and y^2: the test
/// u(g^-1 xi g) <= delta is decided in integer arithmetic.
long long count_norm_ball(const OrderSpec& order, const RatPoint& z, long long n,
                          const Rat& delta);

struct CountProfile {
    OrderSpec order;
    long long N = 0;
    double delta = 0.0;
    std::vector<long long> counts;  // counts[n-1] = M(g, n; delta)

    long long at(long long n) const { return counts.at(size_t(n - 1)); }
};

/// One enumeration pass over det in [1, N], bucketed by exact determinant.
CountProfile count_profile(const OrderSpec& order, const RatPoint& z, long long N,
                           const Rat& delta);
CountProfile count_profile(const OrderSpec& order, const Mat2R& g, long long N,
                           double delta);

enum class Weighting { uniform, reciprocal, exp_tail };

/// Sum_n w_n counts[n]^2 with w_n = 1, 1/n, or exp(-n/A)/n.
double second_moment(const CountProfile& p, Weighting w, double A = 1.0);

/// N^{3+eps} delta^2 + N + N^{1/2+eps} min(N^{1/2},(N delta)^{1/2}+1)(y^2 N delta + 1),
/// implied constant 1.  Trend evaluator only.
double split_bound_rhs(double N, double delta, double y, double eps);

struct TraceSplitDiagnostics {
    long long equal_trace_pairs = 0;    // pairs with |Tr xi1| = |Tr xi2|
    long long unequal_trace_pairs = 0;  // the complementary case
};

/// Diagnostics for the second-moment pair count: sum_n M(g,n;delta)^2 split
/// by whether the two matrices share |trace|.  Reporting only.
TraceSplitDiagnostics trace_split_pairs(const OrderSpec& order, const RatPoint& z,
                                        long long N, const Rat& delta);

namespace detail {
// Trace/traceless-split profile enumeration (full order); used automatically
// for large N delta, exposed for cross-validation.
CountProfile count_profile_traceless(const RatPoint& z, long long N, const Rat& delta);
}  // namespace detail

}  // namespace thetam
