#include "lattice_count.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <map>

namespace thetam {

namespace {

// Frobenius inner product <A,B> = Tr(A B^T).
double frob_ip(const Mat2R& A, const Mat2R& B) {
    return A.a * B.a + A.b * B.b + A.c * B.c + A.d * B.d;
}

// Gram matrix of v -> ||L (sum v_i E_i) R||_F^2 over the order basis
// E1=[[1,0],[0,0]], E2=[[0,1],[0,0]], E3=[[0,0],[q,0]], E4=[[0,0],[0,1]].
std::array<std::array<double, 4>, 4> order_gram(const OrderSpec& order, const Mat2R& L,
                                                const Mat2R& R) {
    if (L.det() == 0.0 || R.det() == 0.0)
        throw std::domain_error("enumerate_constrained: L and R must be invertible");
    double q = (order.kind == OrderSpec::Kind::eichler_split) ? double(order.q) : 1.0;
    std::array<Mat2R, 4> basis = {Mat2R{1, 0, 0, 0}, Mat2R{0, 1, 0, 0},
                                  Mat2R{0, 0, q, 0}, Mat2R{0, 0, 0, 1}};
    std::array<Mat2R, 4> img;
    for (int i = 0; i < 4; ++i) img[i] = L * basis[i] * R;
    std::array<std::array<double, 4>, 4> G{};
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) G[i][j] = frob_ip(img[i], img[j]);
    return G;
}

// Left-looking Cholesky, G = U^T U with U upper triangular.
std::array<std::array<double, 4>, 4> cholesky_upper(std::array<std::array<double, 4>, 4> G) {
    std::array<std::array<double, 4>, 4> U{};
    for (int i = 0; i < 4; ++i) {
        double s = G[i][i];
        for (int k = 0; k < i; ++k) s -= U[k][i] * U[k][i];
        if (!(s > 0.0)) throw std::domain_error("enumeration form is not positive definite");
        U[i][i] = std::sqrt(s);
        for (int j = i + 1; j < 4; ++j) {
            double t = G[i][j];
            for (int k = 0; k < i; ++k) t -= U[k][i] * U[k][j];
            U[i][j] = t / U[i][i];
        }
    }
    return U;
}

constexpr double kIntervalCap = 4.611686018427387904e18;  // 2^62

// Fincke-Pohst over Z^4 in basis coordinates (v1..v4), last coordinate
// outermost.  Visits every v with Q(v) <= C.
template <typename Fn>
void fp_enumerate(const std::array<std::array<double, 4>, 4>& U, double C, Fn&& visit) {
    std::array<long long, 4> v{};
    std::array<double, 4> center{};   // offset for coordinate i given outer ones
    std::array<double, 4> remain{};   // budget left at level i
    remain[3] = C;
    center[3] = 0.0;

    int i = 3;
    std::array<long long, 4> lo{}, hi{};
    auto set_range = [&](int lvl) {
        double r = std::sqrt(std::max(0.0, remain[lvl])) / U[lvl][lvl];
        double c = center[lvl];
        if (std::fabs(c) + r > kIntervalCap)
            throw std::overflow_error("enumeration interval exceeds 2^62");
        lo[lvl] = llround(std::ceil(-r - c - 1e-9));
        hi[lvl] = llround(std::floor(r - c + 1e-9));
        v[lvl] = lo[lvl];
    };
    set_range(3);
    while (true) {
        if (v[i] > hi[i]) {
            ++i;
            if (i > 3) break;
            ++v[i];
            continue;
        }
        double t = U[i][i] * (double(v[i]) + center[i]);
        double used = t * t;
        if (i == 0) {
            if (used <= remain[0] + 1e-9) visit(v);
            ++v[0];
        } else {
            // descend
            int j = i - 1;
            remain[j] = remain[i] - used;
            if (remain[j] < -1e-9) {
                ++v[i];
                continue;
            }
            double off = 0.0;
            for (int k = i; k < 4; ++k) off += U[j][k] * double(v[k]);
            center[j] = off / U[j][j];
            i = j;
            set_range(i);
        }
    }
}

int bits_of(int128 x) {
    if (x < 0) x = -x;
    int b = 0;
    while (x > 0) {
        x >>= 1;
        ++b;
    }
    return b;
}

// Exact decision of u(g^-1 xi g) <= delta for xi integral, det xi = n > 0,
// when the point has rational x and y^2.  All arithmetic in int128; a
// magnitude precheck guarantees no overflow for the advertised ranges.
struct ExactUTest {
    int128 px, qx, py, qy;  // x = px/qx, y^2 = py/qy (reduced, qx,qy,py > 0)
    int128 pd, qd;          // delta = pd/qd >= 0
    int128 rhs_factor;      // (2 qd + 4 pd) * qx^4 * py * qy

    ExactUTest(const RatPoint& z, const Rat& delta) {
        px = z.x.num();
        qx = z.x.den();
        py = z.y2.num();
        qy = z.y2.den();
        pd = delta.num();
        qd = delta.den();
        if (pd < 0) throw std::domain_error("delta must be >= 0");
        rhs_factor = checked_mul(checked_add(2 * qd, 4 * pd),
                                 checked_mul(checked_mul(checked_mul(qx, qx), checked_mul(qx, qx)),
                                             checked_mul(py, qy)));
    }

    // Largest |entry| this tester can decide without overflow.
    void check_capacity(double max_entry) const {
        int bE = (int)std::ceil(std::log2(max_entry + 2.0));
        int bqx = bits_of(qx), bpx = bits_of(px), bpy = bits_of(py), bqy = bits_of(qy);
        int t1 = 2 * (bE + bqx + bpx + 1) + 2 * bqx + bpy + bqy;
        int t2 = 2 * bE + 2 * bpy + 4 * bqx;
        int t3 = 2 * (bE + 2 * std::max(bqx, bpx) + 2) + 2 * bqy;
        int lhs_bits = std::max({t1, t2, t3}) + 3 + bits_of(qd);
        int rhs_bits = bE + bits_of(rhs_factor) + 3;
        if (std::max(lhs_bits, rhs_bits) + 4 > 126)
            throw std::overflow_error("exact u-test would overflow 128-bit arithmetic");
    }

    bool operator()(long long a, long long b, long long c, long long d, long long n) const {
        int128 A1 = int128(a) * qx - px * c;
        int128 A2 = int128(d) * qx + px * c;
        int128 B = int128(b) * qx * qx + int128(a - d) * px * qx - int128(c) * px * px;
        int128 qx2 = qx * qx;
        int128 lhs = (A1 * A1 + A2 * A2) * qx2 * py * qy + int128(c) * c * py * py * qx2 * qx2 +
                     B * B * qy * qy;
        return lhs * qd <= int128(n) * rhs_factor;
    }

    // Same test in trace/traceless coordinates s = a+d, e = a-d, t = b+c,
    // f = b-c (t = f mod 2): decides 2 s^2 + 4||h0||^2 <= n(16 delta + 8).
    bool traceless(long long s, long long e, long long t, long long f, long long n) const {
        int128 C1 = int128(e) * qx - px * (t - f);
        int128 C2 = int128(t + f) * qx * qx + 2 * int128(e) * px * qx - int128(t - f) * px * px;
        int128 C3 = t - f;
        int128 qx2 = qx * qx;
        int128 lhs = 2 * (C1 * C1 + int128(s) * s * qx2) * qx2 * py * qy + C2 * C2 * qy * qy +
                     C3 * C3 * py * py * qx2 * qx2;
        return lhs * qd <= int128(n) * 4 * rhs_factor;
    }
};

Mat2R rat_point_matrix(const RatPoint& z) { return point_matrix(z.to_point()); }

}  // namespace

void enumerate_constrained_visit(const OrderSpec& order, const Mat2R& L, const Mat2R& R,
                                 double bound,
                                 const std::function<void(const Mat2I&)>& visit) {
    if (!(bound > 0.0)) throw std::domain_error("bound must be positive");
    auto G = order_gram(order, L, R);
    auto U = cholesky_upper(G);
    long long q = (order.kind == OrderSpec::Kind::eichler_split) ? order.q : 1;
    fp_enumerate(U, bound, [&](const std::array<long long, 4>& v) {
        visit(Mat2I{v[0], v[1], q * v[2], v[3]});
    });
}

std::vector<Mat2I> enumerate_constrained(const OrderSpec& order, const Mat2R& L,
                                         const Mat2R& R, double bound) {
    std::vector<Mat2I> out;
    enumerate_constrained_visit(order, L, R, bound,
                                [&](const Mat2I& m) { out.push_back(m); });
    return out;
}

long long count_norm_ball(const CountQuery& q) {
    if (q.n < 1) throw std::domain_error("norm must be >= 1");
    if (q.delta < 0.0) throw std::domain_error("delta must be >= 0");
    if (std::fabs(q.g.det() - 1.0) > 1e-12)
        throw std::domain_error("count_norm_ball: query matrix must have det 1");
    Mat2R Linv = q.g.inverse();
    double bound = double(q.n) * (4.0 * q.delta + 2.0) * (1.0 + 1e-9);
    long long count = 0;
    enumerate_constrained_visit(q.order, Linv, q.g, bound, [&](const Mat2I& xi) {
        if (xi.det() != q.n) return;
        Mat2R h = Linv * xi.to_real() * q.g;
        if (u_invariant(h) <= q.delta * (1.0 + 1e-12) + 1e-15) ++count;
    });
    return count;
}

long long count_norm_ball(const OrderSpec& order, const RatPoint& z, long long n,
                          const Rat& delta) {
    if (n < 1) throw std::domain_error("norm must be >= 1");
    ExactUTest test(z, delta);
    Mat2R g = rat_point_matrix(z);
    Mat2R Linv = g.inverse();
    double bound = double(n) * (4.0 * delta.to_double() + 2.0) * (1.0 + 1e-9) + 1e-9;
    test.check_capacity(std::sqrt(bound) * std::max(1.0, Linv.frob2()) * 4.0);
    long long count = 0;
    enumerate_constrained_visit(order, Linv, g, bound, [&](const Mat2I& xi) {
        if (xi.det() != n) return;
        if (test(xi.a, xi.b, xi.c, xi.d, n)) ++count;
    });
    return count;
}

namespace detail {

// Profile enumeration via the trace/traceless split: xi0 runs over a 3D
// ellipsoid, the trace s over the short interval fixed by 4n = s^2 + f^2 -
// e^2 - t^2.  Orders of magnitude faster than the 4D pass when N delta is
// large; full order only.
CountProfile count_profile_traceless(const RatPoint& z, long long N, const Rat& delta) {
    CountProfile p;
    p.order = OrderSpec::full();
    p.N = N;
    p.delta = delta.to_double();
    p.counts.assign(size_t(N), 0);

    ExactUTest test(z, delta);
    Mat2R g = rat_point_matrix(z);
    Mat2R gi = g.inverse();
    // Traceless basis in (e,t,f): [[e/2,(t+f)/2],[(t-f)/2,-e/2]].
    std::array<Mat2R, 3> basis = {Mat2R{0.5, 0, 0, -0.5}, Mat2R{0, 0.5, 0.5, 0},
                                  Mat2R{0, 0.5, -0.5, 0}};
    std::array<Mat2R, 3> img;
    for (int i = 0; i < 3; ++i) img[i] = gi * basis[i] * g;
    std::array<std::array<double, 4>, 4> G{};
    for (int i = 0; i < 4; ++i) G[i][i] = 1.0;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) G[i][j] = frob_ip(img[i], img[j]);
    // Embed the 3x3 form in the 4x4 enumerator with a dummy 4th coordinate.
    G[3][3] = 1e30;
    auto U = cholesky_upper(G);

    double dd = delta.to_double();
    double bound = double(N) * (4.0 * dd + 2.0) * (1.0 + 1e-9) + 1e-9;
    test.check_capacity(std::sqrt(bound) * std::max(1.0, gi.frob2()) * 4.0 + std::sqrt(4.0 * N));

    fp_enumerate(U, bound, [&](const std::array<long long, 4>& v) {
        long long e = v[0], t = v[1], f = v[2];
        if (((t ^ f) & 1LL) != 0) return;  // b,c integral needs t = f mod 2
        long long D0 = f * f - e * e - t * t;  // 4 det xi0
        // 4n = s^2 + D0 with 1 <= n <= N and s = e mod 2.
        long long s2min = 4 - D0 > 0 ? 4 - D0 : 0;
        long long s2max = 4 * N - D0;
        if (s2max < s2min) return;
        long long smax = llround(std::floor(std::sqrt(double(s2max))));
        while (smax * smax > s2max) --smax;
        while ((smax + 1) * (smax + 1) <= s2max) ++smax;
        long long smin = llround(std::ceil(std::sqrt(double(s2min))));
        while (smin * smin < s2min) ++smin;
        while (smin > 0 && (smin - 1) * (smin - 1) >= s2min) --smin;
        for (long long as = smin; as <= smax; ++as) {
            if (((as ^ e) & 1LL) != 0) continue;
            long long fournsq = as * as + D0;
            if (fournsq < 4 || fournsq % 4 != 0) continue;
            long long n = fournsq / 4;
            if (n > N) continue;
            int reps = (as == 0) ? 1 : 2;  // s and -s
            for (int r = 0; r < reps; ++r) {
                long long s = (r == 0) ? as : -as;
                if (test.traceless(s, e, t, f, n)) ++p.counts[size_t(n - 1)];
            }
        }
    });
    return p;
}

}  // namespace detail

CountProfile count_profile(const OrderSpec& order, const RatPoint& z, long long N,
                           const Rat& delta) {
    if (N < 1) throw std::domain_error("profile horizon must be >= 1");
    double dd = delta.to_double();
    double ball = double(N) * (4.0 * dd + 2.0);
    if (order.kind == OrderSpec::Kind::full && ball * ball > 2.5e8)
        return detail::count_profile_traceless(z, N, delta);

    CountProfile p;
    p.order = order;
    p.N = N;
    p.delta = dd;
    p.counts.assign(size_t(N), 0);
    ExactUTest test(z, delta);
    Mat2R g = rat_point_matrix(z);
    Mat2R gi = g.inverse();
    double bound = ball * (1.0 + 1e-9) + 1e-9;
    test.check_capacity(std::sqrt(bound) * std::max(1.0, gi.frob2()) * 4.0);
    enumerate_constrained_visit(order, gi, g, bound, [&](const Mat2I& xi) {
        long long n = xi.det();
        if (n < 1 || n > N) return;
        // the n-ball is smaller than the N-ball; re-test against n
        if (test(xi.a, xi.b, xi.c, xi.d, n)) ++p.counts[size_t(n - 1)];
    });
    return p;
}

CountProfile count_profile(const OrderSpec& order, const Mat2R& g, long long N,
                           double delta) {
    if (N < 1) throw std::domain_error("profile horizon must be >= 1");
    CountProfile p;
    p.order = order;
    p.N = N;
    p.delta = delta;
    p.counts.assign(size_t(N), 0);
    Mat2R gi = g.inverse();
    double bound = double(N) * (4.0 * delta + 2.0) * (1.0 + 1e-9);
    enumerate_constrained_visit(order, gi, g, bound, [&](const Mat2I& xi) {
        long long n = xi.det();
        if (n < 1 || n > N) return;
        Mat2R h = gi * xi.to_real() * g;
        if (u_invariant(h) <= delta * (1.0 + 1e-12) + 1e-15) ++p.counts[size_t(n - 1)];
    });
    return p;
}

double second_moment(const CountProfile& p, Weighting w, double A) {
    double s = 0.0;
    for (long long n = 1; n <= p.N; ++n) {
        double cnt = double(p.counts[size_t(n - 1)]);
        double wn = 1.0;
        switch (w) {
            case Weighting::uniform: wn = 1.0; break;
            case Weighting::reciprocal: wn = 1.0 / double(n); break;
            case Weighting::exp_tail: wn = std::exp(-double(n) / A) / double(n); break;
        }
        s += wn * cnt * cnt;
    }
    return s;
}

TraceSplitDiagnostics trace_split_pairs(const OrderSpec& order, const RatPoint& z,
                                        long long N, const Rat& delta) {
    if (N < 1) throw std::domain_error("trace horizon must be >= 1");
    // histogram of counted elements by (n, |trace|)
    std::vector<std::map<long long, long long>> hist;
    hist.resize(size_t(N));
    ExactUTest test(z, delta);
    Mat2R g = rat_point_matrix(z);
    Mat2R gi = g.inverse();
    double bound = double(N) * (4.0 * delta.to_double() + 2.0) * (1.0 + 1e-9) + 1e-9;
    test.check_capacity(std::sqrt(bound) * std::max(1.0, gi.frob2()) * 4.0);
    enumerate_constrained_visit(order, gi, g, bound, [&](const Mat2I& xi) {
        long long n = xi.det();
        if (n < 1 || n > N) return;
        if (test(xi.a, xi.b, xi.c, xi.d, n))
            ++hist[size_t(n - 1)][std::llabs(xi.a + xi.d)];
    });
    TraceSplitDiagnostics out;
    for (long long n = 1; n <= N; ++n) {
        long long total = 0, sq = 0;
        for (const auto& [tr, cnt] : hist[size_t(n - 1)]) {
            total += cnt;
            sq += cnt * cnt;
        }
        out.equal_trace_pairs += sq;
        out.unequal_trace_pairs += total * total - sq;
    }
    return out;
}

double split_bound_rhs(double N, double delta, double y, double eps) {
    if (N < 1.0 || delta < 0.0 || !(y > 0.0))
        throw std::domain_error("split_bound_rhs: need N >= 1, delta >= 0, y > 0");
    double t1 = std::pow(N, 3.0 + eps) * delta * delta;
    double t2 = N;
    double t3 = std::pow(N, 0.5 + eps) *
                std::min(std::sqrt(N), std::sqrt(N * delta) + 1.0) * (y * y * N * delta + 1.0);
    return t1 + t2 + t3;
}

}  // namespace thetam
