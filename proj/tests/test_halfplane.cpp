#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>

#include "halfplane.hpp"
#include "oracles.hpp"

using namespace thetam;

namespace {
std::mt19937_64 rng(0x5eed1234u);

Mat2R random_mat(double lo = -3.0, double hi = 3.0) {
    std::uniform_real_distribution<double> U(lo, hi);
    return {U(rng), U(rng), U(rng), U(rng)};
}

Mat2R random_posdet() {
    for (;;) {
        Mat2R g = random_mat();
        if (g.det() > 0.05) return g;
    }
}
}  // namespace

TEST_CASE("point_matrix basics") {
    Mat2R gi = point_matrix(Point(0, 1));
    CHECK(gi.a == doctest::Approx(1.0));
    CHECK(gi.b == doctest::Approx(0.0));
    CHECK(gi.c == doctest::Approx(0.0));
    CHECK(gi.d == doctest::Approx(1.0));

    Mat2R g4 = point_matrix(Point(0, 4));
    CHECK(g4.a == doctest::Approx(2.0));
    CHECK(g4.d == doctest::Approx(0.5));

    Mat2R g11 = point_matrix(Point(1, 1));
    CHECK(g11.a == doctest::Approx(1.0));
    CHECK(g11.b == doctest::Approx(1.0));
    CHECK(g11.d == doctest::Approx(1.0));

    // g_z . i = z and det = 1
    for (int t = 0; t < 50; ++t) {
        std::uniform_real_distribution<double> U(-2.0, 2.0);
        Point z(U(rng), 0.05 + std::fabs(U(rng)));
        Mat2R g = point_matrix(z);
        CHECK(g.det() == doctest::Approx(1.0));
        cplx img = (g.a * cplx(0, 1) + g.b) / (g.c * cplx(0, 1) + g.d);
        CHECK(img.real() == doctest::Approx(z.x));
        CHECK(img.imag() == doctest::Approx(z.y));
    }
}

TEST_CASE("point invariants") {
    CHECK_THROWS_AS(Point(0, -1), std::domain_error);
    CHECK_THROWS_AS(Point(0, 0), std::domain_error);
}

TEST_CASE("u_invariant examples and errors") {
    CHECK(u_invariant(Mat2R::identity()) == doctest::Approx(0.0));
    CHECK(u_invariant(Mat2R{2, 0, 0, 1}) == doctest::Approx(1.0 / 8.0));
    CHECK(u_invariant(Mat2R{1, 1, 0, 1}) == doctest::Approx(0.25));
    CHECK_THROWS_AS(u_invariant(Mat2R{1, 1, 1, 1}), std::domain_error);
}

TEST_CASE("u scale/transpose invariance") {
    for (int t = 0; t < 200; ++t) {
        Mat2R g = random_mat();
        if (std::fabs(g.det()) < 1e-3) continue;
        double u = u_invariant(g);
        CHECK(u_invariant(g.transpose()) == doctest::Approx(u).epsilon(1e-12));
        std::uniform_real_distribution<double> L(0.1, 5.0);
        double lam = L(rng) * (t % 2 ? 1.0 : -1.0);
        CHECK(u_invariant(g * lam) == doctest::Approx(u).epsilon(1e-11));
    }
}

TEST_CASE("mu examples") {
    CHECK(std::abs(mu(Mat2R::identity()) - cplx(1, 0)) < 1e-15);
    CHECK(std::abs(mu(Mat2R{0, 1, -1, 0}) - cplx(0, 1)) < 1e-15);
    cplx m21 = mu(Mat2R{2, 0, 0, 1});
    CHECK(m21.real() == doctest::Approx(2.0 * std::sqrt(2.0) / 3.0));
    CHECK(m21.imag() == doctest::Approx(0.0));
    CHECK(std::norm(m21) == doctest::Approx(1.0 / (1.0 + 1.0 / 8.0)));
    // negative determinant -> 0; zero determinant -> 0 and flagged
    CHECK(mu(Mat2R{1, 0, 0, -1}) == cplx(0, 0));
    CHECK(mu(Mat2R{1, 1, 1, 1}) == cplx(0, 0));
    CHECK(mu_degenerate(Mat2R{1, 1, 1, 1}));
    CHECK(!mu_degenerate(Mat2R::identity()));
}

TEST_CASE("|mu|^2 (1+u) = 1 and rotation equivariance") {
    std::uniform_real_distribution<double> T(0.0, 2.0 * M_PI);
    for (int t = 0; t < 300; ++t) {
        Mat2R g = random_posdet();
        double u = u_invariant(g);
        CHECK(std::fabs(std::norm(mu(g)) * (1.0 + u) - 1.0) < 1e-12);
        double th = T(rng);
        cplx lhs = mu(g * Mat2R::rotation(th));
        cplx rhs = mu(g) * std::exp(cplx(0, th));
        CHECK(std::abs(lhs - rhs) < 1e-12);
        // transpose and scaling leave |mu| unchanged
        CHECK(std::abs(std::abs(mu(g.transpose())) - std::abs(mu(g))) < 1e-12);
        CHECK(std::abs(std::abs(mu(g * 2.5)) - std::abs(mu(g))) < 1e-12);
    }
}

TEST_CASE("bergman test function examples") {
    Weight w12(12);
    cplx v = bergman_test_function(Mat2R::identity(), w12);
    CHECK(v.real() == doctest::Approx(std::exp(-2.0 * M_PI)));
    CHECK(v.imag() == doctest::Approx(0.0));

    CHECK(bergman_test_function(Mat2R{-1, 0, 0, 1}, Weight(8)) == cplx(0, 0));

    double s = std::sqrt(2.0);
    cplx v2 = bergman_test_function(Mat2R{s, 0, 0, s}, w12);
    CHECK(v2.real() == doctest::Approx(std::exp(-4.0 * M_PI) * 32.0));
    CHECK(v2.imag() == doctest::Approx(0.0));
}

TEST_CASE("bergman conjugation and K-double equivariance") {
    // The kernel transforms by e^{im(t2 - t1)} because the left slot enters
    // inverted: M(k_{t1}^-1 x k_{t2}) = e^{im(t2-t1)} M(x).  On the raw
    // arguments both rotations act with the same sign, since mu only sees
    // Tr(x) and Tr(xw), both cyclic.
    Weight w(10);
    std::uniform_real_distribution<double> T(0.0, 2.0 * M_PI);
    for (int t = 0; t < 200; ++t) {
        Mat2R x = random_posdet();
        cplx a = bergman_test_function(x.iota(), w);
        cplx b = std::conj(bergman_test_function(x, w));
        CHECK(std::abs(a - b) < 1e-12 * (1.0 + std::abs(b)));
        double t1 = T(rng), t2 = T(rng);
        cplx lhs =
            bergman_test_function(Mat2R::rotation(-t1) * x * Mat2R::rotation(t2), w);
        cplx rhs = std::exp(cplx(0, w.m * (t2 - t1))) * bergman_test_function(x, w);
        CHECK(std::abs(lhs - rhs) < 1e-11 * (1.0 + std::abs(rhs)));
        cplx lhs2 = bergman_test_function(Mat2R::rotation(t1) * x, w);
        cplx rhs2 = std::exp(cplx(0, w.m * t1)) * bergman_test_function(x, w);
        CHECK(std::abs(lhs2 - rhs2) < 1e-11 * (1.0 + std::abs(rhs2)));
    }
}

TEST_CASE("bergman decay bound") {
    // |M(x)| (1+||x||)^m <= 4^m max_t e^{-2 pi t} t^{m-1}
    const int m = 8;
    Weight w(m);
    double cap = std::pow(4.0, m) * std::exp((m - 1) * (std::log((m - 1) / (2.0 * M_PI)) - 1.0));
    std::uniform_real_distribution<double> R(1.0, 100.0);
    for (int t = 0; t < 1000; ++t) {
        Mat2R x = random_mat();
        double nrm = std::sqrt(x.frob2());
        double want = R(rng);
        x = x * (want / nrm);
        double lhs = std::abs(bergman_test_function(x, w)) * std::pow(1.0 + want, m);
        CHECK(lhs <= cap * (1.0 + 1e-9));
    }
}

namespace {
// N(x) = Nr(x)^{m/2-1} mu(x)^m as a function of the four entries
cplx polypart(const Mat2R& x, int m) {
    double nr = x.det();
    return std::pow(nr, 0.5 * m - 1.0) * mu_pow(x, m);
}
}  // namespace

TEST_CASE("polynomial part solves the mixed PDE") {
    // Delta N = 0 and <x, grad> N = (m-2) N with Delta = d2/dadd - d2/dbdc
    const double h = 1e-4;
    const int m = 12;
    int checked = 0;
    for (int t = 0; t < 2000 && checked < 1000; ++t) {
        Mat2R x = random_mat();
        if (x.det() < 0.1) continue;
        ++checked;
        auto at = [&](double da, double db, double dc, double dd) {
            return polypart(Mat2R{x.a + da, x.b + db, x.c + dc, x.d + dd}, m);
        };
        cplx lap = (at(h, 0, 0, h) - at(h, 0, 0, -h) - at(-h, 0, 0, h) + at(-h, 0, 0, -h) -
                    (at(0, h, h, 0) - at(0, h, -h, 0) - at(0, -h, h, 0) + at(0, -h, -h, 0))) /
                   (4.0 * h * h);
        cplx euler = (x.a * (at(h, 0, 0, 0) - at(-h, 0, 0, 0)) +
                      x.b * (at(0, h, 0, 0) - at(0, -h, 0, 0)) +
                      x.c * (at(0, 0, h, 0) - at(0, 0, -h, 0)) +
                      x.d * (at(0, 0, 0, h) - at(0, 0, 0, -h))) /
                     (2.0 * h);
        cplx val = polypart(x, m);
        double scale = std::abs(val) * (m - 2);
        CHECK(std::abs(lap) < 1e-4 * std::max(1.0, scale));
        CHECK(std::abs(euler - double(m - 2) * val) < 1e-4 * std::max(1.0, scale));
    }
    CHECK(checked == 1000);
}

TEST_CASE("reduce_to_fundamental examples") {
    auto r1 = reduce_to_fundamental(Point(5, 1));
    CHECK(r1.reduced.x == doctest::Approx(0.0));
    CHECK(r1.reduced.y == doctest::Approx(1.0));
    CHECK(r1.height == doctest::Approx(1.0));
    CHECK(r1.gamma == Mat2Z{1, -5, 0, 1});

    auto r2 = reduce_to_fundamental(Point(0.5, 10));
    CHECK(r2.reduced.y == doctest::Approx(10.0));
    CHECK(r2.height == doctest::Approx(10.0));

    auto r3 = reduce_to_fundamental(Point(0.3, 0.004));
    CHECK(r3.reduced.y >= std::sqrt(3.0) / 2.0 - 1e-12);
    CHECK(std::fabs(r3.reduced.x) <= 0.5 + 1e-12);
    CHECK(r3.reduced.x * r3.reduced.x + r3.reduced.y * r3.reduced.y >= 1.0 - 1e-12);
    // gamma . z = reduced, exactly the returned matrix
    cplx img = r3.gamma.act(cplx(0.3, 0.004));
    CHECK(img.real() == doctest::Approx(r3.reduced.x).epsilon(1e-9));
    CHECK(img.imag() == doctest::Approx(r3.reduced.y).epsilon(1e-9));
    CHECK(r3.gamma.det() == 1);
    // oracle: best height over gamma with entries bounded by 10^3
    double ht = oracle::height_oracle(Point(0.3, 0.004), 1000);
    CHECK(r3.height == doctest::Approx(ht).epsilon(1e-9));
}

TEST_CASE("reduction is SL2(Z)-sound on random points") {
    std::uniform_real_distribution<double> X(-8.0, 8.0), Y(0.001, 5.0);
    for (int t = 0; t < 300; ++t) {
        Point z(X(rng), Y(rng));
        auto r = reduce_to_fundamental(z);
        CHECK(r.gamma.det() == 1);
        cplx img = r.gamma.act(z.to_complex());
        CHECK(std::abs(img - r.reduced.to_complex()) < 1e-8 * (1.0 + std::abs(img)));
        CHECK(std::fabs(r.reduced.x) <= 0.5 + 1e-9);
        CHECK(std::norm(r.reduced.to_complex()) >= 1.0 - 1e-9);
    }
}
