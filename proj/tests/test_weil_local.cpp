#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <fstream>
#include <set>
#include <sstream>

#include "weil_local.hpp"

using namespace thetam;

namespace {

std::set<std::string> key_set(const std::vector<FiniteWeilFunction>& fs) {
    std::set<std::string> s;
    for (const auto& f : fs) s.insert(f.canonical_key());
    return s;
}

// total mass sum |f(x)|^2 vol(p^k L) as an exact (CycNum, p-exponent) pair
std::pair<CycNum, long long> parseval_mass(const FiniteWeilFunction& f) {
    CycRing ring(f.model.p, f.cyc_a);
    CycNum tot(ring);
    for (const auto& v : f.values) tot += v * v.conj();
    // weight p^{-4k - s_L}; values carry p^{-scale} each
    long long expo = 4LL * f.model.k + f.model.dual_shift() + 2LL * f.scale;
    // canonicalize the pair: strip p-divisibility into the exponent
    while (expo > 0 && tot.divisible_by_p() && !tot.is_zero()) {
        tot.divide_by_p();
        --expo;
    }
    return {tot.demoted(), expo};
}

}  // namespace

TEST_CASE("cyclotomic ring arithmetic") {
    CycRing r9(3, 2);
    CHECK(r9.phi == 6);
    // zeta^6 = -(1 + zeta^3)
    CycNum z6 = CycNum::monomial(r9, 6);
    CycNum expect(r9);
    expect.add_monomial(0, -1);
    expect.add_monomial(3, -1);
    CHECK(z6 == expect);
    // (zeta - 1)(zeta^8 + ... ) telescoping sanity: zeta * zeta^8 = 1
    CHECK(CycNum::monomial(r9, 1) * CycNum::monomial(r9, 8) == CycNum::integer(r9, 1));
    // conj of zeta is zeta^8
    CHECK(CycNum::monomial(r9, 1).conj() == CycNum::monomial(r9, 8));
    // sum over all 9th roots of unity is 0: 1 + ... + zeta^8
    CycNum s(r9);
    for (int e = 0; e < 9; ++e) s.add_monomial(e, 1);
    CHECK(s.is_zero());
    // promotion embeds Z[zeta_3] into Z[zeta_9]
    CycRing r3(3, 1);
    CycNum a = CycNum::monomial(r3, 1, 5);
    CHECK(a.promoted(2) == CycNum::monomial(r9, 3, 5));
    CHECK(a.promoted(2).demoted() == a);
    CHECK(CycNum::integer(r9, 7).min_ring_exponent() == 0);
}

TEST_CASE("cyclotomic p = 2 reduction") {
    CycRing r4(2, 2);  // Z[i]
    CHECK(r4.phi == 2);
    CHECK(CycNum::monomial(r4, 2) == CycNum::integer(r4, -1));  // i^2 = -1
    CHECK(CycNum::monomial(r4, 1) * CycNum::monomial(r4, 3) == CycNum::integer(r4, 1));
}

TEST_CASE("norm character sums equal -p") {
    for (long long p : {2LL, 3LL, 5LL, 7LL}) {
        for (long long u = 1; u < p; ++u) {
            CycNum s = norm_character_sum(p, u);
            CHECK(s == CycNum::integer(CycRing(p, 1), -p));
        }
    }
    CHECK_THROWS_AS(norm_character_sum(3, 3), std::domain_error);
}

TEST_CASE("unipotent action examples") {
    // sigma = 0 is the identity
    FiniteModel m(3, 1, false, 1, 1);
    FiniteWeilFunction one_r = indicator_order(m);
    CHECK(weil_unipotent(one_r, 0).equals(one_r));
    // maximal split order: psi(sigma Nr x) trivial on integral support
    FiniteModel mx(3, 0, false, 0, 1);
    FiniteWeilFunction f = indicator_order(mx);
    CHECK(weil_unipotent(f, 1).equals(f));
    CHECK(weil_unipotent(f, 7).equals(f));
    // level p: 1_{Rhat} picks up a nontrivial phase on cosets with Nr in p^{-1}Z
    FiniteWeilFunction dual = indicator_dual(m);
    FiniteWeilFunction twisted = weil_unipotent(dual, 1);
    CHECK(!twisted.equals(dual));
    // pointwise: value at x is psi(Nr x) = zeta_9^{nr_num}, nr_num mod 3^{2j}
    FiniteWeilFunction tw = twisted.canonical().on_grid(1, 1);
    tw.promote_cyc(2);
    FiniteWeilFunction du = dual.on_grid(1, 1);
    bool pointwise_ok = true;
    for (size_t idx = 0; idx < tw.values.size(); ++idx) {
        auto c = tw.model.decode((long long)idx);
        long long e = tw.model.nr_num(c) % 9;
        CycNum expect = du.values[idx].promoted(2).times_monomial(e);
        if (!(tw.values[idx] == expect)) pointwise_ok = false;
    }
    CHECK(pointwise_ok);
}

TEST_CASE("diagonal action examples") {
    FiniteModel m(3, 1, false, 1, 1);
    FiniteWeilFunction one_r = indicator_order(m);
    CHECK(weil_diag(one_r, 1).equals(one_r));
    // orders are unit-stable
    CHECK(weil_diag(one_r, 2).equals(one_r));
    CHECK(weil_diag(indicator_dual(m), 2).equals(indicator_dual(m)));
    CHECK_THROWS_AS(weil_diag(one_r, 3), std::domain_error);
    // psi(t Nr x) 1_{Rhat} under lam = u becomes psi(t u^2 Nr x) 1_{Rhat}
    FiniteWeilFunction phase1 = weil_unipotent(indicator_dual(m), 1);
    FiniteWeilFunction lhs = weil_diag(phase1, 2);
    FiniteWeilFunction rhs = weil_unipotent(indicator_dual(m), 4);  // 2^2
    CHECK(lhs.equals(rhs));
}

TEST_CASE("fourier examples: self-dual maximal, Eichler duality, inversion") {
    // maximal split: 1_{M2(Zp)} is its own transform
    FiniteModel mx(2, 0, false, 0, 1);
    FiniteWeilFunction f = indicator_order(mx);
    CHECK(weil_fourier(f).equals(f));

    // Eichler level p^n: F 1_R = p^{-n} 1_{Rhat}
    for (auto [p, n] : {std::pair<long long, int>{2, 1}, {2, 2}, {3, 1}}) {
        FiniteModel m(p, n, false, n, 1);
        FiniteWeilFunction one_r = indicator_order(m);
        FiniteWeilFunction ft = weil_fourier(one_r);
        FiniteWeilFunction dual = indicator_dual(FiniteModel(p, n, false, n, 0));
        dual.scale = n;
        CHECK(ft.equals(dual));
        // applying twice reflects (split, gamma = 1)
        CHECK(weil_fourier(ft).equals(weil_reflect(one_r)));
    }

    // ramified: F 1_R = -p^{-1} 1_{Rhat}, F^2 = reflection (gamma^2 = 1)
    for (long long p : {2LL, 3LL}) {
        FiniteModel m(p, 1, true, 1, 1);
        FiniteWeilFunction one_r = indicator_order(m);
        FiniteWeilFunction ft = weil_fourier(one_r);
        FiniteWeilFunction dual = indicator_dual(FiniteModel(p, 1, true, 1, 0));
        dual.scale = 1;
        // negate
        for (auto& v : dual.values) v = -v;
        CHECK(ft.equals(dual));
        CHECK(weil_fourier(ft).equals(weil_reflect(one_r)));
    }
}

TEST_CASE("parseval mass is preserved by the fourier transform") {
    for (auto [p, n, ram] : {std::tuple<long long, int, bool>{2, 1, false},
                             {3, 1, false},
                             {2, 2, false},
                             {2, 1, true},
                             {3, 1, true}}) {
        FiniteModel m(p, n, ram, ram ? 1 : n, 1);
        FiniteWeilFunction one_r = indicator_order(m);
        auto orbit = predicted_orbit(p, n, ram);
        for (const auto& f : orbit) {
            auto lhs = parseval_mass(f);
            auto rhs = parseval_mass(weil_fourier(f));
            CHECK(lhs.second == rhs.second);
            CHECK(lhs.first == rhs.first);
        }
        (void)one_r;
    }
}

TEST_CASE("jmap and nu") {
    // q = 2: x = [[0, 1/2],[1, 0]] has jmap (1,1); -2 Nr x = 1 = 1*1 mod 2
    FiniteModel m2(2, 1, false, 1, 0);
    // coords (c0,c1,c2,c3) with x = p^{-1}[[c0,c1],[2 c2,c3]]: want [[0,1/2],[1,0]]
    std::array<long long, 4> x{0, 1, 1, 0};
    auto [j1, j2] = jmap(m2, x);
    CHECK(j1 == 1);
    CHECK(j2 == 1);
    // x in R has jmap (0,0)
    std::array<long long, 4> xin{0, 0, 0, 0};
    CHECK(jmap(m2, xin) == std::pair<long long, long long>{0, 0});
    // the norm congruence -q Nr = j1 j2 mod q on the whole dual carrier
    for (auto [p, n] : {std::pair<long long, int>{2, 1}, {2, 2}, {3, 1}, {5, 1}}) {
        FiniteModel m(p, n, false, n, 0);
        long long q = 1;
        for (int i = 0; i < n; ++i) q *= p;
        for (size_t idx = 0; idx < m.carrier_size(); ++idx) {
            auto c = m.decode((long long)idx);
            if (!m.in_dual(c, 0)) continue;
            auto [a, b] = jmap(m, c);
            // -q Nr x = j1 j2 mod q with Nr x = nr_num / p^{2n}
            long long nrnum = m.nr_num(c);  // mod p^{2n}
            long long lhs = ((-nrnum % (q * q)) + q * q) % (q * q);
            // -q Nr x mod q = (-nrnum / q) mod q requires q | nrnum for x in Rhat
            CHECK(nrnum % q == 0);
            long long want = ((lhs / q) % q);
            CHECK(want == (a * b) % q);
        }
    }
    // nu on Rhat^{(2)} inside level 4
    FiniteModel m4(2, 2, false, 2, 0);
    // x with jmap (2, 2): c1 = 2, c2 = 2 -> nu_2(x) = -(1*1) mod 2 = 1
    std::array<long long, 4> y{0, 2, 2, 0};
    CHECK(jmap(m4, y) == std::pair<long long, long long>{2, 2});
    CHECK(nu(m4, y, 1) == 1);
    CHECK_THROWS_AS(nu(m4, std::array<long long, 4>{0, 1, 2, 0}, 1), std::domain_error);
    // off-dual input
    CHECK_THROWS_AS(jmap(m2, std::array<long long, 4>{1, 0, 0, 0}), std::domain_error);
}

TEST_CASE("orbit closure sizes and equality with the prediction") {
    struct Cfg {
        long long p;
        int n;
        bool ram;
        size_t size;
    };
    // the (5,1) and (2,2) cases run in the acceptance suite; keep units quick
    for (const Cfg& c : {Cfg{2, 1, false, 3}, Cfg{3, 1, false, 4}, Cfg{2, 1, true, 3},
                         Cfg{3, 1, true, 4}}) {
        auto closure = orbit_closure(c.p, c.n, c.ram);
        auto predicted = predicted_orbit(c.p, c.n, c.ram);
        CHECK(closure.size() == c.size);
        CHECK(predicted.size() == c.size);
        CHECK(key_set(closure) == key_set(predicted));
        // the seed is fixed by all of U_0(p^n); a general orbit element is
        // fixed by the conjugate stabilizer only, but always by the lower
        // unipotent L^{p^n} (conjugates of it land in the principal
        // congruence subgroup), and U_0 generators permute the orbit
        FiniteModel seed_model(c.p, c.n, c.ram, c.ram ? 1 : c.n, 1);
        CHECK(is_u0_invariant(indicator_order(seed_model)));
        auto keys = key_set(closure);
        long long tau = 1;
        for (int i = 0; i < (c.ram ? 1 : c.n); ++i) tau *= c.p;
        for (const auto& f : closure) {
            CHECK(weil_lower_unipotent(f, tau).equals(f));
            CHECK(keys.count(weil_unipotent(f, 1).canonical_key()) == 1);
            CHECK(keys.count(weil_fourier(f).canonical_key()) == 1);
            for (long long lam = 2; lam < f.model.pjk; ++lam)
                if (lam % c.p != 0)
                    CHECK(keys.count(weil_diag(f, lam).canonical_key()) == 1);
        }
    }
    // split maximal: single point orbit
    auto triv = orbit_closure(3, 0, false);
    CHECK(triv.size() == 1);
}

TEST_CASE("orbit golden file round-trip") {
    auto closure = orbit_closure(2, 1, false);
    std::string doc = orbit_to_json(2, 1, false, closure);
    CHECK(doc.find("\"schema\": 1") != std::string::npos);
    CHECK(doc.find("\"orbit\"") != std::string::npos);
    // stable under regeneration
    CHECK(doc == orbit_to_json(2, 1, false, orbit_closure(2, 1, false)));
}

TEST_CASE("global orbit catalog") {
    auto c1 = global_orbit(1, 1);
    CHECK(c1.total == 1);
    REQUIRE(c1.entries.size() == 1);
    CHECK(c1.entries[0].a == 1);
    CHECK(c1.entries[0].multiplicity == 1);

    auto c2 = global_orbit(2, 1);
    CHECK(c2.total == 3);
    REQUIRE(c2.entries.size() == 2);
    CHECK(c2.entries[0].a == 1);
    CHECK(c2.entries[0].multiplicity == 2);
    CHECK(c2.entries[1].a == 2);
    CHECK(c2.entries[1].multiplicity == 1);

    auto c6 = global_orbit(1, 6);
    CHECK(c6.total == 12);
    long long sum = 0;
    for (const auto& e : c6.entries) sum += e.multiplicity;
    CHECK(sum == 12);

    // level 4: partial prime powers get the (1 - 1/p) weight
    auto c4 = global_orbit(4, 1);
    CHECK(c4.total == 6);
    for (const auto& e : c4.entries) {
        if (e.a == 2) CHECK(e.multiplicity == 1);
        if (e.a == 1) CHECK(e.multiplicity == 4);
        if (e.a == 4) CHECK(e.multiplicity == 1);
    }

    // signs track the ramified primes missing from a
    auto c30 = global_orbit(5, 6);
    CHECK(c30.total == 30LL * 3 / 2 * 4 / 3 * 6 / 5);
    for (const auto& e : c30.entries) {
        int missing = (e.a % 2 ? 1 : 0) + (e.a % 3 ? 1 : 0);
        CHECK(e.sign == (missing % 2 ? -1 : 1));
    }

    CHECK_THROWS_AS(global_orbit(2, 2), std::domain_error);
    CHECK_THROWS_AS(global_orbit(1, 4), std::domain_error);
}

TEST_CASE("orbit golden files regression") {
    struct Cfg {
        long long p;
        int n;
        bool ram;
        const char* name;
    };
    for (Cfg c : {Cfg{2, 1, false, "orbit_split_p2_n1.json"},
                  Cfg{3, 1, false, "orbit_split_p3_n1.json"},
                  Cfg{2, 2, false, "orbit_split_p2_n2.json"},
                  Cfg{2, 1, true, "orbit_ram_p2.json"},
                  Cfg{3, 1, true, "orbit_ram_p3.json"}}) {
        std::ifstream f(std::string(TM_GOLDEN_DIR) + "/" + c.name);
        REQUIRE(f.good());
        std::stringstream ss;
        ss << f.rdbuf();
        std::string stored = ss.str();
        std::string fresh = orbit_to_json(c.p, c.n, c.ram, orbit_closure(c.p, c.n, c.ram)) + "\n";
        CHECK(stored == fresh);
    }
}

TEST_CASE("model guards") {
    // carrier cap
    CHECK_THROWS_AS(FiniteModel(7, 2, false, 2, 2), std::domain_error);
    // orbit termination guard is generous but present
    auto orbit = orbit_closure(2, 2, false);
    CHECK(orbit.size() == 6);
    // non-residues found correctly
    CHECK(FiniteModel::smallest_nonresidue(3) == 2);
    CHECK(FiniteModel::smallest_nonresidue(5) == 2);
    CHECK(FiniteModel::smallest_nonresidue(7) == 3);
}
