#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "cyclotomic.hpp"

namespace thetam {

// Finite model of Schwartz-Bruhat functions on B_p: functions supported in
// p^{-j} L and constant on p^k L-cosets, L the standard local order.
//   split:    L = [[Z_p, Z_p],[p^n Z_p, Z_p]] (n = 0: maximal M2(Z_p)),
//             coordinates (c0..c3) against E11, E12, p^n E21, E22.
//   ramified: L = O_E + j O_E, j^2 = p, O_E = Z_p[w] with w^2 = e1 w + e0
//             (w = sqrt of a non-residue for odd p, a sixth root of unity
//             lift for p = 2); coordinates (a0, a1, b0, b1).
struct FiniteModel {
    long long p = 2;
    int n = 1;          // level exponent (split); 1 for ramified
    bool ramified = false;
    int j = 0, k = 0;   // support depth / invariance depth
    long long pjk = 1;  // p^{j+k}, coordinate modulus
    long long e1 = 0, e0 = 0;  // minimal polynomial of w (ramified only)

    FiniteModel() = default;
    FiniteModel(long long p_, int n_, bool ram, int j_, int k_);

    size_t carrier_size() const;
    long long encode(const std::array<long long, 4>& c) const;
    std::array<long long, 4> decode(long long idx) const;

    // numerator of Nr x at denominator p^{2j}, reduced mod p^{2j}
    long long nr_num(const std::array<long long, 4>& c) const;
    // numerator of <x,y> = Tr(x y^iota) at denominator p^{jx+jy}; both
    // arguments in basis coordinates at their own support depths
    long long pair_num(const std::array<long long, 4>& cx,
                       const std::array<long long, 4>& cy) const;
    // x in p^{-dep} Lhat  <=>  <x, B_i> in p^{-dep} Z for all basis vectors
    bool in_dual(const std::array<long long, 4>& c, int dual_depth) const;
    // power of p dividing all coordinates (capped at j+k)
    int coord_valuation(const std::array<long long, 4>& c) const;

    // level parameter of Lhat relative to L: Lhat subset p^{-s} L
    int dual_shift() const { return ramified ? 1 : n; }

    bool operator==(const FiniteModel& o) const {
        return p == o.p && n == o.n && ramified == o.ramified && j == o.j && k == o.k;
    }

    static long long smallest_nonresidue(long long p);
};

// Complex/cyclotomic-valued function on the carrier: value(x) = p^{-scale} *
// values[x], entries exact in Z[zeta_{p^cyc_a}].
struct FiniteWeilFunction {
    FiniteModel model;
    int cyc_a = 0;
    long long scale = 0;
    std::vector<CycNum> values;

    FiniteWeilFunction() = default;
    explicit FiniteWeilFunction(const FiniteModel& m, int cyc = 0);

    CycNum& at(long long idx) { return values[size_t(idx)]; }
    const CycNum& at(long long idx) const { return values[size_t(idx)]; }

    /// Unique reduced representative: minimal support depth, invariance
    /// depth, scale, and cyclotomic ring.
    FiniteWeilFunction canonical() const;
    /// Same function re-expressed on a (j2 >= j, k2 >= k) grid.
    FiniteWeilFunction on_grid(int j2, int k2) const;
    void promote_cyc(int a);

    bool equals(const FiniteWeilFunction& o) const;
    std::string canonical_key() const;  // stable fingerprint of canonical()
    size_t support_size() const;
};

/// Indicator of the order: 1_L on the given model.
FiniteWeilFunction indicator_order(const FiniteModel& m);
/// Indicator of the dual lattice Lhat.
FiniteWeilFunction indicator_dual(const FiniteModel& m);

/// rho([[1,sigma],[0,1]]) M = psi(sigma Nr x) M(x), sigma integral.
FiniteWeilFunction weil_unipotent(const FiniteWeilFunction& f, long long sigma);
/// rho(diag(lam, lam^-1)) M = M(lam x) for unit lam.
FiniteWeilFunction weil_diag(const FiniteWeilFunction& f, long long lam);
/// rho(w) M = gamma * FM, exact finite Fourier transform with the
/// self-dual normalization; gamma = -1 exactly in the ramified case.
FiniteWeilFunction weil_fourier(const FiniteWeilFunction& f);
/// rho([[1,0],[tau,1]]) M via w^-1 T^{-tau} w.
FiniteWeilFunction weil_lower_unipotent(const FiniteWeilFunction& f, long long tau);
/// M(-x).
FiniteWeilFunction weil_reflect(const FiniteWeilFunction& f);

/// Saturation of {1_R} under {unipotent(1), diag(unit gens), fourier}.
/// Throws if the frontier exceeds 10 p^{2 max(n,1)} elements.
std::vector<FiniteWeilFunction> orbit_closure(long long p, int n, bool ramified);

/// The functions displayed in the local orbit classification, built directly.
std::vector<FiniteWeilFunction> predicted_orbit(long long p, int n, bool ramified);

/// True when f is fixed by the generators of U_0(p^n).
bool is_u0_invariant(const FiniteWeilFunction& f);

/// jmap on the split model: x in Rhat -> (b, c) mod p^n; domain error off Rhat.
std::pair<long long, long long> jmap(const FiniteModel& m, const std::array<long long, 4>& c);
/// nu_{p^k}(x) = -(j1/p^k)(j2/p^k) mod p^{n-k} for x in Rhat^{(p^k)}.
long long nu(const FiniteModel& m, const std::array<long long, 4>& c, int k);

/// Brute-force sum over F_{p^2} of psi(u Nr alpha / p); equals -p exactly.
CycNum norm_character_sum(long long p, long long u);

struct OrbitCatalogEntry {
    long long a = 1;          // lattice label, a | q D_B
    long long u_modulus = 1;  // u ranges over units mod qD_B/a1
    long long t_modulus = 1;  // t ranges over Z mod qD_B/a2
    long long multiplicity = 1;  // (qD_B/a) rho(a | qD_B)
    int sign = 1;             // (-1)^{omega(D_B/gcd(a, D_B))}
};

struct OrbitCatalog {
    long long q = 1, D_B = 1;
    long long total = 1;  // [SL2(hat Z) : U_R] = qD_B prod (1 + 1/p)
    std::vector<OrbitCatalogEntry> entries;
};

/// Global catalog of lattice labels and multiplicities for the Eichler order
/// of level q in the algebra of discriminant D_B; gcd(q, D_B) = 1, D_B
/// squarefree.
OrbitCatalog global_orbit(long long q, long long D_B);

/// Versioned JSON for orbit golden files.
std::string orbit_to_json(long long p, int n, bool ramified,
                          const std::vector<FiniteWeilFunction>& orbit);

}  // namespace thetam
