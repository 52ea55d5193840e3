#include "weil_local.hpp"

#include <algorithm>
#include <deque>
#include <numeric>
#include <set>
#include <sstream>

#include "json.hpp"

namespace thetam {

namespace {

long long ipow(long long p, int e) {
    long long r = 1;
    for (int i = 0; i < e; ++i) r *= p;
    return r;
}

long long mod_reduce(long long v, long long m) {
    if (m == 1) return 0;
    v %= m;
    if (v < 0) v += m;
    return v;
}

}  // namespace

long long FiniteModel::smallest_nonresidue(long long p) {
    for (long long r = 2; r < p; ++r) {
        // Euler criterion by repeated squaring
        long long e = (p - 1) / 2, base = r % p, acc = 1;
        while (e > 0) {
            if (e & 1) acc = acc * base % p;
            base = base * base % p;
            e >>= 1;
        }
        if (acc == p - 1) return r;
    }
    throw std::domain_error("no quadratic non-residue below p");
}

FiniteModel::FiniteModel(long long p_, int n_, bool ram, int j_, int k_)
    : p(p_), n(ram ? 1 : n_), ramified(ram), j(j_), k(k_) {
    if (p < 2 || j < 0 || k < 0 || (!ram && n_ < 0))
        throw std::domain_error("bad finite model parameters");
    pjk = ipow(p, j + k);
    double size = std::pow(double(pjk), 4.0);
    if (size > double(1 << 24))
        throw std::domain_error("carrier larger than 2^24; choose smaller (p, n, j, k)");
    if (ram) {
        if (p == 2) {
            e1 = -1;  // w^2 + w + 1 = 0 lifts F_4
            e0 = -1;
        } else {
            e1 = 0;
            e0 = smallest_nonresidue(p);
        }
    }
}

size_t FiniteModel::carrier_size() const {
    size_t s = 1;
    for (int i = 0; i < 4; ++i) s *= size_t(pjk);
    return s;
}

long long FiniteModel::encode(const std::array<long long, 4>& c) const {
    long long idx = 0;
    for (int i = 0; i < 4; ++i) idx = idx * pjk + mod_reduce(c[size_t(i)], pjk);
    return idx;
}

std::array<long long, 4> FiniteModel::decode(long long idx) const {
    std::array<long long, 4> c{};
    for (int i = 3; i >= 0; --i) {
        c[size_t(i)] = idx % pjk;
        idx /= pjk;
    }
    return c;
}

long long FiniteModel::nr_num(const std::array<long long, 4>& c) const {
    long long m2j = ipow(p, 2 * j);
    long long v;
    if (!ramified) {
        v = c[0] * c[3] - ipow(p, n) * c[1] * c[2];
    } else {
        long long nra = c[0] * c[0] + e1 * c[0] * c[1] - e0 * c[1] * c[1];
        long long nrb = c[2] * c[2] + e1 * c[2] * c[3] - e0 * c[3] * c[3];
        v = nra - p * nrb;
    }
    return mod_reduce(v, m2j);
}

long long FiniteModel::pair_num(const std::array<long long, 4>& cx,
                                const std::array<long long, 4>& cy) const {
    if (!ramified)
        return cx[0] * cy[3] + cx[3] * cy[0] - ipow(p, n) * (cx[1] * cy[2] + cx[2] * cy[1]);
    auto T = [&](long long u0, long long u1, long long v0, long long v1) {
        return 2 * u0 * v0 + e1 * (u0 * v1 + u1 * v0) - 2 * e0 * u1 * v1;
    };
    return T(cx[0], cx[1], cy[0], cy[1]) - p * T(cx[2], cx[3], cy[2], cy[3]);
}

bool FiniteModel::in_dual(const std::array<long long, 4>& c, int dual_depth) const {
    // <x, B_i> = p^{-j} Bil(c, e_i) must lie in p^{-dual_depth} Z
    int need = j - dual_depth;
    if (need <= 0) return true;
    long long q = ipow(p, need);
    static const std::array<std::array<long long, 4>, 4> basis = {
        std::array<long long, 4>{1, 0, 0, 0}, std::array<long long, 4>{0, 1, 0, 0},
        std::array<long long, 4>{0, 0, 1, 0}, std::array<long long, 4>{0, 0, 0, 1}};
    for (const auto& e : basis)
        if (mod_reduce(pair_num(c, e), q) != 0) return false;
    return true;
}

int FiniteModel::coord_valuation(const std::array<long long, 4>& c) const {
    int cap = j + k;
    int v = cap;
    for (long long x : c) {
        if (x == 0) continue;
        int w = 0;
        long long y = x;
        while (y % p == 0 && w < cap) {
            y /= p;
            ++w;
        }
        v = std::min(v, w);
        if (v == 0) break;
    }
    return v;
}

FiniteWeilFunction::FiniteWeilFunction(const FiniteModel& m, int cyc)
    : model(m), cyc_a(cyc), scale(0),
      values(m.carrier_size(), CycNum(CycRing(m.p, cyc))) {}

void FiniteWeilFunction::promote_cyc(int a) {
    if (a < cyc_a) throw std::domain_error("cyclotomic demotion not allowed here");
    if (a == cyc_a) return;
    for (auto& v : values) v = v.promoted(a);
    cyc_a = a;
}

size_t FiniteWeilFunction::support_size() const {
    size_t s = 0;
    for (const auto& v : values)
        if (!v.is_zero()) ++s;
    return s;
}

FiniteWeilFunction FiniteWeilFunction::on_grid(int j2, int k2) const {
    if (j2 < model.j || k2 < model.k)
        throw std::domain_error("on_grid only refines the carrier");
    if (j2 == model.j && k2 == model.k) return *this;
    FiniteModel m2(model.p, model.n, model.ramified, j2, k2);
    FiniteWeilFunction out(m2, cyc_a);
    out.scale = scale;
    long long shift = ipow(model.p, j2 - model.j);
    for (size_t idx = 0; idx < out.values.size(); ++idx) {
        auto c = m2.decode((long long)idx);
        bool integral = true;
        std::array<long long, 4> c1{};
        for (int i = 0; i < 4; ++i) {
            if (c[size_t(i)] % shift != 0) {
                integral = false;
                break;
            }
            c1[size_t(i)] = mod_reduce(c[size_t(i)] / shift, model.pjk);
        }
        if (!integral) continue;  // outside p^{-j} L
        out.values[idx] = values[size_t(model.encode(c1))];
    }
    return out;
}

FiniteWeilFunction FiniteWeilFunction::canonical() const {
    const FiniteModel& m = model;
    // true support depth
    int jt = 0;
    bool empty = true;
    for (size_t idx = 0; idx < values.size(); ++idx) {
        if (values[idx].is_zero()) continue;
        empty = false;
        int dep = m.j - m.coord_valuation(m.decode((long long)idx));
        jt = std::max(jt, dep);
    }
    if (empty) {
        FiniteModel m0(m.p, m.n, m.ramified, 0, 0);
        FiniteWeilFunction out(m0, 0);
        return out;
    }
    if (jt < 0) jt = 0;
    // true invariance depth: smallest kt with f(c + p^{kt} B_i) = f(c)
    int kt = m.k;
    for (int kc = 0; kc < m.k; ++kc) {
        // translation by p^{kc} B_i adds p^{j+kc} to coordinate i
        long long step = ipow(m.p, m.j + kc);
        bool inv = true;
        for (size_t idx = 0; idx < values.size() && inv; ++idx) {
            auto c = m.decode((long long)idx);
            for (int i = 0; i < 4 && inv; ++i) {
                auto c2 = c;
                c2[size_t(i)] = mod_reduce(c2[size_t(i)] + step, m.pjk);
                if (!(values[idx] == values[size_t(m.encode(c2))])) inv = false;
            }
        }
        if (inv) {
            kt = kc;
            break;
        }
    }
    // rebuild on the (jt, kt) grid
    FiniteModel m2(m.p, m.n, m.ramified, jt, kt);
    FiniteWeilFunction out(m2, cyc_a);
    out.scale = scale;
    long long shift = ipow(m.p, m.j - jt);
    for (size_t idx = 0; idx < out.values.size(); ++idx) {
        auto c = m2.decode((long long)idx);
        std::array<long long, 4> c1{};
        for (int i = 0; i < 4; ++i) c1[size_t(i)] = mod_reduce(c[size_t(i)] * shift, m.pjk);
        out.values[idx] = values[size_t(m.encode(c1))];
    }
    // minimal scale
    bool all_div = true;
    while (out.scale > 0 && all_div) {
        for (const auto& v : out.values)
            if (!v.divisible_by_p()) {
                all_div = false;
                break;
            }
        if (all_div) {
            for (auto& v : out.values) v.divide_by_p();
            --out.scale;
        }
    }
    // minimal cyclotomic ring
    int amin = 0;
    for (const auto& v : out.values) amin = std::max(amin, v.min_ring_exponent());
    if (amin < out.cyc_a) {
        for (auto& v : out.values) v = v.demoted().promoted(amin);
        out.cyc_a = amin;
    }
    return out;
}

bool FiniteWeilFunction::equals(const FiniteWeilFunction& o) const {
    FiniteWeilFunction a = canonical();
    FiniteWeilFunction b = o.canonical();
    if (!(a.model == b.model) || a.scale != b.scale || a.cyc_a != b.cyc_a) return false;
    return a.values == b.values;
}

std::string FiniteWeilFunction::canonical_key() const {
    FiniteWeilFunction c = canonical();
    std::ostringstream os;
    os << c.model.p << '|' << c.model.n << '|' << c.model.ramified << '|' << c.model.j << '|'
       << c.model.k << '|' << c.scale << '|' << c.cyc_a << '|';
    for (size_t idx = 0; idx < c.values.size(); ++idx) {
        if (c.values[idx].is_zero()) continue;
        os << idx << ':';
        for (long long v : c.values[idx].coeffs()) os << v << ',';
        os << ';';
    }
    return os.str();
}

FiniteWeilFunction indicator_order(const FiniteModel& m) {
    FiniteWeilFunction f(m, 0);
    long long pj = ipow(m.p, m.j);
    for (size_t idx = 0; idx < f.values.size(); ++idx) {
        auto c = m.decode((long long)idx);
        bool in = true;
        for (long long x : c)
            if (x % pj != 0) in = false;
        if (in) f.values[idx] = CycNum::integer(CycRing(m.p, 0), 1);
    }
    return f;
}

FiniteWeilFunction indicator_dual(const FiniteModel& m) {
    if (m.j < m.dual_shift())
        throw std::domain_error("model too coarse to hold the dual lattice");
    FiniteWeilFunction f(m, 0);
    for (size_t idx = 0; idx < f.values.size(); ++idx) {
        if (m.in_dual(m.decode((long long)idx), 0))
            f.values[idx] = CycNum::integer(CycRing(m.p, 0), 1);
    }
    return f;
}

FiniteWeilFunction weil_unipotent(const FiniteWeilFunction& f0, long long sigma) {
    FiniteWeilFunction f = f0.canonical();
    const FiniteModel& m = f.model;
    if (m.j == 0 || sigma % ipow(m.p, 2 * m.j) == 0) return f;  // psi trivial on support
    // the phase is p^k L-periodic on the support iff the support pairs
    // integrally against p^k L; otherwise refine the grid first
    bool periodic = true;
    for (size_t idx = 0; idx < f.values.size() && periodic; ++idx)
        if (!f.values[idx].is_zero() && !m.in_dual(f.model.decode((long long)idx), m.k))
            periodic = false;
    if (!periodic) return weil_unipotent(f.on_grid(m.j, m.j), sigma);

    int a_need = 2 * m.j;
    long long m2j = ipow(m.p, 2 * m.j);
    FiniteWeilFunction out = f;
    out.promote_cyc(std::max(f.cyc_a, a_need));
    long long unit = ipow(m.p, out.cyc_a - a_need);  // zeta_{p^cyc}^{unit} = zeta_{p^{2j}}
    for (size_t idx = 0; idx < out.values.size(); ++idx) {
        if (out.values[idx].is_zero()) continue;
        long long e = mod_reduce(sigma * m.nr_num(m.decode((long long)idx)), m2j);
        if (e != 0) out.values[idx] = out.values[idx].times_monomial(e * unit);
    }
    return out.canonical();
}

FiniteWeilFunction weil_diag(const FiniteWeilFunction& f0, long long lam) {
    const FiniteModel& m = f0.model;
    lam = mod_reduce(lam, m.pjk);
    if (m.pjk > 1 && lam % m.p == 0)
        throw std::domain_error("weil_diag: non-unit scaling is unsupported");
    if (m.pjk == 1 || lam == 1) return f0;
    FiniteWeilFunction out(m, f0.cyc_a);
    out.scale = f0.scale;
    for (size_t idx = 0; idx < out.values.size(); ++idx) {
        auto c = m.decode((long long)idx);
        for (auto& x : c) x = mod_reduce(x * lam, m.pjk);
        out.values[idx] = f0.values[size_t(m.encode(c))];
    }
    return out;
}

FiniteWeilFunction weil_reflect(const FiniteWeilFunction& f0) {
    const FiniteModel& m = f0.model;
    FiniteWeilFunction out(m, f0.cyc_a);
    out.scale = f0.scale;
    for (size_t idx = 0; idx < out.values.size(); ++idx) {
        auto c = m.decode((long long)idx);
        for (auto& x : c) x = mod_reduce(-x, m.pjk);
        out.values[idx] = f0.values[size_t(m.encode(c))];
    }
    return out;
}

FiniteWeilFunction weil_fourier(const FiniteWeilFunction& f0) {
    FiniteWeilFunction f = f0.canonical();
    const FiniteModel& m = f.model;
    int s = m.dual_shift();
    int j2 = m.k + s, k2 = m.j;
    FiniteModel m2(m.p, m.n, m.ramified, j2, k2);
    int a_pair = m.j + j2;
    int a_out = std::max(f.cyc_a, a_pair);
    long long pair_mod = ipow(m.p, a_pair);
    long long unit = ipow(m.p, a_out - a_pair);

    std::vector<std::pair<std::array<long long, 4>, CycNum>> support;
    for (size_t idx = 0; idx < f.values.size(); ++idx)
        if (!f.values[idx].is_zero())
            support.emplace_back(m.decode((long long)idx), f.values[idx].promoted(a_out));

    FiniteWeilFunction out(m2, a_out);
    out.scale = f.scale + 4LL * m.k + s;
    bool neg = m.ramified;  // gamma = -1 in the ramified case
    CycRing ring(m.p, a_out);
    for (size_t idx = 0; idx < out.values.size(); ++idx) {
        auto d = m2.decode((long long)idx);
        if (!m2.in_dual(d, m.k)) continue;  // outside dual(p^k L)
        CycNum acc(ring);
        for (const auto& [c, v] : support) {
            long long e = mod_reduce(m.pair_num(d, c), pair_mod);
            acc += v.times_monomial(e * unit);
        }
        out.values[idx] = neg ? -acc : acc;
    }
    return out.canonical();
}

FiniteWeilFunction weil_lower_unipotent(const FiniteWeilFunction& f, long long tau) {
    // [[1,0],[tau,1]] = w^{-1} [[1,-tau],[0,1]] w and rho(w)^{-1} = reflect o rho(w)
    FiniteWeilFunction g = weil_fourier(f);
    g = weil_unipotent(g, -tau);
    return weil_fourier(weil_reflect(g)).canonical();
}

namespace {

std::vector<long long> unit_list(long long mod, long long p) {
    std::vector<long long> u;
    for (long long v = 2; v < mod; ++v)
        if (v % p != 0) u.push_back(v);
    return u;
}

}  // namespace

std::vector<FiniteWeilFunction> orbit_closure(long long p, int n, bool ramified) {
    FiniteModel m(p, n, ramified, ramified ? 1 : std::max(n, 0), 1);
    FiniteWeilFunction seed = indicator_order(m).canonical();
    size_t guard = size_t(10) * size_t(ipow(p, 2 * std::max(n, 1)));

    std::vector<FiniteWeilFunction> orbit;
    std::set<std::string> seen;
    std::deque<FiniteWeilFunction> queue;
    queue.push_back(seed);
    seen.insert(seed.canonical_key());
    while (!queue.empty()) {
        FiniteWeilFunction cur = queue.front();
        queue.pop_front();
        orbit.push_back(cur);
        if (orbit.size() > guard)
            throw std::runtime_error("orbit closure exceeded its size guard");
        std::vector<FiniteWeilFunction> next;
        next.push_back(weil_unipotent(cur, 1));
        next.push_back(weil_fourier(cur));
        for (long long lam : unit_list(cur.model.pjk, p))
            next.push_back(weil_diag(cur, lam).canonical());
        for (auto& g : next) {
            std::string key = g.canonical_key();
            if (seen.insert(key).second) queue.push_back(g.canonical());
        }
    }
    return orbit;
}

std::vector<FiniteWeilFunction> predicted_orbit(long long p, int n, bool ramified) {
    std::vector<FiniteWeilFunction> out;
    if (ramified) {
        FiniteModel grid(p, 1, true, 1, 0);
        FiniteModel coarse(p, 1, true, 0, 0);
        out.push_back(indicator_order(coarse).canonical());
        long long p2 = p * p;
        for (long long t = 0; t < p; ++t) {
            FiniteWeilFunction f(grid, 2);
            f.scale = 1;
            CycRing ring(p, 2);
            for (size_t idx = 0; idx < f.values.size(); ++idx) {
                auto c = grid.decode((long long)idx);
                if (!grid.in_dual(c, 0)) continue;
                long long e = mod_reduce(t * grid.nr_num(c), p2);
                f.values[idx] = -CycNum::monomial(ring, e);
            }
            out.push_back(f.canonical());
        }
        return out;
    }
    if (n == 0) {
        FiniteModel coarse(p, 0, false, 0, 0);
        out.push_back(indicator_order(coarse).canonical());
        return out;
    }
    FiniteModel grid(p, n, false, n, 0);
    long long pn = ipow(p, n);
    long long p2n = pn * pn;
    // t-family: p^{-n} psi(t Nr x) 1_{Rhat}
    for (long long t = 0; t < pn; ++t) {
        FiniteWeilFunction f(grid, 2 * n);
        f.scale = n;
        CycRing ring(p, 2 * n);
        for (size_t idx = 0; idx < f.values.size(); ++idx) {
            auto c = grid.decode((long long)idx);
            if (!grid.in_dual(c, 0)) continue;
            long long e = mod_reduce(t * grid.nr_num(c), p2n);
            f.values[idx] = CycNum::monomial(ring, e);
        }
        out.push_back(f.canonical());
    }
    // k-families: p^{-(n-k)} psi(u nu_{p^k}(x)/p^{n-k}) 1_{Rhat^{(p^k)}}
    for (int k = 1; k <= n; ++k) {
        long long pk = ipow(p, k);
        long long pnk = ipow(p, n - k);
        std::vector<long long> us;
        if (pnk == 1)
            us.push_back(0);  // trivial phase: the function is 1_R itself at k = n
        else
            for (long long u = 1; u < pnk; ++u)
                if (u % p != 0) us.push_back(u);
        for (long long u : us) {
            FiniteWeilFunction f(grid, std::max(0, n - k));
            f.scale = n - k;
            CycRing ring(p, n - k > 0 ? n - k : 0);
            for (size_t idx = 0; idx < f.values.size(); ++idx) {
                auto c = grid.decode((long long)idx);
                if (!grid.in_dual(c, 0)) continue;
                auto [j1v, j2v] = jmap(grid, c);
                if (j1v % pk != 0 || j2v % pk != 0) continue;
                long long e = (pnk == 1) ? 0 : mod_reduce(u * nu(grid, c, k), pnk);
                f.values[idx] = CycNum::monomial(ring, e);
            }
            out.push_back(f.canonical());
        }
    }
    return out;
}

bool is_u0_invariant(const FiniteWeilFunction& f) {
    FiniteWeilFunction c = f.canonical();
    if (!c.equals(weil_unipotent(c, 1))) return false;
    long long pjk = c.model.pjk;
    for (long long lam : unit_list(pjk, c.model.p))
        if (!c.equals(weil_diag(c, lam))) return false;
    long long tau = ipow(c.model.p, c.model.ramified ? 1 : c.model.n);
    return c.equals(weil_lower_unipotent(c, tau));
}

std::pair<long long, long long> jmap(const FiniteModel& m, const std::array<long long, 4>& c) {
    if (m.ramified) throw std::domain_error("jmap: split model required");
    if (m.j < m.n) throw std::domain_error("jmap: model too coarse for the dual");
    if (!m.in_dual(c, 0)) throw std::domain_error("jmap: element outside the dual lattice");
    long long pn = ipow(m.p, m.n);
    long long shift = ipow(m.p, m.j - m.n);
    return {mod_reduce(c[1] / shift, pn), mod_reduce(c[2] / shift, pn)};
}

long long nu(const FiniteModel& m, const std::array<long long, 4>& c, int k) {
    auto [j1v, j2v] = jmap(m, c);
    long long pk = ipow(m.p, k);
    if (j1v % pk != 0 || j2v % pk != 0)
        throw std::domain_error("nu: element outside Rhat^{(p^k)}");
    long long pnk = ipow(m.p, m.n - k);
    return mod_reduce(-(j1v / pk) * (j2v / pk), pnk);
}

CycNum norm_character_sum(long long p, long long u) {
    if (u % p == 0) throw std::domain_error("norm_character_sum: u must be a unit");
    long long e1, e0;
    if (p == 2) {
        e1 = -1;
        e0 = -1;
    } else {
        e1 = 0;
        e0 = FiniteModel::smallest_nonresidue(p);
    }
    CycRing ring(p, 1);
    CycNum acc(ring);
    for (long long a0 = 0; a0 < p; ++a0)
        for (long long a1 = 0; a1 < p; ++a1) {
            long long nr = mod_reduce(a0 * a0 + e1 * a0 * a1 - e0 * a1 * a1, p);
            acc.add_monomial(mod_reduce(u * nr, p), 1);
        }
    return acc;
}

OrbitCatalog global_orbit(long long q, long long D_B) {
    if (q < 1 || D_B < 1) throw std::domain_error("global_orbit: q, D_B >= 1");
    if (std::gcd(q, D_B) != 1) throw std::domain_error("global_orbit: gcd(q, D_B) must be 1");
    long long Q = q * D_B;
    // factorize Q; insist D_B squarefree
    std::vector<std::pair<long long, int>> fac;
    long long rest = Q;
    for (long long d = 2; d * d <= rest; ++d)
        if (rest % d == 0) {
            int e = 0;
            while (rest % d == 0) {
                rest /= d;
                ++e;
            }
            fac.emplace_back(d, e);
        }
    if (rest > 1) fac.emplace_back(rest, 1);
    for (auto [pp, e] : fac)
        if (D_B % pp == 0 && (e != 1 || D_B % (pp * pp) == 0))
            throw std::domain_error("global_orbit: D_B must be squarefree");

    OrbitCatalog cat;
    cat.q = q;
    cat.D_B = D_B;
    cat.total = Q;
    for (auto [pp, e] : fac) {
        (void)e;
        cat.total = cat.total / pp * (pp + 1);
    }
    // enumerate divisors a | Q
    std::vector<long long> divs = {1};
    for (auto [pp, e] : fac) {
        size_t base = divs.size();
        long long pe = 1;
        for (int i = 1; i <= e; ++i) {
            pe *= pp;
            for (size_t t = 0; t < base; ++t) divs.push_back(divs[t] * pe);
        }
    }
    std::sort(divs.begin(), divs.end());
    long long check = 0;
    for (long long a : divs) {
        OrbitCatalogEntry ent;
        ent.a = a;
        long long rest2 = Q / a;
        long long mult = rest2;
        long long g = std::gcd(rest2, a);
        for (auto [pp, e] : fac) {
            (void)e;
            if (g % pp == 0) mult = mult / pp * (pp - 1);
        }
        ent.multiplicity = mult;
        // a2 = product of full prime powers of a (ord_p a = ord_p Q)
        long long a2 = 1;
        for (auto [pp, e] : fac) {
            long long ppow = 1;
            int orda = 0;
            long long t = a;
            while (t % pp == 0) {
                t /= pp;
                ++orda;
                ppow *= pp;
            }
            if (orda == e && orda > 0) a2 *= ppow;
        }
        long long a1 = a / a2;
        ent.u_modulus = Q / a1;
        ent.t_modulus = Q / a2;
        int ram_missing = 0;
        for (auto [pp, e] : fac) {
            (void)e;
            if (D_B % pp == 0 && a % pp != 0) ++ram_missing;
        }
        ent.sign = (ram_missing % 2 == 0) ? 1 : -1;
        cat.entries.push_back(ent);
        check += mult;
    }
    if (check != cat.total)
        throw std::logic_error("global_orbit: multiplicities do not sum to the index");
    return cat;
}

std::string orbit_to_json(long long p, int n, bool ramified,
                          const std::vector<FiniteWeilFunction>& orbit) {
    nlohmann::ordered_json doc;
    doc["schema"] = 1;
    doc["p"] = p;
    doc["n"] = n;
    doc["ramified"] = ramified;
    if (ramified) {
        // the quadratic extension realization behind the coordinates
        doc["residue_model"] =
            (p == 2) ? std::string("w^2 + w + 1 = 0")
                     : ("w^2 = " + std::to_string(FiniteModel::smallest_nonresidue(p)));
    }
    std::vector<FiniteWeilFunction> sorted;
    sorted.reserve(orbit.size());
    for (const auto& f : orbit) sorted.push_back(f.canonical());
    std::sort(sorted.begin(), sorted.end(),
              [](const FiniteWeilFunction& a, const FiniteWeilFunction& b) {
                  return a.canonical_key() < b.canonical_key();
              });
    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    for (const auto& f : sorted) {
        nlohmann::ordered_json e;
        e["j"] = f.model.j;
        e["k"] = f.model.k;
        e["scale"] = f.scale;
        e["cyc_a"] = f.cyc_a;
        nlohmann::ordered_json vals = nlohmann::ordered_json::array();
        for (size_t idx = 0; idx < f.values.size(); ++idx) {
            if (f.values[idx].is_zero()) continue;
            vals.push_back({{"x", idx}, {"c", f.values[idx].coeffs()}});
        }
        e["values"] = vals;
        arr.push_back(e);
    }
    doc["orbit"] = arr;
    return doc.dump(2);
}

}  // namespace thetam
