// theta-moment: command-line front end for lattice counts, Bergman kernel
// sums, Hecke ratios, theta coefficients, Weil orbits, and bound reports.

#include <cstdio>
#include <fstream>
#include <future>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

#include "bergman_theta.hpp"
#include "cache.hpp"
#include "lattice_count.hpp"
#include "quaternion_count.hpp"
#include "weil_local.hpp"

using namespace thetam;
using json = nlohmann::ordered_json;

namespace {

std::string fmt_real(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string fmt_cplx(cplx v) {
    return fmt_real(v.real()) + (v.imag() < 0 ? "" : "+") + fmt_real(v.imag()) + "i";
}

// complex literal "x+yi" (also "i", "2i", "1+i", "-0.3+0.9i")
std::pair<std::string, std::string> parse_complex_parts(std::string s) {
    s.erase(std::remove_if(s.begin(), s.end(), [](char c) { return std::isspace(c); }),
            s.end());
    if (s.empty() || s.back() != 'i')
        throw CLI::ValidationError("complex literal must end in i, e.g. 0.3+0.8i");
    s.pop_back();
    // split off the imaginary coefficient at the last +/- that is not an exponent
    size_t split = std::string::npos;
    for (size_t i = s.size(); i-- > 1;) {
        if ((s[i] == '+' || s[i] == '-') && s[i - 1] != 'e' && s[i - 1] != 'E') {
            split = i;
            break;
        }
    }
    std::string re = "0", im;
    if (split == std::string::npos) {
        im = s;
    } else {
        re = s.substr(0, split);
        im = s.substr(split);
    }
    if (im.empty() || im == "+") im = "1";
    if (im == "-") im = "-1";
    return {re, im};
}

RatPoint parse_point(const std::string& s) {
    auto [re, im] = parse_complex_parts(s);
    return RatPoint::from_decimal(re, im);
}

OrderSpec parse_order(const std::string& s) {
    if (s == "full") return OrderSpec::full();
    if (s.rfind("eichler:", 0) == 0) return OrderSpec::eichler(std::stoll(s.substr(8)));
    throw CLI::ValidationError("--order must be full or eichler:q");
}

struct OutputSink {
    std::string out_path;
    std::string format = "json";
    std::string cache_dir;
    int threads = 1;

    void add_flags(CLI::App* cmd) {
        cmd->add_option("--out", out_path, "output file (default stdout)");
        cmd->add_option("--format", format, "json or csv")
            ->check(CLI::IsMember({"json", "csv"}));
        const char* env = std::getenv("THETA_MOMENT_CACHE");
        if (env) cache_dir = env;
        cmd->add_option("--cache-dir", cache_dir, "result cache directory");
        cmd->add_option("--threads", threads, "worker threads")->check(CLI::Range(1, 256));
    }

    void emit(const std::string& text) const {
        if (out_path.empty()) {
            std::cout << text;
            if (!text.empty() && text.back() != '\n') std::cout << "\n";
        } else {
            std::ofstream f(out_path, std::ios::binary | std::ios::trunc);
            f << text;
        }
    }

    // Render + cache.  build() must be deterministic.
    void run(const std::string& key, const std::function<std::string()>& build) const {
        ResultCache cache(cache_dir);
        if (auto hit = cache.lookup(key)) {
            emit(*hit);
            return;
        }
        std::string text = build();
        cache.store(key, text);
        emit(text);
    }
};

std::string render(const OutputSink& sink, const json& config, const json& result) {
    if (sink.format == "json") {
        json doc;
        doc["schema"] = 1;
        doc["version"] = kToolVersion;
        doc["config"] = config;
        doc["result"] = result;
        return doc.dump(2);
    }
    // csv: flat key,value rows; arrays expand to indexed rows
    std::ostringstream os;
    os << "key,value\n";
    std::function<void(const std::string&, const json&)> walk = [&](const std::string& prefix,
                                                                    const json& v) {
        if (v.is_object()) {
            for (auto it = v.begin(); it != v.end(); ++it)
                walk(prefix.empty() ? it.key() : prefix + "." + it.key(), it.value());
        } else if (v.is_array()) {
            size_t i = 0;
            for (const auto& e : v) walk(prefix + "[" + std::to_string(i++) + "]", e);
        } else {
            os << prefix << "," << (v.is_string() ? v.get<std::string>() : v.dump()) << "\n";
        }
    };
    walk("", result);
    return os.str();
}

// Thread count is execution detail, deliberately excluded: outputs must be
// byte-identical for any --threads value.
json config_base(const std::string& cmd, const OutputSink& sink) {
    json c;
    c["command"] = cmd;
    c["format"] = sink.format;
    return c;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"arithmetic kernel sums, lattice counts, and local Weil orbits"};
    app.require_subcommand(1);

    // ---- count ----
    auto* c_count = app.add_subcommand("count", "lattice points of fixed norm in a u-ball");
    std::string count_order = "full", count_z = "i";
    long long count_n = 1;
    std::string count_delta = "0";
    OutputSink count_sink;
    c_count->add_option("--order", count_order, "full or eichler:q");
    c_count->add_option("--z", count_z, "point z = x+yi");
    c_count->add_option("--n", count_n, "norm")->check(CLI::PositiveNumber);
    c_count->add_option("--delta", count_delta, "u-ball radius (decimal)");
    count_sink.add_flags(c_count);

    // ---- profile ----
    auto* c_prof = app.add_subcommand("profile", "count profile for all norms up to N");
    std::string prof_order = "full", prof_z = "i", prof_delta = "0";
    long long prof_N = 10;
    OutputSink prof_sink;
    c_prof->add_option("--order", prof_order, "full or eichler:q");
    c_prof->add_option("--z", prof_z, "point");
    c_prof->add_option("--N", prof_N, "horizon")->check(CLI::PositiveNumber);
    c_prof->add_option("--delta", prof_delta, "u-ball radius");
    prof_sink.add_flags(c_prof);

    // ---- second-moment ----
    auto* c_sm = app.add_subcommand("second-moment",
                                    "sum of squared counts with a weighting");
    std::string sm_z = "i", sm_delta = "0", sm_weighting = "uniform";
    bool sm_delta_inv = false;
    std::vector<long long> sm_N = {100};
    double sm_A = 1.0;
    OutputSink sm_sink;
    c_sm->add_option("--z", sm_z, "point");
    c_sm->add_option("--N", sm_N, "one or more horizons")->delimiter(',');
    c_sm->add_option("--delta", sm_delta, "u-ball radius");
    c_sm->add_flag("--delta-inverse-N", sm_delta_inv, "use delta = 1/N per horizon");
    c_sm->add_option("--weighting", sm_weighting, "uniform, reciprocal, or exp-tail")
        ->check(CLI::IsMember({"uniform", "reciprocal", "exp-tail"}));
    c_sm->add_option("--A", sm_A, "exp-tail scale");
    sm_sink.add_flags(c_sm);

    // ---- hecke ----
    auto* c_hecke = app.add_subcommand("hecke", "geometric Hecke ratio S(n)/S(1)");
    int hecke_m = 12;
    long long hecke_n = 2;
    std::string hecke_z = "i", hecke_w = "i";
    double hecke_tol = 1e-9;
    OutputSink hecke_sink;
    c_hecke->add_option("--m", hecke_m, "weight");
    c_hecke->add_option("--n", hecke_n, "Hecke index")->check(CLI::PositiveNumber);
    c_hecke->add_option("--z", hecke_z, "left point");
    c_hecke->add_option("--w", hecke_w, "right point");
    c_hecke->add_option("--tol", hecke_tol, "kernel sum tolerance");
    hecke_sink.add_flags(c_hecke);

    // ---- theta ----
    auto* c_theta = app.add_subcommand("theta", "theta Fourier coefficient n^{m/2-1} S(n)");
    int theta_m = 12;
    long long theta_n = 1;
    std::string theta_z = "i", theta_w = "i", theta_order = "full";
    double theta_tol = 1e-9;
    OutputSink theta_sink;
    c_theta->add_option("--m", theta_m, "weight");
    c_theta->add_option("--n", theta_n, "coefficient index")->check(CLI::PositiveNumber);
    c_theta->add_option("--z", theta_z, "left point");
    c_theta->add_option("--w", theta_w, "right point");
    c_theta->add_option("--order", theta_order, "full or eichler:q");
    c_theta->add_option("--tol", theta_tol, "kernel sum tolerance");
    theta_sink.add_flags(c_theta);

    // ---- weil-orbit ----
    auto* c_orbit = app.add_subcommand("weil-orbit", "local Weil orbit closure vs prediction");
    long long orb_p = 2;
    int orb_level = 1;
    bool orb_ram = false, orb_golden = false;
    OutputSink orb_sink;
    c_orbit->add_option("--p", orb_p, "prime")->check(CLI::PositiveNumber);
    c_orbit->add_option("--level", orb_level, "Eichler level exponent n (split)");
    c_orbit->add_flag("--ramified", orb_ram, "ramified local algebra");
    c_orbit->add_flag("--golden", orb_golden, "embed the full orbit table");
    orb_sink.add_flags(c_orbit);

    // ---- global-orbit ----
    auto* c_glob = app.add_subcommand("global-orbit", "global lattice-label catalog");
    long long glob_q = 1, glob_db = 1;
    OutputSink glob_sink;
    c_glob->add_option("--q", glob_q, "Eichler level")->check(CLI::PositiveNumber);
    c_glob->add_option("--DB", glob_db, "reduced discriminant")->check(CLI::PositiveNumber);
    glob_sink.add_flags(c_glob);

    // ---- quat-count ----
    auto* c_quat = app.add_subcommand("quat-count", "division-order norm/u-ball count");
    long long quat_de = -19, quat_db = 6, quat_n = 1;
    std::string quat_delta = "0";
    double quat_lambda = 1.0;
    bool quat_wide = false;
    OutputSink quat_sink;
    c_quat->add_option("--DE", quat_de, "imaginary quadratic discriminant (negative)");
    c_quat->add_option("--DB", quat_db, "quaternion discriminant");
    c_quat->add_option("--n", quat_n, "norm")->check(CLI::PositiveNumber);
    c_quat->add_option("--delta", quat_delta, "u-ball radius");
    c_quat->add_option("--lambda", quat_lambda, "Cartan eigenvalue (>= 1)");
    c_quat->add_flag("--wide", quat_wide, "enumerate the dual-coefficient superset lattice");
    quat_sink.add_flags(c_quat);

    // ---- report-bounds ----
    auto* c_rb = app.add_subcommand("report-bounds",
                                    "spectral lower vs geometric upper bound");
    int rb_m = 12;
    std::string rb_z = "i", rb_grid;
    long long rb_q = 1, rb_db = 1;
    bool rb_trend = false;
    OutputSink rb_sink;
    c_rb->add_option("--m", rb_m, "weight");
    c_rb->add_option("--z", rb_z, "point");
    c_rb->add_option("--q", rb_q, "Eichler level");
    c_rb->add_option("--DB", rb_db, "reduced discriminant");
    c_rb->add_option("--delta-grid", rb_grid, "a:b:steps linear grid override");
    c_rb->add_flag("--trend", rb_trend, "sweep m in {12,16,20,26}");
    rb_sink.add_flags(c_rb);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (c_count->parsed()) {
            json cfg = config_base("count", count_sink);
            cfg["order"] = count_order;
            cfg["z"] = count_z;
            cfg["n"] = count_n;
            cfg["delta"] = count_delta;
            count_sink.run(cfg.dump(), [&] {
                long long c = count_norm_ball(parse_order(count_order), parse_point(count_z),
                                              count_n, Rat::from_decimal(count_delta));
                json res;
                res["count"] = c;
                return render(count_sink, cfg, res);
            });
        } else if (c_prof->parsed()) {
            json cfg = config_base("profile", prof_sink);
            cfg["order"] = prof_order;
            cfg["z"] = prof_z;
            cfg["N"] = prof_N;
            cfg["delta"] = prof_delta;
            prof_sink.run(cfg.dump(), [&] {
                auto p = count_profile(parse_order(prof_order), parse_point(prof_z), prof_N,
                                       Rat::from_decimal(prof_delta));
                json res;
                res["counts"] = p.counts;
                return render(prof_sink, cfg, res);
            });
        } else if (c_sm->parsed()) {
            json cfg = config_base("second-moment", sm_sink);
            cfg["z"] = sm_z;
            cfg["N"] = sm_N;
            cfg["delta"] = sm_delta_inv ? "1/N" : sm_delta;
            cfg["weighting"] = sm_weighting;
            if (sm_weighting == "exp-tail") cfg["A"] = fmt_real(sm_A);
            sm_sink.run(cfg.dump(), [&] {
                RatPoint z = parse_point(sm_z);
                Weighting w = sm_weighting == "uniform"     ? Weighting::uniform
                              : sm_weighting == "reciprocal" ? Weighting::reciprocal
                                                             : Weighting::exp_tail;
                struct Item {
                    CountProfile prof;
                    double moment;
                    TraceSplitDiagnostics diag;
                };
                std::vector<std::future<Item>> futs;
                for (long long N : sm_N) {
                    futs.push_back(std::async(
                        sm_sink.threads > 1 ? std::launch::async : std::launch::deferred,
                        [&, N] {
                            Rat d = sm_delta_inv ? Rat(1, N) : Rat::from_decimal(sm_delta);
                            auto p = count_profile(OrderSpec::full(), z, N, d);
                            auto diag = trace_split_pairs(OrderSpec::full(), z, N, d);
                            return Item{p, second_moment(p, w, sm_A), diag};
                        }));
                }
                json res;
                json per = json::array();
                std::vector<double> logN, logV;
                for (size_t i = 0; i < futs.size(); ++i) {
                    auto [p, v, diag] = futs[i].get();
                    json e;
                    e["N"] = sm_N[i];
                    e["value"] = fmt_real(v);
                    e["counts"] = p.counts;
                    e["pairs_equal_trace"] = diag.equal_trace_pairs;
                    e["pairs_unequal_trace"] = diag.unequal_trace_pairs;
                    per.push_back(e);
                    if (v > 0) {
                        logN.push_back(std::log(double(sm_N[i])));
                        logV.push_back(std::log(v));
                    }
                }
                res["moments"] = per;
                if (logN.size() >= 2) {
                    // least-squares slope of log V against log N
                    double mx = 0, my = 0;
                    for (size_t i = 0; i < logN.size(); ++i) {
                        mx += logN[i];
                        my += logV[i];
                    }
                    mx /= double(logN.size());
                    my /= double(logN.size());
                    double num = 0, den = 0;
                    for (size_t i = 0; i < logN.size(); ++i) {
                        num += (logN[i] - mx) * (logV[i] - my);
                        den += (logN[i] - mx) * (logN[i] - mx);
                    }
                    res["fitted_exponent"] = fmt_real(num / den);
                }
                return render(sm_sink, cfg, res);
            });
        } else if (c_hecke->parsed()) {
            json cfg = config_base("hecke", hecke_sink);
            cfg["m"] = hecke_m;
            cfg["n"] = hecke_n;
            cfg["z"] = hecke_z;
            cfg["w"] = hecke_w;
            cfg["tol"] = fmt_real(hecke_tol);
            hecke_sink.run(cfg.dump(), [&] {
                Point z = parse_point(hecke_z).to_point();
                Point w = parse_point(hecke_w).to_point();
                cplx kappa = hecke_ratio(hecke_n, Weight(hecke_m), z, w, hecke_tol);
                json res;
                res["kappa"] = fmt_real(kappa.real());
                res["kappa_imag"] = fmt_real(kappa.imag());
                if (hecke_m == 12) {
                    auto tau = delta_coefficients(hecke_n);
                    long long den = 1;
                    for (int i = 0; i < hecke_m / 2 - 1; ++i) den *= hecke_n;
                    res["tau_over"] = std::to_string(tau[size_t(hecke_n - 1)]) + "/" +
                                      std::to_string(den);
                }
                return render(hecke_sink, cfg, res);
            });
        } else if (c_theta->parsed()) {
            json cfg = config_base("theta", theta_sink);
            cfg["m"] = theta_m;
            cfg["n"] = theta_n;
            cfg["z"] = theta_z;
            cfg["w"] = theta_w;
            cfg["order"] = theta_order;
            cfg["tol"] = fmt_real(theta_tol);
            theta_sink.run(cfg.dump(), [&] {
                KernelSumParams p(Weight(theta_m), theta_tol);
                cplx v = theta_coefficient(theta_n, parse_point(theta_z).to_point(),
                                           parse_point(theta_w).to_point(), p,
                                           parse_order(theta_order));
                json res;
                res["coefficient"] = fmt_cplx(v);
                return render(theta_sink, cfg, res);
            });
        } else if (c_orbit->parsed()) {
            json cfg = config_base("weil-orbit", orb_sink);
            cfg["p"] = orb_p;
            cfg["level"] = orb_level;
            cfg["ramified"] = orb_ram;
            cfg["golden"] = orb_golden;
            orb_sink.run(cfg.dump(), [&] {
                auto closure = orbit_closure(orb_p, orb_level, orb_ram);
                auto predicted = predicted_orbit(orb_p, orb_level, orb_ram);
                std::set<std::string> ck, pk;
                for (const auto& f : closure) ck.insert(f.canonical_key());
                for (const auto& f : predicted) pk.insert(f.canonical_key());
                json res;
                res["orbit_size"] = closure.size();
                res["predicted_size"] = predicted.size();
                res["matches_prediction"] = (ck == pk);
                if (orb_golden)
                    res["golden"] = json::parse(
                        orbit_to_json(orb_p, orb_level, orb_ram, closure));
                return render(orb_sink, cfg, res);
            });
        } else if (c_glob->parsed()) {
            json cfg = config_base("global-orbit", glob_sink);
            cfg["q"] = glob_q;
            cfg["DB"] = glob_db;
            glob_sink.run(cfg.dump(), [&] {
                auto cat = global_orbit(glob_q, glob_db);
                json res;
                res["total"] = cat.total;
                json arr = json::array();
                for (const auto& e : cat.entries) {
                    json ent;
                    ent["a"] = e.a;
                    ent["multiplicity"] = e.multiplicity;
                    ent["u_modulus"] = e.u_modulus;
                    ent["t_modulus"] = e.t_modulus;
                    ent["sign"] = e.sign;
                    arr.push_back(ent);
                }
                res["entries"] = arr;
                return render(glob_sink, cfg, res);
            });
        } else if (c_quat->parsed()) {
            json cfg = config_base("quat-count", quat_sink);
            cfg["DE"] = quat_de;
            cfg["DB"] = quat_db;
            cfg["n"] = quat_n;
            cfg["delta"] = quat_delta;
            cfg["lambda"] = fmt_real(quat_lambda);
            cfg["wide"] = quat_wide;
            quat_sink.run(cfg.dump(), [&] {
                DivisionOrderModel model(ImagQuadField(quat_de), quat_db, quat_wide);
                long long c = count_quat(model, CartanParams(quat_lambda), quat_n,
                                         Rat::from_decimal(quat_delta));
                json res;
                res["count"] = c;
                return render(quat_sink, cfg, res);
            });
        } else if (c_rb->parsed()) {
            json cfg = config_base("report-bounds", rb_sink);
            cfg["m"] = rb_m;
            cfg["z"] = rb_z;
            cfg["q"] = rb_q;
            cfg["DB"] = rb_db;
            cfg["delta_grid"] = rb_grid;
            cfg["trend"] = rb_trend;
            rb_sink.run(cfg.dump(), [&] {
                RatPoint zr = parse_point(rb_z);
                auto eval_m = [&](int m) {
                    Weight w(m);
                    double lower = spectral_lower_bound(zr.to_point(), w);
                    std::vector<double> grid;
                    if (!rb_grid.empty()) {
                        double a, b;
                        int steps;
                        if (std::sscanf(rb_grid.c_str(), "%lf:%lf:%d", &a, &b, &steps) != 3 ||
                            steps < 2)
                            throw std::domain_error("--delta-grid must be a:b:steps");
                        for (int i = 0; i < steps; ++i)
                            grid.push_back(a + (b - a) * i / (steps - 1));
                    } else {
                        grid = default_delta_grid(w);
                    }
                    long long qd = rb_q * rb_db;
                    long long N = qd * qd * m + 28 * qd * qd;
                    std::vector<std::future<CountProfile>> futs;
                    for (double d : grid)
                        futs.push_back(std::async(rb_sink.threads > 1 ? std::launch::async
                                                                      : std::launch::deferred,
                                                  [&, d] {
                                                      OrderSpec ord =
                                                          rb_q > 1 ? OrderSpec::eichler(rb_q)
                                                                   : OrderSpec::full();
                                                      // decimalize d exactly via printf
                                                      Rat dr = Rat::from_decimal(fmt_real(d));
                                                      return count_profile(ord, zr, N, dr);
                                                  }));
                    DeltaGridProfiles profs;
                    for (size_t i = 0; i < grid.size(); ++i)
                        profs.emplace_back(grid[i], futs[i].get());
                    double upper = geometric_upper_bound(w, rb_q, rb_db, profs);
                    return std::make_pair(lower, upper);
                };
                auto [lower, upper] = eval_m(rb_m);
                json res;
                res["spectral_lower_bound"] = fmt_real(lower);
                res["geometric_upper_bound"] = fmt_real(upper);
                res["ratio"] = fmt_real(upper / lower);
                if (rb_trend) {
                    json tr = json::array();
                    for (int m : {12, 16, 20, 26}) {
                        auto [lo, up] = eval_m(m);
                        json e;
                        e["m"] = m;
                        e["lower"] = fmt_real(lo);
                        e["upper"] = fmt_real(up);
                        e["ratio"] = fmt_real(up / lo);
                        tr.push_back(e);
                    }
                    res["trend"] = tr;
                }
                return render(rb_sink, cfg, res);
            });
        }
    } catch (const CLI::Error& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
