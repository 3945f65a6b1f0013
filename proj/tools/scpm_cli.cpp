// Command-line driver: sector tables (spectrum), eigenvector reports (eigvecs),
// and identity verification suites (verify) with JSON reports.
#include <cinttypes>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>
#include <unsupported/Eigen/KroneckerProduct>

#include "CLI11.hpp"
#include "json.hpp"
#include "scpm/cpm.hpp"
#include "scpm/xxz.hpp"

using namespace scpm;
using json = nlohmann::ordered_json;

namespace {

const std::vector<std::string> all_suites = {"tau2",    "cpm",       "sectors", "onsager",
                                             "duality", "inversion", "xxz",     "fmcurrent"};

struct RunConfig {
    int N = 3;
    int L = 3;
    std::vector<int> ms, rs, Qs;  // empty means all
    std::vector<double> kprimes;
    std::uint64_t seed = 1;
    std::vector<std::string> suites;
    std::string out = ".";
    double tol_identity = tol_id;  // rescales identity-class tolerances
    double tol_group = tol_grp;    // rescales eigenvector/group tolerances
};

std::vector<int> parse_axis(const std::string& v) {
    if (v == "all") return {};
    return {std::stoi(v)};
}

void load_config(RunConfig& cfg, const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config file: " + path);
    std::string line;
    while (std::getline(in, line)) {
        auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        auto eq = line.find('=');
        if (eq == std::string::npos) continue;
        auto trim = [](std::string s) {
            s.erase(0, s.find_first_not_of(" \t"));
            s.erase(s.find_last_not_of(" \t") + 1);
            return s;
        };
        std::string key = trim(line.substr(0, eq)), val = trim(line.substr(eq + 1));
        if (key.empty() || val.empty()) continue;
        if (key == "N")
            cfg.N = std::stoi(val);
        else if (key == "L")
            cfg.L = std::stoi(val);
        else if (key == "m")
            cfg.ms = parse_axis(val);
        else if (key == "r")
            cfg.rs = parse_axis(val);
        else if (key == "Q")
            cfg.Qs = parse_axis(val);
        else if (key == "seed")
            cfg.seed = std::stoull(val);
        else if (key == "output_dir")
            cfg.out = val;
        else if (key == "tol_id")
            cfg.tol_identity = std::stod(val);
        else if (key == "tol_grp")
            cfg.tol_group = std::stod(val);
        else if (key == "kprime" || key == "suites") {
            std::stringstream ss(val);
            std::string tok;
            while (std::getline(ss, tok, ',')) {
                tok = trim(tok);
                if (tok.empty()) continue;
                if (key == "kprime")
                    cfg.kprimes.push_back(std::stod(tok));
                else
                    cfg.suites.push_back(tok);
            }
        } else {
            throw std::runtime_error("unknown config key: " + key);
        }
    }
}

void validate_config(const RunConfig& cfg) {
    if (cfg.N < 3 || cfg.N % 2 == 0) throw std::runtime_error("N must be odd >= 3");
    if (cfg.L < 1 || ipow(cfg.N, cfg.L - 1) > 625)
        throw std::runtime_error("dimension cap exceeded: N^(L-1) must be <= 625");
    for (double kp : cfg.kprimes)
        if (std::abs(kp) < 1e-12 || std::abs(std::abs(kp) - 1.0) < 1e-12)
            throw std::runtime_error("kprime must avoid 0 and +-1");
    for (const std::string& s : cfg.suites)
        if (std::find(all_suites.begin(), all_suites.end(), s) == all_suites.end())
            throw std::runtime_error("unknown suite: " + s);
}

std::vector<int> axis_values(const std::vector<int>& ax, int N) {
    if (!ax.empty()) return ax;
    std::vector<int> v(N);
    for (int i = 0; i < N; ++i) v[i] = i;
    return v;
}

std::mt19937_64 grid_rng(const RunConfig& cfg, int m, int r, int Q) {
    return std::mt19937_64(cfg.seed * 1000003ULL +
                           static_cast<std::uint64_t>((m * cfg.N + r) * cfg.N + Q));
}

std::string sector_id(const Sector& s) {
    std::uint64_t h = 1469598103934665603ULL;
    auto mix = [&](std::int64_t x) {
        for (int i = 0; i < 8; ++i) {
            h ^= static_cast<std::uint64_t>(x >> (8 * i)) & 0xff;
            h *= 1099511628211ULL;
        }
    };
    for (int x : {s.N, s.L, s.m, s.r, s.Q, s.Pa, s.Pb}) mix(x);
    for (cd c : s.F.c) {
        mix(std::llround(c.real() * 1e9));
        mix(std::llround(c.imag() * 1e9));
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016" PRIx64, h);
    return buf;
}

json complex_list(const std::vector<cd>& v) {
    json out = json::array();
    for (cd c : v) out.push_back({c.real(), c.imag()});
    return out;
}

json vector_json(const Vec& v) {
    std::vector<cd> c(v.data(), v.data() + v.size());
    return complex_list(c);
}

std::vector<std::string> sector_types(const Sector& s) {
    std::vector<std::string> t;
    if (s.type_I_plus) t.push_back("I+");
    if (s.type_I_minus) t.push_back("I-");
    if (s.type_i_plus) t.push_back("i+");
    if (s.type_i_minus) t.push_back("i-");
    return t;
}

json sector_json(const Sector& s) {
    json j;
    j["id"] = sector_id(s);
    j["N"] = s.N;
    j["L"] = s.L;
    j["m"] = s.m;
    j["r"] = s.r;
    j["Q"] = s.Q;
    j["J"] = s.J;
    j["Pa"] = s.Pa;
    j["Pb"] = s.Pb;
    j["Pmu"] = s.Pmu;
    j["mE"] = s.mE;
    j["dE"] = s.dE;
    j["alpha"] = s.alpha;
    j["beta"] = s.beta;
    j["types"] = sector_types(s);
    j["F_coeffs"] = complex_list(s.F.c);
    j["theta"] = s.theta;
    j["a"] = complex_list(s.a);
    j["eigpoly_coeffs"] = complex_list(s.eigpoly.c);
    return j;
}

std::string sign_string(unsigned mask, int mE) {
    std::string s;
    for (int i = 0; i < mE; ++i) s += (mask >> i) & 1 ? '+' : '-';
    return s;
}

void write_json(const std::string& dir, const std::string& name, const json& j) {
    std::filesystem::create_directories(dir);
    std::ofstream out(dir + "/" + name);
    out << j.dump(2) << "\n";
}

bool poly_close(const CPoly& a, const CPoly& b, double tol = 1e-7) {
    size_t n = std::max(a.c.size(), b.c.size());
    for (size_t i = 0; i < n; ++i) {
        cd ca = i < a.c.size() ? a.c[i] : cd(0.0);
        cd cb = i < b.c.size() ? b.c[i] : cd(0.0);
        if (std::abs(ca - cb) > tol) return false;
    }
    return true;
}

const Sector* find_sector(const std::vector<Sector>& list, const CPoly& F, int Pa, int Pb) {
    for (const auto& s : list)
        if (s.Pa == Pa && s.Pb == Pb && poly_close(s.F, F)) return &s;
    return nullptr;
}

double comm_scale(const Mat& A, const Mat& B) {
    return (A * B - B * A).cwiseAbs().maxCoeff() / (mat_scale(A) * mat_scale(B));
}

cd cpow(cd b, int e) {
    cd r = 1.0;
    for (int i = 0; i < std::abs(e); ++i) r *= b;
    return e < 0 ? 1.0 / r : r;
}

// ---------------------------------------------------------------- spectrum

int cmd_spectrum(const RunConfig& cfg) {
    json sectors = json::array();
    std::string first_failure;
    for (int m : axis_values(cfg.ms, cfg.N)) {
        for (int r : axis_values(cfg.rs, cfg.N)) {
            Tau2Spec spec{cfg.N, cfg.L, m, r};
            for (int Q : axis_values(cfg.Qs, cfg.N)) {
                auto rng = grid_rng(cfg, m, r, Q);
                auto list = enumerate_sectors(spec, Q, rng);
                long total = 0;
                for (size_t i = 0; i < list.size(); ++i)
                    for (size_t j = i + 1; j < list.size(); ++j)
                        if (list[i].Pa == list[j].Pa && list[i].Pb == list[j].Pb &&
                            poly_close(list[i].F, list[j].F) && first_failure.empty())
                            first_failure = "duplicate (F, Pa, Pb) in " + sector_id(list[i]);
                for (const Sector& s : list) {
                    total += 1L << s.mE;
                    if (s.frame.cols() != (1L << s.mE) && first_failure.empty())
                        first_failure = "eigenspace dimension != 2^mE in " + sector_id(s);
                    double res = bethe_residual(BetheData{s.F, s.Pa, s.Pb, s.J}, spec);
                    if (res > 1e-7 && first_failure.empty())
                        first_failure = "Bethe residual above 1e-7 in " + sector_id(s);
                    json j = sector_json(s);
                    j["bethe_residual"] = res;
                    sectors.push_back(j);
                    std::printf("%s m=%d r=%d Q=%d J=%d Pa=%d Pb=%d Pmu=%d mE=%d types=",
                                sector_id(s).c_str(), m, r, Q, s.J, s.Pa, s.Pb, s.Pmu, s.mE);
                    for (const std::string& t : sector_types(s)) std::printf("%s,", t.c_str());
                    std::printf(" theta=");
                    for (double th : s.theta) std::printf("%.6f,", th);
                    std::printf("\n");
                }
                if (total != ipow(cfg.N, cfg.L - 1) && first_failure.empty())
                    first_failure = "completeness sum failed at m=" + std::to_string(m) +
                                    " r=" + std::to_string(r) + " Q=" + std::to_string(Q);
            }
        }
    }
    json report;
    report["config"] = {{"N", cfg.N}, {"L", cfg.L}, {"seed", cfg.seed}};
    report["sectors"] = sectors;
    write_json(cfg.out, "sectors.json", report);
    if (!first_failure.empty()) {
        std::fprintf(stderr, "certificate failed: %s\n", first_failure.c_str());
        return 1;
    }
    return 0;
}

// ---------------------------------------------------------------- eigvecs

int cmd_eigvecs(const RunConfig& cfg, const std::string& id) {
    for (int m : axis_values(cfg.ms, cfg.N))
        for (int r : axis_values(cfg.rs, cfg.N)) {
            Tau2Spec spec{cfg.N, cfg.L, m, r};
            for (int Q : axis_values(cfg.Qs, cfg.N)) {
                auto rng = grid_rng(cfg, m, r, Q);
                for (const Sector& sec : enumerate_sectors(spec, Q, rng)) {
                    if (sector_id(sec) != id) continue;
                    bool ok = true;
                    json rep;
                    rep["sector"] = sector_json(sec);
                    long d = 1L << sec.mE;
                    for (bool wk : {true, false}) {
                        VectorFamily fam = u_basis(sec, wk);
                        json jf;
                        double gram = 0.0;
                        for (long i = 0; i < d; ++i) {
                            jf[sign_string(static_cast<unsigned>(i), sec.mE)] =
                                vector_json(fam.u[i]);
                            for (long j = 0; j < d; ++j)
                                gram = std::max(gram, std::abs(fam.u[i].dot(fam.u[j]) -
                                                               (i == j ? cd(1) : cd(0))));
                        }
                        rep[wk ? "u_basis_w" : "u_basis_v"] = jf;
                        rep[wk ? "u_basis_w_gram" : "u_basis_v_gram"] = gram;
                        if (gram > 1e-8 * (cfg.tol_identity / tol_id)) ok = false;
                    }
                    // constructive basis from the degeneracy currents
                    if (sec.mE >= 1 && sec.mE <= 2) {
                        LoopModeSet ms = product_operators(sec, spec);
                        VectorFamily fm = generate_u_basis(sec, spec, ms);
                        VectorFamily ref = u_basis(sec, fm.w_kind);
                        json jf;
                        double gram = 0.0, ovl = 1.0;
                        for (long i = 0; i < d; ++i) {
                            jf[sign_string(static_cast<unsigned>(i), sec.mE)] =
                                vector_json(fm.u[i]);
                            for (long j = 0; j < d; ++j)
                                gram = std::max(gram, std::abs(fm.u[i].dot(fm.u[j]) -
                                                               (i == j ? cd(1) : cd(0))));
                            ovl = std::min(ovl, std::abs(ref.u[i].dot(fm.u[i])));
                        }
                        rep["fm_basis"] = jf;
                        rep["fm_basis_gram"] = gram;
                        rep["fm_basis_overlap"] = ovl;
                        rep["fm_fit_remainder"] = ms.cur.fit_remainder;
                        rep["fm_gamma_end_rel"] = ms.cur.gamma_end_rel;
                        if (gram > 1e-8 || ovl < 1.0 - 1e-6 * (cfg.tol_group / tol_grp))
                            ok = false;
                    }
                    json fams = json::array();
                    VectorFamily fw = u_basis(sec, true), fv = u_basis(sec, false);
                    for (double kp : cfg.kprimes) {
                        json jk;
                        jk["kprime"] = kp;
                        LabeledVectors lv = direct_eigvectors(sec, kp);
                        jk["kprime_used"] = lv.kprime_used;
                        double worst = 1.0;
                        json jw, jv, je;
                        for (unsigned mask = 0; mask < (1u << sec.mE); ++mask) {
                            Vec w = synthesize(sec, fw, mask, lv.kprime_used);
                            Vec v = synthesize(sec, fv, mask, lv.kprime_used);
                            std::string key = sign_string(mask, sec.mE);
                            jw[key] = vector_json(w);
                            jv[key] = vector_json(v);
                            je[key] = energy(sec, mask, lv.kprime_used).E;
                            worst = std::min(worst, std::abs(v.dot(lv.v[mask])));
                        }
                        jk["w"] = jw;
                        jk["v"] = jv;
                        jk["energy"] = je;
                        jk["min_overlap_direct"] = worst;
                        if (worst < 1.0 - 1e-6 * (cfg.tol_group / tol_grp)) ok = false;
                        fams.push_back(jk);
                    }
                    rep["families"] = fams;
                    // duality correspondence for reciprocal kprime pairs
                    json dual_checks = json::array();
                    for (size_t i = 0; i < cfg.kprimes.size(); ++i)
                        for (size_t j = i + 1; j < cfg.kprimes.size(); ++j) {
                            if (std::abs(cfg.kprimes[i] * cfg.kprimes[j] - 1.0) > 1e-9) continue;
                            Tau2Spec dspec{cfg.N, cfg.L, m, Q};
                            auto drng = grid_rng(cfg, m, Q, r);
                            auto duals = enumerate_sectors(dspec, r, drng);
                            const Sector* dsec = find_sector(duals, sec.F, sec.Pa, sec.Pb);
                            if (!dsec) continue;
                            DualityVectorCheck ck =
                                duality_vectors(sec, *dsec, std::max(cfg.kprimes[i], cfg.kprimes[j]));
                            json jd;
                            jd["kprime_pair"] = {cfg.kprimes[i], cfg.kprimes[j]};
                            jd["max_tau_residual"] = ck.max_tau_residual;
                            jd["max_H_residual"] = ck.max_H_residual;
                            jd["max_unit_defect"] = ck.max_unit_defect;
                            dual_checks.push_back(jd);
                            if (ck.max_unit_defect > 1e-6 * (cfg.tol_group / tol_grp)) ok = false;
                        }
                    if (!dual_checks.empty()) rep["duality"] = dual_checks;
                    write_json(cfg.out, "eigvecs_" + id + ".json", rep);
                    std::printf("sector %s: mE=%d, %zu kprime families, %s\n", id.c_str(), sec.mE,
                                cfg.kprimes.size(), ok ? "all checks passed" : "CHECK FAILED");
                    return ok ? 0 : 1;
                }
            }
        }
    std::fprintf(stderr, "sector id not found in the configured grid: %s\n", id.c_str());
    return 2;
}

// ---------------------------------------------------------------- verify

struct Check {
    std::string suite, name;
    double residual = 0.0, tol = 0.0;
    bool pass() const { return residual <= tol; }
};

struct Registry {
    const RunConfig& cfg;
    std::vector<Check> checks;
    // identity-class and group-class tolerances rescale with the config overrides
    double tid(double base) const { return base * (cfg.tol_identity / tol_id); }
    double tgr(double base) const { return base * (cfg.tol_group / tol_grp); }
    void add(const std::string& suite, const std::string& name, double residual, double tol) {
        checks.push_back({suite, name, residual, tol});
    }
};

cd rand_c(std::mt19937_64& rng, double lo = 0.4, double hi = 1.4) {
    std::uniform_real_distribution<double> mag(lo, hi), ph(0, 2 * pi);
    double m = mag(rng), a = ph(rng);
    return m * cd(std::cos(a), std::sin(a));
}

void suite_tau2(Registry& reg) {
    const RunConfig& cfg = reg.cfg;
    std::mt19937_64 rng(cfg.seed + 11);
    double comm = 0, charge = 0, fus = 0, dg = 0, ham = 0;
    int N = cfg.N, L = cfg.L;
    Mat S = spin_shift(N, L);
    for (int m : axis_values(cfg.ms, N)) {
        for (int r : axis_values(cfg.rs, N)) {
            Tau2Spec spec{N, L, m, r};
            for (int rep = 0; rep < 3; ++rep) {
                Mat t1 = build_tau2(spec, rand_c(rng)), t2 = build_tau2(spec, rand_c(rng));
                comm = std::max(comm, comm_scale(t1, t2));
                charge = std::max(charge,
                                  (t1 * S - S * t1).cwiseAbs().maxCoeff() / mat_scale(t1));
            }
            for (int j = 2; j <= N; ++j) {
                cd t = rand_c(rng);
                Mat lhs = build_tau2(spec, omega_root(N, j - 1) * t) * build_fusion(spec, j, t);
                Mat rhs = omega_root(N, r) * fusion_z(spec, omega_root(N, j - 1) * t) *
                              (S * build_fusion(spec, j - 1, t)) +
                          build_fusion(spec, j + 1, t);
                fus = std::max(fus, (lhs - rhs).cwiseAbs().maxCoeff() / mat_scale(lhs));
            }
            Mat A = 2.0 / N * build_H0(spec), B = -2.0 / N * build_H1(spec);
            auto br = [](const Mat& X, const Mat& Y) { return (X * Y - Y * X).eval(); };
            Mat dg1 = br(A, br(A, br(A, B))) - 16.0 * br(A, B);
            Mat dg2 = br(B, br(B, br(B, A))) - 16.0 * br(B, A);
            dg = std::max({dg, dg1.cwiseAbs().maxCoeff() / mat_scale(A),
                           dg2.cwiseAbs().maxCoeff() / mat_scale(A)});
            ham = std::max(ham, comm_scale(build_H(spec, 0.83), build_tau2(spec, rand_c(rng))));
        }
    }
    reg.add("tau2", "commuting_family", comm, reg.tid(1e-9));
    reg.add("tau2", "charge_symmetry", charge, reg.tid(1e-12));
    reg.add("tau2", "fusion_recursion", fus, reg.tid(1e-9));
    reg.add("tau2", "dolan_grady", dg, reg.tid(1e-8));
    reg.add("tau2", "hamiltonian_in_family", ham, reg.tid(1e-9));
}

void suite_cpm(Registry& reg) {
    const RunConfig& cfg = reg.cfg;
    std::mt19937_64 rng(cfg.seed + 13);
    int N = cfg.N, L = std::min(cfg.L, 3);
    double kp = 0.6;
    for (double k : cfg.kprimes)
        if (std::abs(k) > 1e-12 && std::abs(std::abs(k) - 1.0) > 1e-3) {
            kp = k;
            break;
        }
    double star = 0, hatrel = 0, ttform = 0, mom = 0;
    for (int m : axis_values(cfg.ms, N)) {
        for (int r : axis_values(cfg.rs, N)) {
            Tau2Spec spec{N, L, m, r};
            Rapidity p = superintegrable_point(N, m, kp);
            Rapidity q1 = random_rapidity(N, kp, rng), q2 = random_rapidity(N, kp, rng);
            Mat T1 = build_T(spec, p, q1);
            star = std::max(star, comm_scale(T1, build_T(spec, p, q2)));
            Mat S = translation(N, L, r);
            hatrel = std::max(hatrel, (build_That(spec, p, q1) - T1 * S).cwiseAbs().maxCoeff() /
                                          mat_scale(T1));
            for (int Q : axis_values(cfg.Qs, N)) {
                Mat Vd = sector_basis(N, L, r, Q, BasisKind::difference).isometry;
                Mat Ts = Vd.adjoint() * T1 * Vd;
                auto srng = grid_rng(cfg, m, r, Q);
                for (const Sector& sec : enumerate_sectors(spec, Q, srng)) {
                    TTEigInput in{N, L, m, sec.F, sec.Pa, sec.Pb, sec.Pmu, sec.mE, sec.tiN};
                    VectorFamily fam = u_basis(sec, true);
                    for (unsigned mask = 0; mask < (1u << sec.mE); ++mask) {
                        Vec v = synthesize(sec, fam, mask, kp);
                        std::vector<int> s(sec.mE);
                        for (int i = 0; i < sec.mE; ++i) s[i] = sign_of(mask, i);
                        cd want = eval_T_eigenvalue(in, p, q1, s, false, true);
                        ttform = std::max(ttform,
                                          std::abs(v.dot(Ts * v) - want) / (std::abs(want) + 1.0));
                    }
                    Mat Ss = Vd.adjoint() * S * Vd;
                    Vec v0 = sec.frame.col(0);
                    mom = std::max(mom, std::abs(v0.dot(Ss * v0) - momentum_SR(in)));
                }
            }
        }
    }
    reg.add("cpm", "star_triangle_commutation", star, reg.tid(1e-8));
    reg.add("cpm", "that_translation", hatrel, reg.tid(1e-10));
    reg.add("cpm", "transfer_eigenvalue_closed_form", ttform, reg.tgr(1e-6));
    reg.add("cpm", "momentum_translation", mom, reg.tid(1e-8));
}

void suite_sectors(Registry& reg) {
    const RunConfig& cfg = reg.cfg;
    int N = cfg.N, L = cfg.L;
    double complete = 0, bethe = 0, ptwo = 0, proots = 0;
    for (int m : axis_values(cfg.ms, N))
        for (int r : axis_values(cfg.rs, N)) {
            Tau2Spec spec{N, L, m, r};
            for (int Q : axis_values(cfg.Qs, N)) {
                auto rng = grid_rng(cfg, m, r, Q);
                auto list = enumerate_sectors(spec, Q, rng);
                long total = 0;
                Mat Vd = sector_basis(N, L, r, Q, BasisKind::difference).isometry;
                for (const Sector& s : list) {
                    total += 1L << s.mE;
                    bethe = std::max(bethe, bethe_residual(BetheData{s.F, s.Pa, s.Pb, s.J}, spec));
                    // evaluation polynomial from the fused transfer matrix
                    Vec v = s.frame.col(0);
                    for (cd t : {cd(0.79, 0.31), cd(0.45, -0.66)}) {
                        Mat tauN = Vd.adjoint() * build_fusion(spec, N, t) * Vd;
                        cd lam = v.dot(tauN * v);
                        cd Pfus = cpow(t, -(s.Pa + s.Pb)) * lam / (s.F.eval(t) * s.F.eval(t));
                        cd Pdir = s.Ppoly.eval(t);
                        ptwo = std::max(ptwo, std::abs(Pfus - Pdir) /
                                                  (std::abs(Pfus) + std::abs(Pdir) + 1.0));
                    }
                    for (cd tN : s.tiN)
                        proots = std::max(proots, std::max(std::abs(tN.imag()),
                                                           std::max(0.0, tN.real())) /
                                                      std::abs(tN));
                }
                complete = std::max(complete,
                                    std::abs(static_cast<double>(total - ipow(N, L - 1))));
            }
        }
    reg.add("sectors", "completeness_sum", complete, 0.5);
    reg.add("sectors", "bethe_residual", bethe, reg.tid(1e-7));
    reg.add("sectors", "p_polynomial_two_routes", ptwo, reg.tid(1e-7));
    reg.add("sectors", "pev_roots_negative_real", proots, reg.tgr(1e-6));
}

void suite_onsager(Registry& reg) {
    const RunConfig& cfg = reg.cfg;
    int N = cfg.N, L = cfg.L;
    std::vector<double> kps = cfg.kprimes;
    if (kps.empty()) kps = {0.3, -0.3, 0.8, -0.8, 2.5};
    double spect = 0, synth = 0;
    for (int m : axis_values(cfg.ms, N))
        for (int r : axis_values(cfg.rs, N)) {
            Tau2Spec spec{N, L, m, r};
            for (int Q : axis_values(cfg.Qs, N)) {
                auto rng = grid_rng(cfg, m, r, Q);
                for (const Sector& sec : enumerate_sectors(spec, Q, rng)) {
                    VectorFamily fv = u_basis(sec, false);
                    for (double kp : kps) {
                        Mat H = sector_hamiltonian(sec, kp);
                        Mat Hf = sec.frame.adjoint() * H * sec.frame;
                        Eigen::SelfAdjointEigenSolver<Mat> es(Hf);
                        std::vector<double> want;
                        for (unsigned mask = 0; mask < (1u << sec.mE); ++mask)
                            want.push_back(energy(sec, mask, kp).E);
                        std::sort(want.begin(), want.end());
                        for (long i = 0; i < Hf.rows(); ++i)
                            spect = std::max(spect, std::abs(es.eigenvalues()[i] - want[i]) /
                                                        mat_scale(H));
                        LabeledVectors lv = direct_eigvectors(sec, kp);
                        for (unsigned mask = 0; mask < (1u << sec.mE); ++mask) {
                            Vec v = synthesize(sec, fv, mask, lv.kprime_used);
                            synth = std::max(synth, 1.0 - std::abs(v.dot(lv.v[mask])));
                        }
                    }
                }
            }
        }
    reg.add("onsager", "sector_spectrum_match", spect, reg.tid(1e-8));
    reg.add("onsager", "synthesis_overlap", synth, reg.tgr(1e-6));
}

void suite_duality(Registry& reg) {
    const RunConfig& cfg = reg.cfg;
    std::mt19937_64 rng(cfg.seed + 17);
    int N = cfg.N, L = std::min(cfg.L, 3);
    double kp = 0.6;
    double taud = 0, cpmd = 0, hamd = 0, qnum = 0, vecd = 0;
    for (int m : axis_values(cfg.ms, N))
        for (int r : axis_values(cfg.rs, N))
            for (int Q : axis_values(cfg.Qs, N)) {
                Tau2Spec spec{N, L, m, r}, dspec{N, L, m, Q};
                Mat Psi = duality_psi(N, L, r, Q);
                Mat Vd = sector_basis(N, L, r, Q, BasisKind::difference).isometry;
                Mat PV = Psi * Vd;
                cd t = rand_c(rng);
                Mat lhs = build_tau2(dspec, t) * PV;
                Mat rhs = PV * (Vd.adjoint() * build_tau2(spec, t) * Vd);
                taud = std::max(taud, (lhs - rhs).cwiseAbs().maxCoeff() / mat_scale(lhs));
                Rapidity p = superintegrable_point(N, m, kp);
                Rapidity q = random_rapidity(N, kp, rng);
                Rapidity ps = dual_rapidity(p, N), qs = dual_rapidity(q, N);
                cd scal = fourier_weights(N, boltzmann_weights(N, ps, qs).W)[0] /
                          fourier_weights(N, boltzmann_weights(N, p, q).W)[0];
                Mat lhs2 = build_T(dspec, ps, qs) * PV;
                Mat rhs2 = cpow(scal, L) * PV * (Vd.adjoint() * build_T(spec, p, q) * Vd);
                cpmd = std::max(cpmd, (lhs2 - rhs2).cwiseAbs().maxCoeff() /
                                          std::max(mat_scale(lhs2), mat_scale(rhs2)));
                Mat H0 = build_H0(spec), H1 = build_H1(spec);
                hamd = std::max(hamd, (build_H1(dspec) * PV - PV * (Vd.adjoint() * H0 * Vd))
                                              .cwiseAbs()
                                              .maxCoeff() /
                                          mat_scale(H0));
                // quantum-number map between a sector and its dual
                auto srng = grid_rng(cfg, m, r, Q);
                auto drng = grid_rng(cfg, m, Q, r);
                auto list = enumerate_sectors(spec, Q, srng);
                auto duals = enumerate_sectors(dspec, r, drng);
                for (const Sector& s : list) {
                    const Sector* d = find_sector(duals, s.F, s.Pa, s.Pb);
                    if (!d) {
                        qnum = std::max(qnum, 1.0);
                        continue;
                    }
                    bool pm = (s.Pmu + s.dE == d->Pmu) || (s.Pmu - s.dE == d->Pmu);
                    if (d->J != s.J || d->mE != s.mE || !pm) qnum = std::max(qnum, 1.0);
                    if (s.mE >= 1) {
                        DualityVectorCheck ck = duality_vectors(s, *d, 2.5);
                        vecd = std::max({vecd, ck.max_tau_residual, ck.max_H_residual,
                                         ck.max_unit_defect});
                    }
                }
            }
    reg.add("duality", "tau2_transfer", taud, reg.tid(1e-9));
    reg.add("duality", "cpm_transfer_scalar", cpmd, reg.tid(1e-7));
    reg.add("duality", "hamiltonian_swap", hamd, reg.tid(1e-9));
    reg.add("duality", "quantum_number_map", qnum, 0.5);
    reg.add("duality", "vector_correspondence", vecd, reg.tgr(1e-6));
}

void suite_inversion(Registry& reg) {
    const RunConfig& cfg = reg.cfg;
    std::mt19937_64 rng(cfg.seed + 19);
    int N = cfg.N, L = cfg.L;
    double taupa = 0, pair = 0, vec = 0, bflip = 0;
    for (int m : axis_values(cfg.ms, N))
        for (int r : axis_values(cfg.rs, N)) {
            Tau2Spec spec{N, L, m, r};
            Mat J = spin_inversion(N, L, m);
            cd t = rand_c(rng);
            Mat lhs = J * build_tau2(spec, omega_root(N, m) * t) * J;
            Mat rhs = cpow(-t, L) * omega_root(N, -static_cast<long long>(L) * m) *
                      Mat(spin_shift(N, L).inverse() *
                          build_tau2(spec, omega_root(N, m - 1) / t));
            taupa = std::max(taupa, (lhs - rhs).cwiseAbs().maxCoeff() / mat_scale(lhs));
            for (int Q : axis_values(cfg.Qs, N)) {
                auto srng = grid_rng(cfg, m, r, Q);
                for (const Sector& sec : enumerate_sectors(spec, Q, srng)) {
                    bool i_kind = !(sec.type_I_plus || sec.type_I_minus);
                    PartnerTriple p = inversion_partner(sec, i_kind);
                    if (p.Pa + p.Pb != sec.dE) pair = std::max(pair, 1.0);
                    int rp = i_kind ? imod(-(1 + 2 * m) * L - r, N) : r;
                    int Qp = i_kind ? Q : imod(-(1 + 2 * m) * L - Q, N);
                    Tau2Spec pspec{N, L, m, rp};
                    auto prng = grid_rng(cfg, m, rp, Qp);
                    auto plist = enumerate_sectors(pspec, Qp, prng);
                    const Sector* psec = find_sector(plist, p.F, p.Pa, p.Pb);
                    if (!psec) {
                        pair = std::max(pair, 1.0);
                        continue;
                    }
                    if (psec->mE != sec.mE) pair = std::max(pair, 1.0);
                    for (int i = 0; i < sec.mE; ++i)
                        pair = std::max(pair, std::abs(psec->theta[i] -
                                                       (pi - sec.theta[sec.mE - 1 - i])));
                    if (sec.mE >= 1) {
                        InversionVectorCheck ck = inversion_vectors(sec, *psec, 0.55, i_kind);
                        vec = std::max(vec, 1.0 - ck.min_overlap);
                    }
                    // the lowering current maps to the partner's raising one under
                    // spin inversion at the reflected spectral parameter
                    if (sec.mE >= 1 && !fm_kind(sec).dual_conj) {
                        cd q = omega_root(N, (N - 1) / 2);
                        Sector csec = sec;
                        csec.F = p.F;
                        csec.Pa = p.Pa;
                        csec.Pb = p.Pb;
                        int Qc = imod(p.Pb - p.Pa - r - (1 + 2 * m) * L, N);
                        PData pdat = compute_P(BetheData{p.F, p.Pa, p.Pb, sec.J}, spec, Qc);
                        csec.Ppoly = pdat.P;
                        csec.Pev = pdat.Pev;
                        cd s1(0.71, 0.22);
                        cd st = -cpow(q, -1 - 2 * m) / s1;
                        Mat Cc = fm_current(sec, spec, s1, FMKind{false, false});
                        Mat Bp = fm_current(csec, spec, st, FMKind{true, false});
                        bflip = std::max(bflip, rel_norm(Cc, J * Bp * J));
                    }
                }
            }
        }
    reg.add("inversion", "tau2_reflection", taupa, reg.tid(1e-9));
    reg.add("inversion", "sector_pairing", pair, reg.tgr(1e-6));
    reg.add("inversion", "vector_correspondence", vec, reg.tgr(1e-6));
    reg.add("inversion", "current_partner_map", bflip, reg.tid(1e-9));
}

void suite_xxz(Registry& reg) {
    const RunConfig& cfg = reg.cfg;
    int N = cfg.N, L = cfg.L;
    cd q = omega_root(N, (N - 1) / 2);
    double gauge = 0, mono = 0, heig = 0, beq = 0;
    for (int m : axis_values(cfg.ms, N))
        for (int r : axis_values(cfg.rs, N)) {
            Tau2Spec spec{N, L, m, r};
            cd s(0.63, 0.41), t = s * s;
            Mat Kh = Mat::Identity(1, 1);
            {
                XXZRep rep = xxz_rep(N, m);
                Kh = rep.Khalf;
                for (int l = 2; l <= L; ++l)
                    Kh = Eigen::kroneckerProduct(Kh, rep.Khalf).eval();
            }
            Mat Khi = Kh.inverse();
            gauge = std::max(gauge, rel_norm(build_tau2(spec, t),
                                             cpow(-s / q, L) * (Khi * xxz_transfer(spec, s / q))));
            Monodromy Mt = build_monodromy(spec, t);
            Monodromy Mx = xxz_monodromy(spec, s);
            mono = std::max({mono, rel_norm(Mt.A, cpow(-s, L) * (Khi * Mx.A)),
                             rel_norm(Mt.B, cpow(-s, L - 1) / q * (Khi * Mx.B)),
                             rel_norm(Mt.C, cpow(-s, L + 1) * q * (Khi * Mx.C)),
                             rel_norm(Mt.D, cpow(-s, L) * (Khi * Mx.D))});
            Mat H0 = build_H0(spec), H1 = build_H1(spec);
            for (int Q : axis_values(cfg.Qs, N)) {
                auto rng = grid_rng(cfg, m, r, Q);
                for (const Sector& sec : enumerate_sectors(spec, Q, rng)) {
                    if (sec.mE < 1) continue;
                    FMKind kind = fm_kind(sec);
                    Vec psi = bethe_state(sec, spec, kind);
                    double sgn = kind.plus_type ? 1.0 : -1.0;
                    const Mat& H = kind.dual_conj ? H0 : H1;
                    double shift = kind.dual_conj ? sec.alpha : sec.beta;
                    heig = std::max(heig, (H * psi - (shift + sgn * N * sec.mE) * psi).norm() /
                                              (psi.norm() * mat_scale(H)));
                    if (sec.J >= 1) {
                        std::vector<cd> rt = poly_roots(sec.F);
                        for (size_t j = 0; j < rt.size(); ++j) {
                            cd lhs = std::pow((1.0 - cpow(q, 2 * m + 2) * rt[j]) /
                                                  (1.0 - cpow(q, 2 * m) * rt[j]),
                                              L);
                            cd rhs = -cpow(q, -2 * (sec.Pa + sec.Pb + sec.J));
                            for (size_t i = 0; i < rt.size(); ++i)
                                rhs *= (q * q * rt[i] - rt[j]) / (rt[i] - q * q * rt[j]);
                            beq = std::max(beq, std::abs(lhs - rhs) / (std::abs(lhs) + 1.0));
                        }
                    }
                }
            }
        }
    reg.add("xxz", "tau2_gauge", gauge, reg.tid(1e-9));
    reg.add("xxz", "monodromy_gauge", mono, reg.tid(1e-9));
    reg.add("xxz", "bethe_state_eigenvalue", heig, reg.tid(1e-7));
    reg.add("xxz", "bethe_equations", beq, reg.tid(1e-7));
}

void suite_fmcurrent(Registry& reg) {
    const RunConfig& cfg = reg.cfg;
    int N = cfg.N, L = cfg.L;
    double commB = 0, fit = 0, gend = 0, gram = 0, ovl = 0, synth = 0;
    for (int m : axis_values(cfg.ms, N))
        for (int r : axis_values(cfg.rs, N)) {
            Tau2Spec spec{N, L, m, r};
            for (int Q : axis_values(cfg.Qs, N)) {
                auto rng = grid_rng(cfg, m, r, Q);
                for (const Sector& sec : enumerate_sectors(spec, Q, rng)) {
                    if (sec.mE < 1) continue;
                    FMKind kind = fm_kind(sec);
                    Vec psi = bethe_state(sec, spec, kind);
                    Mat c1 = fm_current(sec, spec, cd(0.71, 0.22), kind);
                    Mat T = xxz_transfer(spec, cd(1.1, 0.4));
                    commB = std::max(commB, (T * (c1 * psi) - c1 * (T * psi)).norm() /
                                                (T.norm() * (c1 * psi).norm() + 1e-300));
                    CurrentData cur = regularize_current(sec, spec, kind);
                    fit = std::max({fit, cur.fit_remainder, cur.q_remainder});
                    gend = std::max(gend, cur.gamma_end_rel);
                    LoopModeSet ms = product_operators(sec, spec, cur);
                    VectorFamily fam = generate_u_basis(sec, spec, ms);
                    VectorFamily ref = u_basis(sec, !kind.dual_conj);
                    long d = 1L << sec.mE;
                    for (long i = 0; i < d; ++i) {
                        for (long j = 0; j < d; ++j)
                            gram = std::max(gram, std::abs(fam.u[i].dot(fam.u[j]) -
                                                           (i == j ? cd(1) : cd(0))));
                        ovl = std::max(ovl, 1.0 - std::abs(ref.u[i].dot(fam.u[i])));
                    }
                    LabeledVectors lv = direct_eigvectors(sec, 0.6);
                    for (unsigned mask = 0; mask < (1u << sec.mE); ++mask) {
                        Vec syn = synthesize(sec, fam, mask, lv.kprime_used);
                        synth = std::max(synth, 1.0 - std::abs(syn.dot(lv.v[mask])));
                    }
                }
            }
        }
    reg.add("fmcurrent", "current_commutes_on_bethe", commB, reg.tid(1e-7));
    reg.add("fmcurrent", "current_polynomiality", fit, reg.tid(1e-7));
    reg.add("fmcurrent", "gamma_endpoints", gend, reg.tgr(1e-4));
    reg.add("fmcurrent", "u_basis_gram", gram, reg.tid(1e-8));
    reg.add("fmcurrent", "u_basis_overlap", ovl, reg.tgr(1e-6));
    reg.add("fmcurrent", "synthesis_from_modes", synth, reg.tgr(1e-6));
}

int cmd_verify(const RunConfig& cfg) {
    Registry reg{cfg, {}};
    std::vector<std::string> suites = cfg.suites.empty() ? all_suites : cfg.suites;
    for (const std::string& s : suites) {
        if (s == "tau2") suite_tau2(reg);
        if (s == "cpm") suite_cpm(reg);
        if (s == "sectors") suite_sectors(reg);
        if (s == "onsager") suite_onsager(reg);
        if (s == "duality") suite_duality(reg);
        if (s == "inversion") suite_inversion(reg);
        if (s == "xxz") suite_xxz(reg);
        if (s == "fmcurrent") suite_fmcurrent(reg);
    }
    json report = json::array();
    bool ok = true;
    for (const Check& c : reg.checks) {
        json j;
        j["suite"] = c.suite;
        j["identity_name"] = c.name;
        j["max_residual"] = c.residual;
        j["tolerance"] = c.tol;
        j["pass"] = c.pass();
        report.push_back(j);
        ok = ok && c.pass();
        std::printf("%-10s %-32s %12.3e <= %8.1e  %s\n", c.suite.c_str(), c.name.c_str(),
                    c.residual, c.tol, c.pass() ? "pass" : "FAIL");
        if (!c.pass())
            std::fprintf(stderr, "failed: %s/%s residual %.3e tolerance %.1e\n", c.suite.c_str(),
                         c.name.c_str(), c.residual, c.tol);
    }
    json top;
    top["config"] = {{"N", cfg.N}, {"L", cfg.L}, {"seed", cfg.seed}, {"suites", suites}};
    top["checks"] = report;
    write_json(cfg.out, "verify.json", top);
    return ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"superintegrable chiral Potts sector and eigenvector toolkit"};
    app.require_subcommand(1);
    std::string config_path, out_dir, sector_str;
    std::uint64_t seed = 0;
    bool have_seed = false, have_out = false;
    std::vector<std::string> suites;
    std::vector<double> kprimes;
    std::vector<std::string> mrq(3);
    std::vector<bool> have_mrq(3, false);

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", config_path, "key = value configuration file");
        sub->add_option("--seed", seed, "random seed")->each([&](const std::string&) {
            have_seed = true;
        });
        sub->add_option("--out", out_dir, "output directory")->each([&](const std::string&) {
            have_out = true;
        });
    };
    CLI::App* spectrum = app.add_subcommand("spectrum", "sector tables per (m, r, Q)");
    CLI::App* eigvecs = app.add_subcommand("eigvecs", "eigenvector report for one sector");
    CLI::App* verify = app.add_subcommand("verify", "run identity verification suites");
    add_common(spectrum);
    add_common(eigvecs);
    add_common(verify);
    eigvecs->add_option("--sector", sector_str, "sector id from the spectrum table")->required();
    eigvecs->add_option("--kprime", kprimes, "k' values (repeatable)");
    verify->add_option("--suite", suites, "suite name (repeatable)");

    CLI11_PARSE(app, argc, argv);

    try {
        RunConfig cfg;
        if (!config_path.empty()) load_config(cfg, config_path);
        if (have_seed) cfg.seed = seed;
        if (have_out) cfg.out = out_dir;
        if (!suites.empty()) cfg.suites = suites;
        if (!kprimes.empty()) cfg.kprimes = kprimes;
        if (cfg.kprimes.empty()) cfg.kprimes = {0.6};
        validate_config(cfg);
        if (spectrum->parsed()) return cmd_spectrum(cfg);
        if (eigvecs->parsed()) return cmd_eigvecs(cfg, sector_str);
        if (verify->parsed()) return cmd_verify(cfg);
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }
    return 0;
}
