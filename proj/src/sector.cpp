#include "scpm/sector.hpp"

#include <algorithm>
#include <numeric>

namespace scpm {

namespace {

cd cpow_int(cd b, long e) {
    cd r = 1.0;
    for (long i = 0; i < std::labs(e); ++i) r *= b;
    return e < 0 ? cd(1.0) / r : r;
}

// F(0) = 1 polynomial with the given roots rho: prod (1 - t / rho).
CPoly poly_from_unit_roots(const std::vector<cd>& roots) {
    CPoly F = CPoly::one();
    for (cd rho : roots) F = F * CPoly({cd(1.0), -1.0 / rho});
    return F;
}

struct Cluster {
    cd mean;
    std::vector<int> members;
};

std::vector<Cluster> cluster_values(const Vec& z, double thr) {
    int d = static_cast<int>(z.size());
    std::vector<int> parent(d);
    std::iota(parent.begin(), parent.end(), 0);
    std::function<int(int)> find = [&](int i) {
        return parent[i] == i ? i : parent[i] = find(parent[i]);
    };
    for (int i = 0; i < d; ++i)
        for (int j = i + 1; j < d; ++j)
            if (std::abs(z(i) - z(j)) < thr) parent[find(i)] = find(j);
    std::vector<Cluster> out;
    std::vector<int> root_of(d, -1);
    for (int i = 0; i < d; ++i) {
        int ri = find(i);
        if (root_of[ri] < 0) {
            root_of[ri] = static_cast<int>(out.size());
            out.push_back({cd(0.0), {}});
        }
        out[root_of[ri]].members.push_back(i);
    }
    for (auto& cl : out) {
        for (int i : cl.members) cl.mean += z(i);
        cl.mean /= static_cast<double>(cl.members.size());
    }
    return out;
}

}  // namespace

std::vector<EigenGroup> eigen_decompose(const Tau2Spec& spec, int Q, std::mt19937_64& rng) {
    spec.validate();
    int N = spec.N, L = spec.L;
    long d = ipow(N, L - 1);
    Mat Vd = sector_basis(N, L, spec.r, Q, BasisKind::difference).isometry;

    std::vector<cd> nodes = interp_nodes(L + 3, 0.83);
    cd t_held = nodes.back();
    nodes.pop_back();
    int K = static_cast<int>(nodes.size());

    std::vector<Mat> tk(K);
    for (int k = 0; k < K; ++k) tk[k] = Vd.adjoint() * build_tau2(spec, nodes[k]) * Vd;
    Mat tau_held = Vd.adjoint() * build_tau2(spec, t_held) * Vd;

    std::uniform_real_distribution<double> mag(0.5, 1.5), ph(0.0, 2.0 * pi);
    for (int attempt = 0; attempt < 8; ++attempt) {
        Mat M = Mat::Zero(d, d);
        for (int k = 0; k < K; ++k) {
            double a = ph(rng);
            M += mag(rng) * cd(std::cos(a), std::sin(a)) * tk[k];
        }
        Eigen::ComplexEigenSolver<Mat> es(M);
        double thr = tol_grp * mat_scale(M);
        auto clusters = cluster_values(es.eigenvalues(), thr);

        // Ambiguity guard: re-seed if two clusters sit closer than 10x the
        // grouping threshold.
        bool ambiguous = false;
        for (size_t i = 0; i < clusters.size() && !ambiguous; ++i)
            for (size_t j = i + 1; j < clusters.size(); ++j)
                if (std::abs(clusters[i].mean - clusters[j].mean) < 10.0 * thr) {
                    ambiguous = true;
                    break;
                }
        if (ambiguous) continue;

        std::vector<EigenGroup> groups;
        bool ok = true;
        for (size_t i = 0; i < clusters.size() && ok; ++i) {
            // Spectral projector onto the cluster's invariant subspace.
            Mat P = Mat::Identity(d, d);
            for (size_t j = 0; j < clusters.size(); ++j) {
                if (j == i) continue;
                P = P * (M - clusters[j].mean * Mat::Identity(d, d)) /
                    (clusters[i].mean - clusters[j].mean);
            }
            Eigen::JacobiSVD<Mat> svd(P, Eigen::ComputeThinU);
            int mult = 0;
            while (mult < d && svd.singularValues()(mult) > 0.5) ++mult;
            if (mult != static_cast<int>(clusters[i].members.size())) {
                ok = false;
                break;
            }
            Mat frame = svd.matrixU().leftCols(mult);

            // Common eigenvalue of every sample on the frame.
            std::vector<cd> vals(K);
            for (int k = 0; k < K; ++k) {
                cd acc = 0.0;
                for (int c = 0; c < mult; ++c) {
                    cd lam = frame.col(c).dot(tk[k] * frame.col(c));
                    if (c == 0)
                        acc = lam;
                    else if (std::abs(lam - acc) > tol_grp * mat_scale(tk[k])) {
                        ok = false;
                        break;
                    }
                }
                vals[k] = acc;
            }
            if (!ok) break;

            CPoly eigpoly = poly_fit(nodes, vals, L).trimmed(1e-9);

            // Held-out node residual certifies the fitted eigenvalue curve.
            cd lam_h = eigpoly.eval(t_held);
            for (int c = 0; c < mult; ++c) {
                double res = (tau_held * frame.col(c) - lam_h * frame.col(c)).cwiseAbs().maxCoeff();
                if (res > tol_grp * mat_scale(tau_held)) {
                    ok = false;
                    break;
                }
            }
            groups.push_back({std::move(eigpoly), std::move(frame)});
        }
        if (!ok) continue;

        cd probe = cd(0.7, 0.3);
        std::sort(groups.begin(), groups.end(), [&](const EigenGroup& a, const EigenGroup& b) {
            cd va = a.eigpoly.eval(probe), vb = b.eigpoly.eval(probe);
            if (std::abs(va.real() - vb.real()) > 1e-9) return va.real() < vb.real();
            return va.imag() < vb.imag();
        });
        return groups;
    }
    throw std::runtime_error("eigen_decompose: persistent grouping ambiguity");
}

cd tau2_eigenvalue(const Tau2Spec& spec, const CPoly& F, int Pa, int Pb, cd t) {
    int N = spec.N, L = spec.L, m = spec.m;
    cd w1 = omega_root(N, 1);
    cd Fw = F.eval(w1 * t);
    return omega_root(N, -Pa) * cpow_int(1.0 - omega_root(N, -m) * t, L) * F.eval(t) / Fw +
           omega_root(N, Pb) * cpow_int(1.0 - omega_root(N, 1 - m) * t, L) *
               F.eval(w1 * w1 * t) / Fw;
}

namespace {

// Residual of the functional equation for a concrete (F, Pa, Pb) over nodes.
double tq_residual(const CPoly& eigpoly, const Tau2Spec& spec, const CPoly& F, int Pa, int Pb,
                   const std::vector<cd>& nodes) {
    int N = spec.N, L = spec.L, m = spec.m;
    double worst = 0.0;
    for (cd t : nodes) {
        cd lhs = eigpoly.eval(t) * F.eval(omega_root(N, 1) * t);
        cd t1 = omega_root(N, -Pa) * cpow_int(1.0 - omega_root(N, -m) * t, L) * F.eval(t);
        cd t2 = omega_root(N, Pb) * cpow_int(1.0 - omega_root(N, 1 - m) * t, L) *
                F.eval(omega_root(N, 1) * omega_root(N, 1) * t);
        double scale = std::max(1.0, std::abs(lhs) + std::abs(t1) + std::abs(t2));
        worst = std::max(worst, std::abs(lhs - t1 - t2) / scale);
    }
    return worst;
}

}  // namespace

BetheData fit_bethe_data(const CPoly& eigpoly, const Tau2Spec& spec, int Q) {
    int N = spec.N, L = spec.L, m = spec.m;
    int cong = imod(static_cast<long long>(Q) + spec.r + (1 + 2 * m) * L, N);

    std::vector<BetheData> accepted;
    std::string diag;
    for (int s = 0; s <= N - 1; ++s) {
        for (int Pa = 0; Pa <= s; ++Pa) {
            int Pb = s - Pa;
            if (imod(Pb - Pa - cong, N) != 0) continue;
            int Jmax = ((N - 1) * L - s) / 2;
            for (int J = 0; J <= Jmax; ++J) {
                std::vector<cd> nodes = interp_nodes(2 * L + 2 * J + 2, 1.13);
                // Homogeneous system M f = 0 in the coefficients f_0..f_J of
                // F(t) = sum_j f_j t^j, solved by the smallest singular vector.
                Eigen::MatrixXcd M(nodes.size(), J + 1);
                for (size_t n = 0; n < nodes.size(); ++n) {
                    cd t = nodes[n];
                    cd c0 = eigpoly.eval(t);
                    cd c1 = omega_root(N, -Pa) * cpow_int(1.0 - omega_root(N, -m) * t, L);
                    cd c2 = omega_root(N, Pb) * cpow_int(1.0 - omega_root(N, 1 - m) * t, L);
                    for (int j = 0; j <= J; ++j)
                        M(n, j) = (c0 * omega_root(N, j) - c1 -
                                   c2 * omega_root(N, 2LL * j)) * cpow_int(t, j);
                }
                Eigen::JacobiSVD<Mat> svd(M, Eigen::ComputeThinV);
                Vec g = svd.matrixV().col(J);
                if (svd.singularValues()(J) > tol_grp * std::max(1.0, svd.singularValues()(0)))
                    continue;
                // F(0) = 1 must be reachable; |f_0| ~ 0 signals a Bethe root
                // escaping to infinity, a spurious solution of the equation.
                if (std::abs(g(0)) < 1e-6) continue;
                CPoly F;
                F.c.resize(J + 1);
                for (int j = 0; j <= J; ++j) F.c[j] = g(j) / g(0);
                double res = tq_residual(eigpoly, spec, F, Pa, Pb, nodes);
                if (res > tol_grp) continue;
                double fmax = 0.0;
                for (cd c : F.c) fmax = std::max(fmax, std::abs(c));
                if (J > 0 && std::abs(F.c[J]) < 1e-7 * fmax) continue;
                if (J > 0) {
                    bool tiny_root = false;
                    for (cd rho : poly_roots(F))
                        if (std::abs(rho) < 1e-6) tiny_root = true;
                    if (tiny_root) continue;
                }
                BetheData bd{F, Pa, Pb, J};
                double br;
                try {
                    br = bethe_residual(bd, spec);
                } catch (const std::exception&) {
                    continue;
                }
                if (br > 1e-7) continue;
                accepted.push_back(bd);
                diag += "  candidate Pa=" + std::to_string(Pa) + " Pb=" + std::to_string(Pb) +
                        " J=" + std::to_string(J) + " res=" + std::to_string(res) +
                        " bethe=" + std::to_string(br) + "\n";
            }
        }
    }
    if (accepted.size() != 1)
        throw std::runtime_error("fit_bethe_data: " + std::to_string(accepted.size()) +
                                 " surviving candidates\n" + diag);
    return accepted.front();
}

double bethe_residual(const BetheData& bd, const Tau2Spec& spec) {
    int N = spec.N, L = spec.L, m = spec.m;
    if (bd.J == 0) return 0.0;
    std::vector<cd> roots = poly_roots(bd.F);
    std::vector<cd> v(roots.size());
    for (size_t j = 0; j < roots.size(); ++j) v[j] = -omega_root(N, -1) / roots[j];
    for (size_t i = 0; i < v.size(); ++i) {
        for (size_t j = i + 1; j < v.size(); ++j)
            if (std::abs(v[i] - v[j]) < 1e-8)
                throw std::runtime_error("bethe_residual: repeated F roots");
        if (std::abs(v[i] + omega_root(N, -1 - m)) < 1e-8 ||
            std::abs(v[i] + omega_root(N, -2 - m)) < 1e-8)
            throw std::runtime_error("bethe_residual: singular Bethe factor");
    }
    double worst = 0.0;
    for (size_t i = 0; i < v.size(); ++i) {
        cd lhs = cpow_int((v[i] + omega_root(N, -1 - m)) / (v[i] + omega_root(N, -2 - m)), L);
        cd rhs = -omega_root(N, -(bd.Pa + bd.Pb));
        for (size_t j = 0; j < v.size(); ++j)
            rhs *= (v[i] - omega_root(N, -1) * v[j]) / (v[i] - omega_root(N, 1) * v[j]);
        worst = std::max(worst, std::abs(lhs - rhs) / (std::abs(lhs) + std::abs(rhs)));
    }
    return worst;
}

PData compute_P(const BetheData& bd, const Tau2Spec& spec, int Q, const Mat& frame) {
    int N = spec.N, L = spec.L, m = spec.m;
    int maxdeg = (N - 1) * L - bd.Pa - bd.Pb - 2 * bd.J;

    auto psum = [&](cd t) {
        cd tN = cpow_int(t, N);
        cd acc = 0.0;
        for (int k = 0; k < N; ++k) {
            cd wk = omega_root(N, k);
            acc += cpow_int(1.0 - tN, L) * cpow_int(wk * t, -(bd.Pa + bd.Pb)) /
                   (cpow_int(1.0 - omega_root(N, k - m) * t, L) * bd.F.eval(wk * t) *
                    bd.F.eval(omega_root(N, k + 1) * t));
        }
        return omega_root(N, -bd.Pb) * acc;
    };

    std::vector<cd> nodes = interp_nodes(maxdeg + 3, 1.07);
    std::vector<cd> vals(nodes.size());
    for (size_t n = 0; n < nodes.size(); ++n) vals[n] = psum(nodes[n]);
    CPoly P = poly_fit(nodes, vals, maxdeg);

    double cscale = 0.0;
    for (cd c : P.c) cscale = std::max(cscale, std::abs(c));
    for (size_t i = 0; i < P.c.size(); ++i)
        if (i % N != 0 && std::abs(P.c[i]) > 1e-8 * cscale)
            throw std::runtime_error("compute_P: non-t^N coefficient above tolerance");
    if (std::abs(P.c[0]) < 1e-8 * cscale) throw std::runtime_error("compute_P: P(0) vanishes");

    PData out;
    out.mE = 0;
    for (int i = static_cast<int>(P.c.size()) - 1; i >= 0; --i)
        if (i % N == 0 && std::abs(P.c[i]) > 1e-8 * cscale) {
            out.mE = i / N;
            break;
        }
    out.dE = maxdeg - N * out.mE;
    if (out.dE < 0 || out.dE >= N)
        throw std::runtime_error("compute_P: dE out of range");
    out.P = P.trimmed(1e-8 * cscale);

    out.Pev.c.resize(out.mE + 1);
    for (int i = 0; i <= out.mE; ++i) out.Pev.c[i] = P.c[static_cast<size_t>(N) * i] / P.c[0];

    if (out.mE > 0) {
        std::vector<cd> roots = poly_roots(out.Pev);
        std::vector<std::pair<double, cd>> ang;
        for (cd tiN : roots) {
            if (tiN.real() >= 0.0 || std::abs(tiN.imag()) > tol_grp * (1.0 + std::abs(tiN)))
                throw std::runtime_error("compute_P: evaluation root not negative real");
            double th = std::acos((tiN.real() + 1.0) / (tiN.real() - 1.0));
            ang.emplace_back(th, cd(tiN.real(), 0.0));
        }
        std::sort(ang.begin(), ang.end(),
                  [](const auto& a, const auto& b) { return a.first < b.first; });
        for (auto& [th, tiN] : ang) {
            out.theta.push_back(th);
            out.tiN.push_back(tiN);
            out.a.push_back(1.0 / tiN);
        }
    }

    if (frame.size() > 0) {
        Mat Vd = sector_basis(N, L, spec.r, Q, BasisKind::difference).isometry;
        Vec v = frame.col(0);
        for (cd t : interp_nodes(3, 0.79, 0.911)) {
            Mat tauN = Vd.adjoint() * build_fusion(spec, N, t) * Vd;
            cd lam = v.dot(tauN * v);
            cd Pfus = cpow_int(t, -(bd.Pa + bd.Pb)) * lam / (bd.F.eval(t) * bd.F.eval(t));
            cd Pdir = out.P.eval(t);
            if (std::abs(Pfus - Pdir) > 1e-7 * (std::abs(Pfus) + std::abs(Pdir) + 1.0))
                throw std::runtime_error("compute_P: fusion route disagrees with sum formula");
        }
    }
    return out;
}

void classify(Sector& s) {
    int N = s.N, L = s.L, m = s.m;
    int lo = s.Pb - m * L + s.J;
    int found = -1, count = 0;
    for (int p = lo; p <= lo + s.dE; ++p)
        if (imod(p - s.r, N) == 0) {
            found = p;
            ++count;
        }
    if (count != 1) throw std::runtime_error("classify: Pmu not unique in its window");
    s.Pmu = found;
    s.alpha = 2 * s.Pmu + N * s.mE - (N - 1 - 2 * m) * L;
    s.beta = 2 * (s.Pb - s.Pa) - s.alpha;

    s.type_I_plus = (s.Pa == 0) && imod(s.Pb - (m * L + s.r - s.J), N) == 0;
    s.type_I_minus = (s.Pb == 0) && imod(m * L + s.Q - s.J, N) == 0;
    s.type_i_plus = (s.Pa == 0) && imod(s.Pb - (m * L + s.Q - s.J), N) == 0;
    s.type_i_minus = (s.Pb == 0) && imod(m * L + s.r - s.J, N) == 0;
    if (!(s.type_I_plus || s.type_I_minus || s.type_i_plus || s.type_i_minus))
        throw std::runtime_error("classify: sector carries no type flag");
}

PartnerTriple inversion_partner(const Sector& s, bool i_kind) {
    int N = s.N, L = s.L, m = s.m;
    Tau2Spec spec{N, L, m, s.r};
    CPoly Fp = CPoly::one();
    if (s.J > 0) {
        std::vector<cd> roots = poly_roots(s.F), proots;
        for (cd rho : roots) proots.push_back(omega_root(N, 1 + 2 * m) / rho);
        Fp = poly_from_unit_roots(proots);
    }

    // The functional relation is invariant under (P'a, P'b) -> (P'a+1, P'b-1),
    // so the difference is fixed by the partner space's charge congruence.
    int diff = i_kind ? imod(s.Q - s.r, N) : imod(s.r - s.Q, N);
    int found = -1, count = 0;
    for (int Ppa = 0; Ppa <= s.dE; ++Ppa)
        if (imod((s.dE - Ppa) - Ppa - diff, N) == 0) {
            found = Ppa;
            ++count;
        }
    if (count != 1)
        throw std::runtime_error("inversion_partner: charge congruence not unique");
    int Ppa = found, Ppb = s.dE - found;

    cd phase = omega_root(N, Ppb + s.Pa + L + s.J);
    for (cd t : interp_nodes(5, 1.21, 0.547)) {
        cd lhs = tau2_eigenvalue(spec, Fp, Ppa, Ppb, omega_root(N, m) * t);
        cd rhs = phase * cpow_int(-t, L) *
                 tau2_eigenvalue(spec, s.F, s.Pa, s.Pb, omega_root(N, m - 1) / t);
        if (std::abs(lhs - rhs) > 1e-7 * (std::abs(lhs) + std::abs(rhs) + 1.0))
            throw std::runtime_error("inversion_partner: functional relation fails");
    }
    return {Fp, Ppa, Ppb};
}

std::vector<Sector> enumerate_sectors(const Tau2Spec& spec, int Q, std::mt19937_64& rng) {
    auto groups = eigen_decompose(spec, Q, rng);
    std::vector<Sector> sectors;
    long total = 0;
    for (auto& g : groups) {
        BetheData bd = fit_bethe_data(g.eigpoly, spec, Q);
        PData pd = compute_P(bd, spec, Q, g.frame);
        if (g.frame.cols() != (1L << pd.mE))
            throw std::runtime_error("enumerate_sectors: eigenspace dimension is not 2^mE");
        Sector s;
        s.N = spec.N;
        s.L = spec.L;
        s.m = spec.m;
        s.r = spec.r;
        s.Q = Q;
        s.eigpoly = g.eigpoly;
        s.F = bd.F;
        s.Pa = bd.Pa;
        s.Pb = bd.Pb;
        s.J = bd.J;
        s.mE = pd.mE;
        s.dE = pd.dE;
        s.tiN = pd.tiN;
        s.a = pd.a;
        s.theta = pd.theta;
        s.frame = g.frame;
        s.Ppoly = pd.P;
        s.Pev = pd.Pev;
        classify(s);
        total += 1L << s.mE;
        sectors.push_back(std::move(s));
    }
    if (total != ipow(spec.N, spec.L - 1))
        throw std::runtime_error("enumerate_sectors: completeness certificate failed");

    cd probe = cd(0.7, 0.3);
    std::sort(sectors.begin(), sectors.end(), [&](const Sector& a, const Sector& b) {
        if (a.Pa + a.Pb != b.Pa + b.Pb) return a.Pa + a.Pb < b.Pa + b.Pb;
        if (a.Pa != b.Pa) return a.Pa < b.Pa;
        if (a.J != b.J) return a.J < b.J;
        cd va = a.eigpoly.eval(probe), vb = b.eigpoly.eval(probe);
        if (std::abs(va.real() - vb.real()) > 1e-9) return va.real() < vb.real();
        return va.imag() < vb.imag();
    });
    return sectors;
}

}  // namespace scpm
