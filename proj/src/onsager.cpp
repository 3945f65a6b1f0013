#include "scpm/onsager.hpp"

#include <queue>

namespace scpm {

namespace {

// Largest-magnitude coordinate made real positive.
Vec phase_normalize(Vec v) {
    int idx = 0;
    double best = 0.0;
    for (int i = 0; i < v.size(); ++i)
        if (std::abs(v(i)) > best) {
            best = std::abs(v(i));
            idx = i;
        }
    if (best > 0.0) v *= std::abs(v(idx)) / v(idx);
    return v;
}

Tau2Spec spec_of(const Sector& sec) { return Tau2Spec{sec.N, sec.L, sec.m, sec.r}; }

}  // namespace

double epsilon_fn(double theta, double kprime) {
    return std::sqrt(1.0 + kprime * kprime - 2.0 * kprime * std::cos(theta));
}

Angles angle_fn(double theta, double kprime) {
    cd z = 1.0 - kprime * cd(std::cos(theta), std::sin(theta));
    double vartheta = 2.0 * pi + std::arg(z);
    double phi = vartheta;
    if (kprime < 0.0) phi -= pi;
    return {vartheta, phi};
}

Energy energy(const Sector& sec, unsigned smask, double kprime) {
    double acc = 0.0;
    for (int i = 0; i < sec.mE; ++i)
        acc += sign_of(smask, i) * epsilon_fn(sec.theta[i], kprime);
    double base = sec.alpha + kprime * sec.beta;
    double sgn = kprime >= 0.0 ? 1.0 : -1.0;
    return {base + sec.N * acc, base + sec.N * sgn * acc};
}

Mat sector_isometry(const Sector& sec) {
    return sector_basis(sec.N, sec.L, sec.r, sec.Q, BasisKind::difference).isometry;
}

Mat sector_hamiltonian(const Sector& sec, double kprime) {
    Mat Vd = sector_isometry(sec);
    Tau2Spec spec = spec_of(sec);
    return Vd.adjoint() * build_H(spec, kprime) * Vd;
}

VectorFamily u_basis(const Sector& sec, bool w_kind) {
    int mE = sec.mE;
    long d2 = 1L << mE;
    Mat Vd = sector_isometry(sec);
    Tau2Spec spec = spec_of(sec);
    Mat A = sec.frame.adjoint() * (Vd.adjoint() * (w_kind ? build_H1(spec) : build_H0(spec)) * Vd) *
            sec.frame;
    Mat B = sec.frame.adjoint() * (Vd.adjoint() * (w_kind ? build_H0(spec) : build_H1(spec)) * Vd) *
            sec.frame;

    VectorFamily fam;
    fam.w_kind = w_kind;
    if (mE == 0) {
        fam.u = {phase_normalize(sec.frame.col(0))};
        return fam;
    }

    // Simultaneous eigenbasis: A eigenvalues are (beta|alpha) + N sum s_i and
    // the compression of B onto each A-eigenspace is diagonal with entries
    // (alpha|beta) - N sum s_i cos(theta_i).
    Eigen::SelfAdjointEigenSolver<Mat> esA(A);
    std::vector<Vec> raw;
    long i0 = 0;
    while (i0 < d2) {
        long i1 = i0 + 1;
        while (i1 < d2 && esA.eigenvalues()(i1) - esA.eigenvalues()(i1 - 1) < 1e-6) ++i1;
        Mat Y = esA.eigenvectors().middleCols(i0, i1 - i0);
        Eigen::SelfAdjointEigenSolver<Mat> esB(Mat(Y.adjoint() * B * Y));
        for (long c = 0; c < i1 - i0; ++c) raw.push_back(Y * esB.eigenvectors().col(c));
        i0 = i1;
    }

    // Label each vector by matching the two diagonal expectations.
    double da = w_kind ? sec.beta : sec.alpha;
    double db = w_kind ? sec.alpha : sec.beta;
    std::vector<Vec> u(d2);
    std::vector<bool> used(d2, false);
    for (const Vec& y : raw) {
        double a = std::real(y.dot(A * y)), b = std::real(y.dot(B * y));
        long best = -1;
        double bestd = 1e300;
        for (long s = 0; s < d2; ++s) {
            double pa = da, pb = db;
            for (int i = 0; i < mE; ++i) {
                pa += sec.N * sign_of(static_cast<unsigned>(s), i);
                pb -= sec.N * sign_of(static_cast<unsigned>(s), i) * std::cos(sec.theta[i]);
            }
            double dist = std::abs(a - pa) + std::abs(b - pb);
            if (dist < bestd) {
                bestd = dist;
                best = s;
            }
        }
        if (best < 0 || used[best] || bestd > 1e-5 * sec.N * std::max(1, sec.L))
            throw std::runtime_error("u_basis: diagonal expectation labels are ambiguous");
        used[best] = true;
        u[best] = y;
    }

    // Fix relative phases along hypercube edges using the predicted
    // single-flip matrix elements, then certify every edge.
    auto target = [&](int i) {
        return (w_kind ? -1.0 : 1.0) * sec.N * std::sin(sec.theta[i]);
    };
    std::vector<cd> chi(d2, cd(0.0));
    unsigned full = static_cast<unsigned>(d2 - 1);
    u[full] = phase_normalize(u[full]);
    chi[full] = 1.0;
    std::queue<unsigned> bfs;
    bfs.push(full);
    while (!bfs.empty()) {
        unsigned s = bfs.front();
        bfs.pop();
        for (int i = 0; i < mE; ++i) {
            unsigned sp = s ^ (1u << i);
            if (chi[sp] != cd(0.0)) continue;
            cd rho = u[sp].dot(B * u[s]) / target(i);
            if (std::abs(std::abs(rho) - 1.0) > 1e-6)
                throw std::runtime_error("u_basis: flip matrix element has wrong modulus");
            chi[sp] = std::conj(rho) * chi[s];
            bfs.push(sp);
        }
    }
    for (long s = 0; s < d2; ++s) u[s] = std::conj(chi[s]) * u[s];
    for (long s = 0; s < d2; ++s)
        for (int i = 0; i < mE; ++i) {
            unsigned sp = static_cast<unsigned>(s) ^ (1u << i);
            cd m = u[sp].dot(B * u[s]);
            if (std::abs(m - target(i)) > 1e-6 * sec.N)
                throw std::runtime_error("u_basis: hypercube edge consistency failed");
        }

    fam.u.resize(d2);
    for (long s = 0; s < d2; ++s) fam.u[s] = sec.frame * u[s];
    return fam;
}

LabeledVectors direct_eigvectors(const Sector& sec, double kprime) {
    long d2 = 1L << sec.mE;
    // Perturb k' deterministically until all predicted energies separate.
    double kp = kprime;
    for (int attempt = 0;; ++attempt) {
        bool ok = true;
        for (long s = 0; s < d2 && ok; ++s)
            for (long t = s + 1; t < d2; ++t)
                if (std::abs(energy(sec, static_cast<unsigned>(s), kp).E -
                             energy(sec, static_cast<unsigned>(t), kp).E) < 10.0 * tol_grp) {
                    ok = false;
                    break;
                }
        if (ok) break;
        if (attempt >= 40) throw std::runtime_error("direct_eigvectors: energy collision persists");
        kp = kprime + 0.013 * ((attempt / 2) + 1) * (attempt % 2 == 0 ? 1 : -1);
    }

    Mat Hsec = sector_hamiltonian(sec, kp);
    Mat Hf = sec.frame.adjoint() * Hsec * sec.frame;
    Eigen::SelfAdjointEigenSolver<Mat> es(Hf);

    std::vector<std::pair<double, unsigned>> pred;
    for (long s = 0; s < d2; ++s)
        pred.emplace_back(energy(sec, static_cast<unsigned>(s), kp).E, static_cast<unsigned>(s));
    std::sort(pred.begin(), pred.end());

    LabeledVectors out;
    out.kprime_used = kp;
    out.v.resize(d2);
    double scale = mat_scale(Hsec);
    for (long i = 0; i < d2; ++i) {
        if (std::abs(es.eigenvalues()(i) - pred[i].first) > 1e-8 * scale)
            throw std::runtime_error("direct_eigvectors: spectrum does not match predictions");
        out.v[pred[i].second] = phase_normalize(sec.frame * es.eigenvectors().col(i));
    }
    return out;
}

Vec synthesize(const Sector& sec, const VectorFamily& fam, unsigned smask, double kprime) {
    long d2 = 1L << sec.mE;
    if (sec.mE == 0) return fam.u[0];
    std::vector<double> delta(sec.mE);
    for (int i = 0; i < sec.mE; ++i) {
        Angles an = angle_fn(sec.theta[i], kprime);
        delta[i] = fam.w_kind ? (an.phi - sec.theta[i]) / 2.0 : (an.vartheta - pi) / 2.0;
    }
    Vec out = Vec::Zero(fam.u[0].size());
    for (long sp = 0; sp < d2; ++sp) {
        double coeff = 1.0;
        for (int i = 0; i < sec.mE; ++i)
            coeff *= std::sin(delta[i] +
                              (sign_of(smask, i) - sign_of(static_cast<unsigned>(sp), i)) * pi / 4.0);
        out += coeff * fam.u[sp];
    }
    return out;
}

DualityVectorCheck duality_vectors(const Sector& sec, const Sector& dual, double kprime) {
    int N = sec.N, L = sec.L;
    if (dual.r != sec.Q || dual.Q != sec.r)
        throw std::invalid_argument("duality_vectors: dual sector must live in the (Q, r) space");
    Mat Vd = sector_isometry(sec), Vdd = sector_isometry(dual);
    Mat Psi = duality_psi(N, L, sec.r, sec.Q);
    Mat M = Vdd.adjoint() * Psi * Vd;

    DualityVectorCheck out{0.0, 0.0, 0.0, {}};
    Tau2Spec spec = spec_of(sec), dspec = spec_of(dual);
    for (cd t : interp_nodes(2, 0.9, 0.41)) {
        Mat lhs = (Vdd.adjoint() * build_tau2(dspec, t) * Vdd) * M;
        Mat rhs = M * (Vd.adjoint() * build_tau2(spec, t) * Vd);
        out.max_tau_residual = std::max(out.max_tau_residual, rel_norm(lhs, rhs));
    }
    Mat Hd = sector_basis(N, L, dual.r, dual.Q, BasisKind::difference)
                 .isometry.adjoint() *
             build_H(dspec, 1.0 / kprime) *
             sector_basis(N, L, dual.r, dual.Q, BasisKind::difference).isometry;
    Mat Hs = sector_hamiltonian(sec, kprime);
    out.max_H_residual = rel_norm(kprime * (M.adjoint() * Hd * M), Hs);

    VectorFamily fw = u_basis(sec, true);
    VectorFamily fv = u_basis(dual, false);
    long d2 = 1L << sec.mE;
    out.phases.resize(d2);
    for (long s = 0; s < d2; ++s) {
        Vec lhs = M * synthesize(sec, fw, static_cast<unsigned>(s), kprime);
        Vec rhs = synthesize(dual, fv, static_cast<unsigned>(s), 1.0 / kprime);
        cd ph = rhs.dot(lhs);
        out.phases[s] = ph;
        out.max_unit_defect = std::max(out.max_unit_defect, std::abs(std::abs(ph) - 1.0));
    }
    return out;
}

InversionVectorCheck inversion_vectors(const Sector& sec, const Sector& partner, double kprime,
                                       bool i_kind) {
    int N = sec.N, L = sec.L, m = sec.m;
    Mat Vd = sector_isometry(sec), Vp = sector_isometry(partner);
    Mat jop = spin_inversion(N, L, m);
    Mat Mmap;
    if (!i_kind) {
        Mmap = Vp.adjoint() * jop * Vd;
    } else {
        Mat Psi1 = duality_psi(N, L, sec.r, sec.Q);
        Mat Psi2 = duality_psi(N, L, partner.r, partner.Q);
        Mmap = Vp.adjoint() * (Psi2.adjoint() * (jop * (Psi1 * Vd)));
    }

    VectorFamily fam = u_basis(sec, !i_kind);
    VectorFamily pfam = u_basis(partner, !i_kind);
    long d2 = 1L << sec.mE;
    InversionVectorCheck out{1.0};
    for (long s = 0; s < d2; ++s) {
        Vec mapped = Mmap * synthesize(sec, fam, static_cast<unsigned>(s), kprime);
        Vec target =
            synthesize(partner, pfam, inversion_mask(static_cast<unsigned>(s), sec.mE), -kprime);
        double ov = std::abs(target.dot(mapped)) / (mapped.norm() * target.norm());
        out.min_overlap = std::min(out.min_overlap, ov);
    }
    return out;
}

}  // namespace scpm
