#include "scpm/xxz.hpp"

#include <unsupported/Eigen/KroneckerProduct>

#include "scpm/weyl.hpp"

namespace scpm {

namespace {

// In-group square root of q: (q^{M+1})^2 = q^{N+1} = q for q an N-th root of unity.
cd q_half(int N) {
    int M = (N - 1) / 2;
    return omega_root(N, static_cast<long long>(M) * (M + 1));
}

cd cpow_int(cd b, int e) {
    if (e < 0) return 1.0 / cpow_int(b, -e);
    cd r = 1.0;
    for (int i = 0; i < e; ++i) r *= b;
    return r;
}

Mat mat_ipow(const Mat& A, int e) {
    Mat r = Mat::Identity(A.rows(), A.cols());
    for (int i = 0; i < e; ++i) r = r * A;
    return r;
}

JetMat jkron(const JetMat& A, const JetMat& B) {
    return {Eigen::kroneckerProduct(A.v, B.v).eval(),
            (Eigen::kroneckerProduct(A.ds, B.v) + Eigen::kroneckerProduct(A.v, B.ds)).eval(),
            (Eigen::kroneckerProduct(A.dq, B.v) + Eigen::kroneckerProduct(A.v, B.dq)).eval()};
}

}  // namespace

cd q_integer(int N, int n) {
    cd q = omega_root(N, (N - 1) / 2);
    return (cpow_int(q, n) - cpow_int(q, -n)) / (q - 1.0 / q);
}

XXZRep xxz_rep(int N, int m) {
    if (N % 2 == 0) throw std::invalid_argument("xxz_rep: N must be odd");
    int M = (N - 1) / 2;
    XXZRep rep;
    rep.N = N;
    rep.m = m;
    rep.q = omega_root(N, M);
    Mat F = fourier(N);
    rep.evec = Mat::Zero(N, N);
    for (int k = 0; k < N; ++k) rep.evec.col(k) = F.col(imod(k - m, N));
    cd qh = q_half(N);
    Mat kd = Mat::Zero(N, N), sz = Mat::Zero(N, N), ep = Mat::Zero(N, N), em = Mat::Zero(N, N);
    for (int k = 0; k < N; ++k) {
        kd(k, k) = cpow_int(rep.q, k - M);
        sz(k, k) = cd(k - M, 0.0);
        if (k + 1 < N) ep(k + 1, k) = q_integer(N, N - 1 - k) / qh;
        if (k - 1 >= 0) em(k - 1, k) = q_integer(N, k) * qh;
    }
    Mat Ei = rep.evec.adjoint();
    rep.Khalf = rep.evec * kd * Ei;
    rep.Sz = rep.evec * sz * Ei;
    rep.eplus = rep.evec * ep * Ei;
    rep.eminus = rep.evec * em * Ei;
    return rep;
}

JetMonodromy build_xxz_monodromy(const Tau2Spec& spec, const Jet& s) {
    spec.validate();
    XXZRep rep = xxz_rep(spec.N, spec.m);
    int N = spec.N, Mh = (N - 1) / 2;
    Jet q(rep.q, 0.0, rep.q);
    Jet sinv = Jet(1.0) / s;
    // q-derivatives of the representation matrices, with the square root of q
    // varying along the in-group branch q^{M+1}
    cd qv = rep.q, qh = q_half(N);
    auto qint_dq = [&](int n) {
        return (static_cast<double>(n) * (cpow_int(qv, n) + cpow_int(qv, -n)) -
                q_integer(N, n) * (qv + 1.0 / qv)) /
               (qv - 1.0 / qv);
    };
    Mat kd_dq = Mat::Zero(N, N), ki_dq = Mat::Zero(N, N), ep_dq = Mat::Zero(N, N),
        em_dq = Mat::Zero(N, N);
    for (int k = 0; k < N; ++k) {
        kd_dq(k, k) = static_cast<double>(k - Mh) * cpow_int(qv, k - Mh);
        ki_dq(k, k) = -static_cast<double>(k - Mh) * cpow_int(qv, Mh - k);
        if (k + 1 < N)
            ep_dq(k + 1, k) = (qint_dq(N - 1 - k) - (Mh + 1.0) * q_integer(N, N - 1 - k)) / qh;
        if (k - 1 >= 0) em_dq(k - 1, k) = (qint_dq(k) + (Mh + 1.0) * q_integer(N, k)) * qh;
    }
    Mat Ei = rep.evec.adjoint();
    Mat Z = Mat::Zero(N, N);
    Mat Khinv = rep.Khalf.inverse();
    JetMat JKh{rep.Khalf, Z, rep.evec * kd_dq * Ei};
    JetMat JKi{Khinv, Z, rep.evec * ki_dq * Ei};
    JetMat Jep{rep.eplus, Z, rep.evec * ep_dq * Ei};
    JetMat Jem{rep.eminus, Z, rep.evec * em_dq * Ei};
    JetMat e11 = (jpow(q, 1 + 2 * spec.m) * s) * JKi - sinv * JKh;
    JetMat e12 = (q - jpow(q, -1)) * Jem;
    JetMat e21 = (q - jpow(q, -1)) * Jep;
    JetMat e22 = s * JKh - (jpow(q, -1 - 2 * spec.m) * sinv) * JKi;
    JetMat M[2][2] = {{e11, e12}, {e21, e22}};
    for (int l = 2; l <= spec.L; ++l) {
        JetMat next[2][2];
        for (int a = 0; a < 2; ++a)
            for (int b = 0; b < 2; ++b)
                next[a][b] = jkron(M[a][0], b == 0 ? e11 : e12) + jkron(M[a][1], b == 0 ? e21 : e22);
        for (int a = 0; a < 2; ++a)
            for (int b = 0; b < 2; ++b) M[a][b] = std::move(next[a][b]);
    }
    return {M[0][0], M[0][1], M[1][0], M[1][1]};
}

Monodromy xxz_monodromy(const Tau2Spec& spec, cd s) {
    JetMonodromy M = build_xxz_monodromy(spec, Jet(s));
    return {M.A.v, M.B.v, M.C.v, M.D.v};
}

Mat xxz_transfer(const Tau2Spec& spec, cd s) {
    Monodromy M = xxz_monodromy(spec, s);
    cd q = omega_root(spec.N, (spec.N - 1) / 2);
    return M.A + cpow_int(q, -2 * spec.r) * M.D;
}

Vacua pseudo_vacua(const Tau2Spec& spec) {
    spec.validate();
    XXZRep rep = xxz_rep(spec.N, spec.m);
    Vec p = rep.evec.col(spec.N - 1), m = rep.evec.col(0);
    Vec vp = p, vm = m;
    for (int l = 2; l <= spec.L; ++l) {
        vp = Eigen::kroneckerProduct(vp, p).eval();
        vm = Eigen::kroneckerProduct(vm, m).eval();
    }
    return {vp, vm};
}

FMKind fm_kind(const Sector& sec) {
    if (sec.type_I_plus) return {true, false};
    if (sec.type_I_minus) return {false, false};
    if (sec.type_i_plus) return {true, true};
    if (sec.type_i_minus) return {false, true};
    throw std::logic_error("fm_kind: sector has no type");
}

Vec bethe_state(const Sector& sec, const Tau2Spec& spec) {
    return bethe_state(sec, spec, fm_kind(sec));
}

Vec bethe_state(const Sector& sec, const Tau2Spec& spec, const FMKind& kind) {
    Vacua vac = pseudo_vacua(spec);
    Vec psi = kind.plus_type ? vac.plus : vac.minus;
    for (cd rho : poly_roots(sec.F)) {
        Monodromy M = build_monodromy(spec, rho);
        psi = (kind.plus_type ? M.B : M.C) * psi;
    }
    if (kind.dual_conj) psi = duality_psi(spec.N, spec.L, spec.r, sec.Q).adjoint() * psi;
    if (psi.norm() < 1e-10) throw std::runtime_error("bethe_state: zero norm");
    return psi;
}

Mat nilpotent_power(const Tau2Spec& spec, bool bop, bool plus, int n) {
    spec.validate();
    int N = spec.N, L = spec.L;
    if (n < 0 || n > (N - 1) * L) throw std::invalid_argument("nilpotent_power: n out of range");
    XXZRep rep = xxz_rep(N, spec.m);
    cd rho = cpow_int(rep.q, -2 * spec.m - 1);
    Mat Khinv = rep.Khalf.inverse();
    const Mat& eop = bop ? rep.eminus : rep.eplus;
    // cached local factors K^{p/2} e^{k} and inverse factorials
    std::vector<cd> invfact(N, 1.0);
    for (int k = 1; k < N; ++k) invfact[k] = invfact[k - 1] / q_integer(N, k);
    long dim = ipow(N, L);
    if (n == 0) return Mat::Identity(dim, dim);
    Mat total = Mat::Zero(dim, dim);
    std::vector<int> k(L, 0);
    auto add_term = [&]() {
        cd scal = 1.0;
        Mat term;
        for (int i = 0; i < L; ++i) {
            int before = 0, after = 0;
            for (int j = 0; j < i; ++j) before += k[j];
            for (int j = i + 1; j < L; ++j) after += k[j];
            int kp;      // exponent of K^{1/2}
            int rhoexp;  // exponent of rho at this site
            if (bop) {
                kp = plus ? before - after : after - before;
                rhoexp = plus ? -after : before;
            } else {
                kp = plus ? after - before : before - after;
                rhoexp = plus ? -before : after;
            }
            scal *= cpow_int(rho, rhoexp) * invfact[k[i]];
            Mat loc = (kp >= 0 ? mat_ipow(rep.Khalf, kp) : mat_ipow(Khinv, -kp)) * mat_ipow(eop, k[i]);
            term = (i == 0) ? loc : Eigen::kroneckerProduct(term, loc).eval();
        }
        total += scal * term;
    };
    // compositions k_1..k_L with sum n and 0 <= k_i < N
    auto recurse = [&](auto&& self, int site, int rem) -> void {
        if (site == L - 1) {
            if (rem < N) {
                k[site] = rem;
                add_term();
            }
            return;
        }
        for (int v = 0; v <= std::min(rem, N - 1); ++v) {
            k[site] = v;
            self(self, site + 1, rem - v);
        }
    };
    recurse(recurse, 0, n);
    return total;
}

JetMat string_average(const Tau2Spec& spec, bool bop, cd s) {
    cd q = omega_root(spec.N, (spec.N - 1) / 2);
    JetMat prod;
    for (int n = 0; n < spec.N; ++n) {
        cd u = cpow_int(q, n) * s;
        JetMonodromy M = build_xxz_monodromy(spec, Jet(u, u, 0.0));
        const JetMat& E = bop ? M.B : M.C;
        prod = (n == 0) ? E : prod * E;
    }
    return prod;
}

cd phi_fn(const Sector& sec, cd t) {
    int N = sec.N, L = sec.L;
    cd w = omega_root(N, 1);
    auto p = [&](cd x) {
        cd xN = cpow_int(x, N);
        cd num = cpow_int(1.0 - xN, L) * cpow_int(x, -(sec.Pa + sec.Pb));
        cd den = cpow_int(1.0 - omega_root(N, -sec.m) * x, L) * sec.F.eval(x) * sec.F.eval(w * x);
        return num / den;
    };
    cd num = 0.0;
    for (int k = 1; k <= N; ++k) num += static_cast<double>(k) * p(omega_root(N, k - 1) * t);
    return num / (omega_root(N, sec.Pb) * sec.Ppoly.eval(t));
}

namespace {

struct StringParts {
    std::vector<Mat> val;  // B(q^i s) values
    std::vector<Mat> ds;   // s-derivative parts
    Mat avg_dq;            // q-derivative of the full product
};

StringParts string_parts(const Tau2Spec& spec, bool bop, cd s) {
    cd q = omega_root(spec.N, (spec.N - 1) / 2);
    StringParts sp;
    JetMat prod;
    for (int n = 0; n < spec.N; ++n) {
        cd u = cpow_int(q, n) * s;
        JetMonodromy M = build_xxz_monodromy(spec, Jet(u, u, 0.0));
        const JetMat& E = bop ? M.B : M.C;
        sp.val.push_back(E.v);
        sp.ds.push_back(E.ds);
        prod = (n == 0) ? E : prod * E;
    }
    sp.avg_dq = prod.dq;
    return sp;
}

Mat phi_part(const Sector& sec, const Tau2Spec& spec, const StringParts& sp, cd s) {
    int N = spec.N;
    long dim = ipow(N, spec.L);
    cd t = s * s;
    // prefix/suffix products of the string values
    std::vector<Mat> pre(N + 1), suf(N + 1);
    pre[0] = Mat::Identity(dim, dim);
    suf[N] = Mat::Identity(dim, dim);
    for (int i = 0; i < N; ++i) pre[i + 1] = pre[i] * sp.val[i];
    for (int i = N - 1; i >= 0; --i) suf[i] = sp.val[i] * suf[i + 1];
    Mat out = Mat::Zero(dim, dim);
    for (int n = 0; n < N; ++n) {
        cd tn = omega_root(N, -n) * t;  // (q^n s)^2
        out += phi_fn(sec, tn) * (pre[n] * sp.ds[n] * suf[n + 1]);
    }
    return out;
}

}  // namespace

Mat fm_current(const Sector& sec, const Tau2Spec& spec, cd s) {
    return fm_current(sec, spec, s, fm_kind(sec));
}

Mat fm_current(const Sector& sec, const Tau2Spec& spec, cd s, const FMKind& kind) {
    StringParts sp = string_parts(spec, kind.plus_type, s);
    Mat cur = sp.avg_dq + phi_part(sec, spec, sp, s);
    if (kind.dual_conj) {
        Mat Psi = duality_psi(spec.N, spec.L, spec.r, sec.Q);
        cur = Psi.adjoint() * cur * Psi;
    }
    return cur;
}

Mat fm_current_phi(const Sector& sec, const Tau2Spec& spec, cd s, const FMKind& kind) {
    StringParts sp = string_parts(spec, kind.plus_type, s);
    Mat cur = phi_part(sec, spec, sp, s);
    if (kind.dual_conj) {
        Mat Psi = duality_psi(spec.N, spec.L, spec.r, sec.Q);
        cur = Psi.adjoint() * cur * Psi;
    }
    return cur;
}

CurrentData regularize_current(const Sector& sec, const Tau2Spec& spec) {
    return regularize_current(sec, spec, fm_kind(sec));
}

CurrentData regularize_current(const Sector& sec, const Tau2Spec& spec, const FMKind& kind) {
    int N = spec.N, L = spec.L, mE = sec.mE;
    long d = 1L << mE;
    Mat Vd = sector_basis(N, L, spec.r, sec.Q, BasisKind::difference).isometry;
    Mat lift = Vd * sec.frame;

    CurrentData cur;
    cur.kind = kind;
    cur.psi = bethe_state(sec, spec, kind);
    cur.psi_f = lift.adjoint() * cur.psi;
    if ((lift * cur.psi_f - cur.psi).norm() > tol_grp * cur.psi.norm())
        throw std::runtime_error("regularize_current: Bethe state leaves the sector frame");

    // xi nodes on a circle kept away from P_ev zeros
    int nn = mE + L + 2;
    double best_r = 1.0, best_min = -1.0;
    for (double rad : {1.0, 1.4, 0.75, 1.9, 0.55, 2.6}) {
        double mn = 1e300;
        for (int j = 0; j < nn; ++j) {
            cd xi = rad * std::exp(cd(0.0, 2.0 * pi * j / nn + 0.21));
            mn = std::min(mn, std::abs(sec.Pev.eval(xi)));
        }
        if (mn > best_min) {
            best_min = mn;
            best_r = rad;
        }
    }
    std::vector<cd> xis(nn);
    std::vector<Mat> Mfull(nn), Mphi(nn);
    for (int j = 0; j < nn; ++j) {
        cd xi = best_r * std::exp(cd(0.0, 2.0 * pi * j / nn + 0.21));
        xis[j] = xi;
        cd t = std::pow(xi, 1.0 / N);
        cd s = std::sqrt(t);
        cd pref = sec.Pev.eval(xi) * cpow_int(-s, N * (L - 1));
        StringParts sp = string_parts(spec, kind.plus_type, s);
        Mat full = sp.avg_dq + phi_part(sec, spec, sp, s);
        Mat phi = phi_part(sec, spec, sp, s);
        if (kind.dual_conj) {
            Mat Psi = duality_psi(N, L, spec.r, sec.Q);
            full = Psi.adjoint() * full * Psi;
            phi = Psi.adjoint() * phi * Psi;
        }
        Mfull[j] = pref * (lift.adjoint() * full * lift);
        Mphi[j] = pref * (lift.adjoint() * phi * lift);
    }

    // entrywise least-squares polynomial fit of degree L + mE - 1 in xi
    int deg = L + mE - 1;
    Eigen::MatrixXcd V(nn, deg + 1);
    for (int j = 0; j < nn; ++j) {
        cd p = 1.0;
        for (int k = 0; k <= deg; ++k) {
            V(j, k) = p;
            p *= xis[j];
        }
    }
    auto fit = [&](const std::vector<Mat>& data, std::vector<Mat>& coef) {
        Eigen::MatrixXcd D(nn, d * d);
        for (int j = 0; j < nn; ++j)
            D.row(j) = Eigen::Map<const Eigen::VectorXcd>(data[j].data(), d * d).transpose();
        Eigen::MatrixXcd C = V.colPivHouseholderQr().solve(D);
        double scale = std::max(1.0, D.cwiseAbs().maxCoeff());
        double rem = (V * C - D).cwiseAbs().maxCoeff() / scale;
        coef.resize(deg + 1);
        for (int k = 0; k <= deg; ++k) {
            coef[k] = Mat::Zero(d, d);
            Eigen::Map<Eigen::VectorXcd>(coef[k].data(), d * d) = C.row(k).transpose();
        }
        return rem;
    };
    std::vector<Mat> Cfull;
    double rem_full = fit(Mfull, Cfull);
    std::vector<Mat> Cphi;
    double rem_phi = fit(Mphi, Cphi);
    cur.fit_remainder = std::max(rem_full, rem_phi);
    cur.Rk.resize(deg + 1);
    for (int k = 0; k <= deg; ++k) cur.Rk[k] = (k % 2 ? -1.0 : 1.0) * Cphi[k];

    // first loop modes from the lowest/leading power operators
    Mat Bm = nilpotent_power(spec, kind.plus_type, false, N);
    Mat Bp = nilpotent_power(spec, kind.plus_type, true, N);
    if (kind.dual_conj) {
        Mat Psi = duality_psi(N, L, spec.r, sec.Q);
        Bm = Psi.adjoint() * Bm * Psi;
        Bp = Psi.adjoint() * Bp * Psi;
    }
    double n2 = 2.0 * N * N;
    cd aprod = 1.0;
    for (cd a : sec.a) aprod *= a;
    cur.e_first = lift.adjoint() * Bm * lift + cur.Rk[0] / n2;
    cur.e_last = lift.adjoint() * Bp * lift + cur.Rk[deg] / (n2 * aprod);

    if (mE == 0) {
        cur.gamma = CPoly::one();
        cur.gamma_end_rel = 0.0;
        cur.q_remainder = 0.0;
        return cur;
    }

    // raw first modes from the two-ended window e(n0) = e_first, e(n0 - 1) =
    // e_last with e(n) = sum_i a_i^n e_i and n0 = 0 (B current) or 1 (C current)
    if (mE > 2)
        throw std::runtime_error("regularize_current: mode window limited to mE <= 2");
    int n0 = kind.plus_type ? 0 : 1;
    std::vector<Mat> emode(mE);
    {
        Eigen::MatrixXcd Vw(mE, mE), Ew(mE, d * d);
        for (int k = 0; k < mE; ++k) {
            const Mat& src = (k == 0) ? cur.e_first : cur.e_last;
            Ew.row(k) = Eigen::Map<const Eigen::VectorXcd>(src.data(), d * d).transpose();
            for (int i = 0; i < mE; ++i) Vw(k, i) = std::pow(sec.a[i], n0 - k);
        }
        Eigen::MatrixXcd Sw = Vw.fullPivLu().solve(Ew);
        for (int i = 0; i < mE; ++i) {
            emode[i] = Mat::Zero(d, d);
            Eigen::Map<Eigen::VectorXcd>(emode[i].data(), d * d) = Sw.row(i).transpose();
        }
    }
    // gamma by projecting each current sample onto the predicted mode
    // combination: P_ev(xi) E(xi) psi = sum_i w_i(xi) e_i psi with weight
    // w_i = prod_{j != i}(1 - a_j xi) for the B current and an extra a_i for C
    std::vector<Vec> eip(mE);
    for (int i = 0; i < mE; ++i) eip[i] = emode[i] * cur.psi_f;
    std::vector<cd> gvals(nn);
    for (int j = 0; j < nn; ++j) {
        Vec v = Vec::Zero(d);
        for (int i = 0; i < mE; ++i) {
            cd w = kind.plus_type ? 1.0 : sec.a[i];
            for (int k2 = 0; k2 < mE; ++k2)
                if (k2 != i) w *= 1.0 - sec.a[k2] * xis[j];
            v += w * eip[i];
        }
        gvals[j] = v.dot(Mfull[j] * cur.psi_f) / v.squaredNorm();
    }
    cur.gamma = poly_fit(xis, gvals, L);
    cd g0 = cur.gamma.c[0];
    cd gL = (L % 2 ? -1.0 : 1.0) * cur.gamma.c[L];
    cur.gamma_end_rel = std::max(std::abs(g0 - n2), std::abs(gL - n2)) / n2;

    // deconvolved operator polynomial, degree mE - 1
    std::vector<Mat> Mq(nn);
    for (int j = 0; j < nn; ++j) Mq[j] = Mfull[j] / cur.gamma.eval(xis[j]);
    Eigen::MatrixXcd Vq(nn, mE), Dq(nn, d * d);
    for (int j = 0; j < nn; ++j) {
        cd p = 1.0;
        for (int k = 0; k < mE; ++k) {
            Vq(j, k) = p;
            p *= xis[j];
        }
        Dq.row(j) = Eigen::Map<const Eigen::VectorXcd>(Mq[j].data(), d * d).transpose();
    }
    Eigen::MatrixXcd Cq = Vq.colPivHouseholderQr().solve(Dq);
    cur.q_remainder = (Vq * Cq - Dq).cwiseAbs().maxCoeff() / std::max(1.0, Dq.cwiseAbs().maxCoeff());
    cur.Qk.resize(mE);
    for (int k = 0; k < mE; ++k) {
        cur.Qk[k] = Mat::Zero(d, d);
        Eigen::Map<Eigen::VectorXcd>(cur.Qk[k].data(), d * d) = Cq.row(k).transpose();
    }
    return cur;
}

LoopModeSet product_operators(const Sector& sec, const Tau2Spec& spec) {
    return product_operators(sec, spec, regularize_current(sec, spec));
}

LoopModeSet product_operators(const Sector& sec, const Tau2Spec& spec, const CurrentData& cur) {
    (void)spec;
    int mE = sec.mE;
    for (int i = 0; i < mE; ++i)
        for (int j = i + 1; j < mE; ++j)
            if (std::abs(sec.a[i] - sec.a[j]) < 1e-8 * std::abs(sec.a[i]))
                throw std::runtime_error("product_operators: coincident evaluation points");
    LoopModeSet ms;
    ms.cur = cur;
    double pnorm = cur.psi_f.norm();
    for (int i = 0; i < mE; ++i) {
        cd ainv = 1.0 / sec.a[i];
        Mat Q = Mat::Zero(cur.Qk[0].rows(), cur.Qk[0].cols());
        cd p = 1.0;
        for (const Mat& ck : cur.Qk) {
            Q += p * ck;
            p *= ainv;
        }
        cd denom = cur.kind.plus_type ? 1.0 : sec.a[i];
        for (int j = 0; j < mE; ++j)
            if (j != i) denom *= 1.0 - sec.a[j] / sec.a[i];
        Mat ei = Q / denom;
        double nm = (ei * cur.psi_f).norm();
        if (nm < 1e-12 * pnorm) throw std::runtime_error("product_operators: mode annihilates the Bethe state");
        ms.e.push_back(ei * (pnorm / nm));
    }
    return ms;
}

VectorFamily generate_u_basis(const Sector& sec, const Tau2Spec& spec, const LoopModeSet& modes) {
    (void)spec;
    int mE = sec.mE;
    VectorFamily fam;
    fam.w_kind = !modes.cur.kind.dual_conj;
    fam.u.resize(1L << mE);
    // the raw modes give single-flip matrix elements +N sin(theta_i); the w-kind
    // phase convention uses -N sin(theta_i), so negate each flip for that family
    double sgn = fam.w_kind ? -1.0 : 1.0;
    for (unsigned mask = 0; mask < (1u << mE); ++mask) {
        Vec y = modes.cur.psi_f;
        for (int i = 0; i < mE; ++i) {
            bool flip = modes.cur.kind.plus_type ? !((mask >> i) & 1) : ((mask >> i) & 1);
            if (flip) y = sgn * (modes.e[i] * y);
        }
        double nm = y.norm();
        if (nm < 1e-12) throw std::runtime_error("generate_u_basis: norm collapse");
        fam.u[mask] = sec.frame * (y / nm);
    }
    return fam;
}

}  // namespace scpm
