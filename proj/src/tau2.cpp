#include "scpm/tau2.hpp"

#include <unsupported/Eigen/KroneckerProduct>

#include "scpm/weyl.hpp"

namespace scpm {

LocalL build_L(const Tau2Spec& spec, cd t) {
    spec.validate();
    int N = spec.N;
    Mat X = weyl_X(N), Z = weyl_Z(N), I = Mat::Identity(N, N);
    cd w1m = omega_root(N, 1 + spec.m), wm = omega_root(N, spec.m);
    cd w12m = omega_root(N, 1 + 2LL * spec.m);
    LocalL L;
    L.e11 = I - t * X;
    L.e12 = (I - w1m * X) * Z;
    L.e21 = -t * (I - wm * X) * Z.inverse();
    L.e22 = -t * I + w12m * X;
    return L;
}

LocalL build_L_raw(const Tau2Spec& spec, double kprime, cd t) {
    spec.validate();
    int N = spec.N;
    cd eta = std::pow(cd(1.0 - kprime) / cd(1.0 + kprime), 1.0 / N);
    cd xp = std::sqrt(eta) * omega_root(N, spec.m), yp = std::sqrt(eta);
    // Vertical-rapidity parameters (a', b', a, b, c) = (x_p, y_p, x_p, y_p, mu_p^2 = 1).
    cd a = xp, ap = xp, b = yp, bp = yp, c = 1.0;
    Mat X = weyl_X(N), Z = weyl_Z(N), I = Mat::Identity(N, N);
    cd w = omega_root(N, 1);
    LocalL L;
    L.e11 = I - t * (c / (bp * b)) * X;
    L.e12 = ((1.0 / b) * I - w * (a * c / (bp * b)) * X) * Z;
    L.e21 = -t * ((1.0 / bp) * I - (ap * c / (bp * b)) * X) * Z.inverse();
    L.e22 = (-t / (bp * b)) * I + w * (ap * a * c / (bp * b)) * X;
    return L;
}

Monodromy build_monodromy(const Tau2Spec& spec, cd t) {
    LocalL L = build_L(spec, t);
    Mat M[2][2] = {{L.e11, L.e12}, {L.e21, L.e22}};
    for (int l = 2; l <= spec.L; ++l) {
        Mat next[2][2];
        for (int a = 0; a < 2; ++a)
            for (int b = 0; b < 2; ++b)
                next[a][b] = Eigen::kroneckerProduct(M[a][0], b == 0 ? L.e11 : L.e12).eval() +
                             Eigen::kroneckerProduct(M[a][1], b == 0 ? L.e21 : L.e22).eval();
        for (int a = 0; a < 2; ++a)
            for (int b = 0; b < 2; ++b) M[a][b] = std::move(next[a][b]);
    }
    return {M[0][0], M[0][1], M[1][0], M[1][1]};
}

Mat build_tau2(const Tau2Spec& spec, cd t) {
    Monodromy M = build_monodromy(spec, omega_root(spec.N, 1) * t);
    return M.A + omega_root(spec.N, spec.r) * M.D;
}

cd fusion_z(const Tau2Spec& spec, cd t) {
    cd base = omega_root(spec.N, 1) * std::pow(omega_root(spec.N, spec.m) - t, 2);
    cd z = 1.0;
    for (int l = 0; l < spec.L; ++l) z *= base;
    return z;
}

Mat build_fusion(const Tau2Spec& spec, int j, cd t) {
    if (j < 0 || j > spec.N + 1) throw std::invalid_argument("build_fusion: j out of range");
    long dim = ipow(spec.N, spec.L);
    Mat prev = Mat::Zero(dim, dim);           // tau^{(0)}
    Mat cur = Mat::Identity(dim, dim);        // tau^{(1)}
    if (j == 0) return prev;
    Mat wrX = omega_root(spec.N, spec.r) * spin_shift(spec.N, spec.L);
    for (int jj = 1; jj < j; ++jj) {
        cd wt = omega_root(spec.N, jj - 1);
        Mat next = build_tau2(spec, wt * t) * cur - fusion_z(spec, wt * t) * (wrX * prev);
        prev = std::move(cur);
        cur = std::move(next);
    }
    return cur;
}

namespace {

Mat onsager_sum(const Tau2Spec& spec, bool zz) {
    int N = spec.N, L = spec.L;
    long dim = ipow(N, L);
    Mat H = Mat::Zero(dim, dim);
    Mat X = weyl_X(N), Z = weyl_Z(N);
    for (int j = 1; j <= N - 1; ++j) {
        cd coef = -2.0 * omega_root(N, static_cast<long long>(spec.m) * j) /
                  (1.0 - omega_root(N, -j));
        Mat Zj = Z, Xj = X;
        for (int p = 1; p < j; ++p) {
            Zj = Zj * Z;
            Xj = Xj * X;
        }
        for (int l = 1; l <= L; ++l) {
            if (zz) {
                int lp = l % L + 1;  // site L couples to site 1 through the skew boundary
                cd bphase = (l == L) ? omega_root(N, static_cast<long long>(spec.r) * j) : cd(1.0);
                H += coef * bphase * (site_lift(Zj, l, L) * site_lift(Zj.inverse(), lp, L));
            } else {
                H += coef * site_lift(Xj, l, L);
            }
        }
    }
    return H;
}

}  // namespace

Mat build_H0(const Tau2Spec& spec) { return onsager_sum(spec, true); }
Mat build_H1(const Tau2Spec& spec) { return onsager_sum(spec, false); }

Mat build_H(const Tau2Spec& spec, double kprime) {
    return build_H0(spec) + kprime * build_H1(spec);
}

Mat xxz_K(const Tau2Spec& spec) {
    int M = (spec.N - 1) / 2;
    return omega_root(spec.N, static_cast<long long>(spec.L) * (M - spec.m)) *
           spin_shift(spec.N, spec.L).inverse();
}

}  // namespace scpm
