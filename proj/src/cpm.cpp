#include "scpm/cpm.hpp"

namespace scpm {

namespace {
cd cpow_int(cd b, long e) {
    cd r = 1.0;
    for (long i = 0; i < std::labs(e); ++i) r *= b;
    return e < 0 ? cd(1.0) / r : r;
}

std::vector<int> digits(long idx, int N, int L) {
    std::vector<int> d(L);
    for (int l = L - 1; l >= 0; --l) {
        d[l] = static_cast<int>(idx % N);
        idx /= N;
    }
    return d;
}
}  // namespace

Weights boltzmann_weights(int N, const Rapidity& p, const Rapidity& q) {
    Weights w;
    w.W.assign(N, cd(1.0));
    w.Wbar.assign(N, cd(1.0));
    // Coincident rapidities are a removable limit of the product formula:
    // W_pp(sigma) = 1 and Wbar_pp(sigma) = delta_{sigma,0}.
    if (std::abs(p.x - q.x) < 1e-12 && std::abs(p.y - q.y) < 1e-12 &&
        std::abs(p.mu - q.mu) < 1e-12) {
        for (int sigma = 1; sigma < N; ++sigma) w.Wbar[sigma] = 0.0;
        return w;
    }
    for (int sigma = 1; sigma < N; ++sigma) {
        cd wj = omega_root(N, sigma);
        cd denW = p.y - wj * q.x, denWb = q.y - wj * p.y;
        if (std::abs(denW) < 1e-6 || std::abs(denWb) < 1e-6)
            throw std::runtime_error("boltzmann_weights: singular denominator at j = " +
                                     std::to_string(sigma));
        w.W[sigma] = w.W[sigma - 1] * (p.mu / q.mu) * (q.y - wj * p.x) / denW;
        w.Wbar[sigma] = w.Wbar[sigma - 1] * (p.mu * q.mu) * (omega_root(N, 1) * p.x - wj * q.x) / denWb;
    }
    return w;
}

std::vector<cd> fourier_weights(int N, const std::vector<cd>& W) {
    std::vector<cd> f(N, cd(0.0));
    double inv = 1.0 / std::sqrt(static_cast<double>(N));
    for (int k = 0; k < N; ++k)
        for (int s = 0; s < N; ++s) f[k] += omega_root(N, static_cast<long long>(k) * s) * W[s] * inv;
    return f;
}

namespace {
Mat build_transfer(const Tau2Spec& spec, const Rapidity& p, const Rapidity& q, bool hat) {
    spec.validate();
    int N = spec.N, L = spec.L;
    Weights w = boltzmann_weights(N, p, q);
    long dim = ipow(N, L);
    Mat T(dim, dim);
    for (long i = 0; i < dim; ++i) {
        auto si = digits(i, N, L);
        si.push_back(imod(si[0] - spec.r, N));
        for (long j = 0; j < dim; ++j) {
            auto sj = digits(j, N, L);
            sj.push_back(imod(sj[0] - spec.r, N));
            cd val = 1.0;
            for (int l = 0; l < L; ++l)
                val *= hat ? w.Wbar[imod(si[l] - sj[l], N)] * w.W[imod(si[l] - sj[l + 1], N)]
                           : w.W[imod(si[l] - sj[l], N)] * w.Wbar[imod(si[l + 1] - sj[l], N)];
            T(i, j) = val;
        }
    }
    return T;
}
}  // namespace

Mat build_T(const Tau2Spec& spec, const Rapidity& p, const Rapidity& q) {
    return build_transfer(spec, p, q, false);
}

Mat build_That(const Tau2Spec& spec, const Rapidity& p, const Rapidity& q) {
    return build_transfer(spec, p, q, true);
}

cd wbar_branch(cd tiN, double kprime) {
    cd w2 = 1.0 + 4.0 * kprime / ((1.0 - kprime) * (1.0 - kprime) * (1.0 - tiN));
    cd w = std::sqrt(w2);
    if (((1.0 - kprime) * w).real() < 0.0) w = -w;
    return w;
}

cd factor_G(const TTEigInput& in, cd lambda, const std::vector<int>& s, double kprime, bool wkind) {
    cd G = 1.0;
    double sgn = (wkind && kprime < 0) ? -1.0 : 1.0;
    for (int i = 0; i < in.mE; ++i) {
        cd wi = sgn * static_cast<double>(s[i]) * wbar_branch(in.tiN[i], kprime);
        G *= ((lambda + 1.0) - (lambda - 1.0) * wi) / (2.0 * lambda);
    }
    return G;
}

namespace {
cd Rm_factor(int N, int m, cd z) {
    cd num = 1.0 - cpow_int(z, N), den = 1.0;
    for (int j = 0; j <= N - 1 - m; ++j) den *= 1.0 - omega_root(N, j) * z;
    return num / den;
}
}  // namespace

cd eval_T_eigenvalue(const TTEigInput& in, const Rapidity& p, const Rapidity& q,
                     const std::vector<int>& s, bool hat, bool wkind) {
    int N = in.N, L = in.L, m = in.m;
    double kprime = p.kprime;
    cd x = omega_root(N, m) * q.x / p.x, y = q.y / p.y;
    cd t = omega_root(N, m) * q.t() / p.t();
    cd mu = q.mu, lambda = cpow_int(mu, N);
    cd alpha1 = cpow_int(cd(-1.0), static_cast<long>(m) * L) *
                std::exp(cd(0.0, pi * (static_cast<double>(m) * (m + 1) * L + 2.0 * m * in.Pa) / N));
    cd FwG = in.F.eval(t) * factor_G(in, lambda, s, kprime, wkind);
    cd shared = std::pow(cd(static_cast<double>(N)), L) * cpow_int(Rm_factor(N, m, x), L) *
                cpow_int(1.0 - x, L) / (cpow_int(Rm_factor(N, m, y), L) * cpow_int(1.0 - cpow_int(x, N), L)) *
                cpow_int(x, in.Pa) * cpow_int(y, in.Pb) * cpow_int(mu, -in.Pmu) * FwG;
    if (hat) return shared / (alpha1 * in.F.eval(omega_root(N, m)));
    return alpha1 * shared /
           (omega_root(N, in.Pb + static_cast<long long>(m) * (in.Pb + in.Pa)) *
            in.F.eval(omega_root(N, m + 1)));
}

cd momentum_SR(const TTEigInput& in) {
    int N = in.N, m = in.m;
    return omega_root(N, -static_cast<long long>(m) * (m + 1) * in.L +
                             static_cast<long long>(m) * (in.Pb - in.Pa) + in.Pb) *
           in.F.eval(omega_root(N, 1 + m)) / in.F.eval(omega_root(N, m));
}

}  // namespace scpm
