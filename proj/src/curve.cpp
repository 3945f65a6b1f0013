#include "scpm/curve.hpp"

namespace scpm {

namespace {
cd cpow_int(cd b, int e) {
    cd r = 1.0;
    bool neg = e < 0;
    for (int i = 0; i < std::abs(e); ++i) r *= b;
    return neg ? cd(1.0) / r : r;
}

void check_kprime(double kprime) {
    if (kprime == 0.0 || kprime == 1.0 || kprime == -1.0)
        throw std::invalid_argument("kprime must avoid 0 and +-1");
}
}  // namespace

double Rapidity::residual(int N) const {
    cd k = kmod();
    cd r1 = k * cpow_int(x, N) - (1.0 - kprime * cpow_int(mu, -N));
    cd r2 = k * cpow_int(y, N) - (1.0 - kprime * cpow_int(mu, N));
    return std::max(std::abs(r1), std::abs(r2));
}

cd curve_eta(int N, double kprime) {
    check_kprime(kprime);
    return std::pow(cd(1.0 - kprime) / cd(1.0 + kprime), 1.0 / N);
}

Rapidity superintegrable_point(int N, int m, double kprime) {
    cd se = std::sqrt(curve_eta(N, kprime));
    return {se * omega_root(N, m), se, cd(1.0), kprime};
}

Rapidity rapidity_from_mu(int N, double kprime, cd mu) {
    check_kprime(kprime);
    cd k = std::sqrt(cd(1.0) - cd(kprime) * cd(kprime));
    cd xN = (1.0 - kprime * cpow_int(mu, -N)) / k;
    cd yN = (1.0 - kprime * cpow_int(mu, N)) / k;
    return {std::pow(xN, 1.0 / N), std::pow(yN, 1.0 / N), mu, kprime};
}

Rapidity random_rapidity(int N, double kprime, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> mag(0.5, 2.0), ph(0.0, 2.0 * pi);
    for (int attempt = 0; attempt < 256; ++attempt) {
        double a = ph(rng);
        cd mu = mag(rng) * cd(std::cos(a), std::sin(a));
        Rapidity q = rapidity_from_mu(N, kprime, mu);
        if (std::abs(q.x) < 1e-6 || std::abs(q.y) < 1e-6) continue;
        if (q.residual(N) < 1e-10) return q;
    }
    throw std::runtime_error("random_rapidity: sampling failed");
}

Rapidity dual_rapidity(const Rapidity& p, int N) {
    cd i1N = std::exp(cd(0.0, pi / (2.0 * N)));
    return {i1N * p.x * p.mu, i1N * p.y / p.mu, 1.0 / p.mu, 1.0 / p.kprime};
}

Rapidity near_p_rapidity(int N, int m, double kprime, double eps) {
    // The point must lie on the curve exactly, not only to first order: the
    // weight product has a removable 0/0 factor at sigma difference N - m whose
    // first-order value is sensitive to second-order off-curve errors.
    cd se = std::sqrt(curve_eta(N, kprime));
    cd mu = 1.0 + 2.0 * (kprime - 1.0) * eps;
    cd k = std::sqrt(cd(1.0) - cd(kprime) * cd(kprime));
    cd xN = (1.0 - kprime / cpow_int(mu, N)) / k;
    cd yN = (1.0 - kprime * cpow_int(mu, N)) / k;
    auto nearest_root = [&](cd zN, cd guess) {
        cd best = std::pow(zN, 1.0 / N);
        cd pick = best;
        for (int j = 0; j < N; ++j) {
            cd cand = best * omega_root(N, j);
            if (std::abs(cand - guess) < std::abs(pick - guess)) pick = cand;
        }
        return pick;
    };
    cd x = nearest_root(xN, omega_root(N, m) * se * (1.0 - 2.0 * kprime * eps));
    cd y = nearest_root(yN, se * (1.0 + 2.0 * kprime * eps));
    return {x, y, mu, kprime};
}

std::pair<cd, cd> lambda_from_tN(double kprime, cd tN) {
    // k' l^2 - (1 + k'^2 - k^2 t^N) l + k' = 0
    cd k2 = 1.0 - kprime * kprime;
    cd b = 1.0 + kprime * kprime - k2 * tN;
    cd disc = std::sqrt(b * b - 4.0 * kprime * kprime);
    cd l1 = (b + disc) / (2.0 * kprime);
    return {l1, 1.0 / l1};
}

cd fusion_u(int N, int L, int m, double kprime, cd tnorm, bool other_root) {
    cd eta = curve_eta(N, kprime);
    cd t = eta * tnorm;  // un-normalized spectral parameter (t_p = eta w^m)
    cd tN = cpow_int(t, N);
    auto [l1, l2] = lambda_from_tN(kprime, tN);
    cd lambda = other_root ? l2 : l1;
    cd k = std::sqrt(cd(1.0) - cd(kprime) * cd(kprime));
    cd xN = (1.0 - kprime / lambda) / k;
    cd yN = (1.0 - kprime * lambda) / k;
    // y_p^N = eta^{N/2} with eta^N = (1-k')/(1+k'), principal branch
    cd ypN = std::pow(cd(1.0 - kprime) / cd(1.0 + kprime), 0.5);
    cd alpha = lambda * (ypN - xN) * (ypN - xN) / (kprime * ypN * ypN);
    cd alphabar = (ypN - yN) * (ypN - yN) / (lambda * kprime * ypN * ypN);
    return cpow_int(alpha, L) + cpow_int(alphabar, L);
}

}  // namespace scpm
