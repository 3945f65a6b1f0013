// Unit tests for rapidity geometry, Boltzmann weights, transfer matrices,
// the fusion boundary identity, and the duality identities.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <random>

#include "doctest.h"
#include "scpm/cpm.hpp"
#include "scpm/curve.hpp"
#include "scpm/tau2.hpp"
#include "scpm/weyl.hpp"

using namespace scpm;

namespace {
double dist(const Mat& A, const Mat& B) { return (A - B).cwiseAbs().maxCoeff(); }
double comm_scale(const Mat& A, const Mat& B) {
    return (A * B - B * A).cwiseAbs().maxCoeff() / (mat_scale(A) * mat_scale(B));
}
cd cpow_int(cd b, int e) {
    cd r = 1.0;
    for (int i = 0; i < std::abs(e); ++i) r *= b;
    return e < 0 ? cd(1.0) / r : r;
}
}  // namespace

TEST_CASE("superintegrable point and curve residuals") {
    for (double kp : {0.2, 0.6, 0.9, 5.0, -0.7, 2.5}) {
        for (int m : {0, 1, 2}) {
            Rapidity p = superintegrable_point(3, m, kp);
            CHECK(p.residual(3) < 1e-12);
            CHECK(std::abs(p.mu - 1.0) < 1e-15);
            CHECK(std::abs(p.x / p.y - omega_root(3, m)) < 1e-13);
        }
    }
    // k' = 3/5 gives eta^N = 1/4, real positive
    cd eta = curve_eta(3, 0.6);
    CHECK(std::abs(cpow_int(eta, 3) - 0.25) < 1e-14);
    CHECK(eta.imag() == doctest::Approx(0.0).epsilon(1e-15));
    CHECK_THROWS(superintegrable_point(3, 0, 1.0));
}

TEST_CASE("random rapidities and duality of curves") {
    std::mt19937_64 rng(23);
    for (double kp : {0.2, 0.6, 0.9}) {
        for (int rep = 0; rep < 4; ++rep) {
            Rapidity q = random_rapidity(3, kp, rng);
            CHECK(q.residual(3) < 1e-10);
            Rapidity qs = dual_rapidity(q, 3);
            CHECK(std::abs(qs.kprime - 1.0 / kp) < 1e-15);
            CHECK(qs.residual(3) < 1e-10);
            CHECK(std::abs(qs.mu - 1.0 / q.mu) < 1e-13);
            // t* = (-1)^{1/N} t
            CHECK(std::abs(qs.t() - std::exp(cd(0, pi / 3)) * q.t()) < 1e-12);
        }
        // dual of the superintegrable point is the superintegrable point of 1/k'
        for (int m : {0, 1}) {
            Rapidity ps = dual_rapidity(superintegrable_point(3, m, kp), 3);
            CHECK(std::abs(ps.mu - 1.0) < 1e-14);
            CHECK(std::abs(ps.x / ps.y - omega_root(3, m)) < 1e-13);
            CHECK(ps.residual(3) < 1e-12);
        }
    }
}

TEST_CASE("Boltzmann weights: normalization, coincident point, periodicity") {
    std::mt19937_64 rng(29);
    Rapidity p = superintegrable_point(3, 1, 0.6);
    Rapidity q = random_rapidity(3, 0.6, rng);
    Weights w = boltzmann_weights(3, p, q);
    CHECK(std::abs(w.W[0] - 1.0) < 1e-15);
    CHECK(std::abs(w.Wbar[0] - 1.0) < 1e-15);

    Weights wpp = boltzmann_weights(3, p, p);
    for (int s = 0; s < 3; ++s) CHECK(std::abs(wpp.W[s] - 1.0) < 1e-12);
    CHECK(std::abs(wpp.Wbar[1]) < 1e-12);
    CHECK(std::abs(wpp.Wbar[2]) < 1e-12);

    // N-periodicity: extending the product through sigma + N reproduces W(sigma)
    auto extend = [&](int sigma) {
        cd val = 1.0;
        for (int j = 1; j <= sigma + 3; ++j)
            val *= (p.mu / q.mu) * (q.y - omega_root(3, j) * p.x) / (p.y - omega_root(3, j) * q.x);
        return val;
    };
    for (int s = 0; s < 3; ++s) CHECK(std::abs(extend(s) - w.W[s]) < 1e-10);
}

TEST_CASE("Fourier duality of weights") {
    std::mt19937_64 rng(31);
    for (double kp : {0.2, 0.6, 0.9}) {
        Rapidity p = superintegrable_point(3, 1, kp);
        Rapidity q = random_rapidity(3, kp, rng);
        Weights w = boltzmann_weights(3, p, q);
        Weights ws = boltzmann_weights(3, dual_rapidity(p, 3), dual_rapidity(q, 3));
        auto Wf = fourier_weights(3, w.W), Wbf = fourier_weights(3, w.Wbar);
        for (int k = 0; k < 3; ++k) {
            CHECK(std::abs(Wbf[k] / Wbf[0] - ws.W[k]) < 1e-9);
            CHECK(std::abs(Wf[k] / Wf[0] - ws.Wbar[imod(3 - k, 3)]) < 1e-9);
        }
    }
}

TEST_CASE("transfer matrices: commutation, That = S_R T, charge, tau2 family") {
    std::mt19937_64 rng(37);
    for (int m : {0, 1}) {
        for (int r : {0, 2}) {
            Tau2Spec spec{3, 2, m, r};
            double kp = 0.6;
            Rapidity p = superintegrable_point(3, m, kp);
            Rapidity q1 = random_rapidity(3, kp, rng), q2 = random_rapidity(3, kp, rng);
            Mat T1 = build_T(spec, p, q1), T2 = build_T(spec, p, q2);
            CHECK(comm_scale(T1, T2) < 1e-8);
            Mat S = translation(3, 2, r);
            CHECK(dist(build_That(spec, p, q1), T1 * S) < 1e-10 * mat_scale(T1));
            CHECK(dist(T1 * S, S * T1) < 1e-10 * mat_scale(T1));
            CHECK(comm_scale(T1, spin_shift(3, 2)) < 1e-12);
            // same commuting family as tau2 at the normalized parameter of q1
            cd tn = omega_root(3, m) * q1.t() / p.t();
            CHECK(comm_scale(T1, build_tau2(spec, tn)) < 1e-8);
            // coincident rapidity: That(p) = identity, T(p) = S_R^{-1}
            CHECK(dist(build_That(spec, p, p), Mat::Identity(9, 9)) < 1e-10);
            CHECK(dist(build_T(spec, p, p), S.inverse()) < 1e-10);
        }
    }
}

TEST_CASE("fusion boundary identity with the hyperelliptic scalar u(t)") {
    std::mt19937_64 rng(41);
    std::uniform_real_distribution<double> u01(0.5, 1.3), ph(0, 2 * pi);
    for (int m : {0, 1}) {
        Tau2Spec spec{3, 2, m, 1};
        double kp = 0.6;
        cd t = u01(rng) * std::exp(cd(0, ph(rng)));
        Mat lhs = build_fusion(spec, 4, t);
        Mat base = omega_root(3, spec.r) * fusion_z(spec, t) *
                   (spin_shift(3, 2) * build_fusion(spec, 2, omega_root(3, 1) * t));
        for (bool other : {false, true}) {
            Mat rhs = base + fusion_u(3, 2, m, kp, t, other) * Mat::Identity(9, 9);
            CHECK(dist(lhs, rhs) < 1e-8 * mat_scale(lhs));
        }
    }
}

TEST_CASE("quantum chain extracted from That by central differences") {
    for (double kp : {0.2, 0.9, 2.5}) {
        for (int m : {0, 1}) {
            for (int r : {0, 1}) {
                Tau2Spec spec{3, 2, m, r};
                Rapidity p = superintegrable_point(3, m, kp);
                double eps = 1e-4;
                Mat Tp = build_That(spec, p, near_p_rapidity(3, m, kp, eps));
                Mat Tm = build_That(spec, p, near_p_rapidity(3, m, kp, -eps));
                Mat Hfd = (Tp - Tm) / (2 * eps) -
                          (3.0 - 1.0 - 2.0 * m) * 2.0 * Mat::Identity(9, 9);
                Mat H = build_H(spec, kp);
                CHECK(dist(Hfd, H) < 1e-5 * mat_scale(H));
            }
        }
    }
}

TEST_CASE("duality: tau2, transfer matrices, and Hamiltonian") {
    std::mt19937_64 rng(43);
    int N = 3, L = 2;
    for (double kp : {0.2, 0.6}) {
        for (int m : {0, 1}) {
            for (int r = 0; r < 3; ++r)
                for (int Q = 0; Q < 3; ++Q) {
                    Tau2Spec spec{N, L, m, r}, dspec{N, L, m, Q};  // dual boundary r* = Q
                    Mat Psi = duality_psi(N, L, r, Q);
                    Mat Vd = sector_basis(N, L, r, Q, BasisKind::difference).isometry;
                    Mat PV = Psi * Vd;

                    cd t = cd(0.8, 0.35);
                    Mat lhs = build_tau2(dspec, t) * PV;
                    Mat rhs = PV * (Vd.adjoint() * build_tau2(spec, t) * Vd);
                    CHECK(dist(lhs, rhs) < 1e-9 * mat_scale(lhs));

                    // CPM duality with the Fourier-weight scalar
                    Rapidity p = superintegrable_point(N, m, kp);
                    Rapidity q = random_rapidity(N, kp, rng);
                    Rapidity ps = dual_rapidity(p, N), qs = dual_rapidity(q, N);
                    cd scal = fourier_weights(N, boltzmann_weights(N, ps, qs).W)[0] /
                              fourier_weights(N, boltzmann_weights(N, p, q).W)[0];
                    Mat Td = build_T(dspec, ps, qs);
                    Mat lhs2 = Td * PV;
                    Mat rhs2 = cpow_int(scal, L) * PV *
                               (Vd.adjoint() * build_T(spec, p, q) * Vd);
                    CHECK(dist(lhs2, rhs2) < 1e-7 * std::max(mat_scale(lhs2), mat_scale(rhs2)));

                    // H0 = Psi^{-1} H1* Psi and H1 = Psi^{-1} H0* Psi on the sector
                    CHECK(dist(build_H1(dspec) * PV, PV * (Vd.adjoint() * build_H0(spec) * Vd)) <
                          1e-9 * mat_scale(build_H0(spec)));
                    CHECK(dist(build_H0(dspec) * PV, PV * (Vd.adjoint() * build_H1(spec) * Vd)) <
                          1e-9 * mat_scale(build_H0(spec)));
                }
        }
    }
}
