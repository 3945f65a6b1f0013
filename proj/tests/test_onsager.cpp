// Tests for the Onsager-sector eigenvector machinery: quasi-energies, angle
// functions, the coherent basic basis, trigonometric synthesis against direct
// diagonalization, and the duality and spin-inversion vector correspondences.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <random>

#include "doctest.h"
#include "scpm/onsager.hpp"

using namespace scpm;

namespace {

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

}  // namespace

TEST_CASE("quasi-energy and angle functions") {
    std::mt19937_64 rng(201);
    std::uniform_real_distribution<double> th(0.05, pi - 0.05), kp(-3.0, 3.0);
    for (int rep = 0; rep < 50; ++rep) {
        double theta = th(rng);
        CHECK(epsilon_fn(theta, 0.0) == doctest::Approx(1.0));
        CHECK(epsilon_fn(theta, 1.0) == doctest::Approx(2.0 * std::sin(theta / 2.0)));
        double k = kp(rng);
        if (std::abs(k) < 1e-3) continue;
        CHECK(epsilon_fn(theta, k) ==
              doctest::Approx(std::abs(k) * epsilon_fn(theta, 1.0 / k)).epsilon(1e-12));
        // phi(k') + vartheta(1/k') = 3 pi + theta
        CHECK(angle_fn(theta, k).phi + angle_fn(theta, 1.0 / k).vartheta ==
              doctest::Approx(3.0 * pi + theta).epsilon(1e-12));
        CHECK(angle_fn(theta, 0.0).vartheta == doctest::Approx(2.0 * pi));
        CHECK(angle_fn(theta, 1.0).vartheta == doctest::Approx((3.0 * pi + theta) / 2.0));
        CHECK(angle_fn(theta, -1.0).phi == doctest::Approx(pi + theta / 2.0));
        // limits at large |k'|
        CHECK(angle_fn(theta, 1e9).vartheta == doctest::Approx(pi + theta).epsilon(1e-6));
        CHECK(angle_fn(theta, -1e9).vartheta == doctest::Approx(2.0 * pi + theta).epsilon(1e-6));
    }
}

TEST_CASE("spectral match of H(k') on every sector at L = 2, 3") {
    std::mt19937_64 rng(203);
    for (int L : {2, 3}) {
        for (int m : {0, 1}) {
            for (int r : {0, 1}) {
                for (int Q : {0, 2}) {
                    Tau2Spec spec{3, L, m, r};
                    auto sectors = enumerate_sectors(spec, Q, rng);
                    for (const auto& sec : sectors)
                        for (double kp : {0.3, -0.3, 0.8, -0.8, 2.5}) {
                            // direct_eigvectors throws unless the restricted
                            // spectrum matches the predicted energies
                            LabeledVectors lv = direct_eigvectors(sec, kp);
                            Mat H = sector_hamiltonian(sec, lv.kprime_used);
                            for (long s = 0; s < (1L << sec.mE); ++s) {
                                double E = energy(sec, static_cast<unsigned>(s), lv.kprime_used).E;
                                CHECK((H * lv.v[s] - E * lv.v[s]).norm() < 1e-7 * mat_scale(H));
                            }
                        }
                }
            }
        }
    }
}

TEST_CASE("coherent u-basis: orthonormality, eigenvector property, H1 spectrum") {
    std::mt19937_64 rng(207);
    Tau2Spec spec{3, 3, 0, 0};
    auto sectors = enumerate_sectors(spec, 0, rng);
    Mat Vd = sector_basis(3, 3, 0, 0, BasisKind::difference).isometry;
    Mat H1s = Vd.adjoint() * build_H1(spec) * Vd;
    Mat H0s = Vd.adjoint() * build_H0(spec) * Vd;
    cd tnode = cd(0.57, 0.31);
    Mat tau = Vd.adjoint() * build_tau2(spec, tnode) * Vd;
    for (const auto& sec : sectors) {
        for (bool w_kind : {true, false}) {
            VectorFamily fam = u_basis(sec, w_kind);
            long d2 = 1L << sec.mE;
            for (long s = 0; s < d2; ++s) {
                for (long t = 0; t < d2; ++t) {
                    cd g = fam.u[s].dot(fam.u[t]);
                    CHECK(std::abs(g - (s == t ? 1.0 : 0.0)) < 1e-8);
                }
                // tau2 eigenvector with the sector's eigenvalue curve
                cd lam = sec.eigpoly.eval(tnode);
                CHECK((tau * fam.u[s] - lam * fam.u[s]).norm() < tol_grp * mat_scale(tau));
                // diagonal operator of the kind: beta + N sum s_i resp. alpha + N sum s_i
                int sum = 0;
                for (int i = 0; i < sec.mE; ++i) sum += sign_of(static_cast<unsigned>(s), i);
                const Mat& D = w_kind ? H1s : H0s;
                double want = (w_kind ? sec.beta : sec.alpha) + 3.0 * sum;
                CHECK((D * fam.u[s] - want * fam.u[s]).norm() < tol_grp * mat_scale(D));
            }
        }
    }
}

TEST_CASE("synthesis: large-k' limit, direct overlap, monodromy relation") {
    std::mt19937_64 rng(211);
    for (int r : {0, 1}) {
        Tau2Spec spec{3, 3, 1, r};
        auto sectors = enumerate_sectors(spec, imod(r + 1, 3), rng);
        for (const auto& sec : sectors) {
            VectorFamily fw = u_basis(sec, true);
            VectorFamily fv = u_basis(sec, false);
            long d2 = 1L << sec.mE;
            for (long s = 0; s < d2; ++s) {
                // w(s; k' -> infinity) reduces to the basic vector
                Vec winf = synthesize(sec, fw, static_cast<unsigned>(s), 1e9);
                CHECK(std::abs(std::abs(winf.dot(fw.u[s])) - 1.0) < 1e-6);
                for (double kp : {0.2, 0.6, 0.9, -0.45, 2.5}) {
                    Vec w = synthesize(sec, fw, static_cast<unsigned>(s), kp);
                    Vec v = synthesize(sec, fv, static_cast<unsigned>(s), kp);
                    CHECK(std::abs(w.norm() - 1.0) < 1e-8);
                    CHECK(std::abs(v.norm() - 1.0) < 1e-8);
                    // eigenvectors with eigenvalues Etilde resp. E
                    Mat H = sector_hamiltonian(sec, kp);
                    Energy en = energy(sec, static_cast<unsigned>(s), kp);
                    CHECK((H * w - en.Etilde * w).norm() < tol_grp * mat_scale(H));
                    CHECK((H * v - en.E * v).norm() < tol_grp * mat_scale(H));
                    // cross-check against direct diagonalization
                    LabeledVectors lv = direct_eigvectors(sec, kp);
                    Vec vd = synthesize(sec, fv, static_cast<unsigned>(s), lv.kprime_used);
                    CHECK(std::abs(lv.v[s].dot(vd)) >= 1.0 - 1e-6);
                }
            }
            // monodromy relation between the two kinds
            for (double kp : {0.7, -0.7}) {
                cd ratio0 = 0.0;
                for (long s = 0; s < d2; ++s) {
                    Vec w = synthesize(sec, fw, static_cast<unsigned>(s), kp);
                    unsigned vm = kp > 0 ? static_cast<unsigned>(s)
                                         : static_cast<unsigned>(s) ^ static_cast<unsigned>(d2 - 1);
                    Vec v = synthesize(sec, fv, vm, kp);
                    cd ratio = v.dot(w);
                    CHECK(std::abs(std::abs(ratio) - 1.0) < 1e-6);
                    double lam = 1.0;
                    if (kp < 0)
                        for (int i = 0; i < sec.mE; ++i) lam *= sign_of(static_cast<unsigned>(s), i);
                    ratio /= lam;
                    if (s == 0)
                        ratio0 = ratio;
                    else
                        CHECK(std::abs(ratio - ratio0) < 1e-6);
                }
            }
        }
    }
}

TEST_CASE("F=1 sector at L=3: four vectors with energies +-3eps1 +-3eps2") {
    std::mt19937_64 rng(213);
    Tau2Spec spec{3, 3, 0, 0};
    auto sectors = enumerate_sectors(spec, 0, rng);
    const Sector* s0 = find_sector(sectors, CPoly::one(), 0, 0);
    REQUIRE(s0 != nullptr);
    LabeledVectors lv = direct_eigvectors(*s0, 0.6);
    CHECK(lv.v.size() == 4);
    double e1 = epsilon_fn(s0->theta[0], 0.6), e2 = epsilon_fn(s0->theta[1], 0.6);
    Mat H = sector_hamiltonian(*s0, lv.kprime_used);
    std::vector<double> want = {-3 * e1 - 3 * e2, -3 * e1 + 3 * e2, 3 * e1 - 3 * e2,
                                3 * e1 + 3 * e2};
    std::sort(want.begin(), want.end());
    std::vector<double> got;
    for (const Vec& v : lv.v) got.push_back(std::real(v.dot(H * v)));
    std::sort(got.begin(), got.end());
    for (int i = 0; i < 4; ++i) CHECK(got[i] == doctest::Approx(want[i]).epsilon(1e-6));
}

TEST_CASE("duality correspondence of vectors") {
    std::mt19937_64 rng(217);
    int m = 1, r = 1, Q = 2, L = 3;
    Tau2Spec spec{3, L, m, r}, dspec{3, L, m, Q};
    auto sectors = enumerate_sectors(spec, Q, rng);
    auto duals = enumerate_sectors(dspec, r, rng);
    for (const auto& sec : sectors) {
        const Sector* d = find_sector(duals, sec.F, sec.Pa, sec.Pb);
        REQUIRE(d != nullptr);
        for (double kp : {0.6, 2.5}) {
            DualityVectorCheck ck = duality_vectors(sec, *d, kp);
            CHECK(ck.max_tau_residual < tol_id);
            CHECK(ck.max_H_residual < tol_id * 10);
            CHECK(ck.max_unit_defect < 1e-6);
            // measured sign pattern of the map: phases ratio prod(-s_i)
            long d2 = 1L << sec.mE;
            for (long s = 0; s < d2; ++s) {
                double lam = 1.0;
                for (int i = 0; i < sec.mE; ++i) lam *= sign_of(static_cast<unsigned>(s), i);
                cd rel = ck.phases[s] / ck.phases[d2 - 1];
                CHECK(std::abs(rel - lam) < 1e-6);
            }
        }
    }
}

TEST_CASE("spin-inversion correspondence of vectors and energies") {
    std::mt19937_64 rng(219);
    int m = 0, L = 3, r = 1, Q = 0;
    Tau2Spec spec{3, L, m, r};
    auto sectors = enumerate_sectors(spec, Q, rng);
    for (const auto& sec : sectors) {
        bool i_kind = !(sec.type_I_plus || sec.type_I_minus);
        PartnerTriple p = inversion_partner(sec, i_kind);
        int rp = i_kind ? imod(-(1 + 2 * m) * L - r, 3) : r;
        int Qp = i_kind ? Q : imod(-(1 + 2 * m) * L - Q, 3);
        Tau2Spec pspec{3, L, m, rp};
        auto plist = enumerate_sectors(pspec, Qp, rng);
        const Sector* ps = find_sector(plist, p.F, p.Pa, p.Pb);
        REQUIRE(ps != nullptr);

        for (double kp : {0.55, -0.85}) {
            InversionVectorCheck ck = inversion_vectors(sec, *ps, kp, i_kind);
            CHECK(ck.min_overlap >= 1.0 - 1e-6);
            // energy map through theta' = pi - theta and the linear terms
            long d2 = 1L << sec.mE;
            for (long s = 0; s < d2; ++s) {
                unsigned sm = static_cast<unsigned>(s);
                unsigned flipped = inversion_mask(sm, sec.mE);
                if (!i_kind)
                    CHECK(energy(sec, sm, kp).Etilde ==
                          doctest::Approx(energy(*ps, flipped, -kp).Etilde).epsilon(1e-9));
                else
                    // j* conjugates H(k') to -H(-k'), so the energy flips sign
                    CHECK(energy(sec, sm, kp).E ==
                          doctest::Approx(-energy(*ps, flipped, -kp).E).epsilon(1e-9));
            }
            if (!i_kind) {
                CHECK(sec.alpha == ps->alpha);
                CHECK(sec.beta == -ps->beta);
            } else {
                CHECK(sec.alpha == -ps->alpha);
                CHECK(sec.beta == ps->beta);
            }
        }
    }
}
