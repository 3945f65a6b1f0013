// Tests for the sector decomposition pipeline: eigenvalue grouping, recovery
// of (F, Pa, Pb, J), Bethe certification, the evaluation polynomial, quantum
// numbers, classification, duality of quantum numbers, and inversion partners.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <random>

#include "doctest.h"
#include "scpm/sector.hpp"
#include "scpm/weyl.hpp"

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

cd frame_eigenvalue(const Mat& op, const Vec& v) { return v.dot(op * v); }

}  // namespace

TEST_CASE("eigen decomposition: dimensions, invariance, known multiplicity") {
    std::mt19937_64 rng(101);
    {
        Tau2Spec spec{3, 2, 0, 0};
        auto groups = eigen_decompose(spec, 0, rng);
        long total = 0;
        for (auto& g : groups) total += g.frame.cols();
        CHECK(total == 3);
        // each frame spans an invariant subspace of tau2 at a fresh node
        Mat Vd = sector_basis(3, 2, 0, 0, BasisKind::difference).isometry;
        Mat tau = Vd.adjoint() * build_tau2(spec, cd(0.61, 0.48)) * Vd;
        for (auto& g : groups) {
            Mat P = g.frame * g.frame.adjoint();
            CHECK((P * tau * P - tau * P).cwiseAbs().maxCoeff() < tol_grp * mat_scale(tau));
        }
    }
    {
        Tau2Spec spec{3, 3, 0, 0};
        auto groups = eigen_decompose(spec, 0, rng);
        int mult4 = 0;
        long total = 0;
        for (auto& g : groups) {
            total += g.frame.cols();
            if (g.frame.cols() == 4) ++mult4;
        }
        CHECK(total == 9);
        CHECK(mult4 == 1);
    }
}

TEST_CASE("functional-equation fit: F=1 sector, round trip, known triple") {
    Tau2Spec spec{3, 3, 0, 0};
    // F = 1 eigenvalue curve written out directly
    std::vector<cd> nodes = interp_nodes(8, 0.9);
    std::vector<cd> vals;
    CPoly one = CPoly::one();
    for (cd t : nodes) vals.push_back(tau2_eigenvalue(spec, one, 0, 0, t));
    CPoly eig = poly_fit(nodes, vals, 3);
    BetheData bd = fit_bethe_data(eig, spec, 0);
    CHECK(bd.J == 0);
    CHECK(bd.Pa == 0);
    CHECK(bd.Pb == 0);
    CHECK(bd.F.degree() == 0);

    std::mt19937_64 rng(103);
    auto groups = eigen_decompose(spec, 0, rng);
    for (auto& g : groups) {
        BetheData b = fit_bethe_data(g.eigpoly, spec, 0);
        if (g.frame.cols() == 4) {
            CHECK(b.Pa == 0);
            CHECK(b.Pb == 0);
            CHECK(b.J == 0);
        }
        // round trip through the reconstruction formula
        for (cd t : interp_nodes(5, 0.77, 0.19)) {
            cd lhs = g.eigpoly.eval(t);
            cd rhs = tau2_eigenvalue(spec, b.F, b.Pa, b.Pb, t);
            CHECK(std::abs(lhs - rhs) <= 1e-9 * (std::abs(lhs) + std::abs(rhs) + 1.0));
        }
        CHECK(bethe_residual(b, spec) <= 1e-7);
        // sensitivity guard: perturbing one root breaks the Bethe equations
        if (b.J > 0) {
            BetheData pert = b;
            pert.F.c[1] += 1e-3;
            double res = 1.0;
            try {
                res = bethe_residual(pert, spec);
            } catch (const std::exception&) {
            }
            CHECK(res > 1e-4);
        }
    }
}

TEST_CASE("evaluation polynomial: normalization, roots, invariants") {
    std::mt19937_64 rng(107);
    for (int m : {0, 1}) {
        for (int r : {0, 1}) {
            for (int Q : {0, 2}) {
                Tau2Spec spec{3, 3, m, r};
                auto sectors = enumerate_sectors(spec, Q, rng);
                long total = 0;
                for (const auto& s : sectors) {
                    total += 1L << s.mE;
                    CHECK(std::abs(s.Pev.eval(0.0) - 1.0) < 1e-10);
                    CHECK(3 * s.mE == 2 * s.L - s.Pa - s.Pb - 2 * s.J - s.dE);
                    CHECK(s.Pa + s.Pb <= 2);
                    CHECK(imod(s.Pb - s.Pa - (Q + r + (1 + 2 * m) * s.L), 3) == 0);
                    CHECK(imod(s.Pmu - r, 3) == 0);
                    CHECK(s.Pmu >= s.Pb - m * s.L + s.J);
                    CHECK(s.Pmu <= s.Pb - m * s.L + s.J + s.dE);
                    CHECK(s.alpha == 2 * s.Pmu + 3 * s.mE - (2 - 2 * m) * s.L);
                    CHECK(s.beta == 2 * (s.Pb - s.Pa) - s.alpha);
                    for (size_t i = 0; i < s.theta.size(); ++i) {
                        CHECK(s.theta[i] > 0.0);
                        CHECK(s.theta[i] < pi);
                        CHECK(s.tiN[i].real() < 0.0);
                        if (i) CHECK(s.theta[i] >= s.theta[i - 1]);
                    }
                    CHECK(s.frame.cols() == (1L << s.mE));
                    CHECK((s.type_I_plus || s.type_I_minus || s.type_i_plus || s.type_i_minus));
                    if (s.type_I_plus) CHECK(imod(s.Q + (1 + m) * s.L + s.J, 3) == 0);
                }
                CHECK(total == 9);
                // when (1+2m)L + Q + r = 0 mod N all sectors have Pa = Pb = 0
                if (imod((1 + 2 * m) * 3 + Q + r, 3) == 0)
                    for (const auto& s : sectors) {
                        CHECK(s.Pa == 0);
                        CHECK(s.Pb == 0);
                    }
            }
        }
    }
    // F=1 sector of the r=Q=0, m=0 space has mE=2, dE=0
    Tau2Spec spec{3, 3, 0, 0};
    auto sectors = enumerate_sectors(spec, 0, rng);
    const Sector* s0 = find_sector(sectors, CPoly::one(), 0, 0);
    REQUIRE(s0 != nullptr);
    CHECK(s0->mE == 2);
    CHECK(s0->dE == 0);
    CHECK(s0->J == 0);
    CHECK(s0->type_I_plus);
    CHECK(s0->type_I_minus);
    CHECK(s0->type_i_plus);
    CHECK(s0->type_i_minus);
    CHECK(s0->alpha == 0);
    CHECK(s0->beta == 0);
}

TEST_CASE("completeness at L = 2 and L = 4") {
    std::mt19937_64 rng(109);
    for (int r = 0; r < 3; ++r)
        for (int Q = 0; Q < 3; ++Q) {
            Tau2Spec spec{3, 2, 1, r};
            auto sectors = enumerate_sectors(spec, Q, rng);
            long total = 0;
            for (const auto& s : sectors) total += 1L << s.mE;
            CHECK(total == 3);
        }
    Tau2Spec spec4{3, 4, 0, 1};
    auto sectors = enumerate_sectors(spec4, 2, rng);
    long total = 0;
    for (const auto& s : sectors) total += 1L << s.mE;
    CHECK(total == 27);
}

TEST_CASE("duality of quantum numbers between (r,Q) and (Q,r) spaces") {
    std::mt19937_64 rng(113);
    int m = 1, r = 1, Q = 2;
    Tau2Spec spec{3, 3, m, r}, dspec{3, 3, m, Q};
    auto sectors = enumerate_sectors(spec, Q, rng);
    auto duals = enumerate_sectors(dspec, r, rng);
    CHECK(sectors.size() == duals.size());
    for (const auto& s : sectors) {
        const Sector* d = find_sector(duals, s.F, s.Pa, s.Pb);
        REQUIRE(d != nullptr);
        CHECK(d->J == s.J);
        CHECK(d->mE == s.mE);
        bool pm = (s.Pmu + s.dE == d->Pmu) || (s.Pmu - s.dE == d->Pmu);
        CHECK(pm);
    }
}

TEST_CASE("inversion partner: functional relation, reciprocity, partner space") {
    std::mt19937_64 rng(127);
    int m = 0, r = 1, Q = 0, L = 3;
    Tau2Spec spec{3, L, m, r};
    auto sectors = enumerate_sectors(spec, Q, rng);
    for (const auto& s : sectors) {
        bool i_kind = !(s.type_I_plus || s.type_I_minus);
        PartnerTriple p = inversion_partner(s, i_kind);
        CHECK(p.Pa + p.Pb == s.dE);

        // partner of the partner returns the original triple
        Sector tmp = s;
        tmp.F = p.F;
        tmp.Pa = p.Pa;
        tmp.Pb = p.Pb;
        tmp.J = s.J;
        tmp.dE = s.Pa + s.Pb;  // per the reciprocal degree relation
        if (i_kind)
            tmp.r = imod(-(1 + 2 * m) * L - s.r, 3);
        else
            tmp.Q = imod(-(1 + 2 * m) * L - s.Q, 3);
        PartnerTriple pp = inversion_partner(tmp, i_kind);
        CHECK(pp.Pa == s.Pa);
        CHECK(pp.Pb == s.Pb);
        CHECK(poly_close(pp.F, s.F));

        // partner evaluation data: mE preserved, theta reflected, Pev reciprocal
        BetheData pbd{p.F, p.Pa, p.Pb, s.J};
        PData pd = compute_P(pbd, spec, Q);
        CHECK(pd.mE == s.mE);
        CHECK(pd.dE == s.Pa + s.Pb);
        REQUIRE(pd.theta.size() == s.theta.size());
        for (size_t i = 0; i < s.theta.size(); ++i)
            CHECK(pd.theta[i] == doctest::Approx(pi - s.theta[s.theta.size() - 1 - i]).epsilon(1e-6));
        CPoly recip = CPoly::one();
        for (cd a : s.a) recip = recip * CPoly({cd(1.0), -1.0 / a});
        CHECK(poly_close(pd.Pev, recip, 1e-7));

        // the partner eigenvalue exists in the decomposition of the partner space
        int rp, Qp;
        if (s.type_I_plus || s.type_I_minus) {
            rp = s.r;
            Qp = imod(-(1 + 2 * m) * L - s.Q, 3);
        } else {
            Qp = s.Q;
            rp = imod(-(1 + 2 * m) * L - s.r, 3);
        }
        Tau2Spec pspec{3, L, m, rp};
        auto plist = enumerate_sectors(pspec, Qp, rng);
        const Sector* ps = find_sector(plist, p.F, p.Pa, p.Pb);
        REQUIRE(ps != nullptr);

        // translation eigenvalues multiply to the predicted phase
        Mat Vd = sector_basis(3, L, s.r, s.Q, BasisKind::difference).isometry;
        Mat Vp = sector_basis(3, L, rp, Qp, BasisKind::difference).isometry;
        cd SR = frame_eigenvalue(Vd.adjoint() * translation(3, L, s.r) * Vd, s.frame.col(0));
        cd SRp = frame_eigenvalue(Vp.adjoint() * translation(3, L, rp) * Vp, ps->frame.col(0));
        if (s.type_I_plus || s.type_I_minus)
            CHECK(std::abs(SR * SRp - omega_root(3, (2 * m + 1) * s.r)) < 1e-8);
        else
            CHECK(std::abs(SR * SRp - omega_root(3, (2 * m + 1) * s.Q)) < 1e-8);
    }
}
