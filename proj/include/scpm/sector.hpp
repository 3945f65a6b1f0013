// Decomposition of each (r, Q) charge space into degenerate eigenvalue sectors
// of the tau2 family: eigenvalue-polynomial extraction, functional-equation
// recovery of (F, Pa, Pb, J), Bethe certification, the evaluation polynomial
// with its roots and angles, quantum numbers, the four-type classification,
// and the inversion partner map.
#pragma once

#include <random>

#include "scpm/poly.hpp"
#include "scpm/tau2.hpp"
#include "scpm/weyl.hpp"

namespace scpm {

// One degenerate eigenvalue group of the commuting tau2 family.
struct EigenGroup {
    CPoly eigpoly;  // tau2 eigenvalue as a polynomial in t, degree <= L
    Mat frame;      // orthonormal eigenspace basis in sector coordinates
};

// Diagonalizes a generic linear combination of tau2 samples in the (r, Q)
// sector coordinates and groups eigenvectors with matching eigenvalue curves.
std::vector<EigenGroup> eigen_decompose(const Tau2Spec& spec, int Q, std::mt19937_64& rng);

struct BetheData {
    CPoly F;  // F(0) = 1, degree J
    int Pa = 0, Pb = 0, J = 0;
};

// tau2 eigenvalue reconstructed from (F, Pa, Pb):
// w^{-Pa} (1 - w^{-m} t)^L F(t)/F(w t) + w^{Pb} (1 - w^{1-m} t)^L F(w^2 t)/F(w t).
cd tau2_eigenvalue(const Tau2Spec& spec, const CPoly& F, int Pa, int Pb, cd t);

// Recovers the unique (F, Pa, Pb, J) solving the functional equation
// eigpoly(t) F(w t) = w^{-Pa} (1 - w^{-m} t)^L F(t) + w^{Pb} (1 - w^{1-m} t)^L F(w^2 t)
// subject to the charge congruence Pb - Pa = Q + r + (1+2m)L mod N.
// Throws if zero or several candidates survive.
BetheData fit_bethe_data(const CPoly& eigpoly, const Tau2Spec& spec, int Q);

// Max normalized residual of the Bethe equations over the roots of F.
double bethe_residual(const BetheData& bd, const Tau2Spec& spec);

struct PData {
    CPoly P;                 // polynomial in t (only t^{Nk} coefficients nonzero)
    CPoly Pev;               // evaluation polynomial in xi = t^N, Pev(0) = 1
    std::vector<cd> tiN;     // roots of Pev, negative real, ordered with theta
    std::vector<cd> a;       // a_i = 1 / t_i^N
    std::vector<double> theta;  // arccos((t_i^N + 1)/(t_i^N - 1)), ascending
    int mE = 0, dE = 0;
};

// Evaluation polynomial from the cyclic sum formula, certified to be a
// polynomial in t^N with negative real roots. When a frame is supplied the
// result is cross-checked against t^{-Pa-Pb} tau^{(N)} / F^2 on that frame.
PData compute_P(const BetheData& bd, const Tau2Spec& spec, int Q,
                const Mat& frame = Mat());

struct Sector {
    int N = 0, L = 0, m = 0, r = 0, Q = 0;
    CPoly eigpoly, F;
    int Pa = 0, Pb = 0, J = 0, Pmu = 0, mE = 0, dE = 0, alpha = 0, beta = 0;
    std::vector<cd> tiN, a;
    std::vector<double> theta;
    bool type_I_plus = false, type_I_minus = false;
    bool type_i_plus = false, type_i_minus = false;
    Mat frame;   // sector coordinates, N^{L-1} x 2^{mE}
    CPoly Ppoly, Pev;
};

// Fills Pmu, alpha, beta, and the four type flags; throws if no type matches
// or Pmu is not uniquely determined by its congruence and window.
void classify(Sector& s);

struct PartnerTriple {
    CPoly F;
    int Pa = 0, Pb = 0;
};

// Inversion partner (F', P'a, P'b): roots of F map to w^{1+2m} / root. The
// primed charges satisfy P'a + P'b = dE; their difference is pinned by the
// charge congruence of the partner space, which keeps r (I-kind pairing,
// i_kind = false) or Q (i-kind pairing, i_kind = true). The returned triple is
// certified against the functional relation
// tau'(w^m t) = w^{P'b + Pa + L + J} (-t)^L tau(w^{m-1} / t).
PartnerTriple inversion_partner(const Sector& s, bool i_kind);

// Full pipeline over one (r, Q) space with the completeness certificate
// sum over sectors of 2^{mE} = N^{L-1}.
std::vector<Sector> enumerate_sectors(const Tau2Spec& spec, int Q, std::mt19937_64& rng);

}  // namespace scpm
