// Chiral Potts Boltzmann weights, transfer matrices T and That, and the
// closed-form eigenvalue evaluation on analyzed sectors.
#pragma once

#include "scpm/curve.hpp"
#include "scpm/poly.hpp"
#include "scpm/tau2.hpp"

namespace scpm {

struct Weights {
    std::vector<cd> W, Wbar;  // index sigma = 0..N-1, W[0] = Wbar[0] = 1
};

// Product-formula Boltzmann weights; throws on a singular denominator.
Weights boltzmann_weights(int N, const Rapidity& p, const Rapidity& q);

// Fourier transforms W^(f)(k) = N^{-1/2} sum_sigma w^{k sigma} W(sigma).
std::vector<cd> fourier_weights(int N, const std::vector<cd>& W);

// Transfer matrices with the skewed boundary sigma_{L+1} = sigma_1 - r.
Mat build_T(const Tau2Spec& spec, const Rapidity& p, const Rapidity& q);
Mat build_That(const Tau2Spec& spec, const Rapidity& p, const Rapidity& q);

// Sector data needed by the closed-form transfer-matrix eigenvalue.
struct TTEigInput {
    int N, L, m;
    CPoly F;
    int Pa, Pb, Pmu, mE;
    std::vector<cd> tiN;  // roots t_i^N of the evaluation polynomial
};

// Branch value wbar_i with Re((1-k') wbar_i) > 0 for the root t_i^N.
cd wbar_branch(cd tiN, double kprime);

// G(lambda) = prod ((lambda+1) - (lambda-1) w_i) / (2 lambda).
cd factor_G(const TTEigInput& in, cd lambda, const std::vector<int>& s, double kprime, bool wkind);

// Closed-form T (hat = false) or That (hat = true) eigenvalue for sign vector s.
cd eval_T_eigenvalue(const TTEigInput& in, const Rapidity& p, const Rapidity& q,
                     const std::vector<int>& s, bool hat, bool wkind = false);

// Predicted translation eigenvalue of the sector.
cd momentum_SR(const TTEigInput& in);

}  // namespace scpm
