// Rapidity geometry of the chiral Potts k'-curve: point construction, random
// sampling, the duality map to the 1/k'-curve, and the hyperelliptic lambda roots.
#pragma once

#include <random>

#include "scpm/common.hpp"

namespace scpm {

struct Rapidity {
    cd x, y, mu;
    double kprime;

    cd t() const { return x * y; }
    cd kmod() const { return std::sqrt(cd(1.0) - cd(kprime) * cd(kprime)); }

    // Max residual of the two defining curve equations.
    double residual(int N) const;
};

// Superintegrable point (eta^{1/2} w^m, eta^{1/2}, 1), eta = ((1-k')/(1+k'))^{1/N}.
Rapidity superintegrable_point(int N, int m, double kprime);

cd curve_eta(int N, double kprime);

// Solve the curve for x, y given mu (principal N-th roots).
Rapidity rapidity_from_mu(int N, double kprime, cd mu);

// Sample mu on the annulus 0.5 <= |mu| <= 2, rejecting near-singular points.
Rapidity random_rapidity(int N, double kprime, std::mt19937_64& rng);

// Duality: p* = (i^{1/N} x mu, i^{1/N} y mu^{-1}, mu^{-1}) on the 1/k'-curve.
Rapidity dual_rapidity(const Rapidity& p, int N);

// First-order expansion point q(eps) near the superintegrable p, used to extract
// the quantum chain from the transfer matrix by finite differences.
Rapidity near_p_rapidity(int N, int m, double kprime, double eps);

// Both roots lambda of k^2 t^N = (1 - k' lambda)(1 - k' / lambda).
std::pair<cd, cd> lambda_from_tN(double kprime, cd tN);

// Fusion boundary scalar u(t) = alpha_q + alphabar_q over a normalized t,
// with lambda chosen as either root of the hyperelliptic equation.
cd fusion_u(int N, int L, int m, double kprime, cd tnorm, bool other_root);

}  // namespace scpm
