// The superintegrable tau2 transfer matrix: local L-operator, monodromy, fusion
// hierarchy, and the associated quantum chain H(k') with its symmetry operators.
#pragma once

#include "scpm/common.hpp"

namespace scpm {

struct Tau2Spec {
    int N;  // states per site, odd >= 3
    int L;  // chain length
    int m;  // vertical-rapidity exponent, 0..N-1
    int r;  // skew boundary condition mod N

    void validate() const {
        if (N < 3 || N % 2 == 0) throw std::invalid_argument("Tau2Spec: N must be odd >= 3");
        if (L < 1 || m < 0 || m >= N) throw std::invalid_argument("Tau2Spec: bad L or m");
    }
};

struct LocalL {
    Mat e11, e12, e21, e22;  // N x N entries, auxiliary-space 2x2 layout
};

struct Monodromy {
    Mat A, B, C, D;  // full-space operators
};

// Normalized local L-operator at normalized spectral parameter t.
LocalL build_L(const Tau2Spec& spec, cd t);

// Un-normalized local L-operator at the superintegrable point of the k'-curve
// (gauge-equivalent to build_L under dia[eta^{1/2}, 1] with t_norm = t/eta).
LocalL build_L_raw(const Tau2Spec& spec, double kprime, cd t);

// Ordered product of local L-operators over the chain.
Monodromy build_monodromy(const Tau2Spec& spec, cd t);

// tau2(t) = A(w t) + w^r D(w t).
Mat build_tau2(const Tau2Spec& spec, cd t);

// Fusion hierarchy tau^{(j)}(t), j = 0..N+1, via the recursion
// tau^{(j+1)}(t) = tau2(w^{j-1} t) tau^{(j)}(t) - w^r X z(w^{j-1} t) tau^{(j-1)}(t).
Mat build_fusion(const Tau2Spec& spec, int j, cd t);

// z(t) = (w (w^m - t)^2)^L, the fusion scalar in normalized coordinates.
cd fusion_z(const Tau2Spec& spec, cd t);

Mat build_H0(const Tau2Spec& spec);
Mat build_H1(const Tau2Spec& spec);
Mat build_H(const Tau2Spec& spec, double kprime);

// K = w^{L(M-m)} (prod X_l)^{-1} with M = (N-1)/2; satisfies K = q^{H1}, q = w^M.
Mat xxz_K(const Tau2Spec& spec);

}  // namespace scpm
