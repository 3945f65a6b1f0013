// Weyl operators, Kronecker lifting, charge-sector bases (spin-difference and
// Fourier kinds), the duality isometry between them, and the spin-inversion map.
#pragma once

#include "scpm/common.hpp"

namespace scpm {

// Local N-state shift X|s> = |s+1> and clock Z|s> = w^s |s>.
Mat weyl_X(int N);
Mat weyl_Z(int N);
// Fourier matrix F with F(s,k) = w^{-ks}/sqrt(N); columns are X-eigenvectors.
Mat fourier(int N);

// Embed a local operator at 1-based site l of an L-site chain.
Mat site_lift(const Mat& op, int l, int L);

// Global spin shift prod_l X_l.
Mat spin_shift(int N, int L);

// Skewed translation S_R|s1..sL> = |s2..sL, s1 - r>; plain translation at r = 0.
Mat translation(int N, int L, int r);

enum class BasisKind { difference, fourier };

struct SectorBasisMap {
    int N, L, r, Q;
    BasisKind kind;
    Mat isometry;  // N^L x N^{L-1}, orthonormal columns of charge Q
};

// Orthonormal basis of the charge-Q eigenspace of prod X_l. Columns are indexed by
// the free tuple (n_1..n_{L-1}) in lexicographic order; n_L is fixed by the
// constraint sum n = r (difference kind) resp. sum n' = Q (fourier kind).
SectorBasisMap sector_basis(int N, int L, int r, int Q, BasisKind kind);

// Duality map on the full space: |Q; n_1..n_L> (charge Q, skew r) to the Fourier
// product vector with the same indices (charge r). Unitary from V_{r,Q} onto V_{Q,r}.
Mat duality_psi(int N, int L, int r, int Q);

// Spin inversion j|s_1..s_L> = w^{-(1+2m) sum s} |(-s_L)..(-s_1)>.
Mat spin_inversion(int N, int L, int m);

}  // namespace scpm
