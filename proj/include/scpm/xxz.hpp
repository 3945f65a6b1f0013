// Equivalent spin-(N-1)/2 XXZ chain at q = w^M: local representation, Jet-valued
// six-vertex monodromy, algebraic Bethe states, normalized n-th powers of the
// raising/lowering monodromy limits, the regularized degeneracy currents, and the
// constructive local-spin eigenvector basis they generate.
#pragma once

#include "scpm/jet.hpp"
#include "scpm/onsager.hpp"

namespace scpm {

// Local spin-(N-1)/2 representation in the N-state site space. The graded basis
// e^k is the Fourier vector of index (k - m) mod N.
struct XXZRep {
    int N, m;
    cd q;        // w^M, M = (N-1)/2
    Mat Khalf;   // K^{1/2} e^k = q^{k-(N-1)/2} e^k
    Mat eplus;   // e^+ e^k = q^{-1/2} [N-1-k] e^{k+1}
    Mat eminus;  // e^- e^k = q^{1/2} [k] e^{k-1}
    Mat Sz;      // S^z e^k = (k - (N-1)/2) e^k
    Mat evec;    // column k is e^k
};

XXZRep xxz_rep(int N, int m);

// q-deformed integer [n] = (q^n - q^{-n})/(q - q^{-1}).
cd q_integer(int N, int n);

struct JetMonodromy {
    JetMat A, B, C, D;
};

// Monodromy of the XXZ L-operator over the chain. The spectral argument carries
// its own ds and dq parts; the representation matrices carry their q-derivatives
// in the dq slot, with the square root of q varying along the in-group branch.
JetMonodromy build_xxz_monodromy(const Tau2Spec& spec, const Jet& s);

// Value-only monodromy at plain s.
Monodromy xxz_monodromy(const Tau2Spec& spec, cd s);

// Twisted trace T(s) = A(s) + q^{-2r} D(s).
Mat xxz_transfer(const Tau2Spec& spec, cd s);

struct Vacua {
    Vec plus;   // tensor power of e^{N-1}
    Vec minus;  // tensor power of e^0
};

Vacua pseudo_vacua(const Tau2Spec& spec);

// Which current/state pair a sector uses: B-current with the raising vacuum state
// (plus) or C-current with the lowering one, and whether everything is conjugated
// through the duality map (the v-kind sector types).
struct FMKind {
    bool plus_type;  // true: B-current, psi+ / phi+, modes e^-(n)
    bool dual_conj;  // true: conjugate operators and state through duality_psi
};

FMKind fm_kind(const Sector& sec);

// Algebraic Bethe state of the sector in the full chain space: products of the
// tau2 monodromy B or C entries at the F-roots applied to a pseudo-vacuum,
// pulled back through the duality map for v-kind sectors.
Vec bethe_state(const Sector& sec, const Tau2Spec& spec);
Vec bethe_state(const Sector& sec, const Tau2Spec& spec, const FMKind& kind);

// Normalized n-th power of the leading/lowest monodromy term: B_pm^(n) (bop) or
// C_pm^(n), an explicit graded sum of local-operator tensor products.
Mat nilpotent_power(const Tau2Spec& spec, bool bop, bool plus, int n);

// Jet-valued q-string product prod_{i=0}^{N-1} O(q^i s) of the B (bop) or C
// monodromy entry; its value and ds part vanish, its dq part feeds the current.
// The q-derivative is the partial one: the string arguments q^i s are held
// fixed, only the entries of each factor vary with q.
JetMat string_average(const Tau2Spec& spec, bool bop, cd s);

// Pole-carrying weight function of the current, a function of t = s^2.
cd phi_fn(const Sector& sec, cd t);

// Degeneracy current at spectral parameter s: string-average q-derivative plus
// the phi-weighted single-derivative sum, with both pieces conjugated through
// the duality map for v-kind sectors.
Mat fm_current(const Sector& sec, const Tau2Spec& spec, cd s);
Mat fm_current(const Sector& sec, const Tau2Spec& spec, cd s, const FMKind& kind);
// The phi-weighted part alone (same conjugation convention).
Mat fm_current_phi(const Sector& sec, const Tau2Spec& spec, cd s, const FMKind& kind);

struct CurrentData {
    FMKind kind;
    Vec psi;               // Bethe state, full space
    Vec psi_f;             // Bethe state in frame coordinates
    std::vector<Mat> Rk;   // phi-part polynomial coefficients R_k on the frame
    double fit_remainder;  // non-polynomial residual of the degree L+mE-1 fit
    CPoly gamma;           // scale polynomial, degree L
    double gamma_end_rel;  // max relative deviation of gamma_0, gamma_L from 2N^2
    std::vector<Mat> Qk;   // P_ev(xi)-regularized current, degree mE-1, frame coords
    double q_remainder;
    Mat e_first;           // e^-(0) resp. e^+(1) on the frame
    Mat e_last;            // e^-(-1) resp. e^+(0) on the frame
};

// Interpolates the P_ev-regularized current over xi = t^N circle nodes, extracts
// the first loop modes, and deconvolves the scale polynomial gamma by projecting
// each current sample onto the mode combination predicted by the evaluation
// points. Endpoint values 2N^2 are measured, not imposed.
CurrentData regularize_current(const Sector& sec, const Tau2Spec& spec);
CurrentData regularize_current(const Sector& sec, const Tau2Spec& spec, const FMKind& kind);

struct LoopModeSet {
    CurrentData cur;
    std::vector<Mat> e;  // e_i on frame coordinates, scaled so |e_i psi| = |psi|
};

// Partial-fraction evaluation of the regularized current at xi = 1/a_i gives the
// per-mode sign-flip operators e_i.
LoopModeSet product_operators(const Sector& sec, const Tau2Spec& spec);
LoopModeSet product_operators(const Sector& sec, const Tau2Spec& spec, const CurrentData& cur);

// Constructive u-basis: products of e_i applied to the Bethe state, normalized.
// Vectors are in sector coordinates, indexed by sign mask as in VectorFamily.
VectorFamily generate_u_basis(const Sector& sec, const Tau2Spec& spec, const LoopModeSet& modes);

}  // namespace scpm
