// Onsager-sector eigenvector machinery: energies E(s;k'), angle functions,
// the coherent basic eigenvector basis u(s), trigonometric synthesis of the
// k'-dependent families, direct-diagonalization cross-checks, and the duality
// and spin-inversion vector correspondences.
#pragma once

#include "scpm/sector.hpp"

namespace scpm {

// sqrt(1 + k'^2 - 2 k' cos(theta)), the quasi-energy of one mode.
double epsilon_fn(double theta, double kprime);

struct Angles {
    double vartheta;  // 2 pi + Arg(1 - k' e^{i theta})
    double phi;       // vartheta for k' > 0, vartheta - pi for k' < 0
};

// Angle functions of one mode; phi is undefined at k' = 0.
Angles angle_fn(double theta, double kprime);

// Sign vectors are encoded as bit masks over the ascending-theta mode index:
// bit i set means s_i = +1.
inline int sign_of(unsigned mask, int i) { return (mask >> i) & 1 ? 1 : -1; }

// Sign mask of the inversion partner: s maps to -s, and theta' = pi - theta
// reverses the ascending-theta mode order, so flip every bit and reverse them.
inline unsigned inversion_mask(unsigned smask, int mE) {
    unsigned out = 0;
    for (int i = 0; i < mE; ++i)
        if (!((smask >> i) & 1)) out |= 1u << (mE - 1 - i);
    return out;
}

struct Energy {
    double E;       // alpha + k' beta + N sum s_i eps(theta_i; k')
    double Etilde;  // alpha + k' beta + N sgn(k') sum s_i eps(theta_i; k')
};

Energy energy(const Sector& sec, unsigned smask, double kprime);

// Coherent basic eigenvector family: w(s; infinity) (w_kind) or v(s; 0),
// vectors in sector coordinates indexed by sign mask.
struct VectorFamily {
    bool w_kind = true;
    std::vector<Vec> u;
};

// Isometry of the sector's (r, Q) charge space (difference basis).
Mat sector_isometry(const Sector& sec);

// H(k') = H0 + k' H1 in sector coordinates.
Mat sector_hamiltonian(const Sector& sec, double kprime);

// Builds the coherent u-basis: simultaneous eigenbasis of H1 and the
// block-diagonal part of H0 on the frame (roles swapped for v-kind), with
// relative phases fixed by the single-flip matrix elements -N sin(theta_i)
// (w-kind, H0) or +N sin(theta_i) (v-kind, H1) and certified on every
// hypercube edge.
VectorFamily u_basis(const Sector& sec, bool w_kind);

struct LabeledVectors {
    std::vector<Vec> v;   // sector coordinates, indexed by sign mask
    double kprime_used;   // input k' possibly perturbed to separate energies
};

// Diagonalizes H(k') on the sector frame and labels eigenvectors by the
// nearest predicted energy E(s;k'); phases make the largest coordinate
// real positive.
LabeledVectors direct_eigvectors(const Sector& sec, double kprime);

// w(s;k') or v(s;k') from the u-basis by the product-of-sines rotation.
Vec synthesize(const Sector& sec, const VectorFamily& fam, unsigned smask, double kprime);

struct DualityVectorCheck {
    double max_tau_residual;   // Psi tau2 Psi^{-1} identity on sector coords
    double max_H_residual;     // H(k') = k' Psi^{-1} H*(1/k') Psi
    double max_unit_defect;    // | |phase| - 1 | over sign masks
    std::vector<cd> phases;    // measured Psi w(s;k') / v*(s;1/k') per mask
};

// Certifies the duality correspondence between a sector of the (r, Q) space
// and its dual in the (Q, r) space, and measures the vector-map phases.
DualityVectorCheck duality_vectors(const Sector& sec, const Sector& dual, double kprime);

struct InversionVectorCheck {
    double min_overlap;  // |<mapped, partner family>| over sign masks
};

// Certifies the spin-inversion correspondence with the partner sector:
// I-kind uses j directly on w-vectors, i-kind uses j* = Psi^{-1} j Psi on
// v-vectors; s maps to -s and k' to -k'.
InversionVectorCheck inversion_vectors(const Sector& sec, const Sector& partner, double kprime,
                                       bool i_kind);

}  // namespace scpm
