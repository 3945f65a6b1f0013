// Dense complex polynomials: evaluation, arithmetic, least-squares fitting on
// sample nodes, and root finding through companion-matrix eigenvalues.
#pragma once

#include "scpm/common.hpp"

namespace scpm {

struct CPoly {
    std::vector<cd> c;  // c[k] multiplies x^k

    CPoly() = default;
    explicit CPoly(std::vector<cd> coeffs) : c(std::move(coeffs)) {}
    static CPoly one() { return CPoly({cd(1.0)}); }

    int degree(double tol = 1e-12) const;
    cd eval(cd x) const;
    CPoly trimmed(double tol = 1e-12) const;

    friend CPoly operator*(const CPoly& a, const CPoly& b);
    friend CPoly operator+(const CPoly& a, const CPoly& b);
};

// Least-squares polynomial fit of the given degree; throws on repeated nodes.
// If cond_out is non-null it receives a condition estimate of the Vandermonde system.
CPoly poly_fit(const std::vector<cd>& nodes, const std::vector<cd>& values, int degree,
               double* cond_out = nullptr);

// Roots via the companion matrix of the monic normalization.
std::vector<cd> poly_roots(const CPoly& p);

// Monic polynomial with the given roots, scaled by lead.
CPoly poly_from_roots(const std::vector<cd>& roots, cd lead = 1.0);

// Default interpolation nodes: radius * exp(i(2*pi*j/n + offset)) with an offset chosen so
// the node set contains no pair related by multiplication by an N-th root of unity.
std::vector<cd> interp_nodes(int n, double radius = 1.0, double offset = 0.37215);

}  // namespace scpm
