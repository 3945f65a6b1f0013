// Shared numeric aliases and tolerances for the superintegrable chiral Potts toolkit.
#pragma once

#include <Eigen/Dense>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace scpm {

using cd = std::complex<double>;
using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;

inline constexpr double pi = std::numbers::pi;

// Global identity tolerance (scaled by matrix 1-norm) and grouping tolerance.
inline constexpr double tol_id = 1e-9;
inline constexpr double tol_grp = 1e-6;

inline cd omega_root(int N, long long k = 1) {
    double a = 2.0 * pi * static_cast<double>(k) / static_cast<double>(N);
    return {std::cos(a), std::sin(a)};
}

// 1-norm based scale, floored at 1 so tolerances behave for tiny matrices.
inline double mat_scale(const Mat& A) {
    double s = A.cwiseAbs().colwise().sum().maxCoeff();
    return std::max(1.0, s);
}

inline double rel_norm(const Mat& A, const Mat& B) {
    return (A - B).cwiseAbs().maxCoeff() / std::max(mat_scale(A), mat_scale(B));
}

inline long long ipow(long long b, int e) {
    long long r = 1;
    for (int i = 0; i < e; ++i) r *= b;
    return r;
}

inline int imod(long long a, int N) {
    long long r = a % N;
    return static_cast<int>(r < 0 ? r + N : r);
}

}  // namespace scpm
