#include "scpm/weyl.hpp"

#include <unsupported/Eigen/KroneckerProduct>

namespace scpm {

namespace {

void check_N(int N) {
    if (N < 3 || N % 2 == 0) throw std::invalid_argument("N must be odd and >= 3");
}

// Digits of a full-space basis index, site 1 most significant.
std::vector<int> digits(long idx, int N, int L) {
    std::vector<int> d(L);
    for (int l = L - 1; l >= 0; --l) {
        d[l] = static_cast<int>(idx % N);
        idx /= N;
    }
    return d;
}

long index_of(const std::vector<int>& d, int N) {
    long idx = 0;
    for (int x : d) idx = idx * N + x;
    return idx;
}

}  // namespace

Mat weyl_X(int N) {
    check_N(N);
    Mat X = Mat::Zero(N, N);
    for (int s = 0; s < N; ++s) X((s + 1) % N, s) = 1.0;
    return X;
}

Mat weyl_Z(int N) {
    check_N(N);
    Mat Z = Mat::Zero(N, N);
    for (int s = 0; s < N; ++s) Z(s, s) = omega_root(N, s);
    return Z;
}

Mat fourier(int N) {
    check_N(N);
    Mat F(N, N);
    double inv = 1.0 / std::sqrt(static_cast<double>(N));
    for (int s = 0; s < N; ++s)
        for (int k = 0; k < N; ++k) F(s, k) = omega_root(N, -static_cast<long long>(k) * s) * inv;
    return F;
}

Mat site_lift(const Mat& op, int l, int L) {
    if (l < 1 || l > L) throw std::invalid_argument("site_lift: site out of range");
    long nl = op.rows();
    Mat left = Mat::Identity(ipow(nl, l - 1), ipow(nl, l - 1));
    Mat right = Mat::Identity(ipow(nl, L - l), ipow(nl, L - l));
    return Eigen::kroneckerProduct(left, Eigen::kroneckerProduct(op, right).eval()).eval();
}

Mat spin_shift(int N, int L) {
    Mat S = Mat::Identity(ipow(N, L), ipow(N, L));
    Mat X = weyl_X(N);
    for (int l = 1; l <= L; ++l) S = site_lift(X, l, L) * S;
    return S;
}

Mat translation(int N, int L, int r) {
    long dim = ipow(N, L);
    Mat S = Mat::Zero(dim, dim);
    for (long idx = 0; idx < dim; ++idx) {
        auto d = digits(idx, N, L);
        std::vector<int> e(L);
        for (int l = 0; l + 1 < L; ++l) e[l] = d[l + 1];
        e[L - 1] = imod(d[0] - r, N);
        S(index_of(e, N), idx) = 1.0;
    }
    return S;
}

SectorBasisMap sector_basis(int N, int L, int r, int Q, BasisKind kind) {
    check_N(N);
    long dim = ipow(N, L), cols = ipow(N, L - 1);
    Mat V = Mat::Zero(dim, cols);
    Mat F = fourier(N);
    double inv = 1.0 / std::sqrt(static_cast<double>(N));
    int constraint = (kind == BasisKind::difference) ? r : Q;
    for (long cidx = 0; cidx < cols; ++cidx) {
        auto n = digits(cidx, N, L - 1);
        int sum = 0;
        for (int x : n) sum += x;
        n.push_back(imod(constraint - sum, N));
        if (kind == BasisKind::difference) {
            std::vector<int> sig(L);
            for (int s1 = 0; s1 < N; ++s1) {
                sig[0] = s1;
                for (int l = 1; l < L; ++l) sig[l] = imod(sig[l - 1] - n[l - 1], N);
                V(index_of(sig, N), cidx) += omega_root(N, -static_cast<long long>(Q) * s1) * inv;
            }
        } else {
            Vec col = F.col(n[0]);
            for (int l = 1; l < L; ++l) {
                Vec next(col.size() * N);
                for (long i = 0; i < col.size(); ++i) next.segment(i * N, N) = col(i) * F.col(n[l]);
                col = next;
            }
            V.col(cidx) = col;
        }
    }
    return {N, L, r, Q, kind, V};
}

Mat duality_psi(int N, int L, int r, int Q) {
    Mat Vf = sector_basis(N, L, Q, r, BasisKind::fourier).isometry;
    Mat Vd = sector_basis(N, L, r, Q, BasisKind::difference).isometry;
    return Vf * Vd.adjoint();
}

Mat spin_inversion(int N, int L, int m) {
    long dim = ipow(N, L);
    Mat J = Mat::Zero(dim, dim);
    for (long idx = 0; idx < dim; ++idx) {
        auto d = digits(idx, N, L);
        long long sum = 0;
        std::vector<int> e(L);
        for (int l = 0; l < L; ++l) {
            sum += d[l];
            e[L - 1 - l] = imod(-d[l], N);
        }
        J(index_of(e, N), idx) = omega_root(N, -(1 + 2LL * m) * sum);
    }
    return J;
}

}  // namespace scpm
