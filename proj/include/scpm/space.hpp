// Operator wrapper carrying a space tag (full chain or charge-sector coordinates)
// so compositions between incompatible frames are rejected early.
#pragma once

#include "scpm/common.hpp"

namespace scpm {

struct Space {
    enum class Kind { Full, Sector } kind{Kind::Full};
    int N{0}, L{0};
    int r{0}, Q{0};
    long dim{0};

    static Space full(int N, int L) { return {Kind::Full, N, L, 0, 0, ipow(N, L)}; }
    static Space sector(int N, int L, int r, int Q) { return {Kind::Sector, N, L, r, Q, ipow(N, L - 1)}; }

    bool compatible(const Space& o) const {
        return kind == o.kind && N == o.N && L == o.L && dim == o.dim &&
               (kind == Kind::Full || (r == o.r && Q == o.Q));
    }
};

struct Operator {
    Mat mat;
    Space space;

    Operator() = default;
    Operator(Mat m, Space s) : mat(std::move(m)), space(s) {
        if (mat.rows() != mat.cols() || mat.rows() != space.dim)
            throw std::invalid_argument("Operator: matrix does not match space tag");
    }

    friend Operator operator*(const Operator& a, const Operator& b) {
        if (!a.space.compatible(b.space))
            throw std::invalid_argument("Operator: incompatible space tags");
        return {a.mat * b.mat, a.space};
    }
};

}  // namespace scpm
