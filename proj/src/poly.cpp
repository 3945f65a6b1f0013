#include "scpm/poly.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>

namespace scpm {

int CPoly::degree(double tol) const {
    double scale = 0.0;
    for (const auto& z : c) scale = std::max(scale, std::abs(z));
    if (scale == 0.0) return -1;
    for (int k = static_cast<int>(c.size()) - 1; k >= 0; --k)
        if (std::abs(c[k]) > tol * scale) return k;
    return -1;
}

cd CPoly::eval(cd x) const {
    cd r = 0.0;
    for (int k = static_cast<int>(c.size()) - 1; k >= 0; --k) r = r * x + c[k];
    return r;
}

CPoly CPoly::trimmed(double tol) const {
    int d = degree(tol);
    return CPoly(std::vector<cd>(c.begin(), c.begin() + (d + 1)));
}

CPoly operator*(const CPoly& a, const CPoly& b) {
    if (a.c.empty() || b.c.empty()) return CPoly{};
    std::vector<cd> r(a.c.size() + b.c.size() - 1, cd(0.0));
    for (size_t i = 0; i < a.c.size(); ++i)
        for (size_t j = 0; j < b.c.size(); ++j) r[i + j] += a.c[i] * b.c[j];
    return CPoly(std::move(r));
}

CPoly operator+(const CPoly& a, const CPoly& b) {
    std::vector<cd> r(std::max(a.c.size(), b.c.size()), cd(0.0));
    for (size_t i = 0; i < a.c.size(); ++i) r[i] += a.c[i];
    for (size_t i = 0; i < b.c.size(); ++i) r[i] += b.c[i];
    return CPoly(std::move(r));
}

CPoly poly_fit(const std::vector<cd>& nodes, const std::vector<cd>& values, int degree,
               double* cond_out) {
    if (nodes.size() != values.size()) throw std::invalid_argument("poly_fit: size mismatch");
    if (static_cast<int>(nodes.size()) < degree + 1)
        throw std::invalid_argument("poly_fit: not enough nodes");
    for (size_t i = 0; i < nodes.size(); ++i)
        for (size_t j = i + 1; j < nodes.size(); ++j)
            if (std::abs(nodes[i] - nodes[j]) < 1e-13)
                throw std::invalid_argument("poly_fit: repeated node");
    Mat V(nodes.size(), degree + 1);
    Vec rhs(nodes.size());
    for (size_t i = 0; i < nodes.size(); ++i) {
        cd p = 1.0;
        for (int k = 0; k <= degree; ++k) {
            V(i, k) = p;
            p *= nodes[i];
        }
        rhs(i) = values[i];
    }
    Eigen::JacobiSVD<Mat> svd(V, Eigen::ComputeThinU | Eigen::ComputeThinV);
    if (cond_out) {
        double smin = svd.singularValues().minCoeff();
        *cond_out = smin > 0 ? svd.singularValues().maxCoeff() / smin : 1e300;
    }
    Vec x = svd.solve(rhs);
    return CPoly(std::vector<cd>(x.data(), x.data() + x.size()));
}

std::vector<cd> poly_roots(const CPoly& p) {
    int d = p.degree();
    if (d < 0) throw std::invalid_argument("poly_roots: zero polynomial");
    if (d == 0) return {};
    Mat C = Mat::Zero(d, d);
    for (int i = 1; i < d; ++i) C(i, i - 1) = 1.0;
    for (int i = 0; i < d; ++i) C(i, d - 1) = -p.c[i] / p.c[d];
    Eigen::ComplexEigenSolver<Mat> es(C, false);
    std::vector<cd> roots(es.eigenvalues().data(), es.eigenvalues().data() + d);
    std::sort(roots.begin(), roots.end(), [](cd a, cd b) {
        double aa = std::arg(a), ab = std::arg(b);
        if (std::abs(aa - ab) > 1e-10) return aa < ab;
        return std::abs(a) < std::abs(b);
    });
    return roots;
}

CPoly poly_from_roots(const std::vector<cd>& roots, cd lead) {
    CPoly p({lead});
    for (cd r : roots) p = p * CPoly({-r, cd(1.0)});
    return p;
}

std::vector<cd> interp_nodes(int n, double radius, double offset) {
    std::vector<cd> out(n);
    for (int j = 0; j < n; ++j) {
        // Incommensurate radial stretch keeps the set free of omega-orbit pairs.
        double rj = radius * (1.0 + 0.15 * j / std::max(1, n));
        double a = 2.0 * pi * j / n + offset;
        out[j] = rj * cd(std::cos(a), std::sin(a));
    }
    return out;
}

}  // namespace scpm
