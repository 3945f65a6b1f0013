// First-order forward-mode derivative carriers in two independent directions:
// the logarithmic derivatives s d/ds and q d/dq of complex scalars and matrices.
#pragma once

#include "scpm/common.hpp"

namespace scpm {

struct Jet {
    cd v{0.0};   // value
    cd ds{0.0};  // s d/ds part
    cd dq{0.0};  // q d/dq part

    Jet() = default;
    Jet(cd value) : v(value) {}
    Jet(cd value, cd dsv, cd dqv) : v(value), ds(dsv), dq(dqv) {}

    // The spectral variable itself: s d/ds s = s.
    static Jet var_s(cd s) { return {s, s, 0.0}; }

    friend Jet operator+(const Jet& a, const Jet& b) { return {a.v + b.v, a.ds + b.ds, a.dq + b.dq}; }
    friend Jet operator-(const Jet& a, const Jet& b) { return {a.v - b.v, a.ds - b.ds, a.dq - b.dq}; }
    friend Jet operator-(const Jet& a) { return {-a.v, -a.ds, -a.dq}; }
    friend Jet operator*(const Jet& a, const Jet& b) {
        return {a.v * b.v, a.ds * b.v + a.v * b.ds, a.dq * b.v + a.v * b.dq};
    }
    friend Jet operator/(const Jet& a, const Jet& b) {
        cd iv = 1.0 / b.v;
        cd q = a.v * iv;
        return {q, (a.ds - q * b.ds) * iv, (a.dq - q * b.dq) * iv};
    }
};

inline Jet jpow(const Jet& a, int n) {
    if (n < 0) return Jet(1.0) / jpow(a, -n);
    Jet r(1.0), b = a;
    int e = n;
    while (e > 0) {
        if (e & 1) r = r * b;
        b = b * b;
        e >>= 1;
    }
    return r;
}

// Matrix with the same two derivative directions. Representation matrices embed
// as constants (zero ds and dq parts).
struct JetMat {
    Mat v, ds, dq;

    JetMat() = default;
    explicit JetMat(const Mat& value)
        : v(value), ds(Mat::Zero(value.rows(), value.cols())), dq(Mat::Zero(value.rows(), value.cols())) {}
    JetMat(Mat value, Mat dsv, Mat dqv) : v(std::move(value)), ds(std::move(dsv)), dq(std::move(dqv)) {}

    static JetMat zero(long n) { return JetMat(Mat::Zero(n, n)); }

    friend JetMat operator+(const JetMat& a, const JetMat& b) { return {a.v + b.v, a.ds + b.ds, a.dq + b.dq}; }
    friend JetMat operator-(const JetMat& a, const JetMat& b) { return {a.v - b.v, a.ds - b.ds, a.dq - b.dq}; }
    friend JetMat operator*(const JetMat& a, const JetMat& b) {
        return {a.v * b.v, a.ds * b.v + a.v * b.ds, a.dq * b.v + a.v * b.dq};
    }
    friend JetMat operator*(const Jet& a, const JetMat& b) {
        return {a.v * b.v, a.ds * b.v + a.v * b.ds, a.dq * b.v + a.v * b.dq};
    }
};

}  // namespace scpm
