#pragma once

// Small dense exact linear algebra over the rationals.

#include "exact.hpp"

#include <optional>
#include <vector>

namespace bramsey {

using RationalMatrix = std::vector<RationalVector>;

inline RationalMatrix identity_matrix(std::size_t n) {
    RationalMatrix m(n, RationalVector(n, Rational(0)));
    for (std::size_t i = 0; i < n; ++i) m[i][i] = 1;
    return m;
}

inline RationalMatrix multiply(const RationalMatrix& a, const RationalMatrix& b) {
    const std::size_t rows = a.size();
    const std::size_t inner = b.size();
    const std::size_t cols = inner ? b[0].size() : 0;
    RationalMatrix c(rows, RationalVector(cols, Rational(0)));
    for (std::size_t i = 0; i < rows; ++i)
        for (std::size_t k = 0; k < inner; ++k) {
            if (a[i][k] == 0) continue;
            for (std::size_t j = 0; j < cols; ++j) c[i][j] += a[i][k] * b[k][j];
        }
    return c;
}

inline RationalVector multiply(const RationalMatrix& a, const RationalVector& x) {
    RationalVector y(a.size(), Rational(0));
    for (std::size_t i = 0; i < a.size(); ++i) y[i] = dot(a[i], x);
    return y;
}

inline RationalMatrix transpose(const RationalMatrix& a) {
    if (a.empty()) return {};
    RationalMatrix t(a[0].size(), RationalVector(a.size()));
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < a[i].size(); ++j) t[j][i] = a[i][j];
    return t;
}

/// Gauss-Jordan inverse; nullopt when singular.
inline std::optional<RationalMatrix> inverse(RationalMatrix a) {
    const std::size_t n = a.size();
    RationalMatrix inv = identity_matrix(n);
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t pivot = col;
        while (pivot < n && a[pivot][col] == 0) ++pivot;
        if (pivot == n) return std::nullopt;
        std::swap(a[pivot], a[col]);
        std::swap(inv[pivot], inv[col]);
        const Rational scale = 1 / a[col][col];
        for (std::size_t j = 0; j < n; ++j) {
            a[col][j] *= scale;
            inv[col][j] *= scale;
        }
        for (std::size_t row = 0; row < n; ++row) {
            if (row == col || a[row][col] == 0) continue;
            const Rational f = a[row][col];
            for (std::size_t j = 0; j < n; ++j) {
                a[row][j] -= f * a[col][j];
                inv[row][j] -= f * inv[col][j];
            }
        }
    }
    return inv;
}

/// Solves a x = b for square invertible a.
inline std::optional<RationalVector> solve(const RationalMatrix& a, const RationalVector& b) {
    auto inv = inverse(a);
    if (!inv) return std::nullopt;
    return multiply(*inv, b);
}

}  // namespace bramsey
