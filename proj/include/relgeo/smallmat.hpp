#pragma once

#include <array>
#include <cassert>

#include "relgeo/dscalar.hpp"

namespace relgeo {

// Dense k x k matrix over double or D2, k <= kMaxAmbient. Cofactor-based
// determinant and adjugate inverse; the sizes here never exceed 5.
template <class T>
struct SmallMat {
    int k = 0;
    std::array<T, kMaxAmbient * kMaxAmbient> a{};

    const T& operator()(int i, int j) const { return a[static_cast<std::size_t>(i * kMaxAmbient + j)]; }
    T& operator()(int i, int j) { return a[static_cast<std::size_t>(i * kMaxAmbient + j)]; }
};

using MatD = SmallMat<double>;
using MatD2 = SmallMat<D2>;

namespace detail {

// determinant of the submatrix given by row >= r and the columns whose bit
// is clear in colmask (Laplace expansion along the first remaining row)
template <class T>
T det_rec(const SmallMat<T>& m, int r, unsigned colmask, const T& one) {
    if (r == m.k) return one;
    T acc{};
    bool first = true;
    int sign = 1;
    for (int c = 0; c < m.k; ++c) {
        if (colmask & (1u << c)) continue;
        T term = m(r, c) * det_rec(m, r + 1, colmask | (1u << c), one);
        if (sign < 0) term = -term;
        if (first) {
            acc = term;
            first = false;
        } else {
            acc += term;
        }
        sign = -sign;
    }
    return acc;
}

} // namespace detail

template <class T>
T det(const SmallMat<T>& m, const T& one) {
    assert(m.k >= 1 && m.k <= kMaxAmbient);
    return detail::det_rec(m, 0, 0u, one);
}

inline double det(const MatD& m) { return det(m, 1.0); }

// minor with row i and column j removed
template <class T>
SmallMat<T> submatrix(const SmallMat<T>& m, int i, int j) {
    SmallMat<T> s;
    s.k = m.k - 1;
    int r = 0;
    for (int p = 0; p < m.k; ++p) {
        if (p == i) continue;
        int c = 0;
        for (int q = 0; q < m.k; ++q) {
            if (q == j) continue;
            s(r, c) = m(p, q);
            ++c;
        }
        ++r;
    }
    return s;
}

// inverse via adjugate / determinant; caller guarantees invertibility
template <class T>
SmallMat<T> inverse(const SmallMat<T>& m, const T& one) {
    SmallMat<T> inv;
    inv.k = m.k;
    T d = det(m, one);
    for (int i = 0; i < m.k; ++i) {
        for (int j = 0; j < m.k; ++j) {
            T cof = det(submatrix(m, j, i), one);
            if (((i + j) & 1) != 0) cof = -cof;
            inv(i, j) = cof / d;
        }
    }
    return inv;
}

inline MatD inverse(const MatD& m) { return inverse(m, 1.0); }

// leading-principal-minor test (Sylvester) for positive definiteness
inline bool positive_definite(const MatD& m) {
    for (int k = 1; k <= m.k; ++k) {
        MatD lead;
        lead.k = k;
        for (int i = 0; i < k; ++i)
            for (int j = 0; j < k; ++j) lead(i, j) = m(i, j);
        if (det(lead) <= 0.0) return false;
    }
    return true;
}

inline MatD values(const MatD2& m) {
    MatD r;
    r.k = m.k;
    for (int i = 0; i < m.k; ++i)
        for (int j = 0; j < m.k; ++j) r(i, j) = m(i, j).v();
    return r;
}

} // namespace relgeo
