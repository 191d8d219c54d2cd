#pragma once

// Determinants over commutative rings: the banded leading-minor recurrence,
// Berkowitz's division-free algorithm for dense matrices, fraction-free
// Bareiss elimination over Q[x], and Sylvester resultants.

#include <stdexcept>
#include <utility>
#include <vector>

#include "qes/polynomial.hpp"
#include "qes/recurrence.hpp"

namespace qes {

/// Raised when a resultant is undefined or vanishes identically.
class DegenerateResultant : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Determinant of an upper-Hessenberg four-band matrix by leading principal
/// minors:
///   p_k = m_kk p_{k-1} - sup1 sub p_{k-2} + sup2 sub sub p_{k-3}.
/// Division-free, so it is exact over any commutative ring. Matrices with two
/// sub-diagonals are handled through their transpose.
template <class T>
T determinant(const QuadDiagonalMatrix<T>& m) {
    if (!m.is_upper_hessenberg()) return determinant(m.transpose());
    const int n = m.size();
    const auto& sub = m.sub();
    const auto& diag = m.diag();
    const auto& sup1 = m.sup1();
    const auto& sup2 = m.sup2();
    std::vector<T> p(static_cast<std::size_t>(n) + 1, ScalarTraits<T>::zero());
    p[0] = ScalarTraits<T>::one();
    for (int k = 1; k <= n; ++k) {
        T acc = diag[k - 1] * p[k - 1];
        if (k >= 2) acc = acc - sup1[k - 2] * sub[k - 2] * p[k - 2];
        if (k >= 3) acc = acc + sup2[k - 3] * sub[k - 3] * sub[k - 2] * p[k - 3];
        p[k] = acc;
    }
    return p[n];
}

/// det(m - x I) as a polynomial in x.
template <class T>
Poly<T> char_poly(const QuadDiagonalMatrix<T>& m) {
    const int n = m.size();
    QuadDiagonalMatrix<Poly<T>> shifted(n, m.lower_bandwidth());
    for (int i = 0; i < n; ++i)
        for (int j = std::max(0, i - m.lower_bandwidth()); j < n && j <= i + 3 - m.lower_bandwidth(); ++j) {
            Poly<T> e(m.at(i, j));
            if (i == j) e = e - Poly<T>::x();
            shifted.set(i, j, e);
        }
    return determinant(shifted);
}

/// Exact determinant of a four-band matrix of bivariate polynomials in (E, d).
template <class T>
BiPoly<T> det_bipoly(const QuadDiagonalMatrix<BiPoly<T>>& m) {
    return determinant(m);
}

/// Berkowitz's algorithm: division-free determinant of a dense square matrix
/// over any commutative ring.
template <class T>
T berkowitz_determinant(const DenseMatrix<T>& a) {
    const Eigen::Index n = a.rows();
    if (a.cols() != n) throw std::invalid_argument("berkowitz_determinant: matrix must be square");
    if (n == 0) return ScalarTraits<T>::one();
    // coefficients of det(x I - A_r), highest power first
    std::vector<T> c{ScalarTraits<T>::one(), ScalarTraits<T>::zero() - a(0, 0)};
    for (Eigen::Index r = 1; r < n; ++r) {
        // column of the Toeplitz factor: 1, -a_rr, -R S, -R A S, ..., -R A^{r-1} S
        std::vector<T> col{ScalarTraits<T>::one(), ScalarTraits<T>::zero() - a(r, r)};
        std::vector<T> v(static_cast<std::size_t>(r));
        for (Eigen::Index i = 0; i < r; ++i) v[i] = a(i, r);
        for (Eigen::Index k = 0; k < r; ++k) {
            T rs = ScalarTraits<T>::zero();
            for (Eigen::Index j = 0; j < r; ++j) rs = rs + a(r, j) * v[j];
            col.push_back(ScalarTraits<T>::zero() - rs);
            if (k + 1 < r) {
                std::vector<T> w(static_cast<std::size_t>(r), ScalarTraits<T>::zero());
                for (Eigen::Index i = 0; i < r; ++i)
                    for (Eigen::Index j = 0; j < r; ++j) w[i] = w[i] + a(i, j) * v[j];
                v = std::move(w);
            }
        }
        std::vector<T> next(static_cast<std::size_t>(r) + 2, ScalarTraits<T>::zero());
        for (std::size_t i = 0; i < next.size(); ++i)
            for (std::size_t j = 0; j <= i && j < c.size(); ++j) next[i] = next[i] + col[i - j] * c[j];
        c = std::move(next);
    }
    T det = c.back();
    if (n % 2 == 1) det = ScalarTraits<T>::zero() - det;
    return det;
}

/// Fraction-free (Bareiss) elimination over Q[x]; every division is exact.
template <class T>
Poly<T> bareiss_determinant(DenseMatrix<Poly<T>> a) {
    const Eigen::Index n = a.rows();
    if (a.cols() != n) throw std::invalid_argument("bareiss_determinant: matrix must be square");
    if (n == 0) return Poly<T>(ScalarTraits<T>::one());
    bool negate = false;
    Poly<T> prev(ScalarTraits<T>::one());
    for (Eigen::Index k = 0; k + 1 < n; ++k) {
        if (a(k, k).is_zero()) {
            Eigen::Index pivot = k + 1;
            while (pivot < n && a(pivot, k).is_zero()) ++pivot;
            if (pivot == n) return Poly<T>();
            a.row(k).swap(a.row(pivot));
            negate = !negate;
        }
        for (Eigen::Index i = k + 1; i < n; ++i)
            for (Eigen::Index j = k + 1; j < n; ++j)
                a(i, j) = exact_div(a(k, k) * a(i, j) - a(i, k) * a(k, j), prev);
        prev = a(k, k);
        for (Eigen::Index i = k + 1; i < n; ++i) a(i, k) = Poly<T>();
    }
    Poly<T> det = a(n - 1, n - 1);
    return negate ? -det : det;
}

/// Sylvester matrix of p and q (coefficients in any ring R), highest powers
/// first in each row.
template <class R>
DenseMatrix<R> sylvester_matrix(const Poly<R>& p, const Poly<R>& q) {
    const int m = p.degree();
    const int n = q.degree();
    if (m < 1 || n < 1) throw DegenerateResultant("sylvester_matrix: both polynomials need positive degree");
    const int size = m + n;
    DenseMatrix<R> s(size, size);
    for (int i = 0; i < size; ++i)
        for (int j = 0; j < size; ++j) s(i, j) = ScalarTraits<R>::zero();
    for (int i = 0; i < n; ++i)
        for (int k = 0; k <= m; ++k) s(i, i + k) = p.coeff(m - k);
    for (int i = 0; i < m; ++i)
        for (int k = 0; k <= n; ++k) s(n + i, i + k) = q.coeff(n - k);
    return s;
}

/// Resultant of two bivariate polynomials with respect to one variable, as a
/// polynomial in the other. The resultant is defined up to sign; the sign is
/// fixed so that the leading coefficient is positive. Throws
/// DegenerateResultant when either input is constant in the eliminated
/// variable or the resultant vanishes identically (common factor).
template <class T>
Poly<T> resultant(const BiPoly<T>& p, const BiPoly<T>& q, Variable eliminate) {
    const auto pp = p.as_poly_in(eliminate);
    const auto qq = q.as_poly_in(eliminate);
    if (pp.degree() < 1 || qq.degree() < 1)
        throw DegenerateResultant("resultant: an input has degree zero in the eliminated variable");
    Poly<T> res = bareiss_determinant(sylvester_matrix(pp, qq));
    if (res.is_zero()) throw DegenerateResultant("resultant vanishes identically: the inputs share a common factor");
    if (res.leading() < 0) res = -res;
    return res;
}

}  // namespace qes
