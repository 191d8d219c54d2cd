#pragma once

// Coefficients of the four-term recurrence
//
//   A_n h_{n+1} + B_n h_n + C_n h_{n-1} + D_n h_{n-2} = 0,   n = 0..N,
//
//   A_n = (2n+2)(2n+2-2M)        B_n = E - beta (4n+2-2M)
//   C_n = beta^2 - d - alpha(4n-2M)   D_n = 4(N+1-n)
//
// and the banded matrices assembled from it. Every function is templated on
// the entry type so that E and d can be numbers, rationals, or polynomial
// indeterminates.

#include <Eigen/Core>
#include <array>
#include <stdexcept>
#include <vector>

#include "qes/model.hpp"
#include "qes/polynomial.hpp"

namespace qes {

template <class T>
using DenseMatrix = Eigen::Matrix<T, Eigen::Dynamic, Eigen::Dynamic>;

template <class T>
struct BaseScalar {
    using type = T;
};
template <class T>
struct BaseScalar<Poly<T>> {
    using type = typename BaseScalar<T>::type;
};
template <class T>
struct BaseScalar<BiPoly<T>> {
    using type = typename BaseScalar<T>::type;
};
template <class T>
using base_scalar_t = typename BaseScalar<T>::type;

/// Embed an integer constant into T.
template <class T>
T constant(long v) {
    return T(base_scalar_t<T>(v));
}

/// Embed a spec parameter (double or rational) into T.
template <class T, class S>
T lift(const S& s) {
    return T(scalar_cast<base_scalar_t<T>>(s));
}

template <class T>
struct RecurrenceCoeffs {
    T a, b, c, d;
};

namespace detail {

template <class T, class S>
RecurrenceCoeffs<T> recurrence_row(const BasicModelSpec<S>& spec, int n, const T& energy, const T& coupling) {
    const long m2 = 2L * spec.big_m;
    const T alpha = lift<T>(spec.alpha);
    const T beta = lift<T>(spec.beta);
    RecurrenceCoeffs<T> k;
    k.a = constant<T>((2L * n + 2) * (2L * n + 2 - m2));
    k.b = energy - beta * constant<T>(4L * n + 2 - m2);
    k.c = beta * beta - coupling - alpha * constant<T>(4L * n - m2);
    k.d = constant<T>(4L * (spec.n_states + 1 - n));
    return k;
}

}  // namespace detail

/// A_n, B_n, C_n, D_n for 0 <= n <= N. Throws std::out_of_range otherwise.
template <class T, class S>
RecurrenceCoeffs<T> coeffs(const BasicModelSpec<S>& spec, int n, const T& energy, const T& coupling) {
    if (n < 0 || n > spec.n_states) throw std::out_of_range("recurrence index n outside 0..N");
    return detail::recurrence_row(spec, n, energy, coupling);
}

/// Square matrix with four adjacent diagonals. `lower` is the number of
/// sub-diagonals: 1 gives the upper-Hessenberg shape of the main secular
/// matrix (sub, diag, sup1, sup2), 2 gives the shape of the small
/// pre-conditioning matrix (sub2, sub1, diag, sup1). Band k holds the entries
/// (i, i + k - lower).
template <class T>
class QuadDiagonalMatrix {
public:
    QuadDiagonalMatrix() = default;
    explicit QuadDiagonalMatrix(int size, int lower = 1) : size_(size), lower_(lower) {
        if (size < 1) throw std::invalid_argument("QuadDiagonalMatrix: size must be positive");
        if (lower != 1 && lower != 2) throw std::invalid_argument("QuadDiagonalMatrix: lower bandwidth must be 1 or 2");
        for (int k = 0; k < 4; ++k)
            bands_[k].assign(static_cast<std::size_t>(std::max(0, size - std::abs(offset(k)))), ScalarTraits<T>::zero());
    }

    int size() const { return size_; }
    int lower_bandwidth() const { return lower_; }
    bool is_upper_hessenberg() const { return lower_ == 1; }
    int offset(int band) const { return band - lower_; }

    const std::vector<T>& band(int k) const { return bands_[k]; }

    // Named bands of the upper-Hessenberg layout.
    const std::vector<T>& sub() const { return hessenberg_band(0); }
    const std::vector<T>& diag() const { return hessenberg_band(1); }
    const std::vector<T>& sup1() const { return hessenberg_band(2); }
    const std::vector<T>& sup2() const { return hessenberg_band(3); }

    bool in_band(int i, int j) const {
        const int off = j - i;
        return i >= 0 && j >= 0 && i < size_ && j < size_ && off >= -lower_ && off <= 3 - lower_;
    }

    T at(int i, int j) const {
        if (i < 0 || j < 0 || i >= size_ || j >= size_) throw std::out_of_range("QuadDiagonalMatrix::at");
        if (!in_band(i, j)) return ScalarTraits<T>::zero();
        const int k = j - i + lower_;
        return bands_[k][static_cast<std::size_t>(std::min(i, j))];
    }

    void set(int i, int j, const T& v) {
        if (!in_band(i, j)) throw std::out_of_range("QuadDiagonalMatrix::set outside the four bands");
        const int k = j - i + lower_;
        bands_[k][static_cast<std::size_t>(std::min(i, j))] = v;
    }

    DenseMatrix<T> dense() const {
        DenseMatrix<T> m(size_, size_);
        for (int i = 0; i < size_; ++i)
            for (int j = 0; j < size_; ++j) m(i, j) = at(i, j);
        return m;
    }

    QuadDiagonalMatrix transpose() const {
        QuadDiagonalMatrix t(size_, 3 - lower_);
        for (int i = 0; i < size_; ++i)
            for (int j = 0; j < size_; ++j)
                if (in_band(i, j)) t.set(j, i, at(i, j));
        return t;
    }

    /// Entry-wise map into another ring.
    template <class F>
    auto map(F&& fn) const {
        using U = decltype(fn(std::declval<const T&>()));
        QuadDiagonalMatrix<U> out(size_, lower_);
        for (int i = 0; i < size_; ++i)
            for (int j = 0; j < size_; ++j)
                if (in_band(i, j)) out.set(i, j, fn(at(i, j)));
        return out;
    }

private:
    const std::vector<T>& hessenberg_band(int k) const {
        if (lower_ != 1) throw std::logic_error("named bands are defined for the upper-Hessenberg layout only");
        return bands_[k];
    }

    int size_ = 0;
    int lower_ = 1;
    std::array<std::vector<T>, 4> bands_;
};

/// N x N matrix of rows n = 1..N over h_0..h_{N-1}: row n holds D_n, C_n,
/// B_n, A_n at columns n-2, n-1, n, n+1; columns outside 0..N-1 dropped.
template <class T, class S>
QuadDiagonalMatrix<T> main_matrix(const BasicModelSpec<S>& spec, const T& energy, const T& coupling) {
    spec.validate();
    const int n_states = spec.n_states;
    QuadDiagonalMatrix<T> m(n_states, 1);
    for (int n = 1; n <= n_states; ++n) {
        const auto k = detail::recurrence_row(spec, n, energy, coupling);
        const int row = n - 1;
        if (n - 2 >= 0) m.set(row, n - 2, k.d);
        m.set(row, n - 1, k.c);
        if (n < n_states) m.set(row, n, k.b);
        if (n + 1 < n_states) m.set(row, n + 1, k.a);
    }
    return m;
}

/// M x M matrix of rows n = 0..M-1 over h_0..h_{M-1}. Closed because
/// A_{M-1} = 0.
template <class T, class S>
QuadDiagonalMatrix<T> small_matrix(const BasicModelSpec<S>& spec, const T& energy, const T& coupling) {
    spec.validate();
    const int big_m = spec.big_m;
    QuadDiagonalMatrix<T> m(big_m, 2);
    for (int n = 0; n < big_m; ++n) {
        const auto k = detail::recurrence_row(spec, n, energy, coupling);
        if (n - 2 >= 0) m.set(n, n - 2, k.d);
        if (n - 1 >= 0) m.set(n, n - 1, k.c);
        m.set(n, n, k.b);
        if (n + 1 < big_m) m.set(n, n + 1, k.a);
    }
    return m;
}

/// All N+1 recurrence rows n = 0..N as an (N+1) x N matrix over h_0..h_{N-1}.
template <class T, class S>
DenseMatrix<T> full_system(const BasicModelSpec<S>& spec, const T& energy, const T& coupling) {
    spec.validate();
    const int n_states = spec.n_states;
    DenseMatrix<T> m(n_states + 1, n_states);
    for (int i = 0; i <= n_states; ++i)
        for (int j = 0; j < n_states; ++j) m(i, j) = ScalarTraits<T>::zero();
    for (int n = 0; n <= n_states; ++n) {
        const auto k = detail::recurrence_row(spec, n, energy, coupling);
        const std::array<std::pair<int, const T*>, 4> entries{
            {{n - 2, &k.d}, {n - 1, &k.c}, {n, &k.b}, {n + 1, &k.a}}};
        for (const auto& [col, value] : entries)
            if (col >= 0 && col < n_states) m(n, col) = *value;
    }
    return m;
}

}  // namespace qes
