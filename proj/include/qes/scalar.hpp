#pragma once

// Scalar traits shared by the exact (GMP rational) and floating-point code
// paths. Everything templated on a scalar goes through these helpers so that
// the same matrix and polynomial code serves double, std::complex<double>,
// mpq_class and the polynomial rings built on top of them.

#include <cmath>
#include <complex>
#include <gmpxx.h>
#include <type_traits>

namespace qes {

using Rational = mpq_class;
using Complex = std::complex<double>;

template <class T>
struct ScalarTraits {
    static T zero() { return T(0); }
    static T one() { return T(1); }
    static bool is_zero(const T& x) { return x == T(0); }
    static double magnitude(const T& x) { return std::abs(x); }
};

template <>
struct ScalarTraits<Rational> {
    static Rational zero() { return Rational(0); }
    static Rational one() { return Rational(1); }
    static bool is_zero(const Rational& x) { return sgn(x) == 0; }
    static double magnitude(const Rational& x) { return std::abs(x.get_d()); }
};

template <class T>
inline bool is_zero(const T& x) {
    return ScalarTraits<T>::is_zero(x);
}

template <class T>
inline double magnitude(const T& x) {
    return ScalarTraits<T>::magnitude(x);
}

/// Exact conversion of a double into a rational; every finite double is a
/// dyadic rational, so nothing is lost.
inline Rational exact(double x) {
    return Rational(x);
}

inline Rational rational(long num, long den = 1) {
    Rational q(num, den);
    q.canonicalize();
    return q;
}

template <class To, class From>
inline To scalar_cast(const From& x) {
    if constexpr (std::is_same_v<From, Rational>) {
        if constexpr (std::is_same_v<To, Rational>) {
            return x;
        } else {
            return To(x.get_d());
        }
    } else if constexpr (std::is_same_v<To, Rational>) {
        static_assert(std::is_arithmetic_v<From>, "only real scalars convert to Rational");
        return Rational(static_cast<double>(x));
    } else {
        return To(x);
    }
}

}  // namespace qes
