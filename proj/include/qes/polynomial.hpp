#pragma once

// Dense univariate polynomials over a scalar ring, and bivariate polynomials
// in the energy E and the quadratic coupling d built as polynomials in d with
// coefficients in Q[E].

#include <algorithm>
#include <cmath>
#include <type_traits>
#include <cassert>
#include <initializer_list>
#include <ostream>
#include <stdexcept>
#include <utility>
#include <vector>

#include "qes/scalar.hpp"

namespace qes {

/// Dense polynomial, coefficients in ascending degree. The zero polynomial
/// has no coefficients and degree -1.
template <class T>
class Poly {
public:
    using Scalar = T;

    Poly() = default;
    Poly(const T& constant) : coeffs_{constant} { trim(); }
    Poly(std::initializer_list<T> coeffs) : coeffs_(coeffs) { trim(); }
    explicit Poly(std::vector<T> coeffs) : coeffs_(std::move(coeffs)) { trim(); }

    /// The indeterminate itself.
    static Poly x() { return Poly(std::vector<T>{ScalarTraits<T>::zero(), ScalarTraits<T>::one()}); }
    static Poly monomial(int degree, const T& c) {
        std::vector<T> v(static_cast<std::size_t>(degree) + 1, ScalarTraits<T>::zero());
        v.back() = c;
        return Poly(std::move(v));
    }

    int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
    bool is_zero() const { return coeffs_.empty(); }
    const std::vector<T>& coeffs() const { return coeffs_; }

    T coeff(int i) const {
        if (i < 0 || i > degree()) return ScalarTraits<T>::zero();
        return coeffs_[static_cast<std::size_t>(i)];
    }
    const T& leading() const {
        if (coeffs_.empty()) throw std::domain_error("leading coefficient of the zero polynomial");
        return coeffs_.back();
    }

    /// Horner evaluation; U may be any type T promotes into (a larger ring or
    /// a point of an extension such as Complex).
    template <class U>
    U operator()(const U& x) const {
        if (coeffs_.empty()) return U(ScalarTraits<U>::zero());
        U acc = promote<U>(coeffs_.back());
        for (int i = degree() - 1; i >= 0; --i) {
            acc = acc * x;
            acc = acc + promote<U>(coeffs_[static_cast<std::size_t>(i)]);
        }
        return acc;
    }

    Poly derivative() const {
        if (degree() < 1) return Poly();
        std::vector<T> v;
        v.reserve(coeffs_.size() - 1);
        for (int i = 1; i <= degree(); ++i) v.push_back(coeffs_[static_cast<std::size_t>(i)] * T(i));
        return Poly(std::move(v));
    }

    Poly& operator+=(const Poly& o) {
        if (o.coeffs_.size() > coeffs_.size()) coeffs_.resize(o.coeffs_.size(), ScalarTraits<T>::zero());
        for (std::size_t i = 0; i < o.coeffs_.size(); ++i) coeffs_[i] = coeffs_[i] + o.coeffs_[i];
        trim();
        return *this;
    }
    Poly& operator-=(const Poly& o) {
        if (o.coeffs_.size() > coeffs_.size()) coeffs_.resize(o.coeffs_.size(), ScalarTraits<T>::zero());
        for (std::size_t i = 0; i < o.coeffs_.size(); ++i) coeffs_[i] = coeffs_[i] - o.coeffs_[i];
        trim();
        return *this;
    }
    Poly& operator*=(const Poly& o) { return *this = *this * o; }

    friend Poly operator+(Poly a, const Poly& b) { return a += b; }
    friend Poly operator-(Poly a, const Poly& b) { return a -= b; }
    friend Poly operator-(const Poly& a) { return Poly() - a; }
    friend Poly operator*(const Poly& a, const Poly& b) {
        if (a.is_zero() || b.is_zero()) return Poly();
        std::vector<T> v(a.coeffs_.size() + b.coeffs_.size() - 1, ScalarTraits<T>::zero());
        for (std::size_t i = 0; i < a.coeffs_.size(); ++i) {
            if (qes::is_zero(a.coeffs_[i])) continue;
            for (std::size_t j = 0; j < b.coeffs_.size(); ++j) v[i + j] = v[i + j] + a.coeffs_[i] * b.coeffs_[j];
        }
        return Poly(std::move(v));
    }
    friend bool operator==(const Poly& a, const Poly& b) {
        if (a.coeffs_.size() != b.coeffs_.size()) return false;
        for (std::size_t i = 0; i < a.coeffs_.size(); ++i)
            if (!(a.coeffs_[i] == b.coeffs_[i])) return false;
        return true;
    }
    friend bool operator!=(const Poly& a, const Poly& b) { return !(a == b); }

    /// Multiply every coefficient by a scalar of the base ring.
    Poly scaled(const T& s) const {
        std::vector<T> v(coeffs_);
        for (auto& c : v) c = c * s;
        return Poly(std::move(v));
    }

    /// Coefficient-wise conversion into another scalar ring.
    template <class U>
    Poly<U> cast() const {
        std::vector<U> v;
        v.reserve(coeffs_.size());
        for (const auto& c : coeffs_) v.push_back(scalar_cast<U>(c));
        return Poly<U>(std::move(v));
    }

    /// Substitute x -> x + shift, i.e. return p(x + shift).
    Poly shifted(const T& shift) const {
        Poly result;
        Poly lin(std::vector<T>{shift, ScalarTraits<T>::one()});
        for (int i = degree(); i >= 0; --i) result = result * lin + Poly(coeffs_[static_cast<std::size_t>(i)]);
        return result;
    }

    /// Divide out x^k for the largest k with p = x^k q. Returns k.
    int strip_zero_roots(Poly& quotient) const {
        int k = 0;
        while (k <= degree() && qes::is_zero(coeffs_[static_cast<std::size_t>(k)])) ++k;
        quotient = Poly(std::vector<T>(coeffs_.begin() + std::min<std::ptrdiff_t>(k, coeffs_.size()), coeffs_.end()));
        return k;
    }

private:
    template <class U>
    static U promote(const T& c) {
        if constexpr (std::is_same_v<U, T>) {
            return c;
        } else if constexpr (std::is_same_v<T, Rational> &&
                             (std::is_floating_point_v<U> || std::is_same_v<U, Complex>)) {
            return U(c.get_d());
        } else {
            return U(c);
        }
    }

    void trim() {
        while (!coeffs_.empty() && qes::is_zero(coeffs_.back())) coeffs_.pop_back();
    }

    std::vector<T> coeffs_;
};

template <class T>
struct ScalarTraits<Poly<T>> {
    static Poly<T> zero() { return Poly<T>(); }
    static Poly<T> one() { return Poly<T>(ScalarTraits<T>::one()); }
    static bool is_zero(const Poly<T>& p) { return p.is_zero(); }
    static double magnitude(const Poly<T>& p) {
        double m = 0.0;
        for (const auto& c : p.coeffs()) m = std::max(m, qes::magnitude(c));
        return m;
    }
};

template <class T>
Poly<T> operator*(const Poly<T>& p, const T& s) {
    return p.scaled(s);
}
template <class T>
Poly<T> operator*(const T& s, const Poly<T>& p) {
    return p.scaled(s);
}

template <class T>
std::ostream& operator<<(std::ostream& os, const Poly<T>& p) {
    os << '[';
    for (int i = 0; i <= p.degree(); ++i) os << (i ? ", " : "") << p.coeff(i);
    return os << ']';
}

/// Largest coefficient magnitude; used as the scale for relative residuals.
template <class T>
double coefficient_scale(const Poly<T>& p) {
    return ScalarTraits<Poly<T>>::magnitude(p);
}

// --- Field operations (T must be a field: Rational, double) ---------------

template <class T>
std::pair<Poly<T>, Poly<T>> divmod(const Poly<T>& a, const Poly<T>& b) {
    if (b.is_zero()) throw std::domain_error("polynomial division by zero");
    std::vector<T> rem = a.coeffs();
    const int db = b.degree();
    const int da = a.degree();
    if (da < db) return {Poly<T>(), a};
    std::vector<T> quot(static_cast<std::size_t>(da - db + 1), ScalarTraits<T>::zero());
    for (int k = da - db; k >= 0; --k) {
        T q = rem[static_cast<std::size_t>(k + db)] / b.leading();
        quot[static_cast<std::size_t>(k)] = q;
        for (int j = 0; j <= db; ++j)
            rem[static_cast<std::size_t>(k + j)] = rem[static_cast<std::size_t>(k + j)] - q * b.coeff(j);
        rem[static_cast<std::size_t>(k + db)] = ScalarTraits<T>::zero();
    }
    rem.resize(static_cast<std::size_t>(db));
    return {Poly<T>(std::move(quot)), Poly<T>(std::move(rem))};
}

/// Division that must leave no remainder.
template <class T>
Poly<T> exact_div(const Poly<T>& a, const Poly<T>& b) {
    auto [q, r] = divmod(a, b);
    if (!r.is_zero()) throw std::logic_error("exact_div: non-zero remainder");
    return q;
}

template <class T>
Poly<T> monic(const Poly<T>& p) {
    if (p.is_zero()) return p;
    return p.scaled(ScalarTraits<T>::one() / p.leading());
}

/// Monic greatest common divisor (Euclid). Exact over the rationals.
template <class T>
Poly<T> gcd(Poly<T> a, Poly<T> b) {
    while (!b.is_zero()) {
        auto r = divmod(a, b).second;
        a = std::move(b);
        b = monic(r);
    }
    return monic(a);
}

/// Yun's square-free factorization: p = lc * prod_i factors[i]^(i+1), with
/// each factor monic, square-free and pairwise coprime. Trivial factors are
/// kept as the constant 1 so the index still encodes the multiplicity.
template <class T>
std::vector<Poly<T>> squarefree_factors(const Poly<T>& p) {
    std::vector<Poly<T>> out;
    if (p.degree() < 1) return out;
    Poly<T> dp = p.derivative();
    Poly<T> a = gcd(p, dp);
    Poly<T> b = exact_div(p, a);
    Poly<T> c = exact_div(dp, a);
    Poly<T> d = c - b.derivative();
    while (b.degree() > 0) {
        Poly<T> g = gcd(b, d);
        out.push_back(g);
        b = exact_div(b, g);
        c = exact_div(d, g);
        d = c - b.derivative();
    }
    while (!out.empty() && out.back().degree() < 1) out.pop_back();
    return out;
}

// --- Bivariate polynomials in (E, d) --------------------------------------

enum class Variable { energy, coupling };

/// Polynomial in E and d, coefficient (i, j) multiplying E^i d^j. Stored as a
/// polynomial in d whose coefficients are polynomials in E.
template <class T>
class BiPoly {
public:
    using Scalar = T;

    BiPoly() = default;
    BiPoly(const T& constant) : rep_(Poly<T>(constant)) {}
    explicit BiPoly(Poly<Poly<T>> in_coupling) : rep_(std::move(in_coupling)) {}

    static BiPoly energy() { return BiPoly(Poly<Poly<T>>(Poly<T>::x())); }
    static BiPoly coupling() { return BiPoly(Poly<Poly<T>>::x()); }
    /// Embed a polynomial in E.
    static BiPoly from_energy_poly(const Poly<T>& p) { return BiPoly(Poly<Poly<T>>(p)); }

    bool is_zero() const { return rep_.is_zero(); }
    int degree(Variable v) const {
        if (v == Variable::coupling) return rep_.degree();
        int deg = -1;
        for (const auto& c : rep_.coeffs()) deg = std::max(deg, c.degree());
        return deg;
    }

    T coeff(int energy_power, int coupling_power) const {
        return rep_.coeff(coupling_power).coeff(energy_power);
    }

    /// View as a polynomial in the chosen variable with coefficients in the
    /// ring of polynomials in the other one.
    Poly<Poly<T>> as_poly_in(Variable v) const {
        if (v == Variable::coupling) return rep_;
        const int de = degree(Variable::energy);
        std::vector<Poly<T>> out;
        for (int i = 0; i <= de; ++i) {
            std::vector<T> row;
            for (int j = 0; j <= rep_.degree(); ++j) row.push_back(coeff(i, j));
            out.emplace_back(std::move(row));
        }
        return Poly<Poly<T>>(std::move(out));
    }

    /// Numeric evaluation at (E, d).
    template <class U>
    U operator()(const U& energy, const U& coupling) const {
        U acc = U(ScalarTraits<U>::zero());
        for (int j = rep_.degree(); j >= 0; --j) {
            acc = acc * coupling;
            acc = acc + rep_.coeff(j).template operator()<U>(energy);
        }
        return acc;
    }

    /// Sum of |coefficient| * |E|^i * |d|^j: the natural scale of a value.
    double magnitude_at(double energy, double coupling) const {
        double s = 0.0;
        for (int j = 0; j <= rep_.degree(); ++j)
            for (int i = 0; i <= rep_.coeff(j).degree(); ++i)
                s += qes::magnitude(coeff(i, j)) * std::pow(std::abs(energy), i) * std::pow(std::abs(coupling), j);
        return s;
    }

    /// Partial derivative with respect to one variable.
    BiPoly derivative(Variable v) const {
        if (v == Variable::coupling) return BiPoly(rep_.derivative());
        std::vector<Poly<T>> out;
        for (const auto& c : rep_.coeffs()) out.push_back(c.derivative());
        return BiPoly(Poly<Poly<T>>(std::move(out)));
    }

    /// Substitute d = g(E), leaving a polynomial in E.
    Poly<T> substitute_coupling(const Poly<T>& g) const {
        Poly<T> acc;
        for (int j = rep_.degree(); j >= 0; --j) acc = acc * g + rep_.coeff(j);
        return acc;
    }

    /// Fix E to a value, leaving a polynomial in d.
    template <class U>
    Poly<U> at_energy(const U& energy) const {
        std::vector<U> v;
        for (const auto& c : rep_.coeffs()) v.push_back(c.template operator()<U>(energy));
        return Poly<U>(std::move(v));
    }

    template <class U>
    BiPoly<U> cast() const {
        std::vector<Poly<U>> v;
        for (const auto& c : rep_.coeffs()) v.push_back(c.template cast<U>());
        return BiPoly<U>(Poly<Poly<U>>(std::move(v)));
    }

    BiPoly& operator+=(const BiPoly& o) { rep_ += o.rep_; return *this; }
    BiPoly& operator-=(const BiPoly& o) { rep_ -= o.rep_; return *this; }
    friend BiPoly operator+(BiPoly a, const BiPoly& b) { return a += b; }
    friend BiPoly operator-(BiPoly a, const BiPoly& b) { return a -= b; }
    friend BiPoly operator-(const BiPoly& a) { return BiPoly() - a; }
    friend BiPoly operator*(const BiPoly& a, const BiPoly& b) { return BiPoly(a.rep_ * b.rep_); }
    friend bool operator==(const BiPoly& a, const BiPoly& b) { return a.rep_ == b.rep_; }
    friend bool operator!=(const BiPoly& a, const BiPoly& b) { return !(a == b); }

private:
    Poly<Poly<T>> rep_;
};

template <class T>
struct ScalarTraits<BiPoly<T>> {
    static BiPoly<T> zero() { return BiPoly<T>(); }
    static BiPoly<T> one() { return BiPoly<T>(ScalarTraits<T>::one()); }
    static bool is_zero(const BiPoly<T>& p) { return p.is_zero(); }
    static double magnitude(const BiPoly<T>& p) {
        double m = 0.0;
        for (int j = 0; j <= p.degree(Variable::coupling); ++j)
            for (int i = 0; i <= p.degree(Variable::energy); ++i) m = std::max(m, qes::magnitude(p.coeff(i, j)));
        return m;
    }
};

template <class T>
std::ostream& operator<<(std::ostream& os, const BiPoly<T>& p) {
    os << '{';
    bool first = true;
    for (int j = 0; j <= p.degree(Variable::coupling); ++j)
        for (int i = 0; i <= p.degree(Variable::energy); ++i) {
            T c = p.coeff(i, j);
            if (is_zero(c)) continue;
            os << (first ? "" : " + ") << c << "*E^" << i << "*d^" << j;
            first = false;
        }
    return os << '}';
}

}  // namespace qes
