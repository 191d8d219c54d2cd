#pragma once

// Ground-truth checks for candidate exact states.
//
// ode_residual_poly substitutes the ansatz straight into the radial equation
// with its own differentiation code; it never touches the recurrence
// coefficients, so agreement between the two is a real test of them.

#include <Eigen/Core>
#include <stdexcept>
#include <utility>
#include <vector>

#include "qes/model.hpp"
#include "qes/polynomial.hpp"

namespace qes {

/// max_n |A_n h_{n+1} + B_n h_n + C_n h_{n-1} + D_n h_{n-2}| over n = 0..N,
/// divided by ||h||_inf times the largest coefficient that multiplies an
/// in-range h entry. Zero for h = 0.
double recurrence_residual(const ModelSpec& spec, double energy, double coupling, const Eigen::VectorXd& h);

namespace detail {

/// Finite sum  sum_j c_j r^(low + j + shift)  with a common, possibly
/// fractional, exponent shift.
template <class S>
struct PowerSeries {
    int low = 0;
    S shift{0};
    std::vector<S> c;

    static PowerSeries monomial(int power, const S& coeff) { return {power, S(0), {coeff}}; }

    S exponent(std::size_t j) const { return S(low + static_cast<int>(j)) + shift; }

    PowerSeries derivative() const {
        PowerSeries out{low - 1, shift, std::vector<S>(c.size(), S(0))};
        for (std::size_t j = 0; j < c.size(); ++j) out.c[j] = c[j] * exponent(j);
        return out;
    }

    friend PowerSeries operator+(const PowerSeries& x, const PowerSeries& y) {
        if (x.c.empty()) return y;
        if (y.c.empty()) return x;
        if (!(x.shift == y.shift)) throw std::logic_error("PowerSeries: adding series with different shifts");
        const int lo = std::min(x.low, y.low);
        const int hi = std::max(x.low + static_cast<int>(x.c.size()), y.low + static_cast<int>(y.c.size()));
        PowerSeries out{lo, x.shift, std::vector<S>(static_cast<std::size_t>(hi - lo), S(0))};
        for (std::size_t j = 0; j < x.c.size(); ++j) out.c[x.low - lo + j] += x.c[j];
        for (std::size_t j = 0; j < y.c.size(); ++j) out.c[y.low - lo + j] += y.c[j];
        return out;
    }

    friend PowerSeries operator*(const PowerSeries& x, const PowerSeries& y) {
        if (x.c.empty() || y.c.empty()) return {0, x.shift + y.shift, {}};
        PowerSeries out{x.low + y.low, x.shift + y.shift, std::vector<S>(x.c.size() + y.c.size() - 1, S(0))};
        for (std::size_t i = 0; i < x.c.size(); ++i)
            for (std::size_t j = 0; j < y.c.size(); ++j) out.c[i + j] += x.c[i] * y.c[j];
        return out;
    }

    PowerSeries scaled(const S& s) const {
        PowerSeries out = *this;
        for (auto& v : out.c) v = v * s;
        return out;
    }
};

}  // namespace detail

/// Residual of the radial equation
///   -psi'' + (L(L+1)/r^2 + r^10 + a r^8 + b r^6 + c r^4 + d r^2 - E) psi
/// for psi = exp(-r^6/6 - alpha r^4/4 - beta r^2/2) sum_n h_n r^(2n-L), with
/// the exponential removed and the result multiplied by r^(L+2). What remains
/// is a polynomial in u = r^2; it is identically zero exactly when (E, d, h)
/// is an exact solution. The couplings a, b, c, d are passed explicitly.
template <class S>
Poly<S> ode_residual_poly(const BasicModelSpec<S>& spec, const DecadicCouplings<S>& v, const S& energy,
                          const std::vector<S>& h) {
    using Series = detail::PowerSeries<S>;
    if (static_cast<int>(h.size()) != spec.n_states)
        throw std::invalid_argument("ode_residual_poly: h must have N entries");
    const S ell_eff = S(2 * spec.big_m - 1) / S(2);

    // polynomial part: P = sum h_n r^(2n - L)
    Series p{0, S(0) - ell_eff, std::vector<S>(2 * h.size(), S(0))};
    for (std::size_t n = 0; n < h.size(); ++n) p.c[2 * n] = h[n];

    // exponent of the Gaussian-like factor and its derivatives
    Series expo = Series::monomial(6, S(-1) / S(6)) + Series::monomial(4, S(0) - spec.alpha / S(4)) +
                  Series::monomial(2, S(0) - spec.beta / S(2));
    Series s1 = expo.derivative();
    Series s2 = s1.derivative();

    Series pot = Series::monomial(10, S(1)) + Series::monomial(8, v.a) + Series::monomial(6, v.b) +
                 Series::monomial(4, v.c) + Series::monomial(2, v.d) + Series::monomial(0, S(0) - energy) +
                 Series::monomial(-2, ell_eff * (ell_eff + S(1)));

    Series p1 = p.derivative();
    Series p2 = p1.derivative();

    // psi''/e^S = P'' + 2 S' P' + (S'' + S'^2) P
    Series second = p2 + (s1 * p1).scaled(S(2)) + ((s2 + s1 * s1) * p);
    Series residual = second.scaled(S(-1)) + pot * p;

    // multiply by r^(L+2): shift -L becomes 0, powers move up by two
    const int low = residual.low + 2;
    std::vector<S> in_u;
    for (std::size_t j = 0; j < residual.c.size(); ++j) {
        const int power = low + static_cast<int>(j);
        if (is_zero(residual.c[j])) continue;
        if (power < 0 || power % 2 != 0)
            throw std::logic_error("ode_residual_poly: residual has a term outside the even powers of r");
        const std::size_t k = static_cast<std::size_t>(power / 2);
        if (in_u.size() <= k) in_u.resize(k + 1, S(0));
        in_u[k] = residual.c[j];
    }
    return Poly<S>(std::move(in_u));
}

/// Same, with the couplings a, b, c taken from the model's parameter map.
template <class S>
Poly<S> ode_residual_poly(const BasicModelSpec<S>& spec, const S& energy, const S& coupling, const std::vector<S>& h) {
    return ode_residual_poly(spec, decadic_couplings(spec, coupling), energy, h);
}

/// For each PT mirror pair of the degree-z sector set (pt_pairs order), plus
/// one entry for the pair of mirror-fixed sectors when z is even, whether the
/// dominant factor exp(-r^6/6) decays at both sector centres.
std::vector<std::pair<int, bool>> wedge_decay_check(const ModelSpec& spec, int z = 3);

struct VerificationReport {
    double recurrence_residual = 0;
    double ode_residual_max_coeff = 0;
    std::vector<std::pair<int, bool>> wedge_decay;
    bool passed = false;
};

/// Runs both residual checks in floating point and the wedge check. The ODE
/// residual is scaled by ||h||_inf times a bound on the coefficient sizes.
VerificationReport verify_solution(const ModelSpec& spec, double energy, double coupling, const Eigen::VectorXd& h,
                                   double tol = 1e-10);

}  // namespace qes
