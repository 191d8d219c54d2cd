#pragma once

// Parameters of one quasi-exactly solvable family of the spiked decadic
// oscillator
//
//   V(r) = r^10 + a r^8 + b r^6 + c r^4 + d r^2 + f / r^2,
//
// with exact states  psi(r) = exp(-r^6/6 - alpha r^4/4 - beta r^2/2) sum_n h_n r^(2n-L),
// L = M - 1/2.

#include <Eigen/Dense>
#include <complex>
#include <stdexcept>
#include <vector>

#include "qes/scalar.hpp"

namespace qes {

/// Raised when a function is evaluated at the r = 0 singularity.
class SingularInput : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Ansatz parameters of one family. The scalar type of alpha and beta is a
/// template parameter so that the same spec drives both the exact and the
/// floating-point pipelines.
template <class Scalar>
struct BasicModelSpec {
    Scalar alpha{0};
    Scalar beta{0};
    int big_m = 1;      ///< M = L + 1/2
    int n_states = 1;   ///< N, number of series terms
    int dimension = 3;  ///< D; only enters the spike strength
    int ell = 0;        ///< partial wave; only enters the spike strength

    /// Throws std::invalid_argument if M, N or D is below one or ell < 0.
    void validate() const {
        if (big_m < 1) throw std::invalid_argument("M must be >= 1");
        if (n_states < 1) throw std::invalid_argument("N must be >= 1");
        if (dimension < 1) throw std::invalid_argument("dimension must be >= 1");
        if (ell < 0) throw std::invalid_argument("ell must be >= 0");
    }

    template <class Other>
    BasicModelSpec<Other> cast() const {
        return {scalar_cast<Other>(alpha), scalar_cast<Other>(beta), big_m, n_states, dimension, ell};
    }
};

using ModelSpec = BasicModelSpec<double>;
using ExactModelSpec = BasicModelSpec<Rational>;

/// Exact twin of a floating-point spec (alpha, beta converted without loss).
inline ExactModelSpec exact(const ModelSpec& spec) {
    return spec.cast<Rational>();
}

/// Fully specified potential coefficients.
struct PotentialCoeffs {
    double a = 0;
    double b = 0;
    double c = 0;
    double d = 0;
    double f = 0;
};

/// Coefficients of the potential with the quadratic coupling still open.
/// The coupling is the unknown of the Sturmian problem, so there is no way
/// to evaluate the potential from this type.
struct PotentialShape {
    double a = 0;
    double b = 0;
    double c = 0;
    double f = 0;

    PotentialCoeffs with_coupling(double d) const;
};

inline PotentialCoeffs PotentialShape::with_coupling(double d) const {
    return {a, b, c, d, f};
}

/// Regular polynomial part of the potential, r^10 + a r^8 + b r^6 + c r^4 + d r^2,
/// over any scalar.
template <class S>
struct DecadicCouplings {
    S a, b, c, d;
};

/// a = 2 alpha, b = alpha^2 + 2 beta, c = 2 alpha beta + 2M - 4N - 2.
template <class S>
DecadicCouplings<S> decadic_couplings(const BasicModelSpec<S>& spec, const S& coupling) {
    const S& alpha = spec.alpha;
    const S& beta = spec.beta;
    DecadicCouplings<S> k;
    k.a = S(2) * alpha;
    k.b = alpha * alpha + S(2) * beta;
    k.c = S(2) * alpha * beta + S(2 * spec.big_m - 4 * spec.n_states - 2);
    k.d = coupling;
    return k;
}

/// f = M^2 - (ell - 1 + D/2)^2, the spike strength for which L + 1/2 = M.
double spike_strength(int big_m, int dimension, int ell);

/// L = M - 1/2.
double angular_L(int big_m);

/// a = 2 alpha, b = alpha^2 + 2 beta, c = 2 alpha beta + 2M - 4N - 2, and f
/// from the spike strength.
PotentialShape potential_coeffs(const ModelSpec& spec);
PotentialCoeffs potential_coeffs(const ModelSpec& spec, double coupling);

/// V(r) including the spike. Throws SingularInput at r = 0.
Complex potential_eval(const PotentialCoeffs& coeffs, Complex r);

/// V(r) without the f/r^2 spike, which the radial equation carries inside the
/// L(L+1)/r^2 term.
Complex regular_potential_eval(const PotentialCoeffs& coeffs, Complex r);

/// r^p on the branch with the cut along the positive imaginary axis, i.e.
/// arg r taken in (-3pi/2, pi/2].
Complex power_upper_cut(Complex r, double p);

/// The ansatz wavefunction at complex r. Throws SingularInput at r = 0 and
/// std::invalid_argument when h does not have N entries.
Complex wavefunction_eval(const ModelSpec& spec, const Eigen::VectorXd& h, Complex r);

/// One exact state of a multiplet.
struct MultipletEntry {
    double energy = 0;
    double coupling = 0;
    Eigen::VectorXd h;
    double recurrence_residual = 0;
    bool validated = false;
};

/// Validated set of exact states, sorted by energy, then coupling, then h.
struct Multiplet {
    std::vector<MultipletEntry> entries;

    void sort();
};

}  // namespace qes
