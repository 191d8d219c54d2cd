#pragma once

// The three solution pipelines:
//   * M = 1: E = 0 and the couplings d are eigenvalues of the main matrix;
//   * M = 2: the small determinant forces d = E^2/4 and the main determinant
//     becomes a polynomial in E;
//   * M >= 2 general: both determinants are eliminated against each other
//     with a resultant in d.
// Every candidate is certified by a rank test on the full (N+1) x N system.

#include <Eigen/Core>
#include <stdexcept>
#include <utility>
#include <vector>

#include "qes/model.hpp"
#include "qes/polynomial.hpp"
#include "qes/roots.hpp"

namespace qes {

class WrongMode : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

class NotRankDeficient : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct SolverOptions {
    double real_tolerance = 1e-8;      ///< |Im z| <= tol (1 + |z|) counts as real
    double rank_tolerance = 1e-8;      ///< sigma_min <= tol sigma_max counts as singular
    double residual_tolerance = 1e-10; ///< recurrence residual for `validated`
    double determinant_tolerance = 1e-8; ///< relative residual of each determinant
    /// Keep candidate roots that fail the rank test, marked validated = false.
    bool keep_rejected = false;
    RootOptions root;
};

struct SturmianResult {
    std::vector<double> d_values;  ///< sorted, repeated by multiplicity
    std::vector<double> F_values;  ///< F = d - beta^2 + 2 N alpha, same order
    std::vector<Eigen::VectorXd> h_vectors;
    Poly<Rational> char_poly_in_F;
};

struct CoupledPair {
    double energy = 0;
    double coupling = 0;
    Eigen::VectorXd h;
    double smallest_singular_value = 0;  ///< relative to the largest one
};

struct CoupledSolution {
    std::vector<CoupledPair> pairs;
};

/// F = d - beta^2 + 2 N alpha.
double shifted_coupling(double d, const ModelSpec& spec);

/// det(main - (F + beta^2 - 2 N alpha) I) at E = 0, as an exact polynomial
/// in F. Throws WrongMode unless M = 1.
Poly<Rational> f_polynomial(const ExactModelSpec& spec);
Poly<Rational> f_polynomial(const ModelSpec& spec);

/// Sturmian couplings at E = 0. Throws WrongMode unless M = 1.
SturmianResult solve_sturmian(const ModelSpec& spec, const SolverOptions& options = {});

/// The Sturmian result as a multiplet (E = 0 throughout).
Multiplet sturmian_multiplet(const ModelSpec& spec, const SturmianResult& result,
                             const SolverOptions& options = {});

/// det(main) with d = E^2/4 substituted, as an exact polynomial in E.
/// Throws WrongMode unless M = 2.
Poly<Rational> energy_polynomial_m2(const ExactModelSpec& spec);
Poly<Rational> energy_polynomial_m2(const ModelSpec& spec);

/// Energies at M = 2 with d = E^2/4. Throws WrongMode unless M = 2.
Multiplet solve_energies_m2(const ModelSpec& spec, const SolverOptions& options = {});

/// The small and main determinants as exact polynomials in (E, d). For
/// N < M the small one is the leading N x N block of the small matrix.
std::pair<BiPoly<Rational>, BiPoly<Rational>> secular_determinants(const ExactModelSpec& spec);

/// Common real zeros (E, d) of the small and main determinants that carry a
/// genuine solution of the full recurrence. Throws WrongMode for M < 2 and
/// DegenerateResultant when the elimination breaks down.
CoupledSolution solve_coupled(const ModelSpec& spec, const SolverOptions& options = {});

/// Canonical basis of the numerical null space: singular
/// vectors with sigma <= rtol * sigma_max, brought to reduced row echelon
/// form so that each vector has a leading 1.
std::vector<Eigen::VectorXd> null_space(const Eigen::MatrixXd& m, double rtol);

/// The null vector normalised so that its first entry above rtol (relative
/// to the largest entry) equals 1. Throws NotRankDeficient when
/// sigma_min > rtol * sigma_max.
Eigen::VectorXd null_vector(const Eigen::MatrixXd& m, double rtol);

/// sigma_min / sigma_max.
double relative_smallest_singular_value(const Eigen::MatrixXd& m);

}  // namespace qes
