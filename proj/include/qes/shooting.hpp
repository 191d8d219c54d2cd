#pragma once

// Shooting along a complex contour. The radial equation
//
//   -psi'' + (L(L+1)/r^2 + V(r) - E) psi = 0
//
// is integrated in Riccati form, y = psi'/psi, y' = Q - y^2 with
// Q = L(L+1)/r^2 + V(r) - E, from both ends of the contour towards a
// matching point. Near poles of y the integrator switches to z = 1/y,
// z' = 1 - Q z^2. The spike f/r^2 is carried by L and is not added again.

#include <functional>
#include <stdexcept>
#include <vector>

#include "qes/model.hpp"

namespace qes {

/// Raised when the adaptive step size collapses.
class StepUnderflow : public std::runtime_error {
public:
    StepUnderflow(const std::string& what, Complex where) : std::runtime_error(what), location(where) {}
    Complex location;
};

/// Integration path. Without waypoints this is the straight line
/// r = x - i epsilon, |x| <= x_max. With waypoints it is the polyline through
/// them (first point = left end, last = right end). The matching point sits
/// at half the arc length, moved by match_offset along the path.
struct Contour {
    double epsilon = 0.5;
    double x_max = 4.0;
    std::vector<Complex> waypoints;
    double match_offset = 0.0;

    /// Throws std::invalid_argument for epsilon <= 0, x_max <= 0, a polyline
    /// with fewer than two points or through r = 0, or end points whose
    /// angles lie outside every decay sector of exp(-r^6/6).
    void validate() const;

    std::vector<Complex> vertices() const;
};

enum class Direction { from_left, from_right };

struct IntegrationOptions {
    double abs_tolerance = 1e-11;
    double rel_tolerance = 1e-11;
    double min_step = 1e-13;  ///< relative to the path length
    /// 0 selects the double-precision Riccati integrator. A positive value
    /// selects Taylor-series stepping of the linear equation psi'' = Q psi in
    /// GMP floating point with this many decimal digits. Only the decadic
    /// potential supports it. Needed when the contour leaves the decay
    /// sectors and the state becomes exponentially small at the matching
    /// point, as on r = x - i for x_max = 4.
    int digits = 0;
};

/// y = psi'/psi sampled at every accepted step.
struct Trajectory {
    std::vector<Complex> r;
    std::vector<Complex> y;
};

using Coefficient = std::function<Complex(Complex)>;

/// Integrates from one end of the contour to the matching point. `q` is
/// Q(r) without the energy; the energy is subtracted here. Throws
/// std::invalid_argument when options.digits > 0.
Trajectory integrate_ode(const Coefficient& q, Complex energy, const Contour& contour, Direction direction,
                         const IntegrationOptions& options = {});

/// Same for the decadic potential with angular momentum L.
Trajectory integrate_ode(const PotentialCoeffs& coeffs, double L, Complex energy, const Contour& contour,
                         Direction direction, const IntegrationOptions& options = {});

/// Re(y_L - y_R) / sqrt((1 + |y_L|^2)(1 + |y_R|^2)) at the matching point.
/// Under PT symmetry y_L = -conj(y_R) there, so nothing is lost by taking
/// the real part. On a step underflow the matching point is moved to
/// +0.3 and then -0.3 before giving up.
double wronskian_mismatch(const Coefficient& q, double energy, const Contour& contour,
                          const IntegrationOptions& options = {});
double wronskian_mismatch(const PotentialCoeffs& coeffs, double L, double energy, const Contour& contour,
                          const IntegrationOptions& options = {});

struct ShootingOptions {
    double mismatch_tolerance = 1e-7;
    double energy_tolerance = 1e-11;  ///< relative secant step
    /// When the mismatch sits at its noise floor the secant steps stop
    /// shrinking. Three consecutive steps below this (relative) with the
    /// mismatch inside tolerance also count as converged.
    double stall_tolerance = 1e-6;
    double window = 1.0;              ///< give up once |E - guess| exceeds this
    int max_iterations = 40;
    IntegrationOptions integration;
};

struct ShootingResult {
    double energy = 0;
    double wronskian_residual = 0;
    int iterations = 0;
    bool converged = false;
};

/// Secant search for a zero of the mismatch as a function of E, started at
/// e_guess. `q_of_energy` gives Q without the energy for each trial E (so
/// that E-dependent potentials can be shot). Never throws on failure to
/// converge.
ShootingResult find_eigenvalue(const std::function<Coefficient(double)>& q_of_energy, double e_guess,
                               const Contour& contour, const ShootingOptions& options = {});

ShootingResult find_eigenvalue(const PotentialCoeffs& coeffs, double L, double e_guess, const Contour& contour,
                               const ShootingOptions& options = {});

/// Shoot the model's potential with the coupling d held fixed.
ShootingResult find_eigenvalue(const ModelSpec& spec, double coupling, double e_guess, const Contour& contour,
                               const ShootingOptions& options = {});

}  // namespace qes
