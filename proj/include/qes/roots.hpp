#pragma once

#include <vector>

#include "qes/polynomial.hpp"

namespace qes {

struct RootOptions {
    /// Roots closer than cluster_radius * (1 + |root|) are merged into one
    /// root of higher multiplicity (floating-point inputs only).
    double cluster_radius = 1e-6;
    /// Default tolerance recorded in the RootSet for real classification.
    double real_tolerance = 1e-8;
};

struct Root {
    Complex value;
    int multiplicity = 1;
};

/// All complex roots of a polynomial with multiplicities.
struct RootSet {
    std::vector<Root> roots;
    double real_tolerance = 1e-8;

    int total_multiplicity() const {
        int s = 0;
        for (const auto& r : roots) s += r.multiplicity;
        return s;
    }
};

/// Roots of a floating-point polynomial: balanced companion-matrix
/// eigenvalues, Newton polishing, then clustering into multiple roots.
/// Exact zero roots (vanishing trailing coefficients) are split off first.
/// Throws std::domain_error for the zero polynomial.
RootSet roots(const Poly<double>& p, const RootOptions& options = {});

/// Roots of a rational polynomial. Multiplicities come from an exact
/// square-free factorization, and real roots are polished by Newton steps
/// whose residuals are evaluated exactly, so simple real roots are accurate to
/// the last bit. Throws std::domain_error for the zero polynomial.
RootSet roots(const Poly<Rational>& p, const RootOptions& options = {});

/// Roots with |Im| <= tol * (1 + |root|), sorted ascending, each repeated
/// according to its multiplicity.
std::vector<double> real_filter(const RootSet& rs, double tol);

/// Distinct real roots (multiplicity dropped), sorted ascending.
std::vector<double> distinct_real_roots(const RootSet& rs, double tol);

}  // namespace qes
