#include "qes/roots.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <unsupported/Eigen/Polynomials>

namespace qes {
namespace {

std::vector<Complex> companion_roots(const Poly<double>& p) {
    if (p.degree() < 1) return {};
    if (p.degree() == 1) return {Complex(-p.coeff(0) / p.coeff(1), 0.0)};
    Eigen::VectorXd c(p.degree() + 1);
    for (int i = 0; i <= p.degree(); ++i) c[i] = p.coeff(i);
    Eigen::PolynomialSolver<double, Eigen::Dynamic> solver(c);
    std::vector<Complex> out;
    for (Eigen::Index i = 0; i < solver.roots().size(); ++i) out.push_back(solver.roots()[i]);
    return out;
}

// value and derivative at a complex point
std::pair<Complex, Complex> horner2(const Poly<double>& p, Complex x) {
    Complex v = 0.0, dv = 0.0;
    for (int i = p.degree(); i >= 0; --i) {
        dv = dv * x + v;
        v = v * x + p.coeff(i);
    }
    return {v, dv};
}

Complex newton_polish(const Poly<double>& p, Complex x) {
    auto [v, dv] = horner2(p, x);
    for (int it = 0; it < 20 && std::abs(v) > 0.0; ++it) {
        if (dv == Complex(0.0)) break;
        const Complex next = x - v / dv;
        auto [nv, ndv] = horner2(p, next);
        if (!(std::abs(nv) < std::abs(v))) break;
        x = next;
        v = nv;
        dv = ndv;
    }
    return x;
}

std::vector<Root> cluster(std::vector<Complex> values, int multiplicity, double radius) {
    std::sort(values.begin(), values.end(), [](Complex a, Complex b) {
        return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag();
    });
    std::vector<bool> used(values.size(), false);
    std::vector<Root> out;
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (used[i]) continue;
        used[i] = true;
        Complex sum = values[i];
        int count = 1;
        for (std::size_t j = i + 1; j < values.size(); ++j) {
            if (used[j]) continue;
            if (std::abs(values[j] - values[i]) <= radius * (1.0 + std::abs(values[i]))) {
                used[j] = true;
                sum += values[j];
                ++count;
            }
        }
        out.push_back({sum / double(count), count * multiplicity});
    }
    return out;
}

// True if p changes sign across x (or vanishes there), checked exactly a few
// ulps to either side.
bool brackets_root(const Poly<Rational>& p, double x) {
    const Rational v = p(Rational(x));
    if (sgn(v) == 0) return true;
    double lo = x, hi = x;
    for (int i = 0; i < 4; ++i) {
        lo = std::nextafter(lo, -std::numeric_limits<double>::infinity());
        hi = std::nextafter(hi, std::numeric_limits<double>::infinity());
    }
    return sgn(p(Rational(lo))) * sgn(p(Rational(hi))) <= 0;
}

// Newton iteration on the real line with exactly evaluated residuals: each
// step is the correctly rounded value of x - p(x)/p'(x).
bool exact_real_newton(const Poly<Rational>& p, const Poly<Rational>& dp, double& x) {
    for (int it = 0; it < 60; ++it) {
        const Rational xq(x);
        const Rational v = p(xq);
        if (sgn(v) == 0) return true;
        const Rational dv = dp(xq);
        if (sgn(dv) == 0) return false;
        const Rational step_q = v / dv;
        const double next = Rational(xq - step_q).get_d();
        if (!std::isfinite(next)) return false;
        if (next == x) return true;
        // stop once the iteration oscillates between neighbouring doubles
        if (std::abs(next - x) <= 4 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(x))) {
            const Rational vn = p(Rational(next));
            if (abs(vn) < abs(v)) x = next;
            return true;
        }
        x = next;
    }
    return false;
}

}  // namespace

RootSet roots(const Poly<double>& p, const RootOptions& options) {
    if (p.is_zero()) throw std::domain_error("roots: zero polynomial");
    RootSet rs;
    rs.real_tolerance = options.real_tolerance;
    Poly<double> q;
    const int zeros = p.strip_zero_roots(q);
    if (zeros > 0) rs.roots.push_back({Complex(0.0), zeros});
    std::vector<Complex> values;
    for (Complex z : companion_roots(q)) values.push_back(newton_polish(q, z));
    for (const auto& r : cluster(std::move(values), 1, options.cluster_radius)) rs.roots.push_back(r);
    return rs;
}

RootSet roots(const Poly<Rational>& p, const RootOptions& options) {
    if (p.is_zero()) throw std::domain_error("roots: zero polynomial");
    RootSet rs;
    rs.real_tolerance = options.real_tolerance;
    Poly<Rational> q;
    const int zeros = p.strip_zero_roots(q);
    if (zeros > 0) rs.roots.push_back({Complex(0.0), zeros});
    const auto factors = squarefree_factors(q);
    for (std::size_t i = 0; i < factors.size(); ++i) {
        const Poly<Rational>& f = factors[i];
        if (f.degree() < 1) continue;
        const int mult = static_cast<int>(i) + 1;
        const Poly<Rational> df = f.derivative();
        const Poly<double> fd = f.cast<double>();
        std::vector<double> real_values;
        for (Complex z : companion_roots(fd)) {
            z = newton_polish(fd, z);
            if (std::abs(z.imag()) <= 1e-6 * (1.0 + std::abs(z))) {
                double x = z.real();
                if (exact_real_newton(f, df, x) && brackets_root(f, x) &&
                    std::none_of(real_values.begin(), real_values.end(), [&](double y) { return y == x; })) {
                    real_values.push_back(x);
                    rs.roots.push_back({Complex(x, 0.0), mult});
                    continue;
                }
            }
            rs.roots.push_back({z, mult});
        }
    }
    return rs;
}

std::vector<double> real_filter(const RootSet& rs, double tol) {
    std::vector<double> out;
    for (const auto& r : rs.roots)
        if (std::abs(r.value.imag()) <= tol * (1.0 + std::abs(r.value)))
            out.insert(out.end(), static_cast<std::size_t>(r.multiplicity), r.value.real());
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<double> distinct_real_roots(const RootSet& rs, double tol) {
    auto v = real_filter(rs, tol);
    v.erase(std::unique(v.begin(), v.end()), v.end());
    return v;
}

}  // namespace qes
