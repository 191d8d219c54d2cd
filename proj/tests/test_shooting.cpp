#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "oracle.hpp"
#include "qes/recurrence.hpp"
#include "qes/shooting.hpp"
#include "qes/solvers.hpp"

using namespace qes;

namespace {

const double cube_root_192 = std::cbrt(192.0);

Eigen::VectorXd null_of(const ModelSpec& s, double e, double d) {
    return null_vector(full_system(s, e, d), 1e-8);
}

}  // namespace

TEST_CASE("the exact ansatz solves the radial equation along the contour") {
    const ModelSpec s{0, 0, 2, 3};
    const double e = cube_root_192, d = e * e / 4;
    const Eigen::VectorXd h = null_of(s, e, d);
    const auto k = potential_coeffs(s, d);
    const double L = angular_L(2);
    auto psi = [&](Complex r) { return wavefunction_eval(s, h, r); };
    for (double x = -2.5; x <= 2.5; x += 0.25) {
        const Complex r(x, -0.5);
        // step matched to the local wavelength ~ |r|^-5
        const double step = 2.5e-3 / std::max(1.0, std::pow(std::abs(r), 5));
        const Complex second = (-psi(r + 2 * step) + 16.0 * psi(r + step) - 30.0 * psi(r) + 16.0 * psi(r - step) -
                                psi(r - 2 * step)) /
                               (12 * step * step);
        const Complex q = L * (L + 1) / (r * r) + regular_potential_eval(k, r) - e;
        const Complex residual = -second + q * psi(r);
        CHECK(std::abs(residual) <= 1e-8 * (std::abs(second) + std::abs(q * psi(r))));
    }
}

TEST_CASE("log-derivative follows -r^5 for a pure r^10 potential") {
    const Coefficient q = [](Complex r) { return std::pow(r, 10); };
    for (auto dir : {Direction::from_left, Direction::from_right}) {
        const auto t = integrate_ode(q, 0.0, Contour{}, dir);
        REQUIRE(t.r.size() > 10);
        for (std::size_t i = 0; i < t.r.size(); ++i) {
            if (std::abs(t.r[i]) < 3.0) continue;
            CHECK(std::abs(t.y[i] / -std::pow(t.r[i], 5) - 1.0) < 0.02);
        }
    }
}

TEST_CASE("harmonic control") {
    // V = r^2, L = 1/2: the line contour carries both families E = 4n + 2L + 3
    // and E = 4n - 2L + 1, i.e. E = 0, 4, 8, ...
    const Coefficient q = [](Complex r) { return 0.75 / (r * r) + r * r; };
    Contour c;
    c.x_max = 8.0;
    ShootingOptions o;
    const auto ground = find_eigenvalue([&](double) { return q; }, 3.9, c, o);
    CHECK(std::abs(ground.energy - 4.0) < 1e-3);
    CHECK(std::abs(wronskian_mismatch(q, 4.0, c)) < 1e-6);
    CHECK(std::abs(wronskian_mismatch(q, 2.0, c)) > 1e-3);
}

TEST_CASE("mismatch near an eigenvalue") {
    const ModelSpec s{0, 0, 2, 3};
    const double e = cube_root_192;
    const auto k = potential_coeffs(s, e * e / 4);
    const double L = angular_L(2);
    const Contour c;
    CHECK(std::abs(wronskian_mismatch(k, L, e, c)) <= 1e-6);
    CHECK(std::abs(wronskian_mismatch(k, L, e + 1, c)) >= 1e-3);

    double prev = wronskian_mismatch(k, L, e - 0.5, c);
    for (double x = e - 0.49; x <= e + 0.5; x += 0.01) {
        const double m = wronskian_mismatch(k, L, x, c);
        CHECK(std::abs(m - prev) < 0.05);
        prev = m;
    }
}

TEST_CASE("eigenvalue search") {
    const ModelSpec s{0, 0, 2, 3};
    const double d = cube_root_192 * cube_root_192 / 4;
    auto r = find_eigenvalue(s, d, 5.5, Contour{});
    CHECK(r.converged);
    CHECK(std::abs(r.energy - cube_root_192) <= 1e-6);
    CHECK(r.wronskian_residual <= 1e-7);

    r = find_eigenvalue(ModelSpec{2, 0, 1, 2}, -4.0, 0.3, Contour{});
    CHECK(r.converged);
    CHECK(std::abs(r.energy) <= 1e-6);

    r = find_eigenvalue(s, d, -40.0, Contour{});
    CHECK_FALSE(r.converged);
}

TEST_CASE("eigenvalues do not depend on the contour shift or length") {
    const ModelSpec s{0, 0, 2, 3};
    const double d = cube_root_192 * cube_root_192 / 4;
    std::vector<double> found;
    for (double eps : {0.25, 0.5, 0.6}) {
        Contour c;
        c.epsilon = eps;
        const auto r = find_eigenvalue(s, d, 5.5, c);
        CHECK(r.converged);
        found.push_back(r.energy);
    }
    for (double a : found)
        for (double b : found) CHECK(std::abs(a - b) <= 1e-5);

    // on r = x - i the state is ~e^61 at |x| = 3 and ~e^-1 at the matching
    // point: double precision loses it, 64 digits recover it
    Contour steep;
    steep.epsilon = 1.0;
    CHECK_FALSE(find_eigenvalue(s, d, 5.5, steep).converged);
    ShootingOptions precise;
    precise.integration.digits = 64;
    const auto deep = find_eigenvalue(s, d, found[1], steep, precise);
    CHECK(deep.converged);
    CHECK(std::abs(deep.energy - found[1]) <= 1e-5);
    CHECK(std::abs(deep.energy - cube_root_192) <= 1e-9);

    Contour longer;
    longer.x_max = 8.0;
    const auto r = find_eigenvalue(s, d, 5.5, longer);
    CHECK(r.converged);
    CHECK(std::abs(r.energy - found[1]) <= 1e-7);
}

TEST_CASE("algebraic solutions survive shooting") {
    std::mt19937 rng(41);
    int checked = 0;
    for (int t = 0; t < 12; ++t) {
        const double a = oracle::dyadic(rng, 1.5), b = oracle::dyadic(rng, 1.5);
        for (int n = 1; n <= 4; ++n) {
            std::vector<MultipletEntry> entries;
            const ModelSpec s1{a, b, 1, n}, s2{a, b, 2, n};
            for (const auto& e : sturmian_multiplet(s1, solve_sturmian(s1)).entries) {
                const auto r = find_eigenvalue(s1, e.coupling, e.energy, Contour{});
                CHECK(r.converged);
                CHECK(std::abs(r.energy - e.energy) <= 1e-6);
                ++checked;
            }
            for (const auto& e : solve_energies_m2(s2).entries) {
                const auto r = find_eigenvalue(s2, e.coupling, e.energy, Contour{});
                INFO("a = " << a << " b = " << b << " N = " << n << " E = " << e.energy);
                CHECK(r.converged);
                CHECK(std::abs(r.energy - e.energy) <= 1e-6);
                ++checked;
            }
        }
    }
    CHECK(checked > 20);
}

TEST_CASE("bent contours") {
    const double R = 3.5;
    Contour c;
    c.waypoints = {std::polar(R, 2 * std::numbers::pi / 3), Complex(0, -0.5), std::polar(R, std::numbers::pi / 3)};
    CHECK_NOTHROW(c.validate());

    Contour off;
    off.waypoints = {std::polar(R, std::numbers::pi / 2), Complex(0, -0.5), Complex(R, 0)};
    CHECK_THROWS_AS(off.validate(), std::invalid_argument);
    Contour through;
    through.waypoints = {Complex(-R, 0), Complex(R, 0)};
    CHECK_THROWS_AS(through.validate(), std::invalid_argument);
    Contour flat;
    flat.epsilon = 0;
    CHECK_THROWS_AS(flat.validate(), std::invalid_argument);

    // the upper pair: the mismatch is a finite continuous function of E
    const ModelSpec s{0, 0, 2, 3};
    const double e = cube_root_192;
    const auto k = potential_coeffs(s, e * e / 4);
    for (double x : {0.0, 2.0, e})
        CHECK(std::isfinite(wronskian_mismatch(k, angular_L(2), x, c)));
}

TEST_CASE("multiprecision stepping") {
    const ModelSpec s{0, 0, 2, 3};
    const double e = cube_root_192, d = e * e / 4;
    const Eigen::VectorXd h = null_of(s, e, d);
    const auto k = potential_coeffs(s, d);
    const double L = angular_L(2);
    IntegrationOptions o;
    o.digits = 64;

    SUBCASE("follows the exact log-derivative where double precision cannot") {
        Contour c;
        c.epsilon = 1.0;
        const auto tr = integrate_ode(k, L, e, c, Direction::from_left, o);
        for (std::size_t i = 0; i < tr.r.size(); i += 7) {
            const Complex r = tr.r[i];
            const double step = 1e-6 * std::max(1.0, std::abs(r));
            const Complex exact = (wavefunction_eval(s, h, r + step) - wavefunction_eval(s, h, r - step)) /
                                  (2 * step) / wavefunction_eval(s, h, r);
            CHECK(std::abs(tr.y[i] - exact) <= 1e-5 * (1 + std::abs(exact)));
        }
        CHECK(std::abs(tr.r.back() - Complex(0, -1)) <= 1e-12);
    }

    SUBCASE("agrees with the double integrator where both work") {
        Contour c;
        const double lo = wronskian_mismatch(k, L, e + 0.05, c);
        const double hi = wronskian_mismatch(k, L, e + 0.05, c, o);
        CHECK(std::abs(lo - hi) <= 1e-8);
    }

    SUBCASE("needs the decadic form") {
        const Coefficient q = [](Complex r) { return r * r; };
        CHECK_THROWS_AS(integrate_ode(q, 1.0, Contour{}, Direction::from_left, o), std::invalid_argument);
    }
}
