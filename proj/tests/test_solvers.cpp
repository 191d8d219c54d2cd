#include <doctest.h>

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <random>

#include "oracle.hpp"
#include "qes/determinant.hpp"
#include "qes/recurrence.hpp"
#include "qes/solvers.hpp"
#include "qes/verify.hpp"

using namespace qes;

TEST_CASE("Sturmian couplings, N = 1") {
    const auto r = solve_sturmian(ModelSpec{1, 2, 1, 1});
    REQUIRE(r.d_values.size() == 1);
    CHECK(r.d_values[0] == 2.0);
    CHECK(r.F_values[0] == 0.0);
    CHECK(r.h_vectors[0] == Eigen::VectorXd::Ones(1));
}

TEST_CASE("Sturmian couplings, N = 2") {
    const ModelSpec s{2, 0, 1, 2};
    const auto r = solve_sturmian(s);
    CHECK(r.d_values == std::vector<double>{-12, -4});
    CHECK(r.F_values == std::vector<double>{-4, 4});
    for (double f : r.F_values) CHECK(f * f == 4 * 4 - 16 * 0);
    Eigen::VectorXd h0(2), h1(2);
    h0 << 0, 1;
    h1 << 1, 0.5;
    CHECK((r.h_vectors[0] - h0).norm() < 1e-14);
    CHECK((r.h_vectors[1] - h1).norm() < 1e-14);

    const auto m = sturmian_multiplet(s, r);
    CHECK(m.entries.size() == 2);
    for (const auto& e : m.entries) {
        CHECK(e.validated);
        CHECK(e.energy == 0.0);
    }
}

TEST_CASE("Sturmian couplings, N = 3 at the origin") {
    const auto r = solve_sturmian(ModelSpec{0, 0, 1, 3});
    REQUIRE(r.F_values.size() == 1);
    CHECK(r.F_values[0] == doctest::Approx(std::cbrt(256.0)).epsilon(1e-14));
    CHECK(r.d_values[0] == r.F_values[0]);
}

TEST_CASE("Sturmian result invariants") {
    std::mt19937 rng(21);
    for (int t = 0; t < 20; ++t) {
        const ModelSpec s{oracle::dyadic(rng, 5), oracle::dyadic(rng, 5), 1, 1 + t % 8};
        const auto r = solve_sturmian(s);
        const auto again = solve_sturmian(s);
        CHECK(r.d_values == again.d_values);
        CHECK(static_cast<int>(r.d_values.size()) <= s.n_states);
        CHECK(std::is_sorted(r.d_values.begin(), r.d_values.end()));
        const auto f = r.char_poly_in_F.cast<double>();
        for (double F : r.F_values) {
            double scale = 0;
            for (int i = 0; i <= f.degree(); ++i) scale += std::abs(f.coeff(i)) * std::pow(std::abs(F), i);
            CHECK(std::abs(f(F)) <= 1e-9 * scale);
        }
    }
}

TEST_CASE("Sturmian couplings agree with a Hessenberg QR eigensolver") {
    std::mt19937 rng(22);
    for (int t = 0; t < 20; ++t) {
        const oracle::Params p{oracle::dyadic(rng, 3), oracle::dyadic(rng, 3), 1, 2 + t % 6};
        const auto r = solve_sturmian(ModelSpec{p.alpha, p.beta, 1, p.n});
        // d enters with a minus sign on the diagonal: main(d) = main(0) - d I
        Eigen::EigenSolver<Eigen::MatrixXd> es(oracle::main_dense(p, 0, 0), false);
        std::vector<double> want;
        for (const auto& z : es.eigenvalues())
            if (std::abs(z.imag()) <= 1e-8 * (1 + std::abs(z))) want.push_back(z.real());
        std::sort(want.begin(), want.end());
        if (want.size() != r.d_values.size()) continue;  // borderline-real pairs
        for (std::size_t i = 0; i < want.size(); ++i)
            CHECK(r.d_values[i] == doctest::Approx(want[i]).epsilon(1e-7));
    }
}

TEST_CASE("shifted coupling polynomial") {
    const Rational a(3, 2), b(-7, 8);
    const ExactModelSpec s2{a, b, 1, 2};
    CHECK(f_polynomial(s2) == oracle::reference_f_polynomial(2, a, b));
    CHECK(f_polynomial(ExactModelSpec{a, b, 1, 4}) == oracle::reference_f_polynomial(4, a, b));
    // the table prints N = 1 as "F"; det(main - F I) is -F
    CHECK(f_polynomial(ExactModelSpec{a, b, 1, 1}) == -oracle::reference_f_polynomial(1, a, b));
    CHECK_THROWS_AS(f_polynomial(ExactModelSpec{a, b, 2, 2}), WrongMode);
}

TEST_CASE("shifted coupling polynomial matches the reference table for random rationals") {
    std::mt19937 rng(23);
    std::uniform_int_distribution<int> k(-40, 40), den(1, 9);
    for (int t = 0; t < 20; ++t) {
        const Rational a(k(rng), den(rng)), b(k(rng), den(rng));
        for (int n = 2; n <= 5; ++n) {
            Rational ac = a, bc = b;
            ac.canonicalize();
            bc.canonicalize();
            CHECK(f_polynomial(ExactModelSpec{ac, bc, 1, n}) == oracle::reference_f_polynomial(n, ac, bc));
        }
    }
}

TEST_CASE("shifted coupling") {
    const ModelSpec s{1.5, 2.5, 1, 1};
    CHECK(shifted_coupling(2.5 * 2.5 - 3.0, s) == 0.0);
    CHECK(shifted_coupling(0.0, ModelSpec{0, 0, 1, 4}) == 0.0);
    CHECK(shifted_coupling(-4.0, ModelSpec{2, 0, 1, 2}) == 4.0);
}

TEST_CASE("energies at M = 2, N = 3, alpha = beta = 0") {
    const auto m = solve_energies_m2(ModelSpec{0, 0, 2, 3});
    REQUIRE(m.entries.size() == 2);
    CHECK(m.entries[0].energy == 0.0);
    CHECK(m.entries[0].coupling == 0.0);
    Eigen::VectorXd h(3);
    h << 0, 0, 1;
    CHECK(m.entries[0].h == h);
    CHECK(m.entries[1].energy == doctest::Approx(std::cbrt(192.0)).epsilon(1e-14));
    CHECK(m.entries[1].coupling == doctest::Approx(std::pow(192.0, 2.0 / 3) / 4).epsilon(1e-14));
    for (const auto& e : m.entries) CHECK(e.validated);
    CHECK_THROWS_AS(solve_energies_m2(ModelSpec{0, 0, 1, 3}), WrongMode);
}

TEST_CASE("energies at N = 1 are +-2 beta") {
    for (double beta : {1.0, -2.5, 0.75}) {
        const ModelSpec s{0.3, beta, 2, 1};
        SolverOptions keep;
        keep.keep_rejected = true;
        const auto all = solve_energies_m2(s, keep);
        REQUIRE(all.entries.size() == 2);
        std::vector<double> es{all.entries[0].energy, all.entries[1].energy};
        std::vector<double> want{-2 * std::abs(beta), 2 * std::abs(beta)};
        CHECK(es[0] == doctest::Approx(want[0]));
        CHECK(es[1] == doctest::Approx(want[1]));
        // only E = -2 beta also satisfies row 0 of the recurrence
        const auto validated = solve_energies_m2(s);
        REQUIRE(validated.entries.size() == 1);
        CHECK(validated.entries[0].energy == doctest::Approx(-2 * beta));
    }
}

TEST_CASE("reference quintic roots are roots of the M = 2, N = 3 determinant") {
    std::mt19937 rng(24);
    std::uniform_real_distribution<double> u(-3, 3);
    for (int t = 0; t < 20; ++t) {
        const double a = u(rng), b = u(rng);
        const ModelSpec s{a, b, 2, 3};
        const auto det = energy_polynomial_m2(s).cast<double>();
        const auto quintic = oracle::reference_quintic(a, b);
        for (const auto& r : roots(quintic).roots) {
            double scale = 0;
            for (int i = 0; i <= det.degree(); ++i) scale += std::abs(det.coeff(i)) * std::pow(std::abs(r.value), i);
            CHECK(std::abs(det(r.value)) <= 1e-8 * scale);
        }
    }
}

TEST_CASE("null vectors") {
    Eigen::MatrixXd m(2, 2);
    m << 0, 0, 4, -8;
    Eigen::VectorXd want(2);
    want << 1, 0.5;
    CHECK((null_vector(m, 1e-8) - want).norm() < 1e-15);
    CHECK_THROWS_AS(null_vector(Eigen::MatrixXd::Identity(3, 3), 1e-8), NotRankDeficient);

    const auto v = null_vector(full_system(ModelSpec{0, 0, 2, 3}, 0.0, 0.0), 1e-8);
    Eigen::VectorXd h(3);
    h << 0, 0, 1;
    CHECK(v == h);
    CHECK(null_space(Eigen::MatrixXd::Zero(3, 2), 1e-8).size() == 2);
}

TEST_CASE("coupled solver at M = 2 reproduces the energy solver") {
    const auto c = solve_coupled(ModelSpec{0, 0, 2, 3});
    REQUIRE(c.pairs.size() == 2);
    CHECK(c.pairs[0].energy == 0.0);
    CHECK(c.pairs[0].coupling == 0.0);
    CHECK(c.pairs[1].energy == doctest::Approx(std::cbrt(192.0)).epsilon(1e-12));
    CHECK(c.pairs[1].coupling == doctest::Approx(c.pairs[1].energy * c.pairs[1].energy / 4).epsilon(1e-12));

    std::mt19937 rng(25);
    for (int t = 0; t < 20; ++t) {
        const ModelSpec s{oracle::dyadic(rng, 3), oracle::dyadic(rng, 3), 2, 1 + t % 5};
        const auto a = solve_coupled(s);
        const auto b = solve_energies_m2(s);
        REQUIRE(a.pairs.size() == b.entries.size());
        for (std::size_t i = 0; i < a.pairs.size(); ++i) {
            CHECK(std::abs(a.pairs[i].energy - b.entries[i].energy) <= 1e-8 * (1 + std::abs(b.entries[i].energy)));
            CHECK(std::abs(a.pairs[i].coupling - b.entries[i].coupling) <= 1e-8 * (1 + std::abs(b.entries[i].coupling)));
        }
    }
    CHECK_THROWS_AS(solve_coupled(ModelSpec{0, 0, 1, 3}), WrongMode);
}

TEST_CASE("coupled solver at M = 3 against a 2D grid search") {
    const oracle::Params p{0, 0, 3, 3};
    const ModelSpec s{0, 0, 3, 3};
    const auto c = solve_coupled(s);
    REQUIRE(!c.pairs.empty());

    auto f = [&](double e, double d) {
        const Eigen::MatrixXd m = oracle::small_dense(p, e, d);
        return oracle::lu_det(m) / oracle::hadamard(m);
    };
    auto g = [&](double e, double d) {
        const Eigen::MatrixXd m = oracle::main_dense(p, e, d);
        return oracle::lu_det(m) / oracle::hadamard(m);
    };
    const auto zeros = oracle::grid_newton(f, g, -20, 20, 80);
    for (const auto& pair : c.pairs) {
        bool matched = false;
        for (const auto& [e, d] : zeros)
            matched = matched || (std::abs(e - pair.energy) < 1e-6 * (1 + std::abs(e)) &&
                                  std::abs(d - pair.coupling) < 1e-6 * (1 + std::abs(d)));
        CHECK(matched);
        const Eigen::MatrixXd full = oracle::full(p, pair.energy, pair.coupling);
        CHECK((full * pair.h).norm() <= 1e-9 * full.norm() * pair.h.norm());
    }
}

TEST_CASE("coupled solver with fewer terms than M") {
    // N = 1: E from row 0, d from row 1
    const auto c = solve_coupled(ModelSpec{0, -1, 4, 1});
    REQUIRE(c.pairs.size() == 1);
    CHECK(c.pairs[0].energy == 6.0);
    CHECK(c.pairs[0].coupling == 1.0);

    const auto d = solve_coupled(ModelSpec{0.5, 0.25, 5, 3});
    for (const auto& p : d.pairs) CHECK(recurrence_residual(ModelSpec{0.5, 0.25, 5, 3}, p.energy, p.coupling, p.h) <= 1e-10);
}

TEST_CASE("coupled solver with no surviving candidate is empty, not an error") {
    SolverOptions strict;
    strict.residual_tolerance = 1e-300;
    CoupledSolution c;
    CHECK_NOTHROW(c = solve_coupled(ModelSpec{0, 0, 3, 3}, strict));
    CHECK(c.pairs.empty());
}

TEST_CASE("every solver output passes the recurrence check") {
    std::mt19937 rng(26);
    for (int t = 0; t < 12; ++t) {
        const double a = oracle::dyadic(rng, 4), b = oracle::dyadic(rng, 4);
        const int n = 1 + t;
        const ModelSpec s1{a, b, 1, n}, s2{a, b, 2, n}, s3{a, b, 3, n};
        for (const auto& e : sturmian_multiplet(s1, solve_sturmian(s1)).entries)
            CHECK(recurrence_residual(s1, e.energy, e.coupling, e.h) <= 1e-10);
        for (const auto& e : solve_energies_m2(s2).entries)
            CHECK(recurrence_residual(s2, e.energy, e.coupling, e.h) <= 1e-10);
        for (const auto& pr : solve_coupled(s3).pairs)
            CHECK(recurrence_residual(s3, pr.energy, pr.coupling, pr.h) <= 1e-10);
    }
}
