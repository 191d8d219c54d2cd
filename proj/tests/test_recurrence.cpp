#include <doctest.h>

#include <random>

#include "oracle.hpp"
#include "qes/recurrence.hpp"

using namespace qes;

TEST_CASE("recurrence coefficients") {
    const ModelSpec m1{0.7, 3.0, 1, 4};
    CHECK(coeffs(m1, 0, 2.5, 1.0).b == 2.5);
    CHECK(coeffs(ModelSpec{0, 0, 2, 3}, 1, 0.0, 0.0).a == 0);
    CHECK(coeffs(m1, 2, 0.0, 0.0).b == -24);
    CHECK_THROWS_AS(coeffs(m1, 5, 0.0, 0.0), std::out_of_range);
    CHECK_THROWS_AS(coeffs(m1, -1, 0.0, 0.0), std::out_of_range);
}

TEST_CASE("closing coefficients vanish") {
    for (int m = 1; m <= 10; ++m) {
        const int n = m + 3;
        const ExactModelSpec s{Rational(1, 3), Rational(-2), m, n};
        CHECK(is_zero(coeffs(s, m - 1, Rational(5), Rational(7)).a));
        CHECK(is_zero(detail::recurrence_row(s, n + 1, Rational(5), Rational(7)).d));
    }
}

TEST_CASE("main matrix") {
    auto dense = main_matrix(ModelSpec{2, 0, 1, 2}, 0.0, 0.0).dense();
    Eigen::MatrixXd want(2, 2);
    want << -4, 0, 4, -12;
    CHECK(dense == want);

    const auto one = main_matrix(ModelSpec{1.5, -0.5, 1, 1}, 0.0, 0.0).dense();
    CHECK(one(0, 0) == 0.25 - 3.0);

    // M = 2, N = 3 with d = E^2/4, as polynomials in E
    const auto e = Poly<Rational>::x();
    const auto d = (e * e).scaled(Rational(1, 4));
    const auto m = main_matrix(ExactModelSpec{Rational(0), Rational(0), 2, 3}, e, d);
    const Poly<Rational> q = -d, zero;
    CHECK(m.at(0, 0) == q);
    CHECK(m.at(0, 1) == e);
    CHECK(m.at(0, 2) == zero);
    CHECK(m.at(1, 0) == Poly<Rational>(Rational(8)));
    CHECK(m.at(1, 1) == q);
    CHECK(m.at(1, 2) == e);
    CHECK(m.at(2, 0) == zero);
    CHECK(m.at(2, 1) == Poly<Rational>(Rational(4)));
    CHECK(m.at(2, 2) == q);
}

TEST_CASE("small matrix") {
    const auto e = BiPoly<Rational>::energy();
    const auto d = BiPoly<Rational>::coupling();
    const Rational beta(3, 2);
    const auto m = small_matrix(ExactModelSpec{Rational(5), beta, 2, 4}, e, d);
    CHECK(m.at(0, 0) == e + BiPoly<Rational>(2 * beta));
    CHECK(m.at(0, 1) == BiPoly<Rational>(Rational(-4)));
    CHECK(m.at(1, 0) == BiPoly<Rational>(beta * beta) - d);
    CHECK(m.at(1, 1) == e - BiPoly<Rational>(2 * beta));

    const auto s1 = small_matrix(ModelSpec{0.3, 0.9, 1, 2}, 1.25, 0.0);
    CHECK(s1.size() == 1);
    CHECK(s1.at(0, 0) == 1.25);

    const auto s3 = small_matrix(ModelSpec{0, 0, 3, 3}, 0.0, 0.0).dense();
    CHECK(s3(0, 1) == -8);
    CHECK(s3(1, 2) == -8);
    CHECK(s3(2, 0) == 4 * (3 + 1 - 2));
}

TEST_CASE("full system") {
    const auto f = full_system(ModelSpec{0.4, -1.1, 1, 3}, 0.0, 2.0);
    CHECK(f.row(0).isZero());
    Eigen::VectorXd h(3);
    h << 0, 0, 1;
    CHECK((full_system(ModelSpec{0, 0, 2, 3}, 0.0, 0.0) * h).isZero());
}

TEST_CASE("matrices agree with the coefficient formulas over random specs") {
    std::mt19937 rng(5);
    std::uniform_int_distribution<int> mm(1, 5), nn(1, 10);
    for (int t = 0; t < 100; ++t) {
        oracle::Params p{oracle::dyadic(rng, 5), oracle::dyadic(rng, 5), mm(rng), nn(rng)};
        const double e = oracle::dyadic(rng, 10), d = oracle::dyadic(rng, 10);
        const ModelSpec s{p.alpha, p.beta, p.m, p.n};
        CHECK(full_system(s, e, d) == oracle::full(p, e, d));
        CHECK(main_matrix(s, e, d).dense() == oracle::main_dense(p, e, d));
        CHECK(small_matrix(s, e, d).dense() == oracle::small_dense(p, e, d));
    }
}

TEST_CASE("banded storage round trip") {
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> u(-1, 1);
    for (int lower : {1, 2})
        for (int n = 1; n <= 7; ++n) {
            QuadDiagonalMatrix<double> m(n, lower);
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j)
                    if (m.in_band(i, j)) m.set(i, j, u(rng));
            const Eigen::MatrixXd dense = m.dense();
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j) {
                    CHECK(dense(i, j) == m.at(i, j));
                    if (!m.in_band(i, j)) CHECK(dense(i, j) == 0.0);
                }
            CHECK(m.transpose().dense() == dense.transpose());
            CHECK(m.transpose().transpose().dense() == dense);
        }
    CHECK_THROWS_AS(QuadDiagonalMatrix<double>(3, 1).set(2, 0, 1.0), std::out_of_range);
    CHECK_THROWS_AS(QuadDiagonalMatrix<double>(0, 1), std::invalid_argument);
}
