#include "qes/solvers.hpp"

#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <string>

#include "qes/determinant.hpp"
#include "qes/recurrence.hpp"
#include "qes/verify.hpp"

namespace qes {
namespace {

void require_mode(const ModelSpec& spec, bool ok, const char* what) {
    spec.validate();
    if (!ok) throw WrongMode(std::string(what) + " (got M = " + std::to_string(spec.big_m) + ")");
}

// Scale v so that its first entry above rtol * max|v| equals one.
Eigen::VectorXd leading_one(const Eigen::VectorXd& v, double rtol) {
    const double top = v.lpNorm<Eigen::Infinity>();
    for (Eigen::Index i = 0; i < v.size(); ++i)
        if (std::abs(v[i]) > rtol * top) return v / v[i];
    return v;
}

Eigen::JacobiSVD<Eigen::MatrixXd> svd_of(const Eigen::MatrixXd& m) {
    return Eigen::JacobiSVD<Eigen::MatrixXd>(m, Eigen::ComputeFullV);
}

// Right singular vector of the smallest singular value, normalised.
Eigen::VectorXd weakest_direction(const Eigen::MatrixXd& m, double rtol) {
    const auto svd = svd_of(m);
    const Eigen::Index k = std::min(m.rows(), m.cols());
    const Eigen::Index col = m.cols() > k ? m.cols() - 1 : k - 1;
    return leading_one(svd.matrixV().col(col), rtol);
}

bool lex_less(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
    return std::lexicographical_compare(a.data(), a.data() + a.size(), b.data(), b.data() + b.size());
}

MultipletEntry make_entry(const ModelSpec& spec, double energy, double coupling, const Eigen::VectorXd& h,
                          bool accepted, const SolverOptions& options) {
    MultipletEntry e;
    e.energy = energy;
    e.coupling = coupling;
    e.h = h;
    e.recurrence_residual = recurrence_residual(spec, energy, coupling, h);
    e.validated = accepted && e.recurrence_residual <= options.residual_tolerance;
    return e;
}

}  // namespace

double shifted_coupling(double d, const ModelSpec& spec) {
    return d - spec.beta * spec.beta + 2.0 * spec.n_states * spec.alpha;
}

double relative_smallest_singular_value(const Eigen::MatrixXd& m) {
    if (m.size() == 0) return 0.0;
    const auto svd = Eigen::JacobiSVD<Eigen::MatrixXd>(m);
    const auto& s = svd.singularValues();
    if (m.rows() < m.cols()) return 0.0;
    if (s[0] == 0.0) return 0.0;
    return s[s.size() - 1] / s[0];
}

std::vector<Eigen::VectorXd> null_space(const Eigen::MatrixXd& m, double rtol) {
    const Eigen::Index n = m.cols();
    if (n == 0) return {};
    const auto svd = svd_of(m);
    const auto& s = svd.singularValues();
    const double top = s.size() > 0 ? s[0] : 0.0;
    Eigen::Index rank = 0;
    while (rank < s.size() && s[rank] > rtol * top) ++rank;
    if (rank == n) return {};

    // rows of `basis` span the null space; reduce to row echelon form
    Eigen::MatrixXd basis = svd.matrixV().rightCols(n - rank).transpose();
    const Eigen::Index k = basis.rows();
    Eigen::Index row = 0;
    for (Eigen::Index col = 0; col < n && row < k; ++col) {
        Eigen::Index pivot = row;
        basis.col(col).segment(row, k - row).cwiseAbs().maxCoeff(&pivot);
        pivot += row;
        if (std::abs(basis(pivot, col)) <= rtol * basis.cwiseAbs().maxCoeff()) continue;
        basis.row(row).swap(basis.row(pivot));
        basis.row(row) /= basis(row, col);
        for (Eigen::Index r = 0; r < k; ++r)
            if (r != row) basis.row(r) -= basis(r, col) * basis.row(row);
        ++row;
    }
    std::vector<Eigen::VectorXd> out;
    for (Eigen::Index r = 0; r < row; ++r) {
        Eigen::VectorXd v = basis.row(r).transpose();
        for (Eigen::Index i = 0; i < v.size(); ++i)
            if (std::abs(v[i]) <= 1e-14) v[i] = 0.0;
        out.push_back(v);
    }
    return out;
}

Eigen::VectorXd null_vector(const Eigen::MatrixXd& m, double rtol) {
    const auto basis = null_space(m, rtol);
    if (basis.empty()) throw NotRankDeficient("null_vector: matrix is not numerically rank deficient");
    return basis.front();
}

Poly<Rational> f_polynomial(const ExactModelSpec& spec) {
    spec.validate();
    if (spec.big_m != 1) throw WrongMode("f_polynomial needs M = 1");
    const Rational zero(0);
    const Poly<Rational> in_d = char_poly(main_matrix<Rational>(spec, zero, zero));
    const Rational shift = spec.beta * spec.beta - Rational(2 * spec.n_states) * spec.alpha;
    return in_d.shifted(shift);
}

Poly<Rational> f_polynomial(const ModelSpec& spec) {
    return f_polynomial(exact(spec));
}

SturmianResult solve_sturmian(const ModelSpec& spec, const SolverOptions& options) {
    require_mode(spec, spec.big_m == 1, "solve_sturmian needs M = 1");
    const ExactModelSpec es = exact(spec);
    const Rational zero(0);
    const Poly<Rational> in_d = char_poly(main_matrix<Rational>(es, zero, zero));

    SturmianResult out;
    out.char_poly_in_F = f_polynomial(es);
    const RootSet rs = roots(in_d, options.root);
    out.d_values = real_filter(rs, options.real_tolerance);
    for (std::size_t i = 0; i < out.d_values.size();) {
        const double d = out.d_values[i];
        std::size_t j = i;
        while (j < out.d_values.size() && out.d_values[j] == d) ++j;
        const Eigen::MatrixXd system = full_system(spec, 0.0, d);
        auto basis = null_space(system, options.rank_tolerance);
        if (basis.empty()) basis.push_back(weakest_direction(system, options.rank_tolerance));
        for (std::size_t k = i; k < j; ++k) {
            out.F_values.push_back(shifted_coupling(d, spec));
            out.h_vectors.push_back(basis[std::min(k - i, basis.size() - 1)]);
        }
        i = j;
    }
    return out;
}

Multiplet sturmian_multiplet(const ModelSpec& spec, const SturmianResult& result, const SolverOptions& options) {
    Multiplet m;
    for (std::size_t i = 0; i < result.d_values.size(); ++i) {
        const double d = result.d_values[i];
        if (i > 0 && d == result.d_values[i - 1] && result.h_vectors[i] == result.h_vectors[i - 1]) continue;
        const bool accepted =
            relative_smallest_singular_value(full_system(spec, 0.0, d)) <= options.rank_tolerance;
        auto e = make_entry(spec, 0.0, d, result.h_vectors[i], accepted, options);
        if (e.validated || options.keep_rejected) m.entries.push_back(std::move(e));
    }
    m.sort();
    return m;
}

Poly<Rational> energy_polynomial_m2(const ExactModelSpec& spec) {
    spec.validate();
    if (spec.big_m != 2) throw WrongMode("energy_polynomial_m2 needs M = 2");
    const Poly<Rational> e = Poly<Rational>::x();
    const Poly<Rational> d = (e * e).scaled(Rational(1, 4));
    return determinant(main_matrix<Poly<Rational>>(spec, e, d));
}

Poly<Rational> energy_polynomial_m2(const ModelSpec& spec) {
    return energy_polynomial_m2(exact(spec));
}

Multiplet solve_energies_m2(const ModelSpec& spec, const SolverOptions& options) {
    require_mode(spec, spec.big_m == 2, "solve_energies_m2 needs M = 2");
    const Poly<Rational> det = energy_polynomial_m2(spec);
    if (det.is_zero()) throw DegenerateResultant("secular determinant vanishes identically in E");

    Multiplet m;
    if (det.degree() < 1) return m;
    for (double energy : distinct_real_roots(roots(det, options.root), options.real_tolerance)) {
        const double d = energy * energy / 4.0;
        const Eigen::MatrixXd system = full_system(spec, energy, d);
        const auto basis = null_space(system, options.rank_tolerance);
        for (const auto& h : basis) {
            auto e = make_entry(spec, energy, d, h, true, options);
            if (e.validated || options.keep_rejected) m.entries.push_back(std::move(e));
        }
        if (basis.empty() && options.keep_rejected)
            m.entries.push_back(
                make_entry(spec, energy, d, weakest_direction(system, options.rank_tolerance), false, options));
    }
    m.sort();
    return m;
}

std::pair<BiPoly<Rational>, BiPoly<Rational>> secular_determinants(const ExactModelSpec& spec) {
    spec.validate();
    const auto e = BiPoly<Rational>::energy();
    const auto d = BiPoly<Rational>::coupling();
    auto small = small_matrix<BiPoly<Rational>>(spec, e, d);
    if (spec.n_states < spec.big_m) {
        // only h_0 .. h_{N-1} exist: keep the leading N x N block
        QuadDiagonalMatrix<BiPoly<Rational>> block(spec.n_states, 2);
        for (int i = 0; i < spec.n_states; ++i)
            for (int j = 0; j < spec.n_states; ++j)
                if (block.in_band(i, j)) block.set(i, j, small.at(i, j));
        small = block;
    }
    return {determinant(small), determinant(main_matrix<BiPoly<Rational>>(spec, e, d))};
}

CoupledSolution solve_coupled(const ModelSpec& spec, const SolverOptions& options) {
    require_mode(spec, spec.big_m >= 2, "solve_coupled needs M >= 2");
    const auto [small, main] = secular_determinants(exact(spec));
    // with d absent from the small determinant it fixes E on its own
    const Poly<Rational> res = small.degree(Variable::coupling) < 1
                                   ? small.as_poly_in(Variable::coupling).coeff(0)
                                   : resultant(small, main, Variable::coupling);

    CoupledSolution out;
    if (res.is_zero()) throw DegenerateResultant("small determinant vanishes identically");
    if (res.degree() < 1) return out;
    auto small_ok = [&](double e, double d) {
        return std::abs(small(e, d)) <= options.determinant_tolerance * std::max(1.0, small.magnitude_at(e, d));
    };
    auto main_ok = [&](double e, double d) {
        return std::abs(main(e, d)) <= options.determinant_tolerance * std::max(1.0, main.magnitude_at(e, d));
    };

    for (double energy : distinct_real_roots(roots(res, options.root), options.real_tolerance)) {
        const Rational eq(energy);
        Poly<Rational> in_d = small.at_energy(eq);
        if (in_d.degree() < 1) in_d = main.at_energy(eq);
        if (in_d.degree() < 1) continue;
        for (double d : distinct_real_roots(roots(in_d, options.root), options.real_tolerance)) {
            if (!small_ok(energy, d) || !main_ok(energy, d)) continue;
            const Eigen::MatrixXd system = full_system(spec, energy, d);
            const double sigma = relative_smallest_singular_value(system);
            if (sigma > options.rank_tolerance) continue;
            for (const auto& h : null_space(system, options.rank_tolerance)) {
                if (recurrence_residual(spec, energy, d, h) > options.residual_tolerance) continue;
                out.pairs.push_back({energy, d, h, sigma});
            }
        }
    }
    std::sort(out.pairs.begin(), out.pairs.end(), [](const CoupledPair& a, const CoupledPair& b) {
        if (a.energy != b.energy) return a.energy < b.energy;
        if (a.coupling != b.coupling) return a.coupling < b.coupling;
        return lex_less(a.h, b.h);
    });
    return out;
}

}  // namespace qes
