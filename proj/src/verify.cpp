#include "qes/verify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "qes/recurrence.hpp"
#include "qes/wedges.hpp"

namespace qes {

double recurrence_residual(const ModelSpec& spec, double energy, double coupling, const Eigen::VectorXd& h) {
    spec.validate();
    const int n_states = spec.n_states;
    if (h.size() != n_states) throw std::invalid_argument("recurrence_residual: h must have N entries");
    const double h_norm = h.lpNorm<Eigen::Infinity>();
    if (h_norm == 0.0) return 0.0;
    auto h_at = [&](int k) { return (k >= 0 && k < n_states) ? h[k] : 0.0; };
    auto in_range = [&](int k) { return k >= 0 && k < n_states; };

    double worst = 0.0;
    double scale = 0.0;
    for (int n = 0; n <= n_states; ++n) {
        const auto k = coeffs(spec, n, energy, coupling);
        const double row = k.a * h_at(n + 1) + k.b * h_at(n) + k.c * h_at(n - 1) + k.d * h_at(n - 2);
        worst = std::max(worst, std::abs(row));
        if (in_range(n + 1)) scale = std::max(scale, std::abs(k.a));
        if (in_range(n)) scale = std::max(scale, std::abs(k.b));
        if (in_range(n - 1)) scale = std::max(scale, std::abs(k.c));
        if (in_range(n - 2)) scale = std::max(scale, std::abs(k.d));
    }
    if (scale == 0.0) return worst == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
    return worst / (scale * h_norm);
}

std::vector<std::pair<int, bool>> wedge_decay_check(const ModelSpec& spec, int z) {
    spec.validate();
    // exp(-r^6/6) decays along direction phi iff Re(e^{6 i phi}) > 0
    auto decays = [](const Sector& s) { return std::cos(6.0 * s.center()) > 0.0; };
    const PtPairing pairing = pt_pairs(z);
    std::vector<std::pair<int, bool>> out;
    for (const auto& pair : pairing.pairs) out.emplace_back(pair.index, decays(pair.left) && decays(pair.right));
    if (pairing.self_symmetric.size() == 2) {
        const int j = static_cast<int>(pairing.pairs.size()) + 1;
        out.emplace_back(j, decays(pairing.self_symmetric[0]) && decays(pairing.self_symmetric[1]));
    }
    return out;
}

VerificationReport verify_solution(const ModelSpec& spec, double energy, double coupling, const Eigen::VectorXd& h,
                                   double tol) {
    VerificationReport report;
    report.recurrence_residual = recurrence_residual(spec, energy, coupling, h);

    std::vector<double> hv(h.data(), h.data() + h.size());
    const Poly<double> res = ode_residual_poly(spec, energy, coupling, hv);
    const double h_norm = h.lpNorm<Eigen::Infinity>();
    const double size = spec.n_states + spec.big_m;
    const double bound = 1.0 + std::abs(energy) + std::abs(coupling) + spec.beta * spec.beta +
                         4.0 * size * (std::abs(spec.alpha) + std::abs(spec.beta)) + 4.0 * size * size;
    report.ode_residual_max_coeff = h_norm == 0.0 ? 0.0 : coefficient_scale(res) / (h_norm * bound);

    report.wedge_decay = wedge_decay_check(spec, 3);
    report.passed = report.recurrence_residual <= tol && report.ode_residual_max_coeff <= tol;
    return report;
}

}  // namespace qes
