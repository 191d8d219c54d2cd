#include "qes/model.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace qes {

double spike_strength(int big_m, int dimension, int ell) {
    const double shifted = ell - 1.0 + dimension / 2.0;
    return static_cast<double>(big_m) * big_m - shifted * shifted;
}

double angular_L(int big_m) {
    if (big_m < 1) throw std::invalid_argument("M must be >= 1");
    return big_m - 0.5;
}

PotentialShape potential_coeffs(const ModelSpec& spec) {
    spec.validate();
    const auto k = decadic_couplings(spec, 0.0);
    PotentialShape s;
    s.a = k.a;
    s.b = k.b;
    s.c = k.c;
    s.f = spike_strength(spec.big_m, spec.dimension, spec.ell);
    return s;
}

PotentialCoeffs potential_coeffs(const ModelSpec& spec, double coupling) {
    return potential_coeffs(spec).with_coupling(coupling);
}

Complex regular_potential_eval(const PotentialCoeffs& k, Complex r) {
    const Complex r2 = r * r;
    // Horner in r^2
    Complex acc = 1.0;
    acc = acc * r2 + k.a;
    acc = acc * r2 + k.b;
    acc = acc * r2 + k.c;
    acc = acc * r2 + k.d;
    return acc * r2;
}

Complex potential_eval(const PotentialCoeffs& k, Complex r) {
    if (r == Complex(0.0)) throw SingularInput("potential_eval: r = 0");
    return regular_potential_eval(k, r) + k.f / (r * r);
}

Complex power_upper_cut(Complex r, double p) {
    if (r == Complex(0.0)) throw SingularInput("power_upper_cut: r = 0");
    double phase = std::arg(r);
    if (phase > std::numbers::pi / 2) phase -= 2 * std::numbers::pi;
    return std::exp(p * Complex(std::log(std::abs(r)), phase));
}

Complex wavefunction_eval(const ModelSpec& spec, const Eigen::VectorXd& h, Complex r) {
    if (h.size() != spec.n_states) throw std::invalid_argument("wavefunction_eval: h must have N entries");
    if (r == Complex(0.0)) throw SingularInput("wavefunction_eval: r = 0");
    const Complex r2 = r * r;
    const Complex r4 = r2 * r2;
    const Complex exponent = -r4 * r2 / 6.0 - spec.alpha * r4 / 4.0 - spec.beta * r2 / 2.0;
    Complex series = 0.0;
    for (Eigen::Index n = h.size() - 1; n >= 0; --n) series = series * r2 + h[n];
    return std::exp(exponent) * series * power_upper_cut(r, -angular_L(spec.big_m));
}

void Multiplet::sort() {
    std::stable_sort(entries.begin(), entries.end(), [](const MultipletEntry& x, const MultipletEntry& y) {
        if (x.energy != y.energy) return x.energy < y.energy;
        if (x.coupling != y.coupling) return x.coupling < y.coupling;
        return std::lexicographical_compare(x.h.begin(), x.h.end(), y.h.begin(), y.h.end());
    });
}

}  // namespace qes
