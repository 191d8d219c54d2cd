#include "qes/shooting.hpp"

#include <gmpxx.h>

#include <array>
#include <boost/numeric/odeint.hpp>
#include <cmath>
#include <limits>
#include <numbers>

#include "qes/wedges.hpp"

namespace qes {
namespace odeint = boost::numeric::odeint;

namespace {

using Stepper = odeint::runge_kutta_dopri5<Complex, double, Complex, double, odeint::vector_space_algebra>;

struct Leg {
    Complex from, to;
};

double arc_length(const std::vector<Complex>& v) {
    double s = 0.0;
    for (std::size_t i = 1; i < v.size(); ++i) s += std::abs(v[i] - v[i - 1]);
    return s;
}

// Legs from the first vertex up to arc length `stop`.
std::vector<Leg> legs_until(const std::vector<Complex>& v, double stop) {
    std::vector<Leg> out;
    double s = 0.0;
    for (std::size_t i = 1; i < v.size(); ++i) {
        const double len = std::abs(v[i] - v[i - 1]);
        if (s + len >= stop) {
            out.push_back({v[i - 1], v[i - 1] + (v[i] - v[i - 1]) * ((stop - s) / len)});
            break;
        }
        out.push_back({v[i - 1], v[i]});
        s += len;
    }
    return out;
}

}  // namespace

void Contour::validate() const {
    if (waypoints.empty()) {
        if (!(epsilon > 0)) throw std::invalid_argument("contour: epsilon must be positive");
        if (!(x_max > 0)) throw std::invalid_argument("contour: x_max must be positive");
        return;
    }
    if (waypoints.size() < 2) throw std::invalid_argument("contour: a polyline needs at least two points");
    for (std::size_t i = 1; i < waypoints.size(); ++i) {
        const Complex a = waypoints[i - 1], b = waypoints[i];
        if (a == b) throw std::invalid_argument("contour: repeated waypoint");
        // distance from the origin to the segment
        const double t = std::clamp(-std::real(std::conj(b - a) * a) / std::norm(b - a), 0.0, 1.0);
        if (std::abs(a + t * (b - a)) < 1e-9) throw std::invalid_argument("contour: polyline passes through r = 0");
    }
    const auto sectors = sectors_for_degree(3);
    for (Complex end : {waypoints.front(), waypoints.back()}) {
        const double phi = std::arg(end);
        bool inside = false;
        for (const auto& s : sectors) inside = inside || contains(s, phi);
        if (!inside) throw std::invalid_argument("contour: end point outside every decay sector");
    }
}

std::vector<Complex> Contour::vertices() const {
    if (!waypoints.empty()) return waypoints;
    return {Complex(-x_max, -epsilon), Complex(x_max, -epsilon)};
}

namespace {

std::vector<Leg> path_legs(const Contour& contour, Direction direction) {
    const auto v = contour.vertices();
    const double total = arc_length(v);
    const double stop = std::clamp(0.5 * total + contour.match_offset, 1e-6 * total, (1 - 1e-6) * total);
    return direction == Direction::from_left ? legs_until(v, stop)
                                             : legs_until(std::vector<Complex>(v.rbegin(), v.rend()), total - stop);
}

// decaying WKB branch of y = psi'/psi at the starting end, with the first correction
template <class Q>
Complex wkb_start(const Q& big_q, const std::vector<Leg>& legs) {
    const Complex r0 = legs.front().from;
    const Complex outward = (legs.front().from - legs.front().to) / std::abs(legs.front().from - legs.front().to);
    const Complex q0 = big_q(r0);
    Complex root = std::sqrt(q0);
    if (std::real(root * outward) > 0) root = -root;
    const double hq = 1e-6 * (1 + std::abs(r0));
    const Complex dq = (big_q(r0 + hq) - big_q(r0 - hq)) / (2 * hq);
    return root - dq / (4.0 * q0);
}

// Complex numbers over mpf_class, only what the Taylor stepper needs.
struct MpComplex {
    mpf_class re, im;

    MpComplex(double x, double y, mp_bitcnt_t bits) : re(x, bits), im(y, bits) {}
    MpComplex(Complex z, mp_bitcnt_t bits) : MpComplex(z.real(), z.imag(), bits) {}

    MpComplex& operator+=(const MpComplex& o) {
        re += o.re;
        im += o.im;
        return *this;
    }
    Complex to_complex() const { return {re.get_d(), im.get_d()}; }
};

void mul_into(MpComplex& out, const MpComplex& x, const MpComplex& y, mpf_class& tmp) {
    tmp = x.re * y.im;
    tmp += x.im * y.re;
    out.re = x.re * y.re;
    out.re -= x.im * y.im;
    out.im = tmp;
}

double log2_abs(const mpf_class& x) {
    if (sgn(x) == 0) return -std::numeric_limits<double>::infinity();
    long e = 0;
    const double m = mpf_get_d_2exp(&e, x.get_mpf_t());
    return std::log2(std::abs(m)) + static_cast<double>(e);
}

double log2_abs(const MpComplex& z) {
    const double a = log2_abs(z.re), b = log2_abs(z.im);
    const double hi = std::max(a, b), lo = std::min(a, b);
    if (hi == -std::numeric_limits<double>::infinity()) return hi;
    return hi + 0.5 * std::log2(1 + std::exp2(2 * (lo - hi)));
}

// psi'' = (L(L+1)/r^2 + P(r) - E) psi stepped by Taylor series in GMP floats.
// The solution is rescaled by powers of two after every step, so only
// y = psi'/psi is meaningful.
Trajectory integrate_taylor(const PotentialCoeffs& k, double L, Complex energy, const std::vector<Leg>& legs,
                           Complex y0, int digits) {
    const auto bits = static_cast<mp_bitcnt_t>(std::ceil(digits * std::log2(10.0))) + 32;
    const int order = std::max(20, digits);
    const double log2_tol = -(digits - 5) * std::log2(10.0);
    const double centrifugal = L * (L + 1);
    // P(r) - E by ascending power of r
    const std::array<Complex, 11> p{-energy, 0, k.d, 0, k.c, 0, k.b, 0, k.a, 0, 1};

    MpComplex psi(1.0, 0.0, bits), dpsi(y0, bits);
    std::vector<MpComplex> a(order + 1, MpComplex(0, 0, bits)), q(order + 1, MpComplex(0, 0, bits));
    std::vector<MpComplex> shifted(p.size(), MpComplex(0, 0, bits));
    MpComplex prod(0, 0, bits), inv(0, 0, bits), pw(0, 0, bits), centre(0, 0, bits), t(0, 0, bits);
    MpComplex val(0, 0, bits), der(0, 0, bits), acc(0, 0, bits);
    mpf_class tmp(0, bits), norm(0, bits);

    Trajectory out;
    auto record = [&](Complex r) {
        // psi'/psi = dpsi * conj(psi) / |psi|^2
        norm = psi.re * psi.re;
        norm += psi.im * psi.im;
        MpComplex conj = psi;
        conj.im = -conj.im;
        mul_into(prod, dpsi, conj, tmp);
        prod.re /= norm;
        prod.im /= norm;
        out.r.push_back(r);
        out.y.push_back(prod.to_complex());
    };
    record(legs.front().from);

    long steps = 0;
    for (const auto& leg : legs) {
        const double len = std::abs(leg.to - leg.from);
        if (len == 0.0) continue;
        const Complex u = (leg.to - leg.from) / len;
        double s = 0.0;
        while (s < len) {
            if (++steps > 1'000'000) throw StepUnderflow("integrate_ode: step budget exhausted", leg.from + u * s);
            const Complex c = leg.from + u * s;
            centre.re = c.real();
            centre.im = c.imag();

            // Taylor shift of P - E to the centre
            for (std::size_t i = 0; i < p.size(); ++i) {
                shifted[i].re = p[i].real();
                shifted[i].im = p[i].imag();
            }
            for (std::size_t i = 0; i + 1 < p.size(); ++i)
                for (std::size_t j = p.size() - 1; j-- > i;) {
                    mul_into(prod, centre, shifted[j + 1], tmp);
                    shifted[j] += prod;
                }
            // L(L+1) / (c + t)^2 = L(L+1) sum (k+1) (-t)^k / c^(k+2)
            norm = centre.re * centre.re;
            norm += centre.im * centre.im;
            inv.re = centre.re / norm;
            inv.im = -centre.im / norm;
            mul_into(pw, inv, inv, tmp);
            for (int i = 0; i <= order; ++i) {
                const double w = centrifugal * (i + 1) * (i % 2 == 0 ? 1 : -1);
                q[i].re = pw.re * w;
                q[i].im = pw.im * w;
                if (i < static_cast<int>(shifted.size())) q[i] += shifted[i];
                mul_into(prod, pw, inv, tmp);
                std::swap(pw, prod);
            }

            a[0] = psi;
            a[1] = dpsi;
            for (int i = 0; i + 2 <= order; ++i) {
                acc.re = 0;
                acc.im = 0;
                for (int j = 0; j <= i; ++j) {
                    mul_into(prod, q[j], a[i - j], tmp);
                    acc += prod;
                }
                const double div = static_cast<double>(i + 1) * (i + 2);
                a[i + 2].re = acc.re / div;
                a[i + 2].im = acc.im / div;
            }

            // largest step whose last terms stay below the tolerance
            const double scale = std::max(log2_abs(a[0]), log2_abs(a[1]));
            double h = std::min(len - s, 0.5 * std::abs(c));
            for (int i = order - 2; i <= order; ++i) {
                const double la = log2_abs(a[i]);
                if (la == -std::numeric_limits<double>::infinity()) continue;
                h = std::min(h, 0.9 * std::exp2((log2_tol + scale - la) / i));
            }
            if (h < 1e-12 * len) throw StepUnderflow("integrate_ode: step size underflow", c);

            // sum the series at t = next - c, exact in mp so consecutive centres chain
            const double s_next = (h >= len - s) ? len : s + h;
            const Complex next = leg.from + u * s_next;
            t.re = next.real();
            t.im = next.imag();
            t.re -= centre.re;
            t.im -= centre.im;
            val = a[order];
            der.re = 0;
            der.im = 0;
            for (int i = order; i-- > 0;) {
                mul_into(prod, der, t, tmp);
                der = prod;
                der += val;
                mul_into(prod, val, t, tmp);
                val = prod;
                val += a[i];
            }
            psi = val;
            dpsi = der;

            // rescale by a power of two to keep |psi| near one
            long e = 0;
            mpf_get_d_2exp(&e, (abs(psi.re) > abs(psi.im) ? psi.re : psi.im).get_mpf_t());
            for (mpf_class* x : {&psi.re, &psi.im, &dpsi.re, &dpsi.im}) {
                if (e > 0) mpf_div_2exp(x->get_mpf_t(), x->get_mpf_t(), static_cast<mp_bitcnt_t>(e));
                if (e < 0) mpf_mul_2exp(x->get_mpf_t(), x->get_mpf_t(), static_cast<mp_bitcnt_t>(-e));
            }

            s = s_next;
            record(next);
        }
    }
    return out;
}

}  // namespace

Trajectory integrate_ode(const Coefficient& q, Complex energy, const Contour& contour, Direction direction,
                         const IntegrationOptions& options) {
    contour.validate();
    if (options.digits > 0)
        throw std::invalid_argument("integrate_ode: multiprecision stepping needs the decadic potential");
    const auto legs = path_legs(contour, direction);
    const double total = arc_length(contour.vertices());

    auto big_q = [&](Complex r) { return q(r) - energy; };
    Complex w = wkb_start(big_q, legs);

    bool pole_mode = false;  // state holds z = 1/y
    Trajectory out;
    auto record = [&](Complex r) {
        out.r.push_back(r);
        out.y.push_back(pole_mode ? 1.0 / w : w);
    };
    record(legs.front().from);

    auto stepper = odeint::make_controlled(options.abs_tolerance, options.rel_tolerance, Stepper());
    const double min_step = options.min_step * total;
    double dt = 1e-3 * total;
    long steps = 0;

    for (const auto& leg : legs) {
        const double len = std::abs(leg.to - leg.from);
        if (len == 0.0) continue;
        const Complex u = (leg.to - leg.from) / len;
        auto rhs = [&](const Complex& state, Complex& dstate, double s) {
            const Complex qr = big_q(leg.from + u * s);
            dstate = pole_mode ? (1.0 - qr * state * state) * u : (qr - state * state) * u;
        };
        double s = 0.0;
        stepper.reset();
        while (s < len) {
            if (++steps > 5'000'000) throw StepUnderflow("integrate_ode: step budget exhausted", leg.from + u * s);
            double h = std::min(dt, len - s);
            if (stepper.try_step(rhs, w, s, h) == odeint::success) {
                dt = h;
                const Complex r = leg.from + u * s;
                const double scale = 1.0 + std::sqrt(std::abs(big_q(r)));
                if (!pole_mode && std::abs(w) > 10 * scale) {
                    pole_mode = true;
                    w = 1.0 / w;
                    stepper.reset();
                } else if (pole_mode && std::abs(w) * scale > 10) {
                    pole_mode = false;
                    w = 1.0 / w;
                    stepper.reset();
                }
                record(r);
            } else {
                dt = h;
                if (dt < min_step) throw StepUnderflow("integrate_ode: step size underflow", leg.from + u * s);
            }
            if (!std::isfinite(std::abs(w)))
                throw StepUnderflow("integrate_ode: solution left the representable range", leg.from + u * s);
        }
    }
    return out;
}

namespace {

Coefficient decadic_q(const PotentialCoeffs& coeffs, double L) {
    const double centrifugal = L * (L + 1);
    return [coeffs, centrifugal](Complex r) { return centrifugal / (r * r) + regular_potential_eval(coeffs, r); };
}

// Mismatch from a function integrating one side to the matching point. On
// step failure the matching point is moved once each way before giving up.
template <class Run>
double mismatch_with(const Run& run, const Contour& contour) {
    auto once = [&](const Contour& c) {
        const Complex yl = run(c, Direction::from_left).y.back();
        const Complex yr = run(c, Direction::from_right).y.back();
        if (!std::isfinite(std::abs(yl)) || !std::isfinite(std::abs(yr))) return 0.0;
        return std::real(yl - yr) / std::sqrt((1 + std::norm(yl)) * (1 + std::norm(yr)));
    };
    try {
        return once(contour);
    } catch (const StepUnderflow&) {
    }
    for (double shift : {0.3, -0.3}) {
        Contour moved = contour;
        moved.match_offset += shift;
        try {
            return once(moved);
        } catch (const StepUnderflow&) {
            if (shift < 0) throw;
        }
    }
    return 0.0;
}

}  // namespace

Trajectory integrate_ode(const PotentialCoeffs& coeffs, double L, Complex energy, const Contour& contour,
                         Direction direction, const IntegrationOptions& options) {
    if (options.digits <= 0) return integrate_ode(decadic_q(coeffs, L), energy, contour, direction, options);
    contour.validate();
    const auto legs = path_legs(contour, direction);
    const Coefficient q = decadic_q(coeffs, L);
    const Complex y0 = wkb_start([&](Complex r) { return q(r) - energy; }, legs);
    return integrate_taylor(coeffs, L, energy, legs, y0, options.digits);
}

double wronskian_mismatch(const Coefficient& q, double energy, const Contour& contour,
                          const IntegrationOptions& options) {
    return mismatch_with(
        [&](const Contour& c, Direction dir) { return integrate_ode(q, energy, c, dir, options); }, contour);
}

double wronskian_mismatch(const PotentialCoeffs& coeffs, double L, double energy, const Contour& contour,
                          const IntegrationOptions& options) {
    return mismatch_with(
        [&](const Contour& c, Direction dir) { return integrate_ode(coeffs, L, energy, c, dir, options); },
        contour);
}

namespace {

ShootingResult secant_search(const std::function<double(double)>& f, double e_guess, const ShootingOptions& options) {
    ShootingResult res;
    try {
        double e0 = e_guess, e1 = e_guess + 1e-3;
        double m0 = f(e0), m1 = f(e1);
        res.energy = e1;
        res.wronskian_residual = std::abs(m1);
        int stalled = 0;
        ShootingResult best = res;
        for (int it = 1; it <= options.max_iterations; ++it) {
            res.iterations = it;
            if (m1 == 0.0) {
                res.converged = true;
                break;
            }
            if (m1 == m0) break;
            const double e2 = e1 - m1 * (e1 - e0) / (m1 - m0);
            if (!std::isfinite(e2) || std::abs(e2 - e_guess) > options.window) break;
            const double m2 = f(e2);
            const double step = std::abs(e2 - e1);
            e0 = e1;
            m0 = m1;
            e1 = e2;
            m1 = m2;
            res.energy = e1;
            res.wronskian_residual = std::abs(m1);
            const bool inside = res.wronskian_residual <= options.mismatch_tolerance;
            if (inside && step <= options.energy_tolerance * (1 + std::abs(e1))) {
                res.converged = true;
                break;
            }
            if (inside && step <= options.stall_tolerance * (1 + std::abs(e1))) {
                if (stalled == 0 || res.wronskian_residual < best.wronskian_residual) best = res;
                if (++stalled == 3) {
                    res.energy = best.energy;
                    res.wronskian_residual = best.wronskian_residual;
                    res.converged = true;
                    break;
                }
            } else {
                stalled = 0;
            }
        }
    } catch (const StepUnderflow&) {
        res.converged = false;
    }
    return res;
}

}  // namespace

ShootingResult find_eigenvalue(const std::function<Coefficient(double)>& q_of_energy, double e_guess,
                               const Contour& contour, const ShootingOptions& options) {
    contour.validate();
    return secant_search(
        [&](double e) { return wronskian_mismatch(q_of_energy(e), e, contour, options.integration); }, e_guess,
        options);
}

ShootingResult find_eigenvalue(const PotentialCoeffs& coeffs, double L, double e_guess, const Contour& contour,
                               const ShootingOptions& options) {
    contour.validate();
    return secant_search(
        [&](double e) { return wronskian_mismatch(coeffs, L, e, contour, options.integration); }, e_guess, options);
}

ShootingResult find_eigenvalue(const ModelSpec& spec, double coupling, double e_guess, const Contour& contour,
                               const ShootingOptions& options) {
    spec.validate();
    return find_eigenvalue(potential_coeffs(spec, coupling), angular_L(spec.big_m), e_guess, contour, options);
}

}  // namespace qes
