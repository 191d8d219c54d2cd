#include "qes/wedges.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace qes {
namespace {
constexpr double pi = std::numbers::pi;
}

double reduce_angle(double angle) {
    double r = std::remainder(angle, 2 * pi);
    if (r <= -pi) r += 2 * pi;
    return r;
}

std::vector<Sector> sectors_for_degree(int z) {
    if (z < 1) throw std::invalid_argument("sectors_for_degree: z must be >= 1");
    const double half = pi / (4.0 * z);
    std::vector<Sector> out;
    for (int k = 0; k < 2 * z; ++k) {
        const double center = k * pi / z;
        out.push_back({center - half, center + half});
    }
    return out;
}

Sector mirror(const Sector& s) {
    return {pi - s.hi, pi - s.lo};
}

bool same_sector(const Sector& a, const Sector& b, double tol) {
    return std::abs(reduce_angle(a.center() - b.center())) <= tol && std::abs(a.half_width() - b.half_width()) <= tol;
}

bool contains(const Sector& s, double angle) {
    const double c = s.center();
    const double a = c + reduce_angle(angle - c);
    return a > s.lo && a < s.hi;
}

PtPairing pt_pairs(int z) {
    const auto sectors = sectors_for_degree(z);
    PtPairing out;
    std::vector<bool> used(sectors.size(), false);
    for (std::size_t i = 0; i < sectors.size(); ++i) {
        if (used[i]) continue;
        const Sector image = mirror(sectors[i]);
        if (same_sector(image, sectors[i], 1e-9)) {
            used[i] = true;
            out.self_symmetric.push_back(sectors[i]);
            continue;
        }
        for (std::size_t j = i + 1; j < sectors.size(); ++j) {
            if (used[j] || !same_sector(image, sectors[j], 1e-9)) continue;
            used[i] = used[j] = true;
            const bool i_right = std::cos(sectors[i].center()) > 0;
            WedgePair pair{i_right ? sectors[j] : sectors[i], i_right ? sectors[i] : sectors[j], 0};
            out.pairs.push_back(pair);
            break;
        }
    }
    std::stable_sort(out.pairs.begin(), out.pairs.end(), [](const WedgePair& x, const WedgePair& y) {
        const bool xr = contains(x.right, 0.0);
        const bool yr = contains(y.right, 0.0);
        if (xr != yr) return xr;
        return reduce_angle(x.right.center()) > reduce_angle(y.right.center());
    });
    for (std::size_t j = 0; j < out.pairs.size(); ++j) out.pairs[j].index = static_cast<int>(j) + 1;
    return out;
}

BenderSectors bender_sectors(double delta) {
    if (!(delta > -2)) throw std::invalid_argument("bender_sectors: delta must exceed -2");
    const double w = pi / (4 + 2 * delta);
    BenderSectors b;
    b.half_width = w;
    b.first = {{-3 * w - pi / 2, -w - pi / 2}, {w - pi / 2, 3 * w - pi / 2}, 1};
    b.second = {{-5 * w - pi / 2, -3 * w - pi / 2}, {3 * w - pi / 2, 5 * w - pi / 2}, 2};
    b.second_compatible_with_real_line = delta > 1 && delta < 3;
    return b;
}

}  // namespace qes
