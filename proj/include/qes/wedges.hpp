#pragma once

// Angular sectors of the complex r plane in which exp(-r^(2z)/(2z)) decays,
// and their pairing under the PT mirror phi -> pi - phi.

#include <vector>

namespace qes {

/// Open angular interval (lo, hi), stored unreduced around its defining
/// centre. Angles are reduced mod 2 pi only when compared.
struct Sector {
    double lo = 0;
    double hi = 0;

    double center() const { return 0.5 * (lo + hi); }
    double half_width() const { return 0.5 * (hi - lo); }
};

struct WedgePair {
    Sector left;
    Sector right;
    int index = 0;  ///< j = 1, 2, ...
};

struct PtPairing {
    std::vector<WedgePair> pairs;
    std::vector<Sector> self_symmetric;
};

struct BenderSectors {
    double half_width = 0;  ///< Delta = pi / (4 + 2 delta)
    WedgePair first;
    WedgePair second;
    /// The second pair can be reached from the real line for 1 < delta < 3.
    bool second_compatible_with_real_line = false;
};

/// The 2z sectors where Re(x^(2z)) > 0: centres k pi / z, half-width pi/(4z),
/// k = 0..2z-1.
std::vector<Sector> sectors_for_degree(int z);

/// Mirror image of a sector under phi -> pi - phi.
Sector mirror(const Sector& s);

/// Pairs of distinct sectors exchanged by the mirror, and the sectors it
/// fixes. Pair j = 1 is the one containing the real axis when there is one;
/// the rest follow by decreasing centre of the right sector (reduced into
/// (-pi, pi]).
PtPairing pt_pairs(int z);

/// Sectors of the x^2 (ix)^(2 delta) family: Delta = pi/(4 + 2 delta),
/// S_L = (-3D - pi/2, -D - pi/2), S_R = (D - pi/2, 3D - pi/2), and the next
/// pair out, S_L2 = (-5D - pi/2, -3D - pi/2), S_R2 = (3D - pi/2, 5D - pi/2).
/// Requires delta > -2.
BenderSectors bender_sectors(double delta);

/// True iff the angle, shifted by a multiple of 2 pi into the sector's frame,
/// lies strictly inside (lo, hi).
bool contains(const Sector& s, double angle);

/// Angle reduced into (-pi, pi].
double reduce_angle(double angle);

/// Whether two sectors coincide modulo 2 pi, to tol.
bool same_sector(const Sector& a, const Sector& b, double tol = 1e-12);

}  // namespace qes
