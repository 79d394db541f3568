#pragma once
// Planar development (unrolling) of the triangle belt, the developability
// condition it induces, and the intrinsic angle-defect check.

#include <sandglass/design.hpp>

#include <string>
#include <utility>
#include <vector>

namespace sandglass {

// Squared third edge length that makes a sandglass belt developable:
//     q3 = q1 + q2 - sqrt(q2 * (4*q1 - 1)).
// Requires W = 4*q1 - 1 > 0 (throws Domain otherwise). The "+" sibling of
// the square root does not flatten the vertex stars and is rejected by the
// angle-defect tests.
double origami_q3(double q1, double q2);

// Development of one belt period. All coordinates follow
//     B*_i = (i, 0),          D*_i = (a + i, b),
//     C*_{i+1} = (cstar + i, f),  A*_i = (a + e + i, b + f),
// with a = (q4 - q1 - 1)/2, cstar = a + 1/2, e = -cstar,
//     b = sqrt(2 q1 + 2 q4 - 1 - (q1 - q4)^2)/2,
//     f = sqrt(4 q2 - (q1 - q4)^2)/2,  d = f.
// b, d, f must be positive for an overlap-free strip (throws Overlap).
struct Development {
    int n = 3;
    double a = 0, b = 0, f = 0;
    double cstar = 0, e = 0, d = 0;

    // planar positions; i may run 0..n (the seam column is duplicated)
    std::pair<double, double> B(int i) const { return {double(i), 0.0}; }
    std::pair<double, double> D(int i) const { return {a + i, b}; }
    std::pair<double, double> C(int i) const { return {cstar + (i - 1), f}; } // i >= 1
    std::pair<double, double> A(int i) const { return {a + e + i, b + f}; }
};

Development develop(const DesignSpec &spec);

// Residual of the general (q4 free) developability condition,
//     q3 - (1/4 + (f - b)^2);
// zero exactly on developable designs.
double general_origami_residual(const DesignSpec &spec);

// Intrinsic angle defects (2*pi minus the sum of incident triangle angles)
// at a lower-waist and an upper-waist vertex, computed from edge lengths
// alone. Both vanish iff the belt is developable; the two values agree
// identically because the vertex stars carry the same angle multiset.
std::pair<double, double> angle_defect(const DesignSpec &spec);

// Crease pattern as a standalone SVG 1.1 document. The strip of n cells is
// drawn with 6 interior creases per cell (the five edges around each upper
// waist vertex plus the long diagonal); the zig-zag cell separators and the
// strip outline are emitted as their own element classes, and plate
// polygons are attached for n > 3. Mountain/valley is decided by the
// dihedral angles of `reference` (mountain = inside dihedral > pi), drawn
// solid/dashed. 1 length unit = 100 SVG user units.
std::string crease_pattern_svg(const Realization &reference);

} // namespace sandglass
