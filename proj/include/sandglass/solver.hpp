#pragma once
// Enumeration of all symmetric realizations (H, h, r) of a sandglass design.

#include <sandglass/design.hpp>

#include <array>
#include <vector>

namespace sandglass {

// The three independent constraint residuals of a configuration:
//     g1 = Q1 - S1(H,h,r),  g2 = Q2 - S2(H,h,r),  g3 = Q3 - S3(H,h,r).
// (The fourth class gives S4 = S1 identically, so it repeats g1.)
std::array<double, 3> constraint_residuals(const DesignSpec &spec, double H, double h, double r);

// Eliminating H and h turns the system into one quartic in the waist
// radius r. With g = 1 - c the closed-form coefficients (descending) are:
//     r^4 : -4*s^2
//     r^3 :  8*R*s^2
//     r^2 : -1 + 4*c*Q3 + 4*(1-c)*(Q1+Q2)
//     r^1 :  4*R*((1-c)*(Q2-Q1) - (1+c)*Q3)
//     r^0 :  (Q2-Q1)^2 + Q3^2 - 2*Q3*(Q1+Q2) + 4*Q3*R^2
// The r^4 coefficient equals -4*sin^2(pi/n) and never vanishes for n >= 3.
std::array<double, 5> r_quartic_coefficients(const DesignSpec &spec);

struct RealizedItem {
    Realization real;
    bool double_root = false; // r is a (numerically) repeated quartic root
    bool degenerate = false;  // some mesh face has (near) zero area
    double residual = 0;      // max |constraint residual|
};

struct RealizationSet {
    std::vector<RealizedItem> items;
    double discriminant = 0; // max-abs-normalized quartic discriminant
};

// All canonical realizations of the design (mirror duplicates removed),
// sorted by r. Back-substitution per admissible quartic root r:
//     h = +sqrt((Q3 - 2*(1-c)*r^2)/4),
//     H = (Q2 - Q1 + 2*R*r*(1-c)) / (4*h)       for h > 0,
// with the h = 0 boundary handled through H = sqrt(K(r)) when the linear
// factor P(r) vanishes as well; representatives are then mapped to H >= 0.
// Throws EmptySet when no real realization exists and DegenerateSpec when
// the design cannot close up for structural reasons.
RealizationSet realize(const DesignSpec &spec);

} // namespace sandglass
