#pragma once
// Flex normalization and the shakeability index: the curvature at t = 0 of
// the strain-energy barrier function along the direction in squared-edge-
// length space singled out by the infinitesimal motion.

#include <sandglass/design.hpp>
#include <sandglass/rigidity.hpp>

#include <array>
#include <vector>

namespace sandglass {

// How a flex is scaled before computing the index. MeanRelativeRate is the
// default: the mean of the relative instantaneous changes of the squared
// edge lengths equals 1,
//     (4n d1/Q1 + 2n d2/Q2 + 2n d3/Q3) / (8n) = 1.
// UnitCapSpeed scales so the plate speed z is 1 instead; the index value
// depends on this choice, so results carry the identifier along.
enum class FlexNormalization { MeanRelativeRate, UnitCapSpeed };
const char *flex_normalization_name(FlexNormalization norm);

// Squared velocity differences across the three edge-class representatives:
//     d1 = |v(B0)-v(D0)|^2 = u^2 + (v+z)^2
//     d2 = |v(B0)-v(C1)|^2 = u^2 + (v-z)^2
//     d3 = |v(D0)-v(C1)|^2 = 2*u^2*(1-c) + 4*v^2
std::array<double, 3> flex_velocity_deltas(const DesignSpec &spec,
                                           const InfinitesimalFlex &flex);

struct NormalizedFlex {
    InfinitesimalFlex flex;
    std::array<double, 3> d = {0, 0, 0};
    FlexNormalization normalization = FlexNormalization::MeanRelativeRate;
};

// Rescales (u, v, z); the d_i scale quadratically, so the positive factor is
// unique. Throws ZeroFlex on a trivial flex.
NormalizedFlex normalize_flex(const DesignSpec &spec, const InfinitesimalFlex &flex,
                              FlexNormalization norm = FlexNormalization::MeanRelativeRate);

// Substituting S_k(t) = Q_k + t*d_k into the barrier-energy formula makes it
// exactly quadratic in t, so the curvature at t = 0 is the closed form
//     kappa = 2*[4n d1^2/(8 L1^3) + 2n d2^2/(8 L2^3) + 2n d3^2/(8 L3^3)]
//             / (4n L1 + 2n L2 + 2n L3).
// Always positive for a nontrivial flex.
double shakeability(const DesignSpec &spec, const NormalizedFlex &flex);

// A fully solved shaky design at the given q1: q2 from the family condition,
// q3 from developability, the double-root realization, its normalized flex
// and kappa.
struct ShakeResult {
    DesignSpec spec;
    Realization real;
    NormalizedFlex flex;
    double kappa = 0;
    std::vector<double> alternate_q2; // verified larger roots of the family condition
};
ShakeResult shake_design(int n, double q1,
                         FlexNormalization norm = FlexNormalization::MeanRelativeRate);

} // namespace sandglass
