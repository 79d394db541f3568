#pragma once

namespace sandglass {

inline constexpr char kVersion[] = "0.1.0";

// One tolerance ladder for the whole toolkit. Geometric identities are held
// to near machine precision, derived constraint residuals one notch looser,
// and rank/contact decisions looser still so they stay stable under the
// rounding of the upstream solves.
inline constexpr double kGeomTol        = 1e-12; // exact geometric identities
inline constexpr double kResidualTol    = 1e-9;  // constraint residuals of computed realizations
inline constexpr double kIntersectEps   = 1e-8;  // face-contact thickness in self-intersection tests
inline constexpr double kRankTol        = 1e-7;  // smallest-singular-value threshold, row-normalized
inline constexpr double kDoubleRootTol  = 1e-10; // |quartic discriminant| after max-abs coefficient scaling
inline constexpr double kSaddleGradTol  = 1e-12; // Newton target on the energy gradient norm
inline constexpr double kSaddleShakyTol = 1e-6;  // discriminant slack for the saddle singularity check
inline constexpr double kCoplanarTol    = 1e-9;  // tetrahedron volume bound for the closed-state test

} // namespace sandglass
