#pragma once
// Strain-energy landscape over the symmetric configuration space (H, h, r),
// extremal-snap designs (closed state on the self-contact boundary), the
// mountain-pass saddle between a snapping pair, and the snappability index.

#include <sandglass/design.hpp>
#include <sandglass/mesh.hpp>

#include <Eigen/Dense>

#include <array>
#include <string>
#include <vector>

namespace sandglass {

// Dimensionless total elastic strain-energy density of the belt, treated as
// a bar framework with undeformable skeleton edges:
//     E(H,h,r) = [ 4n (Q1-S1)^2 / (8 L1^3)
//                + 2n (Q2-S2)^2 / (8 L2^3)
//                + 2n (Q3-S3)^2 / (8 L3^3) ] / (4n L1 + 2n L2 + 2n L3)
// with (S1,S2,S3) the squared edge lengths of the configuration and
// L_k = sqrt(Q_k) the (constant) design lengths. E >= 0, and E = 0 exactly
// at realizations of the design. Gradient and Hessian are closed-form.
class EnergyLandscape {
  public:
    explicit EnergyLandscape(const DesignSpec &spec);

    const DesignSpec &spec() const { return spec_; }
    double denominator() const { return denom_; }

    double value(const Eigen::Vector3d &x) const; // x = (H, h, r)
    Eigen::Vector3d gradient(const Eigen::Vector3d &x) const;
    Eigen::Matrix3d hessian(const Eigen::Vector3d &x) const;

  private:
    DesignSpec spec_;
    double denom_;
    std::array<double, 3> weight_; // multiplicity / (8 L_k^3 * denom)
};

// Value of the closed-state design condition exactly as printed, linear in
// c = cos(pi/n):
//     4 c Q2 Q1 - 2 c Q2^2 - 2 Q1^2 - 28 Q2 Q1 - 2 Q2^2 + Q1 + 5 Q2
//     - 2 c Q1^2 + W^{3/2} sqrt(Q2) + 8 Q2^{3/2} sqrt(W) + 4 Q1 sqrt(Q2 W)
// with W = 4 Q1 - 1. Zero iff the developable sandglass design (q1, q2) has
// a realization with coplanar (A0, B0, D0, C1).
double extremal_condition_residual(int n, double q1, double q2);

// All q2 > 0 satisfying the closed-state condition at this n, q1, found as
// the real roots of the equivalent quartic in y = sqrt(q2), ascending. Each
// returned value back-substitutes into the printed condition with residual
// below 1e-10. Requires 4*q1 - 1 > 0.
std::vector<double> extremal_q2_candidates(int n, double q1);

// Smallest candidate (the branch that carries snapping pairs).
// Throws NoSolution when the quartic has no admissible root.
double extremal_q2(int n, double q1);

// Coplanarity test for (A0, B0, D0, C1). The tetrahedron volume factors as
//     6 V = -(2 r s - 1)(2 H r s + h) / (2 s),
// so coplanarity comes in two flavors: dihedral angle pi along D0C1
// (factor_pi = 0) or dihedral angle 0 — the closed state (factor_zero = 0).
struct ClosedState {
    double tet_volume = 0;   // signed volume of the tetrahedron
    double factor_pi = 0;    // 2 r s - 1
    double factor_zero = 0;  // 2 H r s + h
    bool coplanar = false;   // |tet_volume| < 1e-9
    bool closed = false;     // coplanar via the factor_zero branch
};
ClosedState closed_state_check(const Realization &real);

// A mountain-pass saddle of the landscape between two zero-energy
// configurations, located by a string relaxation (64 nodes) refined with
// Newton iteration on the gradient.
struct SaddleInfo {
    Eigen::Vector3d x;            // saddle (H, h, r)
    std::array<double, 3> S;      // squared edge lengths at the saddle
    double sigma = 0;             // E at the saddle = snappability
    double grad_norm = 0;
    Eigen::Vector3d eigenvalues;  // Hessian spectrum, ascending
    int iterations = 0;
    bool everted = false;         // true if the path runs to the mirrored endpoint
    int saddle_node = -1;         // index of the saddle within `path`
    std::vector<Eigen::Vector3d> path; // relaxed transition path, endpoints included
};

// Both mirror pairings of the endpoints are tried (the energy is even under
// (H,h) -> (-H,-h)); the valid saddle with the lower barrier wins. A valid
// saddle has ||grad E|| < 1e-10, exactly one negative Hessian eigenvalue
// (else NoPathConvergence) and squared lengths (S1,S2,S3) that admit a shaky
// realization: the radial quartic of that design has a double root within
// 1e-6 normalized discriminant (else SaddleNotShaky).
SaddleInfo find_saddle(const EnergyLandscape &land, const Realization &a, const Realization &b);

// A verified snapping pair at an extremal design.
struct SnapResult {
    DesignSpec spec;
    Realization open, closed;
    SaddleInfo saddle;
    double v_open = 0, v_closed = 0; // mesh volumes
    bool open_intersection_free = false;
    bool closed_coplanar = false;
    bool saddle_shaky = false;
    int branch = 0;                      // index into the ascending q2 candidates
    std::vector<std::string> branch_log; // why earlier branches were rejected
};

// Composes the closed-state condition, the developability condition and
// realize(): walks the q2 branches in ascending order, identifies the closed
// realization (coplanar, on the self-contact boundary) and an
// intersection-free open one, and locates the saddle between them. Throws
// NoSolution when no
// branch yields candidates, VerificationFailed when candidates exist but
// none produces a valid pair (the log tells why).
SnapResult snap_pair(int n, double q1);

// Non-throwing variant for sweep drivers: `failure` is "" on success, else
// the stage code of the furthest-progressing branch — one of NO_EXTREMAL_Q2,
// NO_REALIZATION, SELF_INTERSECTING, NO_SADDLE, SADDLE_NOT_SHAKY.
struct SnapAttempt {
    bool ok = false;
    SnapResult result;
    std::string failure;
    std::vector<std::string> log;
};
SnapAttempt snap_pair_detailed(int n, double q1);

} // namespace sandglass
