#pragma once
// Shakiness (infinitesimal flexibility) detection and first-order motions.
//
// Three independent detectors are provided and must agree on sandglass
// designs with a developable belt:
//   1. the closed-form family condition: a quartic in c = cos(pi/n) whose
//      coefficients depend on (q1, q2) through sqrt(q2) and sqrt(4 q1 - 1),
//   2. a vanishing (normalized) discriminant of the radial quartic solved by
//      realize() — shaky designs are exactly the double-root designs,
//   3. rank deficiency of the rigidity matrix built from the first-order
//      edge-length-preservation constraints.

#include <sandglass/design.hpp>
#include <sandglass/solver.hpp>

#include <Eigen/Dense>

#include <array>
#include <vector>

namespace sandglass {

// Coefficients [w4, w3, w2, w1, w0] (descending powers of c) of the family
// condition for shaky developable sandglasses. Requires q2 > 0 and
// W = 4*q1 - 1 > 0 (throws Domain).
std::array<double, 5> shakiness_coefficients(double q1, double q2);

// Evaluation of the family condition at c = cos(pi/n); raw and divided by
// the largest coefficient magnitude. Near zero iff the design is shaky.
double shakiness_residual(int n, double q1, double q2);
double shakiness_residual_normalized(int n, double q1, double q2);

// Smallest q2 > 0 on which the family condition vanishes for the given n and
// q1, found by a log-spaced bracketing scan over q2 in [1e-6, 1e4] refined
// by bisection to 1e-12, and verified downstream: the returned q2 must give
// a radial quartic with a (near) double root. Larger verified roots are
// appended to *alternates when given. Throws NoSolution when no bracket
// survives verification (expected outside a narrow q1 band).
double solve_shaky_q2(int n, double q1, std::vector<double> *alternates = nullptr);

// Symmetric first-order motion. The full velocity field it encodes:
//     v(A_i) = (0,0,z), v(B_i) = (0,0,-z),
//     v(D_i) = Rot(2 pi i/n)*(u,0,v), v(C_{i+1}) = Rot(2 pi i/n)*(u c,u s,-v).
struct InfinitesimalFlex {
    double u = 0, v = 0, z = 0;
};

// First-order length-preservation constraints of the six edge-class
// representatives of a unit cell (rows: B0D0, B0D1, A0D0, B0C1, D0C1, C1D1)
// acting on (u, v, z). Shaky <=> smallest singular value of the
// row-normalized matrix < 1e-7 (generic designs have rank 3; the symmetric
// velocity space contains no rigid motion, so any kernel vector is a
// genuine flex).
Eigen::Matrix<double, 6, 3> reduced_rigidity_matrix(const Realization &real);

// Smallest singular value of the row-normalized reduced matrix.
double reduced_rigidity_sigma_min(const Realization &real);

// Full first-order constraint system without any symmetry assumption:
// 8n rows (one per belt edge) over 6 + 6n unknowns — the lower plate ring is
// pinned, the upper plate ring moves as a rigid body (translation + angular
// velocity), and every waist vertex is free. A nontrivial kernel certifies
// shakiness; its dimension is 1 on the shaky designs of this family.
Eigen::MatrixXd full_rigidity_matrix(const Realization &real);

// Kernel dimension of the row-normalized full matrix (singular values below
// 1e-7 times the largest).
int full_rigidity_kernel_dim(const Realization &real);

// Kernel basis vectors (columns) of the full matrix, same threshold.
Eigen::MatrixXd full_rigidity_kernel(const Realization &real);

// Solve the two projection equations
//     (D0 - A0) . v(A0) = (D0 - A0) . v(D0)
//     (D0 - B0) . v(B0) = (D0 - B0) . v(D0)
// for (u, v) at the given cap speed z. Linear in z. On shaky realizations
// the remaining edge constraint (the D0C1 row) is satisfied as well; on
// generic ones it is violated — use d0c1_constraint_residual to test.
// Throws SingularSystem when the 2x2 system degenerates.
InfinitesimalFlex infinitesimal_flex(const Realization &real, double z = 1.0);

// Residual of the one constraint not used by infinitesimal_flex():
// 2 r (1 - c) u - 4 h v. Zero (to tolerance) iff the flex is genuine.
double d0c1_constraint_residual(const Realization &real, const InfinitesimalFlex &flex);

// Combined verdict of the three detectors for an origami sandglass design.
struct ShakyCheck {
    double family_residual = 0;   // normalized family-condition value
    double discriminant = 0;      // normalized radial-quartic discriminant
    double sigma_min = 1;         // reduced-matrix smallest singular value
    bool family_ok = false, discriminant_ok = false, rank_ok = false;
    bool shaky() const { return family_ok && discriminant_ok && rank_ok; }
    bool agree() const { return family_ok == discriminant_ok && discriminant_ok == rank_ok; }
};

// Runs all three detectors. The rank detector needs a realization; it uses
// the double root when the discriminant is small, else the realization
// closest to the double-root cluster. Requires spec.origami.
ShakyCheck shaky_check(const DesignSpec &spec);

} // namespace sandglass
