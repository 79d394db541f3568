#pragma once
// Small real-polynomial helpers shared by the solvers. Coefficients are
// stored highest degree first.

#include <array>
#include <vector>

namespace sandglass {

// All real roots (Newton-polished, deduplicated) of a polynomial with the
// given coefficients. Leading near-zero coefficients are dropped; roots of
// multiplicity m appear once. Eigenvalues of the companion matrix seed the
// search, so clustered roots with small imaginary parts are recovered via
// the derivative when the discriminant indicates a genuine double root.
std::vector<double> real_roots(const std::vector<double> &coeffs,
                               double imag_tol = 1e-7);

double eval_poly(const std::vector<double> &coeffs, double x);
std::vector<double> derivative(const std::vector<double> &coeffs);

// Newton iteration on the polynomial; returns the (possibly unimproved)
// refined root.
double polish_root(const std::vector<double> &coeffs, double x0, int iters = 50);

// Discriminant of a*x^4 + b*x^3 + c*x^2 + d*x + e (degree-4 closed form).
double quartic_discriminant(const std::array<double, 5> &a);

// Same, after scaling the coefficients so max|a_i| = 1; comparable across
// designs, used for double-root decisions.
double quartic_discriminant_normalized(const std::array<double, 5> &a);

} // namespace sandglass
