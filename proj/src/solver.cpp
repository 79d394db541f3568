#include <sandglass/solver.hpp>

#include <sandglass/constants.hpp>
#include <sandglass/error.hpp>
#include <sandglass/mesh.hpp>
#include <sandglass/polynomial.hpp>

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <utility>

namespace sandglass {

std::array<double, 3> constraint_residuals(const DesignSpec &d, double H, double h, double r) {
    const auto S = squared_edge_lengths(d, H, h, r);
    return {d.q1 - S[0], d.q2 - S[1], d.q3 - S[2]};
}

std::array<double, 5> r_quartic_coefficients(const DesignSpec &d) {
    if (!d.sandglass)
        throw Error(ErrorCode::Domain, "realization solver requires a sandglass design (q1 == q4)");
    const double c = d.c, s = d.s, R = d.R;
    const double Q1 = d.q1, Q2 = d.q2, Q3 = d.q3;
    const double g = 1.0 - c;
    return {
        -4.0 * s * s,
        8.0 * R * s * s,
        -1.0 + 4.0 * c * Q3 + 4.0 * g * (Q1 + Q2),
        4.0 * R * (g * (Q2 - Q1) - (1.0 + c) * Q3),
        (Q2 - Q1) * (Q2 - Q1) + Q3 * Q3 - 2.0 * Q3 * (Q1 + Q2) + 4.0 * Q3 * R * R,
    };
}

namespace {

// auxiliary linear/quadratic forms of the elimination; see solver.hpp
double P_of(const DesignSpec &d, double r) {
    return d.q2 - d.q1 + 2.0 * d.R * r * (1.0 - d.c);
}
double K_of(const DesignSpec &d, double r) {
    return 0.5 * (d.q1 + d.q2) - d.R * d.R - r * r + d.R * r * (1.0 + d.c);
}
double h2_of(const DesignSpec &d, double r) {
    return (d.q3 - 2.0 * (1.0 - d.c) * r * r) / 4.0;
}

double max_abs_residual(const DesignSpec &d, double H, double h, double r) {
    const auto g = constraint_residuals(d, H, h, r);
    return std::max({std::abs(g[0]), std::abs(g[1]), std::abs(g[2])});
}

// Damped Gauss-Newton touch-up on the raw 3x3 system; keeps a step only if
// it lowers the residual, so near-singular (double-root) configurations are
// left where the algebraic path put them.
void polish_configuration(const DesignSpec &d, double &H, double &h, double &r) {
    using Eigen::Matrix3d;
    using Eigen::Vector3d;
    for (int it = 0; it < 8; ++it) {
        const auto g = constraint_residuals(d, H, h, r);
        const double res = std::max({std::abs(g[0]), std::abs(g[1]), std::abs(g[2])});
        if (res < 1e-14)
            return;
        Matrix3d J; // d(S_i)/d(H,h,r); residuals are Q_i - S_i
        J << 2 * (H - h), -2 * (H - h), 2 * r - 2 * d.R * d.c,
             2 * (H + h), 2 * (H + h), -2 * (d.R - r),
             0, 8 * h, 4 * r * (1 - d.c);
        const Vector3d rhs(g[0], g[1], g[2]);
        const Vector3d step = J.completeOrthogonalDecomposition().solve(rhs);
        const double H2 = H + step[0], h2 = h + step[1], r2 = r + step[2];
        if (max_abs_residual(d, H2, h2, r2) < res) {
            H = H2;
            h = h2;
            r = r2;
        } else {
            return;
        }
    }
}

bool any_face_degenerate(const Realization &real) {
    const Mesh m = build_mesh(real);
    for (const auto &f : m.F) {
        const Eigen::Vector3d n =
            (m.V[f[1]] - m.V[f[0]]).cross(m.V[f[2]] - m.V[f[0]]);
        if (n.norm() < 1e-12)
            return true;
    }
    return false;
}

} // namespace

RealizationSet realize(const DesignSpec &d) {
    if (!(d.q3 > 0))
        throw Error(ErrorCode::DegenerateSpec, "q3 must be positive");
    const double g = 1.0 - d.c;
    const double r_max = std::sqrt(d.q3 / (2.0 * g));

    // the waist circle must reach the plate circle: Q2 >= (R - r)^2 somewhere
    {
        const double lo = (d.R - r_max) * (d.R - r_max);
        const double hi = (d.R + r_max) * (d.R + r_max);
        const double reach_min = (r_max >= d.R) ? 0.0 : lo;
        (void)hi;
        if (d.q2 < reach_min - 1e-12)
            throw Error(ErrorCode::DegenerateSpec,
                        "waist circle cannot reach the plate circle for any admissible r");
    }

    const auto qc = r_quartic_coefficients(d);
    const std::vector<double> coeffs(qc.begin(), qc.end());
    std::vector<double> roots = real_roots(coeffs);

    RealizationSet out;
    out.discriminant = quartic_discriminant_normalized(qc);

    std::vector<std::pair<double, bool>> candidates; // (r, is_double)
    const bool has_double = std::abs(out.discriminant) < kDoubleRootTol;
    if (has_double) {
        // a repeated root is a common zero of the quartic and its derivative;
        // locating it through the (well-conditioned) cubic is far more stable
        const std::vector<double> droots = real_roots(derivative(coeffs));
        double best = 0, bestval = std::numeric_limits<double>::infinity();
        for (double x : droots) {
            const double fx = std::abs(eval_poly(coeffs, x));
            if (fx < bestval) {
                bestval = fx;
                best = x;
            }
        }
        double fscale = 0;
        for (double a : coeffs)
            fscale = std::max(fscale, std::abs(a) * std::pow(std::abs(best) + 1.0, 4));
        if (bestval <= 1e-8 * std::max(1.0, fscale)) {
            candidates.push_back({best, true});
            const double cluster = 1e-4 * std::max(1.0, std::abs(best));
            for (double r : roots)
                if (std::abs(r - best) > cluster)
                    candidates.push_back({r, false});
        }
    }
    if (candidates.empty())
        for (double r : roots)
            candidates.push_back({r, false});

    const double scale_h2 = std::max(1.0, std::abs(d.q3));
    for (auto [r, dbl] : candidates) {
        if (std::abs(r) > r_max * (1.0 + 1e-9) + 1e-12)
            continue;
        const double h2 = h2_of(d, r);
        if (h2 < -1e-11 * scale_h2)
            continue;

        double H, h;
        if (h2 <= 1e-12 * scale_h2) {
            // waist ring in the mid-plane; needs the linear factor to vanish too
            const double P = P_of(d, r);
            const double K = K_of(d, r);
            if (std::abs(P) > 1e-7 * std::max(1.0, std::abs(d.q2 - d.q1)))
                continue;
            if (K < -1e-12)
                continue;
            h = 0.0;
            H = std::sqrt(std::max(0.0, K));
        } else {
            h = std::sqrt(h2);
            H = P_of(d, r) / (4.0 * h);
        }

        polish_configuration(d, H, h, r);

        Realization real = Realization(H, h, r, d).canonical();
        const double res = max_abs_residual(d, real.H, real.h, real.r);
        if (res > kResidualTol)
            continue;

        RealizedItem item;
        item.real = real;
        item.double_root = dbl;
        item.degenerate = any_face_degenerate(real);
        item.residual = res;
        out.items.push_back(item);
    }

    // mirror-equivalence dedupe (canonicalization can still produce twins at
    // H == 0)
    std::sort(out.items.begin(), out.items.end(),
              [](const RealizedItem &a, const RealizedItem &b) { return a.real.r < b.real.r; });
    std::vector<RealizedItem> uniq;
    for (const auto &it : out.items) {
        bool dup = false;
        for (const auto &u : uniq) {
            const double dr = std::abs(it.real.r - u.real.r);
            const double dH = std::abs(it.real.H - u.real.H);
            const double dh = std::abs(it.real.h - u.real.h);
            if (dr < 1e-9 && dH < 1e-9 && dh < 1e-9)
                dup = true;
        }
        if (!dup)
            uniq.push_back(it);
    }
    out.items = std::move(uniq);

    if (out.items.empty())
        throw Error(ErrorCode::EmptySet, "design has no real symmetric realization");
    return out;
}

} // namespace sandglass
