#pragma once
// Test-side reference computations. Everything here recomputes geometry from
// first principles (explicit vertex coordinates, law of cosines, dense
// scans) so the library can be checked against an independent path. Nothing
// in this header calls into the solver/energy/rigidity translation units
// except through plain arithmetic on the public structs.

#include <Eigen/Dense>

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <limits>
#include <utility>
#include <vector>

namespace oracle {

struct Root {
    double H = 0, h = 0, r = 0;
};

// Squared edge-class lengths straight from vertex coordinates:
// A0 = (R,0,H), B0 = (Rc,Rs,-H), D0 = (r,0,-h), C1 = (rc,rs,h).
inline std::array<double, 3> class_lengths_sq(int n, double H, double h, double r) {
    const double c = std::cos(M_PI / n), s = std::sin(M_PI / n), R = 1.0 / (2.0 * s);
    const Eigen::Vector3d A0(R, 0, H), B0(R * c, R * s, -H), D0(r, 0, -h), C1(r * c, r * s, h);
    return {(B0 - D0).squaredNorm(), (A0 - D0).squaredNorm(), (D0 - C1).squaredNorm()};
}

// All symmetric solutions of
//     |B0 - D0|^2 = q1,  |A0 - D0|^2 = q2,  |D0 - C1|^2 = q3
// found by a dense scan over r with per-branch back substitution, then
// polished by a damped Newton iteration on the full 3x3 system with a
// finite-difference Jacobian. Representatives are canonicalized to H >= 0
// (H = 0 -> h >= 0) and sorted by r. Tangential (double) roots can escape
// the sign-change scan, so use this on generic parameter points only.
inline std::vector<Root> realize_scan(int n, double q1, double q2, double q3,
                                      int samples = 40000) {
    const double c = std::cos(M_PI / n), s = std::sin(M_PI / n), R = 1.0 / (2.0 * s);
    std::vector<Root> out;
    if (!(q3 > 0))
        return out;
    const double r_max = std::sqrt(q3 / (2.0 * (1.0 - c)));

    auto residual = [&](double H, double h, double r) {
        const auto S = class_lengths_sq(n, H, h, r);
        return Eigen::Vector3d(S[0] - q1, S[1] - q2, S[2] - q3);
    };

    auto newton = [&](Root g) -> std::pair<bool, Root> {
        Eigen::Vector3d x(g.H, g.h, g.r);
        for (int it = 0; it < 80; ++it) {
            const Eigen::Vector3d f = residual(x[0], x[1], x[2]);
            if (f.norm() < 1e-14)
                break;
            Eigen::Matrix3d J;
            const double step = 1e-7;
            for (int k = 0; k < 3; ++k) {
                Eigen::Vector3d xp = x, xm = x;
                xp[k] += step;
                xm[k] -= step;
                J.col(k) = (residual(xp[0], xp[1], xp[2]) - residual(xm[0], xm[1], xm[2])) /
                           (2.0 * step);
            }
            const Eigen::Vector3d dx = J.fullPivLu().solve(f);
            if (!dx.allFinite())
                return {false, g};
            x -= dx;
            if (dx.norm() < 1e-15)
                break;
        }
        if (residual(x[0], x[1], x[2]).norm() > 1e-10)
            return {false, g};
        return {true, {x[0], x[1], x[2]}};
    };

    // branch functions: h = hs*sqrt((q3 - 2(1-c) r^2)/4), H = -h + Hs*sqrt(q2 - (R-r)^2)
    auto eval_branch = [&](double r, int hs, int Hs, double &H, double &h) -> bool {
        const double h2 = (q3 - 2.0 * (1.0 - c) * r * r) / 4.0;
        if (h2 < 0)
            return false;
        h = hs * std::sqrt(h2);
        const double t = q2 - (R - r) * (R - r);
        if (t < 0)
            return false;
        H = -h + Hs * std::sqrt(t);
        return true;
    };

    for (int hs : {+1, -1})
        for (int Hs : {+1, -1}) {
            double prev_f = 0, prev_r = 0;
            bool prev_ok = false;
            for (int k = 0; k <= samples; ++k) {
                const double r = -r_max + 2.0 * r_max * k / samples;
                double H, h;
                const bool ok = eval_branch(r, hs, Hs, H, h);
                double f = 0;
                if (ok)
                    f = residual(H, h, r)[0];
                if (ok && prev_ok && std::signbit(f) != std::signbit(prev_f)) {
                    // bisect the bracket on this branch
                    double a = prev_r, b = r, fa = prev_f;
                    for (int it = 0; it < 80; ++it) {
                        const double m = 0.5 * (a + b);
                        double Hm, hm;
                        if (!eval_branch(m, hs, Hs, Hm, hm))
                            break;
                        const double fm = residual(Hm, hm, m)[0];
                        if (std::signbit(fm) == std::signbit(fa)) {
                            a = m;
                            fa = fm;
                        } else {
                            b = m;
                        }
                    }
                    double Hm, hm;
                    const double m = 0.5 * (a + b);
                    if (eval_branch(m, hs, Hs, Hm, hm)) {
                        auto [good, root] = newton({Hm, hm, m});
                        if (good)
                            out.push_back(root);
                    }
                }
                prev_f = f;
                prev_r = r;
                prev_ok = ok;
            }
        }

    // canonicalize to H >= 0 and drop mirror/branch duplicates
    for (Root &root : out)
        if (root.H < 0 || (root.H == 0 && root.h < 0)) {
            root.H = -root.H;
            root.h = -root.h;
        }
    std::sort(out.begin(), out.end(), [](const Root &a, const Root &b) { return a.r < b.r; });
    std::vector<Root> dedup;
    for (const Root &root : out) {
        bool dup = false;
        for (const Root &seen : dedup)
            dup |= std::fabs(seen.H - root.H) < 1e-7 && std::fabs(seen.h - root.h) < 1e-7 &&
                   std::fabs(seen.r - root.r) < 1e-7;
        if (!dup)
            dedup.push_back(root);
    }
    return dedup;
}

// Interior angle at the corner opposite side `opp` of a triangle with side
// lengths (adj1, adj2, opp), by the law of cosines.
inline double corner_angle(double adj1, double adj2, double opp) {
    const double x = (adj1 * adj1 + adj2 * adj2 - opp * opp) / (2.0 * adj1 * adj2);
    return std::acos(std::clamp(x, -1.0, 1.0));
}

// Angle defects at a lower-waist (D) and an upper-waist (C) vertex computed
// purely from the edge-length classes of the five incident triangles; the
// incident corner list is read off the belt combinatorics. Skeleton edges
// have length 1.
inline std::pair<double, double> defects(double q1, double q2, double q3, double q4) {
    const double L1 = std::sqrt(q1), L2 = std::sqrt(q2), L3 = std::sqrt(q3),
                 L4 = std::sqrt(q4);
    const double at_D = corner_angle(L4, L1, 1.0)  // B_i B_{i+1} D_{i+1}
                        + corner_angle(L4, L3, L2) // B_i D_{i+1} C_{i+1}
                        + corner_angle(L3, L2, L1) // C_{i+1} D_{i+1} A_{i+1}
                        + corner_angle(L1, L3, L2) // B_{i+1} C_{i+2} D_{i+1}
                        + corner_angle(L3, L2, L4);// D_{i+1} C_{i+2} A_{i+1}
    const double at_C = corner_angle(L2, L3, L4)   // B_i D_{i+1} C_{i+1}
                        + corner_angle(L2, L3, L1) // B_i C_{i+1} D_i
                        + corner_angle(L3, L4, L2) // D_i C_{i+1} A_i
                        + corner_angle(L1, L4, 1.0)// C_{i+1} A_{i+1} A_i
                        + corner_angle(L3, L1, L2);// C_{i+1} D_{i+1} A_{i+1}
    return {2.0 * M_PI - at_D, 2.0 * M_PI - at_C};
}

// The closed-state design condition exactly as printed (all radicals taken
// positive real), written out again so a transcription slip in the library
// would be caught.
inline double extremal_residual(int n, double q1, double q2) {
    const double c = std::cos(M_PI / n);
    const double W = 4.0 * q1 - 1.0;
    if (!(W > 0) || !(q2 > 0))
        return std::numeric_limits<double>::quiet_NaN();
    return 4 * c * q2 * q1 - 2 * c * q2 * q2 - 2 * q1 * q1 - 28 * q2 * q1 - 2 * q2 * q2 + q1 +
           5 * q2 - 2 * c * q1 * q1 + W * std::sqrt(W) * std::sqrt(q2) +
           8 * q2 * std::sqrt(q2) * std::sqrt(W) + 4 * q1 * std::sqrt(q2) * std::sqrt(W);
}

// Roots of the printed condition in q2, by dense log-grid scan + bisection.
inline std::vector<double> extremal_roots_scan(int n, double q1, double lo = 1e-6,
                                               double hi = 40.0, int samples = 40000) {
    std::vector<double> roots;
    double prev_q2 = lo, prev_f = extremal_residual(n, q1, lo);
    for (int k = 1; k <= samples; ++k) {
        const double q2 = lo * std::pow(hi / lo, double(k) / samples);
        const double f = extremal_residual(n, q1, q2);
        if (std::isfinite(f) && std::isfinite(prev_f) &&
            std::signbit(f) != std::signbit(prev_f)) {
            double a = prev_q2, b = q2, fa = prev_f;
            for (int it = 0; it < 200; ++it) {
                const double m = 0.5 * (a + b);
                const double fm = extremal_residual(n, q1, m);
                if (std::signbit(fm) == std::signbit(fa)) {
                    a = m;
                    fa = fm;
                } else {
                    b = m;
                }
            }
            roots.push_back(0.5 * (a + b));
        }
        prev_q2 = q2;
        prev_f = f;
    }
    return roots;
}

// Central finite differences over R^3.
inline Eigen::Vector3d fd_gradient(const std::function<double(const Eigen::Vector3d &)> &f,
                                   const Eigen::Vector3d &x, double step = 1e-6) {
    Eigen::Vector3d g;
    for (int k = 0; k < 3; ++k) {
        Eigen::Vector3d xp = x, xm = x;
        xp[k] += step;
        xm[k] -= step;
        g[k] = (f(xp) - f(xm)) / (2.0 * step);
    }
    return g;
}

inline Eigen::Matrix3d fd_hessian(const std::function<double(const Eigen::Vector3d &)> &f,
                                  const Eigen::Vector3d &x, double step = 1e-5) {
    Eigen::Matrix3d Hm;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
            Eigen::Vector3d xpp = x, xpm = x, xmp = x, xmm = x;
            xpp[i] += step;
            xpp[j] += step;
            xpm[i] += step;
            xpm[j] -= step;
            xmp[i] -= step;
            xmp[j] += step;
            xmm[i] -= step;
            xmm[j] -= step;
            Hm(i, j) = (f(xpp) - f(xpm) - f(xmp) + f(xmm)) / (4.0 * step * step);
        }
    return Hm;
}

// Second derivative at 0 of a scalar function of one variable.
inline double fd_second(const std::function<double(double)> &f, double t = 1e-4) {
    return (f(t) - 2.0 * f(0.0) + f(-t)) / (t * t);
}

} // namespace oracle
