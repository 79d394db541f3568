#include <sandglass/rigidity.hpp>

#include <sandglass/constants.hpp>
#include <sandglass/error.hpp>
#include <sandglass/mesh.hpp>
#include <sandglass/polynomial.hpp>

#include <Eigen/SVD>

#include <algorithm>
#include <cmath>

namespace sandglass {

std::array<double, 5> shakiness_coefficients(double q1, double q2) {
    const double W = 4.0 * q1 - 1.0;
    if (!(W > 0) || !(q2 > 0))
        throw Error(ErrorCode::Domain, "shakiness condition needs q2 > 0 and 4*q1 - 1 > 0");
    const double sW = std::sqrt(W);
    const double x = std::sqrt(q2); // q2^(k/2) = q2^((k-1)/2) * x below

    const double w4 = 128.0 * q1 * q1 * q2 * q2;

    const double w3 = ((64.0 - 96.0 * q1) * q2 * q2 * x - 96.0 * q1 * q1 * q2 * x) * sW +
                      64.0 * q1 * (2.0 * q1 - 1.0) * q2 * q2;

    const double w2 =
        96.0 *
            (q1 * q1 * q1 + (2.0 * q2 + 5.0 / 16.0) * q1 * q1 +
             (q2 * q2 - 23.0 * q2 / 8.0) * q1 - 13.0 * q2 * q2 / 48.0 + q2 / 2.0) *
            q2 -
        48.0 * sW * q1 * (2.0 * q1 - 1.0) * q2 * x - 24.0 * W * sW * q2 * q2 * x;

    const double w1 =
        96.0 *
            (q1 * q1 * q1 + (2.0 * q2 - 3.0 / 4.0) * q1 * q1 +
             (q2 * q2 - q2 - 5.0 / 32.0) * q1 - q2 * q2 / 4.0 + 7.0 * q2 / 32.0) *
            q2 -
        (8.0 * q2 * q2 * q2 * x - (15.0 + 36.0 * q1 - 24.0 * q1 * q1) * q2 * x +
         (24.0 * q1 + 38.0) * q2 * q2 * x - (2.0 * q1 * q1 - 8.0 * q1 * q1 * q1) * x) *
            sW;

    const double w0 =
        (148.0 * q2 * q2 + 35.0 * q2) * q1 + 2.0 * q2 * q2 * q2 - 37.0 * q2 * q2 - q2 -
        70.0 * q1 * q1 * q2 -
        (8.0 * q2 * q2 * q2 * x + (24.0 * q1 * q1 - 12.0 * q1 + 24.0) * q2 * x +
         6.0 * W * q2 * q2 * x + (8.0 * q1 * q1 * q1 - 6.0 * q1 * q1 + q1) * x) *
            sW;

    return {w4, w3, w2, w1, w0};
}

double shakiness_residual(int n, double q1, double q2) {
    if (n < 3)
        throw Error(ErrorCode::Domain, "n must be at least 3");
    const auto w = shakiness_coefficients(q1, q2);
    const double c = std::cos(M_PI / n);
    return eval_poly(std::vector<double>(w.begin(), w.end()), c);
}

double shakiness_residual_normalized(int n, double q1, double q2) {
    const auto w = shakiness_coefficients(q1, q2);
    const double c = std::cos(M_PI / n);
    double scale = 0;
    for (double wi : w)
        scale = std::max(scale, std::fabs(wi));
    if (scale == 0)
        return 0;
    return eval_poly(std::vector<double>(w.begin(), w.end()), c) / scale;
}

namespace {

// true when the design has a genuine double-root realization
bool verify_shaky_design(int n, double q1, double q2) {
    try {
        const DesignSpec spec = DesignSpec::sandglass_origami(n, q1, q2);
        const auto coeffs = r_quartic_coefficients(spec);
        if (std::fabs(quartic_discriminant_normalized(coeffs)) > 1e-8)
            return false;
        const RealizationSet set = realize(spec);
        for (const RealizedItem &item : set.items)
            if (item.double_root)
                return true;
        return false;
    } catch (const Error &) {
        return false;
    }
}

} // namespace

double solve_shaky_q2(int n, double q1, std::vector<double> *alternates) {
    if (!(4.0 * q1 - 1.0 > 0))
        throw Error(ErrorCode::Domain, "shaky designs need 4*q1 - 1 > 0");
    const double lo = 1e-6, hi = 1e4;
    const int samples = 1500;

    std::vector<double> roots;
    double prev_q2 = lo;
    double prev_g = shakiness_residual_normalized(n, q1, prev_q2);
    for (int k = 1; k <= samples; ++k) {
        const double q2 = lo * std::pow(hi / lo, double(k) / samples);
        const double g = shakiness_residual_normalized(n, q1, q2);
        if (g == 0) {
            roots.push_back(q2);
        } else if (prev_g != 0 && std::signbit(g) != std::signbit(prev_g)) {
            double a = prev_q2, b = q2, ga = prev_g;
            while (b - a > 1e-12 * std::max(1.0, b)) {
                const double m = 0.5 * (a + b);
                const double gm = shakiness_residual_normalized(n, q1, m);
                if (gm == 0) {
                    a = b = m;
                    break;
                }
                if (std::signbit(gm) == std::signbit(ga)) {
                    a = m;
                    ga = gm;
                } else {
                    b = m;
                }
            }
            roots.push_back(0.5 * (a + b));
        }
        prev_q2 = q2;
        prev_g = g;
    }

    std::sort(roots.begin(), roots.end());
    double best = -1;
    for (double q2 : roots) {
        if (!verify_shaky_design(n, q1, q2))
            continue;
        if (best < 0)
            best = q2;
        else if (alternates)
            alternates->push_back(q2);
    }
    if (best < 0)
        throw Error(ErrorCode::NoSolution,
                    "no shaky design at this q1 (the feasible band is narrow)");
    return best;
}

// ---------------------------------------------------------------------------
// rigidity matrices
// ---------------------------------------------------------------------------
namespace {

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;

Mat3 rot_z(double t) {
    Mat3 m;
    m << std::cos(t), -std::sin(t), 0, std::sin(t), std::cos(t), 0, 0, 0, 1;
    return m;
}

// velocity Jacobians d v(X) / d (u, v, z) of the symmetric field
Mat3 jac_A() {
    Mat3 m = Mat3::Zero();
    m(2, 2) = 1;
    return m;
}
Mat3 jac_B() {
    Mat3 m = Mat3::Zero();
    m(2, 2) = -1;
    return m;
}
Mat3 jac_D(double theta) {
    Mat3 m = Mat3::Zero();
    m(0, 0) = 1; // u
    m(2, 1) = 1; // v
    return rot_z(theta) * m;
}
Mat3 jac_C(double theta, double c, double s) {
    Mat3 m = Mat3::Zero();
    m(0, 0) = c;
    m(1, 0) = s;
    m(2, 1) = -1;
    return rot_z(theta) * m;
}

} // namespace

Eigen::Matrix<double, 6, 3> reduced_rigidity_matrix(const Realization &real) {
    const DesignSpec &d = real.spec;
    const double H = real.H, h = real.h, r = real.r;
    const double R = d.R, c = d.c, s = d.s;
    const double t = 2.0 * M_PI / d.n;

    const Vec3 A0(R, 0, H), B0(R * c, R * s, -H), D0(r, 0, -h);
    const Vec3 C1(r * c, r * s, h);
    const Vec3 D1 = rot_z(t) * D0;

    const auto row = [](const Vec3 &X, const Vec3 &Y, const Mat3 &JX,
                        const Mat3 &JY) -> Eigen::RowVector3d {
        return (Y - X).transpose() * (JY - JX);
    };

    Eigen::Matrix<double, 6, 3> M;
    M.row(0) = row(B0, D0, jac_B(), jac_D(0));
    M.row(1) = row(B0, D1, jac_B(), jac_D(t));
    M.row(2) = row(A0, D0, jac_A(), jac_D(0));
    M.row(3) = row(B0, C1, jac_B(), jac_C(0, c, s));
    M.row(4) = row(D0, C1, jac_D(0), jac_C(0, c, s));
    M.row(5) = row(C1, D1, jac_C(0, c, s), jac_D(t));
    return M;
}

double reduced_rigidity_sigma_min(const Realization &real) {
    Eigen::Matrix<double, 6, 3> M = reduced_rigidity_matrix(real);
    for (int i = 0; i < 6; ++i) {
        const double norm = M.row(i).norm();
        if (norm > 0)
            M.row(i) /= norm;
    }
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(M);
    return svd.singularValues().tail<1>()(0);
}

Eigen::MatrixXd full_rigidity_matrix(const Realization &real) {
    const DesignSpec &d = real.spec;
    const int n = d.n;
    const Mesh mesh = build_mesh(real);
    const auto A = [&](int i) { return mesh.V[((i % n) + n) % n]; };
    const auto B = [&](int i) { return mesh.V[n + ((i % n) + n) % n]; };
    const auto D = [&](int i) { return mesh.V[2 * n + ((i % n) + n) % n]; };
    const auto C = [&](int i) { return mesh.V[3 * n + ((i % n) + n) % n]; };

    // columns: [t (3) | omega (3) | D_0..D_{n-1} (3 each) | C_0..C_{n-1}]
    const int cols = 6 + 6 * n;
    Eigen::MatrixXd M = Eigen::MatrixXd::Zero(8 * n, cols);
    const auto dcol = [&](int i) { return 6 + 3 * (((i % n) + n) % n); };
    const auto ccol = [&](int i) { return 6 + 3 * n + 3 * (((i % n) + n) % n); };

    int rowi = 0;
    // accumulate the term sign * (e . v(P)) for the vertex kinds
    const auto add_beta = [&](int rw, const Vec3 &e, const Vec3 &P, double sign) {
        M.block<1, 3>(rw, 0) += sign * e.transpose();
        M.block<1, 3>(rw, 3) += sign * P.cross(e).transpose();
    };
    const auto add_free = [&](int rw, const Vec3 &e, int col, double sign) {
        M.block<1, 3>(rw, col) += sign * e.transpose();
    };

    for (int i = 0; i < n; ++i) {
        { // B_i D_i
        const Vec3 e = D(i) - B(i);
        add_free(rowi, e, dcol(i), +1);
        add_beta(rowi, e, B(i), -1);
        ++rowi;
        }
        { // A_{i+1} C_{i+1}   (alpha pinned: no contribution from A)
        const Vec3 e = C(i + 1) - A(i + 1);
        add_free(rowi, e, ccol(i + 1), +1);
        ++rowi;
        }
        { // B_i C_{i+1}
        const Vec3 e = C(i + 1) - B(i);
        add_free(rowi, e, ccol(i + 1), +1);
        add_beta(rowi, e, B(i), -1);
        ++rowi;
        }
        { // A_i D_i
        const Vec3 e = D(i) - A(i);
        add_free(rowi, e, dcol(i), +1);
        ++rowi;
        }
        { // D_i C_{i+1}
        const Vec3 e = C(i + 1) - D(i);
        add_free(rowi, e, ccol(i + 1), +1);
        add_free(rowi, e, dcol(i), -1);
        ++rowi;
        }
        { // C_{i+1} D_{i+1}
        const Vec3 e = D(i + 1) - C(i + 1);
        add_free(rowi, e, dcol(i + 1), +1);
        add_free(rowi, e, ccol(i + 1), -1);
        ++rowi;
        }
        { // B_i D_{i+1}
        const Vec3 e = D(i + 1) - B(i);
        add_free(rowi, e, dcol(i + 1), +1);
        add_beta(rowi, e, B(i), -1);
        ++rowi;
        }
        { // A_i C_{i+1}
        const Vec3 e = C(i + 1) - A(i);
        add_free(rowi, e, ccol(i + 1), +1);
        ++rowi;
        }
    }
    return M;
}

namespace {

Eigen::MatrixXd row_normalized(Eigen::MatrixXd M) {
    for (int i = 0; i < M.rows(); ++i) {
        const double norm = M.row(i).norm();
        if (norm > 0)
            M.row(i) /= norm;
    }
    return M;
}

} // namespace

int full_rigidity_kernel_dim(const Realization &real) {
    const Eigen::MatrixXd M = row_normalized(full_rigidity_matrix(real));
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(M);
    const auto &sv = svd.singularValues();
    const double top = sv.size() ? sv(0) : 0.0;
    int dim = int(M.cols()) - int(sv.size());
    for (int i = 0; i < sv.size(); ++i)
        if (sv(i) < kRankTol * std::max(top, 1.0))
            ++dim;
    return dim;
}

Eigen::MatrixXd full_rigidity_kernel(const Realization &real) {
    const Eigen::MatrixXd M = row_normalized(full_rigidity_matrix(real));
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(M, Eigen::ComputeFullV);
    const auto &sv = svd.singularValues();
    const double top = sv.size() ? sv(0) : 0.0;
    int rank = 0;
    for (int i = 0; i < sv.size(); ++i)
        if (sv(i) >= kRankTol * std::max(top, 1.0))
            ++rank;
    return svd.matrixV().rightCols(M.cols() - rank);
}

InfinitesimalFlex infinitesimal_flex(const Realization &real, double z) {
    const DesignSpec &d = real.spec;
    const double H = real.H, h = real.h, r = real.r, R = d.R, c = d.c;
    // (D0-A0).v(D0) = (D0-A0).v(A0)  and  (D0-B0).v(D0) = (D0-B0).v(B0)
    Eigen::Matrix2d M;
    M << (r - R), -(H + h), //
        (r - d.R * c), (H - h);
    Eigen::Vector2d rhs(-z * (H + h), -z * (H - h));
    const double det = M(0, 0) * M(1, 1) - M(0, 1) * M(1, 0);
    const double scale = M.cwiseAbs().maxCoeff();
    if (std::fabs(det) <= 1e-12 * std::max(1.0, scale * scale))
        throw Error(ErrorCode::SingularSystem,
                    "projection system for the waist velocity is rank-deficient");
    const Eigen::Vector2d uv = M.inverse() * rhs;
    InfinitesimalFlex flex;
    flex.u = uv(0);
    flex.v = uv(1);
    flex.z = z;
    return flex;
}

double d0c1_constraint_residual(const Realization &real, const InfinitesimalFlex &flex) {
    const DesignSpec &d = real.spec;
    return 2.0 * real.r * (1.0 - d.c) * flex.u - 4.0 * real.h * flex.v;
}

ShakyCheck shaky_check(const DesignSpec &spec) {
    if (!spec.origami)
        throw Error(ErrorCode::Domain, "shakiness check expects a developable sandglass design");
    ShakyCheck check;
    check.family_residual = shakiness_residual_normalized(spec.n, spec.q1, spec.q2);
    check.family_ok = std::fabs(check.family_residual) < 1e-8;

    check.discriminant = quartic_discriminant_normalized(r_quartic_coefficients(spec));
    check.discriminant_ok = std::fabs(check.discriminant) < 1e-8;

    check.sigma_min = 1.0;
    try {
        const RealizationSet set = realize(spec);
        for (const RealizedItem &item : set.items)
            check.sigma_min = std::min(check.sigma_min, reduced_rigidity_sigma_min(item.real));
    } catch (const Error &) {
        // no realization: leave sigma_min at 1 (not shaky in any embedded sense)
    }
    check.rank_ok = check.sigma_min < kRankTol;
    return check;
}

} // namespace sandglass
