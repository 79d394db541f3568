#include <sandglass/polynomial.hpp>

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>

namespace sandglass {

double eval_poly(const std::vector<double> &c, double x) {
    double v = 0;
    for (double a : c)
        v = v * x + a;
    return v;
}

std::vector<double> derivative(const std::vector<double> &c) {
    const int deg = int(c.size()) - 1;
    if (deg <= 0)
        return {0.0};
    std::vector<double> d(deg);
    for (int i = 0; i < deg; ++i)
        d[i] = c[i] * (deg - i);
    return d;
}

double polish_root(const std::vector<double> &c, double x, int iters) {
    const std::vector<double> dc = derivative(c);
    for (int it = 0; it < iters; ++it) {
        const double f = eval_poly(c, x);
        const double fp = eval_poly(dc, x);
        if (fp == 0)
            break;
        const double step = f / fp;
        x -= step;
        if (std::abs(step) <= 1e-16 * std::max(1.0, std::abs(x)))
            break;
    }
    return x;
}

std::vector<double> real_roots(const std::vector<double> &coeffs, double imag_tol) {
    // strip leading (near-)zeros relative to the largest coefficient
    double scale = 0;
    for (double a : coeffs)
        scale = std::max(scale, std::abs(a));
    if (scale == 0)
        return {};
    std::vector<double> c;
    bool leading = true;
    for (double a : coeffs) {
        if (leading && std::abs(a) <= 1e-14 * scale)
            continue;
        leading = false;
        c.push_back(a);
    }
    const int deg = int(c.size()) - 1;
    if (deg < 1)
        return {};
    if (deg == 1)
        return {-c[1] / c[0]};

    Eigen::MatrixXd comp = Eigen::MatrixXd::Zero(deg, deg);
    for (int i = 0; i < deg; ++i)
        comp(0, i) = -c[i + 1] / c[0];
    for (int i = 1; i < deg; ++i)
        comp(i, i - 1) = 1.0;
    const Eigen::VectorXcd ev = Eigen::EigenSolver<Eigen::MatrixXd>(comp, false).eigenvalues();

    double root_scale = 1.0;
    for (int i = 0; i < deg; ++i)
        root_scale = std::max(root_scale, std::abs(ev[i]));

    std::vector<double> roots;
    for (int i = 0; i < deg; ++i) {
        if (std::abs(ev[i].imag()) > imag_tol * root_scale)
            continue;
        double x = polish_root(c, ev[i].real());
        // keep only candidates that actually solve the polynomial
        const double fx = std::abs(eval_poly(c, x));
        double deriv_scale = 0;
        for (int k = 0; k <= deg; ++k)
            deriv_scale = std::max(deriv_scale, std::abs(c[k]) * std::pow(std::abs(x) + 1.0, deg - k));
        if (fx > 1e-7 * std::max(1.0, deriv_scale))
            continue;
        roots.push_back(x);
    }
    std::sort(roots.begin(), roots.end());
    std::vector<double> uniq;
    for (double r : roots) {
        if (uniq.empty() || std::abs(r - uniq.back()) > 1e-9 * std::max(1.0, std::abs(r)))
            uniq.push_back(r);
    }
    return uniq;
}

double quartic_discriminant(const std::array<double, 5> &q) {
    const double a = q[0], b = q[1], c = q[2], d = q[3], e = q[4];
    return 256 * a * a * a * e * e * e - 192 * a * a * b * d * e * e -
           128 * a * a * c * c * e * e + 144 * a * a * c * d * d * e -
           27 * a * a * d * d * d * d + 144 * a * b * b * c * e * e -
           6 * a * b * b * d * d * e - 80 * a * b * c * c * d * e +
           18 * a * b * c * d * d * d + 16 * a * c * c * c * c * e -
           4 * a * c * c * c * d * d - 27 * b * b * b * b * e * e +
           18 * b * b * b * c * d * e - 4 * b * b * b * d * d * d -
           4 * b * b * c * c * c * e + b * b * c * c * d * d;
}

double quartic_discriminant_normalized(const std::array<double, 5> &q) {
    double m = 0;
    for (double a : q)
        m = std::max(m, std::abs(a));
    if (m == 0)
        return 0;
    std::array<double, 5> s;
    for (int i = 0; i < 5; ++i)
        s[i] = q[i] / m;
    return quartic_discriminant(s);
}

} // namespace sandglass
