#include <sandglass/develop.hpp>

#include <sandglass/constants.hpp>
#include <sandglass/error.hpp>
#include <sandglass/mesh.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <sstream>

namespace sandglass {

double origami_q3(double q1, double q2) {
    const double W = 4.0 * q1 - 1.0;
    if (!(W > 0))
        throw Error(ErrorCode::Domain, "developability needs 4*q1 - 1 > 0");
    if (!(q2 > 0))
        throw Error(ErrorCode::Domain, "q2 must be positive");
    const double q3 = q1 + q2 - std::sqrt(q2 * W);
    // (q1 - q2)^2 + q2 > 0 guarantees positivity; kept as a guard
    if (!(q3 > 0))
        throw Error(ErrorCode::DegenerateSpec, "developable q3 is not positive");
    return q3;
}

Development develop(const DesignSpec &d) {
    const double du = d.q1 - d.q4;
    const double b2 = 2.0 * d.q1 + 2.0 * d.q4 - 1.0 - du * du;
    const double f2 = 4.0 * d.q2 - du * du;
    if (!(b2 > 0) || !(f2 > 0))
        throw Error(ErrorCode::Overlap, "development would overlap itself (b, d, f must be positive)");
    Development dev;
    dev.n = d.n;
    dev.a = (d.q4 - d.q1 - 1.0) / 2.0;
    dev.b = 0.5 * std::sqrt(b2);
    dev.f = 0.5 * std::sqrt(f2);
    dev.d = dev.f;
    dev.cstar = dev.a + 0.5;
    dev.e = -dev.cstar;
    return dev;
}

double general_origami_residual(const DesignSpec &d) {
    const Development dev = develop(d);
    const double fb = dev.f - dev.b;
    return d.q3 - (0.25 + fb * fb);
}

namespace {

// interior triangle angle opposite the side of squared length qo, between
// sides of squared lengths qa and qb
double corner_angle(double qa, double qb, double qo) {
    const double la = std::sqrt(qa), lb = std::sqrt(qb);
    double x = (qa + qb - qo) / (2.0 * la * lb);
    x = std::clamp(x, -1.0, 1.0);
    return std::acos(x);
}

} // namespace

std::pair<double, double> angle_defect(const DesignSpec &d) {
    const double Q1 = d.q1, Q2 = d.q2, Q3 = d.q3, Q4 = d.q4, U = 1.0;
    // stars of a lower (D) and an upper (C) waist vertex, each as
    // (side, side, opposite) squared-length triples
    const double sumD = corner_angle(Q4, Q1, U) + corner_angle(Q1, Q3, Q2) +
                        corner_angle(Q3, Q2, Q4) + corner_angle(Q3, Q2, Q1) +
                        corner_angle(Q4, Q3, Q2);
    const double sumC = corner_angle(Q2, Q3, Q4) + corner_angle(Q2, Q3, Q1) +
                        corner_angle(Q3, Q4, Q2) + corner_angle(Q1, Q4, U) +
                        corner_angle(Q3, Q1, Q2);
    return {2.0 * M_PI - sumD, 2.0 * M_PI - sumC};
}

// ---------------------------------------------------------------------------
// crease pattern SVG
// ---------------------------------------------------------------------------
namespace {

struct Seg {
    double x0, y0, x1, y1;
    EdgeClass cls;
    bool mountain = false;
    const char *role; // "crease" | "separator" | "outline"
};

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6f", v);
    return buf;
}

std::string fmt17(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

} // namespace

std::string crease_pattern_svg(const Realization &reference) {
    const DesignSpec &d = reference.spec;
    const int n = d.n;
    const Development dev = develop(d);

    // fold direction per mesh edge of the reference shape
    const Mesh mesh = build_mesh(reference);
    std::map<std::pair<int, int>, bool> mountain;
    for (const EdgeDihedral &e : dihedral_angles(mesh)) {
        if (e.degenerate)
            throw Error(ErrorCode::DegenerateFace,
                        "reference realization has a degenerate face; fold directions undefined");
        mountain[{std::min(e.a, e.b), std::max(e.a, e.b)}] = e.angle > M_PI;
    }
    const auto is_mountain = [&](int a, int b) {
        return mountain.at({std::min(a, b), std::max(a, b)});
    };
    // mesh vertex ids (see mesh.hpp layout)
    const auto A = [n](int i) { return ((i % n) + n) % n; };
    const auto B = [n](int i) { return n + ((i % n) + n) % n; };
    const auto D = [n](int i) { return 2 * n + ((i % n) + n) % n; };
    const auto C = [n](int i) { return 3 * n + ((i % n) + n) % n; };

    std::vector<Seg> segs;
    const auto add = [&](std::pair<double, double> p, std::pair<double, double> q,
                         EdgeClass cls, bool mnt, const char *role) {
        segs.push_back({p.first, p.second, q.first, q.second, cls, mnt, role});
    };

    // 6 interior creases per cell: the five edges around the upper waist
    // vertex C_{i+1} plus the long diagonal B_i D_{i+1}
    for (int i = 0; i < n; ++i) {
        add(dev.A(i + 1), dev.C(i + 1), EdgeClass::L1, is_mountain(A(i + 1), C(i + 1)), "crease");
        add(dev.B(i), dev.C(i + 1), EdgeClass::L2, is_mountain(B(i), C(i + 1)), "crease");
        add(dev.D(i), dev.C(i + 1), EdgeClass::L3, is_mountain(D(i), C(i + 1)), "crease");
        add(dev.C(i + 1), dev.D(i + 1), EdgeClass::L3, is_mountain(C(i + 1), D(i + 1)), "crease");
        add(dev.B(i), dev.D(i + 1), EdgeClass::L4, is_mountain(B(i), D(i + 1)), "crease");
        add(dev.A(i), dev.C(i + 1), EdgeClass::L4, is_mountain(A(i), C(i + 1)), "crease");
    }
    // zig-zag cell separators (folds as well, but their seam copies bound the
    // strip, so they are emitted as their own class)
    for (int i = 1; i < n; ++i) {
        add(dev.B(i), dev.D(i), EdgeClass::L1, is_mountain(B(i), D(i)), "separator");
        add(dev.D(i), dev.A(i), EdgeClass::L2, is_mountain(A(i), D(i)), "separator");
    }
    // strip outline: plate edges top/bottom plus the cut seam on both ends
    for (int i = 0; i < n; ++i) {
        add(dev.B(i), dev.B(i + 1), EdgeClass::Skeleton, false, "outline");
        add(dev.A(i), dev.A(i + 1), EdgeClass::Skeleton, false, "outline");
    }
    add(dev.B(0), dev.D(0), EdgeClass::L1, false, "outline");
    add(dev.D(0), dev.A(0), EdgeClass::L2, false, "outline");
    add(dev.B(n), dev.D(n), EdgeClass::L1, false, "outline");
    add(dev.D(n), dev.A(n), EdgeClass::L2, false, "outline");

    // regular n-gon plates attached along one plate edge each (n > 3 only;
    // triangular plates are already spanned by their skeleton edges)
    std::vector<std::vector<std::pair<double, double>>> caps;
    if (n > 3) {
        const double apothem = 1.0 / (2.0 * std::tan(M_PI / n));
        const double circum = 1.0 / (2.0 * std::sin(M_PI / n));
        for (int side = 0; side < 2; ++side) {
            // bottom plate hangs below B_0 B_1, top plate above A_0 A_1;
            // both edges are horizontal in this layout
            const auto p0 = side ? dev.A(0) : dev.B(0);
            const auto p1 = side ? dev.A(1) : dev.B(1);
            const double cx = (p0.first + p1.first) / 2.0;
            const double cy = p0.second + (side ? apothem : -apothem);
            // first vertex lands on p0, walking around the polygon
            const double th0 = (side ? -1 : 1) * (M_PI / 2 + M_PI / n);
            std::vector<std::pair<double, double>> poly;
            for (int k = 0; k < n; ++k) {
                const double th = th0 + 2.0 * M_PI * k / n;
                poly.push_back({cx + circum * std::cos(th), cy + circum * std::sin(th)});
            }
            caps.push_back(poly);
        }
    }

    // bounds
    double xmin = 1e300, xmax = -1e300, ymin = 1e300, ymax = -1e300;
    const auto grow = [&](double x, double y) {
        xmin = std::min(xmin, x);
        xmax = std::max(xmax, x);
        ymin = std::min(ymin, y);
        ymax = std::max(ymax, y);
    };
    for (const Seg &s : segs) {
        grow(s.x0, s.y0);
        grow(s.x1, s.y1);
    }
    for (const auto &poly : caps)
        for (const auto &p : poly)
            grow(p.first, p.second);

    const double scale = 100.0; // 1 length unit = 100 SVG user units
    const double pad = 0.25 * scale;
    const double w = (xmax - xmin) * scale + 2 * pad;
    const double hgt = (ymax - ymin) * scale + 2 * pad;
    // SVG y grows downward; flip so the strip reads bottom-up
    const auto X = [&](double x) { return (x - xmin) * scale + pad; };
    const auto Y = [&](double y) { return (ymax - y) * scale + pad; };

    std::ostringstream svg;
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" << fmt(w)
        << "\" height=\"" << fmt(hgt) << "\" viewBox=\"0 0 " << fmt(w) << " " << fmt(hgt)
        << "\">\n";
    svg << "<!-- sandglass " << kVersion << " crease pattern: n=" << n << " q1=" << fmt17(d.q1)
        << " q2=" << fmt17(d.q2) << " q3=" << fmt17(d.q3) << "; reference H="
        << fmt17(reference.H) << " h=" << fmt17(reference.h) << " r=" << fmt17(reference.r)
        << "; solid = mountain, dashed = valley -->\n";
    svg << "<g fill=\"none\" stroke-linecap=\"round\">\n";
    for (const Seg &s : segs) {
        svg << "  <line class=\"" << s.role;
        if (std::string(s.role) != "outline")
            svg << " " << edge_class_name(s.cls) << (s.mountain ? " mountain" : " valley");
        svg << "\" x1=\"" << fmt(X(s.x0)) << "\" y1=\"" << fmt(Y(s.y0)) << "\" x2=\""
            << fmt(X(s.x1)) << "\" y2=\"" << fmt(Y(s.y1)) << "\" stroke=\""
            << (std::string(s.role) == "outline" ? "#444444" : "#000000") << "\" stroke-width=\""
            << (std::string(s.role) == "outline" ? "1.5" : "2") << "\"";
        if (std::string(s.role) != "outline" && !s.mountain)
            svg << " stroke-dasharray=\"6 3\"";
        svg << "/>\n";
    }
    for (const auto &poly : caps) {
        svg << "  <polygon class=\"cap\" points=\"";
        for (size_t k = 0; k < poly.size(); ++k)
            svg << (k ? " " : "") << fmt(X(poly[k].first)) << "," << fmt(Y(poly[k].second));
        svg << "\" stroke=\"#444444\" stroke-width=\"1.5\"/>\n";
    }
    svg << "</g>\n</svg>\n";
    return svg.str();
}

} // namespace sandglass
