#include <sandglass/mesh.hpp>

#include <sandglass/constants.hpp>
#include <sandglass/error.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <utility>

namespace sandglass {

using Eigen::Vector2d;
using Eigen::Vector3d;

const char *edge_class_name(EdgeClass c) {
    switch (c) {
    case EdgeClass::Skeleton: return "skeleton";
    case EdgeClass::L1:       return "L1";
    case EdgeClass::L2:       return "L2";
    case EdgeClass::L3:       return "L3";
    case EdgeClass::L4:       return "L4";
    case EdgeClass::Cap:      return "cap";
    case EdgeClass::Other:    return "other";
    }
    return "other";
}

std::array<double, 4> squared_edge_lengths(const DesignSpec &d, double H, double h, double r) {
    const double S1 = d.R * d.R + r * r - 2.0 * d.R * r * d.c + (H - h) * (H - h);
    const double S2 = (d.R - r) * (d.R - r) + (H + h) * (H + h);
    const double S3 = 2.0 * r * r * (1.0 - d.c) + 4.0 * h * h;
    return {S1, S2, S3, S1};
}

Mesh build_mesh(const Realization &real) {
    const DesignSpec &d = real.spec;
    const int n = d.n;
    const double H = real.H, h = real.h, r = real.r;

    Mesh m;
    m.V.resize(4 * n + 2);
    const auto A = [n](int i) { return ((i % n) + n) % n; };
    const auto B = [n](int i) { return n + ((i % n) + n) % n; };
    const auto D = [n](int i) { return 2 * n + ((i % n) + n) % n; };
    const auto C = [n](int i) { return 3 * n + ((i % n) + n) % n; };
    const int capA = 4 * n, capB = 4 * n + 1;

    for (int i = 0; i < n; ++i) {
        const double t = 2.0 * M_PI * i / n;   // plate slot angle
        const double u = t + M_PI / n;         // twisted slot angle
        m.V[A(i)] = Vector3d(d.R * std::cos(t), d.R * std::sin(t), H);
        m.V[B(i)] = Vector3d(d.R * std::cos(u), d.R * std::sin(u), -H);
        m.V[D(i)] = Vector3d(r * std::cos(t), r * std::sin(t), -h);
        m.V[C(i + 1)] = Vector3d(r * std::cos(u), r * std::sin(u), h);
    }
    m.V[capA] = Vector3d(0, 0, H);
    m.V[capB] = Vector3d(0, 0, -H);

    // Outward orientation for H > 0; the congruent mirror configuration has
    // the plates swapped in z, so the winding flips with the sign of H.
    const bool flip = (H < 0) || (H == 0 && h < 0);
    const auto push = [&](int a, int b, int c) {
        if (flip)
            m.F.push_back({a, c, b});
        else
            m.F.push_back({a, b, c});
    };

    for (int i = 0; i < n; ++i) {
        push(B(i), B(i + 1), D(i + 1));
        push(B(i), D(i + 1), C(i + 1));
        push(B(i), C(i + 1), D(i));
        push(D(i), C(i + 1), A(i));
        push(C(i + 1), A(i + 1), A(i));
        push(C(i + 1), D(i + 1), A(i + 1));
    }
    for (int i = 0; i < n; ++i) {
        push(capA, A(i), A(i + 1));
        push(capB, B(i + 1), B(i));
    }

    for (int i = 0; i < n; ++i) {
        m.E.push_back({A(i), A(i + 1), EdgeClass::Skeleton});
        m.E.push_back({B(i), B(i + 1), EdgeClass::Skeleton});
        m.E.push_back({B(i), D(i), EdgeClass::L1});
        m.E.push_back({A(i + 1), C(i + 1), EdgeClass::L1});
        m.E.push_back({B(i), C(i + 1), EdgeClass::L2});
        m.E.push_back({A(i), D(i), EdgeClass::L2});
        m.E.push_back({D(i), C(i + 1), EdgeClass::L3});
        m.E.push_back({C(i + 1), D(i + 1), EdgeClass::L3});
        m.E.push_back({B(i), D(i + 1), EdgeClass::L4});
        m.E.push_back({A(i), C(i + 1), EdgeClass::L4});
    }
    return m;
}

namespace {

using EdgeKey = std::pair<int, int>;
EdgeKey key_of(int a, int b) { return {std::min(a, b), std::max(a, b)}; }

struct EdgeUse {
    int face = -1;
    bool forward = false; // face traverses (key.first -> key.second)
};

std::map<EdgeKey, std::vector<EdgeUse>> edge_uses(const Mesh &m) {
    std::map<EdgeKey, std::vector<EdgeUse>> uses;
    for (int f = 0; f < int(m.F.size()); ++f) {
        const auto &t = m.F[f];
        for (int k = 0; k < 3; ++k) {
            const int a = t[k], b = t[(k + 1) % 3];
            uses[key_of(a, b)].push_back({f, a < b});
        }
    }
    return uses;
}

Vector3d face_normal(const Mesh &m, int f) {
    const auto &t = m.F[f];
    return (m.V[t[1]] - m.V[t[0]]).cross(m.V[t[2]] - m.V[t[0]]);
}

} // namespace

std::vector<EdgeDihedral> dihedral_angles(const Mesh &mesh) {
    const auto uses = edge_uses(mesh);

    std::vector<MeshEdge> edges = mesh.E;
    if (edges.empty()) {
        for (const auto &[k, u] : uses)
            if (u.size() == 2)
                edges.push_back({k.first, k.second, EdgeClass::Other});
    }

    std::vector<EdgeDihedral> out;
    out.reserve(edges.size());
    for (const MeshEdge &e : edges) {
        const auto it = uses.find(key_of(e.a, e.b));
        if (it == uses.end() || it->second.size() != 2)
            continue;
        // f1 = the face traversing a -> b, so the edge direction below is its
        // winding direction and the sign convention is orientation-stable.
        EdgeUse u1 = it->second[0], u2 = it->second[1];
        const bool want_forward = (e.a < e.b);
        if (u1.forward != want_forward)
            std::swap(u1, u2);

        EdgeDihedral d;
        d.a = e.a;
        d.b = e.b;
        d.cls = e.cls;

        Vector3d n1 = face_normal(mesh, u1.face);
        Vector3d n2 = face_normal(mesh, u2.face);
        const double a1 = n1.norm(), a2 = n2.norm();
        if (a1 < 1e-14 || a2 < 1e-14) {
            d.degenerate = true;
            d.angle = std::numeric_limits<double>::quiet_NaN();
            out.push_back(d);
            continue;
        }
        n1 /= a1;
        n2 /= a2;
        const Vector3d ed = (mesh.V[e.b] - mesh.V[e.a]).normalized();
        double ang = M_PI - std::atan2(n1.cross(n2).dot(ed), n1.dot(n2));
        if (ang >= 2.0 * M_PI)
            ang -= 2.0 * M_PI;
        if (ang < 0)
            ang += 2.0 * M_PI;
        d.angle = ang;
        out.push_back(d);
    }
    return out;
}

double volume(const Mesh &mesh) {
    for (const auto &[k, u] : edge_uses(mesh)) {
        if (u.size() != 2 || u[0].forward == u[1].forward)
            throw Error(ErrorCode::NonClosedMesh,
                        "mesh is not a closed consistently-oriented surface");
        (void)k;
    }
    double six_v = 0;
    for (const auto &t : mesh.F)
        six_v += mesh.V[t[0]].dot(mesh.V[t[1]].cross(mesh.V[t[2]]));
    return six_v / 6.0;
}

// ---------------------------------------------------------------------------
// self-intersection machinery
// ---------------------------------------------------------------------------
namespace {

struct Tri {
    Vector3d p[3];
    int idx[3];
};

double dist_point_segment(const Vector3d &p, const Vector3d &a, const Vector3d &b) {
    const Vector3d ab = b - a;
    const double len2 = ab.squaredNorm();
    if (len2 < 1e-30)
        return (p - a).norm();
    const double t = std::clamp((p - a).dot(ab) / len2, 0.0, 1.0);
    return (p - (a + t * ab)).norm();
}

// distance of a point to the simplex shared by two faces (none/vertex/edge)
double dist_to_shared(const Vector3d &p, const std::vector<Vector3d> &shared) {
    if (shared.empty())
        return std::numeric_limits<double>::infinity();
    if (shared.size() == 1)
        return (p - shared[0]).norm();
    return dist_point_segment(p, shared[0], shared[1]);
}

// segment of `t` cut by the plane (n, d): points with |n.p + d| <= eps count
// as on-plane, edges with opposite strict signs contribute crossings
std::vector<Vector3d> plane_section(const Tri &t, const Vector3d &n, double d, double eps) {
    double dist[3];
    for (int i = 0; i < 3; ++i)
        dist[i] = n.dot(t.p[i]) + d;
    std::vector<Vector3d> pts;
    for (int i = 0; i < 3; ++i) {
        if (std::abs(dist[i]) <= eps)
            pts.push_back(t.p[i]);
        const int j = (i + 1) % 3;
        if ((dist[i] > eps && dist[j] < -eps) || (dist[i] < -eps && dist[j] > eps)) {
            const double s = dist[i] / (dist[i] - dist[j]);
            pts.push_back(t.p[i] + s * (t.p[j] - t.p[i]));
        }
    }
    return pts;
}

// 2D convex clip of subject triangle by clip triangle (counterclockwise)
std::vector<Vector2d> clip_triangles_2d(std::vector<Vector2d> subject,
                                        const std::vector<Vector2d> &clip) {
    for (int e = 0; e < 3 && !subject.empty(); ++e) {
        const Vector2d a = clip[e], b = clip[(e + 1) % 3];
        const auto inside = [&](const Vector2d &p) {
            return (b.x() - a.x()) * (p.y() - a.y()) - (b.y() - a.y()) * (p.x() - a.x()) >= 0;
        };
        std::vector<Vector2d> out;
        for (size_t i = 0; i < subject.size(); ++i) {
            const Vector2d cur = subject[i];
            const Vector2d nxt = subject[(i + 1) % subject.size()];
            const bool cin = inside(cur), nin = inside(nxt);
            if (cin)
                out.push_back(cur);
            if (cin != nin) {
                const double den = (b.x() - a.x()) * (cur.y() - nxt.y()) -
                                   (b.y() - a.y()) * (cur.x() - nxt.x());
                if (std::abs(den) > 1e-30) {
                    const double num = (b.x() - a.x()) * (cur.y() - a.y()) -
                                       (b.y() - a.y()) * (cur.x() - a.x());
                    const double s = num / den;
                    out.push_back(cur + s * (nxt - cur));
                }
            }
        }
        subject = std::move(out);
    }
    return subject;
}

double polygon_area(const std::vector<Vector2d> &poly) {
    double a = 0;
    for (size_t i = 0; i < poly.size(); ++i) {
        const auto &p = poly[i];
        const auto &q = poly[(i + 1) % poly.size()];
        a += p.x() * q.y() - q.x() * p.y();
    }
    return std::abs(a) / 2.0;
}

} // namespace

std::vector<FaceContact> self_intersections(const Mesh &mesh, double eps) {
    const int nf = int(mesh.F.size());
    std::vector<Tri> tris(nf);
    std::vector<Vector3d> normals(nf);
    std::vector<bool> degen(nf, false);
    for (int f = 0; f < nf; ++f) {
        for (int k = 0; k < 3; ++k) {
            tris[f].p[k] = mesh.V[mesh.F[f][k]];
            tris[f].idx[k] = mesh.F[f][k];
        }
        normals[f] = (tris[f].p[1] - tris[f].p[0]).cross(tris[f].p[2] - tris[f].p[0]);
        degen[f] = normals[f].norm() < 1e-14;
        if (!degen[f])
            normals[f].normalize();
    }

    std::vector<FaceContact> contacts;
    for (int i = 0; i < nf; ++i) {
        if (degen[i])
            continue;
        for (int j = i + 1; j < nf; ++j) {
            if (degen[j])
                continue;

            std::vector<Vector3d> shared;
            for (int a = 0; a < 3; ++a)
                for (int b = 0; b < 3; ++b)
                    if (tris[i].idx[a] == tris[j].idx[b])
                        shared.push_back(tris[i].p[a]);
            if (shared.size() >= 3)
                continue; // identical face

            const Vector3d &ni = normals[i], &nj = normals[j];
            const double di = -ni.dot(tris[i].p[0]);
            const double dj = -nj.dot(tris[j].p[0]);

            // signed distances of one triangle to the other's plane
            double si[3], sj[3];
            bool i_off = true, j_off = true; // entirely on one side
            for (int k = 0; k < 3; ++k) {
                si[k] = nj.dot(tris[i].p[k]) + dj;
                sj[k] = ni.dot(tris[j].p[k]) + di;
            }
            const auto one_side = [eps](const double *s) {
                return (s[0] > eps && s[1] > eps && s[2] > eps) ||
                       (s[0] < -eps && s[1] < -eps && s[2] < -eps);
            };
            i_off = one_side(si);
            j_off = one_side(sj);
            if (i_off || j_off)
                continue;

            const bool coplanar = std::abs(si[0]) <= eps && std::abs(si[1]) <= eps &&
                                  std::abs(si[2]) <= eps;
            if (coplanar) {
                // coplanar pair: measure the 2D overlap region
                Vector3d u = (tris[i].p[1] - tris[i].p[0]).normalized();
                Vector3d v = ni.cross(u);
                const auto to2d = [&](const Vector3d &p) {
                    const Vector3d q = p - tris[i].p[0];
                    return Vector2d(q.dot(u), q.dot(v));
                };
                std::vector<Vector2d> ta = {to2d(tris[i].p[0]), to2d(tris[i].p[1]),
                                            to2d(tris[i].p[2])};
                std::vector<Vector2d> tb = {to2d(tris[j].p[0]), to2d(tris[j].p[1]),
                                            to2d(tris[j].p[2])};
                const auto ccw = [](std::vector<Vector2d> &t) {
                    const double cr = (t[1].x() - t[0].x()) * (t[2].y() - t[0].y()) -
                                      (t[1].y() - t[0].y()) * (t[2].x() - t[0].x());
                    if (cr < 0)
                        std::swap(t[1], t[2]);
                };
                ccw(ta);
                ccw(tb);
                const auto poly = clip_triangles_2d(ta, tb);
                if (poly.size() < 3)
                    continue;
                const double area = polygon_area(poly);
                double diam = 0, beyond = 0;
                for (size_t a = 0; a < poly.size(); ++a) {
                    for (size_t b = a + 1; b < poly.size(); ++b)
                        diam = std::max(diam, (poly[a] - poly[b]).norm());
                    const Vector3d p3 =
                        tris[i].p[0] + poly[a].x() * u + poly[a].y() * v;
                    beyond = std::max(beyond, std::min(dist_to_shared(p3, shared), 1e300));
                }
                // discard eps-thin slivers along shared boundaries
                if (area <= eps * std::max(diam, eps))
                    continue;
                if (!shared.empty() && beyond <= eps)
                    continue;
                contacts.push_back({i, j, true});
                continue;
            }

            // transversal pair: intersect the two plane sections on the
            // common line
            const auto pi = plane_section(tris[i], nj, dj, eps);
            const auto pj = plane_section(tris[j], ni, di, eps);
            if (pi.size() < 2 || pj.size() < 2)
                continue;
            Vector3d dir = ni.cross(nj);
            if (dir.norm() < 1e-14)
                continue;
            dir.normalize();
            const auto span = [&](const std::vector<Vector3d> &pts, double &lo, double &hi,
                                  Vector3d &plo, Vector3d &phi) {
                lo = std::numeric_limits<double>::infinity();
                hi = -lo;
                for (const auto &p : pts) {
                    const double t = dir.dot(p);
                    if (t < lo) { lo = t; plo = p; }
                    if (t > hi) { hi = t; phi = p; }
                }
            };
            double li, hi_, lj, hj;
            Vector3d pli, phi_, plj, phj;
            span(pi, li, hi_, pli, phi_);
            span(pj, lj, hj, plj, phj);
            const double lo = std::max(li, lj), hiv = std::min(hi_, hj);
            if (hiv - lo <= eps)
                continue;
            const Vector3d a3 = (li >= lj) ? pli : plj;
            const Vector3d b3 = (hi_ <= hj) ? phi_ : phj;
            const double beyond = std::max(dist_to_shared(a3, shared),
                                           dist_to_shared(b3, shared));
            if (!shared.empty() && beyond <= eps)
                continue;
            contacts.push_back({i, j, false});
        }
    }
    return contacts;
}

} // namespace sandglass
