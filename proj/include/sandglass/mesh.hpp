#pragma once
// Triangulated surface of a realized design: vertex construction, edge
// classes, dihedral angles, volume, and self-contact detection.

#include <sandglass/design.hpp>

#include <Eigen/Dense>

#include <array>
#include <vector>

namespace sandglass {

enum class EdgeClass { Skeleton, L1, L2, L3, L4, Cap, Other };

const char *edge_class_name(EdgeClass c);

struct MeshEdge {
    int a = 0, b = 0;
    EdgeClass cls = EdgeClass::Other;
};

// Closed oriented triangle mesh. Vertex layout for built meshes
// (0 <= i < n):  A_i -> i,  B_i -> n+i,  D_i -> 2n+i,  C_i -> 3n+i,
// plate centers A -> 4n, B -> 4n+1. Faces are outward oriented; the edge
// list carries the 2n skeleton edges and the 8n belt edges with classes.
struct Mesh {
    std::vector<Eigen::Vector3d> V;
    std::vector<std::array<int, 3>> F;
    std::vector<MeshEdge> E;
};

// Squared lengths (S1, S2, S3, S4) of the four belt edge classes in the
// symmetric configuration (H, h, r):
//     S1 = R^2 + r^2 - 2*R*r*c + (H - h)^2
//     S2 = (R - r)^2 + (H + h)^2
//     S3 = 2*r^2*(1 - c) + 4*h^2
//     S4 = S1   (identically, for every configuration)
std::array<double, 4> squared_edge_lengths(const DesignSpec &spec, double H, double h, double r);

// Vertices, outward-oriented faces (6n belt triangles + 2n plate fan
// triangles through synthetic centers) and the labeled edge list.
Mesh build_mesh(const Realization &real);

struct EdgeDihedral {
    int a = 0, b = 0;
    EdgeClass cls = EdgeClass::Other;
    double angle = 0;        // inside dihedral in [0, 2*pi)
    bool degenerate = false; // an incident face has (near) zero area
};

// Inside dihedral angle along every listed edge shared by exactly two
// faces (p in (0,2pi); flat = pi, > pi means the edge is a "mountain" seen
// from outside). If the mesh has no edge list, all two-face edges are
// measured and labeled Other.
std::vector<EdgeDihedral> dihedral_angles(const Mesh &mesh);

// Signed enclosed volume by the divergence theorem; positive for outward
// orientation. Throws NonClosedMesh unless every face edge is matched by
// exactly one oppositely-directed twin.
double volume(const Mesh &mesh);

struct FaceContact {
    int f0 = 0, f1 = 0;
    bool touching = false; // coplanar overlap (boundary contact), not a crossing
};

// Pairs of faces that intersect beyond `eps`. Faces sharing vertices are
// tested only for contact away from the shared simplex. Coplanar overlaps
// are reported with touching = true so folded-flat (boundary) states can be
// told apart from genuine crossings.
std::vector<FaceContact> self_intersections(const Mesh &mesh, double eps = 1e-8);

} // namespace sandglass
