#include <doctest.h>

#include <sandglass/design.hpp>
#include <sandglass/error.hpp>
#include <sandglass/mesh.hpp>
#include <sandglass/solver.hpp>

#include "oracles.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <random>
#include <set>

using namespace sandglass;

namespace {

Mesh unit_cube() {
    Mesh m;
    m.V = {{0, 0, 0}, {1, 0, 0}, {1, 1, 0}, {0, 1, 0},
           {0, 0, 1}, {1, 0, 1}, {1, 1, 1}, {0, 1, 1}};
    m.F = {{0, 2, 1}, {0, 3, 2},  // bottom
           {4, 5, 6}, {4, 6, 7},  // top
           {0, 1, 5}, {0, 5, 4},  // front
           {1, 2, 6}, {1, 6, 5},  // right
           {2, 3, 7}, {2, 7, 6},  // back
           {3, 0, 4}, {3, 4, 7}}; // left
    return m;
}

} // namespace

TEST_CASE("unit-edge n=3 design realizes the regular icosahedron") {
    // all thirty edges have length 1, so one of the two realizations must be
    // the regular icosahedron (the other is its flipped-through self)
    const auto spec = DesignSpec::sandglass_spec(3, 1.0, 1.0, 1.0);
    const auto set = realize(spec);
    REQUIRE(set.items.size() == 2);

    const auto &ico = set.items[1].real; // larger r
    CHECK(ico.r == doctest::Approx(0.93417235896271578).epsilon(1e-12));
    const auto mesh = build_mesh(ico);
    CHECK(mesh.V.size() == 14); // 12 corners + 2 synthetic plate centers
    CHECK(mesh.F.size() == 24); // 18 belt + 2*3 plate fan triangles
    CHECK(mesh.E.size() == 30);

    CHECK(volume(mesh) ==
          doctest::Approx(5.0 / 12.0 * (3.0 + std::sqrt(5.0))).epsilon(1e-12));

    const double ref = std::acos(-std::sqrt(5.0) / 3.0);
    const auto dih = dihedral_angles(mesh);
    REQUIRE(dih.size() == 30);
    for (const auto &d : dih) {
        CHECK(d.angle == doctest::Approx(ref).epsilon(1e-12));
        CHECK_FALSE(d.degenerate);
    }
    CHECK(self_intersections(mesh).empty());

    // the sibling realization is everted and crosses itself heavily
    const auto everted = build_mesh(set.items[0].real);
    int crossings = 0;
    for (const auto &fc : self_intersections(everted))
        if (!fc.touching)
            ++crossings;
    CHECK(crossings == 180);
    CHECK(volume(everted) > 0); // still positively oriented, just tangled
}

TEST_CASE("mesh counts, vertex layout, and Euler characteristic") {
    for (int n = 3; n <= 8; ++n) {
        const auto spec = DesignSpec::sandglass_origami(n, 1.0, 1.0);
        const auto set = realize(spec);
        REQUIRE(!set.items.empty());
        const auto &real = set.items.back().real;
        const auto mesh = build_mesh(real);

        CHECK(mesh.V.size() == size_t(4 * n + 2));
        CHECK(mesh.F.size() == size_t(8 * n));
        CHECK(mesh.E.size() == size_t(10 * n)); // 2n skeleton + 8n belt

        // documented layout: A_i -> i, B_i -> n+i, D_i -> 2n+i, C_i -> 3n+i
        const DesignSpec &sp = real.spec;
        CHECK((mesh.V[0] - Eigen::Vector3d(sp.R, 0, real.H)).norm() < 1e-14);
        CHECK((mesh.V[n] - Eigen::Vector3d(sp.R * sp.c, sp.R * sp.s, -real.H)).norm() < 1e-14);
        CHECK((mesh.V[2 * n] - Eigen::Vector3d(real.r, 0, -real.h)).norm() < 1e-14);
        CHECK((mesh.V[3 * n + 1] -
               Eigen::Vector3d(real.r * sp.c, real.r * sp.s, real.h)).norm() < 1e-14);

        // per-class census
        std::map<EdgeClass, int> census;
        for (const auto &e : mesh.E)
            ++census[e.cls];
        CHECK(census[EdgeClass::Skeleton] == 2 * n);
        CHECK(census[EdgeClass::L1] == 2 * n);
        CHECK(census[EdgeClass::L2] == 2 * n);
        CHECK(census[EdgeClass::L3] == 2 * n);
        CHECK(census[EdgeClass::L4] == 2 * n);

        // Euler characteristic of the closed surface, edges recovered from
        // the face list (includes the fan edges the labeled list omits)
        std::set<std::pair<int, int>> undirected;
        for (const auto &f : mesh.F)
            for (int k = 0; k < 3; ++k) {
                int a = f[k], b = f[(k + 1) % 3];
                undirected.insert({std::min(a, b), std::max(a, b)});
            }
        const long V = long(mesh.V.size()), E = long(undirected.size()),
                   F = long(mesh.F.size());
        CHECK(V - E + F == 2);
        CHECK(E == 12 * n);

        // every directed edge must have exactly one opposite twin
        std::map<std::pair<int, int>, int> directed;
        for (const auto &f : mesh.F)
            for (int k = 0; k < 3; ++k)
                ++directed[{f[k], f[(k + 1) % 3]}];
        for (const auto &[e, cnt] : directed) {
            CHECK(cnt == 1);
            CHECK(directed.count({e.second, e.first}) == 1);
        }
    }
}

TEST_CASE("edge lengths in the mesh match the class values") {
    std::mt19937_64 rng(77);
    std::uniform_real_distribution<double> U1(0.4, 4.0), U2(0.2, 4.0);
    for (int trial = 0; trial < 20; ++trial) {
        const int n = 3 + int(rng() % 4);
        DesignSpec spec;
        try {
            spec = DesignSpec::sandglass_origami(n, U1(rng), U2(rng));
        } catch (const Error &) {
            continue;
        }
        try {
            for (const auto &item : realize(spec).items) {
                const auto mesh = build_mesh(item.real);
                for (const auto &e : mesh.E) {
                    const double L2 = (mesh.V[e.a] - mesh.V[e.b]).squaredNorm();
                    double want = 0;
                    switch (e.cls) {
                    case EdgeClass::Skeleton: want = 1.0; break;
                    case EdgeClass::L1: want = spec.q1; break;
                    case EdgeClass::L2: want = spec.q2; break;
                    case EdgeClass::L3: want = spec.q3; break;
                    case EdgeClass::L4: want = spec.q4; break;
                    default: FAIL("unexpected edge class in built mesh");
                    }
                    CHECK(std::fabs(L2 - want) < 1e-10);
                }
            }
        } catch (const Error &) {
        }
    }
}

TEST_CASE("squared class lengths formula matches raw coordinates") {
    std::mt19937_64 rng(101);
    std::uniform_real_distribution<double> U(-2.0, 2.0);
    for (int trial = 0; trial < 200; ++trial) {
        const int n = 3 + int(rng() % 6);
        const auto spec = DesignSpec::sandglass_spec(n, 1.0, 1.0, 1.0);
        const double H = U(rng), h = U(rng), r = U(rng);
        const auto S = squared_edge_lengths(spec, H, h, r);
        const auto O = oracle::class_lengths_sq(n, H, h, r);
        CHECK(std::fabs(S[0] - O[0]) < 1e-12);
        CHECK(std::fabs(S[1] - O[1]) < 1e-12);
        CHECK(std::fabs(S[2] - O[2]) < 1e-12);
        CHECK(std::fabs(S[3] - S[0]) < 1e-15); // S4 = S1 for every configuration
    }
}

TEST_CASE("signed volume of hand-built fixtures") {
    auto cube = unit_cube();
    CHECK(volume(cube) == doctest::Approx(1.0).epsilon(1e-14));

    // reversing every face flips the sign
    auto flipped = cube;
    for (auto &f : flipped.F)
        std::swap(f[1], f[2]);
    CHECK(volume(flipped) == doctest::Approx(-1.0).epsilon(1e-14));

    // a mesh with a missing face is not closed
    auto open_box = cube;
    open_box.F.pop_back();
    CHECK_THROWS_AS((void)volume(open_box), Error);
    try {
        (void)volume(open_box);
    } catch (const Error &err) {
        CHECK(err.code() == ErrorCode::NonClosedMesh);
    }

    // translation invariance (divergence-theorem sanity)
    auto moved = cube;
    for (auto &v : moved.V)
        v += Eigen::Vector3d(3.5, -2.0, 7.25);
    CHECK(volume(moved) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("mirrored realization builds a congruent positively-oriented mesh") {
    const auto spec = DesignSpec::sandglass_origami(4, 1.5, 0.8);
    for (const auto &item : realize(spec).items) {
        const auto m0 = build_mesh(item.real);
        const auto m1 = build_mesh(item.real.mirrored());
        CHECK(volume(m1) == doctest::Approx(volume(m0)).epsilon(1e-12));
        CHECK(self_intersections(m1).size() == self_intersections(m0).size());
    }
}

TEST_CASE("face-pair intersection fixtures") {
    // two well-separated triangles: no contact
    Mesh apart;
    apart.V = {{0, 0, 0}, {1, 0, 0}, {0, 1, 0}, {10, 0, 5}, {11, 0, 5}, {10, 1, 5}};
    apart.F = {{0, 1, 2}, {3, 4, 5}};
    CHECK(self_intersections(apart).empty());

    // a triangle pierced through its interior by another: one crossing
    Mesh pierced;
    pierced.V = {{-1, -1, 0}, {1, -1, 0}, {0, 1, 0},
                 {0, 0, -1}, {0, -1, 1}, {0, 1, 1}};
    pierced.F = {{0, 1, 2}, {3, 4, 5}};
    {
        const auto hits = self_intersections(pierced);
        REQUIRE(hits.size() == 1);
        CHECK_FALSE(hits[0].touching);
        CHECK(((hits[0].f0 == 0 && hits[0].f1 == 1) ||
               (hits[0].f0 == 1 && hits[0].f1 == 0)));
    }

    // coplanar overlap counts as touching, not crossing
    Mesh flat;
    flat.V = {{-1, -1, 0}, {1, -1, 0}, {0, 1, 0},
              {-0.2, -0.2, 0}, {0.2, -0.2, 0}, {0, 0.2, 0}};
    flat.F = {{0, 1, 2}, {3, 4, 5}};
    {
        const auto hits = self_intersections(flat);
        REQUIRE(hits.size() == 1);
        CHECK(hits[0].touching);
    }
}

TEST_CASE("edge class names are stable identifiers") {
    CHECK(std::string(edge_class_name(EdgeClass::Skeleton)) == "skeleton");
    CHECK(std::string(edge_class_name(EdgeClass::L1)) == "L1");
    CHECK(std::string(edge_class_name(EdgeClass::L2)) == "L2");
    CHECK(std::string(edge_class_name(EdgeClass::L3)) == "L3");
    CHECK(std::string(edge_class_name(EdgeClass::L4)) == "L4");
}
