#pragma once
////////////////////////////////////////////////////////////////////////////
// design.hpp
//
// Parameter record for antiprismatic sandglass structures and the symmetric
// configuration coordinates shared by every module of the toolkit.
//
// The skeleton consists of two congruent regular n-gons ("plates") of side
// length 1 twisted against each other about a common axis, joined by a belt
// of 6n triangles. Four belt edge classes appear, with squared lengths
// Q1..Q4; a *sandglass* design is one with Q1 = Q4, which makes the belt
// developable exactly when Q3 = Q1 + Q2 - sqrt(Q2*(4*Q1-1)).
//
// Derived per-design constants used throughout:
//     c = cos(pi/n),  s = sin(pi/n),  R = 1/(2s)  (plate circumradius),
//     W = 4*Q1 - 1.
//
// A symmetric configuration is described by three numbers (H, h, r): the
// plates sit at heights +-H, the waist rings at heights -+h on radius r.
// (H, h, r) and (-H, -h, r) describe congruent shapes (reflection in the
// plate plane composed with a twist), so canonical representatives carry
// H >= 0, and h >= 0 when H = 0.
////////////////////////////////////////////////////////////////////////////

namespace sandglass {

struct DesignSpec {
    int n = 3;
    double q1 = 1, q2 = 1, q3 = 1, q4 = 1; // squared belt edge lengths

    // cached trigonometry of the twist angle pi/n
    double c = 0, s = 0, R = 0, W = 0;

    bool sandglass = false; // q1 == q4
    bool origami = false;   // q3 equals the developable value within 1e-12

    // General birosette designs (q4 free); validates n >= 3 and positivity.
    static DesignSpec general(int n, double q1, double q2, double q3, double q4);

    // Sandglass designs (q4 = q1).
    static DesignSpec sandglass_spec(int n, double q1, double q2, double q3);

    // Sandglass designs with q3 filled in from the developability condition.
    static DesignSpec sandglass_origami(int n, double q1, double q2);
};

// Kinematic degree-of-freedom count of the triangulated belt plus rigid
// plates: 6*(n+1) - 8*n = 6 - 2*n. Zero for n = 3, negative (overbraced)
// beyond; any mobility for n >= 3 is therefore a singular (shaky) effect.
int dof_count(int n);

struct Realization {
    double H = 0, h = 0, r = 0;
    DesignSpec spec;

    Realization() = default;
    Realization(double H_, double h_, double r_, const DesignSpec &s)
        : H(H_), h(h_), r(r_), spec(s) {}

    Realization mirrored() const { return {-H, -h, r, spec}; }
    Realization canonical() const;
};

} // namespace sandglass
