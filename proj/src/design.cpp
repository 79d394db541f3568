#include <sandglass/design.hpp>

#include <sandglass/constants.hpp>
#include <sandglass/develop.hpp>
#include <sandglass/error.hpp>

#include <cmath>
#include <string>

namespace sandglass {

static DesignSpec finish(int n, double q1, double q2, double q3, double q4) {
    if (n < 3)
        throw Error(ErrorCode::Domain, "n must be at least 3, got " + std::to_string(n));
    for (double q : {q1, q2, q3, q4})
        if (!(q > 0) || !std::isfinite(q))
            throw Error(ErrorCode::Domain, "squared edge lengths must be positive and finite");

    DesignSpec d;
    d.n = n;
    d.q1 = q1;
    d.q2 = q2;
    d.q3 = q3;
    d.q4 = q4;
    const double ang = M_PI / n;
    d.c = std::cos(ang);
    d.s = std::sin(ang);
    d.R = 1.0 / (2.0 * d.s);
    d.W = 4.0 * q1 - 1.0;
    d.sandglass = (q1 == q4);
    d.origami = false;
    if (d.sandglass && d.W > 0) {
        const double q3o = q1 + q2 - std::sqrt(q2 * d.W);
        d.origami = std::abs(q3 - q3o) <= kGeomTol * std::max(1.0, std::abs(q3o));
    }
    return d;
}

DesignSpec DesignSpec::general(int n, double q1, double q2, double q3, double q4) {
    return finish(n, q1, q2, q3, q4);
}

DesignSpec DesignSpec::sandglass_spec(int n, double q1, double q2, double q3) {
    return finish(n, q1, q2, q3, q1);
}

DesignSpec DesignSpec::sandglass_origami(int n, double q1, double q2) {
    return finish(n, q1, q2, origami_q3(q1, q2), q1);
}

int dof_count(int n) { return 6 * (n + 1) - 8 * n; }

Realization Realization::canonical() const {
    if (H < 0 || (H == 0 && h < 0))
        return mirrored();
    return *this;
}

} // namespace sandglass
