#include <sandglass/shake.hpp>

#include <sandglass/error.hpp>
#include <sandglass/solver.hpp>

#include <cmath>

namespace sandglass {

const char *flex_normalization_name(FlexNormalization norm) {
    switch (norm) {
    case FlexNormalization::MeanRelativeRate:
        return "mean-relative-rate";
    case FlexNormalization::UnitCapSpeed:
        return "unit-cap-speed";
    }
    return "?";
}

std::array<double, 3> flex_velocity_deltas(const DesignSpec &spec,
                                           const InfinitesimalFlex &flex) {
    const double u = flex.u, v = flex.v, z = flex.z;
    const double d1 = u * u + (v + z) * (v + z);
    const double d2 = u * u + (v - z) * (v - z);
    const double d3 = 2.0 * u * u * (1.0 - spec.c) + 4.0 * v * v;
    return {d1, d2, d3};
}

NormalizedFlex normalize_flex(const DesignSpec &spec, const InfinitesimalFlex &flex,
                              FlexNormalization norm) {
    const double n = spec.n;
    auto d = flex_velocity_deltas(spec, flex);
    double lambda = 0;
    if (norm == FlexNormalization::MeanRelativeRate) {
        const double rho = (4.0 * n * d[0] / spec.q1 + 2.0 * n * d[1] / spec.q2 +
                            2.0 * n * d[2] / spec.q3) /
                           (8.0 * n);
        if (!(rho > 0))
            throw Error(ErrorCode::ZeroFlex, "flex has no edge-length rate to normalize");
        lambda = 1.0 / std::sqrt(rho);
    } else {
        if (flex.z == 0)
            throw Error(ErrorCode::ZeroFlex, "flex has zero plate speed");
        lambda = 1.0 / std::abs(flex.z);
    }
    NormalizedFlex out;
    out.flex = {flex.u * lambda, flex.v * lambda, flex.z * lambda};
    for (int k = 0; k < 3; ++k)
        out.d[k] = d[k] * lambda * lambda;
    out.normalization = norm;
    return out;
}

double shakeability(const DesignSpec &spec, const NormalizedFlex &flex) {
    const double n = spec.n;
    const double l1 = std::sqrt(spec.q1);
    const double l2 = std::sqrt(spec.q2);
    const double l3 = std::sqrt(spec.q3);
    const double denom = 4.0 * n * l1 + 2.0 * n * l2 + 2.0 * n * l3;
    const double bracket = 4.0 * n * flex.d[0] * flex.d[0] / (8.0 * l1 * l1 * l1) +
                           2.0 * n * flex.d[1] * flex.d[1] / (8.0 * l2 * l2 * l2) +
                           2.0 * n * flex.d[2] * flex.d[2] / (8.0 * l3 * l3 * l3);
    return 2.0 * bracket / denom;
}

ShakeResult shake_design(int n, double q1, FlexNormalization norm) {
    ShakeResult out;
    double q2 = solve_shaky_q2(n, q1, &out.alternate_q2);
    out.spec = DesignSpec::sandglass_origami(n, q1, q2);

    RealizationSet set = realize(out.spec);
    const RealizedItem *pick = nullptr;
    for (const auto &item : set.items)
        if (item.double_root && !item.degenerate)
            if (!pick || item.residual < pick->residual)
                pick = &item;
    if (!pick)
        throw Error(ErrorCode::NoSolution,
                    "family condition holds but no coalesced realization found");
    out.real = pick->real;

    InfinitesimalFlex raw = infinitesimal_flex(out.real);
    out.flex = normalize_flex(out.spec, raw, norm);
    out.kappa = shakeability(out.spec, out.flex);
    return out;
}

} // namespace sandglass
