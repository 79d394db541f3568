#include <sandglass/energy.hpp>

#include <sandglass/constants.hpp>
#include <sandglass/error.hpp>
#include <sandglass/polynomial.hpp>
#include <sandglass/solver.hpp>

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <sstream>

namespace sandglass {

EnergyLandscape::EnergyLandscape(const DesignSpec &spec) : spec_(spec) {
    const double n = spec.n;
    const double L1 = std::sqrt(spec.q1), L2 = std::sqrt(spec.q2), L3 = std::sqrt(spec.q3);
    denom_ = 4 * n * L1 + 2 * n * L2 + 2 * n * L3;
    weight_ = {4 * n / (8 * L1 * L1 * L1 * denom_), //
               2 * n / (8 * L2 * L2 * L2 * denom_), //
               2 * n / (8 * L3 * L3 * L3 * denom_)};
}

namespace {

// closed forms of the squared edge lengths and their derivatives in (H,h,r)
struct Metric {
    std::array<double, 3> S;
    std::array<Eigen::Vector3d, 3> grad;
    std::array<Eigen::Matrix3d, 3> hess;
};

Metric metric_at(const DesignSpec &d, const Eigen::Vector3d &x) {
    const double H = x(0), h = x(1), r = x(2);
    const double R = d.R, c = d.c;
    Metric m;
    m.S = {R * R + r * r - 2 * R * r * c + (H - h) * (H - h),
           (R - r) * (R - r) + (H + h) * (H + h), //
           2 * r * r * (1 - c) + 4 * h * h};
    m.grad[0] = {2 * (H - h), -2 * (H - h), 2 * r - 2 * R * c};
    m.grad[1] = {2 * (H + h), 2 * (H + h), 2 * r - 2 * R};
    m.grad[2] = {0, 8 * h, 4 * r * (1 - c)};
    m.hess[0] << 2, -2, 0, -2, 2, 0, 0, 0, 2;
    m.hess[1] << 2, 2, 0, 2, 2, 0, 0, 0, 2;
    m.hess[2] << 0, 0, 0, 0, 8, 0, 0, 0, 4 * (1 - c);
    return m;
}

} // namespace

double EnergyLandscape::value(const Eigen::Vector3d &x) const {
    const Metric m = metric_at(spec_, x);
    const std::array<double, 3> Q = {spec_.q1, spec_.q2, spec_.q3};
    double e = 0;
    for (int k = 0; k < 3; ++k) {
        const double d = Q[k] - m.S[k];
        e += weight_[k] * d * d;
    }
    return e;
}

Eigen::Vector3d EnergyLandscape::gradient(const Eigen::Vector3d &x) const {
    const Metric m = metric_at(spec_, x);
    const std::array<double, 3> Q = {spec_.q1, spec_.q2, spec_.q3};
    Eigen::Vector3d g = Eigen::Vector3d::Zero();
    for (int k = 0; k < 3; ++k)
        g -= 2 * weight_[k] * (Q[k] - m.S[k]) * m.grad[k];
    return g;
}

Eigen::Matrix3d EnergyLandscape::hessian(const Eigen::Vector3d &x) const {
    const Metric m = metric_at(spec_, x);
    const std::array<double, 3> Q = {spec_.q1, spec_.q2, spec_.q3};
    Eigen::Matrix3d He = Eigen::Matrix3d::Zero();
    for (int k = 0; k < 3; ++k)
        He += 2 * weight_[k] *
              (m.grad[k] * m.grad[k].transpose() - (Q[k] - m.S[k]) * m.hess[k]);
    return He;
}

// ---------------------------------------------------------------------------
// extremal (closed-state) designs
// ---------------------------------------------------------------------------

double extremal_condition_residual(int n, double q1, double q2) {
    if (n < 3)
        throw Error(ErrorCode::Domain, "n must be at least 3");
    const double W = 4 * q1 - 1;
    if (!(W > 0) || !(q2 > 0))
        throw Error(ErrorCode::Domain, "closed-state condition needs q2 > 0 and 4*q1 - 1 > 0");
    const double c = std::cos(M_PI / n);
    const double sW = std::sqrt(W), sQ2 = std::sqrt(q2);
    return 4 * c * q2 * q1 - 2 * c * q2 * q2 - 2 * q1 * q1 - 28 * q2 * q1 - 2 * q2 * q2 +
           q1 + 5 * q2 - 2 * c * q1 * q1 + W * sW * sQ2 + 8 * q2 * sQ2 * sW +
           4 * q1 * sQ2 * sW;
}

std::vector<double> extremal_q2_candidates(int n, double q1) {
    if (n < 3)
        throw Error(ErrorCode::Domain, "n must be at least 3");
    const double W = 4 * q1 - 1;
    if (!(W > 0))
        throw Error(ErrorCode::Domain, "closed-state designs need 4*q1 - 1 > 0");
    const double c = std::cos(M_PI / n);
    const double sW = std::sqrt(W);
    // the condition regrouped as a quartic in y = sqrt(q2)
    const std::vector<double> poly = {-2 * c - 2,                      //
                                      8 * sW,                          //
                                      4 * c * q1 - 28 * q1 + 5,        //
                                      W * sW + 4 * q1 * sW,            //
                                      q1 - 2 * q1 * q1 - 2 * c * q1 * q1};
    std::vector<double> out;
    for (double y : real_roots(poly)) {
        if (!(y > 1e-12))
            continue;
        const double q2 = y * y;
        if (std::fabs(extremal_condition_residual(n, q1, q2)) < 1e-10)
            out.push_back(q2);
    }
    std::sort(out.begin(), out.end());
    return out;
}

double extremal_q2(int n, double q1) {
    const auto cands = extremal_q2_candidates(n, q1);
    if (cands.empty())
        throw Error(ErrorCode::NoSolution, "no closed-state design at this q1");
    return cands.front();
}

ClosedState closed_state_check(const Realization &real) {
    const DesignSpec &d = real.spec;
    const double H = real.H, h = real.h, r = real.r, R = d.R, c = d.c, s = d.s;
    const Eigen::Vector3d A0(R, 0, H), B0(R * c, R * s, -H), D0(r, 0, -h), C1(r * c, r * s, h);
    ClosedState cs;
    cs.tet_volume = (B0 - A0).cross(D0 - A0).dot(C1 - A0) / 6.0;
    cs.factor_pi = 2 * r * s - 1;
    cs.factor_zero = 2 * H * r * s + h;
    cs.coplanar = std::fabs(cs.tet_volume) < kCoplanarTol;
    cs.closed = cs.coplanar && std::fabs(cs.factor_zero) <= std::fabs(cs.factor_pi);
    return cs;
}

// ---------------------------------------------------------------------------
// saddle search
// ---------------------------------------------------------------------------
namespace {

using Vec3 = Eigen::Vector3d;

// equal-arc-length reparametrization of a polyline, endpoints kept
void reparametrize(std::vector<Vec3> &path) {
    const int N = int(path.size());
    std::vector<double> arc(N, 0.0);
    for (int i = 1; i < N; ++i)
        arc[i] = arc[i - 1] + (path[i] - path[i - 1]).norm();
    const double total = arc.back();
    if (total <= 0)
        return;
    std::vector<Vec3> fresh(N);
    fresh.front() = path.front();
    fresh.back() = path.back();
    int seg = 1;
    for (int i = 1; i + 1 < N; ++i) {
        const double target = total * i / (N - 1);
        while (seg < N - 1 && arc[seg] < target)
            ++seg;
        const double span = arc[seg] - arc[seg - 1];
        const double t = span > 0 ? (target - arc[seg - 1]) / span : 0.0;
        fresh[i] = path[seg - 1] + t * (path[seg] - path[seg - 1]);
    }
    path = std::move(fresh);
}

std::vector<Vec3> relax_string(const EnergyLandscape &land, const Vec3 &a, const Vec3 &b,
                               int nodes, int sweeps) {
    std::vector<Vec3> path(nodes);
    for (int i = 0; i < nodes; ++i)
        path[i] = a + (b - a) * (double(i) / (nodes - 1));
    const double seglen = (b - a).norm() / (nodes - 1);
    for (int sweep = 0; sweep < sweeps; ++sweep) {
        double maxg = 0;
        std::vector<Vec3> grads(nodes);
        for (int i = 1; i + 1 < nodes; ++i) {
            grads[i] = land.gradient(path[i]);
            maxg = std::max(maxg, grads[i].norm());
        }
        if (maxg == 0)
            break;
        // largest step that keeps any node within half a segment per sweep
        const double dt = 0.5 * seglen / maxg;
        double moved = 0;
        for (int i = 1; i + 1 < nodes; ++i) {
            path[i] -= dt * grads[i];
            moved = std::max(moved, dt * grads[i].norm());
        }
        reparametrize(path);
        if (moved < 1e-13)
            break;
    }
    return path;
}

struct NewtonOutcome {
    Vec3 x;
    double grad_norm;
    int iterations;
};

NewtonOutcome newton_on_gradient(const EnergyLandscape &land, Vec3 x) {
    int it = 0;
    double gnorm = land.gradient(x).norm();
    for (; it < 200 && gnorm > kSaddleGradTol; ++it) {
        const Vec3 g = land.gradient(x);
        const Eigen::Matrix3d He = land.hessian(x);
        Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> es(He);
        const Vec3 lam = es.eigenvalues();
        const double lmax = lam.cwiseAbs().maxCoeff();
        Vec3 inv;
        for (int k = 0; k < 3; ++k) {
            double l = lam(k);
            const double floor_mag = std::max(1e-14 * lmax, 1e-300);
            if (std::fabs(l) < floor_mag)
                l = (l < 0 ? -floor_mag : floor_mag);
            inv(k) = 1.0 / l;
        }
        Vec3 step = -(es.eigenvectors() * inv.asDiagonal() *
                      es.eigenvectors().transpose() * g);
        const double maxstep = 0.25;
        if (step.norm() > maxstep)
            step *= maxstep / step.norm();
        x += step;
        gnorm = land.gradient(x).norm();
    }
    return {x, gnorm, it};
}

SaddleInfo saddle_for_pairing(const EnergyLandscape &land, const Vec3 &a, const Vec3 &b,
                              bool everted) {
    const int nodes = 64;
    std::vector<Vec3> path = relax_string(land, a, b, nodes, 600);

    int top = -1;
    double etop = 0;
    for (int i = 1; i + 1 < nodes; ++i) {
        const double e = land.value(path[i]);
        if (e > etop) {
            etop = e;
            top = i;
        }
    }
    if (top < 0 || etop < 1e-15)
        throw Error(ErrorCode::NoPathConvergence,
                    "transition path carries no energy barrier between the endpoints");

    const NewtonOutcome refined = newton_on_gradient(land, path[top]);
    if (refined.grad_norm > kSaddleGradTol)
        throw Error(ErrorCode::NoPathConvergence,
                    "gradient refinement of the barrier node did not converge");

    SaddleInfo info;
    info.x = refined.x;
    info.grad_norm = refined.grad_norm;
    info.iterations = refined.iterations;
    info.sigma = land.value(refined.x);
    info.everted = everted;
    if (info.sigma < 1e-15)
        throw Error(ErrorCode::NoPathConvergence,
                    "barrier refinement collapsed into a zero-energy configuration");

    Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> es(land.hessian(refined.x));
    info.eigenvalues = es.eigenvalues();
    const double lscale = std::max(1.0, info.eigenvalues.cwiseAbs().maxCoeff());
    int negatives = 0, positives = 0;
    for (int k = 0; k < 3; ++k) {
        if (info.eigenvalues(k) < -1e-10 * lscale)
            ++negatives;
        else if (info.eigenvalues(k) > 1e-10 * lscale)
            ++positives;
    }
    if (negatives != 1 || positives != 2)
        throw Error(ErrorCode::NoPathConvergence,
                    "stationary point is not a rank-1 saddle of the landscape");

    const auto S = squared_edge_lengths(land.spec(), info.x(0), info.x(1), info.x(2));
    info.S = {S[0], S[1], S[2]};

    // the passed configuration must itself be shaky: the design with the
    // saddle's squared lengths has a double-root realization
    const DesignSpec passed =
        DesignSpec::sandglass_spec(land.spec().n, S[0], S[1], S[2]);
    const double disc = quartic_discriminant_normalized(r_quartic_coefficients(passed));
    if (std::fabs(disc) > kSaddleShakyTol)
        throw Error(ErrorCode::SaddleNotShaky,
                    "configuration passed at the barrier is not shaky");

    path[top] = refined.x;
    info.saddle_node = top;
    info.path = std::move(path);
    return info;
}

} // namespace

SaddleInfo find_saddle(const EnergyLandscape &land, const Realization &a, const Realization &b) {
    const Vec3 xa(a.H, a.h, a.r), xb(b.H, b.h, b.r);
    if (land.value(xa) > 1e-15 || land.value(xb) > 1e-15)
        throw Error(ErrorCode::Domain, "saddle search endpoints must be realizations");
    if ((xa - xb).norm() < 1e-12)
        throw Error(ErrorCode::Domain, "saddle search endpoints coincide");

    const Realization bm = b.mirrored();
    const Vec3 xbm(bm.H, bm.h, bm.r);
    struct Attempt {
        Vec3 target;
        bool everted;
    };
    std::vector<Attempt> attempts = {{xb, false}};
    if ((xbm - xb).norm() > 1e-12)
        attempts.push_back({xbm, true});

    SaddleInfo best;
    bool have = false;
    bool any_not_shaky = false;
    std::string why;
    for (const Attempt &att : attempts) {
        try {
            SaddleInfo info = saddle_for_pairing(land, xa, att.target, att.everted);
            if (!have || info.sigma < best.sigma) {
                best = std::move(info);
                have = true;
            }
        } catch (const Error &err) {
            any_not_shaky |= err.code() == ErrorCode::SaddleNotShaky;
            if (!why.empty())
                why += "; ";
            why += err.what();
        }
    }
    if (!have)
        throw Error(any_not_shaky ? ErrorCode::SaddleNotShaky : ErrorCode::NoPathConvergence, why);
    return best;
}

// ---------------------------------------------------------------------------
// snapping pairs
// ---------------------------------------------------------------------------
SnapAttempt snap_pair_detailed(int n, double q1) {
    SnapAttempt attempt;
    std::vector<double> cands;
    try {
        cands = extremal_q2_candidates(n, q1);
    } catch (const Error &err) {
        attempt.failure = "NO_EXTREMAL_Q2";
        attempt.log.push_back(err.what());
        return attempt;
    }
    if (cands.empty()) {
        attempt.failure = "NO_EXTREMAL_Q2";
        attempt.log.push_back("no closed-state design at this q1");
        return attempt;
    }

    // failure stages ordered by progress; the furthest one is reported
    int stage = 0;
    const auto bump = [&stage](int s) { stage = std::max(stage, s); };
    static const char *stage_name[] = {"NO_EXTREMAL_Q2", "NO_REALIZATION",
                                       "SELF_INTERSECTING", "NO_SADDLE",
                                       "SADDLE_NOT_SHAKY"};

    std::vector<std::string> &log = attempt.log;
    for (size_t branch = 0; branch < cands.size(); ++branch) {
        const double q2 = cands[branch];
        std::ostringstream tag;
        tag << "branch " << branch << " (q2=" << q2 << "): ";
        DesignSpec spec;
        RealizationSet set;
        try {
            spec = DesignSpec::sandglass_origami(n, q1, q2);
            set = realize(spec);
        } catch (const Error &err) {
            log.push_back(tag.str() + err.what());
            bump(1);
            continue;
        }

        // the closed endpoint: coplanar through the fold-flat factor; faces of
        // the closed shape rest against each other, so it is exempt from the
        // crossing test that guards the open endpoint
        int closed_at = -1;
        double closed_score = 0;
        for (size_t i = 0; i < set.items.size(); ++i) {
            const ClosedState cs = closed_state_check(set.items[i].real);
            if (!cs.closed)
                continue;
            const double score = std::fabs(cs.factor_zero);
            if (closed_at < 0 || score < closed_score) {
                closed_at = int(i);
                closed_score = score;
            }
        }
        if (closed_at < 0) {
            log.push_back(tag.str() + "no coplanar closed realization");
            bump(1);
            continue;
        }
        const Realization &closed = set.items[closed_at].real;

        // candidate open endpoints: the other realizations, strictly
        // intersection-free, tallest first
        std::vector<int> open_candidates;
        for (size_t i = 0; i < set.items.size(); ++i) {
            if (int(i) == closed_at || set.items[i].degenerate)
                continue;
            if (self_intersections(build_mesh(set.items[i].real)).empty())
                open_candidates.push_back(int(i));
        }
        if (open_candidates.empty()) {
            log.push_back(tag.str() + "no intersection-free open realization");
            bump(2);
            continue;
        }
        std::sort(open_candidates.begin(), open_candidates.end(), [&](int lhs, int rhs) {
            return std::fabs(set.items[lhs].real.H) > std::fabs(set.items[rhs].real.H);
        });

        const EnergyLandscape land(spec);
        for (int oi : open_candidates) {
            const Realization &open = set.items[oi].real;
            try {
                SnapResult result;
                result.spec = spec;
                result.open = open;
                result.closed = closed;
                result.saddle = find_saddle(land, open, closed);
                result.v_open = volume(build_mesh(open));
                result.v_closed = volume(build_mesh(closed));
                result.open_intersection_free = true;
                result.closed_coplanar = true;
                result.saddle_shaky = true;
                result.branch = int(branch);
                result.branch_log = log;
                attempt.ok = true;
                attempt.result = std::move(result);
                return attempt;
            } catch (const Error &err) {
                std::ostringstream sub;
                sub << tag.str() << "open candidate (H=" << open.H << "): " << err.what();
                log.push_back(sub.str());
                bump(err.code() == ErrorCode::SaddleNotShaky ? 4 : 3);
            }
        }
    }

    attempt.failure = stage_name[stage];
    return attempt;
}

SnapResult snap_pair(int n, double q1) {
    SnapAttempt attempt = snap_pair_detailed(n, q1);
    if (attempt.ok)
        return attempt.result;
    if (attempt.failure == "NO_EXTREMAL_Q2")
        throw Error(ErrorCode::NoSolution,
                    attempt.log.empty() ? "no closed-state design at this q1" : attempt.log.front());
    std::ostringstream msg;
    msg << "closed-state q2 candidates exist but none yields a snapping pair;";
    for (const std::string &line : attempt.log)
        msg << "\n  " << line;
    throw Error(ErrorCode::VerificationFailed, msg.str());
}

} // namespace sandglass
