#include <sandglass/sweep.hpp>

#include <sandglass/constants.hpp>
#include <sandglass/error.hpp>
#include <sandglass/solver.hpp>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <limits>
#include <sstream>
#include <thread>

namespace sandglass {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

int worker_count() {
    if (const char *env = std::getenv("SANDGLASS_THREADS")) {
        int v = std::atoi(env);
        if (v > 0)
            return v;
    }
    unsigned hc = std::thread::hardware_concurrency();
    return hc ? static_cast<int>(hc) : 1;
}

// Runs body(i) for i in [0, count) on a small pool. body must not throw.
template <class F> void parallel_for(std::size_t count, F &&body) {
    std::size_t workers = std::min<std::size_t>(worker_count(), count);
    if (workers <= 1) {
        for (std::size_t i = 0; i < count; ++i)
            body(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w)
        pool.emplace_back([&] {
            for (std::size_t i; (i = next.fetch_add(1)) < count;)
                body(i);
        });
    for (auto &t : pool)
        t.join();
}

std::size_t grid_count(double lo, double hi, double step) {
    if (!(step > 0) || !(hi > lo))
        throw Error(ErrorCode::Domain, "sweep needs hi > lo and step > 0");
    return static_cast<std::size_t>(std::floor((hi - lo) / step + 1e-9));
}

std::string fmt(double v) {
    if (std::isnan(v))
        return "nan";
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

} // namespace

std::vector<SweepRow> sweep_snap(int n, double q1_min, double q1_max, double step) {
    const std::size_t count = grid_count(q1_min, q1_max, step);
    std::vector<SweepRow> rows(count);
    parallel_for(count, [&](std::size_t k) {
        SweepRow &row = rows[k];
        row.n = n;
        row.q1 = q1_min + static_cast<double>(k + 1) * step;
        SnapAttempt at = snap_pair_detailed(n, row.q1);
        if (!at.ok) {
            row.q2 = row.q3 = kNaN;
            row.open_H = row.open_h = row.open_r = kNaN;
            row.closed_H = row.closed_h = row.closed_r = kNaN;
            row.sigma = kNaN;
            row.saddle_S1 = row.saddle_S2 = row.saddle_S3 = kNaN;
            row.v_open = row.v_closed = kNaN;
            row.rel_dvol = row.rel_dheight = row.rel_dwaist = kNaN;
            row.failure = at.failure;
            return;
        }
        const SnapResult &res = at.result;
        row.q2 = res.spec.q2;
        row.q3 = res.spec.q3;
        row.open_H = res.open.H;
        row.open_h = res.open.h;
        row.open_r = res.open.r;
        row.closed_H = res.closed.H;
        row.closed_h = res.closed.h;
        row.closed_r = res.closed.r;
        row.sigma = res.saddle.sigma;
        row.saddle_S1 = res.saddle.S[0];
        row.saddle_S2 = res.saddle.S[1];
        row.saddle_S3 = res.saddle.S[2];
        row.v_open = res.v_open;
        row.v_closed = res.v_closed;
        row.rel_dvol = (res.v_open - res.v_closed) / res.v_closed;
        row.rel_dheight = 2.0 * (res.open.H - res.closed.H) / res.spec.R;
        row.rel_dwaist = (std::abs(res.open.r) - std::abs(res.closed.r)) / res.spec.R;
        row.open_free = res.open_intersection_free;
        row.closed_coplanar = res.closed_coplanar;
        row.saddle_shaky = res.saddle_shaky;
        row.failure = "OK";
    });
    return rows;
}

std::vector<ShakeRow> sweep_shake(int n, double q1_min, double q1_max, double step,
                                  FlexNormalization norm) {
    const std::size_t count = grid_count(q1_min, q1_max, step);
    std::vector<ShakeRow> rows(count);
    parallel_for(count, [&](std::size_t k) {
        ShakeRow &row = rows[k];
        row.n = n;
        row.q1 = q1_min + static_cast<double>(k + 1) * step;
        row.normalization = flex_normalization_name(norm);
        auto fail = [&](const char *code) {
            row.q2 = row.q3 = kNaN;
            row.H = row.h = row.r = kNaN;
            row.u = row.v = row.z = kNaN;
            row.kappa = kNaN;
            row.failure = code;
        };
        // Stages are attributed separately so a missed family root is not
        // reported as a realization problem.
        double q2;
        try {
            q2 = solve_shaky_q2(n, row.q1);
        } catch (const Error &) {
            fail("NO_SHAKY_Q2");
            return;
        }
        DesignSpec spec;
        const RealizedItem *pick = nullptr;
        RealizationSet set;
        try {
            spec = DesignSpec::sandglass_origami(n, row.q1, q2);
            set = realize(spec);
            for (const auto &item : set.items)
                if (item.double_root && !item.degenerate)
                    if (!pick || item.residual < pick->residual)
                        pick = &item;
        } catch (const Error &) {
            pick = nullptr;
        }
        if (!pick) {
            fail("NO_REALIZATION");
            return;
        }
        try {
            InfinitesimalFlex raw = infinitesimal_flex(pick->real);
            NormalizedFlex nf = normalize_flex(spec, raw, norm);
            row.q2 = spec.q2;
            row.q3 = spec.q3;
            row.H = pick->real.H;
            row.h = pick->real.h;
            row.r = pick->real.r;
            row.u = nf.flex.u;
            row.v = nf.flex.v;
            row.z = nf.flex.z;
            row.kappa = shakeability(spec, nf);
            row.failure = "OK";
        } catch (const Error &) {
            fail("ZERO_FLEX");
        }
    });
    return rows;
}

std::size_t argmax_sigma(const std::vector<SweepRow> &rows) {
    std::size_t best = rows.size();
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (rows[i].failure != "OK" || std::isnan(rows[i].sigma))
            continue;
        if (best == rows.size() || rows[i].sigma > rows[best].sigma)
            best = i;
    }
    if (best == rows.size())
        throw Error(ErrorCode::EmptyTable, "no successful row to maximize over");
    return best;
}

std::size_t argmax_kappa(const std::vector<ShakeRow> &rows) {
    std::size_t best = rows.size();
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (rows[i].failure != "OK" || std::isnan(rows[i].kappa))
            continue;
        if (best == rows.size() || rows[i].kappa > rows[best].kappa)
            best = i;
    }
    if (best == rows.size())
        throw Error(ErrorCode::EmptyTable, "no successful row to maximize over");
    return best;
}

std::string snap_table_csv(const std::vector<SweepRow> &rows) {
    std::ostringstream out;
    out << "# sandglass " << kVersion << " snap rows=" << rows.size();
    if (!rows.empty())
        out << " n=" << rows.front().n << " q1=" << fmt(rows.front().q1) << ".."
            << fmt(rows.back().q1);
    out << "\n";
    out << "n,q1,q2,q3,open_H,open_h,open_r,closed_H,closed_h,closed_r,sigma,"
           "saddle_S1,saddle_S2,saddle_S3,v_open,v_closed,rel_dvol,rel_dheight,"
           "rel_dwaist,open_free,closed_coplanar,saddle_shaky,failure\n";
    for (const auto &r : rows) {
        out << r.n << ',' << fmt(r.q1) << ',' << fmt(r.q2) << ',' << fmt(r.q3) << ','
            << fmt(r.open_H) << ',' << fmt(r.open_h) << ',' << fmt(r.open_r) << ','
            << fmt(r.closed_H) << ',' << fmt(r.closed_h) << ',' << fmt(r.closed_r) << ','
            << fmt(r.sigma) << ',' << fmt(r.saddle_S1) << ',' << fmt(r.saddle_S2) << ','
            << fmt(r.saddle_S3) << ',' << fmt(r.v_open) << ',' << fmt(r.v_closed) << ','
            << fmt(r.rel_dvol) << ',' << fmt(r.rel_dheight) << ',' << fmt(r.rel_dwaist) << ','
            << (r.open_free ? 1 : 0) << ',' << (r.closed_coplanar ? 1 : 0) << ','
            << (r.saddle_shaky ? 1 : 0) << ',' << r.failure << "\n";
    }
    return out.str();
}

std::string shake_table_csv(const std::vector<ShakeRow> &rows) {
    std::ostringstream out;
    out << "# sandglass " << kVersion << " shake rows=" << rows.size();
    if (!rows.empty())
        out << " n=" << rows.front().n << " q1=" << fmt(rows.front().q1) << ".."
            << fmt(rows.back().q1);
    out << "\n";
    out << "n,q1,q2,q3,H,h,r,u,v,z,kappa,normalization,failure\n";
    for (const auto &r : rows) {
        out << r.n << ',' << fmt(r.q1) << ',' << fmt(r.q2) << ',' << fmt(r.q3) << ','
            << fmt(r.H) << ',' << fmt(r.h) << ',' << fmt(r.r) << ',' << fmt(r.u) << ','
            << fmt(r.v) << ',' << fmt(r.z) << ',' << fmt(r.kappa) << ','
            << r.normalization << ',' << r.failure << "\n";
    }
    return out.str();
}

std::string series_color(int n) {
    switch (n) {
    case 3:
        return "yellow";
    case 4:
        return "green";
    case 5:
        return "cyan";
    case 6:
        return "magenta";
    default: {
        static const char *extra[] = {"orange", "blue", "red", "purple"};
        return extra[((n % 4) + 4) % 4];
    }
    }
}

std::vector<std::pair<double, double>> series_points_sigma(const std::vector<SweepRow> &rows) {
    std::vector<std::pair<double, double>> pts;
    pts.reserve(rows.size());
    for (const auto &r : rows)
        pts.emplace_back(r.q1, r.failure == "OK" ? r.sigma : kNaN);
    return pts;
}

std::vector<std::pair<double, double>> series_points_kappa(const std::vector<ShakeRow> &rows) {
    std::vector<std::pair<double, double>> pts;
    pts.reserve(rows.size());
    for (const auto &r : rows)
        pts.emplace_back(r.q1, r.failure == "OK" ? r.kappa : kNaN);
    return pts;
}

std::vector<std::pair<double, double>> series_points_rel(const std::vector<SweepRow> &rows,
                                                         const std::string &which) {
    std::vector<std::pair<double, double>> pts;
    pts.reserve(rows.size());
    for (const auto &r : rows) {
        double y = kNaN;
        if (r.failure == "OK") {
            if (which == "vol")
                y = r.rel_dvol;
            else if (which == "height")
                y = r.rel_dheight;
            else if (which == "waist")
                y = r.rel_dwaist;
            else
                throw Error(ErrorCode::Domain, "unknown relative-measure column: " + which);
        } else if (which != "vol" && which != "height" && which != "waist") {
            throw Error(ErrorCode::Domain, "unknown relative-measure column: " + which);
        }
        pts.emplace_back(r.q1, y);
    }
    return pts;
}

namespace {

// Tick positions at multiples of 1, 2 or 5 times a power of ten, aiming for
// roughly five intervals across [lo, hi].
std::vector<double> nice_ticks(double lo, double hi) {
    std::vector<double> ticks;
    if (!(hi > lo))
        return ticks;
    double raw = (hi - lo) / 5.0;
    double mag = std::pow(10.0, std::floor(std::log10(raw)));
    double norm = raw / mag;
    double step = (norm <= 1.0 ? 1.0 : norm <= 2.0 ? 2.0 : norm <= 5.0 ? 5.0 : 10.0) * mag;
    double first = std::ceil(lo / step - 1e-9) * step;
    for (double t = first; t <= hi + 1e-9 * step; t += step)
        ticks.push_back(std::abs(t) < 1e-12 * step ? 0.0 : t);
    return ticks;
}

std::string tick_label(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%g", v);
    return buf;
}

} // namespace

std::string plot_svg(const std::vector<Series> &series, const std::string &x_label,
                     const std::string &y_label, double x_min, double x_max) {
    const double W = 720, H = 480;
    const double ml = 78, mr = 24, mt = 24, mb = 56;
    const bool windowed = x_min < x_max;

    double xlo = windowed ? x_min : std::numeric_limits<double>::infinity();
    double xhi = windowed ? x_max : -std::numeric_limits<double>::infinity();
    double ylo = std::numeric_limits<double>::infinity();
    double yhi = -std::numeric_limits<double>::infinity();
    for (const auto &s : series)
        for (const auto &[x, y] : s.points) {
            if (std::isnan(x) || std::isnan(y))
                continue;
            if (windowed && (x < x_min || x > x_max))
                continue;
            if (!windowed) {
                xlo = std::min(xlo, x);
                xhi = std::max(xhi, x);
            }
            ylo = std::min(ylo, y);
            yhi = std::max(yhi, y);
        }
    if (!std::isfinite(xlo) || !std::isfinite(ylo))
        throw Error(ErrorCode::EmptyTable, "nothing to plot");
    if (!(xhi > xlo)) {
        const double pad = std::max(1.0, std::abs(xlo)) * 0.1;
        xlo -= pad;
        xhi += pad;
    }
    if (!(yhi > ylo)) {
        const double pad = std::max(1.0, std::abs(ylo)) * 0.1;
        ylo -= pad;
        yhi += pad;
    } else {
        const double pad = (yhi - ylo) * 0.05;
        ylo -= pad;
        yhi += pad;
    }

    auto px = [&](double x) { return ml + (x - xlo) / (xhi - xlo) * (W - ml - mr); };
    auto py = [&](double y) { return H - mb - (y - ylo) / (yhi - ylo) * (H - mt - mb); };

    std::ostringstream out;
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H
        << "\" viewBox=\"0 0 " << W << " " << H << "\">\n";
    out << "<rect width=\"" << W << "\" height=\"" << H << "\" fill=\"white\"/>\n";

    // grid + ticks
    for (double t : nice_ticks(xlo, xhi)) {
        double x = px(t);
        out << "<line class=\"tick x\" data-value=\"" << fmt(t) << "\" x1=\"" << x << "\" y1=\""
            << mt << "\" x2=\"" << x << "\" y2=\"" << H - mb << "\" stroke=\"#ddd\"/>\n";
        out << "<text class=\"tick x\" data-value=\"" << fmt(t) << "\" x=\"" << x << "\" y=\""
            << H - mb + 18 << "\" font-size=\"12\" text-anchor=\"middle\">" << tick_label(t)
            << "</text>\n";
    }
    for (double t : nice_ticks(ylo, yhi)) {
        double y = py(t);
        out << "<line class=\"tick y\" data-value=\"" << fmt(t) << "\" x1=\"" << ml << "\" y1=\""
            << y << "\" x2=\"" << W - mr << "\" y2=\"" << y << "\" stroke=\"#ddd\"/>\n";
        out << "<text class=\"tick y\" data-value=\"" << fmt(t) << "\" x=\"" << ml - 6 << "\" y=\""
            << y + 4 << "\" font-size=\"12\" text-anchor=\"end\">" << tick_label(t)
            << "</text>\n";
    }

    // axes
    out << "<line x1=\"" << ml << "\" y1=\"" << H - mb << "\" x2=\"" << W - mr << "\" y2=\""
        << H - mb << "\" stroke=\"black\"/>\n";
    out << "<line x1=\"" << ml << "\" y1=\"" << mt << "\" x2=\"" << ml << "\" y2=\"" << H - mb
        << "\" stroke=\"black\"/>\n";
    out << "<text x=\"" << (ml + W - mr) / 2 << "\" y=\"" << H - 14
        << "\" font-size=\"14\" text-anchor=\"middle\">" << x_label << "</text>\n";
    out << "<text x=\"18\" y=\"" << (mt + H - mb) / 2
        << "\" font-size=\"14\" text-anchor=\"middle\" transform=\"rotate(-90 18 "
        << (mt + H - mb) / 2 << ")\">" << y_label << "</text>\n";

    // series polylines, broken at NaN gaps and window edges; isolated points
    // (single-sample runs) get a dot marker instead of an invisible polyline
    for (const auto &s : series) {
        std::vector<std::vector<std::pair<double, double>>> runs(1);
        for (const auto &[x, y] : s.points) {
            if (std::isnan(x) || std::isnan(y) || (windowed && (x < x_min || x > x_max))) {
                if (!runs.back().empty())
                    runs.emplace_back();
                continue;
            }
            runs.back().emplace_back(px(x), py(y));
        }
        for (const auto &run : runs) {
            if (run.empty())
                continue;
            if (run.size() == 1) {
                out << "<circle class=\"series\" data-label=\"" << s.label << "\" cx=\""
                    << run[0].first << "\" cy=\"" << run[0].second << "\" r=\"3\" fill=\""
                    << s.color << "\"/>\n";
                continue;
            }
            out << "<polyline class=\"series\" data-label=\"" << s.label << "\" points=\"";
            for (const auto &[x, y] : run) {
                char buf[64];
                std::snprintf(buf, sizeof(buf), "%.3f,%.3f ", x, y);
                out << buf;
            }
            out << "\" fill=\"none\" stroke=\"" << s.color << "\" stroke-width=\"1.6\"/>\n";
        }
    }

    // legend, top-right corner
    double lx = W - mr - 150, ly = mt + 8;
    for (const auto &s : series) {
        out << "<line x1=\"" << lx << "\" y1=\"" << ly << "\" x2=\"" << lx + 26 << "\" y2=\"" << ly
            << "\" stroke=\"" << s.color << "\" stroke-width=\"2\"/>\n";
        out << "<text x=\"" << lx + 32 << "\" y=\"" << ly + 4 << "\" font-size=\"12\">" << s.label
            << "</text>\n";
        ly += 18;
    }

    out << "</svg>\n";
    return out.str();
}

} // namespace sandglass
