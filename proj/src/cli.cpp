#include <sandglass/cli.hpp>

#include <sandglass/constants.hpp>
#include <sandglass/design.hpp>
#include <sandglass/develop.hpp>
#include <sandglass/energy.hpp>
#include <sandglass/error.hpp>
#include <sandglass/mesh.hpp>
#include <sandglass/objio.hpp>
#include <sandglass/rigidity.hpp>
#include <sandglass/shake.hpp>
#include <sandglass/solver.hpp>
#include <sandglass/sweep.hpp>

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>

namespace sandglass {

namespace {

std::string g(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

double parse_num(const std::string &text, const char *what) {
    try {
        std::size_t pos = 0;
        double v = std::stod(text, &pos);
        if (pos != text.size())
            throw std::invalid_argument("trailing characters");
        return v;
    } catch (const std::exception &) {
        throw Error(ErrorCode::Usage,
                    std::string("expected a number for ") + what + ", got '" + text + "'");
    }
}

int single_n(const RunConfig &rc) {
    if (rc.ns.size() != 1)
        throw Error(ErrorCode::Usage, "this subcommand takes exactly one --n");
    return rc.ns.front();
}

FlexNormalization parse_norm(const std::string &id) {
    if (id == "mean-relative-rate")
        return FlexNormalization::MeanRelativeRate;
    if (id == "unit-cap-speed")
        return FlexNormalization::UnitCapSpeed;
    throw Error(ErrorCode::Usage, "unknown --normalization '" + id +
                                      "' (use mean-relative-rate or unit-cap-speed)");
}

// "auto" picks the smallest verified root of the relevant one-parameter
// condition: the coalescence locus for snapping work, the flexibility locus
// for shaky work.
enum class AutoQ2 { Extremal, Family };

double resolve_q2(const RunConfig &rc, int n, AutoQ2 mode) {
    if (rc.q2 == "auto")
        return mode == AutoQ2::Family ? solve_shaky_q2(n, rc.q1) : extremal_q2(n, rc.q1);
    return parse_num(rc.q2, "--q2");
}

DesignSpec make_spec(const RunConfig &rc, int n, double q2) {
    if (rc.q3 == "origami")
        return DesignSpec::sandglass_origami(n, rc.q1, q2);
    return DesignSpec::sandglass_spec(n, rc.q1, q2, parse_num(rc.q3, "--q3"));
}

void write_text_file(const std::string &path, const std::string &content) {
    std::ofstream f(path);
    if (!f)
        throw Error(ErrorCode::Usage, "cannot open for writing: " + path);
    f << content;
}

std::string spec_params(const DesignSpec &spec) {
    std::ostringstream s;
    s << "n=" << spec.n << " q1=" << g(spec.q1) << " q2=" << g(spec.q2) << " q3=" << g(spec.q3);
    return s.str();
}

std::string state_params(const Realization &real) {
    std::ostringstream s;
    s << "H=" << g(real.H) << " h=" << g(real.h) << " r=" << g(real.r);
    return s.str();
}

void run_realize(const RunConfig &rc, std::ostream &out) {
    const int n = single_n(rc);
    const double q2 = resolve_q2(rc, n, AutoQ2::Extremal);
    const DesignSpec spec = make_spec(rc, n, q2);
    const double tol = rc.tol_residual > 0 ? rc.tol_residual : kResidualTol;
    const RealizationSet set = realize(spec);
    out << "n = " << n << "\n"
        << "q1 = " << g(spec.q1) << "\n"
        << "q2 = " << g(spec.q2) << "\n"
        << "q3 = " << g(spec.q3) << "\n"
        << "W = " << g(spec.W) << "\n"
        << "R = " << g(spec.R) << "\n"
        << "discriminant = " << g(set.discriminant) << "\n";
    for (std::size_t k = 0; k < set.items.size(); ++k) {
        const RealizedItem &it = set.items[k];
        out << "realization[" << k << "]: H = " << g(it.real.H) << " h = " << g(it.real.h)
            << " r = " << g(it.real.r) << " residual = " << g(it.residual)
            << " double_root = " << (it.double_root ? 1 : 0)
            << " degenerate = " << (it.degenerate ? 1 : 0)
            << " ok = " << (it.residual <= tol ? 1 : 0) << "\n";
    }
}

void run_origami(const RunConfig &rc, std::ostream &out) {
    if (rc.q2 == "auto")
        throw Error(ErrorCode::Usage, "origami needs an explicit numeric --q2");
    const double q3 = origami_q3(rc.q1, parse_num(rc.q2, "--q2"));
    out << "Q3 = " << g(q3) << "\n";
}

void run_shaky(const RunConfig &rc, std::ostream &out) {
    const int n = single_n(rc);
    const ShakeResult res = shake_design(n, rc.q1, parse_norm(rc.normalization));
    const ShakyCheck chk = shaky_check(res.spec);
    out << "q2 = " << g(res.spec.q2) << "\n";
    if (!res.alternate_q2.empty()) {
        out << "alternate_q2 =";
        for (double v : res.alternate_q2)
            out << " " << g(v);
        out << "\n";
    }
    out << "q3 = " << g(res.spec.q3) << "\n"
        << "H = " << g(res.real.H) << "\n"
        << "h = " << g(res.real.h) << "\n"
        << "r = " << g(res.real.r) << "\n"
        << "family_residual = " << g(chk.family_residual) << "\n"
        << "discriminant = " << g(chk.discriminant) << "\n"
        << "sigma_min = " << g(chk.sigma_min) << "\n"
        << "kernel_dim = " << full_rigidity_kernel_dim(res.real) << "\n"
        << "flex: u = " << g(res.flex.flex.u) << " v = " << g(res.flex.flex.v)
        << " z = " << g(res.flex.flex.z) << " (" << flex_normalization_name(res.flex.normalization)
        << ")\n"
        << "kappa = " << g(res.kappa) << "\n";
}

void run_snap(const RunConfig &rc, std::ostream &out) {
    const int n = single_n(rc);
    const SnapResult res = snap_pair(n, rc.q1);
    out << "q1 = " << g(res.spec.q1) << "\n"
        << "q2 = " << g(res.spec.q2) << "\n"
        << "q3 = " << g(res.spec.q3) << "\n"
        << "open:   H = " << g(res.open.H) << " h = " << g(res.open.h) << " r = " << g(res.open.r)
        << " volume = " << g(res.v_open) << "\n"
        << "closed: H = " << g(res.closed.H) << " h = " << g(res.closed.h)
        << " r = " << g(res.closed.r) << " volume = " << g(res.v_closed) << "\n"
        << "saddle: H = " << g(res.saddle.x[0]) << " h = " << g(res.saddle.x[1])
        << " r = " << g(res.saddle.x[2]) << "\n"
        << "sigma = " << g(res.saddle.sigma) << "\n"
        << "saddle_S1 = " << g(res.saddle.S[0]) << "\n"
        << "saddle_S2 = " << g(res.saddle.S[1]) << "\n"
        << "saddle_S3 = " << g(res.saddle.S[2]) << "\n"
        << "grad_norm = " << g(res.saddle.grad_norm) << "\n"
        << "hessian_eigenvalues = " << g(res.saddle.eigenvalues[0]) << " "
        << g(res.saddle.eigenvalues[1]) << " " << g(res.saddle.eigenvalues[2]) << "\n"
        << "everted = " << (res.saddle.everted ? 1 : 0) << "\n"
        << "open_intersection_free = " << (res.open_intersection_free ? 1 : 0) << "\n"
        << "closed_coplanar = " << (res.closed_coplanar ? 1 : 0) << "\n"
        << "saddle_shaky = " << (res.saddle_shaky ? 1 : 0) << "\n";

    const std::string prefix = rc.out.empty() ? "snap" : rc.out;
    const std::string base = "sandglass " + std::string(kVersion) + " snap " + spec_params(res.spec);
    write_obj(prefix + "-open.obj", build_mesh(res.open),
              base + " state=open " + state_params(res.open));
    write_obj(prefix + "-closed.obj", build_mesh(res.closed),
              base + " state=closed " + state_params(res.closed));
    Realization sad(res.saddle.x[0], res.saddle.x[1], res.saddle.x[2], res.spec);
    write_obj(prefix + "-saddle.obj", build_mesh(sad),
              base + " state=saddle " + state_params(sad));
    out << "wrote " << prefix << "-open.obj " << prefix << "-closed.obj " << prefix
        << "-saddle.obj\n";
}

std::vector<int> sweep_gonalities(const RunConfig &rc) {
    std::vector<int> ns = rc.ns;
    std::sort(ns.begin(), ns.end());
    ns.erase(std::unique(ns.begin(), ns.end()), ns.end());
    return ns;
}

void run_sweep_snap(const RunConfig &rc, std::ostream &out) {
    const double lo = rc.q1_min >= 0 ? rc.q1_min : 0.25;
    const double hi = rc.q1_max >= 0 ? rc.q1_max : 5.0;
    const double st = rc.step > 0 ? rc.step : 0.01;
    if (!(hi > lo) || !(st > 0))
        throw Error(ErrorCode::Usage, "need --q1-max > --q1-min and --step > 0");
    if (rc.plot_column != "sigma" && rc.plot_column != "rel_dvol" &&
        rc.plot_column != "rel_dheight" && rc.plot_column != "rel_dwaist")
        throw Error(ErrorCode::Usage, "unknown --plot-column '" + rc.plot_column +
                                          "' (sigma|rel_dvol|rel_dheight|rel_dwaist)");

    std::vector<SweepRow> all;
    std::vector<Series> chart;
    for (int n : sweep_gonalities(rc)) {
        std::vector<SweepRow> rows = sweep_snap(n, lo, hi, st);
        if (!rc.plot.empty()) {
            Series s;
            s.label = "n=" + std::to_string(n);
            s.color = series_color(n);
            if (rc.plot_column == "sigma")
                s.points = series_points_sigma(rows);
            else
                s.points = series_points_rel(rows, rc.plot_column.substr(5)); // strip rel_d
            chart.push_back(std::move(s));
        }
        if (!rc.out.empty()) {
            try {
                const std::size_t i = argmax_sigma(rows);
                out << "n=" << n << ": max sigma = " << g(rows[i].sigma) << " at q1 = "
                    << g(rows[i].q1) << "\n";
            } catch (const Error &) {
                out << "n=" << n << ": no valid rows\n";
            }
        }
        all.insert(all.end(), rows.begin(), rows.end());
    }
    const std::string csv = snap_table_csv(all);
    if (rc.out.empty())
        out << csv;
    else {
        write_text_file(rc.out, csv);
        out << "wrote " << rc.out << "\n";
    }
    if (!rc.plot.empty()) {
        write_text_file(rc.plot,
                        plot_svg(chart, "q1", rc.plot_column, rc.window_lo, rc.window_hi));
        out << "wrote " << rc.plot << "\n";
    }
}

void run_sweep_shake(const RunConfig &rc, std::ostream &out) {
    const double lo = rc.q1_min >= 0 ? rc.q1_min : 0.25;
    const double hi = rc.q1_max >= 0 ? rc.q1_max : 0.31;
    const double st = rc.step > 0 ? rc.step : 0.001;
    if (!(hi > lo) || !(st > 0))
        throw Error(ErrorCode::Usage, "need --q1-max > --q1-min and --step > 0");
    const FlexNormalization norm = parse_norm(rc.normalization);

    std::vector<ShakeRow> all;
    std::vector<Series> chart;
    for (int n : sweep_gonalities(rc)) {
        std::vector<ShakeRow> rows = sweep_shake(n, lo, hi, st, norm);
        if (!rc.plot.empty())
            chart.push_back({"n=" + std::to_string(n), series_color(n),
                             series_points_kappa(rows)});
        if (!rc.out.empty()) {
            try {
                const std::size_t i = argmax_kappa(rows);
                out << "n=" << n << ": max kappa = " << g(rows[i].kappa) << " at q1 = "
                    << g(rows[i].q1) << "\n";
            } catch (const Error &) {
                out << "n=" << n << ": no valid rows\n";
            }
        }
        all.insert(all.end(), rows.begin(), rows.end());
    }
    const std::string csv = shake_table_csv(all);
    if (rc.out.empty())
        out << csv;
    else {
        write_text_file(rc.out, csv);
        out << "wrote " << rc.out << "\n";
    }
    if (!rc.plot.empty()) {
        write_text_file(rc.plot, plot_svg(chart, "q1", "kappa", rc.window_lo, rc.window_hi));
        out << "wrote " << rc.plot << "\n";
    }
}

void run_export_obj(const RunConfig &rc, std::ostream &out) {
    const int n = single_n(rc);
    if (rc.out.empty())
        throw Error(ErrorCode::Usage, "export-obj needs --out");
    const double q2 = resolve_q2(rc, n, AutoQ2::Extremal);
    const DesignSpec spec = make_spec(rc, n, q2);
    const RealizationSet set = realize(spec);

    int pick = rc.item;
    if (pick < 0) {
        double best = -1;
        for (std::size_t k = 0; k < set.items.size(); ++k) {
            const RealizedItem &it = set.items[k];
            if (it.degenerate)
                continue;
            if (std::abs(it.real.H) > best) {
                best = std::abs(it.real.H);
                pick = int(k);
            }
        }
        if (pick < 0)
            pick = 0; // every realization is degenerate; export the first anyway
    }
    if (pick >= int(set.items.size()))
        throw Error(ErrorCode::Usage, "--item out of range: design has " +
                                          std::to_string(set.items.size()) + " realizations");
    const RealizedItem &it = set.items[pick];
    const Mesh mesh = build_mesh(it.real);
    const double eps = rc.eps_contact > 0 ? rc.eps_contact : kIntersectEps;
    const auto contacts = self_intersections(mesh, eps);
    int crossings = 0, touching = 0;
    for (const auto &ct : contacts)
        (ct.touching ? touching : crossings) += 1;

    write_obj(rc.out, mesh,
              "sandglass " + std::string(kVersion) + " export-obj " + spec_params(spec) +
                  " item=" + std::to_string(pick) + " " + state_params(it.real));
    out << "wrote " << rc.out << "\n"
        << "item = " << pick << "\n"
        << "H = " << g(it.real.H) << "\n"
        << "h = " << g(it.real.h) << "\n"
        << "r = " << g(it.real.r) << "\n"
        << "residual = " << g(it.residual) << "\n"
        << "crossings = " << crossings << "\n"
        << "touching = " << touching << "\n";
}

void run_export_crease(const RunConfig &rc, std::ostream &out) {
    const int n = single_n(rc);
    if (rc.out.empty())
        throw Error(ErrorCode::Usage, "export-crease needs --out");

    Realization ref;
    if (rc.reference == "open" || rc.reference == "closed") {
        const SnapResult res = snap_pair(n, rc.q1);
        ref = rc.reference == "open" ? res.open : res.closed;
    } else if (rc.reference == "shaky") {
        const double q2 = rc.q2 == "auto" ? solve_shaky_q2(n, rc.q1)
                                          : parse_num(rc.q2, "--q2");
        const DesignSpec spec = DesignSpec::sandglass_origami(n, rc.q1, q2);
        const RealizationSet set = realize(spec);
        // the coalesced realization when the design sits on the flexible
        // family, otherwise the widest non-degenerate opening
        const RealizedItem *best = nullptr;
        for (const auto &item : set.items)
            if (item.double_root && !item.degenerate)
                if (!best || item.residual < best->residual)
                    best = &item;
        if (!best)
            for (const auto &item : set.items)
                if (!item.degenerate)
                    if (!best || std::abs(item.real.H) > std::abs(best->real.H))
                        best = &item;
        if (!best)
            throw Error(ErrorCode::NoSolution, "no usable realization for the crease reference");
        ref = best->real;
    } else {
        throw Error(ErrorCode::Usage,
                    "unknown --reference '" + rc.reference + "' (use shaky|open|closed)");
    }

    write_text_file(rc.out, crease_pattern_svg(ref));
    out << "wrote " << rc.out << "\n"
        << "reference = " << rc.reference << "\n"
        << "q2 = " << g(ref.spec.q2) << "\n"
        << "q3 = " << g(ref.spec.q3) << "\n"
        << "H = " << g(ref.H) << "\n"
        << "h = " << g(ref.h) << "\n"
        << "r = " << g(ref.r) << "\n";
}

void run_animate(const RunConfig &rc, std::ostream &out) {
    const int n = single_n(rc);
    const SnapResult res = snap_pair(n, rc.q1);
    const std::vector<Mesh> meshes = animate(res, rc.frames);
    const std::string prefix = rc.out.empty() ? "snap-anim" : rc.out;
    for (std::size_t j = 0; j < meshes.size(); ++j) {
        char name[32];
        std::snprintf(name, sizeof(name), "-%04zu.obj", j);
        std::ostringstream hdr;
        hdr << "sandglass " << kVersion << " animate " << spec_params(res.spec) << " frame=" << j
            << "/" << meshes.size();
        write_obj(prefix + name, meshes[j], hdr.str());
    }
    char last[32];
    std::snprintf(last, sizeof(last), "-%04zu.obj", meshes.size() - 1);
    out << "wrote " << meshes.size() << " frames: " << prefix << "-0000.obj .. " << prefix << last
        << "\n";
}

} // namespace

int cli_dispatch(int argc, const char *const *argv, std::ostream &out, std::ostream &err) {
    RunConfig rc;
    std::vector<double> window;

    CLI::App app{"construction and analysis of snapping and shaky sandglass structures",
                 "sandglass"};
    app.set_config("--config", "", "key = value file; command-line flags override its entries");
    app.allow_config_extras(CLI::config_extras_mode::error);
    app.require_subcommand(1);

    app.add_option("--n", rc.ns, "plate gonality, >= 3 (sweeps accept several values)")
        ->check(CLI::Range(3, 4096));
    app.add_option("--q1", rc.q1, "squared length of the plate-adjacent belt edges")
        ->capture_default_str();
    app.add_option("--q2", rc.q2,
                   "squared length of the slant belt edges, or 'auto' (snapping commands "
                   "solve the coalescence condition, shaky commands the flexibility condition)")
        ->capture_default_str();
    app.add_option("--q3", rc.q3, "squared length of the waist zig-zag edges, or 'origami'")
        ->capture_default_str();
    app.add_option("--q1-min", rc.q1_min, "sweep lower bound, exclusive");
    app.add_option("--q1-max", rc.q1_max, "sweep upper bound, inclusive");
    app.add_option("--step", rc.step, "sweep grid step");
    app.add_option("--out", rc.out, "output file, or prefix for mesh triples and frames");
    app.add_option("--plot", rc.plot, "also write an SVG line chart to this path");
    app.add_option("--plot-column", rc.plot_column,
                   "sweep-snap chart column: sigma|rel_dvol|rel_dheight|rel_dwaist")
        ->capture_default_str();
    app.add_option("--window", window, "chart x window: LO HI")->expected(2);
    app.add_option("--reference", rc.reference,
                   "fold-direction reference state for export-crease: shaky|open|closed")
        ->capture_default_str();
    app.add_option("--normalization", rc.normalization,
                   "flex scaling: mean-relative-rate|unit-cap-speed")
        ->capture_default_str();
    app.add_option("--frames", rc.frames, "animation frame count")
        ->check(CLI::Range(2, 100000))
        ->capture_default_str();
    app.add_option("--item", rc.item,
                   "realization index for export-obj (default: widest opening)");
    app.add_option("--tol-residual", rc.tol_residual,
                   "constraint-residual bound for the printed ok flags");
    app.add_option("--eps-contact", rc.eps_contact,
                   "face-contact tolerance for intersection reports");

    const auto sub = [&](const char *name, const char *desc) {
        CLI::App *s = app.add_subcommand(name, desc);
        s->fallthrough();
        return s;
    };
    CLI::App *s_realize = sub("realize", "enumerate the symmetric realizations of a design");
    CLI::App *s_origami = sub("origami", "third squared edge length closing the development");
    CLI::App *s_shaky = sub("shaky", "solve and analyze the flexible design at a given q1");
    CLI::App *s_snap = sub("snap", "solve the snapping design at q1; writes open/closed/saddle "
                                   "meshes");
    CLI::App *s_sweep_snap = sub("sweep-snap", "snapping sweep over q1; CSV and optional chart");
    CLI::App *s_sweep_shake = sub("sweep-shake", "shaky-family sweep over q1; CSV and optional "
                                                 "chart");
    CLI::App *s_export_obj = sub("export-obj", "write one realization as an OBJ mesh");
    CLI::App *s_export_crease = sub("export-crease", "write the fold layout as an SVG");
    CLI::App *s_animate = sub("animate", "write the snap-through motion as OBJ frames");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? 0 : 2;
    }

    if (rc.ns.empty())
        rc.ns.push_back(3);
    if (window.size() == 2) {
        rc.window_lo = window[0];
        rc.window_hi = window[1];
    }

    try {
        if (app.got_subcommand(s_realize)) {
            rc.subcommand = "realize";
            run_realize(rc, out);
        } else if (app.got_subcommand(s_origami)) {
            rc.subcommand = "origami";
            run_origami(rc, out);
        } else if (app.got_subcommand(s_shaky)) {
            rc.subcommand = "shaky";
            run_shaky(rc, out);
        } else if (app.got_subcommand(s_snap)) {
            rc.subcommand = "snap";
            run_snap(rc, out);
        } else if (app.got_subcommand(s_sweep_snap)) {
            rc.subcommand = "sweep-snap";
            run_sweep_snap(rc, out);
        } else if (app.got_subcommand(s_sweep_shake)) {
            rc.subcommand = "sweep-shake";
            run_sweep_shake(rc, out);
        } else if (app.got_subcommand(s_export_obj)) {
            rc.subcommand = "export-obj";
            run_export_obj(rc, out);
        } else if (app.got_subcommand(s_export_crease)) {
            rc.subcommand = "export-crease";
            run_export_crease(rc, out);
        } else if (app.got_subcommand(s_animate)) {
            rc.subcommand = "animate";
            run_animate(rc, out);
        }
    } catch (const Error &e) {
        err << "sandglass: " << error_code_name(e.code()) << ": " << e.what() << "\n";
        if (e.code() == ErrorCode::Usage)
            err << "usage: sandglass <subcommand> [options]; see 'sandglass --help'\n";
        return e.code() == ErrorCode::Usage ? 2 : 1;
    } catch (const std::exception &e) {
        err << "sandglass: " << e.what() << "\n";
        return 1;
    }
    return 0;
}

int cli_dispatch(const std::vector<std::string> &args, std::ostream &out, std::ostream &err) {
    std::vector<const char *> argv;
    argv.reserve(args.size());
    for (const auto &a : args)
        argv.push_back(a.c_str());
    return cli_dispatch(int(argv.size()), argv.data(), out, err);
}

} // namespace sandglass
