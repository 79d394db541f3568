#include <doctest.h>

#include <sandglass/develop.hpp>
#include <sandglass/error.hpp>
#include <sandglass/sweep.hpp>

#include "oracles.hpp"

#include <cmath>
#include <cstdlib>
#include <map>
#include <string>
#include <vector>

using namespace sandglass;

namespace {

std::vector<std::string> split_lines(const std::string &text) {
    std::vector<std::string> lines;
    std::size_t pos = 0;
    while (pos < text.size()) {
        std::size_t nl = text.find('\n', pos);
        if (nl == std::string::npos)
            nl = text.size();
        lines.push_back(text.substr(pos, nl - pos));
        pos = nl + 1;
    }
    return lines;
}

std::vector<std::string> split_fields(const std::string &line) {
    std::vector<std::string> fields;
    std::size_t pos = 0;
    while (true) {
        std::size_t comma = line.find(',', pos);
        if (comma == std::string::npos) {
            fields.push_back(line.substr(pos));
            break;
        }
        fields.push_back(line.substr(pos, comma - pos));
        pos = comma + 1;
    }
    return fields;
}

int count_substr(const std::string &hay, const std::string &needle) {
    int k = 0;
    for (std::size_t p = hay.find(needle); p != std::string::npos;
         p = hay.find(needle, p + needle.size()))
        ++k;
    return k;
}

} // namespace

TEST_CASE("snapping sweep over the default grid") {
    const auto rows = sweep_snap(3);
    REQUIRE(rows.size() == 475);
    CHECK(std::abs(rows.front().q1 - 0.26) < 1e-12);
    CHECK(std::abs(rows.back().q1 - 5.0) < 1e-12);

    std::map<std::string, int> census;
    for (const auto &r : rows)
        census[r.failure]++;
    CHECK(census["OK"] == 466);
    CHECK(census["NO_REALIZATION"] == 8);
    CHECK(census["NO_SADDLE"] == 1);
    // the failures are all at the low end of the band: below the first value
    // admitting an extremal realization the solve stops early, and right at
    // the edge a realization exists but no saddle separates the two states
    for (int i = 0; i < 8; ++i)
        CHECK(rows[i].failure == "NO_REALIZATION");
    CHECK(rows[8].failure == "NO_SADDLE");
    CHECK(std::abs(rows[8].q1 - 0.34) < 1e-12);
    CHECK(rows[9].failure == "OK");

    const std::size_t best = argmax_sigma(rows);
    CHECK(std::abs(rows[best].q1 - 0.75) < 1e-12);
    CHECK(std::abs(rows[best].sigma - 4.0232458130908972e-05) < 1e-13);

    // pinned contents of the peak row
    const SweepRow &w = rows[best];
    CHECK(w.n == 3);
    CHECK(std::abs(w.q2 - 0.042893218813452511) < 1e-12);
    CHECK(std::abs(w.q3 - 0.5) < 1e-12);
    CHECK(std::abs(w.open_H - 0.43243573734475632) < 1e-12);
    CHECK(std::abs(w.open_h - -0.22894190461396788) < 1e-12);
    CHECK(std::abs(w.open_r - 0.53883431335329357) < 1e-12);
    CHECK(std::abs(w.closed_H - 0.40824829046386296) < 1e-12);
    CHECK(std::abs(w.closed_h - -0.28867513459481292) < 1e-12);
    CHECK(std::abs(w.closed_r - 0.40824829046386296) < 1e-12);
    CHECK(std::abs(w.saddle_S1 - 0.75905718038326153) < 1e-12);
    CHECK(std::abs(w.saddle_S2 - 0.04189941158850867) < 1e-12);
    CHECK(std::abs(w.saddle_S3 - 0.48686541757416335) < 1e-12);
    CHECK(std::abs(w.v_open - 0.51803940393425607) < 1e-12);
    CHECK(std::abs(w.v_closed - 0.36785113019775789) < 1e-12);
    CHECK(w.open_free);
    CHECK(w.closed_coplanar);
    CHECK(w.saddle_shaky);
}

TEST_CASE("sweep rows are internally consistent") {
    const auto rows = sweep_snap(3, 0.70, 0.80, 0.01);
    REQUIRE(rows.size() == 10);
    CHECK(std::abs(rows.front().q1 - 0.71) < 1e-12);
    CHECK(std::abs(rows.back().q1 - 0.80) < 1e-12);

    const double R = 1.0 / (2.0 * std::sin(M_PI / 3.0));
    for (const auto &r : rows) {
        REQUIRE(r.failure == "OK");
        // q3 follows from (q1, q2) through the developability constraint
        CHECK(std::abs(r.q3 - origami_q3(r.q1, r.q2)) < 1e-10);
        // the relative travel measures are plain recombinations of the row
        CHECK(std::abs(r.rel_dvol - (r.v_open - r.v_closed) / r.v_closed) < 1e-14);
        CHECK(std::abs(r.rel_dheight - 2.0 * (r.open_H - r.closed_H) / R) < 1e-14);
        CHECK(std::abs(r.rel_dwaist - (std::abs(r.open_r) - std::abs(r.closed_r)) / R) < 1e-14);
        CHECK(r.v_closed > 0);
        CHECK(r.v_open > r.v_closed);
        CHECK(r.sigma > 0);
        // both rest states realize the same edge-length classes
        const auto So = oracle::class_lengths_sq(3, r.open_H, r.open_h, r.open_r);
        const auto Sc = oracle::class_lengths_sq(3, r.closed_H, r.closed_h, r.closed_r);
        for (int k = 0; k < 3; ++k) {
            const double Q = k == 0 ? r.q1 : k == 1 ? r.q2 : r.q3;
            CHECK(std::abs(So[k] - Q) < 1e-9);
            CHECK(std::abs(Sc[k] - Q) < 1e-9);
        }
    }

    // a window around the peak picks the same maximizer as the full grid
    const std::size_t best = argmax_sigma(rows);
    CHECK(std::abs(rows[best].q1 - 0.75) < 1e-12);
    CHECK(std::abs(rows[best].sigma - 4.0232458130908972e-05) < 1e-13);
}

TEST_CASE("sweep grid bounds and failure rows") {
    // the grid is open at the lower end: the first sample sits one step in
    const auto win = sweep_snap(3, 0.70, 0.80, 0.05);
    REQUIRE(win.size() == 2);
    CHECK(std::abs(win[0].q1 - 0.75) < 1e-12);
    CHECK(std::abs(win[1].q1 - 0.80) < 1e-12);

    CHECK_THROWS_AS((void)sweep_snap(3, 0.5, 0.5, 0.01), Error);
    CHECK_THROWS_AS((void)sweep_snap(3, 0.5, 0.6, 0.0), Error);
    CHECK_THROWS_AS((void)sweep_shake(3, 0.31, 0.25, 0.001), Error);

    // below the realizable band every row fails and the numeric payload is NaN
    const auto bad = sweep_snap(3, 0.25, 0.30, 0.01);
    REQUIRE(bad.size() == 5);
    for (const auto &r : bad) {
        CHECK(r.failure == "NO_REALIZATION");
        CHECK(std::isnan(r.q2));
        CHECK(std::isnan(r.q3));
        CHECK(std::isnan(r.open_H));
        CHECK(std::isnan(r.closed_r));
        CHECK(std::isnan(r.sigma));
        CHECK(std::isnan(r.saddle_S2));
        CHECK(std::isnan(r.v_open));
        CHECK(std::isnan(r.rel_dwaist));
        CHECK(!r.open_free);
        CHECK(!r.closed_coplanar);
        CHECK(!r.saddle_shaky);
        CHECK(r.n == 3);
        CHECK(!std::isnan(r.q1));
    }
    CHECK_THROWS_AS((void)argmax_sigma(bad), Error);
    CHECK_THROWS_AS((void)argmax_sigma({}), Error);
    try {
        (void)argmax_sigma(bad);
        FAIL("expected an error");
    } catch (const Error &e) {
        CHECK(e.code() == ErrorCode::EmptyTable);
    }
}

TEST_CASE("snap table serialization") {
    const auto rows = sweep_snap(3, 0.70, 0.80, 0.01);
    const auto csv = snap_table_csv(rows);
    const auto lines = split_lines(csv);
    REQUIRE(lines.size() == 2 + rows.size());
    CHECK(lines[0] == "# sandglass 0.1.0 snap rows=10 n=3 q1=0.70999999999999996..0.79999999999999993");
    CHECK(lines[1] ==
          "n,q1,q2,q3,open_H,open_h,open_r,closed_H,closed_h,closed_r,sigma,"
          "saddle_S1,saddle_S2,saddle_S3,v_open,v_closed,rel_dvol,rel_dheight,"
          "rel_dwaist,open_free,closed_coplanar,saddle_shaky,failure");

    // full-precision doubles round-trip exactly; bools render as 1/0
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const auto f = split_fields(lines[2 + i]);
        REQUIRE(f.size() == 23);
        const SweepRow &r = rows[i];
        CHECK(std::stoi(f[0]) == r.n);
        CHECK(std::strtod(f[1].c_str(), nullptr) == r.q1);
        CHECK(std::strtod(f[2].c_str(), nullptr) == r.q2);
        CHECK(std::strtod(f[3].c_str(), nullptr) == r.q3);
        CHECK(std::strtod(f[4].c_str(), nullptr) == r.open_H);
        CHECK(std::strtod(f[9].c_str(), nullptr) == r.closed_r);
        CHECK(std::strtod(f[10].c_str(), nullptr) == r.sigma);
        CHECK(std::strtod(f[15].c_str(), nullptr) == r.v_closed);
        CHECK(std::strtod(f[18].c_str(), nullptr) == r.rel_dwaist);
        CHECK(f[19] == (r.open_free ? "1" : "0"));
        CHECK(f[20] == (r.closed_coplanar ? "1" : "0"));
        CHECK(f[21] == (r.saddle_shaky ? "1" : "0"));
        CHECK(f[22] == "OK");
    }

    // failed rows write nan fields and their failure code
    const auto bad = sweep_snap(3, 0.25, 0.27, 0.01);
    const auto bad_lines = split_lines(snap_table_csv(bad));
    REQUIRE(bad_lines.size() == 4);
    for (std::size_t i = 2; i < bad_lines.size(); ++i) {
        const auto f = split_fields(bad_lines[i]);
        REQUIRE(f.size() == 23);
        CHECK(f[2] == "nan");
        CHECK(f[10] == "nan");
        CHECK(f[19] == "0");
        CHECK(f[22] == "NO_REALIZATION");
    }

    // an empty table still carries the comment and the column header
    const auto empty_lines = split_lines(snap_table_csv({}));
    REQUIRE(empty_lines.size() == 2);
    CHECK(empty_lines[0] == "# sandglass 0.1.0 snap rows=0");
}

TEST_CASE("shaky sweep over the default band") {
    const auto rows = sweep_shake(3);
    REQUIRE(rows.size() == 60);
    CHECK(std::abs(rows.front().q1 - 0.251) < 1e-12);
    CHECK(std::abs(rows.back().q1 - 0.31) < 1e-12);
    for (const auto &r : rows) {
        REQUIRE(r.failure == "OK");
        CHECK(r.normalization == "mean-relative-rate");
        CHECK(r.kappa > 0);
        CHECK(std::abs(r.q3 - origami_q3(r.q1, r.q2)) < 1e-10);
        // the tabulated realization actually attains the length classes
        const auto S = oracle::class_lengths_sq(3, r.H, r.h, r.r);
        CHECK(std::abs(S[0] - r.q1) < 1e-8);
        CHECK(std::abs(S[1] - r.q2) < 1e-8);
        CHECK(std::abs(S[2] - r.q3) < 1e-8);
    }

    const std::size_t best = argmax_kappa(rows);
    CHECK(std::abs(rows[best].q1 - 0.261) < 1e-12);
    CHECK(std::abs(rows[best].kappa - 0.27182727902040704) < 1e-12);
    const ShakeRow &k = rows[best];
    CHECK(std::abs(k.q2 - 0.24311338924313214) < 1e-12);
    CHECK(std::abs(k.q3 - 0.40068713954462565) < 1e-12);
    CHECK(std::abs(k.H - 0.18954913510791679) < 1e-12);
    CHECK(std::abs(k.h - 0.2572354366197927) < 1e-12);
    CHECK(std::abs(k.r - 0.36879107924775528) < 1e-12);
    CHECK(std::abs(k.u - 0.38357999869019366) < 1e-12);
    CHECK(std::abs(k.v - 0.13748191496633452) < 1e-12);
    CHECK(std::abs(k.z - 0.31653718873144032) < 1e-12);
}

TEST_CASE("shaky sweep normalization variants and failures") {
    const auto mrr = sweep_shake(3, 0.260, 0.261, 0.001);
    const auto ucs = sweep_shake(3, 0.260, 0.261, 0.001, FlexNormalization::UnitCapSpeed);
    REQUIRE(mrr.size() == 1);
    REQUIRE(ucs.size() == 1);
    CHECK(mrr[0].normalization == "mean-relative-rate");
    CHECK(ucs[0].normalization == "unit-cap-speed");
    CHECK(std::abs(ucs[0].z - 1.0) < 1e-12);
    // the two scalings measure the same flex, so the fourth-power rule links them
    const double z = mrr[0].z;
    CHECK(std::abs(ucs[0].kappa - mrr[0].kappa / (z * z * z * z)) < 1e-9);
    CHECK(std::abs(ucs[0].kappa - 27.076596566729016) < 1e-7);
    // the realization itself does not depend on the normalization
    CHECK(ucs[0].H == mrr[0].H);
    CHECK(ucs[0].r == mrr[0].r);

    // past the band there is no shaky design to tabulate
    const auto bad = sweep_shake(3, 0.39, 0.40, 0.005);
    REQUIRE(bad.size() == 2);
    for (const auto &r : bad) {
        CHECK(r.failure == "NO_SHAKY_Q2");
        CHECK(std::isnan(r.q2));
        CHECK(std::isnan(r.kappa));
        CHECK(std::isnan(r.u));
        CHECK(r.normalization == "mean-relative-rate");
    }
    CHECK_THROWS_AS((void)argmax_kappa(bad), Error);
}

TEST_CASE("shake table serialization") {
    const auto rows = sweep_shake(3);
    const auto csv = shake_table_csv(rows);
    const auto lines = split_lines(csv);
    REQUIRE(lines.size() == 2 + rows.size());
    CHECK(lines[0] == "# sandglass 0.1.0 shake rows=60 n=3 q1=0.251..0.31");
    CHECK(lines[1] == "n,q1,q2,q3,H,h,r,u,v,z,kappa,normalization,failure");
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const auto f = split_fields(lines[2 + i]);
        REQUIRE(f.size() == 13);
        const ShakeRow &r = rows[i];
        CHECK(std::stoi(f[0]) == r.n);
        CHECK(std::strtod(f[1].c_str(), nullptr) == r.q1);
        CHECK(std::strtod(f[4].c_str(), nullptr) == r.H);
        CHECK(std::strtod(f[10].c_str(), nullptr) == r.kappa);
        CHECK(f[11] == "mean-relative-rate");
        CHECK(f[12] == "OK");
    }
}

TEST_CASE("sweeps are deterministic across runs and worker counts") {
    const auto base = snap_table_csv(sweep_snap(3, 0.70, 0.76, 0.01));
    CHECK(snap_table_csv(sweep_snap(3, 0.70, 0.76, 0.01)) == base);
    setenv("SANDGLASS_THREADS", "1", 1);
    const auto serial = snap_table_csv(sweep_snap(3, 0.70, 0.76, 0.01));
    setenv("SANDGLASS_THREADS", "7", 1);
    const auto odd = snap_table_csv(sweep_snap(3, 0.70, 0.76, 0.01));
    unsetenv("SANDGLASS_THREADS");
    CHECK(serial == base);
    CHECK(odd == base);
}

TEST_CASE("series extraction for plotting") {
    auto rows = sweep_snap(3, 0.32, 0.38, 0.01); // spans failing and OK rows
    REQUIRE(rows.size() == 6);
    const auto sig = series_points_sigma(rows);
    REQUIRE(sig.size() == rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        CHECK(sig[i].first == rows[i].q1);
        if (rows[i].failure == "OK")
            CHECK(sig[i].second == rows[i].sigma);
        else
            CHECK(std::isnan(sig[i].second));
    }
    bool any_ok = false, any_bad = false;
    for (const auto &r : rows)
        (r.failure == "OK" ? any_ok : any_bad) = true;
    CHECK(any_ok);
    CHECK(any_bad);

    const auto vol = series_points_rel(rows, "vol");
    const auto hgt = series_points_rel(rows, "height");
    const auto wst = series_points_rel(rows, "waist");
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (rows[i].failure != "OK")
            continue;
        CHECK(vol[i].second == rows[i].rel_dvol);
        CHECK(hgt[i].second == rows[i].rel_dheight);
        CHECK(wst[i].second == rows[i].rel_dwaist);
    }
    CHECK_THROWS_AS((void)series_points_rel(rows, "volume"), Error);

    const auto shk = sweep_shake(3, 0.26, 0.27, 0.005);
    const auto kap = series_points_kappa(shk);
    REQUIRE(kap.size() == shk.size());
    for (std::size_t i = 0; i < shk.size(); ++i) {
        CHECK(kap[i].first == shk[i].q1);
        CHECK(kap[i].second == shk[i].kappa);
    }

    CHECK(series_color(3) == "yellow");
    CHECK(series_color(4) == "green");
    CHECK(series_color(5) == "cyan");
    CHECK(series_color(6) == "magenta");
    CHECK(series_color(7) == "purple");
    CHECK(series_color(8) == "orange");
}

TEST_CASE("line plot rendering") {
    const double nan = std::numeric_limits<double>::quiet_NaN();
    Series a{"sigma n=3", series_color(3),
             {{0.0, 0.0}, {1.0, 1.0}, {2.0, 0.5}, {nan, nan}, {3.0, 1.0}, {4.0, 0.0}}};
    Series b{"lone", series_color(4), {{0.5, 0.2}}};
    const auto svg = plot_svg({a, b}, "q1", "sigma");

    CHECK(svg.rfind("<svg xmlns=\"http://www.w3.org/2000/svg\"", 0) == 0);
    CHECK(svg.find("</svg>") != std::string::npos);
    // the NaN breaks the first series into two polylines; the isolated point
    // of the second series becomes a dot
    CHECK(count_substr(svg, "<polyline class=\"series\" data-label=\"sigma n=3\"") == 2);
    CHECK(count_substr(svg, "<circle class=\"series\" data-label=\"lone\"") == 1);
    CHECK(count_substr(svg, "stroke=\"yellow\"") >= 2);
    CHECK(svg.find("fill=\"green\"") != std::string::npos);
    // axis labels and value-carrying ticks
    CHECK(svg.find(">q1</text>") != std::string::npos);
    CHECK(svg.find(">sigma</text>") != std::string::npos);
    CHECK(count_substr(svg, "class=\"tick x\" data-value=") >= 6);
    CHECK(count_substr(svg, "class=\"tick y\" data-value=") >= 6);
    // legend entries
    CHECK(svg.find(">sigma n=3</text>") != std::string::npos);
    CHECK(svg.find(">lone</text>") != std::string::npos);

    // windowing drops outside points: only the (3,1)-(4,0) run survives,
    // and the lone dot disappears
    const auto win = plot_svg({a, b}, "q1", "sigma", 2.5, 4.0);
    CHECK(count_substr(win, "<polyline class=\"series\" data-label=\"sigma n=3\"") == 1);
    CHECK(count_substr(win, "<circle class=\"series\"") == 0);

    CHECK_THROWS_AS((void)plot_svg({}, "x", "y"), Error);
    Series empty{"none", "red", {{nan, nan}, {nan, 1.0}}};
    CHECK_THROWS_AS((void)plot_svg({empty}, "x", "y"), Error);
    try {
        (void)plot_svg({empty}, "x", "y");
        FAIL("expected an error");
    } catch (const Error &e) {
        CHECK(e.code() == ErrorCode::EmptyTable);
    }
}
