#pragma once
// Parameter sweeps over q1 for fixed gonality n: the snapping sweep solves
// the extremal-coalescence point and measures the barrier between the two
// stable states, the shaky sweep tracks the flexible family and its
// shakeability. Results go into flat tables that serialize to CSV and into
// simple SVG line plots.

#include <sandglass/energy.hpp>
#include <sandglass/shake.hpp>

#include <string>
#include <vector>

namespace sandglass {

// One q1 sample of the snapping sweep. Numeric fields of failed rows hold
// quiet NaNs; `failure` is "OK" on success, otherwise one of
// NO_EXTREMAL_Q2, NO_REALIZATION, SELF_INTERSECTING, NO_SADDLE,
// SADDLE_NOT_SHAKY.
struct SweepRow {
    int n = 0;
    double q1 = 0, q2 = 0, q3 = 0;
    double open_H = 0, open_h = 0, open_r = 0;
    double closed_H = 0, closed_h = 0, closed_r = 0;
    double sigma = 0;
    double saddle_S1 = 0, saddle_S2 = 0, saddle_S3 = 0;
    double v_open = 0, v_closed = 0;
    double rel_dvol = 0, rel_dheight = 0, rel_dwaist = 0;
    bool open_free = false, closed_coplanar = false, saddle_shaky = false;
    std::string failure;
};

// One q1 sample of the shaky sweep. Failure codes here are
// NO_SHAKY_Q2, NO_REALIZATION, ZERO_FLEX.
struct ShakeRow {
    int n = 0;
    double q1 = 0, q2 = 0, q3 = 0;
    double H = 0, h = 0, r = 0;
    double u = 0, v = 0, z = 0;
    double kappa = 0;
    std::string normalization;
    std::string failure;
};

// Samples q1 = q1_min + k*step for k = 1..floor((q1_max - q1_min)/step),
// i.e. the interval is open at q1_min and closed at q1_max when it lands on
// the grid. Rows are solved in parallel (SANDGLASS_THREADS overrides the
// worker count) and returned in grid order.
std::vector<SweepRow> sweep_snap(int n, double q1_min = 0.25, double q1_max = 5.0,
                                 double step = 0.01);
std::vector<ShakeRow> sweep_shake(int n, double q1_min = 0.25, double q1_max = 0.31,
                                  double step = 0.001,
                                  FlexNormalization norm = FlexNormalization::MeanRelativeRate);

// Index of the successful row maximizing the named quantity; ties pick the
// smaller q1. Throws EmptyTable when no row qualifies.
std::size_t argmax_sigma(const std::vector<SweepRow> &rows);
std::size_t argmax_kappa(const std::vector<ShakeRow> &rows);

// CSV with a "# sandglass <version> <params>" comment line, a header row,
// then one line per row; doubles at full precision, NaN as "nan", bools 1/0.
std::string snap_table_csv(const std::vector<SweepRow> &rows);
std::string shake_table_csv(const std::vector<ShakeRow> &rows);

// A polyline series for plot_svg. NaN y values break the line.
struct Series {
    std::string label;
    std::string color;
    std::vector<std::pair<double, double>> points;
};

// Default per-n line color, n = 3,4,5,6,...
std::string series_color(int n);

// Axis-fitted multi-series line plot. Tick positions are chosen from the
// 1/2/5 decades and each tick carries its value in a data-value attribute.
// When x_min < x_max the x axis is windowed to that range and points outside
// are dropped.
std::string plot_svg(const std::vector<Series> &series, const std::string &x_label,
                     const std::string &y_label, double x_min = 0, double x_max = -1);

// Column extraction helpers for plotting; NaN for failed rows.
std::vector<std::pair<double, double>> series_points_sigma(const std::vector<SweepRow> &rows);
std::vector<std::pair<double, double>> series_points_kappa(const std::vector<ShakeRow> &rows);
std::vector<std::pair<double, double>>
series_points_rel(const std::vector<SweepRow> &rows, const std::string &which);

} // namespace sandglass
