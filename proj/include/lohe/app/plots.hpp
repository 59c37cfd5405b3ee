#pragma once

#include <string>
#include <vector>

namespace lohe::app {

struct Series {
    std::string label;
    std::vector<double> x;
    std::vector<double> y;
};

struct PlotSpec {
    std::string title;
    std::string x_label;
    std::string y_label;
    std::vector<Series> series;
    bool log_y = false;      // falls back to linear if any value is <= 0
    bool equal_axes = false;  // same scale on both axes (sphere projections)
    bool unit_circle = false;
};

inline constexpr int kCanvasWidth = 800;
inline constexpr int kCanvasHeight = 600;

/// Deterministic 800x600 SVG. Throws EmptySeries when there is nothing to draw.
std::string render_svg(const PlotSpec& spec);

/// Reads total_error.csv and states.csv from `run_dir` and writes
/// total_error.svg, coordinates.svg and, for n = 3, sphere_xy.svg.
/// Returns the files written.
std::vector<std::string> emit_plots(const std::string& run_dir);

}  // namespace lohe::app
