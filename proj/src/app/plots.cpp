#include "lohe/app/plots.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>

#include "lohe/exceptions.hpp"
#include "lohe/io.hpp"

namespace lohe::app {

namespace {

constexpr double kLeft = 80, kRight = 30, kTop = 50, kBottom = 60;
constexpr std::size_t kMaxPointsPerSeries = 1000;
constexpr const char* kPalette[] = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b",
                                    "#e377c2", "#7f7f7f", "#bcbd22", "#17becf", "#393b79", "#637939"};

std::string fmt(double v, int digits = 2) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", digits, v);
    return buf;
}

std::string tick_label(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.3g", v);
    return buf;
}

std::string escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        switch (c) {
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '&': out += "&amp;"; break;
            default: out += c;
        }
    }
    return out;
}

struct Range {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();

    void add(double v) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    void pad() {
        if (hi - lo <= 0.0) {
            const double d = std::max(std::abs(lo) * 0.1, 1e-12);
            lo -= d;
            hi += d;
        }
    }
};

}  // namespace

std::string render_svg(const PlotSpec& spec) {
    bool any = false;
    bool all_positive = true;
    for (const auto& s : spec.series) {
        if (s.x.size() != s.y.size()) throw DimensionMismatch("series '" + s.label + "' has mismatched x/y");
        any = any || !s.x.empty();
        for (double y : s.y) all_positive = all_positive && y > 0.0;
    }
    if (!any) throw EmptySeries("plot '" + spec.title + "' has no data");
    const bool log_y = spec.log_y && all_positive;
    auto ty = [&](double y) { return log_y ? std::log10(y) : y; };

    Range xr, yr;
    for (const auto& s : spec.series) {
        for (std::size_t p = 0; p < s.x.size(); ++p) {
            xr.add(s.x[p]);
            yr.add(ty(s.y[p]));
        }
    }
    if (spec.unit_circle) {
        xr.add(-1.0), xr.add(1.0), yr.add(-1.0), yr.add(1.0);
    }
    xr.pad();
    yr.pad();

    const double w = kCanvasWidth - kLeft - kRight;
    const double h = kCanvasHeight - kTop - kBottom;
    double sx = w / (xr.hi - xr.lo), sy = h / (yr.hi - yr.lo);
    double x0 = kLeft, y0 = kTop;
    if (spec.equal_axes) {
        const double s = std::min(sx, sy);
        x0 += (w - s * (xr.hi - xr.lo)) / 2.0;
        y0 += (h - s * (yr.hi - yr.lo)) / 2.0;
        sx = sy = s;
    }
    auto px = [&](double x) { return x0 + (x - xr.lo) * sx; };
    auto py = [&](double y) { return y0 + (yr.hi - y) * sy; };

    std::ostringstream os;
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kCanvasWidth << "\" height=\"" << kCanvasHeight
       << "\" viewBox=\"0 0 " << kCanvasWidth << ' ' << kCanvasHeight << "\">\n";
    os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    os << "<text x=\"" << kCanvasWidth / 2 << "\" y=\"28\" text-anchor=\"middle\" font-size=\"18\">"
       << escape(spec.title) << "</text>\n";
    os << "<rect x=\"" << fmt(kLeft) << "\" y=\"" << fmt(kTop) << "\" width=\"" << fmt(w) << "\" height=\""
       << fmt(h) << "\" fill=\"none\" stroke=\"black\"/>\n";

    // ticks
    for (int t = 0; t <= 5; ++t) {
        const double xv = xr.lo + (xr.hi - xr.lo) * t / 5.0;
        const double yv = yr.lo + (yr.hi - yr.lo) * t / 5.0;
        os << "<text x=\"" << fmt(px(xv)) << "\" y=\"" << fmt(kCanvasHeight - kBottom + 20)
           << "\" text-anchor=\"middle\" font-size=\"12\">" << tick_label(xv) << "</text>\n";
        os << "<text x=\"" << fmt(kLeft - 8) << "\" y=\"" << fmt(py(yv) + 4)
           << "\" text-anchor=\"end\" font-size=\"12\">" << (log_y ? "1e" + tick_label(yv) : tick_label(yv))
           << "</text>\n";
    }
    os << "<text x=\"" << kCanvasWidth / 2 << "\" y=\"" << kCanvasHeight - 15
       << "\" text-anchor=\"middle\" font-size=\"14\">" << escape(spec.x_label) << "</text>\n";
    os << "<text x=\"18\" y=\"" << kCanvasHeight / 2 << "\" text-anchor=\"middle\" font-size=\"14\" "
       << "transform=\"rotate(-90 18 " << kCanvasHeight / 2 << ")\">" << escape(spec.y_label)
       << (log_y ? " (log scale)" : "") << "</text>\n";
    if (spec.log_y && !log_y) {
        os << "<text x=\"" << fmt(kLeft + 10) << "\" y=\"" << fmt(kTop + 18)
           << "\" font-size=\"12\" fill=\"#b00\">warning: non-positive values, linear scale shown</text>\n";
    }
    if (spec.unit_circle) {
        os << "<ellipse cx=\"" << fmt(px(0.0)) << "\" cy=\"" << fmt(py(0.0)) << "\" rx=\"" << fmt(sx)
           << "\" ry=\"" << fmt(sy) << "\" fill=\"none\" stroke=\"#aaa\" stroke-dasharray=\"4 4\"/>\n";
    }

    for (std::size_t k = 0; k < spec.series.size(); ++k) {
        const auto& s = spec.series[k];
        if (s.x.empty()) continue;
        const std::size_t stride = std::max<std::size_t>(1, (s.x.size() + kMaxPointsPerSeries - 1) / kMaxPointsPerSeries);
        const char* color = kPalette[k % std::size(kPalette)];
        os << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.2\" points=\"";
        for (std::size_t p = 0; p < s.x.size(); p += stride) {
            os << fmt(px(s.x[p])) << ',' << fmt(py(ty(s.y[p]))) << ' ';
        }
        const std::size_t last = s.x.size() - 1;
        if (last % stride != 0) os << fmt(px(s.x[last])) << ',' << fmt(py(ty(s.y[last])));
        os << "\"/>\n";
    }

    if (spec.series.size() <= 12) {
        for (std::size_t k = 0; k < spec.series.size(); ++k) {
            const double ly = kTop + 16 + 16 * static_cast<double>(k);
            const double lx = kCanvasWidth - kRight - 150;
            os << "<line x1=\"" << fmt(lx) << "\" y1=\"" << fmt(ly) << "\" x2=\"" << fmt(lx + 20) << "\" y2=\""
               << fmt(ly) << "\" stroke=\"" << kPalette[k % std::size(kPalette)] << "\" stroke-width=\"2\"/>\n";
            os << "<text x=\"" << fmt(lx + 26) << "\" y=\"" << fmt(ly + 4) << "\" font-size=\"12\">"
               << escape(spec.series[k].label) << "</text>\n";
        }
    }
    os << "</svg>\n";
    return os.str();
}

namespace {

Series read_two_column(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw ParseError(path, 0, "cannot open");
    std::string line;
    std::getline(f, line);
    Series s;
    s.label = line.substr(line.find(',') + 1);
    while (std::getline(f, line)) {
        if (line.empty()) continue;
        const auto comma = line.find(',');
        s.x.push_back(std::stod(line.substr(0, comma)));
        s.y.push_back(std::stod(line.substr(comma + 1)));
    }
    return s;
}

void write_file(const std::string& path, const std::string& body) {
    std::ofstream out(path, std::ios::binary);
    out << body;
    if (!out) throw Error("cannot write " + path);
}

}  // namespace

std::vector<std::string> emit_plots(const std::string& run_dir) {
    namespace fs = std::filesystem;
    std::vector<std::string> written;

    PlotSpec vplot{"Total error V(t)", "t", "V", {read_two_column((fs::path(run_dir) / "total_error.csv").string())},
                   true};
    const std::string vpath = (fs::path(run_dir) / "total_error.svg").string();
    write_file(vpath, render_svg(vplot));
    written.push_back(vpath);

    std::ifstream sf(fs::path(run_dir) / "states.csv");
    if (!sf) throw ParseError(run_dir + "/states.csv", 0, "cannot open");
    const Trajectory traj = io::read_states_csv(sf, run_dir + "/states.csv");
    if (traj.size() == 0) throw EmptySeries("states.csv has no samples");
    const Index m = traj.states.front().m(), n = traj.states.front().n();

    PlotSpec coords{"Coordinate time responses", "t", "r_i", {}};
    for (Index i = 0; i < m; ++i) {
        for (Index c = 0; c < n; ++c) {
            Series s{"r_" + std::to_string(i + 1) + "_" + std::to_string(c + 1), traj.times, {}};
            for (const auto& st : traj.states) s.y.push_back(st.matrix()(i, c));
            coords.series.push_back(std::move(s));
        }
    }
    const std::string cpath = (fs::path(run_dir) / "coordinates.svg").string();
    write_file(cpath, render_svg(coords));
    written.push_back(cpath);

    if (n == 3) {
        PlotSpec sphere{"Trajectories on the sphere (x-y projection)", "x", "y", {}, false, true, true};
        for (Index i = 0; i < m; ++i) {
            Series s{"oscillator " + std::to_string(i + 1), {}, {}};
            for (const auto& st : traj.states) {
                s.x.push_back(st.matrix()(i, 0));
                s.y.push_back(st.matrix()(i, 1));
            }
            sphere.series.push_back(std::move(s));
        }
        const std::string spath = (fs::path(run_dir) / "sphere_xy.svg").string();
        write_file(spath, render_svg(sphere));
        written.push_back(spath);
    }
    return written;
}

}  // namespace lohe::app
