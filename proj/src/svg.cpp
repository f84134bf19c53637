#include "mcfreq/svg.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

namespace mcfreq::svg {

namespace {

struct Range {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();
    void grow(double v) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    bool ok() const { return lo < hi; }
};

double tx(double v, bool log_axis) { return log_axis ? std::log10(v) : v; }

std::string fmt(double v) {
    std::ostringstream os;
    os.precision(6);
    os << v;
    return os.str();
}

std::string tick_label(double v, bool log_axis) {
    std::ostringstream os;
    if (log_axis) {
        os << "1e" << static_cast<int>(std::lround(v));
    } else {
        os.precision(4);
        os << v;
    }
    return os.str();
}

std::vector<double> linear_ticks(double lo, double hi) {
    const double span = hi - lo;
    if (!(span > 0.0)) return {lo};
    const double raw = span / 6.0;
    const double mag = std::pow(10.0, std::floor(std::log10(raw)));
    double step = mag;
    for (double m : {1.0, 2.0, 5.0, 10.0}) {
        if (mag * m >= raw) {
            step = mag * m;
            break;
        }
    }
    std::vector<double> ticks;
    for (double v = std::ceil(lo / step) * step; v <= hi + 1e-9 * span; v += step)
        ticks.push_back(v);
    return ticks;
}

std::vector<double> log_ticks(double lo, double hi) {
    std::vector<double> ticks;
    for (double d = std::ceil(lo - 1e-9); d <= hi + 1e-9; d += 1.0) ticks.push_back(d);
    if (ticks.empty()) ticks = {lo, hi};
    return ticks;
}

}  // namespace

void write_plot(const std::filesystem::path& path, const PlotSpec& spec,
                const std::vector<Series>& series) {
    const double ml = 84, mr = 24, mt = 42, mb = 58;
    const double pw = spec.width - ml - mr;
    const double ph = spec.height - mt - mb;

    Range rx, ry;
    for (const auto& s : series) {
        for (std::size_t i = 0; i < s.x.size() && i < s.y.size(); ++i) {
            const double x = s.x[i], y = s.y[i];
            if (!std::isfinite(x) || !std::isfinite(y)) continue;
            if (spec.log_x && x <= 0.0) continue;
            if (spec.log_y && y <= 0.0) continue;
            rx.grow(tx(x, spec.log_x));
            ry.grow(tx(y, spec.log_y));
        }
    }
    if (!rx.ok()) {
        rx.lo = 0.0;
        rx.hi = 1.0;
    }
    if (!ry.ok()) {
        ry.lo = ry.lo == ry.hi ? ry.lo - 0.5 : 0.0;
        ry.hi = ry.lo + 1.0;
    }
    const double padx = 0.02 * (rx.hi - rx.lo);
    const double pady = 0.05 * (ry.hi - ry.lo);
    rx.lo -= padx;
    rx.hi += padx;
    ry.lo -= pady;
    ry.hi += pady;

    auto px = [&](double v) { return ml + (tx(v, spec.log_x) - rx.lo) / (rx.hi - rx.lo) * pw; };
    auto py = [&](double v) {
        return mt + ph - (tx(v, spec.log_y) - ry.lo) / (ry.hi - ry.lo) * ph;
    };

    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write SVG: " + path.string());
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << spec.width << "\" height=\""
        << spec.height << "\" viewBox=\"0 0 " << spec.width << " " << spec.height << "\">\n";
    out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    out << "<text x=\"" << spec.width / 2 << "\" y=\"24\" text-anchor=\"middle\" "
        << "font-family=\"sans-serif\" font-size=\"15\">" << spec.title << "</text>\n";

    // axes frame
    out << "<rect x=\"" << ml << "\" y=\"" << mt << "\" width=\"" << pw << "\" height=\"" << ph
        << "\" fill=\"none\" stroke=\"#444\"/>\n";

    const auto xticks = spec.log_x ? log_ticks(rx.lo, rx.hi) : linear_ticks(rx.lo, rx.hi);
    for (double t : xticks) {
        const double x = ml + (t - rx.lo) / (rx.hi - rx.lo) * pw;
        if (x < ml - 0.5 || x > ml + pw + 0.5) continue;
        out << "<line x1=\"" << x << "\" y1=\"" << mt << "\" x2=\"" << x << "\" y2=\"" << mt + ph
            << "\" stroke=\"#ddd\"/>\n";
        out << "<text x=\"" << x << "\" y=\"" << mt + ph + 18
            << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">"
            << tick_label(t, spec.log_x) << "</text>\n";
    }
    const auto yticks = spec.log_y ? log_ticks(ry.lo, ry.hi) : linear_ticks(ry.lo, ry.hi);
    for (double t : yticks) {
        const double y = mt + ph - (t - ry.lo) / (ry.hi - ry.lo) * ph;
        if (y < mt - 0.5 || y > mt + ph + 0.5) continue;
        out << "<line x1=\"" << ml << "\" y1=\"" << y << "\" x2=\"" << ml + pw << "\" y2=\"" << y
            << "\" stroke=\"#ddd\"/>\n";
        out << "<text x=\"" << ml - 6 << "\" y=\"" << y + 4
            << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">"
            << tick_label(t, spec.log_y) << "</text>\n";
    }
    out << "<text x=\"" << ml + pw / 2 << "\" y=\"" << spec.height - 14
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\">" << spec.x_label
        << "</text>\n";
    out << "<text x=\"20\" y=\"" << mt + ph / 2
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\" "
        << "transform=\"rotate(-90 20 " << mt + ph / 2 << ")\">" << spec.y_label << "</text>\n";

    int legend_row = 0;
    for (const auto& s : series) {
        std::ostringstream pts;
        bool open = false;
        std::ostringstream marks;
        for (std::size_t i = 0; i < s.x.size() && i < s.y.size(); ++i) {
            const double x = s.x[i], y = s.y[i];
            const bool bad = !std::isfinite(x) || !std::isfinite(y) ||
                             (spec.log_x && x <= 0.0) || (spec.log_y && y <= 0.0);
            if (bad) {
                if (open) pts << "\" fill=\"none\" stroke=\"" << s.color
                              << "\" stroke-width=\"1.4\"/>\n";
                open = false;
                continue;
            }
            if (s.line) {
                if (!open) {
                    pts << "<polyline points=\"";
                    open = true;
                }
                pts << fmt(px(x)) << ',' << fmt(py(y)) << ' ';
            }
            if (s.markers) {
                marks << "<circle cx=\"" << fmt(px(x)) << "\" cy=\"" << fmt(py(y))
                      << "\" r=\"2.4\" fill=\"" << s.color << "\"/>\n";
            }
        }
        if (open) pts << "\" fill=\"none\" stroke=\"" << s.color << "\" stroke-width=\"1.4\"/>\n";
        out << pts.str() << marks.str();
        if (!s.label.empty()) {
            const double lx = ml + pw - 170;
            const double ly = mt + 16 + 18 * legend_row++;
            out << "<line x1=\"" << lx << "\" y1=\"" << ly - 4 << "\" x2=\"" << lx + 26
                << "\" y2=\"" << ly - 4 << "\" stroke=\"" << s.color << "\" stroke-width=\"2\"/>\n";
            out << "<text x=\"" << lx + 32 << "\" y=\"" << ly
                << "\" font-family=\"sans-serif\" font-size=\"12\">" << s.label << "</text>\n";
        }
    }
    out << "</svg>\n";
}

}  // namespace mcfreq::svg
