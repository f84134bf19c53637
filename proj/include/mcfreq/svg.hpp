#ifndef MCFREQ_SVG_HPP
#define MCFREQ_SVG_HPP

#include <filesystem>
#include <string>
#include <vector>

namespace mcfreq::svg {

struct Series {
    std::vector<double> x;
    std::vector<double> y;
    std::string label;
    std::string color = "#1f6fb2";
    bool line = true;
    bool markers = false;
};

struct PlotSpec {
    std::string title;
    std::string x_label;
    std::string y_label;
    bool log_x = false;
    bool log_y = false;
    int width = 840;
    int height = 560;
};

/// Static line/marker plot. Non-positive samples are dropped on log axes.
void write_plot(const std::filesystem::path& path, const PlotSpec& spec,
                const std::vector<Series>& series);

}  // namespace mcfreq::svg

#endif
