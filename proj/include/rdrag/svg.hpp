#pragma once

#include <span>
#include <string>
#include <vector>

// Minimal self-contained SVG plots: polylines on linear axes, and heatmaps.
namespace rdrag::svg {

struct Series {
    std::string label;
    std::vector<double> x;
    std::vector<double> y;
};

std::string line_plot(const std::string& title, const std::string& x_label,
                      const std::string& y_label, std::span<const Series> series);

/// Row-major values[row * cols.size() + col]; rows are drawn bottom-up.
/// NaN cells are left blank.
std::string heatmap(const std::string& title, const std::string& x_label,
                    const std::string& y_label, std::span<const double> cols,
                    std::span<const double> rows, std::span<const double> values);

}  // namespace rdrag::svg
