#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace blindhd::svg {

struct Series {
    Eigen::VectorXd x, y;
    std::string color = "#222222";
    double stroke_width = 1.5;
};

struct Band {
    Eigen::VectorXd x, lo, hi;
    std::string fill = "#9ecae1";
    double opacity = 0.5;
};

// Dependency-light polyline plot: frame, min/max tick labels, optional
// shaded band under the curves.
class LinePlot {
public:
    explicit LinePlot(std::string title = "") : title_(std::move(title)) {}

    void add_series(Eigen::VectorXd x, Eigen::VectorXd y,
                    std::string color = "#222222", double stroke_width = 1.5);
    void add_band(Eigen::VectorXd x, Eigen::VectorXd lo, Eigen::VectorXd hi,
                  std::string fill = "#9ecae1", double opacity = 0.5);

    std::string render() const;
    void write(const std::filesystem::path& path) const;

private:
    std::string title_;
    std::vector<Band> bands_;
    std::vector<Series> series_;
    int width_ = 720;
    int height_ = 360;
};

} // namespace blindhd::svg
