#pragma once

#include <Eigen/Dense>

#include "blindhd/errors.hpp"

namespace blindhd {

// Equidistant 1-D sampling of the signal domain.
struct Grid {
    Eigen::VectorXd points;  // strictly increasing positions
    double spacing = 0.0;

    static Grid uniform(double start, double end, int n);

    // Every stride-th point starting at index 0. The result shares the
    // exact floating-point positions of the parent grid.
    Grid subsample(int stride) const;

    int size() const { return static_cast<int>(points.size()); }
    double start() const { return points(0); }
    double end() const { return points(points.size() - 1); }

    // At least 2 points, |points[i+1] - points[i] - spacing| <= 1e-12.
    void validate() const;
};

} // namespace blindhd
