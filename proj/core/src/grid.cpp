#include "blindhd/grid.hpp"

#include <cmath>

namespace blindhd {

Grid Grid::uniform(double start, double end, int n) {
    if (n < 2) throw Error("Grid::uniform: need at least 2 points");
    if (!(end > start)) throw Error("Grid::uniform: end must exceed start");
    Grid g;
    g.spacing = (end - start) / static_cast<double>(n - 1);
    g.points.resize(n);
    for (int i = 0; i < n; ++i) g.points(i) = start + i * g.spacing;
    return g;
}

Grid Grid::subsample(int stride) const {
    if (stride < 1) throw Error("Grid::subsample: stride must be positive");
    const int n = size();
    const int m = (n + stride - 1) / stride;
    if (m < 2) throw Error("Grid::subsample: too few points remain");
    Grid g;
    g.spacing = spacing * stride;
    g.points.resize(m);
    for (int i = 0; i < m; ++i) g.points(i) = points(i * stride);
    return g;
}

void Grid::validate() const {
    if (size() < 2) throw Error("Grid: need at least 2 points");
    if (!(spacing > 0.0)) throw Error("Grid: spacing must be positive");
    for (int i = 0; i + 1 < size(); ++i) {
        if (std::abs(points(i + 1) - points(i) - spacing) > 1e-12)
            throw Error("Grid: points are not equidistant");
    }
}

} // namespace blindhd
